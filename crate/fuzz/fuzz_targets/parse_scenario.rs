#![no_main]

use libfuzzer_sys::fuzz_target;
use stillwatch::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(scenario) = io::parse_scenario(text) {
        // seeds above 63 bits cannot be written
        if let Ok(written) = io::write_scenario(&scenario) {
            assert_eq!(
                io::parse_scenario(&written).expect("written file parses"),
                scenario
            );
        }
    }
});
