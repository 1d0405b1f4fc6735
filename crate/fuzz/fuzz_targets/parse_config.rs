#![no_main]

use libfuzzer_sys::fuzz_target;
use stillwatch::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(settings) = io::parse_config(text) {
        let written = io::write_config(&settings).expect("valid settings serialize");
        assert_eq!(
            io::parse_config(&written).expect("written file parses"),
            settings
        );
    }
});
