#![no_main]

use libfuzzer_sys::fuzz_target;
use stillwatch::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = io::parse_snapshots(text) {
        let written = io::write_snapshots(&parsed);
        let again = io::parse_snapshots(&written).expect("written file parses");
        assert_eq!(io::write_snapshots(&again), written);
    }
});
