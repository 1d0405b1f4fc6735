#![no_main]

use libfuzzer_sys::fuzz_target;
use stillwatch::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = io::parse_device_log(text) {
        let again =
            io::parse_device_log(&io::write_device_log(&parsed)).expect("written file parses");
        assert_eq!(again, parsed);
    }
});
