#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(report) = frobzeta::report::Report::from_json(s) {
        let again = frobzeta::report::Report::from_json(&report.to_json()).unwrap();
        assert_eq!(again.to_json(), report.to_json());
    }
});
