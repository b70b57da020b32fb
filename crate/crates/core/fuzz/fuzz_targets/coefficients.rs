#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = frobzeta::cli::parse_coefficients(s) {
        let joined: Vec<String> = q.iter().map(|c| c.to_string()).collect();
        assert_eq!(frobzeta::cli::parse_coefficients(&joined.join(",")).unwrap(), q);
    }
});
