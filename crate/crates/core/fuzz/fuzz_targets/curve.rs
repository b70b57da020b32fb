#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigInt;

// first 8 bytes: p, next byte: N, rest: signed coefficient bytes
fuzz_target!(|data: &[u8]| {
    if data.len() < 10 {
        return;
    }
    let p = u64::from_le_bytes(data[..8].try_into().unwrap()) % 100_000;
    let n = u32::from(data[8] % 6);
    let q: Vec<BigInt> = data[9..].iter().take(12).map(|&b| BigInt::from(b as i8)).collect();
    if let Ok(curve) = frobzeta::validate(p, n, &q) {
        assert_eq!(curve.q_coeffs().len(), 2 * curve.genus() + 2);
    }
});
