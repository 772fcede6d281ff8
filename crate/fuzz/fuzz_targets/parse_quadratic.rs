#![no_main]

use libfuzzer_sys::fuzz_target;
use tracezeta::quadratic::QuadraticNumber;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<QuadraticNumber>() {
        let back: QuadraticNumber = x.to_string().parse().expect("display form parses");
        assert_eq!(back, x);
    }
});
