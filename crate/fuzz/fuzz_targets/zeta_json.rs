#![no_main]

use libfuzzer_sys::fuzz_target;
use tracezeta::zeta::FactoredZeta;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(z) = FactoredZeta::from_json(s) {
        assert_eq!(FactoredZeta::from_json(&z.to_json()).unwrap(), z);
    }
});
