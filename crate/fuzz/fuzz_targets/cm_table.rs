#![no_main]

use libfuzzer_sys::fuzz_target;
use tracezeta::cm::CMCurve;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(curves) = CMCurve::parse_table(s) {
        for c in &curves {
            for &p in &c.primes {
                let _ = c.has_good_reduction(p);
            }
        }
    }
});
