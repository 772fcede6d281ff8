#![no_main]

use libfuzzer_sys::fuzz_target;
use tracezeta::variety::Variety;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = Variety::parse(s) {
        // the normalized document parses back to the same variety
        let again = Variety::from_doc(&v.to_doc()).expect("normalized document is valid");
        assert_eq!(again.content_hash(), v.content_hash());
    }
});
