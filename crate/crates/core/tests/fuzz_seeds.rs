//! Replays the fuzz corpus seeds through the same properties the fuzz
//! targets assert, so the seeds stay meaningful on a stable toolchain.

use std::fs;
use std::path::PathBuf;

use tracezeta::cm::CMCurve;
use tracezeta::quadratic::QuadraticNumber;
use tracezeta::series::{format_rational, parse_rational};
use tracezeta::variety::Variety;
use tracezeta::zeta::FactoredZeta;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn variety_seeds() {
    let mut accepted = 0;
    for (name, s) in seeds("parse_variety") {
        if let Ok(v) = Variety::parse(&s) {
            let again = Variety::from_doc(&v.to_doc()).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(again.content_hash(), v.content_hash(), "{name}");
            accepted += 1;
        }
    }
    assert_eq!(accepted, 5);
}

#[test]
fn quadratic_seeds() {
    for (name, s) in seeds("parse_quadratic") {
        if let Ok(x) = s.parse::<QuadraticNumber>() {
            assert_eq!(x.to_string().parse::<QuadraticNumber>().unwrap(), x, "{name}");
        }
    }
}

#[test]
fn rational_seeds() {
    for (name, s) in seeds("parse_rational") {
        if let Ok(x) = parse_rational(&s) {
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x, "{name}");
        }
    }
}

#[test]
fn zeta_seeds() {
    let mut accepted = 0;
    for (name, s) in seeds("zeta_json") {
        if let Ok(z) = FactoredZeta::from_json(&s) {
            assert_eq!(FactoredZeta::from_json(&z.to_json()).unwrap(), z, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn cm_seeds() {
    for (_, s) in seeds("cm_table") {
        if let Ok(curves) = CMCurve::parse_table(&s) {
            for c in &curves {
                for &p in &c.primes {
                    let _ = c.has_good_reduction(p);
                }
            }
        }
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(2000))]

    #[test]
    fn parsers_never_panic(s in "[-+/0-9a-z√{}\\[\\]\":, .]{0,60}") {
        let _ = Variety::parse(&s);
        let _ = s.parse::<QuadraticNumber>();
        let _ = parse_rational(&s);
        let _ = FactoredZeta::from_json(&s);
        let _ = CMCurve::parse_table(&s);
    }

    #[test]
    fn quadratic_strings_round_trip(a in -50i64..50, b in -50i64..50, d in 1u64..40, den in 1i64..9) {
        let s = format!("{a}/{den}+{b}/{den}√{d}");
        if let Ok(x) = s.parse::<QuadraticNumber>() {
            proptest::prop_assert_eq!(x.to_string().parse::<QuadraticNumber>().unwrap(), x);
        }
    }
}
