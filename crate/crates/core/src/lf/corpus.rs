//! The shipped signatures.

use super::parse::parse_signature;
use super::syntax::Signature;

pub const TTHG: &str = include_str!("../../signatures/tthG.sig");
pub const ITTH: &str = include_str!("../../signatures/itth.sig");
pub const ETTH1: &str = include_str!("../../signatures/etth1.sig");
pub const ITTH_PI: &str = include_str!("../../signatures/itth-pi.sig");

/// `(name, source)` of every shipped signature.
pub const SHIPPED: [(&str, &str); 4] = [("tthG", TTHG), ("etth1", ETTH1), ("itth", ITTH), ("itthPi", ITTH_PI)];

pub fn shipped(name: &str) -> Option<Signature> {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, src)| parse_signature(src).expect("shipped signature parses"))
}

pub fn tthg() -> Signature {
    parse_signature(TTHG).expect("shipped signature parses")
}

pub fn itth() -> Signature {
    parse_signature(ITTH).expect("shipped signature parses")
}

pub fn etth1() -> Signature {
    parse_signature(ETTH1).expect("shipped signature parses")
}

pub fn itth_pi() -> Signature {
    parse_signature(ITTH_PI).expect("shipped signature parses")
}
