//! Fixed-precision presentation of fractions.

use serde::{Serialize, Serializer};

/// A fraction in `[0, 1]` that serializes rounded to six decimal places.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Share(pub f64);

impl Share {
    pub fn ratio(num: f64, den: f64) -> Share {
        if den == 0.0 {
            Share(0.0)
        } else {
            Share(num / den)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Serialize for Share {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(round6(self.0))
    }
}

pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Formats a fraction with exactly six decimals, as used in CSV output.
pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

/// Serializes an `f64` rounded to six decimals (for `#[serde(serialize_with)]`).
pub fn ser6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round6(*x))
}

pub fn ser6_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_f64(round6(*v)),
        None => s.serialize_none(),
    }
}

pub fn ser6_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&round6(*x))?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(fmt6(1.0 / 3.0), "0.333333");
        assert_eq!(
            serde_json::to_string(&Share(2.0 / 3.0)).unwrap(),
            "0.666667"
        );
    }
}
