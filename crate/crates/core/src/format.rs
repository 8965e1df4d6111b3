//! Fixed 17-significant-digit number formatting for deterministic output.

use serde::ser::{SerializeSeq, Serializer};

use crate::ComplexPoint;

/// Formats with 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Infinity".into() } else { "-Infinity".into() };
    }
    format!("{:.16e}", x)
}

fn raw(x: f64) -> Box<serde_json::value::RawValue> {
    let s = if x.is_finite() { fmt17(x) } else { "null".into() };
    serde_json::value::RawValue::from_string(s).expect("valid JSON number")
}

/// Serializes a float with 17 significant digits.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&raw(*x), s)
}

pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

/// Serializes a complex number as `[re, im]`.
pub fn ser_complex<S: Serializer>(z: &ComplexPoint, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&raw(z.re))?;
    seq.serialize_element(&raw(z.im))?;
    seq.end()
}

pub fn ser_opt_complex<S: Serializer>(z: &Option<ComplexPoint>, s: S) -> Result<S::Ok, S::Error> {
    match z {
        Some(v) => ser_complex(v, s),
        None => s.serialize_none(),
    }
}

/// Serializes a list of complex numbers as `[[re, im], ...]`.
pub fn ser_complex_vec<S: Serializer>(v: &[ComplexPoint], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[raw(z.re), raw(z.im)])?;
    }
    seq.end()
}

/// `re,im` pair for CSV cells.
pub fn csv_complex(z: ComplexPoint) -> String {
    format!("{},{}", fmt17(z.re), fmt17(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.5e-300), "-2.5000000000000000e-300");
    }

    #[test]
    fn json_pair() {
        #[derive(serde::Serialize)]
        struct W {
            #[serde(serialize_with = "ser_complex")]
            z: ComplexPoint,
        }
        let s = serde_json::to_string(&W { z: ComplexPoint::new(0.5, -2.0) }).unwrap();
        assert_eq!(s, r#"{"z":[5.0000000000000000e-1,-2.0000000000000000e0]}"#);
    }
}
