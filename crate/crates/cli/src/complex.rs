use mayer_core::ComplexPoint;

/// Parses `2`, `-1.5`, `3i`, `-i`, `0.5+9.5i`, `1-2i`, `1e-3+2e1i`.
pub fn parse_complex(text: &str) -> Result<ComplexPoint, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse complex number '{text}'");
    let z = match t.strip_suffix(['i', 'j']) {
        None => ComplexPoint::new(t.parse::<f64>().map_err(|_| bad())?, 0.0),
        Some(body) => {
            // split at the last sign that is neither leading nor part of an exponent
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            let imag = |part: &str| -> Result<f64, String> {
                match part {
                    "" | "+" => Ok(1.0),
                    "-" => Ok(-1.0),
                    p => p.parse::<f64>().map_err(|_| bad()),
                }
            };
            match split {
                Some(k) => ComplexPoint::new(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?),
                None => ComplexPoint::new(0.0, imag(body)?),
            }
        }
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn forms() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.5+9.5i").unwrap(), c(0.5, 9.5));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("1e-3+2e1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("-2-i").unwrap(), c(-2.0, -1.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
    }

    #[test]
    fn rejects_garbage() {
        for t in ["", "i2", "1+2", "abc", "1++2i", "nan", "inf+1i"] {
            assert!(parse_complex(t).is_err(), "{t}");
        }
    }
}
