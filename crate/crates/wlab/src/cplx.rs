//! Complex literal parsing and printing in the "a+bi" wire format.

use crate::{Result, WlabError};
use num_complex::Complex64;

/// Shorthand constructor.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Prints a complex number as "a+bi" / "a-bi" with shortest-roundtrip decimals.
pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

/// Parses "a+bi", "a-bi", "a", "bi", "i", "-i" with decimal or exponent literals.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        return Err(WlabError::InvalidInput("empty complex literal".into()));
    }
    let bad = |_| WlabError::InvalidInput(format!("bad complex literal: {s:?}"));
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Split at the last +/- that is not leading and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-')
                && bytes[k - 1] != b'e'
                && bytes[k - 1] != b'E'
            {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(bad)?;
                let im = parse_imag_coef(&body[k..], s)?;
                Ok(Complex64::new(re, im))
            }
            None => Ok(Complex64::new(0.0, parse_imag_coef(body, s)?)),
        }
    } else {
        Ok(Complex64::new(t.parse().map_err(bad)?, 0.0))
    }
}

fn parse_imag_coef(raw: &str, orig: &str) -> Result<f64> {
    match raw {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => raw
            .parse()
            .map_err(|_| WlabError::InvalidInput(format!("bad complex literal: {orig:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for z in [
            c(1.5, 2.0),
            c(0.0, -3.25),
            c(-1.0e-5, 0.0),
            c(0.1, 0.2),
            c(-7.0, -8.5),
        ] {
            let s = format_complex(z);
            assert_eq!(parse_complex(&s).unwrap(), z, "{s}");
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1.5e-3-2.5e2i").unwrap(), c(1.5e-3, -250.0));
        assert_eq!(parse_complex("0.5+0.866i").unwrap(), c(0.5, 0.866));
        assert!(parse_complex("nonsense+qi").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn format_signs() {
        assert_eq!(format_complex(c(1.0, -2.0)), "1-2i");
        assert_eq!(format_complex(c(-1.0, 0.0)), "-1+0i");
    }
}
