//! Angle literals: plain numbers or `π` expressions such as `pi/2`,
//! `-3*pi/4`, `2pi`, `π/8`, and simple ratios like `1/3`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A JSON number or an angle string, resolved by [`Angle::value`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Angle::Number(x) if x.is_finite() => Ok(*x),
            Angle::Number(x) => Err(format!("non-finite angle {x}")),
            Angle::Text(s) => parse_angle(s),
        }
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::Number(x)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Number(x) => write!(f, "{x}"),
            Angle::Text(s) => f.write_str(s),
        }
    }
}

fn factor(s: &str, whole: &str) -> Result<f64, String> {
    let bad = || format!("cannot parse angle `{whole}`");
    if let Some(coef) = s.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad())? };
        Ok(c * PI)
    } else {
        s.parse::<f64>().map_err(|_| bad())
    }
}

/// Parses an angle literal.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase().replace('π', "pi");
    if s.is_empty() {
        return Err("empty angle".into());
    }
    if let Ok(x) = s.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(format!("non-finite angle `{text}`")) };
    }
    let (sign, body) = match s.as_bytes()[0] {
        b'-' => (-1.0, &s[1..]),
        b'+' => (1.0, &s[1..]),
        _ => (1.0, &s[..]),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut v = factor(num, text)?;
    if let Some(d) = den {
        let d = factor(d, text)?;
        if d == 0.0 {
            return Err(format!("division by zero in angle `{text}`"));
        }
        v /= d;
    }
    if v.is_finite() {
        Ok(sign * v)
    } else {
        Err(format!("non-finite angle `{text}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let cases = [
            ("pi/2", PI / 2.0),
            ("-pi/4", -PI / 4.0),
            ("3*pi/4", 3.0 * PI / 4.0),
            ("3pi/4", 3.0 * PI / 4.0),
            ("2pi", 2.0 * PI),
            ("π/8", PI / 8.0),
            (" pi ", PI),
            ("0.5", 0.5),
            ("1e-3", 1e-3),
            ("1/3", 1.0 / 3.0),
            ("+pi/3", PI / 3.0),
        ];
        for (s, want) in cases {
            assert_eq!(parse_angle(s).unwrap(), want, "{s}");
        }
    }

    #[test]
    fn rejects() {
        for s in ["", "pie", "pi/0", "2*", "pi/2/2", "inf", "nan", "--pi"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }

    #[test]
    fn json_forms() {
        let a: Angle = serde_json::from_str("\"pi/2\"").unwrap();
        assert_eq!(a.value().unwrap(), PI / 2.0);
        let b: Angle = serde_json::from_str("0.25").unwrap();
        assert_eq!(b.value().unwrap(), 0.25);
    }
}
