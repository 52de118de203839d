use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A positive quantity stored as its natural logarithm.
///
/// Serialized as `{"log10": value}`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue {
    pub ln: f64,
}

impl LogValue {
    pub const ONE: Self = Self { ln: 0.0 };
    pub const ZERO: Self = Self { ln: f64::NEG_INFINITY };

    pub fn from_ln(ln: f64) -> Self {
        Self { ln }
    }

    pub fn from_value(x: f64) -> Self {
        Self { ln: x.ln() }
    }

    pub fn log10(self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    /// The plain value; overflows to infinity for huge quantities.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Mul for LogValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self { ln: self.ln + rhs.ln }
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LogValue", 1)?;
        let v = self.log10();
        // JSON has no -inf; zero is encoded as null
        st.serialize_field("log10", &v.is_finite().then_some(v))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            log10: Option<f64>,
        }
        let raw = Raw::deserialize(d)?;
        Ok(match raw.log10 {
            Some(v) => Self { ln: v * std::f64::consts::LN_10 },
            None => Self::ZERO,
        })
    }
}

/// `ln(n!)` via the log-gamma function.
pub fn ln_factorial(n: u64) -> f64 {
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let v = LogValue::from_value(1000.0);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"log10":3.0}"#.replace("3.0", &format!("{}", v.log10())));
        let back: LogValue = serde_json::from_str(&s).unwrap();
        assert!((back.ln - v.ln).abs() < 1e-12);
        assert_eq!(serde_json::to_string(&LogValue::ZERO).unwrap(), r#"{"log10":null}"#);
    }

    #[test]
    fn ln_factorial_small() {
        assert!((ln_factorial(3) - 6f64.ln()).abs() < 1e-12);
        assert!(ln_factorial(0).abs() < 1e-12);
    }
}
