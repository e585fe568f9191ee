//! Functions on `[0, 1]` that the operators sample at their nodes.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Number of samples used to estimate the sup norm of an opaque function.
pub const SUP_NORM_SAMPLES: usize = 1025;
/// Inflation applied to a sampled sup norm.
pub const SUP_NORM_INFLATION: f64 = 2.0;

pub type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum SampledFunction<S> {
    /// `t^m`
    Monomial(u32),
    /// Ascending coefficients `c_0 + c_1 t + ...`.
    Polynomial(Vec<S>),
    Exp,
    Sin,
    /// `|t - c|`
    AbsShift(S),
    /// Opaque float-only function; its sup norm is estimated by sampling.
    Custom {
        name: String,
        f: CustomFn,
    },
}

impl<S: Scalar> SampledFunction<S> {
    pub fn monomial(m: u32) -> Self {
        SampledFunction::Monomial(m)
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SampledFunction::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// True when evaluation needs floating point.
    pub fn requires_float(&self) -> bool {
        matches!(
            self,
            SampledFunction::Exp | SampledFunction::Sin | SampledFunction::Custom { .. }
        )
    }

    pub fn eval(&self, t: &S) -> Result<S> {
        match self {
            SampledFunction::Monomial(m) => Ok(t.powi(*m)),
            SampledFunction::Polynomial(c) => Ok(c
                .iter()
                .rev()
                .fold(S::zero(), |acc, ci| acc * t.clone() + ci.clone())),
            SampledFunction::Exp => t.exp(),
            SampledFunction::Sin => t.sin(),
            SampledFunction::AbsShift(c) => Ok((t.clone() - c.clone()).abs()),
            SampledFunction::Custom { f, .. } => {
                crate::qcore::require_float::<S>("custom function")?;
                Ok(S::from_f64(f(t.to_f64())))
            }
        }
    }

    /// Upper bound on `sup_{[0,1]} |f|`. Rigorous for every variant except
    /// `Custom`, which is sampled on a uniform grid and inflated.
    pub fn sup_norm_bound(&self) -> f64 {
        match self {
            SampledFunction::Monomial(_) => 1.0,
            SampledFunction::Polynomial(c) => c.iter().map(|ci| ci.to_f64().abs()).sum(),
            SampledFunction::Exp => std::f64::consts::E,
            SampledFunction::Sin => 1.0_f64.sin(),
            SampledFunction::AbsShift(c) => {
                let c = c.to_f64();
                c.abs().max((1.0 - c).abs())
            }
            SampledFunction::Custom { f, .. } => {
                let n = SUP_NORM_SAMPLES - 1;
                let sampled = (0..=n)
                    .map(|i| f(i as f64 / n as f64).abs())
                    .fold(0.0f64, f64::max);
                SUP_NORM_INFLATION * sampled
            }
        }
    }

    /// Relative rounding incurred by one evaluation in `f64`, in units of
    /// the unit roundoff.
    pub(crate) fn eval_rounding_units(&self) -> f64 {
        match self {
            SampledFunction::Monomial(m) => 2.0 * *m as f64 + 1.0,
            SampledFunction::Polynomial(c) => 4.0 * c.len() as f64 + 2.0,
            SampledFunction::Exp | SampledFunction::Sin => 4.0,
            SampledFunction::AbsShift(_) => 2.0,
            SampledFunction::Custom { .. } => 16.0,
        }
    }
}

impl<S: Scalar> fmt::Debug for SampledFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for SampledFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampledFunction::Monomial(m) => write!(f, "e{m}"),
            SampledFunction::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|ci| ci.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            SampledFunction::Exp => f.write_str("exp"),
            SampledFunction::Sin => f.write_str("sin"),
            SampledFunction::AbsShift(c) => write!(f, "absshift:{c}"),
            SampledFunction::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

/// Parses `eN`, `poly:c0,c1,...`, `exp`, `sin`, `absshift:c` (alias `abs:c`).
impl<S: Scalar> FromStr for SampledFunction<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(m) = s.strip_prefix('e') {
            if !m.is_empty() && m.chars().all(|c| c.is_ascii_digit()) {
                let m = m
                    .parse()
                    .map_err(|_| Error::Parse(format!("monomial order too large: {s}")))?;
                return Ok(SampledFunction::Monomial(m));
            }
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(S::parse_scalar)
                .collect::<Result<Vec<_>>>()?;
            return Ok(SampledFunction::Polynomial(coeffs));
        }
        if let Some(c) = s
            .strip_prefix("absshift:")
            .or_else(|| s.strip_prefix("abs:"))
        {
            return Ok(SampledFunction::AbsShift(S::parse_scalar(c)?));
        }
        match s {
            "exp" => Ok(SampledFunction::Exp),
            "sin" => Ok(SampledFunction::Sin),
            _ => Err(Error::Parse(format!(
                "unknown function {s:?}; expected eN, poly:c0,c1,..., exp, sin or absshift:c"
            ))),
        }
    }
}
