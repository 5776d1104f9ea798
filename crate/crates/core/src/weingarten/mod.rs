//! Exact Haar integration of trace words.

pub mod characters;
pub mod laurent;
pub mod moment;
pub mod partition;
pub mod poly;
pub mod prediction;
pub mod rational;
pub mod stable;
pub mod wg;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::Error;

pub use characters::sp_character;
pub use laurent::{laurent, LaurentSeries};
pub use moment::{moment, moment_with_cap, word_moment, word_moment_by_contraction, word_moment_with_cap, Moment};
pub use partition::Partition;
pub use poly::Poly;
pub use prediction::{check_expansion, coefficient_at, expansion_prediction, ExpansionCheck, Prediction};
pub use rational::RationalFunction;
pub use stable::stable_inner_product;
pub use wg::{schur_dim, wg};

/// `xi_{m_1} ... xi_{m_l}` with `xi_m(A) = tr(A^m)`; empty means the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TraceMonomial(Vec<i64>);

impl TraceMonomial {
    pub fn new(exponents: Vec<i64>) -> Result<TraceMonomial, Error> {
        if exponents.contains(&0) {
            return Err(Error::Invalid("trace exponents must be nonzero".into()));
        }
        Ok(TraceMonomial(exponents))
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }
}

impl FromStr for TraceMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return TraceMonomial::new(Vec::new());
        }
        let v = s
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad trace exponent {p:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        TraceMonomial::new(v)
    }
}

impl fmt::Display for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
