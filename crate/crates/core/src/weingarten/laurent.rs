//! Expansions of rational functions in powers of `1/n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::rational::RationalFunction;

/// `sum_i coeffs[i] n^(leading - i)`, truncated after `coeffs.len()` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    /// `None` for the zero function.
    pub leading: Option<i64>,
    pub coeffs: Vec<BigRational>,
}

impl LaurentSeries {
    /// Coefficient of `n^e`, zero outside the computed window.
    pub fn coefficient(&self, e: i64) -> BigRational {
        match self.leading {
            Some(l) if e <= l && ((l - e) as usize) < self.coeffs.len() => self.coeffs[(l - e) as usize].clone(),
            _ => BigRational::zero(),
        }
    }

    /// Lowest exponent covered by the expansion.
    pub fn last_exponent(&self) -> Option<i64> {
        self.leading.map(|l| l - self.coeffs.len() as i64 + 1)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(i64, BigRational)> {
        let Some(l) = self.leading else { return Vec::new() };
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (l - i as i64, c.clone()))
            .collect()
    }
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LaurentSeries", 2)?;
        st.serialize_field("e0", &self.leading)?;
        st.serialize_field("coeffs", &self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
        st.end()
    }
}

/// The leading term and `depth` further coefficients, by long division in `1/n`.
pub fn laurent(f: &RationalFunction, depth: usize) -> LaurentSeries {
    let (Some(dn), Some(dd)) = (f.num().degree(), f.den().degree()) else {
        return LaurentSeries { leading: None, coeffs: Vec::new() };
    };
    // with t = 1/n: num = n^dn a(t), den = n^dd b(t), b(0) != 0
    let a: Vec<BigRational> = (0..=dn).map(|i| BigRational::from_integer(f.num().coeff(dn - i))).collect();
    let b: Vec<BigInt> = (0..=dd).map(|i| f.den().coeff(dd - i)).collect();
    let b0 = BigRational::from_integer(b[0].clone());
    let mut q: Vec<BigRational> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let mut c = a.get(k).cloned().unwrap_or_else(BigRational::zero);
        for j in 1..=k.min(dd) {
            c -= BigRational::from_integer(b[j].clone()) * &q[k - j];
        }
        q.push(c / &b0);
    }
    LaurentSeries { leading: Some(dn as i64 - dd as i64), coeffs: q }
}
