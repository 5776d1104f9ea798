//! Exact rational functions of `n` in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::poly::Poly;

/// `num / den` with coprime integer polynomials, the pair sharing no integer
/// factor and `den` having positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> RationalFunction {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let g = num.gcd(&den).primitive();
        let (mut num, mut den) = (num.div_exact(&g), den.div_exact(&g));
        let mut c = num.content().gcd(&den.content());
        if den.lead().is_negative() {
            c = -c;
        }
        num = num.div_scalar(&c);
        den = den.div_scalar(&c);
        RationalFunction { num, den }
    }

    pub fn zero() -> RationalFunction {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RationalFunction {
        RationalFunction::integer(BigInt::one())
    }

    pub fn integer(c: BigInt) -> RationalFunction {
        RationalFunction::new(Poly::constant(c), Poly::one())
    }

    pub fn from_i64(c: i64) -> RationalFunction {
        RationalFunction::integer(BigInt::from(c))
    }

    pub fn constant(c: &BigRational) -> RationalFunction {
        RationalFunction::new(Poly::constant(c.numer().clone()), Poly::constant(c.denom().clone()))
    }

    pub fn polynomial(p: Poly) -> RationalFunction {
        RationalFunction::new(p, Poly::one())
    }

    /// `n^e` for any integer `e`.
    pub fn n_pow(e: i64) -> RationalFunction {
        let m = Poly::monomial(BigInt::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            RationalFunction::polynomial(m)
        } else {
            RationalFunction::new(Poly::one(), m)
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if this function does not depend on `n`.
    pub fn as_constant(&self) -> Option<BigRational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(BigRational::zero()),
            (Some(0), Some(0)) => Some(BigRational::new(self.num.lead(), self.den.lead())),
            _ => None,
        }
    }

    /// Exponent of the leading term as `n -> infinity`; `None` for zero.
    pub fn order(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn eval(&self, n: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(n) / d)
    }

    pub fn eval_int(&self, n: i64) -> Option<BigRational> {
        self.eval(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        self.num.eval_f64(n) / self.den.eval_f64(n)
    }

    pub fn scale(&self, c: &BigInt) -> RationalFunction {
        RationalFunction::new(self.num.scale(c), self.den.clone())
    }

    pub fn recip(&self) -> RationalFunction {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den).primitive();
        let (a, b) = (self.den.div_exact(&g), o.den.div_exact(&g));
        RationalFunction::new(&(&self.num * &b) + &(&o.num * &a), &a * &o.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self * &o.recip()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = RationalFunction>>(iter: I) -> RationalFunction {
        iter.fold(RationalFunction::zero(), |a, b| &a + &b)
    }
}

fn grouped(p: &Poly) -> String {
    let s = p.to_string();
    let bare = p.degree() == Some(0) || (p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 && p.lead().is_one());
    if bare {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.lead().is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1 {
            self.num.to_string()
        } else {
            format!("({})", self.num)
        };
        write!(f, "{num}/{}", grouped(&self.den))
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs = |p: &Poly| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("RationalFunction", 3)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("num_coeffs", &strs(&self.num))?;
        st.serialize_field("den_coeffs", &strs(&self.den))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_i64(n), Poly::from_i64(d))
    }

    #[test]
    fn canonical_form() {
        assert_eq!(rf(&[0, 2], &[0, 0, 4]), rf(&[1], &[0, 2]));
        assert_eq!(rf(&[1], &[0, -1]), rf(&[-1], &[0, 1]));
        assert_eq!(rf(&[0], &[5, 1]), RationalFunction::zero());
        assert_eq!(rf(&[-1, 0, 1], &[1, 1]), rf(&[-1, 1], &[1]));
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[1], &[0, 1]).to_string(), "1/n");
        assert_eq!(rf(&[1], &[-1, 0, 1]).to_string(), "1/(n^2 - 1)");
        assert_eq!(rf(&[-1], &[0, -1, 0, 1]).to_string(), "-1/(n^3 - n)");
        assert_eq!(rf(&[2], &[1]).to_string(), "2");
        assert_eq!(rf(&[1, 2], &[0, 3]).to_string(), "(2*n + 1)/(3*n)");
    }

    #[test]
    fn arithmetic() {
        let a = rf(&[1], &[0, 1]);
        let b = rf(&[1], &[-1, 0, 1]);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(a.order(), Some(-1));
        assert_eq!(RationalFunction::n_pow(-3), rf(&[1], &[0, 0, 0, 1]));
        assert_eq!(rf(&[6], &[3]).as_constant(), Some(BigRational::from_integer(2.into())));
    }

    fn small() -> impl Strategy<Value = RationalFunction> {
        (prop::collection::vec(-5i64..=5, 0..4), prop::collection::vec(-5i64..=5, 1..4))
            .prop_filter("nonzero den", |(_, d)| d.iter().any(|&c| c != 0))
            .prop_map(|(n, d)| rf(&n, &d))
    }

    proptest! {
        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &a), &RationalFunction::zero());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small(), b in small(), n in 7i64..40) {
            if let (Some(x), Some(y)) = (a.eval_int(n), b.eval_int(n)) {
                prop_assert_eq!((&a + &b).eval_int(n), Some(&x + &y));
                prop_assert_eq!((&a * &b).eval_int(n), Some(x * y));
            }
        }
    }
}
