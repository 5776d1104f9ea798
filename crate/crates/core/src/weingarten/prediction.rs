//! Predicted leading terms of `E_w[T]` and exact checks against a moment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::laurent::laurent;
use super::rational::RationalFunction;
use super::stable::stable_inner_product;
use super::TraceMonomial;
use crate::invariants::{CommCrit, InvariantReport, PiValue};
use crate::words::Word;
use crate::Error;

/// `<T,1> + (<T,xi_1> + <T,xi_-1>) |CommCrit(w)| n^(1-pi) + O(n^-pi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    #[serde(serialize_with = "as_string")]
    pub constant: BigInt,
    /// `1 - pi`, or `None` when `w` is primitive and the moment is exactly `<T,1>`.
    pub exponent: Option<i64>,
    #[serde(serialize_with = "as_string")]
    pub coefficient: BigInt,
    /// `-pi`; the remainder has no term of larger exponent.
    pub remainder_bound: Option<i64>,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn expansion_prediction(w: &Word, t: &TraceMonomial, inv: &InvariantReport) -> Result<Prediction, Error> {
    if w.is_identity() || w.is_proper_power().is_power {
        return Err(Error::Invalid(format!("{w} is trivial or a proper power")));
    }
    let one = TraceMonomial::new(Vec::new())?;
    let constant = stable_inner_product(t, &one);
    let pi = match &inv.pi {
        PiValue::Finite(p) => *p as i64,
        PiValue::Infinite => {
            return Ok(Prediction { constant, exponent: None, coefficient: BigInt::zero(), remainder_bound: None })
        }
        PiValue::Undecided(why) => return Err(Error::Undecided(why.clone())),
    };
    let count = match &inv.comm_crit {
        CommCrit::Decided(v) => BigInt::from(v.len()),
        CommCrit::Undecided(why) => return Err(Error::Undecided(why.clone())),
    };
    let cross = stable_inner_product(t, &TraceMonomial::new(vec![1])?) + stable_inner_product(t, &TraceMonomial::new(vec![-1])?);
    Ok(Prediction { constant, exponent: Some(1 - pi), coefficient: cross * count, remainder_bound: Some(-pi) })
}

/// Coefficient of `n^e` in the expansion of `f` at infinity.
pub fn coefficient_at(f: &RationalFunction, e: i64) -> BigRational {
    match f.order() {
        Some(l) if l >= e => laurent(f, (l - e) as usize).coefficient(e),
        _ => BigRational::zero(),
    }
}

fn int(c: &BigInt) -> RationalFunction {
    RationalFunction::integer(c.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionCheck {
    /// Leading term, second coefficient and remainder order all as predicted.
    pub main: bool,
    /// `E_w[T] - <T,1>` has order at most `1 - pi`.
    pub weak: bool,
    /// For `T = xi_1 xi_-1`: `E_w[T] - 1` has order at most `2(1 - pi)`.
    pub xi_pair: Option<bool>,
    #[serde(serialize_with = "ratio_str")]
    pub constant_term: BigRational,
    #[serde(serialize_with = "ratio_str")]
    pub second_coefficient: BigRational,
    /// Order of the moment minus both predicted terms.
    pub remainder_order: Option<i64>,
}

fn ratio_str<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn at_most(order: Option<i64>, bound: i64) -> bool {
    order.is_none_or(|o| o <= bound)
}

pub fn check_expansion(m: &RationalFunction, t: &TraceMonomial, p: &Prediction) -> ExpansionCheck {
    let constant_term = coefficient_at(m, 0);
    let minus_const = m - &int(&p.constant);
    let xi_pair = (t.exponents() == [1, -1] || t.exponents() == [-1, 1]).then(|| match p.exponent {
        Some(e) => at_most((m - &RationalFunction::one()).order(), 2 * e),
        None => *m == RationalFunction::one(),
    });
    let Some(e) = p.exponent else {
        let exact = minus_const.is_zero();
        return ExpansionCheck {
            main: exact,
            weak: exact,
            xi_pair,
            constant_term,
            second_coefficient: BigRational::zero(),
            remainder_order: minus_const.order(),
        };
    };
    let second_coefficient = coefficient_at(m, e);
    let remainder = &minus_const - &(&int(&p.coefficient) * &RationalFunction::n_pow(e));
    let bound = p.remainder_bound.unwrap_or(e - 1);
    let main = at_most(m.order(), 0)
        && constant_term == BigRational::from_integer(p.constant.clone())
        && second_coefficient == BigRational::from_integer(p.coefficient.clone())
        && at_most(remainder.order(), bound);
    ExpansionCheck {
        main,
        weak: at_most(minus_const.order(), e),
        xi_pair,
        constant_term,
        second_coefficient,
        remainder_order: remainder.order(),
    }
}
