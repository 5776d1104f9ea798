//! Large-`n` inner products of trace monomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::partition::factorial;
use super::TraceMonomial;

/// `<T1, T2>`: pair `T1` with the conjugate of `T2`, tally `a_p` copies of
/// `xi_p` and `b_p` of `xi_-p`, and return `prod delta(a_p, b_p) a_p! p^a_p`.
pub fn stable_inner_product(t1: &TraceMonomial, t2: &TraceMonomial) -> BigInt {
    let mut tally: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    let combined = t1.exponents().iter().copied().chain(t2.exponents().iter().map(|&m| -m));
    for m in combined {
        let e = tally.entry(m.unsigned_abs()).or_default();
        if m > 0 {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let mut out = BigInt::one();
    for (p, (a, b)) in tally {
        if a != b {
            return BigInt::from(0);
        }
        out *= factorial(a) * BigInt::from(p).pow(a as u32);
    }
    out
}
