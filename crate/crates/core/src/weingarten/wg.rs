//! Schur dimensions and the unitary Weingarten function.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use super::characters::character_table;
use super::partition::{factorial, Partition};
use super::poly::Poly;
use super::rational::RationalFunction;

/// `s_lambda(1^n) = prod (n + content) / prod hook`.
pub fn schur_dim(lambda: &Partition) -> RationalFunction {
    let num = lambda.contents().iter().fold(Poly::one(), |acc, &c| &acc * &Poly::linear(c));
    let den = lambda.hooks().iter().fold(BigInt::one(), |acc, &h| acc * h);
    RationalFunction::new(num, Poly::constant(den))
}

static WG: OnceLock<Mutex<HashMap<Partition, RationalFunction>>> = OnceLock::new();

/// `Wg(sigma, n)` for a permutation of cycle type `sigma`, valid for `n >= |sigma|`.
pub fn wg(sigma: &Partition) -> RationalFunction {
    let cache = WG.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(sigma) {
        return v.clone();
    }
    let p = sigma.size();
    let table = character_table(p);
    let col = table.index_of(sigma);
    let mut total = RationalFunction::zero();
    for lambda in &table.partitions {
        let chi = table.row(lambda)[col];
        if chi == 0 {
            continue;
        }
        let f = lambda.dimension();
        let weight = &f * &f * chi;
        total = &total + &schur_dim(lambda).recip().scale(&weight);
    }
    let pf = factorial(p);
    let value = &total / &RationalFunction::integer(&pf * &pf);
    cache.lock().unwrap().entry(sigma.clone()).or_insert(value).clone()
}
