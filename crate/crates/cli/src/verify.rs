//! One row per `(w, T)`: exact moment, its expansion, and the predicted terms.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use wml_core::invariants::{ClValue, CommCrit, InvariantReport, PiValue};
use wml_core::weingarten::{
    check_expansion, coefficient_at, expansion_prediction, laurent, moment_with_cap, stable_inner_product,
    LaurentSeries, Prediction, RationalFunction, TraceMonomial,
};
use wml_core::{Error, Word};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub word: String,
    #[serde(rename = "T")]
    pub t: String,
    pub exact: RationalFunction,
    pub n_min: u64,
    pub pi: PiValue,
    pub cl: ClValue,
    pub comm_crit_count: Option<usize>,
    pub laurent: LaurentSeries,
    /// `None` for the identity and for proper powers.
    pub prediction: Option<Prediction>,
    /// Constant, `n^(1-pi)` coefficient and remainder order as predicted.
    pub main: Option<bool>,
    /// `E_w[T] - <T,1>` has order at most `1 - pi`.
    pub weak: Option<bool>,
    /// For `T = (1,-1)`: `E_w[T] - 1` has order at most `2(1 - pi)`.
    pub xi_pair: Option<bool>,
    /// For `T = (1)` with `pi = 2 cl`: the `n^(1-2cl)` coefficient equals the CommCrit count.
    pub comm_crit_identity: Option<bool>,
    pub remainder_order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerifyRow {
    pub fn passed(&self) -> bool {
        [self.main, self.weak, self.xi_pair, self.comm_crit_identity].iter().all(|f| f.unwrap_or(true))
    }
}

fn at_most(order: Option<i64>, bound: i64) -> bool {
    order.is_none_or(|o| o <= bound)
}

pub fn verify_row(
    w: &Word,
    t: &TraceMonomial,
    inv: &InvariantReport,
    depth: Option<usize>,
    term_cap: u64,
    timed: bool,
) -> Result<VerifyRow, Error> {
    let start = Instant::now();
    let pi = match &inv.pi {
        PiValue::Undecided(why) => return Err(Error::Undecided(why.clone())),
        PiValue::Finite(p) => Some(*p as i64),
        PiValue::Infinite => None,
    };
    let count = match &inv.comm_crit {
        CommCrit::Decided(v) => Some(v.len()),
        CommCrit::Undecided(_) => None,
    };
    let m = moment_with_cap(w, t, term_cap)?;
    let depth = depth.unwrap_or(pi.map_or(2, |p| p as usize + 2));
    let series = laurent(&m.value, depth);
    let is_pair = t.exponents() == [1, -1] || t.exponents() == [-1, 1];

    let (prediction, main, weak, xi_pair, remainder_order) = if w.is_identity() {
        (None, None, None, None, None)
    } else if w.is_proper_power().is_power {
        let p = pi.unwrap_or(1);
        let constant = stable_inner_product(t, &TraceMonomial::new(Vec::new())?);
        let rest = &m.value - &RationalFunction::integer(constant);
        let xi = is_pair.then(|| at_most((&m.value - &RationalFunction::one()).order(), 2 * (1 - p)));
        (None, None, Some(at_most(rest.order(), 1 - p)), xi, rest.order())
    } else {
        let p = expansion_prediction(w, t, inv)?;
        let c = check_expansion(&m.value, t, &p);
        (Some(p), Some(c.main), Some(c.weak), c.xi_pair, c.remainder_order)
    };

    let comm_crit_identity = match (t.exponents(), pi, &inv.cl, count) {
        ([1], Some(p), ClValue::Finite(g), Some(k)) if p == 2 * *g as i64 => {
            let e = 1 - 2 * *g as i64;
            Some(coefficient_at(&m.value, e) == BigRational::from_integer(BigInt::from(k)))
        }
        _ => None,
    };

    Ok(VerifyRow {
        word: w.to_string(),
        t: t.to_string(),
        exact: m.value,
        n_min: m.n_min,
        pi: inv.pi.clone(),
        cl: inv.cl.clone(),
        comm_crit_count: count,
        laurent: series,
        prediction,
        main,
        weak,
        xi_pair,
        comm_crit_identity,
        remainder_order,
        elapsed_ms: timed.then(|| start.elapsed().as_millis()),
    })
}

pub const CSV_HEADER: &[&str] = &[
    "word",
    "T",
    "exact",
    "pi",
    "cl",
    "comm_crit_count",
    "laurent",
    "predicted_constant",
    "predicted_exponent",
    "predicted_coefficient",
    "remainder_order",
    "main",
    "weak",
    "xi_pair",
    "comm_crit_identity",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn csv_record(r: &VerifyRow) -> Vec<String> {
    let terms: Vec<String> = r.laurent.terms().iter().map(|(e, c)| format!("{c}*n^{e}")).collect();
    let p = r.prediction.as_ref();
    let mut row = vec![
        r.word.clone(),
        r.t.clone(),
        r.exact.to_string(),
        r.pi.to_string(),
        r.cl.to_string(),
        opt(&r.comm_crit_count),
        if terms.is_empty() { "0".into() } else { terms.join(" + ") },
        opt(&p.map(|p| p.constant.clone())),
        opt(&p.and_then(|p| p.exponent)),
        opt(&p.map(|p| p.coefficient.clone())),
        opt(&r.remainder_order),
        opt(&r.main),
        opt(&r.weak),
        opt(&r.xi_pair),
        opt(&r.comm_crit_identity),
    ];
    if let Some(ms) = r.elapsed_ms {
        row.push(ms.to_string());
    }
    row
}
