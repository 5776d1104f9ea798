//! Exact moments `E[tr(w_1) ... tr(w_l)]` over independent Haar unitaries.
//!
//! [`word_moment`] integrates one generator at a time. The `x`-letters of the
//! current trace words split them into segments; for a Weingarten pair
//! `(sigma, tau)` the segment ending at the `k`-th `x` is followed by the
//! segment after the `sigma(k)`-th `x^-1`, and the segment ending at the
//! `l`-th `x^-1` by the one after the `tau^-1(l)`-th `x`. Each resulting cycle
//! is a new trace word without `x`; an empty one contributes `tr(I) = n`.
//! Once every word is a power of a single generator the remaining integral is
//! `sum_lambda chi^lambda(alpha) chi^lambda(beta)` per generator.
//!
//! [`word_moment_by_contraction`] sums over all generators' pairs at once and
//! counts closed index loops directly. It is exponentially slower and is kept
//! as an independent check.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use super::characters::character_table;
use super::partition::{cycle_type, factorial, Partition};
use super::rational::RationalFunction;
use super::wg::wg;
use super::TraceMonomial;
use crate::words::{is_balanced, Word};
use crate::Error;

pub const DEFAULT_TERM_CAP: u64 = 100_000_000;

/// A moment with the smallest `n` for which the formula is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Moment {
    pub value: RationalFunction,
    pub n_min: u64,
}

impl Moment {
    pub fn eval(&self, n: u64) -> Result<num_rational::BigRational, Error> {
        if n < self.n_min {
            return Err(Error::BelowValidity { n, n_min: self.n_min });
        }
        self.value
            .eval_int(n as i64)
            .ok_or_else(|| Error::Internal(format!("moment has a pole at n = {n}")))
    }
}

pub fn permutations(p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(p)];
    for k in 0..p {
        let mut next = Vec::with_capacity(out.len() * (k + 1));
        for perm in &out {
            for pos in 0..=k {
                let mut q = perm.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `sigma tau^-1` as an image vector.
fn compose_inv(sigma: &[usize], tau_inv: &[usize]) -> Vec<usize> {
    tau_inv.iter().map(|&j| sigma[j]).collect()
}

fn free_reduce_cyclic(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let mut start = 0;
    let mut end = out.len();
    while end - start >= 2 && out[start] == -out[end - 1] {
        start += 1;
        end -= 1;
    }
    out[start..end].to_vec()
}

fn min_rotation(w: &[i32]) -> Vec<i32> {
    (0..w.len())
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Trace words up to cyclic rotation and order, with empty words counted apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct State {
    words: Vec<Vec<i32>>,
}

fn canonical(words: impl IntoIterator<Item = Vec<i32>>) -> (State, i64) {
    let mut empties = 0;
    let mut out = Vec::new();
    for w in words {
        let r = free_reduce_cyclic(&w);
        if r.is_empty() {
            empties += 1;
        } else {
            out.push(min_rotation(&r));
        }
    }
    out.sort();
    (State { words: out }, empties)
}

fn exponent_counts(words: &[Vec<i32>]) -> BTreeMap<u32, (usize, usize)> {
    let mut c: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for w in words {
        for &l in w {
            let e = c.entry(l.unsigned_abs()).or_default();
            if l > 0 {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    c
}

/// `E[p_alpha(U) conj(p_beta(U))]` for `n >= |alpha|`.
fn power_sum_pairing(alpha: &Partition, beta: &Partition) -> BigInt {
    if alpha.size() != beta.size() {
        return BigInt::from(0);
    }
    let t = character_table(alpha.size());
    let (a, b) = (t.index_of(alpha), t.index_of(beta));
    t.partitions.iter().map(|l| BigInt::from(t.row(l)[a] * t.row(l)[b])).sum()
}

struct Engine {
    memo: HashMap<State, RationalFunction>,
    term_cap: u64,
    perms: HashMap<usize, (Vec<Vec<usize>>, Vec<Vec<usize>>)>,
}

impl Engine {
    fn perms(&mut self, p: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        self.perms
            .entry(p)
            .or_insert_with(|| {
                let ps = permutations(p);
                let inv = ps.iter().map(|q| inverse_perm(q)).collect();
                (ps, inv)
            })
            .clone()
    }

    fn integrate(&mut self, state: &State) -> Result<RationalFunction, Error> {
        if state.words.is_empty() {
            return Ok(RationalFunction::one());
        }
        if let Some(v) = self.memo.get(state) {
            return Ok(v.clone());
        }
        let counts = exponent_counts(&state.words);
        if counts.values().any(|&(a, b)| a != b) {
            return Ok(RationalFunction::zero());
        }
        let single = state.words.iter().all(|w| w.iter().all(|l| l.unsigned_abs() == w[0].unsigned_abs()));
        let value = if single {
            let mut prod = BigInt::from(1);
            for &g in counts.keys() {
                let mut alpha = Vec::new();
                let mut beta = Vec::new();
                for w in state.words.iter().filter(|w| w[0].unsigned_abs() == g) {
                    if w[0] > 0 {
                        alpha.push(w.len());
                    } else {
                        beta.push(w.len());
                    }
                }
                prod *= power_sum_pairing(&Partition::new(alpha), &Partition::new(beta));
            }
            RationalFunction::integer(prod)
        } else {
            let (&g, &(p, _)) = counts.iter().min_by_key(|(&g, &(p, _))| (p, g)).unwrap();
            self.eliminate(state, g as i32, p)?
        };
        self.memo.insert(state.clone(), value.clone());
        Ok(value)
    }

    /// Integrates out generator `g`, which occurs `p` times with each sign.
    fn eliminate(&mut self, state: &State, g: i32, p: usize) -> Result<RationalFunction, Error> {
        let terms = factorial(p).pow(2);
        if terms > BigInt::from(self.term_cap) {
            return Err(Error::Cap { resource: "weingarten terms", limit: self.term_cap });
        }
        // segments between consecutive g-letters of each word
        let mut rest: Vec<Vec<i32>> = Vec::new();
        let mut contents: Vec<Vec<i32>> = Vec::new();
        let mut seg_end: Vec<(bool, usize)> = Vec::new();
        let mut after_pos = vec![0usize; p];
        let mut after_neg = vec![0usize; p];
        let (mut np, mut nn) = (0, 0);
        for w in &state.words {
            let marks: Vec<usize> = (0..w.len()).filter(|&i| w[i].abs() == g).collect();
            if marks.is_empty() {
                rest.push(w.clone());
                continue;
            }
            let first_seg = contents.len();
            let mut occ = Vec::with_capacity(marks.len());
            for &i in &marks {
                if w[i] > 0 {
                    occ.push((true, np));
                    np += 1;
                } else {
                    occ.push((false, nn));
                    nn += 1;
                }
            }
            for (j, &i) in marks.iter().enumerate() {
                let next = marks[(j + 1) % marks.len()];
                let body: Vec<i32> = if next > i {
                    w[i + 1..next].to_vec()
                } else {
                    w[i + 1..].iter().chain(&w[..next]).copied().collect()
                };
                let id = first_seg + j;
                match occ[j] {
                    (true, k) => after_pos[k] = id,
                    (false, k) => after_neg[k] = id,
                }
                contents.push(body);
                seg_end.push(occ[(j + 1) % marks.len()]);
            }
        }
        let (perms, invs) = self.perms(p);
        let nseg = contents.len();

        let tally = |si: usize| -> HashMap<(State, i64, Partition), u64> {
            let sigma = &perms[si];
            let mut local: HashMap<(State, i64, Partition), u64> = HashMap::new();
            let mut next = vec![0usize; nseg];
            let mut seen = vec![false; nseg];
            for tau_inv in &invs {
                for s in 0..nseg {
                    next[s] = match seg_end[s] {
                        (true, k) => after_neg[sigma[k]],
                        (false, l) => after_pos[tau_inv[l]],
                    };
                }
                seen.iter_mut().for_each(|b| *b = false);
                let mut words = rest.clone();
                for s in 0..nseg {
                    if seen[s] {
                        continue;
                    }
                    let mut word = Vec::new();
                    let mut c = s;
                    while !seen[c] {
                        seen[c] = true;
                        word.extend_from_slice(&contents[c]);
                        c = next[c];
                    }
                    words.push(word);
                }
                let (st, empties) = canonical(words);
                let ct = cycle_type(&compose_inv(sigma, tau_inv));
                *local.entry((st, empties, ct)).or_default() += 1;
            }
            local
        };

        #[cfg(feature = "parallel")]
        let partials: Vec<HashMap<(State, i64, Partition), u64>> = {
            use rayon::prelude::*;
            (0..perms.len()).into_par_iter().map(tally).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let partials: Vec<HashMap<(State, i64, Partition), u64>> = (0..perms.len()).map(tally).collect();

        let mut merged: BTreeMap<(State, i64, Partition), u64> = BTreeMap::new();
        for part in partials {
            for (k, v) in part {
                *merged.entry(k).or_default() += v;
            }
        }
        // group Weingarten weights per resulting state before recursing
        let mut by_state: BTreeMap<State, RationalFunction> = BTreeMap::new();
        for ((st, empties, ct), count) in merged {
            let term = &wg(&ct).scale(&BigInt::from(count)) * &RationalFunction::n_pow(empties);
            let slot = by_state.entry(st).or_insert_with(RationalFunction::zero);
            *slot = &*slot + &term;
        }
        let mut total = RationalFunction::zero();
        for (st, weight) in by_state {
            if weight.is_zero() {
                continue;
            }
            let inner = self.integrate(&st)?;
            total = &total + &(&weight * &inner);
        }
        Ok(total)
    }
}

fn n_min(words: &[Word]) -> u64 {
    let signed: Vec<Vec<i32>> = words.iter().map(|w| w.signed_letters()).collect();
    exponent_counts(&signed).values().map(|&(a, b)| a.max(b) as u64).max().unwrap_or(0).max(1)
}

/// `E[tr(w_1(U)) ... tr(w_l(U))]` as an exact function of `n`.
pub fn word_moment(words: &[Word]) -> Result<Moment, Error> {
    word_moment_with_cap(words, DEFAULT_TERM_CAP)
}

pub fn word_moment_with_cap(words: &[Word], term_cap: u64) -> Result<Moment, Error> {
    let n_min = n_min(words);
    if !is_balanced(words).balanced {
        return Ok(Moment { value: RationalFunction::zero(), n_min });
    }
    let (state, empties) = canonical(words.iter().map(|w| w.signed_letters()));
    let mut engine = Engine { memo: HashMap::new(), term_cap, perms: HashMap::new() };
    let v = engine.integrate(&state)?;
    Ok(Moment { value: &v * &RationalFunction::n_pow(empties), n_min })
}

/// `E_w[xi_{m_1} ... xi_{m_l}]`, the moment of the word powers `w^{m_i}`.
pub fn moment(w: &Word, t: &TraceMonomial) -> Result<Moment, Error> {
    moment_with_cap(w, t, DEFAULT_TERM_CAP)
}

pub fn moment_with_cap(w: &Word, t: &TraceMonomial, term_cap: u64) -> Result<Moment, Error> {
    let words: Vec<Word> = t.exponents().iter().map(|&m| w.pow(m)).collect();
    word_moment_with_cap(&words, term_cap)
}

/// The same moment by one simultaneous sum over all `(sigma_x, tau_x)`,
/// counting index loops on the gaps between letters.
pub fn word_moment_by_contraction(words: &[Word], term_cap: u64) -> Result<Moment, Error> {
    let n_min = n_min(words);
    if !is_balanced(words).balanced {
        return Ok(Moment { value: RationalFunction::zero(), n_min });
    }
    let signed: Vec<Vec<i32>> = words.iter().map(|w| w.signed_letters()).collect();
    let counts = exponent_counts(&signed);
    let gens: Vec<u32> = counts.keys().copied().collect();
    let gen_index: HashMap<u32, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();

    let mut total_terms = BigInt::from(1);
    for &(p, _) in counts.values() {
        total_terms *= factorial(p).pow(2);
    }
    if total_terms > BigInt::from(term_cap) {
        return Err(Error::Cap { resource: "contraction terms", limit: term_cap });
    }

    // gap i sits before letter i of its word
    let mut identity_words = 0i64;
    let mut gap_after: Vec<Vec<usize>> = vec![Vec::new(); gens.len() * 2];
    let mut gap_ends: Vec<(usize, bool, usize)> = Vec::new();
    let mut offset = 0;
    for w in &signed {
        if w.is_empty() {
            identity_words += 1;
            continue;
        }
        for (i, &l) in w.iter().enumerate() {
            let gi = gen_index[&l.unsigned_abs()];
            let list = &mut gap_after[2 * gi + usize::from(l < 0)];
            let idx = list.len();
            list.push(offset + (i + 1) % w.len());
            gap_ends.push((gi, l > 0, idx));
        }
        offset += w.len();
    }
    let ngaps = offset;
    let tables: Vec<(Vec<Vec<usize>>, Vec<Vec<usize>>)> = counts
        .values()
        .map(|&(p, _)| {
            let ps = permutations(p);
            let inv = ps.iter().map(|q| inverse_perm(q)).collect();
            (ps, inv)
        })
        .collect();
    let radix: Vec<usize> = tables.iter().map(|(ps, _)| ps.len()).collect();

    let mut tally: BTreeMap<(Vec<Partition>, i64), u64> = BTreeMap::new();
    let mut digits = vec![0usize; 2 * gens.len()];
    let mut next = vec![0usize; ngaps];
    let mut seen = vec![false; ngaps];
    loop {
        for (s, &(gi, positive, k)) in gap_ends.iter().enumerate() {
            let (ps, invs) = &tables[gi];
            next[s] = if positive {
                gap_after[2 * gi + 1][ps[digits[2 * gi]][k]]
            } else {
                gap_after[2 * gi][invs[digits[2 * gi + 1]][k]]
            };
        }
        seen.iter_mut().for_each(|b| *b = false);
        let mut loops = 0i64;
        for s in 0..ngaps {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = next[c];
            }
        }
        let cts: Vec<Partition> = (0..gens.len())
            .map(|gi| {
                let (ps, invs) = &tables[gi];
                cycle_type(&compose_inv(&ps[digits[2 * gi]], &invs[digits[2 * gi + 1]]))
            })
            .collect();
        *tally.entry((cts, loops)).or_default() += 1;

        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                let mut total = RationalFunction::zero();
                for ((cts, loops), count) in &tally {
                    let mut term = RationalFunction::n_pow(*loops + identity_words).scale(&BigInt::from(*count));
                    for ct in cts {
                        term = &term * &wg(ct);
                    }
                    total = &total + &term;
                }
                return Ok(Moment { value: total, n_min });
            }
            digits[pos] += 1;
            if digits[pos] < radix[pos / 2] {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
