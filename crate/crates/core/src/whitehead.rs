//! Whitehead automorphisms and the orbit questions they decide: minimal
//! cyclic length, primitivity, lying in a proper free factor, and
//! `Aut(F_k)`-equivalence of conjugacy classes.
//!
//! Everything here works with cyclic words. Orbit exploration identifies
//! cyclic words that differ by a permutation-inversion of the generators
//! (type I automorphisms), so breadth-first search only needs type II moves.

use std::collections::{HashSet, VecDeque};

use crate::words::{Letter, Word};
use crate::Error;

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WhiteheadAuto {
    /// Generator `i` (1-based) is sent to the signed generator `images[i-1]`.
    TypeI { images: Vec<i32> },
    /// `(A, a)` with `a` in `A` and `a^-1` not in `A`. For `x` other than
    /// `a^{±1}`: `x -> [a^-1 if x^-1 in A] x [a if x in A]`.
    TypeII { multiplier: i32, set: Vec<i32> },
}

impl WhiteheadAuto {
    fn letter_image(&self, l: i32) -> Vec<i32> {
        let g = l.unsigned_abs() as i32;
        let positive = match self {
            WhiteheadAuto::TypeI { images } => vec![images[g as usize - 1]],
            WhiteheadAuto::TypeII { multiplier, set } => {
                let a = *multiplier;
                if g == a.abs() {
                    vec![g]
                } else {
                    let mut img = Vec::with_capacity(3);
                    if set.contains(&-g) {
                        img.push(-a);
                    }
                    img.push(g);
                    if set.contains(&g) {
                        img.push(a);
                    }
                    img
                }
            }
        };
        if l > 0 {
            positive
        } else {
            positive.iter().rev().map(|&x| -x).collect()
        }
    }

    /// Image of `w`, freely reduced (not cyclically).
    pub fn apply(&self, w: &Word) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(w.len() + 4);
        for l in w.letters() {
            for x in self.letter_image(l.signed()) {
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
        }
        Word::from_signed(&out, w.rank())
    }

    pub fn inverse(&self) -> WhiteheadAuto {
        match self {
            WhiteheadAuto::TypeI { images } => {
                let mut inv = vec![0; images.len()];
                for (i, &img) in images.iter().enumerate() {
                    inv[img.unsigned_abs() as usize - 1] = (i as i32 + 1) * img.signum();
                }
                WhiteheadAuto::TypeI { images: inv }
            }
            WhiteheadAuto::TypeII { multiplier, set } => {
                let mut s: Vec<i32> = set.iter().copied().filter(|&x| x != *multiplier).collect();
                s.push(-multiplier);
                s.sort_unstable();
                WhiteheadAuto::TypeII { multiplier: -multiplier, set: s }
            }
        }
    }
}

/// All non-trivial, non-inner type II automorphisms of `F_k`.
pub fn type_ii(k: usize) -> Vec<WhiteheadAuto> {
    let mut autos = Vec::new();
    let letters: Vec<i32> = (1..=k as i32).flat_map(|g| [g, -g]).collect();
    for &a in &letters {
        let others: Vec<i32> = letters.iter().copied().filter(|&x| x.abs() != a.abs()).collect();
        let full = (1u64 << others.len()) - 1;
        for mask in 1..full {
            let mut set: Vec<i32> =
                others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            set.push(a);
            set.sort_unstable();
            autos.push(WhiteheadAuto::TypeII { multiplier: a, set });
        }
    }
    autos
}

/// All permutation-inversions of the generators of `F_k`.
pub fn type_i(k: usize) -> Vec<WhiteheadAuto> {
    let mut perms: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &perms {
            for g in 1..=k as i32 {
                if !p.iter().any(|&x| x.abs() == g) {
                    for s in [g, -g] {
                        let mut q = p.clone();
                        q.push(s);
                        next.push(q);
                    }
                }
            }
        }
        perms = next;
    }
    perms.into_iter().map(|images| WhiteheadAuto::TypeI { images }).collect()
}

#[derive(Clone, Debug)]
pub struct Minimized {
    /// Cyclically reduced, of minimal length in the orbit.
    pub word: Word,
    pub trace: Vec<WhiteheadAuto>,
}

fn cyclic_image(auto: &WhiteheadAuto, w: &Word) -> Word {
    auto.apply(w).cyclic_core()
}

/// Applies length-reducing Whitehead automorphisms until none remains.
pub fn minimize(w: &Word, k: usize) -> Minimized {
    let w = w.clone().with_rank(k);
    let mut cur = w.cyclic_core();
    let autos = type_ii(k);
    let mut trace = Vec::new();
    loop {
        let mut best: Option<(usize, usize, Word)> = None;
        for (i, a) in autos.iter().enumerate() {
            let img = cyclic_image(a, &cur);
            if img.len() < cur.len() && best.as_ref().is_none_or(|b| img.len() < b.1) {
                best = Some((i, img.len(), img));
            }
        }
        match best {
            Some((i, _, img)) => {
                trace.push(autos[i].clone());
                cur = img;
            }
            None => break,
        }
    }
    Minimized { word: cur, trace }
}

pub fn is_primitive(w: &Word, k: usize) -> bool {
    minimize(w, k).word.len() == 1
}

/// Representative of a cyclic word up to rotation and relabeling of
/// generators (with inversions): for every rotation, renumber generators in
/// order of first appearance with that appearance made positive; keep the
/// smallest spelling.
pub fn orbit_canonical(w: &Word) -> Vec<i32> {
    let core = w.cyclic_core();
    let letters = core.signed_letters();
    let n = letters.len();
    let mut best: Option<Vec<i32>> = None;
    let width = core.max_generator() + 1;
    let mut map = vec![0i32; width];
    for r in 0..n.max(1) {
        map.iter_mut().for_each(|m| *m = 0);
        let mut next = 1;
        let mut spelled = Vec::with_capacity(n);
        for i in 0..n {
            let l = letters[(i + r) % n];
            let g = l.unsigned_abs() as usize;
            if map[g] == 0 {
                map[g] = next * l.signum();
                next += 1;
            }
            spelled.push(map[g] * l.signum());
        }
        if best.as_ref().is_none_or(|b| spelled < *b) {
            best = Some(spelled);
        }
    }
    best.unwrap_or_default()
}

fn distinct_generators(letters: &[i32]) -> usize {
    let mut g: Vec<u32> = letters.iter().map(|l| l.unsigned_abs()).collect();
    g.sort_unstable();
    g.dedup();
    g.len()
}

/// Breadth-first search over the minimal level of the orbit of `start`
/// (already minimal), stopping as soon as `stop` holds for a member.
fn search_minimal_level(
    start: &Word,
    k: usize,
    cap: usize,
    mut stop: impl FnMut(&[i32]) -> bool,
) -> Result<bool, Error> {
    let autos = type_ii(k);
    let first = orbit_canonical(start);
    if stop(&first) {
        return Ok(true);
    }
    let target_len = first.len();
    let mut seen: HashSet<Vec<i32>> = HashSet::from([first.clone()]);
    let mut queue = VecDeque::from([first]);
    while let Some(cur) = queue.pop_front() {
        let word = Word::from_signed(&cur, k);
        for a in &autos {
            let img = cyclic_image(a, &word);
            if img.len() != target_len {
                continue;
            }
            let c = orbit_canonical(&img);
            if seen.contains(&c) {
                continue;
            }
            if stop(&c) {
                return Ok(true);
            }
            if seen.len() >= cap {
                return Err(Error::Cap { resource: "whitehead orbit", limit: cap as u64 });
            }
            seen.insert(c.clone());
            queue.push_back(c);
        }
    }
    Ok(false)
}

/// Whether `w` lies in a proper free factor of `F_k`.
pub fn in_proper_free_factor(w: &Word, k: usize, cap: usize) -> Result<bool, Error> {
    if w.is_identity() {
        return Err(Error::Invalid("free factor test of the identity".into()));
    }
    let m = minimize(w, k).word;
    search_minimal_level(&m, k, cap, |c| distinct_generators(c) < k)
}

/// Whether the conjugacy classes of `u` and `v` lie in the same `Aut(F_k)`-orbit.
pub fn orbit_equivalent(u: &Word, v: &Word, k: usize, cap: usize) -> Result<bool, Error> {
    let mu = minimize(u, k).word;
    let mv = minimize(v, k).word;
    if mu.len() != mv.len() {
        return Ok(false);
    }
    let target = orbit_canonical(&mv);
    search_minimal_level(&mu, k, cap, |c| c == target.as_slice())
}

/// Standard surface word `[a1,b1]...[ag,bg]` with `a_i = x_{2i-1}`, `b_i = x_{2i}`.
pub fn surface_word(genus: usize) -> Word {
    let mut letters = Vec::with_capacity(4 * genus);
    for i in 0..genus as i32 {
        let (a, b) = (2 * i + 1, 2 * i + 2);
        letters.extend([a, b, -a, -b]);
    }
    Word::from_letters(letters.into_iter().map(Letter::from_signed), 2 * genus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    #[test]
    fn autos_are_invertible() {
        let words = [w("[x,y]^2 x", 2), w("x y^3 X y", 2), w("x z Y x x", 3)];
        for k in [2, 3] {
            for a in type_ii(k).iter().chain(type_i(k).iter()) {
                for word in &words {
                    if word.max_generator() > k {
                        continue;
                    }
                    let word = word.clone().with_rank(k);
                    let inv = a.inverse();
                    assert_eq!(inv.apply(&a.apply(&word)), word, "{a:?}");
                }
            }
        }
    }

    #[test]
    fn type_counts() {
        // 2k multipliers, subsets of the other 2k-2 letters minus empty and full
        assert_eq!(type_ii(2).len(), 4 * 2);
        assert_eq!(type_ii(3).len(), 6 * 14);
        assert_eq!(type_i(2).len(), 8);
        assert_eq!(type_i(3).len(), 48);
    }

    #[test]
    fn minimize_examples() {
        assert_eq!(minimize(&w("xy", 2), 2).word.len(), 1);
        assert_eq!(minimize(&w("[x,y]", 2), 2).word.len(), 4);
        assert_eq!(minimize(&w("x", 1), 1).word, w("x", 1));
        let m = minimize(&w("x y x y x Y", 2), 2);
        let mut len = w("x y x y x Y", 2).cyclic_length();
        let mut cur = w("x y x y x Y", 2).cyclic_core();
        for a in &m.trace {
            cur = a.apply(&cur).cyclic_core();
            assert!(cur.len() < len);
            len = cur.len();
        }
        assert_eq!(cur, m.word);
    }

    #[test]
    fn commutator_admits_no_reduction() {
        // brute force over every type II automorphism of F_2
        let c = w("[x,y]", 2);
        for a in type_ii(2) {
            assert!(a.apply(&c).cyclic_length() >= 4);
        }
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&w("x", 2), 2));
        assert!(is_primitive(&w("x y x y y", 2), 2));
        assert!(!is_primitive(&w("[x,y]", 2), 2));
        assert!(!is_primitive(&w("x^2 y^2", 2), 2));
        assert!(!is_primitive(&w("x^2", 1), 1));
    }

    #[test]
    fn free_factor_examples() {
        assert!(in_proper_free_factor(&w("x", 2), 2, DEFAULT_ORBIT_CAP).unwrap());
        assert!(!in_proper_free_factor(&w("[x,y]", 2), 2, DEFAULT_ORBIT_CAP).unwrap());
        assert!(!in_proper_free_factor(&w("x^2 y^2", 2), 2, DEFAULT_ORBIT_CAP).unwrap());
        // [x,y] sits in the factor <x,y> of F_3
        assert!(in_proper_free_factor(&w("[x,y]", 3), 3, DEFAULT_ORBIT_CAP).unwrap());
        // x y^2 is not minimal but becomes x^... after reduction: still in <x y^2>, a factor
        assert!(in_proper_free_factor(&w("x y x y^2", 2), 2, DEFAULT_ORBIT_CAP).unwrap());
    }

    #[test]
    fn orbit_examples() {
        let cap = DEFAULT_ORBIT_CAP;
        assert!(orbit_equivalent(&w("[x,y]", 2), &w("[y,x]", 2), 2, cap).unwrap());
        assert!(!orbit_equivalent(&w("[x,y]", 2), &w("x^2 y^2", 2), 2, cap).unwrap());
        assert!(orbit_equivalent(&w("x", 2), &w("xy", 2), 2, cap).unwrap());
        assert!(orbit_equivalent(&w("[x,y^2]", 2), &w("[x^2,y]", 2), 2, cap).unwrap());
        assert!(!orbit_equivalent(&w("[x,y^2]", 2), &w("[x,y]", 2), 2, cap).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        let err = in_proper_free_factor(&w("[x,y][x,z]", 3), 3, 1).unwrap_err();
        assert!(matches!(err, Error::Cap { .. }));
    }

    #[test]
    fn surface_words() {
        assert_eq!(surface_word(1), w("[x,y]", 2));
        assert_eq!(surface_word(2).signed_letters(), vec![1, 2, -1, -2, 3, 4, -3, -4]);
    }
}
