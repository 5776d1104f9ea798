//! Integer partitions, hooks and contents.

use num_bigint::BigInt;
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts into weakly decreasing order and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Cells as `(row, column)`, both 0-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells().map(|(i, j)| (self.0[i] - j - 1) + (conj.0[j] - i - 1) + 1).collect()
    }

    /// `j - i` for each cell.
    pub fn contents(&self) -> Vec<i64> {
        self.cells().map(|(i, j)| j as i64 - i as i64).collect()
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn dimension(&self) -> BigInt {
        let num = factorial(self.size());
        let den = self.hooks().iter().fold(BigInt::one(), |a, &h| a * h);
        num / den
    }

    /// `z_mu = prod_k k^{m_k} m_k!`, the centralizer order of this cycle type.
    pub fn centralizer(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let k = self.0[i];
            let m = self.0[i..].iter().take_while(|&&p| p == k).count();
            z *= BigInt::from(k).pow(m as u32) * factorial(m);
            i += m;
        }
        z
    }

    pub fn sign(&self) -> i64 {
        if self.0.iter().filter(|&&p| p % 2 == 0).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// All partitions of `p`, in reverse lexicographic order.
pub fn partitions(p: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            rec(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, p, &mut Vec::new(), &mut out);
    out
}

/// Cycle type of a permutation given as an image vector.
pub fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts)
}
