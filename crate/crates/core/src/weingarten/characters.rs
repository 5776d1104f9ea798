//! Irreducible characters of `S_p` by the Murnaghan–Nakayama rule on beta-sets.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::partition::{partitions, Partition};

/// Character values `chi^lambda(mu)` for all `lambda, mu` of one size.
#[derive(Debug)]
pub struct CharacterTable {
    pub partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn value(&self, lambda: &Partition, mu: &Partition) -> i64 {
        self.values[self.index[lambda]][self.index[mu]]
    }

    pub fn row(&self, lambda: &Partition) -> &[i64] {
        &self.values[self.index[lambda]]
    }

    pub fn index_of(&self, mu: &Partition) -> usize {
        self.index[mu]
    }
}

fn beta_set(lambda: &Partition) -> Vec<usize> {
    let l = lambda.len();
    lambda.parts().iter().enumerate().map(|(i, &p)| p + (l - 1 - i)).collect()
}

/// Removes rim hooks of the sizes in `mu`, in order.
fn mn(beta: &mut Vec<usize>, mu: &[usize], memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>) -> i64 {
    let Some((&k, rest)) = mu.split_first() else {
        return 1;
    };
    let mut sorted = beta.clone();
    sorted.sort_unstable();
    let key = (sorted, mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for i in 0..beta.len() {
        let b = beta[i];
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - k && c < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        beta[i] = b - k;
        total += sign * mn(beta, rest, memo);
        beta[i] = b;
    }
    memo.insert(key, total);
    total
}

/// `chi^lambda(mu)` for `|lambda| = |mu|`.
pub fn sp_character(lambda: &Partition, mu: &Partition) -> i64 {
    assert_eq!(lambda.size(), mu.size(), "character arguments of different sizes");
    mn(&mut beta_set(lambda), mu.parts(), &mut HashMap::new())
}

static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();

pub fn character_table(p: usize) -> Arc<CharacterTable> {
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&p) {
        return Arc::clone(t);
    }
    let parts = partitions(p);
    let index: HashMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let values = parts
        .iter()
        .map(|l| {
            let mut memo = HashMap::new();
            parts.iter().map(|m| mn(&mut beta_set(l), m.parts(), &mut memo)).collect()
        })
        .collect();
    let table = Arc::new(CharacterTable { partitions: parts, index, values });
    tables.lock().unwrap().entry(p).or_insert(table).clone()
}
