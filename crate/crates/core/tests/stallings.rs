use std::collections::BTreeSet;

use wml_core::stallings::{core_graph, fringe, membership_rewrite, FringeOptions};
use wml_core::Word;

/// A labeled multigraph with a basepoint, kept as a bare edge list.
#[derive(Clone, Debug)]
struct Naive {
    vertices: usize,
    edges: Vec<(usize, usize, usize)>,
    base: usize,
}

/// The spelling cycle of a cyclically reduced word.
fn spelling_cycle(w: &Word) -> Naive {
    let n = w.len();
    let edges = w
        .letters()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let (a, b) = (i, (i + 1) % n);
            if l.is_inverse() {
                (b, a, l.generator())
            } else {
                (a, b, l.generator())
            }
        })
        .collect();
    Naive { vertices: n, edges, base: 0 }
}

fn relabel(g: &Naive, class: &[usize]) -> Naive {
    let mut ids: Vec<usize> = class.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let at = |v: usize| ids.binary_search(&class[v]).unwrap();
    Naive {
        vertices: ids.len(),
        edges: g.edges.iter().map(|&(a, b, l)| (at(a), at(b), l)).collect(),
        base: at(g.base),
    }
}

/// Folds by scanning for two edges with a shared endpoint and label until none remain.
fn naive_fold(mut g: Naive) -> Naive {
    loop {
        let mut merge = None;
        'scan: for i in 0..g.edges.len() {
            for j in i + 1..g.edges.len() {
                let (a, b, l) = g.edges[i];
                let (c, d, m) = g.edges[j];
                if l != m {
                    continue;
                }
                if a == c {
                    merge = Some((i, j, b, d));
                    break 'scan;
                }
                if b == d {
                    merge = Some((i, j, a, c));
                    break 'scan;
                }
            }
        }
        let Some((_, j, u, v)) = merge else { return g };
        g.edges.remove(j);
        let (keep, drop) = (u.min(v), u.max(v));
        let class: Vec<usize> = (0..g.vertices).map(|x| if x == drop { keep } else { x }).collect();
        g = relabel(&g, &class);
    }
}

/// Removes non-basepoint vertices of degree one, repeatedly.
fn naive_trim(mut g: Naive) -> Naive {
    loop {
        let deg = |v: usize| g.edges.iter().map(|&(a, b, _)| (a == v) as usize + (b == v) as usize).sum::<usize>();
        let Some(v) = (0..g.vertices).find(|&v| v != g.base && deg(v) <= 1) else { return g };
        g.edges.retain(|&(a, b, _)| a != v && b != v);
        let keep: Vec<usize> = (0..g.vertices).filter(|&x| x != v).collect();
        let class: Vec<usize> = (0..g.vertices).map(|x| if x == v { keep[0] } else { x }).collect();
        g = relabel(&g, &class);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Basepoint- and label-preserving isomorphism by trying every bijection.
fn isomorphic(g: &Naive, h: &Naive) -> bool {
    if g.vertices != h.vertices || g.edges.len() != h.edges.len() {
        return false;
    }
    let mut target: Vec<(usize, usize, usize)> = h.edges.clone();
    target.sort_unstable();
    permutations(g.vertices).into_iter().any(|p| {
        if p[g.base] != h.base {
            return false;
        }
        let mut mapped: Vec<_> = g.edges.iter().map(|&(a, b, l)| (p[a], p[b], l)).collect();
        mapped.sort_unstable();
        mapped == target
    })
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            cur.push(b);
            go(n, cur, out);
            cur.pop();
        }
    }
    go(n, &mut cur, &mut out);
    out
}

/// Distinct subgroups among the folded quotients of the spelling cycle.
fn naive_fringe(w: &Word) -> Vec<Naive> {
    let cycle = spelling_cycle(w);
    let mut classes: Vec<Naive> = Vec::new();
    for p in set_partitions(cycle.vertices) {
        let g = naive_trim(naive_fold(relabel(&cycle, &p)));
        if !classes.iter().any(|h| isomorphic(h, &g)) {
            classes.push(g);
        }
    }
    classes
}

fn rank(g: &Naive) -> usize {
    g.edges.len() + 1 - g.vertices
}

fn w(s: &str) -> Word {
    Word::parse(s, 2).unwrap()
}

#[test]
fn fringe_sizes_match_a_naive_enumeration() {
    // frozen from the naive oracle
    let expected = [("[x,y]", 7), ("x x y y", 7), ("[x,y^2]", 16), ("x y x Y", 7)];
    for (text, size) in expected {
        let word = w(text);
        let naive = naive_fringe(&word);
        assert_eq!(naive.len(), size, "naive oracle for {text}");
        let members = fringe(&word, &FringeOptions::default()).unwrap();
        assert_eq!(members.len(), size, "fringe of {text}");
        let mut a: Vec<usize> = naive.iter().map(rank).collect();
        let mut b: Vec<usize> = members.iter().map(|m| m.rank()).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "rank multiset for {text}");
    }
}

#[test]
fn fringe_members_contain_the_word() {
    for text in ["[x,y]", "[x,y^2]", "x x y y", "x y x y X Y"] {
        let word = w(text);
        for m in fringe(&word, &FringeOptions::default()).unwrap() {
            assert!(m.graph.contains(&word), "{text} not in {}", m.key);
            let r = membership_rewrite(&m.graph, &m.basis, &word).unwrap();
            let back = r.letters().iter().fold(Word::identity(2), |acc, l| {
                let b = &m.basis.words[l.generator() - 1];
                acc.mul(&if l.is_inverse() { b.inverse() } else { b.clone() })
            });
            assert_eq!(back, word);
        }
    }
}

#[test]
fn fringe_is_conjugation_covariant() {
    for text in ["[x,y]", "[x,y^2]", "x x y Y x y"] {
        let word = w(text).cyclic_core();
        let base = fringe(&word, &FringeOptions::default()).unwrap();
        let mut ranks: Vec<usize> = base.iter().map(|m| m.rank()).collect();
        ranks.sort_unstable();
        for k in 1..word.len() {
            let rotated = fringe(&word.rotate(k), &FringeOptions::default()).unwrap();
            let mut r: Vec<usize> = rotated.iter().map(|m| m.rank()).collect();
            r.sort_unstable();
            assert_eq!(r, ranks, "{text} rotated by {k}");
        }
    }
}

#[test]
fn fringe_keys_are_distinct_and_sorted_by_rank() {
    let members = fringe(&w("[x,y^2]"), &FringeOptions::default()).unwrap();
    let keys: BTreeSet<&str> = members.iter().map(|m| m.key.as_str()).collect();
    assert_eq!(keys.len(), members.len());
    assert!(members.windows(2).all(|p| p[0].rank() <= p[1].rank()));
}

#[test]
fn core_graph_of_two_generators_folds_to_a_rank_two_graph() {
    let g = core_graph(&[w("x x"), w("x y X")], 2);
    assert_eq!((g.num_vertices(), g.rank()), (2, 2));
    assert!(g.contains(&w("x x")));
    assert!(g.contains(&w("x y X")));
    assert!(!g.contains(&w("x")));
    assert!(g.contains(&w("x x x y X X X")));
}
