//! Stallings graphs: labeled graphs immersing into the rose, used to
//! represent finitely generated subgroups of `F_r`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::words::{Letter, Word};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Generator index, starting at 1.
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    num_vertices: usize,
    edges: Vec<Edge>,
    basepoint: usize,
    marked: BTreeSet<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// Keeps the smaller root so the basepoint (vertex 0 in practice) stays a root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }
}

impl LabeledGraph {
    /// A graph with a single vertex, the basepoint.
    pub fn new() -> LabeledGraph {
        LabeledGraph { num_vertices: 1, edges: Vec::new(), basepoint: 0, marked: BTreeSet::new() }
    }

    pub fn from_parts(
        num_vertices: usize,
        edges: Vec<Edge>,
        basepoint: usize,
        marked: impl IntoIterator<Item = usize>,
    ) -> LabeledGraph {
        assert!(basepoint < num_vertices);
        for e in &edges {
            assert!(e.src < num_vertices && e.dst < num_vertices && e.label >= 1);
        }
        let marked: BTreeSet<usize> = marked.into_iter().collect();
        assert!(marked.iter().all(|&v| v < num_vertices));
        LabeledGraph { num_vertices, edges, basepoint, marked }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, label: usize) {
        assert!(src < self.num_vertices && dst < self.num_vertices && label >= 1);
        self.edges.push(Edge { src, dst, label });
    }

    /// Adds a path spelling `word` from `from` to `to`, creating interior vertices.
    pub fn add_path(&mut self, from: usize, to: usize, word: &Word) {
        let letters = word.letters();
        if letters.is_empty() {
            if from != to {
                // an empty path identifies its endpoints; encoded by folding later
                let mut uf = UnionFind::new(self.num_vertices);
                uf.union(from, to);
                *self = self.quotient_by(&mut uf);
            }
            return;
        }
        let mut cur = from;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() { to } else { self.add_vertex() };
            self.add_letter_edge(cur, next, *l);
            cur = next;
        }
    }

    fn add_letter_edge(&mut self, from: usize, to: usize, l: Letter) {
        if l.is_inverse() {
            self.add_edge(to, from, l.generator());
        } else {
            self.add_edge(from, to, l.generator());
        }
    }

    pub fn mark(&mut self, v: usize) {
        assert!(v < self.num_vertices);
        self.marked.insert(v);
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    /// `E - V + 1`; the graph is assumed connected.
    pub fn rank(&self) -> usize {
        (self.edges.len() + 1)
            .checked_sub(self.num_vertices)
            .expect("rank of a disconnected graph")
    }

    pub fn max_label(&self) -> usize {
        self.edges.iter().map(|e| e.label).max().unwrap_or(0)
    }

    /// No vertex has two outgoing, or two incoming, edges with the same label.
    pub fn is_folded(&self) -> bool {
        let mut out = BTreeSet::new();
        let mut inc = BTreeSet::new();
        self.edges
            .iter()
            .all(|e| out.insert((e.src, e.label)) && inc.insert((e.dst, e.label)))
    }

    fn quotient_by(&self, uf: &mut UnionFind) -> LabeledGraph {
        let mut ids = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        // basepoint class gets id 0
        let order = std::iter::once(self.basepoint).chain(0..self.num_vertices);
        for v in order {
            let r = uf.find(v);
            if ids[r] == usize::MAX {
                ids[r] = count;
                count += 1;
            }
        }
        let mut id = |v: usize| ids[uf.find(v)];
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge { src: id(e.src), dst: id(e.dst), label: e.label })
            .collect();
        edges.sort();
        edges.dedup();
        let marked = self.marked.iter().map(|&v| id(v)).collect();
        LabeledGraph { num_vertices: count, edges, basepoint: id(self.basepoint), marked }
    }

    /// Identifies vertices according to `class_of` (one class id per vertex)
    /// without folding.
    pub fn quotient(&self, class_of: &[usize]) -> LabeledGraph {
        assert_eq!(class_of.len(), self.num_vertices);
        let mut uf = UnionFind::new(self.num_vertices);
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (v, &c) in class_of.iter().enumerate() {
            match first.get(&c) {
                Some(&u) => {
                    uf.union(u, v);
                }
                None => {
                    first.insert(c, v);
                }
            }
        }
        self.quotient_by(&mut uf)
    }

    /// Stallings folding. The result does not depend on the order in which
    /// folds are performed.
    pub fn fold(&self) -> LabeledGraph {
        let mut uf = UnionFind::new(self.num_vertices);
        let mut out: HashMap<(usize, usize), usize> = HashMap::with_capacity(self.edges.len());
        let mut inc: HashMap<(usize, usize), usize> = HashMap::with_capacity(self.edges.len());
        loop {
            let mut changed = false;
            out.clear();
            inc.clear();
            for e in &self.edges {
                let (s, t) = (uf.find(e.src), uf.find(e.dst));
                if let Some(&t2) = out.get(&(s, e.label)) {
                    if uf.union(t, t2) {
                        changed = true;
                    }
                } else {
                    out.insert((s, e.label), t);
                }
                let (s, t) = (uf.find(e.src), uf.find(e.dst));
                if let Some(&s2) = inc.get(&(t, e.label)) {
                    if uf.union(s, s2) {
                        changed = true;
                    }
                } else {
                    inc.insert((t, e.label), s);
                }
            }
            if !changed {
                break;
            }
        }
        self.quotient_by(&mut uf)
    }

    /// Restricts to the basepoint component and repeatedly removes degree-1
    /// and isolated vertices other than the basepoint and marked vertices.
    pub fn trim(&self) -> LabeledGraph {
        let n = self.num_vertices;
        let mut alive = vec![false; n];
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src].push((i, e.dst));
            adj[e.dst].push((i, e.src));
        }
        let mut queue = VecDeque::from([self.basepoint]);
        alive[self.basepoint] = true;
        while let Some(v) = queue.pop_front() {
            for &(_, u) in &adj[v] {
                if !alive[u] {
                    alive[u] = true;
                    queue.push_back(u);
                }
            }
        }
        let mut edge_alive: Vec<bool> = self.edges.iter().map(|e| alive[e.src]).collect();
        let mut degree = vec![0usize; n];
        for e in &self.edges {
            if alive[e.src] {
                degree[e.src] += 1;
                degree[e.dst] += 1;
            }
        }
        let keep = |v: usize| v == self.basepoint || self.marked.contains(&v);
        let mut stack: Vec<usize> =
            (0..n).filter(|&v| alive[v] && degree[v] <= 1 && !keep(v)).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || degree[v] > 1 || keep(v) {
                continue;
            }
            alive[v] = false;
            for &(i, u) in &adj[v] {
                if edge_alive[i] {
                    edge_alive[i] = false;
                    degree[v] -= 1;
                    degree[u] -= 1;
                    if alive[u] && degree[u] <= 1 && !keep(u) {
                        stack.push(u);
                    }
                }
            }
        }
        let mut ids = vec![usize::MAX; n];
        let mut count = 0;
        for v in std::iter::once(self.basepoint).chain(0..n) {
            if alive[v] && ids[v] == usize::MAX {
                ids[v] = count;
                count += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(&edge_alive)
            .filter(|(_, &a)| a)
            .map(|(e, _)| Edge { src: ids[e.src], dst: ids[e.dst], label: e.label })
            .collect();
        let marked = self.marked.iter().filter(|&&v| alive[v]).map(|&v| ids[v]).collect();
        LabeledGraph { num_vertices: count, edges, basepoint: ids[self.basepoint], marked }
    }

    /// Folded, trimmed, canonically numbered form.
    pub fn core(&self) -> LabeledGraph {
        self.fold().trim().canonical()
    }

    /// Breadth-first renumbering from the basepoint; at each vertex outgoing
    /// edges are visited by label, then incoming edges by label. Only the
    /// basepoint component survives. Requires a folded graph.
    pub fn canonical(&self) -> LabeledGraph {
        debug_assert!(self.is_folded());
        let n = self.num_vertices;
        let mut nbrs: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); n];
        for e in &self.edges {
            nbrs[e.src].push((e.label, false, e.dst));
            nbrs[e.dst].push((e.label, true, e.src));
        }
        for list in &mut nbrs {
            list.sort_by_key(|&(label, incoming, _)| (incoming, label));
        }
        let mut ids = vec![usize::MAX; n];
        ids[self.basepoint] = 0;
        let mut count = 1;
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(v) = queue.pop_front() {
            for &(_, _, u) in &nbrs[v] {
                if ids[u] == usize::MAX {
                    ids[u] = count;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| ids[e.src] != usize::MAX)
            .map(|e| Edge { src: ids[e.src], dst: ids[e.dst], label: e.label })
            .collect();
        edges.sort();
        let marked = self
            .marked
            .iter()
            .filter(|&&v| ids[v] != usize::MAX)
            .map(|&v| ids[v])
            .collect();
        LabeledGraph { num_vertices: count, edges, basepoint: 0, marked }
    }

    /// Line-based serialization: a `marked` header line, then one
    /// `src dst label` line per edge. Equal strings for canonical graphs mean
    /// isomorphic based labeled graphs.
    pub fn serialize(&self) -> String {
        let mut s = String::from("marked");
        for v in &self.marked {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
        let mut edges = self.edges.clone();
        edges.sort();
        for e in edges {
            let _ = writeln!(s, "{} {} {}", e.src, e.dst, e.label);
        }
        s
    }

    /// Canonical serialization of the folded core.
    pub fn canonical_key(&self) -> String {
        self.core().serialize()
    }

    /// Identifies every marked vertex with the basepoint and folds.
    pub fn wedge_marked(&self) -> LabeledGraph {
        let mut uf = UnionFind::new(self.num_vertices);
        for &m in &self.marked {
            uf.union(self.basepoint, m);
        }
        let mut g = self.quotient_by(&mut uf);
        let had_marks = !g.marked.is_empty();
        g.marked.clear();
        if had_marks {
            g.marked.insert(g.basepoint);
        }
        g.core()
    }

    fn adjacency(&self) -> Adjacency {
        let mut out = HashMap::new();
        let mut inc = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            out.insert((e.src, e.label), (i, e.dst));
            inc.insert((e.dst, e.label), (i, e.src));
        }
        Adjacency { out, inc }
    }

    /// Free basis from a breadth-first spanning tree at the basepoint.
    /// Requires a folded, connected graph.
    pub fn basis(&self) -> SubgroupBasis {
        let n = self.num_vertices;
        let mut nbrs: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            nbrs[e.src].push((i, e.dst, false));
            nbrs[e.dst].push((i, e.src, true));
        }
        let mut path: Vec<Option<Word>> = vec![None; n];
        let rank = self.max_label();
        path[self.basepoint] = Some(Word::identity(rank));
        let mut tree = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(v) = queue.pop_front() {
            for &(i, u, backwards) in &nbrs[v] {
                if path[u].is_none() {
                    tree[i] = true;
                    let l = Letter::new(self.edges[i].label, backwards);
                    path[u] = Some(path[v].as_ref().unwrap().mul(&Word::from_letters([l], rank)));
                    queue.push_back(u);
                }
            }
        }
        let mut generators = Vec::new();
        let mut edge_generator = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if tree[i] {
                continue;
            }
            let (Some(ps), Some(pt)) = (&path[e.src], &path[e.dst]) else { continue };
            edge_generator[i] = Some(generators.len());
            generators.push(ps.mul(&Word::generator(e.label, rank)).mul(&pt.inverse()));
        }
        SubgroupBasis { words: generators, edge_generator }
    }

    /// Follows `w` from the basepoint. Returns the edge walk and whether it
    /// closed up at the basepoint; `None` if the walk falls off the graph.
    fn trace(&self, adj: &Adjacency, w: &Word) -> Option<(Vec<(usize, bool)>, bool)> {
        let mut v = self.basepoint;
        let mut walk = Vec::with_capacity(w.len());
        for l in w.letters() {
            let key = (v, l.generator());
            let (i, next) = if l.is_inverse() { *adj.inc.get(&key)? } else { *adj.out.get(&key)? };
            walk.push((i, l.is_inverse()));
            v = next;
        }
        Some((walk, v == self.basepoint))
    }

    pub fn contains(&self, w: &Word) -> bool {
        matches!(self.trace(&self.adjacency(), w), Some((_, true)))
    }
}

impl Default for LabeledGraph {
    fn default() -> Self {
        LabeledGraph::new()
    }
}

struct Adjacency {
    out: HashMap<(usize, usize), (usize, usize)>,
    inc: HashMap<(usize, usize), (usize, usize)>,
}

/// Ordered free basis of the subgroup carried by a folded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupBasis {
    pub words: Vec<Word>,
    edge_generator: Vec<Option<usize>>,
}

impl SubgroupBasis {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Core graph of `<generators>`: a wedge of loops at the basepoint, folded and trimmed.
pub fn core_graph(generators: &[Word], _rank: usize) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for w in generators {
        if !w.is_identity() {
            g.add_path(0, 0, w);
        }
    }
    g.core()
}

/// Rewrites `w` in the basis of `graph`, or `None` if `w` is not in the subgroup.
/// The result is a word over `basis.len()` letters.
pub fn membership_rewrite(graph: &LabeledGraph, basis: &SubgroupBasis, w: &Word) -> Option<Word> {
    let (walk, closed) = graph.trace(&graph.adjacency(), w)?;
    if !closed {
        return None;
    }
    let rank = basis.len().max(1);
    let letters = walk.into_iter().filter_map(|(i, backwards)| {
        basis.edge_generator[i].map(|g| Letter::new(g + 1, backwards))
    });
    Some(Word::from_letters(letters, rank).with_rank(basis.len()))
}

/// Restricted-growth strings: every set partition of `0..n` exactly once.
pub struct SetPartitions {
    a: Vec<usize>,
    max: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> SetPartitions {
        SetPartitions { a: vec![0; n], max: vec![0; n], done: false }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.a.clone();
        let n = self.a.len();
        // advance: rightmost position that can be incremented
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let bound = self.max[i - 1] + 1;
            if self.a[i] < bound {
                self.a[i] += 1;
                self.max[i] = self.max[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.max[j] = self.max[j - 1];
                }
                break;
            }
        }
        Some(current)
    }
}

#[derive(Clone, Debug)]
pub struct FringeOptions {
    /// Largest core-graph vertex count enumerated without `force`.
    pub vertex_cap: usize,
    pub force: bool,
}

impl Default for FringeOptions {
    fn default() -> Self {
        FringeOptions { vertex_cap: 12, force: false }
    }
}

#[derive(Clone, Debug)]
pub struct FringeMember {
    pub graph: LabeledGraph,
    pub basis: SubgroupBasis,
    pub key: String,
}

impl FringeMember {
    pub fn rank(&self) -> usize {
        self.graph.rank()
    }
}

fn fringe_key(base: &LabeledGraph, partition: &[usize]) -> (String, LabeledGraph) {
    let g = base.quotient(partition).core();
    (g.serialize(), g)
}

/// All distinct subgroups obtained as folded quotients of the core graph of
/// `<w>`, ordered by `(rank, canonical key)`.
pub fn fringe(w: &Word, opts: &FringeOptions) -> Result<Vec<FringeMember>, Error> {
    if w.is_identity() {
        return Err(Error::Invalid("fringe of the identity".into()));
    }
    let base = core_graph(std::slice::from_ref(w), w.rank());
    let n = base.num_vertices();
    if n > opts.vertex_cap && !opts.force {
        return Err(Error::Cap { resource: "fringe vertices", limit: opts.vertex_cap as u64 });
    }
    let mut seen: BTreeMap<String, LabeledGraph> = BTreeMap::new();
    let mut batch: Vec<Vec<usize>> = Vec::with_capacity(8192);
    let flush = |batch: &mut Vec<Vec<usize>>, seen: &mut BTreeMap<String, LabeledGraph>| {
        #[cfg(feature = "parallel")]
        let found: Vec<(String, LabeledGraph)> = {
            use rayon::prelude::*;
            batch.par_iter().map(|p| fringe_key(&base, p)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let found: Vec<(String, LabeledGraph)> = batch.iter().map(|p| fringe_key(&base, p)).collect();
        for (k, g) in found {
            seen.entry(k).or_insert(g);
        }
        batch.clear();
    };
    for p in SetPartitions::new(n) {
        batch.push(p);
        if batch.len() == batch.capacity() {
            flush(&mut batch, &mut seen);
        }
    }
    flush(&mut batch, &mut seen);
    let mut members: Vec<FringeMember> = seen
        .into_iter()
        .map(|(key, graph)| FringeMember { basis: graph.basis(), graph, key })
        .collect();
    members.sort_by(|a, b| (a.rank(), &a.key).cmp(&(b.rank(), &b.key)));
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, r: usize) -> Word {
        Word::parse(s, r).unwrap()
    }

    #[test]
    fn commutator_core_graph_is_a_four_cycle() {
        let g = core_graph(&[w("[x,y]", 2)], 2);
        assert_eq!((g.num_vertices(), g.num_edges(), g.rank()), (4, 4, 1));
        assert!(g.is_folded());
        assert!(g.contains(&w("[x,y]", 2)));
        assert!(!g.contains(&w("x", 2)));
    }

    #[test]
    fn generators_give_the_rose() {
        let g = core_graph(&[w("x", 2), w("y", 2)], 2);
        assert_eq!((g.num_vertices(), g.num_edges()), (1, 2));
    }

    #[test]
    fn hand_folded_example() {
        // <x^2, x y x^-1>: the two x-edges out of the basepoint fold, leaving
        // an x-cycle of length 2 with a y-loop at the far vertex.
        let g = core_graph(&[w("x^2", 2), w("x y X", 2)], 2);
        assert_eq!((g.num_vertices(), g.num_edges(), g.rank()), (2, 3, 2));
        let mut by_hand = LabeledGraph::from_parts(
            2,
            vec![Edge { src: 0, dst: 1, label: 1 }, Edge { src: 1, dst: 0, label: 1 }, Edge { src: 1, dst: 1, label: 2 }],
            0,
            [],
        );
        by_hand = by_hand.canonical();
        assert_eq!(g.serialize(), by_hand.serialize());
        // folding the raw wedge directly gives the same thing
        let mut wedge = LabeledGraph::new();
        wedge.add_path(0, 0, &w("x^2", 2));
        wedge.add_path(0, 0, &w("x y X", 2));
        assert!(!wedge.is_folded());
        assert_eq!(wedge.core().serialize(), g.serialize());
    }

    #[test]
    fn fold_merges_parallel_loops_and_is_idempotent() {
        let g = LabeledGraph::from_parts(
            1,
            vec![Edge { src: 0, dst: 0, label: 1 }, Edge { src: 0, dst: 0, label: 1 }],
            0,
            [],
        );
        let f = g.fold();
        assert_eq!(f.num_edges(), 1);
        assert_eq!(f.fold(), f);
    }

    #[test]
    fn rewrite_examples() {
        let rose = core_graph(&[w("x", 2), w("y", 2)], 2);
        let basis = rose.basis();
        let r = membership_rewrite(&rose, &basis, &w("[x,y]", 2)).unwrap();
        assert_eq!(r, w("[x,y]", 2));

        let sq = core_graph(&[w("x^2", 1)], 1);
        let basis = sq.basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(membership_rewrite(&sq, &basis, &w("x^2", 1)).unwrap().len(), 1);
        assert_eq!(membership_rewrite(&sq, &basis, &w("x", 1)), None);
    }

    #[test]
    fn basis_words_lie_in_the_subgroup() {
        let g = core_graph(&[w("x^2 y", 2), w("y x Y x", 2), w("[x,y]", 2)], 2);
        let basis = g.basis();
        assert_eq!(basis.len(), g.rank());
        for (i, b) in basis.words.iter().enumerate() {
            let r = membership_rewrite(&g, &basis, b).unwrap();
            assert_eq!(r.signed_letters(), vec![i as i32 + 1]);
        }
    }

    #[test]
    fn wedge_marked_examples() {
        let mut g = LabeledGraph::new();
        g.add_edge(0, 0, 1);
        g.mark(0);
        assert_eq!(g.wedge_marked().serialize(), g.core().serialize());

        // two x-loops at marked vertices joined by a y-edge
        let mut g = LabeledGraph::new();
        let v = g.add_vertex();
        g.add_edge(0, 0, 1);
        g.add_edge(v, v, 1);
        g.add_edge(0, v, 2);
        g.mark(0);
        g.mark(v);
        assert_eq!(g.core().rank(), 2);
        // identifying the two marks adds a loop; folding merges the x-loops
        let wedged = g.wedge_marked();
        assert_eq!((wedged.num_vertices(), wedged.rank()), (1, 2));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(SetPartitions::new(n).count(), b);
        }
    }

    #[test]
    fn fringe_of_a_generator() {
        let f = fringe(&w("x", 2), &FringeOptions::default()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].rank(), 1);
    }

    #[test]
    fn fringe_of_commutator_has_both_ends() {
        let c = w("[x,y]", 2);
        let f = fringe(&c, &FringeOptions::default()).unwrap();
        let keys: Vec<&str> = f.iter().map(|m| m.key.as_str()).collect();
        let cyclic = core_graph(&[c.clone()], 2).serialize();
        let rose = core_graph(&[w("x", 2), w("y", 2)], 2).serialize();
        assert!(keys.contains(&cyclic.as_str()));
        assert!(keys.contains(&rose.as_str()));
        for m in &f {
            assert!(membership_rewrite(&m.graph, &m.basis, &c).is_some());
        }
    }

    #[test]
    fn fringe_cap_is_enforced() {
        let long = w("[x,y]^4", 2);
        let err = fringe(&long, &FringeOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Cap { .. }));
    }
}
