//! Surfaces glued from annuli along perfect matchings of letter occurrences.
//!
//! Each boundary word gets an annulus whose outer circle is cut into one
//! segment per letter (or per sub-segment when a generator is subdivided).
//! Every annulus is cellulated by `s` quadrilaterals: `2s` vertices, `3s`
//! edges, `s` faces. Matched outer segments are glued with opposite
//! orientation, so after gluing
//!
//! ```text
//! V = S + R,  E = 3S - S/2,  F = S,  chi = R - S/2
//! ```
//!
//! where `S` counts segments and `R` counts classes of outer vertices. Cutting
//! along the arcs dual to the glued segments leaves one disk per outer-vertex
//! class, which is what [`image_subgroup_graph`] uses as its vertex set.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::json;

use crate::stallings::LabeledGraph;
use crate::words::{is_balanced, Word};
use crate::Error;

pub const DEFAULT_SPEC_CAP: u64 = 10_000_000;

/// Positive and negative occurrences of each generator, as `(word, position)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrences {
    pub positive: Vec<(usize, usize)>,
    pub negative: Vec<(usize, usize)>,
}

pub fn occurrences(words: &[Word]) -> Vec<Occurrences> {
    let width = words.iter().map(|w| w.rank().max(w.max_generator())).max().unwrap_or(0);
    let mut occ = vec![Occurrences { positive: Vec::new(), negative: Vec::new() }; width];
    for (i, w) in words.iter().enumerate() {
        for (t, l) in w.letters().iter().enumerate() {
            let o = &mut occ[l.generator() - 1];
            if l.is_inverse() {
                o.negative.push((i, t));
            } else {
                o.positive.push((i, t));
            }
        }
    }
    occ
}

/// Boundary words plus, per generator, one matching for each subdivision
/// index. `matchings[g-1][j][p] = q` glues the `j`-th sub-segment of the
/// `p`-th positive occurrence of `x_g` to that of the `q`-th negative one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MatchingSpec {
    #[serde(serialize_with = "serialize_words")]
    pub words: Vec<Word>,
    pub matchings: Vec<Vec<Vec<usize>>>,
}

fn serialize_words<S: serde::Serializer>(words: &[Word], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(words.iter().map(|w| w.to_string()))
}

impl MatchingSpec {
    pub fn subdivision(&self, generator: usize) -> usize {
        self.matchings.get(generator - 1).map_or(1, |m| m.len().max(1))
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.words.iter().any(|w| w.is_identity()) {
            return Err(Error::Invalid("boundary words must be nontrivial".into()));
        }
        if !is_balanced(&self.words).balanced {
            return Err(Error::Invalid("boundary words are not balanced".into()));
        }
        let occ = occurrences(&self.words);
        for (g, o) in occ.iter().enumerate() {
            let ms = self.matchings.get(g).map(Vec::as_slice).unwrap_or(&[]);
            if o.positive.is_empty() {
                if ms.iter().any(|m| !m.is_empty()) {
                    return Err(Error::Invalid(format!("matching for unused generator x{}", g + 1)));
                }
                continue;
            }
            if ms.is_empty() {
                return Err(Error::Invalid(format!("no matching for generator x{}", g + 1)));
            }
            for m in ms {
                let mut seen = vec![false; o.negative.len()];
                if m.len() != o.positive.len() {
                    return Err(Error::Invalid(format!("matching for x{} has wrong size", g + 1)));
                }
                for &q in m {
                    if q >= seen.len() || std::mem::replace(&mut seen[q], true) {
                        return Err(Error::Invalid(format!("matching for x{} is not a bijection", g + 1)));
                    }
                }
            }
        }
        if self.matchings.len() > occ.len() && self.matchings[occ.len()..].iter().flatten().any(|m| !m.is_empty()) {
            return Err(Error::Invalid("matching for a generator beyond the words' rank".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub word: usize,
    pub letter: usize,
    pub generator: usize,
    /// Sub-segment index, 0-based.
    pub sub: usize,
    pub inverse: bool,
    /// Outer vertices at the start and end of the segment in reading order.
    pub start: usize,
    pub end: usize,
}

impl Segment {
    /// Endpoints in the direction of the generator (tail, head).
    fn oriented(&self) -> (usize, usize) {
        if self.inverse {
            (self.end, self.start)
        } else {
            (self.start, self.end)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentRecord {
    pub annuli: Vec<usize>,
    pub vertices: i64,
    pub edges: i64,
    pub faces: i64,
    pub chi: i64,
    pub boundaries: usize,
    pub genus: i64,
}

#[derive(Clone, Debug)]
pub struct SurfaceComplex {
    pub spec: MatchingSpec,
    pub segments: Vec<Segment>,
    /// Pairs of glued segment indices (positive, negative).
    pub gluings: Vec<(usize, usize)>,
    /// Outer vertex id -> class id after gluing.
    pub vertex_class: Vec<usize>,
    /// First outer vertex of each annulus (its basepoint region).
    pub annulus_start: Vec<usize>,
    pub components: Vec<ComponentRecord>,
    /// Component index of each annulus.
    pub annulus_component: Vec<usize>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let nx = self.0[x];
            self.0[x] = r;
            x = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

pub fn build_surface(spec: &MatchingSpec) -> Result<SurfaceComplex, Error> {
    spec.validate()?;
    let occ = occurrences(&spec.words);
    // index of each occurrence within its generator's positive/negative list
    let mut occ_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for o in &occ {
        for (p, &at) in o.positive.iter().enumerate() {
            occ_index.insert(at, p);
        }
        for (q, &at) in o.negative.iter().enumerate() {
            occ_index.insert(at, q);
        }
    }

    let mut segments = Vec::new();
    let mut annulus_start = Vec::with_capacity(spec.words.len());
    let mut outer = 0usize;
    // (generator, sub, inverse, occurrence) -> segment index
    let mut lookup: BTreeMap<(usize, usize, bool, usize), usize> = BTreeMap::new();
    for (i, w) in spec.words.iter().enumerate() {
        let s: usize = w.letters().iter().map(|l| spec.subdivision(l.generator())).sum();
        let base = outer;
        annulus_start.push(base);
        let mut t = 0;
        for (pos, l) in w.letters().iter().enumerate() {
            let g = l.generator();
            let k = spec.subdivision(g);
            let subs: Vec<usize> = if l.is_inverse() { (0..k).rev().collect() } else { (0..k).collect() };
            for sub in subs {
                let seg = Segment {
                    word: i,
                    letter: pos,
                    generator: g,
                    sub,
                    inverse: l.is_inverse(),
                    start: base + t,
                    end: base + (t + 1) % s,
                };
                lookup.insert((g, sub, l.is_inverse(), occ_index[&(i, pos)]), segments.len());
                segments.push(seg);
                t += 1;
            }
        }
        outer += s;
    }

    let mut vertices = Dsu::new(outer);
    let mut annuli = Dsu::new(spec.words.len());
    let mut gluings = Vec::with_capacity(segments.len() / 2);
    for (g0, ms) in spec.matchings.iter().enumerate() {
        for (sub, m) in ms.iter().enumerate() {
            for (p, &q) in m.iter().enumerate() {
                let a = lookup[&(g0 + 1, sub, false, p)];
                let b = lookup[&(g0 + 1, sub, true, q)];
                let (ta, ha) = segments[a].oriented();
                let (tb, hb) = segments[b].oriented();
                vertices.union(ta, tb);
                vertices.union(ha, hb);
                annuli.union(segments[a].word, segments[b].word);
                gluings.push((a, b));
            }
        }
    }

    let vertex_class: Vec<usize> = (0..outer).map(|v| vertices.find(v)).collect();
    let roots: Vec<usize> = (0..spec.words.len()).map(|i| annuli.find(i)).collect();
    let mut order: Vec<usize> = roots.clone();
    order.dedup();
    let mut comp_ids: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &roots {
        let next = comp_ids.len();
        comp_ids.entry(r).or_insert(next);
    }
    let annulus_component: Vec<usize> = roots.iter().map(|r| comp_ids[r]).collect();

    let mut components = Vec::with_capacity(comp_ids.len());
    for c in 0..comp_ids.len() {
        let members: Vec<usize> = (0..spec.words.len()).filter(|&i| annulus_component[i] == c).collect();
        let segs = segments.iter().filter(|s| annulus_component[s.word] == c).count() as i64;
        let classes: BTreeSet<usize> = (0..outer)
            .filter(|&v| {
                let seg_word = annulus_of_vertex(&annulus_start, v);
                annulus_component[seg_word] == c
            })
            .map(|v| vertex_class[v])
            .collect();
        let r = classes.len() as i64;
        let (v, e, f) = (segs + r, 3 * segs - segs / 2, segs);
        let chi = v - e + f;
        let b = members.len();
        let twice_genus = 2 - chi - b as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::Internal(format!("component {c} has non-integral genus (chi {chi}, {b} boundaries)")));
        }
        components.push(ComponentRecord {
            annuli: members,
            vertices: v,
            edges: e,
            faces: f,
            chi,
            boundaries: b,
            genus: twice_genus / 2,
        });
    }

    Ok(SurfaceComplex {
        spec: spec.clone(),
        segments,
        gluings,
        vertex_class,
        annulus_start,
        components,
        annulus_component,
    })
}

fn annulus_of_vertex(starts: &[usize], v: usize) -> usize {
    match starts.binary_search(&v) {
        Ok(i) => {
            // several empty annuli cannot occur (words are nontrivial)
            i
        }
        Err(i) => i - 1,
    }
}

impl SurfaceComplex {
    pub fn chi(&self) -> i64 {
        self.components.iter().map(|c| c.chi).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Cells, gluings and components as a JSON record.
    pub fn to_json(&self) -> serde_json::Value {
        let annuli: Vec<_> = self
            .spec
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let segs: Vec<_> = self
                    .segments
                    .iter()
                    .filter(|s| s.word == i)
                    .map(|s| json!({"generator": s.generator, "sub": s.sub, "inverse": s.inverse,
                                     "start": s.start, "end": s.end}))
                    .collect();
                json!({"word": w.to_string(), "basepoint_vertex": self.annulus_start[i], "segments": segs})
            })
            .collect();
        let gluings: Vec<_> = self
            .gluings
            .iter()
            .map(|&(a, b)| json!({"positive": a, "negative": b, "generator": self.segments[a].generator,
                                   "sub": self.segments[a].sub}))
            .collect();
        json!({
            "annuli": annuli,
            "gluings": gluings,
            "components": self.components,
            "vertex_classes": self.vertex_class,
        })
    }
}

/// Dual graph of a component: one vertex per disk region (outer-vertex
/// class), one edge per glued pair, marked vertices at the annulus
/// basepoints. Subdivided generators are folded over the subdivided rose and
/// then collapsed back to single edges. Wedge the marked vertices
/// ([`LabeledGraph::wedge_marked`]) to get the image subgroup.
pub fn image_subgroup_graph(s: &SurfaceComplex, component: usize) -> Result<LabeledGraph, Error> {
    if component >= s.components.len() {
        return Err(Error::Invalid(format!("no component {component}")));
    }
    let width = s.spec.matchings.len();
    let mut offset = vec![0usize; width + 1];
    for g in 0..width {
        offset[g + 1] = offset[g] + s.spec.subdivision(g + 1);
    }
    let subdivided = (1..=width).any(|g| s.spec.subdivision(g) > 1);
    let ext_label = |g: usize, sub: usize| if subdivided { offset[g - 1] + sub + 1 } else { g };

    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let annuli = &s.components[component].annuli;
    let first_class = s.vertex_class[s.annulus_start[annuli[0]]];
    ids.insert(first_class, 0);
    let id = |c: usize, ids: &mut BTreeMap<usize, usize>| {
        let next = ids.len();
        *ids.entry(c).or_insert(next)
    };
    let mut edges = Vec::new();
    for &(a, _) in &s.gluings {
        let seg = &s.segments[a];
        if s.annulus_component[seg.word] != component {
            continue;
        }
        let (t, h) = seg.oriented();
        let (t, h) = (id(s.vertex_class[t], &mut ids), id(s.vertex_class[h], &mut ids));
        edges.push(crate::stallings::Edge { src: t, dst: h, label: ext_label(seg.generator, seg.sub) });
    }
    let marked: Vec<usize> = annuli.iter().map(|&i| id(s.vertex_class[s.annulus_start[i]], &mut ids)).collect();
    let graph = LabeledGraph::from_parts(ids.len(), edges, 0, marked);
    if !subdivided {
        return Ok(graph);
    }

    // collapse chains (g,0)(g,1)...(g,k-1) in the folded subdivided graph
    let folded = graph.fold().trim();
    let mut label_of = vec![(0usize, 0usize); offset[width] + 1];
    for g in 1..=width {
        for sub in 0..s.spec.subdivision(g) {
            label_of[offset[g - 1] + sub + 1] = (g, sub);
        }
    }
    let mut out: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut interior = vec![false; folded.num_vertices()];
    for e in folded.edges() {
        let (g, sub) = label_of[e.label];
        out.insert((e.src, e.label), e.dst);
        if sub > 0 {
            interior[e.src] = true;
        }
        if sub + 1 < s.spec.subdivision(g) {
            interior[e.dst] = true;
        }
    }
    let mut new_ids = vec![usize::MAX; folded.num_vertices()];
    let mut count = 0;
    for v in std::iter::once(folded.basepoint()).chain(0..folded.num_vertices()) {
        if !interior[v] && new_ids[v] == usize::MAX {
            new_ids[v] = count;
            count += 1;
        }
    }
    let mut collapsed = Vec::new();
    for e in folded.edges() {
        let (g, sub) = label_of[e.label];
        if sub != 0 || interior[e.src] {
            continue;
        }
        let mut v = e.dst;
        let mut ok = true;
        for next_sub in 1..s.spec.subdivision(g) {
            match out.get(&(v, offset[g - 1] + next_sub + 1)) {
                Some(&u) => v = u,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && !interior[v] {
            collapsed.push(crate::stallings::Edge { src: new_ids[e.src], dst: new_ids[v], label: g });
        }
    }
    let marked: Vec<usize> = folded.marked().iter().map(|&m| new_ids[m]).collect();
    Ok(LabeledGraph::from_parts(count, collapsed, new_ids[folded.basepoint()], marked).fold().trim())
}

/// The subgroup generated by images of paths between basepoints of a component.
pub fn image_subgroup(s: &SurfaceComplex, component: usize) -> Result<LabeledGraph, Error> {
    Ok(image_subgroup_graph(s, component)?.wedge_marked())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, out);
            p.swap(k, i);
        }
    }
    rec(&mut p, 0, &mut out);
    out.sort();
    out
}

/// All matching tuples of length `1..=k` with no two consecutive equal
/// entries; a repeated neighbour only refines an existing gluing.
fn matching_tuples(perms: &[Vec<usize>], k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut all = Vec::new();
    let mut layer: Vec<Vec<usize>> = (0..perms.len()).map(|i| vec![i]).collect();
    for _ in 0..k {
        all.extend(layer.iter().map(|t| t.iter().map(|&i| perms[i].clone()).collect()));
        let mut next = Vec::new();
        for t in &layer {
            for i in 0..perms.len() {
                if *t.last().unwrap() != i {
                    let mut u = t.clone();
                    u.push(i);
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    all
}

/// Lazy enumeration of every [`MatchingSpec`] with at most `max_subdivision`
/// sub-segments per generator.
pub struct MatchingEnumeration {
    words: Vec<Word>,
    options: Vec<Vec<Vec<Vec<usize>>>>,
}

impl MatchingEnumeration {
    pub fn total(&self) -> u64 {
        self.options.iter().map(|o| o.len() as u64).product()
    }

    pub fn iter(&self) -> impl Iterator<Item = MatchingSpec> + '_ {
        let total = self.total();
        (0..total).map(move |mut idx| {
            let mut matchings = Vec::with_capacity(self.options.len());
            for o in &self.options {
                let n = o.len() as u64;
                matchings.push(o[(idx % n) as usize].clone());
                idx /= n;
            }
            MatchingSpec { words: self.words.clone(), matchings }
        })
    }
}

pub fn enumerate_matchings(words: &[Word], max_subdivision: usize, cap: u64) -> Result<MatchingEnumeration, Error> {
    if max_subdivision == 0 {
        return Err(Error::Invalid("subdivision bound must be at least 1".into()));
    }
    if words.iter().any(|w| w.is_identity()) {
        return Err(Error::Invalid("boundary words must be nontrivial".into()));
    }
    if !is_balanced(words).balanced {
        return Err(Error::Invalid("words are not balanced; no matching exists".into()));
    }
    let occ = occurrences(words);
    let mut options = Vec::with_capacity(occ.len());
    let mut total: u64 = 1;
    for o in &occ {
        let p = o.positive.len();
        if p == 0 {
            options.push(vec![Vec::new()]);
            continue;
        }
        // (p!) * (p! - 1)^(k - 1) tuples of length k, before building them
        let fact: u64 = (1..=p as u64).try_fold(1u64, |a, b| a.checked_mul(b)).unwrap_or(u64::MAX);
        let mut count: u64 = 0;
        let mut layer = fact;
        for _ in 0..max_subdivision {
            count = count.saturating_add(layer);
            layer = layer.saturating_mul(fact.saturating_sub(1));
        }
        total = total.saturating_mul(count);
        if total > cap {
            return Err(Error::Cap { resource: "matching specs", limit: cap });
        }
        let perms = permutations(p);
        options.push(matching_tuples(&perms, max_subdivision));
    }
    Ok(MatchingEnumeration { words: words.to_vec(), options })
}

/// A matched pair sitting at the same position relative to `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenPair {
    pub generator: usize,
    pub sub: usize,
    pub positive: (usize, usize),
    pub negative: (usize, usize),
    pub position_in_w: usize,
}

/// Checks whether some glued pair of letters correspond to the same letter of
/// `w`. Every boundary word must be a nonzero power of the cyclically reduced `w`.
pub fn is_forbidden(spec: &MatchingSpec, w: &Word) -> Result<Option<ForbiddenPair>, Error> {
    if w.is_identity() || !w.is_cyclically_reduced() {
        return Err(Error::Invalid("w must be nontrivial and cyclically reduced".into()));
    }
    let l = w.len();
    let mut sign = Vec::with_capacity(spec.words.len());
    for word in &spec.words {
        let m = (word.len() / l) as i64;
        if word.len() % l != 0 || m == 0 {
            return Err(Error::Invalid(format!("{word} is not a power of {w}")));
        }
        if *word == w.pow(m) {
            sign.push(true);
        } else if *word == w.pow(-m) {
            sign.push(false);
        } else {
            return Err(Error::Invalid(format!("{word} is not a power of {w}")));
        }
    }
    let position = |(i, t): (usize, usize)| if sign[i] { t % l } else { l - 1 - t % l };
    let occ = occurrences(&spec.words);
    for (g0, ms) in spec.matchings.iter().enumerate() {
        for (sub, m) in ms.iter().enumerate() {
            for (p, &q) in m.iter().enumerate() {
                let a = occ[g0].positive[p];
                let b = occ[g0].negative[q];
                if position(a) == position(b) {
                    return Ok(Some(ForbiddenPair {
                        generator: g0 + 1,
                        sub,
                        positive: a,
                        negative: b,
                        position_in_w: position(a),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    /// `(component count, sorted boundary counts)` -> chi -> number of specs.
    pub by_profile: BTreeMap<(usize, Vec<usize>), BTreeMap<i64, u64>>,
    /// Per component: `(chi, boundaries, image subgroup rank)` -> count.
    pub component_ranks: BTreeMap<(i64, usize, usize), u64>,
    pub specs: u64,
}

impl Spectrum {
    pub fn to_json(&self) -> serde_json::Value {
        let profiles: Vec<_> = self
            .by_profile
            .iter()
            .map(|((c, b), chis)| {
                let chis: BTreeMap<String, u64> = chis.iter().map(|(k, v)| (k.to_string(), *v)).collect();
                json!({"components": c, "boundaries": b, "chi": chis})
            })
            .collect();
        let ranks: Vec<_> = self
            .component_ranks
            .iter()
            .map(|(&(chi, b, r), n)| json!({"chi": chi, "boundaries": b, "image_rank": r, "count": n}))
            .collect();
        json!({"specs": self.specs, "profiles": profiles, "component_ranks": ranks})
    }
}

pub fn genus_spectrum(words: &[Word], max_subdivision: usize, cap: u64) -> Result<Spectrum, Error> {
    let specs = enumerate_matchings(words, max_subdivision, cap)?;
    let mut spectrum = Spectrum::default();
    for spec in specs.iter() {
        let s = build_surface(&spec)?;
        let mut profile: Vec<usize> = s.components.iter().map(|c| c.boundaries).collect();
        profile.sort_unstable();
        *spectrum
            .by_profile
            .entry((s.components.len(), profile))
            .or_default()
            .entry(s.chi())
            .or_default() += 1;
        for (ci, c) in s.components.iter().enumerate() {
            let rank = image_subgroup(&s, ci)?.rank();
            *spectrum.component_ranks.entry((c.chi, c.boundaries, rank)).or_default() += 1;
        }
        spectrum.specs += 1;
    }
    Ok(spectrum)
}
