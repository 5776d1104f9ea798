//! Primitivity rank, commutator length and commutator-critical subgroups.

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::stallings::{core_graph, fringe, membership_rewrite, FringeMember, FringeOptions, LabeledGraph};
use crate::surfaces::{build_surface, enumerate_matchings, DEFAULT_SPEC_CAP};
use crate::whitehead::{in_proper_free_factor, is_primitive, orbit_equivalent, surface_word, DEFAULT_ORBIT_CAP};
use crate::words::{ProperPower, Word};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiValue {
    Finite(usize),
    Infinite,
    Undecided(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClValue {
    Finite(usize),
    Infinite,
    /// No surface of genus at most the cap was found.
    AboveCap(usize),
    Undecided(String),
}

impl PiValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            PiValue::Finite(p) => Some(*p),
            _ => None,
        }
    }
}

impl ClValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            ClValue::Finite(g) => Some(*g),
            _ => None,
        }
    }
}

impl std::fmt::Display for PiValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PiValue::Finite(p) => write!(f, "{p}"),
            PiValue::Infinite => write!(f, "inf"),
            PiValue::Undecided(_) => write!(f, "undecided"),
        }
    }
}

impl std::fmt::Display for ClValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClValue::Finite(g) => write!(f, "{g}"),
            ClValue::Infinite => write!(f, "inf"),
            ClValue::AboveCap(g) => write!(f, ">{g}"),
            ClValue::Undecided(_) => write!(f, "undecided"),
        }
    }
}

impl Serialize for PiValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PiValue::Finite(p) => s.serialize_u64(*p as u64),
            other => s.collect_str(other),
        }
    }
}

impl Serialize for ClValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ClValue::Finite(g) => s.serialize_u64(*g as u64),
            other => s.collect_str(other),
        }
    }
}

/// Resource limits shared by the invariant computations.
#[derive(Clone, Debug)]
pub struct InvariantOptions {
    pub fringe: FringeOptions,
    pub orbit_cap: usize,
    pub genus_cap: usize,
    pub max_subdivision: usize,
    pub spec_cap: u64,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            fringe: FringeOptions::default(),
            orbit_cap: DEFAULT_ORBIT_CAP,
            genus_cap: 3,
            max_subdivision: 2,
            spec_cap: DEFAULT_SPEC_CAP,
        }
    }
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct Witness {
    pub graph: String,
    pub rank: usize,
    pub rewrite: Word,
}

impl Witness {
    fn new(m: &FringeMember, rewrite: Word) -> Witness {
        Witness { graph: m.key.clone(), rank: m.rank(), rewrite }
    }
}

#[derive(Clone, Debug)]
pub struct PrimitivityRank {
    pub value: PiValue,
    /// Every subgroup of rank `pi` in which `w` is imprimitive.
    pub witnesses: Vec<Witness>,
}

fn rewrite(m: &FringeMember, w: &Word) -> Result<Word, Error> {
    membership_rewrite(&m.graph, &m.basis, w)
        .ok_or_else(|| Error::Internal(format!("{w} missing from its own fringe member {}", m.key)))
}

fn primitivity_from_fringe(w: &Word, members: &[FringeMember]) -> Result<PrimitivityRank, Error> {
    let mut found: Option<usize> = None;
    let mut witnesses = Vec::new();
    for m in members {
        let rank = m.rank();
        if found.is_some_and(|p| rank > p) {
            break;
        }
        if rank <= 1 {
            // w is not a proper power here, so it is a generator of any cyclic overgroup
            continue;
        }
        let u = rewrite(m, w)?;
        if !is_primitive(&u, rank) {
            found = Some(rank);
            witnesses.push(Witness::new(m, u));
        }
    }
    match found {
        Some(p) => Ok(PrimitivityRank { value: PiValue::Finite(p), witnesses }),
        None => Err(Error::Internal(format!("{w} is imprimitive but no fringe member witnesses it"))),
    }
}

fn primitivity_with(w: &Word, r: usize, opts: &InvariantOptions, members: Option<&[FringeMember]>) -> PrimitivityRank {
    if w.is_identity() {
        return PrimitivityRank { value: PiValue::Finite(0), witnesses: Vec::new() };
    }
    let pp = w.is_proper_power();
    if pp.is_power {
        let g = core_graph(std::slice::from_ref(&pp.root), r);
        let basis = g.basis();
        let u = membership_rewrite(&g, &basis, w).expect("a power lies in the root's subgroup");
        let witness = Witness { graph: g.serialize(), rank: 1, rewrite: u };
        return PrimitivityRank { value: PiValue::Finite(1), witnesses: vec![witness] };
    }
    if is_primitive(w, r.max(w.max_generator())) {
        return PrimitivityRank { value: PiValue::Infinite, witnesses: Vec::new() };
    }
    let owned;
    let members = match members {
        Some(m) => m,
        None => match fringe(w, &opts.fringe) {
            Ok(m) => {
                owned = m;
                &owned
            }
            Err(e) => return undecided_pi(e),
        },
    };
    match primitivity_from_fringe(w, members) {
        Ok(p) => p,
        Err(e) => undecided_pi(e),
    }
}

fn undecided_pi(e: Error) -> PrimitivityRank {
    PrimitivityRank { value: PiValue::Undecided(e.to_string()), witnesses: Vec::new() }
}

pub fn primitivity_rank(w: &Word, r: usize) -> PrimitivityRank {
    primitivity_rank_with(w, r, &InvariantOptions::default())
}

pub fn primitivity_rank_with(w: &Word, r: usize, opts: &InvariantOptions) -> PrimitivityRank {
    primitivity_with(w, r, opts, None)
}

/// Whether the subgroup carried by `h` is an algebraic extension of `<w>`.
pub fn is_algebraic_extension(h: &LabeledGraph, w: &Word, orbit_cap: usize) -> Result<bool, Error> {
    let basis = h.basis();
    let u = membership_rewrite(h, &basis, w).ok_or_else(|| Error::Invalid(format!("{w} is not in the subgroup")))?;
    if u.is_identity() {
        return Err(Error::Invalid("the identity generates the trivial subgroup".into()));
    }
    if basis.len() <= 1 {
        return Ok(true);
    }
    Ok(!in_proper_free_factor(&u, basis.len(), orbit_cap)?)
}

/// Minimal genus of a one-boundary surface bounding `w`, searched over
/// matchings with sub-segment counts up to `max_subdivision`.
pub fn commutator_length(w: &Word, genus_cap: usize) -> ClValue {
    commutator_length_with(w, &InvariantOptions { genus_cap, ..InvariantOptions::default() })
}

pub fn commutator_length_with(w: &Word, opts: &InvariantOptions) -> ClValue {
    if w.exponent_sums().iter().any(|&e| e != 0) {
        return ClValue::Infinite;
    }
    let core = w.cyclic_core();
    if core.is_identity() {
        return ClValue::Finite(0);
    }
    let mut best: Option<usize> = None;
    for k in 1..=opts.max_subdivision.max(1) {
        let specs = match enumerate_matchings(std::slice::from_ref(&core), k, opts.spec_cap) {
            Ok(s) => s,
            Err(e) => return ClValue::Undecided(e.to_string()),
        };
        for spec in specs.iter() {
            let s = match build_surface(&spec) {
                Ok(s) => s,
                Err(e) => return ClValue::Undecided(e.to_string()),
            };
            let g = s.components[0].genus as usize;
            if best.is_none_or(|b| g < b) {
                best = Some(g);
            }
        }
        // a genus-1 surface cannot be beaten by a nontrivial word
        if best == Some(1) {
            break;
        }
    }
    match best {
        Some(g) if g <= opts.genus_cap => ClValue::Finite(g),
        _ => ClValue::AboveCap(opts.genus_cap),
    }
}

/// Fringe members of rank `pi` containing `w` as an imprimitive element.
pub fn critical_subgroups(w: &Word, r: usize) -> Result<Vec<Witness>, Error> {
    let p = primitivity_rank(w, r);
    match p.value {
        PiValue::Finite(0) => Err(Error::Invalid("the identity has no critical subgroups".into())),
        PiValue::Finite(_) => Ok(p.witnesses),
        PiValue::Infinite => Err(Error::Invalid(format!("{w} is primitive"))),
        PiValue::Undecided(why) => Err(Error::Invalid(format!("undecided: {why}"))),
    }
}

#[derive(Clone, Debug)]
pub enum CommCrit {
    Decided(Vec<Witness>),
    Undecided(String),
}

impl CommCrit {
    pub fn count(&self) -> Option<usize> {
        match self {
            CommCrit::Decided(v) => Some(v.len()),
            CommCrit::Undecided(_) => None,
        }
    }
}

fn comm_crit_from(w: &Word, pi: &PiValue, cl: &ClValue, members: &[FringeMember], opts: &InvariantOptions) -> CommCrit {
    let (p, g) = match (pi, cl) {
        (PiValue::Undecided(why), _) | (_, ClValue::Undecided(why)) => return CommCrit::Undecided(why.clone()),
        (PiValue::Finite(p), ClValue::Finite(g)) => (*p, *g),
        (PiValue::Finite(p), ClValue::AboveCap(cap)) if *p <= 2 * cap => return CommCrit::Decided(Vec::new()),
        (PiValue::Finite(_), ClValue::AboveCap(_)) => {
            return CommCrit::Undecided("commutator length above the genus cap".into())
        }
        _ => return CommCrit::Decided(Vec::new()),
    };
    if p % 2 == 1 || p != 2 * g || g == 0 {
        return CommCrit::Decided(Vec::new());
    }
    let target = surface_word(g);
    let mut out = Vec::new();
    for m in members.iter().filter(|m| m.rank() == p) {
        let u = match rewrite(m, w) {
            Ok(u) => u,
            Err(e) => return CommCrit::Undecided(e.to_string()),
        };
        if u.exponent_sums().iter().any(|&e| e != 0) {
            continue;
        }
        match orbit_equivalent(&u, &target, p, opts.orbit_cap) {
            Ok(true) => out.push(Witness::new(m, u)),
            Ok(false) => {}
            Err(e) => return CommCrit::Undecided(e.to_string()),
        }
    }
    CommCrit::Decided(out)
}

fn needs_fringe(w: &Word, r: usize) -> bool {
    !w.is_identity() && !w.is_proper_power().is_power && !is_primitive(w, r.max(w.max_generator()))
}

pub fn comm_crit(w: &Word, r: usize) -> CommCrit {
    comm_crit_with(w, r, &InvariantOptions::default())
}

pub fn comm_crit_with(w: &Word, r: usize, opts: &InvariantOptions) -> CommCrit {
    report_with(w, r, opts).comm_crit
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub word: Word,
    pub rank: usize,
    pub pi: PiValue,
    pub witnesses: Vec<Witness>,
    pub cl: ClValue,
    pub comm_crit: CommCrit,
    pub proper_power: ProperPower,
}

impl Serialize for InvariantReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("word", &self.word)?;
        m.serialize_entry("rank", &self.rank)?;
        m.serialize_entry("pi", &self.pi)?;
        m.serialize_entry("witnesses", &self.witnesses)?;
        m.serialize_entry("cl", &self.cl)?;
        match &self.comm_crit {
            CommCrit::Decided(v) => {
                m.serialize_entry("comm_crit", v)?;
                m.serialize_entry("comm_crit_count", &v.len())?;
            }
            CommCrit::Undecided(_) => {
                m.serialize_entry("comm_crit", &Option::<()>::None)?;
                m.serialize_entry("comm_crit_count", "undecided")?;
            }
        }
        m.serialize_entry("proper_power", &self.proper_power)?;
        let mut notes = Vec::new();
        if let PiValue::Undecided(why) = &self.pi {
            notes.push(format!("pi: {why}"));
        }
        if let ClValue::Undecided(why) = &self.cl {
            notes.push(format!("cl: {why}"));
        }
        if let CommCrit::Undecided(why) = &self.comm_crit {
            notes.push(format!("comm_crit: {why}"));
        }
        m.serialize_entry("notes", &notes)?;
        m.end()
    }
}

impl InvariantReport {
    pub fn is_undecided(&self) -> bool {
        matches!(self.pi, PiValue::Undecided(_))
            || matches!(self.cl, ClValue::Undecided(_))
            || matches!(self.comm_crit, CommCrit::Undecided(_))
    }
}

pub fn report(w: &Word, r: usize) -> InvariantReport {
    report_with(w, r, &InvariantOptions::default())
}

/// All invariants of `w`, sharing one fringe enumeration.
pub fn report_with(w: &Word, r: usize, opts: &InvariantOptions) -> InvariantReport {
    let r = r.max(w.max_generator());
    let cl = commutator_length_with(w, opts);
    let proper_power = w.is_proper_power();
    let members = if needs_fringe(w, r) { Some(fringe(w, &opts.fringe)) } else { None };
    let (pi, comm_crit) = match members {
        Some(Err(e)) => {
            let p = undecided_pi(e);
            let why = match &p.value {
                PiValue::Undecided(s) => s.clone(),
                _ => unreachable!(),
            };
            (p, CommCrit::Undecided(why))
        }
        Some(Ok(members)) => {
            let p = primitivity_with(w, r, opts, Some(&members));
            let cc = comm_crit_from(w, &p.value, &cl, &members, opts);
            (p, cc)
        }
        None => {
            let p = primitivity_with(w, r, opts, None);
            let cc = comm_crit_from(w, &p.value, &cl, &[], opts);
            (p, cc)
        }
    };
    InvariantReport {
        word: w.clone(),
        rank: r,
        pi: pi.value,
        witnesses: pi.witnesses,
        cl,
        comm_crit,
        proper_power,
    }
}
