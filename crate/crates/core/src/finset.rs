//! Finite sets, functions, monomorphisms, directed colimits, and subobject
//! lattices — the ambient category for the initial-algebra constructions.
//!
//! Monomorphisms here are exactly the injective functions, and subobjects
//! are represented canonically by subsets with inclusion maps, so the
//! subobject poset of a finite set is a concrete Boolean lattice and
//! subobject order never needs a factorization search.

use std::collections::BTreeMap;

use crate::poset::FinPoset;
use crate::term::Term;
use crate::{caps, Error, Result};

/// A finite set of distinct canonical terms, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinSetObj {
    elems: Vec<Term>,
}

impl FinSetObj {
    pub fn new(mut elems: Vec<Term>) -> Result<FinSetObj> {
        elems.sort();
        for w in elems.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].to_string()));
            }
        }
        Ok(FinSetObj { elems })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<FinSetObj> {
        FinSetObj::new(names.iter().map(|n| Term::atom(n.as_ref())).collect())
    }

    /// The initial object: the empty set.
    pub fn empty() -> FinSetObj {
        FinSetObj { elems: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Term] {
        &self.elems
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.elems[i]
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.elems.binary_search(t).ok()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index_of(t).is_some()
    }

    pub fn is_subset_of(&self, other: &FinSetObj) -> bool {
        self.elems.iter().all(|t| other.contains(t))
    }

    /// Subset selected by ambient indices.
    pub fn subset(&self, idxs: &[usize]) -> FinSetObj {
        let mut elems: Vec<Term> = idxs.iter().map(|&i| self.elems[i].clone()).collect();
        elems.sort();
        elems.dedup();
        FinSetObj { elems }
    }

    /// The inclusion of `self` into `ambient`; fails if not a subset.
    pub fn inclusion_into(&self, ambient: &FinSetObj) -> Result<FinFn> {
        let map = self
            .elems
            .iter()
            .map(|t| {
                ambient
                    .index_of(t)
                    .ok_or_else(|| Error::UnknownElement(t.to_string()))
            })
            .collect::<Result<Vec<usize>>>()?;
        FinFn::new(self.clone(), ambient.clone(), map)
    }
}

/// A total function between finite sets, stored as indices into the
/// codomain, one per domain element in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFn {
    dom: FinSetObj,
    cod: FinSetObj,
    map: Vec<usize>,
}

impl FinFn {
    pub fn new(dom: FinSetObj, cod: FinSetObj, map: Vec<usize>) -> Result<FinFn> {
        if map.len() != dom.len() || map.iter().any(|&v| v >= cod.len()) {
            return Err(Error::Schema("function is not total into its codomain".into()));
        }
        Ok(FinFn { dom, cod, map })
    }

    /// Build from (term, term) pairs.
    pub fn from_pairs(dom: FinSetObj, cod: FinSetObj, pairs: &[(Term, Term)]) -> Result<FinFn> {
        let mut map = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            let i = dom
                .index_of(a)
                .ok_or_else(|| Error::UnknownElement(a.to_string()))?;
            let j = cod
                .index_of(b)
                .ok_or_else(|| Error::UnknownElement(b.to_string()))?;
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Schema(format!(
                "function is missing a value for `{}`",
                dom.term(i)
            )));
        }
        FinFn::new(dom, cod, map)
    }

    /// Build by evaluating a term function.
    pub fn from_fn(
        dom: FinSetObj,
        cod: FinSetObj,
        f: impl Fn(&Term) -> Term,
    ) -> Result<FinFn> {
        let map = dom
            .elems()
            .iter()
            .map(|t| {
                let u = f(t);
                cod.index_of(&u)
                    .ok_or_else(|| Error::UnknownElement(u.to_string()))
            })
            .collect::<Result<Vec<usize>>>()?;
        FinFn::new(dom, cod, map)
    }

    pub fn identity(s: FinSetObj) -> FinFn {
        let map = (0..s.len()).collect();
        FinFn {
            dom: s.clone(),
            cod: s,
            map,
        }
    }

    pub fn dom(&self) -> &FinSetObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinSetObj {
        &self.cod
    }

    #[inline]
    pub fn apply_idx(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply(&self, t: &Term) -> Option<&Term> {
        self.dom.index_of(t).map(|i| self.cod.term(self.map[i]))
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &FinFn) -> Result<FinFn> {
        if first.cod != self.dom {
            return Err(Error::Schema("composition domain mismatch".into()));
        }
        let map = first.map.iter().map(|&i| self.map[i]).collect();
        Ok(FinFn {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map,
        })
    }

    pub fn image_indices(&self) -> Vec<usize> {
        let mut im: Vec<usize> = self.map.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    pub fn image(&self) -> FinSetObj {
        self.cod.subset(&self.image_indices())
    }
}

/// Monomorphisms in finite sets are exactly the injections.
pub fn is_mono(f: &FinFn) -> bool {
    let mut seen = vec![false; f.cod().len()];
    f.map().iter().all(|&v| {
        if seen[v] {
            false
        } else {
            seen[v] = true;
            true
        }
    })
}

/// The colliding witness behind a failed mono check.
pub fn mono_counterexample(f: &FinFn) -> Option<(Term, Term)> {
    let mut by_target: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &v) in f.map().iter().enumerate() {
        if let Some(&j) = by_target.get(&v) {
            return Some((f.dom().term(j).clone(), f.dom().term(i).clone()));
        }
        by_target.insert(v, i);
    }
    None
}

/// Bijectivity check; returns the inverse as the witness.
pub fn is_iso(f: &FinFn) -> Option<FinFn> {
    if f.dom().len() != f.cod().len() || !is_mono(f) {
        return None;
    }
    let mut inv = vec![0usize; f.cod().len()];
    for (i, &v) in f.map().iter().enumerate() {
        inv[v] = i;
    }
    Some(FinFn {
        dom: f.cod().clone(),
        cod: f.dom().clone(),
        map: inv,
    })
}

/// For monomorphisms u, t into a common codomain, the unique h with
/// t . h = u, when it exists. It exists iff image(u) is inside image(t).
pub fn factor_through(u: &FinFn, t: &FinFn) -> Result<Option<FinFn>> {
    if !is_mono(u) {
        let (a, b) = mono_counterexample(u).unwrap();
        return Err(Error::NotMono(a.to_string(), b.to_string(), "u".into()));
    }
    if !is_mono(t) {
        let (a, b) = mono_counterexample(t).unwrap();
        return Err(Error::NotMono(a.to_string(), b.to_string(), "t".into()));
    }
    if u.cod() != t.cod() {
        return Err(Error::Schema("factorization needs a common codomain".into()));
    }
    let mut t_preimage: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &v) in t.map().iter().enumerate() {
        t_preimage.insert(v, i);
    }
    let mut map = Vec::with_capacity(u.dom().len());
    for &v in u.map() {
        match t_preimage.get(&v) {
            Some(&i) => map.push(i),
            None => return Ok(None),
        }
    }
    Ok(Some(FinFn {
        dom: u.dom().clone(),
        cod: t.dom().clone(),
        map,
    }))
}

/// A directed diagram of finite sets with injective connecting maps.
///
/// `edges` holds a connecting map for every strict pair i < j of the index
/// poset; identities are implicit.
#[derive(Debug, Clone)]
pub struct DirectedDiagram {
    pub index: FinPoset,
    pub objects: Vec<FinSetObj>,
    pub edges: BTreeMap<(usize, usize), FinFn>,
}

impl DirectedDiagram {
    /// Check directedness of the index, totality/injectivity of the edges,
    /// and functoriality (composites agree).
    pub fn validate(&self) -> Result<()> {
        let n = self.index.len();
        if n == 0 {
            return Err(Error::EmptyDiagram);
        }
        if self.objects.len() != n {
            return Err(Error::Schema("one object per index element required".into()));
        }
        let all: Vec<usize> = (0..n).collect();
        if !self.index.is_directed(&all) {
            let (a, b) = first_unbounded_pair(&self.index, &all)
                .expect("non-directed index has an unbounded pair");
            return Err(Error::NotDirected(
                self.index.name(a).to_string(),
                self.index.name(b).to_string(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.index.le(i, j) {
                    continue;
                }
                let e = self.edges.get(&(i, j)).ok_or_else(|| {
                    Error::Schema(format!(
                        "missing connecting map {} -> {}",
                        self.index.name(i),
                        self.index.name(j)
                    ))
                })?;
                if e.dom() != &self.objects[i] || e.cod() != &self.objects[j] {
                    return Err(Error::Schema(format!(
                        "connecting map {} -> {} has wrong endpoints",
                        self.index.name(i),
                        self.index.name(j)
                    )));
                }
                if !is_mono(e) {
                    let (a, b) = mono_counterexample(e).unwrap();
                    return Err(Error::NotMono(
                        a.to_string(),
                        b.to_string(),
                        format!("{}->{}", self.index.name(i), self.index.name(j)),
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.index.le(i, j) {
                    continue;
                }
                for k in 0..n {
                    if j == k || !self.index.le(j, k) || i == k {
                        continue;
                    }
                    let ij = &self.edges[&(i, j)];
                    let jk = &self.edges[&(j, k)];
                    let ik = &self.edges[&(i, k)];
                    if &jk.compose(ij)? != ik {
                        return Err(Error::NotFunctorial {
                            i: self.index.name(i).to_string(),
                            j: self.index.name(j).to_string(),
                            k: self.index.name(k).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The maximum of the index poset (exists: finite and directed).
    pub fn max_index(&self) -> usize {
        let n = self.index.len();
        (0..n)
            .find(|&m| (0..n).all(|i| self.index.le(i, m)))
            .expect("a finite directed poset has a maximum")
    }

    /// The connecting map i -> j (identity when i = j).
    pub fn edge(&self, i: usize, j: usize) -> FinFn {
        if i == j {
            FinFn::identity(self.objects[i].clone())
        } else {
            self.edges[&(i, j)].clone()
        }
    }
}

fn first_unbounded_pair(p: &FinPoset, s: &[usize]) -> Option<(usize, usize)> {
    if s.is_empty() {
        return None;
    }
    for &a in s {
        for &b in s {
            if !s.iter().any(|&u| p.le(a, u) && p.le(b, u)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// The result of a directed colimit: carrier, one injection per diagram
/// object, and the representative chosen for each class (for certificates).
#[derive(Debug, Clone)]
pub struct ColimitResult {
    pub carrier: FinSetObj,
    pub injections: Vec<FinFn>,
    /// For each (index, element) of the disjoint union, the colimit element
    /// it lands on, as (diagram index, element term, class term).
    pub representatives: Vec<(String, String, String)>,
}

/// Directed colimit by union-find over the disjoint union, quotiented by the
/// equivalence generated by the connecting maps. For a finite directed index
/// the result is canonically the diagram's value at its maximum index, which
/// is asserted and used to pick class representatives.
pub fn directed_colimit(diagram: &DirectedDiagram) -> Result<ColimitResult> {
    diagram.validate()?;
    let n = diagram.index.len();
    let offsets: Vec<usize> = diagram
        .objects
        .iter()
        .scan(0usize, |acc, o| {
            let off = *acc;
            *acc += o.len();
            Some(off)
        })
        .collect();
    let total: usize = diagram.objects.iter().map(|o| o.len()).sum();

    let mut uf = UnionFind::new(total);
    for (&(i, j), e) in &diagram.edges {
        for x in 0..diagram.objects[i].len() {
            uf.union(offsets[i] + x, offsets[j] + e.apply_idx(x));
        }
    }

    let m = diagram.max_index();
    // every class contains exactly one element of the maximum-index object
    let mut class_of_max: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..diagram.objects[m].len() {
        let root = uf.find(offsets[m] + x);
        if class_of_max.insert(root, x).is_some() {
            return Err(Error::InternalInvariant(
                "two maximum-index elements merged in an injective diagram".into(),
            ));
        }
    }
    let carrier = diagram.objects[m].clone();
    let mut injections = Vec::with_capacity(n);
    let mut representatives = Vec::new();
    for i in 0..n {
        let mut map = Vec::with_capacity(diagram.objects[i].len());
        for x in 0..diagram.objects[i].len() {
            let root = uf.find(offsets[i] + x);
            let target = *class_of_max.get(&root).ok_or_else(|| {
                Error::InternalInvariant(
                    "class without a maximum-index representative".into(),
                )
            })?;
            map.push(target);
            representatives.push((
                diagram.index.name(i).to_string(),
                diagram.objects[i].term(x).to_string(),
                carrier.term(target).to_string(),
            ));
        }
        injections.push(FinFn::new(
            diagram.objects[i].clone(),
            carrier.clone(),
            map,
        )?);
    }
    // sanity: injections commute with the connecting maps
    for (&(i, j), e) in &diagram.edges {
        if injections[j].compose(e)? != injections[i] {
            return Err(Error::InternalInvariant(
                "colimit injections do not form a cocone".into(),
            ));
        }
    }
    Ok(ColimitResult {
        carrier,
        injections,
        representatives,
    })
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// The subobject lattice of a finite set: the full powerset ordered by
/// inclusion, with a bitmask attached to each lattice element.
#[derive(Debug, Clone)]
pub struct SubobjectLattice {
    pub ambient: FinSetObj,
    pub poset: FinPoset,
    /// For each poset element (in the poset's canonical order), the subset
    /// of ambient indices it denotes.
    pub masks: Vec<u32>,
}

impl SubobjectLattice {
    pub fn element_of_mask(&self, mask: u32) -> usize {
        self.masks
            .iter()
            .position(|&m| m == mask)
            .expect("every mask is a lattice element")
    }

    pub fn subset_of(&self, elem: usize) -> FinSetObj {
        self.ambient
            .subset(&crate::poset::mask_to_vec(self.masks[elem]))
    }
}

/// Name a subset of ambient canonically as a set term string.
pub fn subset_name(ambient: &FinSetObj, mask: u32) -> String {
    let terms: Vec<Term> = crate::poset::mask_to_vec(mask)
        .into_iter()
        .map(|i| ambient.term(i).clone())
        .collect();
    Term::set(terms).to_string()
}

/// Materialize the powerset lattice of `a` ordered by inclusion.
pub fn subobject_lattice(a: &FinSetObj) -> Result<SubobjectLattice> {
    let n = a.len();
    caps::require("subobject lattice 2^|A|", 1u128 << n, 1u128 << caps::enum_cap())?;
    let count = 1usize << n;
    let mut named: Vec<(String, u32)> = (0..count as u32)
        .map(|mask| (subset_name(a, mask), mask))
        .collect();
    named.sort();
    let elems: Vec<String> = named.iter().map(|(s, _)| s.clone()).collect();
    let masks: Vec<u32> = named.iter().map(|(_, m)| *m).collect();
    let mut leq = vec![false; count * count];
    for i in 0..count {
        for j in 0..count {
            leq[i * count + j] = masks[i] & !masks[j] == 0;
        }
    }
    let poset = FinPoset::from_parts(elems, leq);
    Ok(SubobjectLattice {
        ambient: a.clone(),
        poset,
        masks,
    })
}

/// Certificate data for the smoothness check in finite sets: the directed
/// family's colimit coincides with its union, and the factorizing map into
/// the ambient set is monic.
#[derive(Debug, Clone)]
pub struct SmoothFinsetReport {
    pub join_mask: u32,
    pub colimit: ColimitResult,
    pub factorizer: FinFn,
    pub factorizer_monic: bool,
    pub colimit_equals_union: bool,
}

/// Check that a directed family of subsets of `a` has its lattice join
/// realized by the colimit of the corresponding inclusion diagram, and that
/// the induced map into `a` is monic.
pub fn check_smooth_finset(a: &FinSetObj, family: &[Vec<usize>]) -> Result<SmoothFinsetReport> {
    if family.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let masks: Vec<u32> = family.iter().map(|s| crate::poset::vec_to_mask(s)).collect();
    // directedness under inclusion, inside the family
    for &ma in &masks {
        for &mb in &masks {
            if !masks.iter().any(|&mu| ma & !mu == 0 && mb & !mu == 0) {
                return Err(Error::NotDirected(
                    subset_name(a, ma),
                    subset_name(a, mb),
                ));
            }
        }
    }
    // build the inclusion diagram indexed by the family itself
    let mut uniq = masks.clone();
    uniq.sort_unstable();
    uniq.dedup();
    let mut named: Vec<(String, u32)> = uniq.iter().map(|&m| (subset_name(a, m), m)).collect();
    named.sort();
    let index_elems: Vec<String> = named.iter().map(|(s, _)| s.clone()).collect();
    let pairs: Vec<(String, String)> = named
        .iter()
        .flat_map(|(si, mi)| {
            named
                .iter()
                .filter(move |(sj, mj)| si != sj && mi & !mj == 0)
                .map(move |(sj, _)| (si.clone(), sj.clone()))
        })
        .collect();
    let index = FinPoset::validate(&index_elems, &pairs)?;
    let mut objects = Vec::new();
    for name in index.elems() {
        let mask = named.iter().find(|(s, _)| s == name).unwrap().1;
        objects.push(a.subset(&crate::poset::mask_to_vec(mask)));
    }
    let mut edges = BTreeMap::new();
    for i in 0..index.len() {
        for j in 0..index.len() {
            if i != j && index.le(i, j) {
                edges.insert((i, j), objects[i].inclusion_into(&objects[j])?);
            }
        }
    }
    let diagram = DirectedDiagram {
        index,
        objects,
        edges,
    };
    let colimit = directed_colimit(&diagram)?;
    // the factorizing map into the ambient set, induced by the inclusions
    let factorizer = colimit.carrier.inclusion_into(a)?;
    for (i, obj) in diagram.objects.iter().enumerate() {
        let via = factorizer.compose(&colimit.injections[i])?;
        let direct = obj.inclusion_into(a)?;
        if via != direct {
            return Err(Error::InternalInvariant(
                "factorizer does not commute with the cocone".into(),
            ));
        }
    }
    let join_mask = masks.iter().fold(0u32, |acc, &m| acc | m);
    let union = a.subset(&crate::poset::mask_to_vec(join_mask));
    let report = SmoothFinsetReport {
        join_mask,
        factorizer_monic: is_mono(&factorizer),
        colimit_equals_union: colimit.carrier == union,
        colimit,
        factorizer,
    };
    Ok(report)
}
