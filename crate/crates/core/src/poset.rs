//! Finite partial orders, monotone maps, directed subsets, joins.
//!
//! Elements are opaque strings held in a canonical (lexicographic) order that
//! is used only to make iteration and output deterministic; it never feeds
//! the mathematical order. Internally everything works on indices into the
//! canonical element list.

use std::collections::BTreeSet;

use crate::caps;
use crate::{Error, Result};

/// A finite partial order: distinct elements plus a reflexive, antisymmetric,
/// transitive relation stored as an n-by-n boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    elems: Vec<String>,
    leq: Vec<bool>, // row-major: leq[i*n + j] <=> elems[i] <= elems[j]
}

impl FinPoset {
    /// Validate raw data into a poset: closes the relation reflexively, then
    /// verifies antisymmetry and transitivity on the closed relation.
    pub fn validate<S: AsRef<str>>(elems: &[S], raw_leq: &[(S, S)]) -> Result<FinPoset> {
        let mut names: Vec<String> = elems.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        let n = names.len();
        let idx = |s: &str| -> Result<usize> {
            names
                .binary_search_by(|e| e.as_str().cmp(s))
                .map_err(|_| Error::UnknownElement(s.to_string()))
        };
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in raw_leq {
            let (i, j) = (idx(a.as_ref())?, idx(b.as_ref())?);
            leq[i * n + j] = true;
        }
        // antisymmetry
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::AntisymmetryViolation(
                        names[i].clone(),
                        names[j].clone(),
                    ));
                }
            }
        }
        // transitivity is verified, not closed: the input relation must
        // already contain its composites
        for i in 0..n {
            for j in 0..n {
                if !leq[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if leq[j * n + k] && !leq[i * n + k] {
                        return Err(Error::TransitivityViolation(
                            names[i].clone(),
                            names[j].clone(),
                            names[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(FinPoset { elems: names, leq })
    }

    /// Construct from an already-valid matrix. Panics only through the debug
    /// assertion; callers are internal constructions that preserve validity.
    pub(crate) fn from_parts(elems: Vec<String>, leq: Vec<bool>) -> FinPoset {
        debug_assert_eq!(elems.len() * elems.len(), leq.len());
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FinPoset { elems, leq }
    }

    /// The one-element poset.
    pub fn singleton(name: &str) -> FinPoset {
        FinPoset {
            elems: vec![name.to_string()],
            leq: vec![true],
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[String] {
        &self.elems
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elems.binary_search_by(|e| e.as_str().cmp(name)).ok()
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.elems.len() + j]
    }

    /// All pairs (i, j) with i <= j, for reporting.
    pub fn le_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| i != j).map(move |j| (i, j)))
            .filter(|&(i, j)| self.le(i, j))
            .collect()
    }

    /// The least element, if one exists.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.le(b, x)))
    }

    /// The greatest element, if one exists.
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.le(x, t)))
    }

    pub fn is_upper_bound(&self, u: usize, s: &[usize]) -> bool {
        s.iter().all(|&x| self.le(x, u))
    }

    /// Least upper bound of a subset, if it exists. The join of the empty
    /// subset is the bottom, if that exists.
    pub fn join(&self, s: &[usize]) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.len())
            .filter(|&u| self.is_upper_bound(u, s))
            .collect();
        ubs.iter()
            .copied()
            .find(|&m| ubs.iter().all(|&u| self.le(m, u)))
    }

    /// Greatest lower bound of a subset, if it exists.
    pub fn meet(&self, s: &[usize]) -> Option<usize> {
        let lbs: Vec<usize> = (0..self.len())
            .filter(|&l| s.iter().all(|&x| self.le(l, x)))
            .collect();
        lbs.iter()
            .copied()
            .find(|&m| lbs.iter().all(|&l| self.le(l, m)))
    }

    /// Nonempty and every pair has an upper bound inside the subset
    /// (pairwise suffices for finite subsets).
    pub fn is_directed(&self, s: &[usize]) -> bool {
        !s.is_empty()
            && s.iter()
                .all(|&a| s.iter().all(|&b| s.iter().any(|&u| self.le(a, u) && self.le(b, u))))
    }

    /// Exhaustive check that every subset has a join. Refuses above the
    /// enumeration cap.
    pub fn is_complete_lattice(&self) -> Result<bool> {
        let n = self.len();
        caps::require("complete-lattice scan", 1u128 << n, 1u128 << caps::enum_cap())?;
        for mask in 0u32..(1u32 << n) {
            let s = mask_to_vec(mask);
            if self.join(&s).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The witnessing subset for `NotACompleteLattice`, if any.
    pub fn joinless_subset(&self) -> Result<Option<Vec<usize>>> {
        let n = self.len();
        caps::require("complete-lattice scan", 1u128 << n, 1u128 << caps::enum_cap())?;
        for mask in 0u32..(1u32 << n) {
            let s = mask_to_vec(mask);
            if self.join(&s).is_none() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// All directed subsets, as sorted index vectors. Cap-guarded.
    pub fn directed_subsets(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.len();
        caps::require("directed-subset scan", 1u128 << n, 1u128 << caps::enum_cap())?;
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << n) {
            let s = mask_to_vec(mask);
            if self.is_directed(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Induced sub-poset on a set of indices; returns it with the map from
    /// new indices back to ambient ones.
    pub fn induced(&self, s: &[usize]) -> (FinPoset, Vec<usize>) {
        let mut picked: Vec<usize> = s.to_vec();
        picked.sort_unstable();
        picked.dedup();
        // canonical order of the sub-poset follows element names, which are
        // already sorted consistently with ambient indices
        let elems: Vec<String> = picked.iter().map(|&i| self.elems[i].clone()).collect();
        let m = picked.len();
        let mut leq = vec![false; m * m];
        for a in 0..m {
            for b in 0..m {
                leq[a * m + b] = self.le(picked[a], picked[b]);
            }
        }
        (FinPoset { elems, leq }, picked)
    }

    /// Indices in an order compatible with `<=` (a linear extension).
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| self.le(j, i)).count());
        order
    }

    /// Names for a set of indices, for error messages.
    pub fn names(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&i| self.elems[i].clone()).collect()
    }
}

pub fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|&b| mask & (1 << b) != 0).collect()
}

pub fn vec_to_mask(s: &[usize]) -> u32 {
    s.iter().fold(0u32, |m, &b| m | (1 << b))
}

/// A monotone self-map on a finite poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneEndo {
    poset: FinPoset,
    map: Vec<usize>,
}

impl MonotoneEndo {
    /// Check a raw map for monotonicity; the error carries the violating pair.
    pub fn new(poset: FinPoset, map: Vec<usize>) -> Result<MonotoneEndo> {
        if map.len() != poset.len() || map.iter().any(|&v| v >= poset.len()) {
            return Err(Error::Schema("endomap is not total on the poset".into()));
        }
        for i in 0..poset.len() {
            for j in 0..poset.len() {
                if poset.le(i, j) && !poset.le(map[i], map[j]) {
                    return Err(Error::MonotonicityViolation(
                        poset.name(i).to_string(),
                        poset.name(j).to_string(),
                    ));
                }
            }
        }
        Ok(MonotoneEndo { poset, map })
    }

    pub fn from_named<S: AsRef<str>>(poset: FinPoset, pairs: &[(S, S)]) -> Result<MonotoneEndo> {
        let map = named_pairs_to_map(&poset, &poset, pairs)?;
        MonotoneEndo::new(poset, map)
    }

    pub fn identity(poset: FinPoset) -> MonotoneEndo {
        let map = (0..poset.len()).collect();
        MonotoneEndo { poset, map }
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// A monotone map between two finite posets. Strictness (bottom goes to
/// bottom) is checked on demand, not carried as data: on finite posets a
/// monotone map already preserves all directed joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetMap {
    dom: FinPoset,
    cod: FinPoset,
    map: Vec<usize>,
}

impl PosetMap {
    pub fn new(dom: FinPoset, cod: FinPoset, map: Vec<usize>) -> Result<PosetMap> {
        if map.len() != dom.len() || map.iter().any(|&v| v >= cod.len()) {
            return Err(Error::Schema("poset map is not total".into()));
        }
        for i in 0..dom.len() {
            for j in 0..dom.len() {
                if dom.le(i, j) && !cod.le(map[i], map[j]) {
                    return Err(Error::MonotonicityViolation(
                        dom.name(i).to_string(),
                        dom.name(j).to_string(),
                    ));
                }
            }
        }
        Ok(PosetMap { dom, cod, map })
    }

    pub fn from_named<S: AsRef<str>>(
        dom: FinPoset,
        cod: FinPoset,
        pairs: &[(S, S)],
    ) -> Result<PosetMap> {
        let map = named_pairs_to_map(&dom, &cod, pairs)?;
        PosetMap::new(dom, cod, map)
    }

    pub fn identity(p: FinPoset) -> PosetMap {
        let map = (0..p.len()).collect();
        PosetMap {
            dom: p.clone(),
            cod: p,
            map,
        }
    }

    pub fn dom(&self) -> &FinPoset {
        &self.dom
    }

    pub fn cod(&self) -> &FinPoset {
        &self.cod
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &PosetMap) -> Result<PosetMap> {
        if first.cod != self.dom {
            return Err(Error::Schema("composition domain mismatch".into()));
        }
        let map = first.map.iter().map(|&i| self.map[i]).collect();
        Ok(PosetMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map,
        })
    }

    /// Does the map send the domain bottom to the codomain bottom?
    pub fn is_strict(&self) -> Result<bool> {
        let bd = self.dom.bottom().ok_or(Error::NoBottom)?;
        let bc = self.cod.bottom().ok_or(Error::NoBottom)?;
        Ok(self.map[bd] == bc)
    }

    /// Pointwise order on maps with equal domain and codomain.
    pub fn le_pointwise(&self, other: &PosetMap) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && (0..self.dom.len()).all(|i| self.cod.le(self.map[i], other.map[i]))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.iter().all(|&v| seen.insert(v))
    }

    pub fn is_surjective(&self) -> bool {
        let seen: BTreeSet<usize> = self.map.iter().copied().collect();
        seen.len() == self.cod.len()
    }

    /// Bijective and order-reflecting, i.e. an isomorphism of posets;
    /// returns the inverse.
    pub fn order_iso_inverse(&self) -> Option<PosetMap> {
        if self.dom.len() != self.cod.len() || !self.is_injective() {
            return None;
        }
        let mut inv = vec![0usize; self.cod.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        PosetMap::new(self.cod.clone(), self.dom.clone(), inv).ok()
    }
}

fn named_pairs_to_map<S: AsRef<str>>(
    dom: &FinPoset,
    cod: &FinPoset,
    pairs: &[(S, S)],
) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; dom.len()];
    for (a, b) in pairs {
        let i = dom
            .index_of(a.as_ref())
            .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
        let j = cod
            .index_of(b.as_ref())
            .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
        map[i] = j;
    }
    if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
        return Err(Error::Schema(format!(
            "map is missing a value for `{}`",
            dom.name(i)
        )));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain, diamond};

    #[test]
    fn singleton_reflexive() {
        let p = FinPoset::validate(&["a"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.le(0, 0));
    }

    #[test]
    fn three_chain_axioms() {
        // axiom check by exhaustive scan over the closed relation
        let p = FinPoset::validate(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("0", "2")])
            .unwrap();
        let n = p.len();
        for i in 0..n {
            assert!(p.le(i, i));
            for j in 0..n {
                if i != j && p.le(i, j) {
                    assert!(!p.le(j, i));
                }
                for k in 0..n {
                    if p.le(i, j) && p.le(j, k) {
                        assert!(p.le(i, k));
                    }
                }
            }
        }
        let (b, m, t) = (
            p.index_of("0").unwrap(),
            p.index_of("1").unwrap(),
            p.index_of("2").unwrap(),
        );
        assert!(p.le(b, m) && p.le(m, t) && p.le(b, t));
    }

    #[test]
    fn antisymmetry_detected() {
        let err = FinPoset::validate(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::AntisymmetryViolation(_, _)));
    }

    #[test]
    fn transitivity_detected() {
        let err = FinPoset::validate(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap_err();
        assert!(matches!(err, Error::TransitivityViolation(_, _, _)));
    }

    #[test]
    fn duplicate_detected() {
        let err = FinPoset::validate(&["a", "a"], &[]).unwrap_err();
        assert!(matches!(err, Error::DuplicateElement(_)));
    }

    #[test]
    fn bottom_cases() {
        assert_eq!(chain(3).bottom(), Some(chain(3).index_of("c0").unwrap()));
        let anti = FinPoset::validate(&["a", "b"], &[]).unwrap();
        assert_eq!(anti.bottom(), None);
        let d = diamond();
        assert_eq!(d.bottom(), Some(d.index_of("bot").unwrap()));
    }

    #[test]
    fn join_cases() {
        let d = diamond();
        let (a, b, top) = (
            d.index_of("a").unwrap(),
            d.index_of("b").unwrap(),
            d.index_of("top").unwrap(),
        );
        // exhaustive upper-bound scan oracle: upper bounds of {a,b} are {top}
        let ubs: Vec<usize> = (0..d.len())
            .filter(|&u| d.le(a, u) && d.le(b, u))
            .collect();
        assert_eq!(ubs, vec![top]);
        assert_eq!(d.join(&[a, b]), Some(top));
        assert_eq!(d.join(&[a]), Some(a));
        let anti = FinPoset::validate(&["a", "b"], &[]).unwrap();
        assert_eq!(anti.join(&[0, 1]), None);
        // empty join is bottom when it exists
        assert_eq!(d.join(&[]), d.bottom());
        assert_eq!(anti.join(&[]), None);
    }

    #[test]
    fn directedness_cases() {
        let c = chain(3);
        assert!(c.is_directed(&[0, 2]));
        let d = diamond();
        let (a, b) = (d.index_of("a").unwrap(), d.index_of("b").unwrap());
        assert!(!d.is_directed(&[a, b]));
        assert!(!d.is_directed(&[]));
    }

    #[test]
    fn monotone_checks() {
        let c = chain(3);
        assert!(MonotoneEndo::new(c.clone(), vec![0, 1, 2]).is_ok());
        // swap endpoints, fix middle: not monotone, violation at (c0, c1)
        let err = MonotoneEndo::new(c.clone(), vec![2, 1, 0]).unwrap_err();
        assert_eq!(
            err,
            Error::MonotonicityViolation("c0".into(), "c1".into())
        );
        let d = diamond();
        let top = d.index_of("top").unwrap();
        assert!(MonotoneEndo::new(d.clone(), vec![top; 4]).is_ok());
    }

    #[test]
    fn finite_dcpo_property() {
        // every directed subset of a finite poset contains its join
        for p in [chain(4), diamond()] {
            for s in p.directed_subsets().unwrap() {
                let j = p.join(&s).expect("directed subset must have a join");
                assert!(s.contains(&j), "join must be the maximum of the subset");
                // idempotence under adjoining the join
                let mut s2 = s.clone();
                s2.push(j);
                s2.sort_unstable();
                s2.dedup();
                assert_eq!(p.join(&s2), Some(j));
            }
        }
    }

    #[test]
    fn induced_subposet() {
        let d = diamond();
        let (bot, a) = (d.index_of("bot").unwrap(), d.index_of("a").unwrap());
        let (sub, back) = d.induced(&[a, bot]);
        assert_eq!(sub.len(), 2);
        assert_eq!(back.len(), 2);
        let sa = sub.index_of("a").unwrap();
        let sb = sub.index_of("bot").unwrap();
        assert!(sub.le(sb, sa) && !sub.le(sa, sb));
    }
}
