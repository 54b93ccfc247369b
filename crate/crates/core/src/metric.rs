//! Directed joins of finite metric subspaces, with exact rational
//! arithmetic throughout — no floating point, no tolerances.
//!
//! A family of subspaces of an ambient space (A, d) is given by subsets
//! carrying their own metrics, subject to the inclusions being
//! non-expanding both into the ambient space and along the family order.
//! The join metric takes, for each pair, the minimum over all subspaces
//! realizing the pair; at finite scale the infimum is a minimum.

use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, Result};

/// A finite metric space with rational distances in [0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    points: Vec<String>,
    dist: Vec<BigRational>, // row-major n*n
}

impl FiniteMetric {
    /// Validate the metric axioms exactly.
    pub fn new(points: Vec<String>, dist: Vec<BigRational>) -> Result<FiniteMetric> {
        let n = points.len();
        let mut sorted = points.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        if dist.len() != n * n {
            return Err(Error::Schema("distance matrix must be n*n".into()));
        }
        let m = FiniteMetric { points, dist };
        m.check_axioms()?;
        Ok(m)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        let one = BigRational::from_integer(1.into());
        for i in 0..n {
            if !self.d(i, i).is_zero() {
                return Err(Error::NotAMetric(format!(
                    "d({p},{p}) != 0",
                    p = self.points[i]
                )));
            }
            for j in 0..n {
                let dij = self.d(i, j);
                if dij < BigRational::zero() || dij > one {
                    return Err(Error::NotAMetric(format!(
                        "d({},{}) outside [0,1]",
                        self.points[i], self.points[j]
                    )));
                }
                if i != j && dij.is_zero() {
                    return Err(Error::NotAMetric(format!(
                        "distinct points {} and {} at distance 0",
                        self.points[i], self.points[j]
                    )));
                }
                if dij != self.d(j, i) {
                    return Err(Error::NotAMetric(format!(
                        "asymmetry between {} and {}",
                        self.points[i], self.points[j]
                    )));
                }
                for k in 0..n {
                    if self.d(i, k) > self.d(i, j) + self.d(j, k) {
                        return Err(Error::NotAMetric(format!(
                            "triangle inequality fails through {} for ({}, {})",
                            self.points[j], self.points[i], self.points[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, p: &str) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    pub fn d(&self, i: usize, j: usize) -> BigRational {
        self.dist[i * self.points.len() + j].clone()
    }
}

/// A directed family of metric subspaces of an ambient space: each subspace
/// names a subset of ambient points and carries its own metric, at least as
/// large as the ambient one (so the inclusion is non-expanding).
#[derive(Debug, Clone)]
pub struct MetricFamily {
    pub ambient: FiniteMetric,
    pub subspaces: Vec<FiniteMetric>,
}

impl MetricFamily {
    /// Subspace points must name ambient points; inclusions into the ambient
    /// space must be non-expanding.
    pub fn validate(&self) -> Result<()> {
        if self.subspaces.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        for s in &self.subspaces {
            for p in s.points() {
                if self.ambient.index_of(p).is_none() {
                    return Err(Error::UnknownElement(p.clone()));
                }
            }
            for i in 0..s.len() {
                for j in 0..s.len() {
                    let ai = self.ambient.index_of(&s.points()[i]).unwrap();
                    let aj = self.ambient.index_of(&s.points()[j]).unwrap();
                    if self.ambient.d(ai, aj) > s.d(i, j) {
                        return Err(Error::NotNonExpanding(
                            s.points()[i].clone(),
                            s.points()[j].clone(),
                            s.d(i, j).to_string(),
                            self.ambient.d(ai, aj).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Subspace order: set inclusion with the inclusion map non-expanding
    /// (distances weakly shrink towards the larger subspace).
    fn le(&self, i: usize, j: usize) -> bool {
        let (si, sj) = (&self.subspaces[i], &self.subspaces[j]);
        si.points().iter().all(|p| sj.index_of(p).is_some())
            && si.points().iter().enumerate().all(|(x, p)| {
                si.points().iter().enumerate().all(|(y, q)| {
                    let jx = sj.index_of(p).unwrap();
                    let jy = sj.index_of(q).unwrap();
                    sj.d(jx, jy) <= si.d(x, y)
                })
            })
    }

    fn directed(&self) -> Result<()> {
        let n = self.subspaces.len();
        for i in 0..n {
            for j in 0..n {
                if !(0..n).any(|u| self.le(i, u) && self.le(j, u)) {
                    return Err(Error::NotDirected(
                        format!("subspace {i}"),
                        format!("subspace {j}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The join of the family together with the evidence collected.
#[derive(Debug, Clone)]
pub struct MetricJoinReport {
    pub join: FiniteMetric,
    /// For each pair of join points, the index of a subspace realizing the
    /// minimum.
    pub realizers: Vec<((String, String), usize)>,
    /// Every inclusion into the join stayed non-expanding.
    pub inclusions_non_expanding: bool,
    /// The join metric dominates the ambient metric pointwise.
    pub dominates_ambient: bool,
}

/// The directed join: carrier is the union of the subspace carriers; the
/// distance of a pair is the minimum of its distances over all subspaces
/// containing both. The result is verified to be a metric exactly, and each
/// subspace inclusion is re-checked to be non-expanding into the join.
pub fn metric_directed_join(family: &MetricFamily) -> Result<MetricJoinReport> {
    family.validate()?;
    family.directed()?;
    let mut carrier: Vec<String> = family
        .subspaces
        .iter()
        .flat_map(|s| s.points().iter().cloned())
        .collect();
    carrier.sort();
    carrier.dedup();
    let n = carrier.len();
    let mut dist = vec![BigRational::zero(); n * n];
    let mut realizers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut best: Option<(BigRational, usize)> = None;
            for (k, s) in family.subspaces.iter().enumerate() {
                if let (Some(x), Some(y)) =
                    (s.index_of(&carrier[i]), s.index_of(&carrier[j]))
                {
                    let dxy = s.d(x, y);
                    if best.as_ref().map_or(true, |(b, _)| &dxy < b) {
                        best = Some((dxy, k));
                    }
                }
            }
            let (d, realizer) = best.ok_or_else(|| {
                // directedness guarantees some subspace contains both
                Error::InternalInvariant(format!(
                    "no subspace realizes the pair ({}, {})",
                    carrier[i], carrier[j]
                ))
            })?;
            if i < j {
                realizers.push(((carrier[i].clone(), carrier[j].clone()), realizer));
            }
            dist[i * n + j] = d;
        }
    }
    // symmetry is inherited; identity of indiscernibles follows from the
    // join dominating the ambient metric, and the triangle inequality is
    // re-verified exhaustively by the axiom check
    let join = FiniteMetric::new(carrier.clone(), dist)?;
    let mut dominates_ambient = true;
    for i in 0..n {
        for j in 0..n {
            let ai = family.ambient.index_of(&carrier[i]).unwrap();
            let aj = family.ambient.index_of(&carrier[j]).unwrap();
            if join.d(i, j) < family.ambient.d(ai, aj) {
                dominates_ambient = false;
            }
        }
    }
    let mut inclusions_non_expanding = true;
    for s in &family.subspaces {
        for x in 0..s.len() {
            for y in 0..s.len() {
                let i = join.index_of(&s.points()[x]).unwrap();
                let j = join.index_of(&s.points()[y]).unwrap();
                if join.d(i, j) > s.d(x, y) {
                    inclusions_non_expanding = false;
                }
            }
        }
    }
    Ok(MetricJoinReport {
        join,
        realizers,
        inclusions_non_expanding,
        dominates_ambient,
    })
}

/// Parse a rational like "1/2" or "1" or "0.25" (decimal with up to 9
/// fractional digits).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<num_bigint::BigInt> {
        t.parse()
            .map_err(|_| Error::Schema(format!("malformed rational `{s}`")))
    };
    if let Some((num, den)) = s.split_once('/') {
        let d = parse_int(den.trim())?;
        if d.is_zero() {
            return Err(Error::Schema(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(parse_int(num.trim())?, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() > 9 || frac.is_empty() {
            return Err(Error::Schema(format!("malformed rational `{s}`")));
        }
        let denom = num_bigint::BigInt::from(10u64.pow(frac.len() as u32));
        let whole_part = parse_int(if whole.is_empty() { "0" } else { whole })?;
        let frac_part = parse_int(frac)?;
        let sign = if whole.starts_with('-') { -1 } else { 1 };
        return Ok(BigRational::new(
            whole_part * &denom + sign * frac_part,
            denom,
        ));
    }
    Ok(BigRational::from_integer(parse_int(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn space(points: &[&str], entries: &[(&str, &str, &str)]) -> FiniteMetric {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let n = pts.len();
        let mut dist = vec![BigRational::zero(); n * n];
        for (a, b, d) in entries {
            let i = pts.iter().position(|p| p == a).unwrap();
            let j = pts.iter().position(|p| p == b).unwrap();
            dist[i * n + j] = r(d);
            dist[j * n + i] = r(d);
        }
        FiniteMetric::new(pts, dist).unwrap()
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(r("1/2"), BigRational::new(1.into(), 2.into()));
        assert_eq!(r("0.25"), BigRational::new(1.into(), 4.into()));
        assert_eq!(r("1"), BigRational::from_integer(1.into()));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn axioms_enforced() {
        // triangle violation: d(a,c) = 1 > 1/4 + 1/4
        let pts: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut dist = vec![BigRational::zero(); 9];
        dist[1] = r("1/4");
        dist[3] = r("1/4");
        dist[5] = r("1/4");
        dist[7] = r("1/4");
        dist[2] = r("1");
        dist[6] = r("1");
        assert!(matches!(
            FiniteMetric::new(pts, dist).unwrap_err(),
            Error::NotAMetric(_)
        ));
    }

    #[test]
    fn singleton_family() {
        let ambient = space(&["p", "q"], &[("p", "q", "1/2")]);
        let sub = space(&["p", "q"], &[("p", "q", "1/2")]);
        let family = MetricFamily {
            ambient,
            subspaces: vec![sub.clone()],
        };
        let rep = metric_directed_join(&family).unwrap();
        assert_eq!(rep.join, sub);
        assert!(rep.inclusions_non_expanding && rep.dominates_ambient);
    }

    #[test]
    fn nested_pair_takes_larger_index() {
        // A1 = {p,q} with d = 1, A2 = {p,q,s} with d(p,q) = 1/2: the join
        // realizes d(p,q) at the larger subspace
        let ambient = space(
            &["p", "q", "s"],
            &[("p", "q", "1/4"), ("p", "s", "1/4"), ("q", "s", "1/4")],
        );
        let a1 = space(&["p", "q"], &[("p", "q", "1")]);
        let a2 = space(
            &["p", "q", "s"],
            &[("p", "q", "1/2"), ("p", "s", "1/2"), ("q", "s", "1/2")],
        );
        let family = MetricFamily {
            ambient,
            subspaces: vec![a1, a2],
        };
        let rep = metric_directed_join(&family).unwrap();
        let i = rep.join.index_of("p").unwrap();
        let j = rep.join.index_of("q").unwrap();
        assert_eq!(rep.join.d(i, j), r("1/2"));
        assert!(rep.inclusions_non_expanding && rep.dominates_ambient);
    }

    #[test]
    fn non_directed_rejected() {
        // two overlapping subspaces with incompatible metrics and no
        // common refinement in the family
        let ambient = space(
            &["p", "q", "s"],
            &[("p", "q", "1/4"), ("p", "s", "1/4"), ("q", "s", "1/4")],
        );
        let a1 = space(&["p", "q"], &[("p", "q", "1/2")]);
        let a2 = space(&["p", "s"], &[("p", "s", "1/2")]);
        let family = MetricFamily {
            ambient,
            subspaces: vec![a1, a2],
        };
        assert!(matches!(
            metric_directed_join(&family).unwrap_err(),
            Error::NotDirected(_, _)
        ));
    }

    #[test]
    fn expansion_rejected() {
        // subspace metric smaller than the ambient distance
        let ambient = space(&["p", "q"], &[("p", "q", "1/2")]);
        let sub = space(&["p", "q"], &[("p", "q", "1/4")]);
        let family = MetricFamily {
            ambient,
            subspaces: vec![sub],
        };
        assert!(matches!(
            metric_directed_join(&family).unwrap_err(),
            Error::NotNonExpanding(_, _, _, _)
        ));
    }
}
