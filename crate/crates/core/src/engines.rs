//! Least-fixed-point engines on finite posets.
//!
//! Four routes to the same answer, each a transcription of a different
//! proof, kept separate so they can cross-check each other:
//!
//! - [`kleene_lfp`]: iterate bottom through the map until stable.
//! - [`zermelo_lfp`]: the staged scheme f^0(bot) = bot,
//!   f^{j+1}(bot) = f(f^j(bot)). Limit stages are unreachable on a finite
//!   poset (every instance stabilizes within |P| steps), so the limit
//!   clause is a no-op; the stage count keeps the staging visible.
//! - [`tarski_lfp`]: on a complete lattice, the meet of all pre-fixed
//!   points. Used purely as an independent oracle.
//! - [`pataraia_lfp`]: the maximum of the smallest subset containing bottom
//!   and closed under the map and directed joins.
//! - [`pataraia_via_monoid`]: the same answer obtained by enumerating the
//!   monoid of monotone inflationary endomaps of that subset and applying
//!   its top element to bottom.

use crate::poset::{FinPoset, MonotoneEndo, PosetMap};
use crate::{caps, Error, Result};

/// Which engine produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Kleene,
    Zermelo,
    Tarski,
    Pataraia,
    Monoid,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Kleene => "kleene",
            Engine::Zermelo => "zermelo",
            Engine::Tarski => "tarski",
            Engine::Pataraia => "pataraia",
            Engine::Monoid => "monoid",
        }
    }
}

/// A least fixed point together with how much work found it.
///
/// `stages` counts map applications for the iterative engines, the size of
/// the saturated closure minus one for the Pataraia engine, and the size of
/// the enumerated monoid for the monoid engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfpResult {
    pub value: usize,
    pub stages: usize,
    pub engine: Engine,
}

/// The smallest subset of the carrier containing bottom and closed under
/// the map and under joins of its directed subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSet {
    pub members: Vec<usize>, // sorted by index
}

fn bottom_of(f: &MonotoneEndo) -> Result<usize> {
    f.poset().bottom().ok_or(Error::NoBottom)
}

/// Exhaustive scan verifying least-ness when the carrier is small enough;
/// a no-op above the cap. Valid input cannot trip this.
fn assert_least(f: &MonotoneEndo, value: usize, engine: Engine) -> Result<()> {
    let p = f.poset();
    if f.apply(value) != value {
        return Err(Error::InternalInvariant(format!(
            "{} returned a non-fixed point {}",
            engine.as_str(),
            p.name(value)
        )));
    }
    for x in 0..p.len() {
        if f.apply(x) == x && !p.le(value, x) {
            return Err(Error::InternalInvariant(format!(
                "{} returned {} which is not below the fixed point {}",
                engine.as_str(),
                p.name(value),
                p.name(x)
            )));
        }
    }
    Ok(())
}

/// Kleene iteration from bottom. Stabilizes in at most |P| steps.
pub fn kleene_lfp(f: &MonotoneEndo) -> Result<LfpResult> {
    let mut x = bottom_of(f)?;
    let mut stages = 0usize;
    loop {
        let fx = f.apply(x);
        if fx == x {
            break;
        }
        x = fx;
        stages += 1;
        if stages > f.poset().len() {
            return Err(Error::InternalInvariant(
                "kleene iteration exceeded |P| steps".into(),
            ));
        }
    }
    assert_least(f, x, Engine::Kleene)?;
    Ok(LfpResult {
        value: x,
        stages,
        engine: Engine::Kleene,
    })
}

/// The staged scheme restricted to finite stages: returns the first stage j
/// with f^j(bot) = f^{j+1}(bot), which is bounded by |P|.
pub fn zermelo_lfp(f: &MonotoneEndo) -> Result<LfpResult> {
    let bot = bottom_of(f)?;
    let mut stage = 0usize;
    let mut current = bot;
    loop {
        let next = f.apply(current);
        if next == current {
            break;
        }
        current = next;
        stage += 1;
        // Hartogs-style bound: some stage below |P|+1 must repeat
        if stage > f.poset().len() {
            return Err(Error::InternalInvariant(
                "zermelo staging exceeded the |P| bound".into(),
            ));
        }
    }
    assert_least(f, current, Engine::Zermelo)?;
    Ok(LfpResult {
        value: current,
        stages: stage,
        engine: Engine::Zermelo,
    })
}

/// Knaster-Tarski on a complete lattice: the meet of all pre-fixed points
/// {x : f(x) <= x}. Oracle only; refuses on non-complete-lattice carriers.
pub fn tarski_lfp(f: &MonotoneEndo) -> Result<usize> {
    let p = f.poset();
    if let Some(s) = p.joinless_subset()? {
        return Err(Error::NotACompleteLattice(p.names(&s).join(",")));
    }
    let prefixed: Vec<usize> = (0..p.len()).filter(|&x| p.le(f.apply(x), x)).collect();
    let m = p.meet(&prefixed).ok_or_else(|| {
        Error::InternalInvariant("complete lattice lost a meet of pre-fixed points".into())
    })?;
    // the meet of pre-fixed points is itself a fixed point
    if f.apply(m) != m {
        return Err(Error::InternalInvariant(
            "tarski meet is not a fixed point".into(),
        ));
    }
    Ok(m)
}

/// Saturate {bot} under the map. Joins of directed subsets cannot add
/// anything on a finite poset (a finite directed set contains its own
/// maximum), which is re-verified exhaustively while the closure is small.
pub fn pataraia_closure(f: &MonotoneEndo) -> Result<ClosureSet> {
    let bot = bottom_of(f)?;
    let p = f.poset();
    let mut member = vec![false; p.len()];
    member[bot] = true;
    let mut frontier = vec![bot];
    while let Some(x) = frontier.pop() {
        let fx = f.apply(x);
        if !member[fx] {
            member[fx] = true;
            frontier.push(fx);
        }
    }
    let members: Vec<usize> = (0..p.len()).filter(|&i| member[i]).collect();
    for &x in &members {
        if !p.le(x, f.apply(x)) {
            return Err(Error::InternalInvariant(format!(
                "closure member {} is not a post-fixed point",
                p.name(x)
            )));
        }
    }
    if members.len() <= caps::enum_cap() {
        for mask in 1u32..(1u32 << members.len()) {
            let d: Vec<usize> = crate::poset::mask_to_vec(mask)
                .into_iter()
                .map(|b| members[b])
                .collect();
            if p.is_directed(&d) {
                let j = p.join(&d).ok_or_else(|| {
                    Error::InternalInvariant("directed subset without a join".into())
                })?;
                if !member[j] {
                    return Err(Error::InternalInvariant(
                        "closure is not closed under directed joins".into(),
                    ));
                }
            }
        }
    }
    Ok(ClosureSet { members })
}

/// Pataraia's construction: the maximum of the saturated closure is the
/// least fixed point. The closure consists of post-fixed points below every
/// fixed point, so its maximum is both fixed and least.
pub fn pataraia_lfp(f: &MonotoneEndo) -> Result<LfpResult> {
    let t = pataraia_closure(f)?;
    let p = f.poset();
    let max = t
        .members
        .iter()
        .copied()
        .find(|&m| t.members.iter().all(|&x| p.le(x, m)))
        .ok_or_else(|| Error::NoMaximum("pataraia closure".into()))?;
    // the closure sits inside the down-set of every fixed point
    for x in 0..p.len() {
        if f.apply(x) == x {
            for &m in &t.members {
                if !p.le(m, x) {
                    return Err(Error::InternalInvariant(format!(
                        "closure member {} escapes the down-set of fixed point {}",
                        p.name(m),
                        p.name(x)
                    )));
                }
            }
        }
    }
    assert_least(f, max, Engine::Pataraia)?;
    Ok(LfpResult {
        value: max,
        stages: t.members.len().saturating_sub(1),
        engine: Engine::Pataraia,
    })
}

/// An explicitly tabulated partially ordered monoid: a finite carrier poset,
/// a multiplication table monotone in both arguments, and a unit.
#[derive(Debug, Clone)]
pub struct OrderedMonoid {
    carrier: FinPoset,
    mul: Vec<usize>, // row-major: mul[a*n + b] = a . b
    unit: usize,
}

impl OrderedMonoid {
    pub fn new(carrier: FinPoset, mul: Vec<usize>, unit: usize) -> Result<OrderedMonoid> {
        let n = carrier.len();
        if mul.len() != n * n || unit >= n || mul.iter().any(|&v| v >= n) {
            return Err(Error::Schema("malformed multiplication table".into()));
        }
        let m = |a: usize, b: usize| mul[a * n + b];
        for a in 0..n {
            if m(unit, a) != a || m(a, unit) != a {
                return Err(Error::MonoidLawViolation(format!(
                    "unit law fails at {}",
                    carrier.name(a)
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::MonoidLawViolation(format!(
                            "associativity fails at ({}, {}, {})",
                            carrier.name(a),
                            carrier.name(b),
                            carrier.name(c)
                        )));
                    }
                }
            }
        }
        // multiplication monotone in both arguments
        for a in 0..n {
            for b in 0..n {
                if !carrier.le(a, b) {
                    continue;
                }
                for a2 in 0..n {
                    for b2 in 0..n {
                        if carrier.le(a2, b2) && !carrier.le(m(a, a2), m(b, b2)) {
                            return Err(Error::MonoidLawViolation(format!(
                                "multiplication not monotone at ({}, {}) . ({}, {})",
                                carrier.name(a),
                                carrier.name(b),
                                carrier.name(a2),
                                carrier.name(b2)
                            )));
                        }
                    }
                }
            }
        }
        Ok(OrderedMonoid { carrier, mul, unit })
    }

    pub fn carrier(&self) -> &FinPoset {
        &self.carrier
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.carrier.len() + b]
    }
}

/// In a directed-complete ordered monoid whose unit is the bottom, the top
/// element exists and is a zero. Returns the top; the zero law is asserted.
pub fn monoid_top_zero(m: &OrderedMonoid) -> Result<usize> {
    let p = m.carrier();
    let bot = p.bottom().ok_or(Error::NoBottom)?;
    if m.unit() != bot {
        return Err(Error::UnitNotBottom);
    }
    // m . n bounds both factors from above, so the whole carrier is
    // directed and (being finite) has a maximum
    let all: Vec<usize> = (0..p.len()).collect();
    let top = p.join(&all).ok_or(Error::NoTop)?;
    for x in 0..p.len() {
        if m.mul(top, x) != top || m.mul(x, top) != top {
            return Err(Error::InternalInvariant(format!(
                "top is not a zero: fails against {}",
                p.name(x)
            )));
        }
    }
    Ok(top)
}

/// Everything the monoid engine saw, for reporting.
#[derive(Debug, Clone)]
pub struct MonoidTrace {
    /// Members of the restricted carrier T, as indices into the original poset.
    pub closure: Vec<usize>,
    /// Monotone inflationary endomaps of T, each tabulated over T's local indices.
    pub maps: Vec<Vec<usize>>,
    /// Index into `maps` of the top element.
    pub top: usize,
}

/// The monoid route: restrict the map to its closure T, enumerate the monoid
/// M of monotone inflationary endomaps of T under composition, check that M
/// is a directed-complete ordered monoid whose unit (the identity) is its
/// bottom, take its top t, verify t is a zero, and return t(bot).
pub fn pataraia_via_monoid(f: &MonotoneEndo, cap: usize) -> Result<(LfpResult, MonoidTrace)> {
    let closure = pataraia_closure(f)?;
    let t_size = closure.members.len();
    caps::require(
        "monoid enumeration |T|^|T|",
        (t_size as u128).pow(t_size as u32),
        (cap as u128).pow(cap as u32),
    )?;
    let (tp, back) = f.poset().induced(&closure.members);
    // the restriction of f to T, in T's local indices
    let local = |ambient: usize| back.iter().position(|&b| b == ambient).unwrap();
    let f_t: Vec<usize> = (0..t_size).map(|i| local(f.apply(back[i]))).collect();

    // enumerate all endomaps of T, keep the monotone inflationary ones
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut counter = vec![0usize; t_size];
    loop {
        let monotone = (0..t_size).all(|i| {
            (0..t_size).all(|j| !tp.le(i, j) || tp.le(counter[i], counter[j]))
        });
        let inflationary = (0..t_size).all(|i| tp.le(i, counter[i]));
        if monotone && inflationary {
            maps.push(counter.clone());
        }
        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == t_size {
                break;
            }
            counter[pos] += 1;
            if counter[pos] < t_size {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
        if pos == t_size {
            break;
        }
    }
    if t_size == 0 {
        return Err(Error::NoBottom);
    }

    let compose = |g: &[usize], h: &[usize]| -> Vec<usize> {
        // g after h
        (0..t_size).map(|i| g[h[i]]).collect()
    };
    let le = |g: &[usize], h: &[usize]| (0..t_size).all(|i| tp.le(g[i], h[i]));
    let find = |m: &Vec<usize>| maps.iter().position(|x| x == m);

    let id: Vec<usize> = (0..t_size).collect();
    let unit = find(&id).ok_or_else(|| {
        Error::InternalInvariant("identity map missing from the monoid".into())
    })?;
    // f restricted to T belongs to M
    if find(&f_t).is_none() {
        return Err(Error::InternalInvariant(
            "restriction of f to its closure is not inflationary".into(),
        ));
    }
    // M is a monoid: closed under composition, with the identity as unit,
    // and the identity is the bottom of the pointwise order
    for g in &maps {
        if !le(&id, g) {
            return Err(Error::UnitNotBottom);
        }
        for h in &maps {
            let gh = compose(g, h);
            if find(&gh).is_none() {
                return Err(Error::InternalInvariant(
                    "monoid not closed under composition".into(),
                ));
            }
            // directedness witness from the monoid theorem's proof:
            // g.h bounds both factors
            if !le(g, &gh) || !le(h, &gh) {
                return Err(Error::InternalInvariant(
                    "composite fails to bound its factors".into(),
                ));
            }
        }
    }
    // composition is monotone in both arguments
    for g in &maps {
        for g2 in &maps {
            if !le(g, g2) {
                continue;
            }
            for h in &maps {
                for h2 in &maps {
                    if le(h, h2) && !le(&compose(g, h), &compose(g2, h2)) {
                        return Err(Error::InternalInvariant(
                            "composition not monotone on the monoid".into(),
                        ));
                    }
                }
            }
        }
    }
    let top = (0..maps.len())
        .find(|&t| maps.iter().all(|g| le(g, &maps[t])))
        .ok_or(Error::NoTop)?;
    // the top is a zero
    for g in &maps {
        if compose(&maps[top], g) != maps[top] || compose(g, &maps[top]) != maps[top] {
            return Err(Error::InternalInvariant("monoid top is not a zero".into()));
        }
    }
    let bot_local = tp.bottom().ok_or(Error::NoBottom)?;
    let value = back[maps[top][bot_local]];
    let _ = unit;
    assert_least(f, value, Engine::Monoid)?;
    let trace = MonoidTrace {
        closure: closure.members.clone(),
        maps: maps.clone(),
        top,
    };
    Ok((
        LfpResult {
            value,
            stages: maps.len(),
            engine: Engine::Monoid,
        },
        trace,
    ))
}

/// The fixed points of a monotone map form a sub-dcpo: returns the induced
/// poset on {x : f(x) = x} together with the ambient indices, after checking
/// that each directed subset of the fixed-point set has its join inside it.
pub fn fixed_point_subdcpo(f: &MonotoneEndo) -> Result<(FinPoset, Vec<usize>)> {
    bottom_of(f)?;
    let p = f.poset();
    let fixed: Vec<usize> = (0..p.len()).filter(|&x| f.apply(x) == x).collect();
    let (sub, back) = p.induced(&fixed);
    if fixed.len() <= caps::enum_cap() {
        for mask in 1u32..(1u32 << fixed.len()) {
            let d_local = crate::poset::mask_to_vec(mask);
            if !sub.is_directed(&d_local) {
                continue;
            }
            let d_ambient: Vec<usize> = d_local.iter().map(|&i| back[i]).collect();
            let j = p
                .join(&d_ambient)
                .ok_or_else(|| Error::InternalInvariant("directed set lost its join".into()))?;
            if !fixed.contains(&j) {
                return Err(Error::InternalInvariant(
                    "fixed points not closed under directed joins".into(),
                ));
            }
        }
    }
    Ok((sub, back))
}

/// Report for the least-fixed-point transfer check along a strict map.
#[derive(Debug, Clone)]
pub struct MuTransferReport {
    pub mu_f: usize,
    pub mu_g: usize,
    pub image_of_mu_f: usize,
    pub holds: bool,
}

/// For strict monotone h with g . h = h . f (all on posets with bottom),
/// h maps the least fixed point of f to the least fixed point of g.
pub fn check_mu_transfer(
    f: &MonotoneEndo,
    g: &MonotoneEndo,
    h: &PosetMap,
) -> Result<MuTransferReport> {
    if h.dom() != f.poset() || h.cod() != g.poset() {
        return Err(Error::Schema(
            "transfer map must go from f's poset to g's poset".into(),
        ));
    }
    if !h.is_strict()? {
        let bd = h.dom().bottom().unwrap();
        return Err(Error::NotStrict(
            h.dom().name(bd).to_string(),
            h.cod().name(h.apply(bd)).to_string(),
        ));
    }
    for x in 0..h.dom().len() {
        let gh = g.apply(h.apply(x));
        let hf = h.apply(f.apply(x));
        if gh != hf {
            return Err(Error::SquareDoesNotCommute(
                h.dom().name(x).to_string(),
                h.cod().name(gh).to_string(),
                h.cod().name(hf).to_string(),
            ));
        }
    }
    let mu_f = pataraia_lfp(f)?.value;
    let mu_g = pataraia_lfp(g)?.value;
    let image = h.apply(mu_f);
    Ok(MuTransferReport {
        mu_f,
        mu_g,
        image_of_mu_f: image,
        holds: image == mu_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain, diamond};

    /// Exhaustive least-fixed-point oracle: scan every element.
    pub(crate) fn lfp_scan(f: &MonotoneEndo) -> Option<usize> {
        let p = f.poset();
        let fixed: Vec<usize> = (0..p.len()).filter(|&x| f.apply(x) == x).collect();
        fixed
            .iter()
            .copied()
            .find(|&m| fixed.iter().all(|&x| p.le(m, x)))
    }

    fn capped_successor(n: usize) -> MonotoneEndo {
        let p = chain(n);
        let map: Vec<usize> = (0..n).map(|i| (i + 1).min(n - 1)).collect();
        MonotoneEndo::new(p, map).unwrap()
    }

    fn diamond_example() -> MonotoneEndo {
        // f(bot) = a, f(a) = a, f(b) = top, f(top) = top
        let d = diamond();
        let (bot, a, b, top) = (
            d.index_of("bot").unwrap(),
            d.index_of("a").unwrap(),
            d.index_of("b").unwrap(),
            d.index_of("top").unwrap(),
        );
        let mut map = vec![0; 4];
        map[bot] = a;
        map[a] = a;
        map[b] = top;
        map[top] = top;
        MonotoneEndo::new(d, map).unwrap()
    }

    #[test]
    fn kleene_cases() {
        let f = capped_successor(3);
        let r = kleene_lfp(&f).unwrap();
        assert_eq!(r.value, f.poset().index_of("c2").unwrap());
        assert_eq!(r.stages, 2);
        assert_eq!(Some(r.value), lfp_scan(&f));

        let id = MonotoneEndo::identity(chain(4));
        let r = kleene_lfp(&id).unwrap();
        assert_eq!(r.value, id.poset().bottom().unwrap());
        assert_eq!(r.stages, 0);

        let f = diamond_example();
        let r = kleene_lfp(&f).unwrap();
        assert_eq!(r.value, f.poset().index_of("a").unwrap());
        assert_eq!(Some(r.value), lfp_scan(&f));
    }

    #[test]
    fn kleene_requires_bottom() {
        let anti = crate::poset::FinPoset::validate(&["a", "b"], &[]).unwrap();
        let id = MonotoneEndo::identity(anti);
        assert_eq!(kleene_lfp(&id).unwrap_err(), Error::NoBottom);
    }

    #[test]
    fn zermelo_cases() {
        let f = capped_successor(3);
        let r = zermelo_lfp(&f).unwrap();
        assert_eq!(r.value, f.poset().index_of("c2").unwrap());
        assert_eq!(r.stages, 2);

        let id = MonotoneEndo::identity(diamond());
        let r = zermelo_lfp(&id).unwrap();
        assert_eq!(r.stages, 0);
        assert_eq!(r.value, id.poset().bottom().unwrap());

        // constant-to-top on the 2-chain stabilizes at stage 1
        let c = chain(2);
        let top = c.index_of("c1").unwrap();
        let f = MonotoneEndo::new(c, vec![top, top]).unwrap();
        let r = zermelo_lfp(&f).unwrap();
        assert_eq!((r.value, r.stages), (top, 1));
    }

    #[test]
    fn tarski_cases() {
        let f = diamond_example();
        // oracle: meet of pre-fixed points computed directly
        let p = f.poset();
        let pre: Vec<usize> = (0..p.len()).filter(|&x| p.le(f.apply(x), x)).collect();
        let expected = p.meet(&pre).unwrap();
        assert_eq!(tarski_lfp(&f).unwrap(), expected);
        assert_eq!(tarski_lfp(&f).unwrap(), p.index_of("a").unwrap());

        let id = MonotoneEndo::identity(diamond());
        assert_eq!(tarski_lfp(&id).unwrap(), id.poset().bottom().unwrap());

        // antichain with bounds: bot < a, b < top; f = const top
        let p = diamond();
        let top = p.index_of("top").unwrap();
        let f = MonotoneEndo::new(p, vec![top; 4]).unwrap();
        assert_eq!(tarski_lfp(&f).unwrap(), top);
    }

    #[test]
    fn tarski_rejects_non_lattice() {
        // bot < a, b with a, b maximal: {a,b} has no join
        let p = crate::poset::FinPoset::validate(
            &["bot", "a", "b"],
            &[("bot", "a"), ("bot", "b")],
        )
        .unwrap();
        let id = MonotoneEndo::identity(p);
        assert!(matches!(
            tarski_lfp(&id).unwrap_err(),
            Error::NotACompleteLattice(_)
        ));
    }

    #[test]
    fn closure_cases() {
        let f = capped_successor(3);
        let t = pataraia_closure(&f).unwrap();
        assert_eq!(t.members.len(), 3);

        let id = MonotoneEndo::identity(diamond());
        let t = pataraia_closure(&id).unwrap();
        assert_eq!(t.members, vec![id.poset().bottom().unwrap()]);

        let f = diamond_example();
        let t = pataraia_closure(&f).unwrap();
        let bot = f.poset().index_of("bot").unwrap();
        let a = f.poset().index_of("a").unwrap();
        let mut expect = vec![bot, a];
        expect.sort_unstable();
        assert_eq!(t.members, expect);
    }

    #[test]
    fn pataraia_cases() {
        for f in [capped_successor(3), diamond_example()] {
            let r = pataraia_lfp(&f).unwrap();
            assert_eq!(Some(r.value), lfp_scan(&f));
            assert_eq!(r.value, kleene_lfp(&f).unwrap().value);
        }
        let id = MonotoneEndo::identity(chain(3));
        assert_eq!(
            pataraia_lfp(&id).unwrap().value,
            id.poset().bottom().unwrap()
        );
    }

    #[test]
    fn monoid_engine_two_chain() {
        // const-top on the 2-chain: T = {0,1}, M = {id, const-top}
        let c = chain(2);
        let top = c.index_of("c1").unwrap();
        let f = MonotoneEndo::new(c, vec![top, top]).unwrap();
        let (r, trace) = pataraia_via_monoid(&f, 5).unwrap();
        assert_eq!(r.value, top);
        assert_eq!(trace.maps.len(), 2);
        assert_eq!(trace.maps[trace.top], vec![1, 1]);
    }

    #[test]
    fn monoid_engine_identity() {
        let id = MonotoneEndo::identity(diamond());
        let (r, trace) = pataraia_via_monoid(&id, 5).unwrap();
        assert_eq!(r.value, id.poset().bottom().unwrap());
        assert_eq!(trace.closure.len(), 1);
        assert_eq!(trace.maps.len(), 1);
    }

    #[test]
    fn monoid_engine_agrees() {
        let f = capped_successor(3);
        let (r, _) = pataraia_via_monoid(&f, 5).unwrap();
        assert_eq!(r.value, pataraia_lfp(&f).unwrap().value);
    }

    #[test]
    fn monoid_top_zero_cases() {
        // ({0,1}, max, 0) ordered 0 < 1: top = 1, 1 is a zero for max
        let c = chain(2);
        let mul = vec![0, 1, 1, 1]; // max table
        let m = OrderedMonoid::new(c, mul, 0).unwrap();
        let top = monoid_top_zero(&m).unwrap();
        assert_eq!(top, 1);

        let s = OrderedMonoid::new(crate::poset::FinPoset::singleton("e"), vec![0], 0).unwrap();
        assert_eq!(monoid_top_zero(&s).unwrap(), 0);
    }

    #[test]
    fn monoid_unit_must_be_bottom() {
        // 2-chain with unit = top under min: unit law holds, but unit != bottom
        let c = chain(2);
        let mul = vec![0, 0, 0, 1]; // min table
        let m = OrderedMonoid::new(c, mul, 1).unwrap();
        assert_eq!(monoid_top_zero(&m).unwrap_err(), Error::UnitNotBottom);
    }

    #[test]
    fn subdcpo_cases() {
        let id = MonotoneEndo::identity(diamond());
        let (sub, _) = fixed_point_subdcpo(&id).unwrap();
        assert_eq!(sub.len(), 4);

        let f = capped_successor(3);
        let (sub, back) = fixed_point_subdcpo(&f).unwrap();
        assert_eq!(sub.len(), 1);
        assert_eq!(back, vec![f.poset().index_of("c2").unwrap()]);

        // diamond map fixing exactly {a, top} gives the 2-chain a < top
        let f = diamond_example();
        let (sub, back) = fixed_point_subdcpo(&f).unwrap();
        assert_eq!(sub.len(), 2);
        let a = f.poset().index_of("a").unwrap();
        let top = f.poset().index_of("top").unwrap();
        assert_eq!(back, vec![a, top]);
        assert!(sub.le(0, 1) && !sub.le(1, 0));
    }

    #[test]
    fn mu_transfer_identity_square() {
        let f = capped_successor(3);
        let h = PosetMap::identity(f.poset().clone());
        let r = check_mu_transfer(&f, &f, &h).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn mu_transfer_collapse() {
        // P = 3-chain with capped successor, Q = 2-chain with 0 -> 1, 1 -> 1,
        // h collapses the top two elements
        let f = capped_successor(3);
        let q = chain(2);
        let g = MonotoneEndo::new(q.clone(), vec![1, 1]).unwrap();
        let h = PosetMap::new(f.poset().clone(), q.clone(), vec![0, 1, 1]).unwrap();
        let r = check_mu_transfer(&f, &g, &h).unwrap();
        assert!(r.holds);
        assert_eq!(r.mu_g, q.index_of("c1").unwrap());
    }

    #[test]
    fn mu_transfer_rejects_non_strict() {
        let f = MonotoneEndo::identity(chain(2));
        let g = MonotoneEndo::identity(chain(2));
        let h = PosetMap::new(chain(2), chain(2), vec![1, 1]).unwrap();
        assert!(matches!(
            check_mu_transfer(&f, &g, &h).unwrap_err(),
            Error::NotStrict(_, _)
        ));
    }

    #[test]
    fn mu_transfer_rejects_non_commuting() {
        let f = MonotoneEndo::identity(chain(2));
        let c = chain(2);
        let g = MonotoneEndo::new(c.clone(), vec![1, 1]).unwrap();
        let h = PosetMap::identity(c);
        assert!(matches!(
            check_mu_transfer(&f, &g, &h).unwrap_err(),
            Error::SquareDoesNotCommute(_, _, _)
        ));
    }

    #[test]
    fn engine_agreement_small_exhaustive() {
        // all monotone endomaps on a few fixed small carriers
        for p in [chain(1), chain(2), chain(3), diamond()] {
            let n = p.len();
            let mut counter = vec![0usize; n];
            loop {
                if let Ok(f) = MonotoneEndo::new(p.clone(), counter.clone()) {
                    let expected = lfp_scan(&f).unwrap();
                    assert_eq!(kleene_lfp(&f).unwrap().value, expected);
                    assert_eq!(zermelo_lfp(&f).unwrap().value, expected);
                    assert_eq!(pataraia_lfp(&f).unwrap().value, expected);
                    assert_eq!(tarski_lfp(&f).unwrap(), expected);
                }
                let mut pos = 0;
                loop {
                    if pos == n {
                        break;
                    }
                    counter[pos] += 1;
                    if counter[pos] < n {
                        break;
                    }
                    counter[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
            }
        }
    }
}
