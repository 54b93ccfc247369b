//! Algebras, coalgebras, coalgebra-to-algebra morphisms, a hylomorphism
//! solver, and the closure properties of recursive coalgebras.
//!
//! A coalgebra is *recursive* when every algebra admits exactly one
//! coalgebra-to-algebra morphism. On finite carriers, acyclicity of the
//! dependency graph (edges from each state to the states occurring in its
//! unfolding) is a sufficient condition; the brute-force search remains the
//! oracle for uniqueness, and certificates cite the oracle rather than the
//! graph criterion when claiming uniqueness.

use std::collections::BTreeMap;

use crate::finset::{self, DirectedDiagram, FinFn, FinSetObj};
use crate::functor::{self, FunctorSpec};
use crate::poset::FinPoset;
use crate::term::Term;
use crate::{caps, Error, Result};

/// An algebra: structure map from F(carrier) to carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub functor: FunctorSpec,
    pub carrier: FinSetObj,
    pub structure: FinFn,
}

impl Algebra {
    pub fn new(functor: FunctorSpec, carrier: FinSetObj, structure: FinFn) -> Result<Algebra> {
        let expected_dom = functor::apply_obj(&functor, &carrier)?;
        if structure.dom() != &expected_dom {
            return Err(Error::StructureMismatch(
                "algebra structure must be defined on F(carrier)".into(),
            ));
        }
        if structure.cod() != &carrier {
            return Err(Error::StructureMismatch(
                "algebra structure must land in the carrier".into(),
            ));
        }
        Ok(Algebra {
            functor,
            carrier,
            structure,
        })
    }
}

/// A coalgebra: structure map from carrier to F(carrier).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalgebra {
    pub functor: FunctorSpec,
    pub carrier: FinSetObj,
    pub structure: FinFn,
}

impl Coalgebra {
    pub fn new(functor: FunctorSpec, carrier: FinSetObj, structure: FinFn) -> Result<Coalgebra> {
        let expected_cod = functor::apply_obj(&functor, &carrier)?;
        if structure.cod() != &expected_cod {
            return Err(Error::StructureMismatch(
                "coalgebra structure must land in F(carrier)".into(),
            ));
        }
        if structure.dom() != &carrier {
            return Err(Error::StructureMismatch(
                "coalgebra structure must be defined on the carrier".into(),
            ));
        }
        Ok(Coalgebra {
            functor,
            carrier,
            structure,
        })
    }
}

/// Adjacency of the dependency graph: an edge x -> y whenever y occurs as an
/// X-position child of the term structure(x). For powerset layers this means
/// an edge to every member of the child set.
pub fn dependency_graph(c: &Coalgebra) -> Result<Vec<Vec<usize>>> {
    let mut adj = Vec::with_capacity(c.carrier.len());
    for x in 0..c.carrier.len() {
        let t = c.structure.cod().term(c.structure.apply_idx(x));
        let mut targets = Vec::new();
        for child in functor::x_children(&c.functor, t)? {
            let y = c.carrier.index_of(&child).ok_or_else(|| {
                Error::InternalInvariant(format!("child `{child}` escapes the carrier"))
            })?;
            targets.push(y);
        }
        targets.sort_unstable();
        targets.dedup();
        adj.push(targets);
    }
    Ok(adj)
}

/// The shortest cycle in the graph, if any, as a list of vertex indices.
fn shortest_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        // BFS back to `start`
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for &y in &adj[start] {
            if y == start {
                return Some(vec![start]); // self-loop is minimal
            }
            if !seen[y] {
                seen[y] = true;
                pred[y] = Some(start);
                queue.push_back(y);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if w == start {
                    let mut path = vec![start];
                    let mut cur = v;
                    let mut rev = Vec::new();
                    loop {
                        rev.push(cur);
                        match pred[cur] {
                            Some(p) if p != start => cur = p,
                            _ => break,
                        }
                    }
                    rev.reverse();
                    path.extend(rev);
                    if best.as_ref().map_or(true, |b| path.len() < b.len()) {
                        best = Some(path);
                    }
                    break;
                }
                if !seen[w] {
                    seen[w] = true;
                    pred[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
    }
    best
}

/// Well-foundedness: acyclicity of the dependency graph. A sufficient
/// condition for recursiveness; the converse is not claimed.
pub fn is_recursive_wf(c: &Coalgebra) -> Result<bool> {
    Ok(shortest_cycle(&dependency_graph(c)?).is_none())
}

/// The cycle witness for a non-well-founded coalgebra, in carrier terms.
pub fn well_foundedness_witness(c: &Coalgebra) -> Result<Option<Vec<String>>> {
    Ok(shortest_cycle(&dependency_graph(c)?)
        .map(|cycle| cycle.iter().map(|&i| c.carrier.term(i).to_string()).collect()))
}

/// Pointwise check that h is a coalgebra-to-algebra morphism:
/// h = alpha . F(h) . gamma.
pub fn is_cta_morphism(h: &FinFn, c: &Coalgebra, a: &Algebra) -> Result<bool> {
    if c.functor != a.functor {
        return Err(Error::FunctorMismatch);
    }
    if h.dom() != &c.carrier || h.cod() != &a.carrier {
        return Err(Error::Schema("morphism endpoints do not match".into()));
    }
    let fh = functor::apply_mor(&c.functor, h)?;
    let rhs = a.structure.compose(&fh)?.compose(&c.structure)?;
    Ok(h == &rhs)
}

/// Solve h = alpha . F(h) . gamma by evaluating in reverse dependency
/// order. Fails with the shortest cycle when the coalgebra is not
/// well-founded.
pub fn solve_hylo(c: &Coalgebra, a: &Algebra) -> Result<FinFn> {
    if c.functor != a.functor {
        return Err(Error::FunctorMismatch);
    }
    let adj = dependency_graph(c)?;
    // Kahn's algorithm on the dependency graph; children first
    let n = c.carrier.len();
    let mut indegree = vec![0usize; n]; // number of unresolved children
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, children) in adj.iter().enumerate() {
        indegree[x] = children.len();
        for &y in children {
            dependents[y].push(x);
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = ready.pop() {
        order.push(x);
        for &d in &dependents[x] {
            indegree[d] -= 1;
            if indegree[d] == 0 {
                ready.push(d);
            }
        }
    }
    if order.len() != n {
        let cycle = shortest_cycle(&adj).expect("unresolved vertices contain a cycle");
        return Err(Error::NotWellFounded(
            cycle.iter().map(|&i| c.carrier.term(i).to_string()).collect(),
        ));
    }
    let mut h = vec![usize::MAX; n];
    for x in order {
        let t = c.structure.cod().term(c.structure.apply_idx(x));
        let phi = |child: &Term| -> Term {
            let y = c.carrier.index_of(child).expect("child inside carrier");
            debug_assert_ne!(h[y], usize::MAX, "children resolved before parents");
            a.carrier.term(h[y]).clone()
        };
        let image = functor::map_term(&c.functor, t, &phi)?;
        let fi = a
            .structure
            .dom()
            .index_of(&image)
            .ok_or_else(|| Error::InternalInvariant(format!("term `{image}` not in F(A)")))?;
        h[x] = a.structure.apply_idx(fi);
    }
    let h = FinFn::new(c.carrier.clone(), a.carrier.clone(), h)?;
    if !is_cta_morphism(&h, c, a)? {
        return Err(Error::InternalInvariant(
            "hylomorphism solution fails its own commuting square".into(),
        ));
    }
    Ok(h)
}

/// Outcome of the brute-force search over all functions carrier -> carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtaSearch {
    None,
    Unique(FinFn),
    Multiple(FinFn, FinFn),
}

/// Enumerate every function from the coalgebra carrier to the algebra
/// carrier and classify by the commuting-square test. The oracle for
/// recursiveness claims.
pub fn brute_force_cta(c: &Coalgebra, a: &Algebra, cap: u128) -> Result<CtaSearch> {
    if c.functor != a.functor {
        return Err(Error::FunctorMismatch);
    }
    let n = c.carrier.len();
    let m = a.carrier.len();
    let space = (m as u128).saturating_pow(n as u32);
    caps::require("brute-force |A|^|C|", space, cap)?;
    if n == 0 {
        let empty = FinFn::new(c.carrier.clone(), a.carrier.clone(), vec![])?;
        return Ok(CtaSearch::Unique(empty));
    }
    if m == 0 {
        return Ok(CtaSearch::None);
    }
    let mut found: Option<FinFn> = None;
    let mut counter = vec![0usize; n];
    loop {
        let h = FinFn::new(c.carrier.clone(), a.carrier.clone(), counter.clone())?;
        if is_cta_morphism(&h, c, a)? {
            match &found {
                None => found = Some(h),
                Some(first) => return Ok(CtaSearch::Multiple(first.clone(), h)),
            }
        }
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            counter[pos] += 1;
            if counter[pos] < m {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    Ok(match found {
        None => CtaSearch::None,
        Some(h) => CtaSearch::Unique(h),
    })
}

/// Apply the functor to a coalgebra: (C, gamma) becomes (FC, F(gamma)).
/// Well-foundedness must survive the lifting when it held before.
pub fn lift_recursive(c: &Coalgebra) -> Result<Coalgebra> {
    let carrier = functor::apply_obj(&c.functor, &c.carrier)?;
    let structure = functor::apply_mor(&c.functor, &c.structure)?;
    let lifted = Coalgebra::new(c.functor.clone(), carrier, structure)?;
    if is_recursive_wf(c)? && !is_recursive_wf(&lifted)? {
        return Err(Error::InternalInvariant(
            "lifting destroyed well-foundedness".into(),
        ));
    }
    Ok(lifted)
}

/// A directed diagram of coalgebras over a common functor, with injective
/// carrier maps required to be coalgebra homomorphisms.
#[derive(Debug, Clone)]
pub struct CoalgebraDiagram {
    pub index: FinPoset,
    pub coalgebras: Vec<Coalgebra>,
    pub edges: BTreeMap<(usize, usize), FinFn>,
}

/// Colimit of a directed diagram of coalgebras: the carrier colimit with the
/// unique induced structure; colimits of coalgebras are formed on carriers.
/// When every input is well-founded the colimit is checked to be too.
pub fn colimit_of_recursive(diag: &CoalgebraDiagram) -> Result<Coalgebra> {
    if diag.coalgebras.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let functor = diag.coalgebras[0].functor.clone();
    if diag.coalgebras.iter().any(|c| c.functor != functor) {
        return Err(Error::FunctorMismatch);
    }
    // homomorphism condition: gamma_j . w = F(w) . gamma_i, pointwise
    for (&(i, j), w) in &diag.edges {
        let fw = functor::apply_mor(&functor, w)?;
        let lhs = diag.coalgebras[j].structure.compose(w)?;
        let rhs = fw.compose(&diag.coalgebras[i].structure)?;
        if lhs != rhs {
            let at = (0..w.dom().len())
                .find(|&x| lhs.apply_idx(x) != rhs.apply_idx(x))
                .map(|x| w.dom().term(x).to_string())
                .unwrap_or_default();
            return Err(Error::NotHomomorphism {
                edge: format!("{}->{}", diag.index.name(i), diag.index.name(j)),
                at,
            });
        }
    }
    let carrier_diagram = DirectedDiagram {
        index: diag.index.clone(),
        objects: diag.coalgebras.iter().map(|c| c.carrier.clone()).collect(),
        edges: diag.edges.clone(),
    };
    let colim = finset::directed_colimit(&carrier_diagram)?;
    // induced structure through the maximum-index component
    let m = carrier_diagram.max_index();
    let c_m = &colim.injections[m];
    let f_cm = functor::apply_mor(&functor, c_m)?;
    let structure = f_cm.compose(&diag.coalgebras[m].structure)?.compose(
        &finset::is_iso(c_m).ok_or_else(|| {
            Error::InternalInvariant("maximum-index injection must be invertible".into())
        })?,
    )?;
    let result = Coalgebra::new(functor.clone(), colim.carrier.clone(), structure)?;
    // the injections are coalgebra homomorphisms into the colimit
    for (i, coalg) in diag.coalgebras.iter().enumerate() {
        let ci = &colim.injections[i];
        let fci = functor::apply_mor(&functor, ci)?;
        if result.structure.compose(ci)? != fci.compose(&coalg.structure)? {
            return Err(Error::InternalInvariant(
                "colimit injection is not a coalgebra homomorphism".into(),
            ));
        }
    }
    let mut all_wf = true;
    for coalg in &diag.coalgebras {
        if !is_recursive_wf(coalg)? {
            all_wf = false;
        }
    }
    if all_wf && !is_recursive_wf(&result)? {
        return Err(Error::InternalInvariant(
            "colimit of well-founded coalgebras lost well-foundedness".into(),
        ));
    }
    Ok(result)
}

/// Initiality evidence gathered from a family of sample algebras.
#[derive(Debug, Clone)]
pub struct InitialityReport {
    /// (algebra description, the unique morphism) per tested sample.
    pub tested: Vec<(String, FinFn)>,
    /// Whether uniqueness was certified by the brute-force oracle for each
    /// sample (false means only existence via the solver was checked).
    pub uniqueness_by_oracle: bool,
}

/// A recursive fixed point is an initial algebra: invert the structure and
/// verify against the provided samples that the hylomorphism solution is the
/// unique algebra homomorphism.
pub fn recursive_fixed_point_is_initial(
    c: &Coalgebra,
    samples: &[Algebra],
    oracle_cap: u128,
) -> Result<(Algebra, InitialityReport)> {
    let inv = finset::is_iso(&c.structure).ok_or(Error::NotIso)?;
    if !is_recursive_wf(c)? {
        let cycle = well_foundedness_witness(c)?.unwrap();
        return Err(Error::NotWellFounded(cycle));
    }
    let algebra = Algebra::new(c.functor.clone(), c.carrier.clone(), inv)?;
    let mut tested = Vec::new();
    let mut uniqueness_by_oracle = true;
    for a in samples {
        let h = solve_hylo(c, a)?;
        // algebra homomorphism condition: h . iota = alpha . F(h)
        let fh = functor::apply_mor(&c.functor, &h)?;
        let lhs = h.compose(&algebra.structure)?;
        let rhs = a.structure.compose(&fh)?;
        if lhs != rhs {
            return Err(Error::InternalInvariant(
                "hylomorphism is not an algebra homomorphism from the fixed point".into(),
            ));
        }
        match brute_force_cta(c, a, oracle_cap) {
            Ok(CtaSearch::Unique(oracle_h)) => {
                if oracle_h != h {
                    return Err(Error::InternalInvariant(
                        "oracle found a different morphism than the solver".into(),
                    ));
                }
            }
            Ok(other) => {
                return Err(Error::InternalInvariant(format!(
                    "oracle disagrees with recursiveness: {other:?}"
                )));
            }
            Err(Error::CapExceeded { .. }) => {
                uniqueness_by_oracle = false;
            }
            Err(e) => return Err(e),
        }
        tested.push((format!("algebra on {} elements", a.carrier.len()), h));
    }
    Ok((
        algebra,
        InitialityReport {
            tested,
            uniqueness_by_oracle,
        },
    ))
}
