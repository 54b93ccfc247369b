//! Two constructions of the initial algebra and their cross-validation.
//!
//! The iterative route unfolds the chain 0, F0, FF0, ... and stops when a
//! connecting map becomes an isomorphism. The order-theoretic route never
//! iterates the functor transfinitely: given a pre-fixed point m: FA >-> A,
//! it runs a least-fixed-point engine on the subobject lattice of A under
//! the endomap S |-> image(m . F(incl_S)) and reads the initial algebra off
//! the least fixed point. Limit stages are never fabricated: a chain that
//! fails to stabilize within its budget reports exhaustion, an honest
//! unknown.

use crate::coalg::{self, Algebra, Coalgebra};
use crate::engines::{self, Engine};
use crate::finset::{self, subobject_lattice, FinFn, FinSetObj, SubobjectLattice};
use crate::functor::{self, FunctorSpec};
use crate::poset::{mask_to_vec, MonotoneEndo};
use crate::{Error, Result};

/// How far a chain got.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainStatus {
    /// The first stage whose connecting map is an isomorphism.
    Converged { stage: usize },
    /// No isomorphism within the budget; stages 0..=budget were built.
    Exhausted { budget: usize },
}

/// The initial-algebra chain as far as it was computed: objects W_0..W_k and
/// connecting maps w_{i,i+1}, where W_0 is empty and W_{j+1} = F(W_j).
#[derive(Debug, Clone)]
pub struct ChainState {
    pub functor: FunctorSpec,
    pub objects: Vec<FinSetObj>,
    pub connectors: Vec<FinFn>,
    pub status: ChainStatus,
}

impl ChainState {
    /// The converged connecting map and its inverse, when converged.
    pub fn iso_witness(&self) -> Option<(FinFn, FinFn)> {
        match self.status {
            ChainStatus::Converged { stage } => {
                let w = self.connectors[stage].clone();
                let inv = finset::is_iso(&w)?;
                Some((w, inv))
            }
            ChainStatus::Exhausted { .. } => None,
        }
    }
}

/// Compute chain objects W_0..W_n and the n connecting maps between
/// consecutive stages.
fn chain_prefix(f: &FunctorSpec, n: usize) -> Result<(Vec<FinSetObj>, Vec<FinFn>)> {
    let mut objects = vec![FinSetObj::empty()];
    let mut connectors: Vec<FinFn> = Vec::new();
    for j in 0..n {
        let next = functor::apply_obj(f, &objects[j])?;
        let w = if j == 0 {
            FinFn::new(FinSetObj::empty(), next.clone(), vec![])?
        } else {
            functor::apply_mor(f, &connectors[j - 1])?
        };
        objects.push(next);
        connectors.push(w);
    }
    Ok((objects, connectors))
}

/// Iterate the chain for at most `budget` functor applications, stopping at
/// the first stage whose connecting map is a bijection.
pub fn initial_chain(f: &FunctorSpec, budget: usize) -> Result<ChainState> {
    let mut objects = vec![FinSetObj::empty()];
    let mut connectors: Vec<FinFn> = Vec::new();
    for stage in 0..budget {
        let next = functor::apply_obj(f, &objects[stage])?;
        let w = if stage == 0 {
            FinFn::new(FinSetObj::empty(), next.clone(), vec![])?
        } else {
            functor::apply_mor(f, &connectors[stage - 1])?
        };
        objects.push(next);
        connectors.push(w);
        if finset::is_iso(&connectors[stage]).is_some() {
            return Ok(ChainState {
                functor: f.clone(),
                objects,
                connectors,
                status: ChainStatus::Converged { stage },
            });
        }
    }
    Ok(ChainState {
        functor: f.clone(),
        objects,
        connectors,
        status: ChainStatus::Exhausted { budget },
    })
}

/// Where a result came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Chain,
    Subobject,
}

/// An initial algebra together with its witnesses: the algebra structure,
/// the coalgebra direction (its inverse), and, for the subobject
/// construction, the embedding of the carrier into the pre-fixed point.
#[derive(Debug, Clone)]
pub struct InitialAlgebraResult {
    pub functor: FunctorSpec,
    pub carrier: FinSetObj,
    /// The algebra structure F(I) -> I.
    pub structure: FinFn,
    /// The coalgebra direction I -> F(I); always a bijection.
    pub coalgebra_structure: FinFn,
    /// For the subobject construction, the inclusion of I into A.
    pub embedding: Option<FinFn>,
    pub provenance: Provenance,
    /// Stages for the chain route, engine stages for the subobject route.
    pub stages: usize,
}

impl InitialAlgebraResult {
    pub fn as_algebra(&self) -> Result<Algebra> {
        Algebra::new(
            self.functor.clone(),
            self.carrier.clone(),
            self.structure.clone(),
        )
    }

    pub fn as_coalgebra(&self) -> Result<Coalgebra> {
        Coalgebra::new(
            self.functor.clone(),
            self.carrier.clone(),
            self.coalgebra_structure.clone(),
        )
    }
}

/// Read the initial algebra off a converged chain: the carrier is the stage
/// object and the structure is the inverted connecting map. Every chain
/// coalgebra up to the stage must be well-founded.
pub fn chain_to_initial_algebra(s: &ChainState) -> Result<InitialAlgebraResult> {
    let stage = match s.status {
        ChainStatus::Converged { stage } => stage,
        ChainStatus::Exhausted { .. } => return Err(Error::NotConverged),
    };
    let (w, inv) = s
        .iso_witness()
        .ok_or_else(|| Error::InternalInvariant("converged chain lost its iso".into()))?;
    for i in 0..=stage {
        let coalg = Coalgebra::new(
            s.functor.clone(),
            s.objects[i].clone(),
            s.connectors[i].clone(),
        )?;
        if !coalg::is_recursive_wf(&coalg)? {
            return Err(Error::InternalInvariant(format!(
                "chain coalgebra at stage {i} is not well-founded"
            )));
        }
    }
    Ok(InitialAlgebraResult {
        functor: s.functor.clone(),
        carrier: s.objects[stage].clone(),
        structure: inv,
        coalgebra_structure: w,
        embedding: None,
        provenance: Provenance::Chain,
        stages: stage,
    })
}

/// The canonical cocone over the chain induced by an algebra: alpha_0 is the
/// unique map out of the empty set and alpha_{i+1} = alpha . F(alpha_i).
/// Compatibility alpha_{i+1} . w_{i,i+1} = alpha_i is asserted, which forces
/// compatibility over all chain connectives by composition.
pub fn canonical_cocone(a: &Algebra, upto: usize) -> Result<Vec<FinFn>> {
    let (objects, connectors) = chain_prefix(&a.functor, upto)?;
    let mut cocone = vec![FinFn::new(FinSetObj::empty(), a.carrier.clone(), vec![])?];
    for i in 0..upto {
        let f_alpha = functor::apply_mor(&a.functor, &cocone[i])?;
        let next = a.structure.compose(&f_alpha)?;
        if &next.compose(&connectors[i])? != &cocone[i] {
            return Err(Error::InternalInvariant(format!(
                "canonical cocone breaks at stage {i}"
            )));
        }
        cocone.push(next);
    }
    let _ = objects;
    Ok(cocone)
}

/// A pre-fixed point: an algebra whose structure is injective.
#[derive(Debug, Clone)]
pub struct PreFixedPoint {
    pub functor: FunctorSpec,
    pub carrier: FinSetObj,
    pub m: FinFn,
}

impl PreFixedPoint {
    pub fn new(functor: FunctorSpec, carrier: FinSetObj, m: FinFn) -> Result<PreFixedPoint> {
        let expected_dom = functor::apply_obj(&functor, &carrier)?;
        if m.dom() != &expected_dom || m.cod() != &carrier {
            return Err(Error::StructureMismatch(
                "pre-fixed point structure must map F(carrier) into the carrier".into(),
            ));
        }
        if !finset::is_mono(&m) {
            let (a, b) = finset::mono_counterexample(&m).unwrap();
            return Err(Error::NotMono(a.to_string(), b.to_string(), "m".into()));
        }
        Ok(PreFixedPoint {
            functor,
            carrier,
            m,
        })
    }

    pub fn as_algebra(&self) -> Result<Algebra> {
        Algebra::new(self.functor.clone(), self.carrier.clone(), self.m.clone())
    }
}

/// Which least-fixed-point engine drives the subobject construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubLfpEngine {
    Pataraia,
    Zermelo,
}

impl SubLfpEngine {
    pub fn as_engine(&self) -> Engine {
        match self {
            SubLfpEngine::Pataraia => Engine::Pataraia,
            SubLfpEngine::Zermelo => Engine::Zermelo,
        }
    }
}

/// The monotone endomap on the subobject lattice of the pre-fixed point:
/// a subset S goes to the image of m . F(incl_S). Mono-preservation of the
/// functor is verified on every inclusion used.
pub fn subobject_endomap(p: &PreFixedPoint) -> Result<(SubobjectLattice, MonotoneEndo)> {
    let lattice = subobject_lattice(&p.carrier)?;
    let n = lattice.poset.len();
    let mut map = Vec::with_capacity(n);
    for e in 0..n {
        let s_obj = lattice.subset_of(e);
        let incl = s_obj.inclusion_into(&p.carrier)?;
        let f_incl = functor::apply_mor(&p.functor, &incl)?;
        if !finset::is_mono(&f_incl) {
            let (a, b) = finset::mono_counterexample(&f_incl).unwrap();
            return Err(Error::NotMono(
                a.to_string(),
                b.to_string(),
                "F(inclusion)".into(),
            ));
        }
        let composite = p.m.compose(&f_incl)?;
        let image_mask = composite
            .image_indices()
            .iter()
            .fold(0u32, |acc, &i| acc | (1 << i));
        map.push(lattice.element_of_mask(image_mask));
    }
    let endo = MonotoneEndo::new(lattice.poset.clone(), map)?;
    Ok((lattice, endo))
}

/// The order-theoretic construction: compute the least fixed point of the
/// subobject endomap, carve the carrier I out of A, and invert the injection
/// m . F(incl_I) on its image to obtain the coalgebra structure.
pub fn initial_algebra_via_subobjects(
    p: &PreFixedPoint,
    engine: SubLfpEngine,
) -> Result<InitialAlgebraResult> {
    let (lattice, endo) = subobject_endomap(p)?;
    let lfp = match engine {
        SubLfpEngine::Pataraia => engines::pataraia_lfp(&endo)?,
        SubLfpEngine::Zermelo => engines::zermelo_lfp(&endo)?,
    };
    let mu_mask = lattice.masks[lfp.value];
    let carrier = p.carrier.subset(&mask_to_vec(mu_mask));
    let embedding = carrier.inclusion_into(&p.carrier)?;
    let f_incl = functor::apply_mor(&p.functor, &embedding)?;
    let g = p.m.compose(&f_incl)?; // F(I) -> A, injective, with image I
    if !finset::is_mono(&g) {
        return Err(Error::InternalInvariant(
            "m . F(incl) lost injectivity on the least fixed point".into(),
        ));
    }
    if g.image() != carrier {
        return Err(Error::InternalInvariant(
            "least fixed point is not fixed by the subobject endomap".into(),
        ));
    }
    // corestrict g to its image: the algebra structure F(I) -> I
    let structure = FinFn::from_fn(g.dom().clone(), carrier.clone(), |t| {
        g.apply(t).expect("total").clone()
    })?;
    let coalgebra_structure =
        finset::is_iso(&structure).ok_or_else(|| {
            Error::InternalInvariant("algebra structure is not invertible".into())
        })?;
    let coalg = Coalgebra::new(
        p.functor.clone(),
        carrier.clone(),
        coalgebra_structure.clone(),
    )?;
    if !coalg::is_recursive_wf(&coalg)? {
        return Err(Error::InternalInvariant(
            "subobject-construction coalgebra is not well-founded".into(),
        ));
    }
    // subalgebra square: incl_I . structure = m . F(incl_I)
    if embedding.compose(&structure)? != g {
        return Err(Error::InternalInvariant(
            "carrier is not a subalgebra of the pre-fixed point".into(),
        ));
    }
    Ok(InitialAlgebraResult {
        functor: p.functor.clone(),
        carrier,
        structure,
        coalgebra_structure,
        embedding: Some(embedding),
        provenance: Provenance::Subobject,
        stages: lfp.stages,
    })
}

/// Per-stage record for the chain-stage identity check.
#[derive(Debug, Clone)]
pub struct StageIdentity {
    pub stage: usize,
    pub cocone_image: String,
    pub iterate: String,
    pub equal: bool,
}

/// Check that the image of the canonical cocone map at stage j equals the
/// j-th iterate of the subobject endomap starting from the empty subset.
pub fn verify_chain_stage_identity(
    p: &PreFixedPoint,
    upto: usize,
) -> Result<Vec<StageIdentity>> {
    let (lattice, endo) = subobject_endomap(p)?;
    let cocone = canonical_cocone(&p.as_algebra()?, upto)?;
    let mut out = Vec::with_capacity(upto + 1);
    let mut iterate = lattice.element_of_mask(0);
    for (stage, alpha) in cocone.iter().enumerate() {
        let image_mask = alpha
            .image_indices()
            .iter()
            .fold(0u32, |acc, &i| acc | (1 << i));
        let image_elem = lattice.element_of_mask(image_mask);
        out.push(StageIdentity {
            stage,
            cocone_image: lattice.poset.name(image_elem).to_string(),
            iterate: lattice.poset.name(iterate).to_string(),
            equal: image_elem == iterate,
        });
        iterate = endo.apply(iterate);
    }
    Ok(out)
}

/// Everything cross-validation produced: both constructions, the comparison
/// maps, and the stage identities.
#[derive(Debug, Clone)]
pub struct CrossValidationReport {
    pub chain: ChainState,
    pub chain_result: Option<InitialAlgebraResult>,
    pub subobject_pataraia: InitialAlgebraResult,
    pub subobject_zermelo: InitialAlgebraResult,
    /// Comparison W_lambda -> I and I -> W_lambda, when the chain converged.
    pub comparison: Option<(FinFn, FinFn)>,
    pub comparisons_mutually_inverse: bool,
    pub engines_agree: bool,
    pub stage_identities: Vec<StageIdentity>,
    /// False when the chain exhausted its budget, leaving the comparison
    /// unknown rather than failed.
    pub converged: bool,
}

/// Run both constructions and compare: the two subobject engines must agree
/// exactly, and when the chain converges the hylomorphism solver must
/// produce mutually inverse comparison maps between the two carriers.
pub fn cross_validate(p: &PreFixedPoint, budget: usize) -> Result<CrossValidationReport> {
    let chain = initial_chain(&p.functor, budget)?;
    let sub_p = initial_algebra_via_subobjects(p, SubLfpEngine::Pataraia)?;
    let sub_z = initial_algebra_via_subobjects(p, SubLfpEngine::Zermelo)?;
    let engines_agree =
        sub_p.carrier == sub_z.carrier && sub_p.structure == sub_z.structure;
    let stage_limit = match chain.status {
        ChainStatus::Converged { stage } => stage,
        ChainStatus::Exhausted { budget } => budget,
    };
    let stage_identities = verify_chain_stage_identity(p, stage_limit)?;
    let (chain_result, comparison, mutually_inverse, converged) = match chain.status {
        ChainStatus::Converged { .. } => {
            let cr = chain_to_initial_algebra(&chain)?;
            let h1 = coalg::solve_hylo(&cr.as_coalgebra()?, &sub_p.as_algebra()?)?;
            let h2 = coalg::solve_hylo(&sub_p.as_coalgebra()?, &cr.as_algebra()?)?;
            let back = h2.compose(&h1)?;
            let forth = h1.compose(&h2)?;
            let ok = back == FinFn::identity(cr.carrier.clone())
                && forth == FinFn::identity(sub_p.carrier.clone());
            (Some(cr), Some((h1, h2)), ok, true)
        }
        ChainStatus::Exhausted { .. } => (None, None, false, false),
    };
    Ok(CrossValidationReport {
        chain,
        chain_result,
        subobject_pataraia: sub_p,
        subobject_zermelo: sub_z,
        comparison,
        comparisons_mutually_inverse: mutually_inverse,
        engines_agree,
        stage_identities,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn named(ns: &[&str]) -> FinSetObj {
        FinSetObj::from_names(ns).unwrap()
    }

    #[test]
    fn chain_const() {
        // F = Const(B): W_1 = B and w_{1,2} = id, converged at stage 1
        let b = named(&["b1", "b2"]);
        let f = FunctorSpec::Const(b.clone());
        let s = initial_chain(&f, 5).unwrap();
        assert_eq!(s.status, ChainStatus::Converged { stage: 1 });
        assert_eq!(s.objects[1], b);
        assert_eq!(s.connectors[1], FinFn::identity(b));
    }

    #[test]
    fn chain_id() {
        // F = Id converges immediately: the empty map on the empty set is
        // an isomorphism
        let s = initial_chain(&FunctorSpec::Id, 5).unwrap();
        assert_eq!(s.status, ChainStatus::Converged { stage: 0 });
        assert_eq!(s.objects[0].len(), 0);
    }

    #[test]
    fn chain_maybe_exhausts() {
        // FX = 1 + X never stabilizes: |W_i| = i
        let s = initial_chain(&FunctorSpec::maybe(), 5).unwrap();
        assert_eq!(s.status, ChainStatus::Exhausted { budget: 5 });
        let sizes: Vec<usize> = s.objects.iter().map(|o| o.len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn chain_to_algebra_cases() {
        let b = named(&["b1", "b2"]);
        let s = initial_chain(&FunctorSpec::Const(b.clone()), 5).unwrap();
        let r = chain_to_initial_algebra(&s).unwrap();
        assert_eq!(r.carrier, b);
        assert_eq!(r.structure, FinFn::identity(b));

        let s = initial_chain(&FunctorSpec::Id, 5).unwrap();
        let r = chain_to_initial_algebra(&s).unwrap();
        assert_eq!(r.carrier.len(), 0);

        let s = initial_chain(&FunctorSpec::maybe(), 3).unwrap();
        assert_eq!(chain_to_initial_algebra(&s).unwrap_err(), Error::NotConverged);
    }

    #[test]
    fn cocone_maybe() {
        // FX = 1 + X with the capped algebra: alpha_3 sends the three chain
        // terms to m0, m1, m2
        let a = crate::fixtures::capped_algebra(6);
        let cocone = canonical_cocone(&a, 3).unwrap();
        assert_eq!(cocone[0].dom().len(), 0);
        let alpha3 = &cocone[3];
        let mut images: Vec<String> = alpha3
            .map()
            .iter()
            .map(|&i| a.carrier.term(i).to_string())
            .collect();
        images.sort();
        assert_eq!(images, vec!["m0", "m1", "m2"]);
    }

    #[test]
    fn cocone_const_identity() {
        let b = named(&["b1", "b2"]);
        let f = FunctorSpec::Const(b.clone());
        let a = Algebra::new(f, b.clone(), FinFn::identity(b.clone())).unwrap();
        let cocone = canonical_cocone(&a, 3).unwrap();
        for alpha in &cocone[1..] {
            assert_eq!(alpha, &FinFn::identity(b.clone()));
        }
    }

    fn const_prefixed(ambient: &[&str], bs: &[&str]) -> PreFixedPoint {
        let a = named(ambient);
        let b = named(bs);
        let f = FunctorSpec::Const(b.clone());
        let m = b.inclusion_into(&a).unwrap();
        PreFixedPoint::new(f, a, m).unwrap()
    }

    #[test]
    fn subobjects_identity_functor() {
        // F = Id with m = id: the endomap is the identity on Sub(A), whose
        // least fixed point is the empty subset
        let a = named(&["a1", "a2"]);
        let p = PreFixedPoint::new(FunctorSpec::Id, a.clone(), FinFn::identity(a)).unwrap();
        let r = initial_algebra_via_subobjects(&p, SubLfpEngine::Pataraia).unwrap();
        assert_eq!(r.carrier.len(), 0);
    }

    #[test]
    fn subobjects_const() {
        // F = Const(B) with A strictly containing B: the output is B, a
        // proper subalgebra of the pre-fixed point
        let p = const_prefixed(&["a1", "b1", "b2"], &["b1", "b2"]);
        let r = initial_algebra_via_subobjects(&p, SubLfpEngine::Pataraia).unwrap();
        assert_eq!(r.carrier, named(&["b1", "b2"]));
        assert!(r.carrier.len() < p.carrier.len());
        let emb = r.embedding.as_ref().unwrap();
        assert!(finset::is_mono(emb));
    }

    #[test]
    fn subobjects_squaring_singleton() {
        // FX = X * X with A a singleton fixed point: the initial algebra is
        // empty even though A itself is fixed
        let a = named(&["p"]);
        let f = FunctorSpec::Product(Box::new(FunctorSpec::Id), Box::new(FunctorSpec::Id));
        let fa = functor::apply_obj(&f, &a).unwrap();
        assert_eq!(fa.len(), 1);
        let m = FinFn::new(fa, a.clone(), vec![0]).unwrap();
        let p = PreFixedPoint::new(f, a, m).unwrap();
        let r = initial_algebra_via_subobjects(&p, SubLfpEngine::Pataraia).unwrap();
        assert_eq!(r.carrier.len(), 0);
    }

    #[test]
    fn engines_and_chain_agree_on_const() {
        let p = const_prefixed(&["a1", "b1", "b2"], &["b1", "b2"]);
        let r = cross_validate(&p, 6).unwrap();
        assert!(r.converged);
        assert!(r.engines_agree);
        assert!(r.comparisons_mutually_inverse);
        assert!(r.stage_identities.iter().all(|s| s.equal));
        // both constructions land on B (up to the canonical comparison)
        assert_eq!(
            r.chain_result.as_ref().unwrap().carrier.len(),
            r.subobject_pataraia.carrier.len()
        );
    }

    #[test]
    fn stage_identity_cases() {
        // stage 0 is the empty subset on both sides; Const(B) reaches B at
        // stage 1 on both sides
        let p = const_prefixed(&["a1", "b1"], &["b1"]);
        let stages = verify_chain_stage_identity(&p, 2).unwrap();
        assert!(stages.iter().all(|s| s.equal));
        assert_eq!(stages[0].cocone_image, Term::set(vec![]).to_string());

        let a = named(&["a1"]);
        let p = PreFixedPoint::new(FunctorSpec::Id, a.clone(), FinFn::identity(a)).unwrap();
        let stages = verify_chain_stage_identity(&p, 3).unwrap();
        assert!(stages
            .iter()
            .all(|s| s.equal && s.iterate == Term::set(vec![]).to_string()));
    }

    #[test]
    fn cross_validate_squaring() {
        let a = named(&["p"]);
        let f = FunctorSpec::Product(Box::new(FunctorSpec::Id), Box::new(FunctorSpec::Id));
        let fa = functor::apply_obj(&f, &a).unwrap();
        let m = FinFn::new(fa, a.clone(), vec![0]).unwrap();
        let p = PreFixedPoint::new(f, a, m).unwrap();
        let r = cross_validate(&p, 6).unwrap();
        assert!(r.converged && r.engines_agree && r.comparisons_mutually_inverse);
        assert_eq!(r.subobject_pataraia.carrier.len(), 0);
    }

    #[test]
    fn prefixed_point_rejects_non_mono() {
        let a = named(&["a1"]);
        let b = named(&["b1", "b2"]);
        let f = FunctorSpec::Const(b.clone());
        let m = FinFn::new(b, a.clone(), vec![0, 0]).unwrap();
        assert!(matches!(
            PreFixedPoint::new(f, a, m).unwrap_err(),
            Error::NotMono(_, _, _)
        ));
    }

    #[test]
    fn lambek_on_outputs() {
        for r in [
            initial_algebra_via_subobjects(
                &const_prefixed(&["a1", "b1", "b2"], &["b1", "b2"]),
                SubLfpEngine::Pataraia,
            )
            .unwrap(),
            chain_to_initial_algebra(&initial_chain(&FunctorSpec::Id, 3).unwrap()).unwrap(),
        ] {
            assert!(finset::is_iso(&r.coalgebra_structure).is_some());
            assert!(finset::is_iso(&r.structure).is_some());
        }
    }
}
