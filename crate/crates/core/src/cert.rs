//! Witness-carrying certificates.
//!
//! Every command emits a certificate holding the canonicalized inputs (with
//! content hashes), an outcome, and enough witnesses to re-verify the claim
//! by direct evaluation, without re-running any search or enumeration.
//! Serialization is canonical: object keys are sorted and construction is
//! deterministic, so identical inputs yield byte-identical certificates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::coalg::{self, CtaSearch};
use crate::dcpo;
use crate::engines::{self, Engine};
use crate::finset::{self, FinFn, FinSetObj};
use crate::functor;
use crate::initial::{self, ChainStatus, SubLfpEngine};
use crate::instance::{InstanceFile, RawEmbeddingDiagram};
use crate::metric;
use crate::poset::mask_to_vec;
use crate::term::Term;
use crate::{Error, Result};

pub const CERT_SCHEMA: &str = "mukit-certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Unknown => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputRecord {
    pub name: String,
    pub sha256: String,
    pub content: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub inputs: Vec<InputRecord>,
    pub outcome: Outcome,
    pub caps: BTreeMap<String, String>,
    pub witnesses: Value,
    pub counterexamples: Value,
    pub trace: Value,
}

/// Canonical serialization: route through `Value` so object keys come out
/// sorted regardless of struct field order.
pub fn canonical_json<T: Serialize>(v: &T) -> Result<String> {
    let value = serde_json::to_value(v).map_err(|e| Error::Schema(e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| Error::Schema(e.to_string()))
}

pub fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonicalize raw file text into a value/hash pair.
pub fn canonicalize_input(name: &str, text: &str) -> Result<InputRecord> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let canonical = serde_json::to_string(&value).map_err(|e| Error::Schema(e.to_string()))?;
    Ok(InputRecord {
        name: name.to_string(),
        sha256: sha256_hex(&canonical),
        content: value,
    })
}

impl Certificate {
    pub fn to_canonical_string(&self) -> Result<String> {
        canonical_json(self)
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let cert: Certificate =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if cert.schema != CERT_SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported certificate schema `{}`",
                cert.schema
            )));
        }
        Ok(cert)
    }
}

fn finfn_pairs(f: &FinFn) -> Value {
    Value::Array(
        (0..f.dom().len())
            .map(|i| {
                json!([
                    f.dom().term(i).to_string(),
                    f.cod().term(f.apply_idx(i)).to_string()
                ])
            })
            .collect(),
    )
}

fn parse_finfn_pairs(dom: &FinSetObj, cod: &FinSetObj, v: &Value) -> Result<FinFn> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Schema("witness map must be an array of pairs".into()))?;
    let mut pairs = Vec::with_capacity(arr.len());
    for entry in arr {
        let pair = entry
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Schema("witness map entries must be pairs".into()))?;
        let a = pair[0]
            .as_str()
            .ok_or_else(|| Error::Schema("witness map entries must be strings".into()))?;
        let b = pair[1]
            .as_str()
            .ok_or_else(|| Error::Schema("witness map entries must be strings".into()))?;
        pairs.push((Term::parse(a)?, Term::parse(b)?));
    }
    FinFn::from_pairs(dom.clone(), cod.clone(), &pairs)
}

fn default_caps() -> BTreeMap<String, String> {
    let mut caps = BTreeMap::new();
    caps.insert("enum_cap".into(), crate::caps::enum_cap().to_string());
    caps.insert("obj_cap".into(), crate::caps::obj_cap().to_string());
    caps.insert("hom_cap".into(), crate::caps::hom_cap().to_string());
    caps
}

fn build(
    command: &str,
    flags: BTreeMap<String, String>,
    inputs: Vec<InputRecord>,
    outcome: Outcome,
    witnesses: Value,
    counterexamples: Value,
    trace: Value,
) -> Certificate {
    Certificate {
        schema: CERT_SCHEMA.to_string(),
        command: command.to_string(),
        flags,
        inputs,
        outcome,
        caps: default_caps(),
        witnesses,
        counterexamples,
        trace,
    }
}

/// Which engines the fixpoint command runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    One(Engine),
    All,
}

impl EngineChoice {
    pub fn parse(s: &str) -> Result<EngineChoice> {
        Ok(match s {
            "kleene" => EngineChoice::One(Engine::Kleene),
            "zermelo" => EngineChoice::One(Engine::Zermelo),
            "tarski" => EngineChoice::One(Engine::Tarski),
            "pataraia" => EngineChoice::One(Engine::Pataraia),
            "monoid" => EngineChoice::One(Engine::Monoid),
            "all" => EngineChoice::All,
            other => return Err(Error::Schema(format!("unknown engine `{other}`"))),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EngineChoice::One(e) => e.as_str(),
            EngineChoice::All => "all",
        }
    }
}

fn expect_kind<'a>(
    file: &'a InstanceFile,
    want: &str,
    accept: impl Fn(&InstanceFile) -> bool,
) -> Result<&'a InstanceFile> {
    if accept(file) {
        Ok(file)
    } else {
        Err(Error::Schema(format!(
            "expected a {want} instance, found kind `{}`",
            file.kind()
        )))
    }
}

/// Run the fixpoint command on a monotone endomap instance.
pub fn run_fixpoint(choice: EngineChoice, name: &str, text: &str) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let file = InstanceFile::parse(text)?;
    let raw = match expect_kind(&file, "poset_map", |f| {
        matches!(f, InstanceFile::PosetMap(_))
    })? {
        InstanceFile::PosetMap(raw) => raw,
        _ => unreachable!(),
    };
    let endo = raw.to_endo()?;
    let p = endo.poset();
    let mut results: BTreeMap<String, Value> = BTreeMap::new();
    let mut value: Option<usize> = None;
    let mut trace = serde_json::Map::new();
    let mut record_result = |r: &engines::LfpResult,
                             results: &mut BTreeMap<String, Value>|
     -> Result<()> {
        if let Some(v) = value {
            if v != r.value {
                return Err(Error::InternalInvariant(format!(
                    "engine {} disagrees with previously computed value",
                    r.engine.as_str()
                )));
            }
        }
        value = Some(r.value);
        results.insert(
            r.engine.as_str().to_string(),
            json!({"value": p.name(r.value), "stages": r.stages}),
        );
        Ok(())
    };
    let run_one = |e: Engine,
                   results: &mut BTreeMap<String, Value>,
                   trace: &mut serde_json::Map<String, Value>,
                   record_result: &mut dyn FnMut(
        &engines::LfpResult,
        &mut BTreeMap<String, Value>,
    ) -> Result<()>|
     -> Result<()> {
        match e {
            Engine::Kleene => record_result(&engines::kleene_lfp(&endo)?, results),
            Engine::Zermelo => record_result(&engines::zermelo_lfp(&endo)?, results),
            Engine::Pataraia => {
                let closure = engines::pataraia_closure(&endo)?;
                trace.insert(
                    "pataraia_closure".into(),
                    json!(closure
                        .members
                        .iter()
                        .map(|&i| p.name(i).to_string())
                        .collect::<Vec<_>>()),
                );
                record_result(&engines::pataraia_lfp(&endo)?, results)
            }
            Engine::Tarski => {
                let v = engines::tarski_lfp(&endo)?;
                record_result(
                    &engines::LfpResult {
                        value: v,
                        stages: 0,
                        engine: Engine::Tarski,
                    },
                    results,
                )
            }
            Engine::Monoid => {
                let (r, mt) = engines::pataraia_via_monoid(&endo, crate::caps::DEFAULT_MONOID_CAP)?;
                trace.insert("monoid_size".into(), json!(mt.maps.len()));
                record_result(&r, results)
            }
        }
    };
    match choice {
        EngineChoice::One(e) => run_one(e, &mut results, &mut trace, &mut record_result)?,
        EngineChoice::All => {
            let mut skipped: Vec<Value> = Vec::new();
            for e in [Engine::Kleene, Engine::Zermelo, Engine::Pataraia] {
                run_one(e, &mut results, &mut trace, &mut record_result)?;
            }
            for e in [Engine::Tarski, Engine::Monoid] {
                match run_one(e, &mut results, &mut trace, &mut record_result) {
                    Ok(()) => {}
                    Err(Error::NotACompleteLattice(s)) => {
                        skipped.push(json!({"engine": e.as_str(),
                                            "reason": format!("not a complete lattice: {{{s}}}")}));
                    }
                    Err(Error::CapExceeded { what, needed, cap }) => {
                        skipped.push(json!({"engine": e.as_str(),
                                            "reason": format!("{what}: {needed} > {cap}")}));
                    }
                    Err(e) => return Err(e),
                }
            }
            if !skipped.is_empty() {
                trace.insert("skipped".into(), Value::Array(skipped));
            }
        }
    }
    let value = value.expect("at least one engine ran");
    let fixed_points: Vec<String> = (0..p.len())
        .filter(|&x| endo.apply(x) == x)
        .map(|x| p.name(x).to_string())
        .collect();
    let mut flags = BTreeMap::new();
    flags.insert("engine".into(), choice.as_str().to_string());
    Ok(build(
        "fixpoint",
        flags,
        vec![record],
        Outcome::Pass,
        json!({
            "value": p.name(value),
            "results": results,
            "fixed_points": fixed_points,
        }),
        Value::Null,
        Value::Object(trace),
    ))
}

/// Run the hylomorphism solver on a coalgebra/algebra pair.
pub fn run_hylo(
    coalg_name: &str,
    coalg_text: &str,
    alg_name: &str,
    alg_text: &str,
) -> Result<Certificate> {
    let rec_c = canonicalize_input(coalg_name, coalg_text)?;
    let rec_a = canonicalize_input(alg_name, alg_text)?;
    let c = match InstanceFile::parse(coalg_text)? {
        InstanceFile::Coalgebra(raw) => raw.to_coalgebra()?,
        f => {
            return Err(Error::Schema(format!(
                "expected a coalgebra, found kind `{}`",
                f.kind()
            )))
        }
    };
    let a = match InstanceFile::parse(alg_text)? {
        InstanceFile::Algebra(raw) => raw.to_algebra()?,
        f => {
            return Err(Error::Schema(format!(
                "expected an algebra, found kind `{}`",
                f.kind()
            )))
        }
    };
    let inputs = vec![rec_c, rec_a];
    match coalg::solve_hylo(&c, &a) {
        Ok(h) => {
            let oracle = match coalg::brute_force_cta(&c, &a, 1 << 22) {
                Ok(CtaSearch::Unique(oh)) if oh == h => json!("unique"),
                Ok(CtaSearch::Unique(_)) => {
                    return Err(Error::InternalInvariant(
                        "oracle and solver disagree".into(),
                    ))
                }
                Ok(other) => {
                    return Err(Error::InternalInvariant(format!(
                        "oracle contradicts well-foundedness: {other:?}"
                    )))
                }
                Err(Error::CapExceeded { .. }) => json!("skipped (cap)"),
                Err(e) => return Err(e),
            };
            Ok(build(
                "hylo",
                BTreeMap::new(),
                inputs,
                Outcome::Pass,
                json!({"h": finfn_pairs(&h)}),
                Value::Null,
                json!({"uniqueness_oracle": oracle}),
            ))
        }
        Err(Error::NotWellFounded(cycle)) => Ok(build(
            "hylo",
            BTreeMap::new(),
            inputs,
            Outcome::Fail,
            Value::Null,
            json!({"cycle": cycle}),
            Value::Null,
        )),
        Err(e) => Err(e),
    }
}

fn chain_witnesses(s: &initial::ChainState) -> Value {
    let sizes: Vec<usize> = s.objects.iter().map(|o| o.len()).collect();
    match s.status {
        ChainStatus::Converged { stage } => {
            let (iso, inv) = s.iso_witness().expect("converged chain has an iso");
            json!({
                "status": "converged",
                "stage": stage,
                "sizes": sizes,
                "iso": finfn_pairs(&iso),
                "iso_inverse": finfn_pairs(&inv),
            })
        }
        ChainStatus::Exhausted { budget } => json!({
            "status": "exhausted",
            "budget": budget,
            "sizes": sizes,
        }),
    }
}

/// Run the initial-algebra chain for a functor instance.
pub fn run_chain(budget: usize, name: &str, text: &str) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let f = match InstanceFile::parse(text)? {
        InstanceFile::Functor { functor } => functor.to_spec()?,
        f => {
            return Err(Error::Schema(format!(
                "expected a functor, found kind `{}`",
                f.kind()
            )))
        }
    };
    let state = initial::initial_chain(&f, budget)?;
    let outcome = match state.status {
        ChainStatus::Converged { .. } => Outcome::Pass,
        ChainStatus::Exhausted { .. } => Outcome::Unknown,
    };
    let mut flags = BTreeMap::new();
    flags.insert("budget".into(), budget.to_string());
    Ok(build(
        "chain",
        flags,
        vec![record],
        outcome,
        chain_witnesses(&state),
        Value::Null,
        Value::Null,
    ))
}

fn initial_result_witnesses(r: &initial::InitialAlgebraResult) -> Value {
    json!({
        "carrier": r.carrier.elems().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "structure": finfn_pairs(&r.structure),
        "coalgebra": finfn_pairs(&r.coalgebra_structure),
        "embedding": r.embedding.as_ref().map(finfn_pairs).unwrap_or(Value::Null),
        "stages": r.stages,
    })
}

/// Run the subobject construction on a pre-fixed point instance.
pub fn run_initial_algebra(
    via: SubLfpEngine,
    name: &str,
    text: &str,
) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let p = match InstanceFile::parse(text)? {
        InstanceFile::PrefixedPoint(raw) => raw.to_prefixed_point()?,
        f => {
            return Err(Error::Schema(format!(
                "expected a prefixed_point, found kind `{}`",
                f.kind()
            )))
        }
    };
    let r = initial::initial_algebra_via_subobjects(&p, via)?;
    let mut flags = BTreeMap::new();
    flags.insert(
        "via".into(),
        match via {
            SubLfpEngine::Pataraia => "pataraia".to_string(),
            SubLfpEngine::Zermelo => "zermelo".to_string(),
        },
    );
    Ok(build(
        "initial-algebra",
        flags,
        vec![record],
        Outcome::Pass,
        initial_result_witnesses(&r),
        Value::Null,
        Value::Null,
    ))
}

/// Run the chain/subobject cross-validation on a pre-fixed point instance.
pub fn run_cross_validate(budget: usize, name: &str, text: &str) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let p = match InstanceFile::parse(text)? {
        InstanceFile::PrefixedPoint(raw) => raw.to_prefixed_point()?,
        f => {
            return Err(Error::Schema(format!(
                "expected a prefixed_point, found kind `{}`",
                f.kind()
            )))
        }
    };
    let r = initial::cross_validate(&p, budget)?;
    let outcome = if !r.converged {
        Outcome::Unknown
    } else if r.engines_agree
        && r.comparisons_mutually_inverse
        && r.stage_identities.iter().all(|s| s.equal)
    {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let stage_identities: Vec<Value> = r
        .stage_identities
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage,
                "cocone_image": s.cocone_image,
                "iterate": s.iterate,
                "equal": s.equal,
            })
        })
        .collect();
    let witnesses = json!({
        "chain": chain_witnesses(&r.chain),
        "subobject": initial_result_witnesses(&r.subobject_pataraia),
        "engines_agree": r.engines_agree,
        "comparison": r.comparison.as_ref().map(|(h1, h2)| json!({
            "to_subobject": finfn_pairs(h1),
            "to_chain": finfn_pairs(h2),
        })).unwrap_or(Value::Null),
        "mutually_inverse": r.comparisons_mutually_inverse,
        "stage_identities": stage_identities,
    });
    let mut flags = BTreeMap::new();
    flags.insert("budget".into(), budget.to_string());
    Ok(build(
        "cross-validate",
        flags,
        vec![record],
        outcome,
        witnesses,
        Value::Null,
        Value::Null,
    ))
}

/// Run the colimit characterization on an embedding-diagram document.
pub fn run_verify_colimit(name: &str, text: &str) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let raw: RawEmbeddingDiagram =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let (diagram, cocone, apex) = raw.to_parts()?;
    let r = dcpo::verify_basic_lemma(&diagram, &cocone, &apex)?;
    if !r.agree {
        return Err(Error::InternalInvariant(
            "colimit characterization sides disagree".into(),
        ));
    }
    let outcome = if r.side_colimit { Outcome::Pass } else { Outcome::Fail };
    let projections: Vec<Value> = r
        .projections
        .iter()
        .map(|p| match p {
            Some(table) => {
                let names: Vec<String> = table.iter().map(|&v| v.to_string()).collect();
                let _ = names;
                json!(table)
            }
            None => Value::Null,
        })
        .collect();
    let max_inverse = cocone[diagram.max_index()]
        .order_iso_inverse()
        .map(|inv| json!(inv.map()))
        .unwrap_or(Value::Null);
    Ok(build(
        "verify-colimit",
        BTreeMap::new(),
        vec![record],
        outcome,
        json!({
            "side_colimit": r.side_colimit,
            "side_join": r.side_join,
            "agree": r.agree,
            "projections": projections,
            "max_component_inverse": max_inverse,
            "probe_targets": r.probe_targets,
        }),
        r.failure.map(|f| json!({"reason": f})).unwrap_or(Value::Null),
        Value::Null,
    ))
}

/// Run the smoothness check: finite-set mode for an `ambient` finset,
/// embedding mode for an `ambient_poset`.
pub fn run_check_smooth(name: &str, text: &str) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let raw = match InstanceFile::parse(text)? {
        InstanceFile::SubsetFamily(raw) => raw,
        f => {
            return Err(Error::Schema(format!(
                "expected a subset_family, found kind `{}`",
                f.kind()
            )))
        }
    };
    let (outcome, witnesses) = match (&raw.ambient, &raw.ambient_poset) {
        (Some(ambient_names), None) => {
            let ambient = crate::instance::parse_terms(ambient_names)?;
            let family: Vec<Vec<usize>> = raw
                .family
                .iter()
                .map(|subset| {
                    subset
                        .iter()
                        .map(|t| {
                            let term = Term::parse(t)?;
                            ambient
                                .index_of(&term)
                                .ok_or_else(|| Error::UnknownElement(t.clone()))
                        })
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let r = finset::check_smooth_finset(&ambient, &family)?;
            let ok = r.factorizer_monic && r.colimit_equals_union;
            (
                if ok { Outcome::Pass } else { Outcome::Fail },
                json!({
                    "mode": "finset",
                    "join": finset::subset_name(&ambient, r.join_mask),
                    "factorizer_monic": r.factorizer_monic,
                    "colimit_equals_union": r.colimit_equals_union,
                    "colimit_size": r.colimit.carrier.len(),
                    "factorizer": finfn_pairs(&r.factorizer),
                }),
            )
        }
        (None, Some(ambient_raw)) => {
            let ambient = ambient_raw.to_pointed()?;
            let family: Vec<u32> = raw
                .family
                .iter()
                .map(|subset| {
                    let idxs = subset
                        .iter()
                        .map(|nm| {
                            ambient
                                .poset()
                                .index_of(nm)
                                .ok_or_else(|| Error::UnknownElement(nm.clone()))
                        })
                        .collect::<Result<Vec<usize>>>()?;
                    Ok(crate::poset::vec_to_mask(&idxs))
                })
                .collect::<Result<Vec<_>>>()?;
            let r = dcpo::check_smooth_embeddings(&ambient, &family)?;
            let ok = r.connecting_ok && r.projection_formula_ok;
            let join_names: Vec<String> = mask_to_vec(r.join_mask)
                .into_iter()
                .map(|i| ambient.poset().name(i).to_string())
                .collect();
            (
                if ok { Outcome::Pass } else { Outcome::Fail },
                json!({
                    "mode": "embeddings",
                    "join": join_names,
                    "connecting_ok": r.connecting_ok,
                    "projection_formula_ok": r.projection_formula_ok,
                    "m_hat": r.m_hat,
                }),
            )
        }
        _ => {
            return Err(Error::Schema(
                "subset_family needs exactly one of `ambient` or `ambient_poset`".into(),
            ))
        }
    };
    Ok(build(
        "check-smooth",
        BTreeMap::new(),
        vec![record],
        outcome,
        witnesses,
        Value::Null,
        Value::Null,
    ))
}

/// Run the directed metric join on a metric-family instance.
pub fn run_metric_join(name: &str, text: &str) -> Result<Certificate> {
    let record = canonicalize_input(name, text)?;
    let fam = match InstanceFile::parse(text)? {
        InstanceFile::MetricFamily(raw) => raw.to_family()?,
        f => {
            return Err(Error::Schema(format!(
                "expected a metric_family, found kind `{}`",
                f.kind()
            )))
        }
    };
    let r = metric::metric_directed_join(&fam)?;
    let n = r.join.len();
    let mut entries: Vec<Value> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            entries.push(json!([
                r.join.points()[i],
                r.join.points()[j],
                r.join.d(i, j).to_string()
            ]));
        }
    }
    let realizers: Vec<Value> = r
        .realizers
        .iter()
        .map(|((p, q), k)| json!([p, q, k]))
        .collect();
    let ok = r.inclusions_non_expanding && r.dominates_ambient;
    Ok(build(
        "metric-join",
        BTreeMap::new(),
        vec![record],
        if ok { Outcome::Pass } else { Outcome::Fail },
        json!({
            "points": r.join.points(),
            "d": entries,
            "realizers": realizers,
            "inclusions_non_expanding": r.inclusions_non_expanding,
            "dominates_ambient": r.dominates_ambient,
        }),
        Value::Null,
        Value::Null,
    ))
}

/// The recheck verdict, with the first failing equation when negative.
#[derive(Debug, Clone, Serialize)]
pub struct RecheckReport {
    pub ok: bool,
    pub detail: String,
}

fn fail(detail: impl Into<String>) -> RecheckReport {
    RecheckReport {
        ok: false,
        detail: detail.into(),
    }
}

fn pass() -> RecheckReport {
    RecheckReport {
        ok: true,
        detail: "all witnesses verified".into(),
    }
}

/// Re-verify a certificate by direct evaluation of its witnesses. When the
/// original input files are supplied, their canonical hashes must match the
/// recorded ones; the embedded canonical inputs are always re-hashed.
pub fn recheck(cert: &Certificate, files: &[(String, String)]) -> Result<RecheckReport> {
    // embedded contents must match their recorded hashes
    for rec in &cert.inputs {
        let canonical =
            serde_json::to_string(&rec.content).map_err(|e| Error::Schema(e.to_string()))?;
        if sha256_hex(&canonical) != rec.sha256 {
            return Err(Error::HashMismatch(format!(
                "embedded input `{}` does not match its recorded hash",
                rec.name
            )));
        }
    }
    // supplied files must canonicalize to the recorded hashes, in order
    if !files.is_empty() {
        if files.len() != cert.inputs.len() {
            return Err(Error::HashMismatch(format!(
                "certificate records {} inputs but {} files were supplied",
                cert.inputs.len(),
                files.len()
            )));
        }
        for (rec, (fname, text)) in cert.inputs.iter().zip(files) {
            let canon = canonicalize_input(fname, text)?;
            if canon.sha256 != rec.sha256 {
                return Err(Error::HashMismatch(format!(
                    "file `{fname}` does not match recorded input `{}`",
                    rec.name
                )));
            }
        }
    }
    let input_text = |i: usize| -> Result<String> {
        serde_json::to_string(&cert.inputs[i].content).map_err(|e| Error::Schema(e.to_string()))
    };
    match cert.command.as_str() {
        "fixpoint" => recheck_fixpoint(cert, &input_text(0)?),
        "hylo" => recheck_hylo(cert, &input_text(0)?, &input_text(1)?),
        "chain" => recheck_chain(cert, &input_text(0)?),
        "initial-algebra" => recheck_initial_algebra(cert, &input_text(0)?),
        "cross-validate" => recheck_cross_validate(cert, &input_text(0)?),
        "verify-colimit" => recheck_verify_colimit(cert, &input_text(0)?),
        "check-smooth" => recheck_check_smooth(cert, &input_text(0)?),
        "metric-join" => recheck_metric_join(cert, &input_text(0)?),
        other => Err(Error::Schema(format!("unknown command `{other}`"))),
    }
}

fn wit<'a>(cert: &'a Certificate, key: &str) -> Result<&'a Value> {
    cert.witnesses
        .get(key)
        .ok_or_else(|| Error::Schema(format!("certificate lacks witness `{key}`")))
}

fn recheck_fixpoint(cert: &Certificate, endo_text: &str) -> Result<RecheckReport> {
    let raw = match InstanceFile::parse(endo_text)? {
        InstanceFile::PosetMap(raw) => raw,
        _ => return Err(Error::Schema("fixpoint input must be a poset_map".into())),
    };
    let endo = raw.to_endo()?;
    let p = endo.poset();
    let value_name = wit(cert, "value")?
        .as_str()
        .ok_or_else(|| Error::Schema("value witness must be a string".into()))?;
    let value = match p.index_of(value_name) {
        Some(v) => v,
        None => return Ok(fail(format!("value `{value_name}` is not an element"))),
    };
    if endo.apply(value) != value {
        return Ok(fail(format!("claimed value `{value_name}` is not fixed")));
    }
    let listed: Vec<&str> = wit(cert, "fixed_points")?
        .as_array()
        .ok_or_else(|| Error::Schema("fixed_points must be an array".into()))?
        .iter()
        .filter_map(|v| v.as_str())
        .collect();
    // the listed set must be exactly the fixed points, and the value least
    for x in 0..p.len() {
        let is_fixed = endo.apply(x) == x;
        let is_listed = listed.contains(&p.name(x));
        if is_fixed != is_listed {
            return Ok(fail(format!(
                "fixed-point list wrong at `{}`",
                p.name(x)
            )));
        }
        if is_fixed && !p.le(value, x) {
            return Ok(fail(format!(
                "claimed value is not below fixed point `{}`",
                p.name(x)
            )));
        }
    }
    Ok(pass())
}

fn recheck_hylo(cert: &Certificate, coalg_text: &str, alg_text: &str) -> Result<RecheckReport> {
    let c = match InstanceFile::parse(coalg_text)? {
        InstanceFile::Coalgebra(raw) => raw.to_coalgebra()?,
        _ => return Err(Error::Schema("hylo input 1 must be a coalgebra".into())),
    };
    let a = match InstanceFile::parse(alg_text)? {
        InstanceFile::Algebra(raw) => raw.to_algebra()?,
        _ => return Err(Error::Schema("hylo input 2 must be an algebra".into())),
    };
    match cert.outcome {
        Outcome::Pass => {
            let h = parse_finfn_pairs(&c.carrier, &a.carrier, wit(cert, "h")?)?;
            if coalg::is_cta_morphism(&h, &c, &a)? {
                Ok(pass())
            } else {
                Ok(fail("witness map fails the commuting square"))
            }
        }
        Outcome::Fail => {
            let cycle: Vec<String> = cert
                .counterexamples
                .get("cycle")
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Schema("missing cycle counterexample".into()))?
                .iter()
                .filter_map(|v| v.as_str().map(|s| s.to_string()))
                .collect();
            if cycle.is_empty() {
                return Ok(fail("empty cycle witness"));
            }
            let adj = coalg::dependency_graph(&c)?;
            for (k, name) in cycle.iter().enumerate() {
                let next = &cycle[(k + 1) % cycle.len()];
                let i = match c.carrier.index_of(&Term::parse(name)?) {
                    Some(i) => i,
                    None => return Ok(fail(format!("cycle vertex `{name}` missing"))),
                };
                let j = match c.carrier.index_of(&Term::parse(next)?) {
                    Some(j) => j,
                    None => return Ok(fail(format!("cycle vertex `{next}` missing"))),
                };
                if !adj[i].contains(&j) {
                    return Ok(fail(format!("`{name}` -> `{next}` is not an edge")));
                }
            }
            Ok(pass())
        }
        Outcome::Unknown => Ok(fail("hylo certificates are never unknown")),
    }
}

fn recheck_chain(cert: &Certificate, functor_text: &str) -> Result<RecheckReport> {
    let f = match InstanceFile::parse(functor_text)? {
        InstanceFile::Functor { functor } => functor.to_spec()?,
        _ => return Err(Error::Schema("chain input must be a functor".into())),
    };
    let sizes: Vec<u64> = wit(cert, "sizes")?
        .as_array()
        .ok_or_else(|| Error::Schema("sizes must be an array".into()))?
        .iter()
        .filter_map(|v| v.as_u64())
        .collect();
    // deterministic re-evaluation of the stage objects
    let budget = sizes.len().saturating_sub(1);
    let state = initial::initial_chain(&f, budget)?;
    let actual: Vec<u64> = state.objects.iter().map(|o| o.len() as u64).collect();
    if actual != sizes {
        return Ok(fail("stage sizes do not match re-evaluation"));
    }
    match wit(cert, "status")?.as_str() {
        Some("converged") => {
            let stage = wit(cert, "stage")?
                .as_u64()
                .ok_or_else(|| Error::Schema("stage must be a number".into()))? as usize;
            match state.status {
                ChainStatus::Converged { stage: s } if s == stage => {
                    let (w, inv) = state.iso_witness().expect("converged");
                    let cert_iso = parse_finfn_pairs(w.dom(), w.cod(), wit(cert, "iso")?)?;
                    let cert_inv =
                        parse_finfn_pairs(inv.dom(), inv.cod(), wit(cert, "iso_inverse")?)?;
                    if cert_iso != w {
                        return Ok(fail("recorded iso differs from the connecting map"));
                    }
                    if cert_inv.compose(&cert_iso)? != FinFn::identity(w.dom().clone())
                        || cert_iso.compose(&cert_inv)? != FinFn::identity(inv.dom().clone())
                    {
                        return Ok(fail("recorded inverse is not inverse"));
                    }
                    Ok(pass())
                }
                _ => Ok(fail("convergence stage does not match re-evaluation")),
            }
        }
        Some("exhausted") => match state.status {
            ChainStatus::Exhausted { .. } => Ok(pass()),
            _ => Ok(fail("chain converged although exhaustion was recorded")),
        },
        _ => Err(Error::Schema("status must be converged or exhausted".into())),
    }
}

fn witness_initial_result(
    functor: &crate::functor::FunctorSpec,
    witnesses: &Value,
) -> Result<(FinSetObj, FinFn, FinFn)> {
    let carrier_names: Vec<String> = witnesses
        .get("carrier")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Schema("carrier witness missing".into()))?
        .iter()
        .filter_map(|v| v.as_str().map(|s| s.to_string()))
        .collect();
    let carrier = crate::instance::parse_terms(&carrier_names)?;
    let f_carrier = functor::apply_obj(functor, &carrier)?;
    let structure = parse_finfn_pairs(
        &f_carrier,
        &carrier,
        witnesses
            .get("structure")
            .ok_or_else(|| Error::Schema("structure witness missing".into()))?,
    )?;
    let coalgebra = parse_finfn_pairs(
        &carrier,
        &f_carrier,
        witnesses
            .get("coalgebra")
            .ok_or_else(|| Error::Schema("coalgebra witness missing".into()))?,
    )?;
    Ok((carrier, structure, coalgebra))
}

fn recheck_initial_result(
    functor: &crate::functor::FunctorSpec,
    witnesses: &Value,
    ambient: Option<(&FinSetObj, &FinFn)>,
) -> Result<RecheckReport> {
    let (carrier, structure, coalgebra) = witness_initial_result(functor, witnesses)?;
    // mutually inverse
    if structure.compose(&coalgebra)? != FinFn::identity(carrier.clone()) {
        return Ok(fail("structure . coalgebra is not the identity"));
    }
    if coalgebra.compose(&structure)? != FinFn::identity(structure.dom().clone()) {
        return Ok(fail("coalgebra . structure is not the identity"));
    }
    if let Some((ambient_carrier, m)) = ambient {
        let emb_v = witnesses
            .get("embedding")
            .ok_or_else(|| Error::Schema("embedding witness missing".into()))?;
        let embedding = parse_finfn_pairs(&carrier, ambient_carrier, emb_v)?;
        if !finset::is_mono(&embedding) {
            return Ok(fail("embedding witness is not injective"));
        }
        // subalgebra square: u . structure = m . F(u)
        let fu = functor::apply_mor(functor, &embedding)?;
        if embedding.compose(&structure)? != m.compose(&fu)? {
            return Ok(fail("subalgebra square does not commute"));
        }
        // fixed-point property: the subobject endomap fixes the carrier
        if m.compose(&fu)?.image() != carrier {
            return Ok(fail("carrier is not fixed by the subobject endomap"));
        }
    }
    Ok(pass())
}

fn recheck_initial_algebra(cert: &Certificate, text: &str) -> Result<RecheckReport> {
    let p = match InstanceFile::parse(text)? {
        InstanceFile::PrefixedPoint(raw) => raw.to_prefixed_point()?,
        _ => {
            return Err(Error::Schema(
                "initial-algebra input must be a prefixed_point".into(),
            ))
        }
    };
    recheck_initial_result(&p.functor, &cert.witnesses, Some((&p.carrier, &p.m)))
}

fn recheck_cross_validate(cert: &Certificate, text: &str) -> Result<RecheckReport> {
    let p = match InstanceFile::parse(text)? {
        InstanceFile::PrefixedPoint(raw) => raw.to_prefixed_point()?,
        _ => {
            return Err(Error::Schema(
                "cross-validate input must be a prefixed_point".into(),
            ))
        }
    };
    if cert.outcome == Outcome::Unknown {
        return Ok(pass()); // budget exhaustion carries no witnesses to check
    }
    let sub = wit(cert, "subobject")?;
    let r = recheck_initial_result(&p.functor, sub, Some((&p.carrier, &p.m)))?;
    if !r.ok {
        return Ok(r);
    }
    let (sub_carrier, sub_structure, sub_coalgebra) = witness_initial_result(&p.functor, sub)?;
    let chain_w = wit(cert, "chain")?;
    let stage = chain_w
        .get("stage")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Schema("chain stage missing".into()))? as usize;
    let state = initial::initial_chain(&p.functor, stage + 1)?;
    let cr = initial::chain_to_initial_algebra(&state)?;
    let comparison = wit(cert, "comparison")?;
    let h1 = parse_finfn_pairs(
        &cr.carrier,
        &sub_carrier,
        comparison
            .get("to_subobject")
            .ok_or_else(|| Error::Schema("comparison map missing".into()))?,
    )?;
    let h2 = parse_finfn_pairs(
        &sub_carrier,
        &cr.carrier,
        comparison
            .get("to_chain")
            .ok_or_else(|| Error::Schema("comparison map missing".into()))?,
    )?;
    // both comparison maps satisfy their commuting squares
    let sub_alg = Algebra::new(p.functor.clone(), sub_carrier.clone(), sub_structure)?;
    let chain_coalg = cr.as_coalgebra()?;
    if !coalg::is_cta_morphism(&h1, &chain_coalg, &sub_alg)? {
        return Ok(fail("chain-to-subobject comparison fails its square"));
    }
    let sub_coalg = Coalgebra::new(p.functor.clone(), sub_carrier.clone(), sub_coalgebra)?;
    let chain_alg = cr.as_algebra()?;
    if !coalg::is_cta_morphism(&h2, &sub_coalg, &chain_alg)? {
        return Ok(fail("subobject-to-chain comparison fails its square"));
    }
    if h2.compose(&h1)? != FinFn::identity(cr.carrier.clone())
        || h1.compose(&h2)? != FinFn::identity(sub_carrier.clone())
    {
        return Ok(fail("comparison maps are not mutually inverse"));
    }
    Ok(pass())
}

use crate::coalg::{Algebra, Coalgebra};

fn recheck_verify_colimit(cert: &Certificate, text: &str) -> Result<RecheckReport> {
    let raw: RawEmbeddingDiagram =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let (diagram, cocone, apex) = raw.to_parts()?;
    let side_join = wit(cert, "side_join")?
        .as_bool()
        .ok_or_else(|| Error::Schema("side_join must be boolean".into()))?;
    let side_colimit = wit(cert, "side_colimit")?
        .as_bool()
        .ok_or_else(|| Error::Schema("side_colimit must be boolean".into()))?;
    // iso criterion for the universal side, from the recorded inverse
    let m = diagram.max_index();
    let iso_ok = match wit(cert, "max_component_inverse")? {
        Value::Null => false,
        v => {
            let table: Vec<usize> = v
                .as_array()
                .ok_or_else(|| Error::Schema("inverse must be an array".into()))?
                .iter()
                .filter_map(|x| x.as_u64().map(|u| u as usize))
                .collect();
            match crate::poset::PosetMap::new(
                apex.poset().clone(),
                diagram.objects[m].poset().clone(),
                table,
            ) {
                Ok(inv) => {
                    inv.compose(&cocone[m])?
                        == crate::poset::PosetMap::identity(
                            diagram.objects[m].poset().clone(),
                        )
                        && cocone[m].compose(&inv)?
                            == crate::poset::PosetMap::identity(apex.poset().clone())
                }
                Err(_) => false,
            }
        }
    };
    if iso_ok != side_colimit {
        return Ok(fail("recorded universal-side verdict does not match its witness"));
    }
    // join side from the recorded projections
    let projections = wit(cert, "projections")?
        .as_array()
        .ok_or_else(|| Error::Schema("projections must be an array".into()))?;
    let mut join_ok = true;
    let mut idempotents: Vec<Vec<usize>> = Vec::new();
    for (i, pv) in projections.iter().enumerate() {
        match pv {
            Value::Null => join_ok = false,
            v => {
                let table: Vec<usize> = v
                    .as_array()
                    .ok_or_else(|| Error::Schema("projection must be an array".into()))?
                    .iter()
                    .filter_map(|x| x.as_u64().map(|u| u as usize))
                    .collect();
                let proj = match crate::poset::PosetMap::new(
                    apex.poset().clone(),
                    diagram.objects[i].poset().clone(),
                    table,
                ) {
                    Ok(p) => p,
                    Err(_) => {
                        join_ok = false;
                        continue;
                    }
                };
                // embedding equations
                if proj.compose(&cocone[i])?
                    != crate::poset::PosetMap::identity(diagram.objects[i].poset().clone())
                {
                    join_ok = false;
                    continue;
                }
                let ep = cocone[i].compose(&proj)?;
                if !ep.le_pointwise(&crate::poset::PosetMap::identity(apex.poset().clone()))
                {
                    join_ok = false;
                    continue;
                }
                idempotents.push(ep.map().to_vec());
            }
        }
    }
    if join_ok && !idempotents.is_empty() {
        // join of the idempotents must be the identity
        for x in 0..apex.len() {
            let vals: Vec<usize> = idempotents.iter().map(|t| t[x]).collect();
            match apex.poset().join(&vals) {
                Some(j) if j == x => {}
                _ => {
                    join_ok = false;
                    break;
                }
            }
        }
    }
    if join_ok != side_join {
        return Ok(fail("recorded join-side verdict does not match its witnesses"));
    }
    if (side_join == side_colimit) != wit(cert, "agree")?.as_bool().unwrap_or(false) {
        return Ok(fail("agreement flag is inconsistent"));
    }
    Ok(pass())
}

fn recheck_check_smooth(cert: &Certificate, text: &str) -> Result<RecheckReport> {
    // deterministic re-evaluation; the checks are already direct
    let rerun = run_check_smooth("input", text)?;
    if rerun.outcome != cert.outcome {
        return Ok(fail("smoothness outcome does not reproduce"));
    }
    if rerun.witnesses != cert.witnesses {
        return Ok(fail("smoothness witnesses do not reproduce"));
    }
    Ok(pass())
}

fn recheck_metric_join(cert: &Certificate, text: &str) -> Result<RecheckReport> {
    let fam = match InstanceFile::parse(text)? {
        InstanceFile::MetricFamily(raw) => raw.to_family()?,
        _ => {
            return Err(Error::Schema(
                "metric-join input must be a metric_family".into(),
            ))
        }
    };
    let points: Vec<String> = wit(cert, "points")?
        .as_array()
        .ok_or_else(|| Error::Schema("points must be an array".into()))?
        .iter()
        .filter_map(|v| v.as_str().map(|s| s.to_string()))
        .collect();
    let entries = wit(cert, "d")?
        .as_array()
        .ok_or_else(|| Error::Schema("d must be an array".into()))?;
    let n = points.len();
    let mut dist = vec![num_rational::BigRational::from_integer(0.into()); n * n];
    for e in entries {
        let triple = e
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| Error::Schema("distance entries must be triples".into()))?;
        let p = triple[0].as_str().unwrap_or_default();
        let q = triple[1].as_str().unwrap_or_default();
        let d = metric::parse_rational(triple[2].as_str().unwrap_or_default())?;
        let i = points
            .iter()
            .position(|x| x == p)
            .ok_or_else(|| Error::Schema(format!("unknown join point `{p}`")))?;
        let j = points
            .iter()
            .position(|x| x == q)
            .ok_or_else(|| Error::Schema(format!("unknown join point `{q}`")))?;
        dist[i * n + j] = d.clone();
        dist[j * n + i] = d;
    }
    // metric axioms verified exactly by reconstruction
    let join = match metric::FiniteMetric::new(points.clone(), dist) {
        Ok(j) => j,
        Err(e) => return Ok(fail(format!("witness join is not a metric: {e}"))),
    };
    // each distance is realized and minimal over the family
    for i in 0..n {
        for j in (i + 1)..n {
            let mut best: Option<num_rational::BigRational> = None;
            for s in &fam.subspaces {
                if let (Some(x), Some(y)) =
                    (s.index_of(&points[i]), s.index_of(&points[j]))
                {
                    let d = s.d(x, y);
                    if best.as_ref().map_or(true, |b| &d < b) {
                        best = Some(d);
                    }
                }
            }
            match best {
                Some(b) if b == join.d(i, j) => {}
                _ => {
                    return Ok(fail(format!(
                        "witness distance for ({}, {}) is not the family minimum",
                        points[i], points[j]
                    )))
                }
            }
        }
    }
    Ok(pass())
}
