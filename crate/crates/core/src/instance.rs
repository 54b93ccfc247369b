//! The JSON instance format consumed by the CLI.
//!
//! Every instance file is an object with a `kind` field naming one of the
//! supported vocabularies (poset, finset, finfn, functor, algebra,
//! coalgebra, pointed_poset, poset_map, embedding, subset_family,
//! metric_family, prefixed_point). Composite command inputs (the embedding
//! diagram consumed by `verify-colimit`) embed these documents verbatim.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coalg::{Algebra, Coalgebra};
use crate::dcpo::{EmbeddingDiagram, PointedPoset};
use crate::finset::{FinFn, FinSetObj};
use crate::functor::{CtorSpec, FunctorSpec};
use crate::initial::PreFixedPoint;
use crate::metric::{parse_rational, FiniteMetric, MetricFamily};
use crate::poset::{FinPoset, MonotoneEndo, PosetMap};
use crate::term::Term;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawPoset {
    pub elems: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

impl RawPoset {
    pub fn to_poset(&self) -> Result<FinPoset> {
        FinPoset::validate(&self.elems, &self.leq)
    }

    pub fn to_pointed(&self) -> Result<PointedPoset> {
        PointedPoset::new(self.to_poset()?)
    }

    pub fn of(p: &FinPoset) -> RawPoset {
        RawPoset {
            elems: p.elems().to_vec(),
            leq: p
                .le_pairs()
                .into_iter()
                .map(|(i, j)| (p.name(i).to_string(), p.name(j).to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawPosetMap {
    pub dom: RawPoset,
    pub cod: RawPoset,
    pub map: Vec<(String, String)>,
}

impl RawPosetMap {
    pub fn to_map(&self) -> Result<PosetMap> {
        PosetMap::from_named(self.dom.to_poset()?, self.cod.to_poset()?, &self.map)
    }

    pub fn to_endo(&self) -> Result<MonotoneEndo> {
        let dom = self.dom.to_poset()?;
        let cod = self.cod.to_poset()?;
        if dom != cod {
            return Err(Error::Schema(
                "fixpoint input must be an endomap: dom and cod differ".into(),
            ));
        }
        MonotoneEndo::from_named(dom, &self.map)
    }

    pub fn of(m: &PosetMap) -> RawPosetMap {
        RawPosetMap {
            dom: RawPoset::of(m.dom()),
            cod: RawPoset::of(m.cod()),
            map: (0..m.dom().len())
                .map(|i| {
                    (
                        m.dom().name(i).to_string(),
                        m.cod().name(m.apply(i)).to_string(),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum RawFunctor {
    Id,
    Const {
        set: Vec<String>,
    },
    Container {
        ctors: Vec<RawCtor>,
    },
    Sum {
        left: Box<RawFunctor>,
        right: Box<RawFunctor>,
    },
    Product {
        left: Box<RawFunctor>,
        right: Box<RawFunctor>,
    },
    Compose {
        outer: Box<RawFunctor>,
        inner: Box<RawFunctor>,
    },
    Powerset,
    NonemptyPowerset,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCtor {
    pub name: String,
    pub constants: Vec<String>,
    pub arity: usize,
}

pub fn parse_terms(names: &[String]) -> Result<FinSetObj> {
    let terms = names
        .iter()
        .map(|n| Term::parse(n))
        .collect::<Result<Vec<Term>>>()?;
    FinSetObj::new(terms)
}

impl RawFunctor {
    pub fn to_spec(&self) -> Result<FunctorSpec> {
        Ok(match self {
            RawFunctor::Id => FunctorSpec::Id,
            RawFunctor::Const { set } => FunctorSpec::Const(parse_terms(set)?),
            RawFunctor::Container { ctors } => FunctorSpec::Container(
                ctors
                    .iter()
                    .map(|c| {
                        Ok(CtorSpec {
                            name: c.name.clone(),
                            constants: parse_terms(&c.constants)?,
                            arity: c.arity,
                        })
                    })
                    .collect::<Result<Vec<CtorSpec>>>()?,
            ),
            RawFunctor::Sum { left, right } => {
                FunctorSpec::Sum(Box::new(left.to_spec()?), Box::new(right.to_spec()?))
            }
            RawFunctor::Product { left, right } => {
                FunctorSpec::Product(Box::new(left.to_spec()?), Box::new(right.to_spec()?))
            }
            RawFunctor::Compose { outer, inner } => {
                FunctorSpec::Compose(Box::new(outer.to_spec()?), Box::new(inner.to_spec()?))
            }
            RawFunctor::Powerset => FunctorSpec::FinPowerset,
            RawFunctor::NonemptyPowerset => FunctorSpec::NonemptyFinPowerset,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawStructured {
    pub functor: RawFunctor,
    pub carrier: Vec<String>,
    /// The structure map (or `m` for pre-fixed points) as term pairs.
    pub structure: Vec<(String, String)>,
}

fn parse_pairs(pairs: &[(String, String)]) -> Result<Vec<(Term, Term)>> {
    pairs
        .iter()
        .map(|(a, b)| Ok((Term::parse(a)?, Term::parse(b)?)))
        .collect()
}

impl RawStructured {
    pub fn to_algebra(&self) -> Result<Algebra> {
        let functor = self.functor.to_spec()?;
        let carrier = parse_terms(&self.carrier)?;
        let dom = crate::functor::apply_obj(&functor, &carrier)?;
        let structure = FinFn::from_pairs(dom, carrier.clone(), &parse_pairs(&self.structure)?)?;
        Algebra::new(functor, carrier, structure)
    }

    pub fn to_coalgebra(&self) -> Result<Coalgebra> {
        let functor = self.functor.to_spec()?;
        let carrier = parse_terms(&self.carrier)?;
        let cod = crate::functor::apply_obj(&functor, &carrier)?;
        let structure =
            FinFn::from_pairs(carrier.clone(), cod, &parse_pairs(&self.structure)?)?;
        Coalgebra::new(functor, carrier, structure)
    }

    pub fn to_prefixed_point(&self) -> Result<PreFixedPoint> {
        let functor = self.functor.to_spec()?;
        let carrier = parse_terms(&self.carrier)?;
        let dom = crate::functor::apply_obj(&functor, &carrier)?;
        let m = FinFn::from_pairs(dom, carrier.clone(), &parse_pairs(&self.structure)?)?;
        PreFixedPoint::new(functor, carrier, m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawFinFn {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub map: Vec<(String, String)>,
}

impl RawFinFn {
    pub fn to_finfn(&self) -> Result<FinFn> {
        FinFn::from_pairs(
            parse_terms(&self.dom)?,
            parse_terms(&self.cod)?,
            &parse_pairs(&self.map)?,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawSubsetFamily {
    /// Ambient finite set (finset mode)...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Vec<String>>,
    /// ...or ambient pointed poset (embedding mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_poset: Option<RawPoset>,
    pub family: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawMetricSpace {
    pub points: Vec<String>,
    /// Entries (p, q, distance) for p != q; symmetric closure is implied,
    /// missing entries are an error.
    pub d: Vec<(String, String, String)>,
}

impl RawMetricSpace {
    pub fn to_metric(&self) -> Result<FiniteMetric> {
        let n = self.points.len();
        let idx = |p: &str| -> Result<usize> {
            self.points
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::UnknownElement(p.to_string()))
        };
        let mut dist = vec![None; n * n];
        for i in 0..n {
            dist[i * n + i] = Some(num_rational::BigRational::zero());
        }
        for (p, q, d) in &self.d {
            let (i, j) = (idx(p)?, idx(q)?);
            let v = parse_rational(d)?;
            dist[i * n + j] = Some(v.clone());
            dist[j * n + i] = Some(v);
        }
        let dist = dist
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::Schema(format!(
                        "missing distance between {} and {}",
                        self.points[k / n],
                        self.points[k % n]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteMetric::new(self.points.clone(), dist)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawMetricFamily {
    pub ambient: RawMetricSpace,
    pub subspaces: Vec<RawMetricSpace>,
}

impl RawMetricFamily {
    pub fn to_family(&self) -> Result<MetricFamily> {
        Ok(MetricFamily {
            ambient: self.ambient.to_metric()?,
            subspaces: self
                .subspaces
                .iter()
                .map(|s| s.to_metric())
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

/// The composite input for `verify-colimit`: a directed diagram of
/// embeddings plus a cocone, assembled from instance-kind components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawEmbeddingDiagram {
    pub index: RawPoset,
    /// One pointed poset per index element, keyed by element name.
    pub objects: BTreeMap<String, RawPoset>,
    pub edges: Vec<RawDiagramEdge>,
    pub cocone: RawCocone,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawDiagramEdge {
    pub from: String,
    pub to: String,
    pub map: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCocone {
    pub apex: RawPoset,
    /// One map per index element, keyed by element name.
    pub maps: BTreeMap<String, Vec<(String, String)>>,
}

impl RawEmbeddingDiagram {
    pub fn to_parts(&self) -> Result<(EmbeddingDiagram, Vec<PosetMap>, PointedPoset)> {
        let index = self.index.to_poset()?;
        let mut objects = Vec::with_capacity(index.len());
        for name in index.elems() {
            let raw = self
                .objects
                .get(name)
                .ok_or_else(|| Error::Schema(format!("missing object for index `{name}`")))?;
            objects.push(raw.to_pointed()?);
        }
        let mut edges = BTreeMap::new();
        for e in &self.edges {
            let i = index
                .index_of(&e.from)
                .ok_or_else(|| Error::UnknownElement(e.from.clone()))?;
            let j = index
                .index_of(&e.to)
                .ok_or_else(|| Error::UnknownElement(e.to.clone()))?;
            let map = PosetMap::from_named(
                objects[i].poset().clone(),
                objects[j].poset().clone(),
                &e.map,
            )?;
            edges.insert((i, j), map);
        }
        let apex = self.cocone.apex.to_pointed()?;
        let mut cocone = Vec::with_capacity(index.len());
        for name in index.elems() {
            let raw = self
                .cocone
                .maps
                .get(name)
                .ok_or_else(|| Error::Schema(format!("missing cocone map at `{name}`")))?;
            let i = index.index_of(name).unwrap();
            cocone.push(PosetMap::from_named(
                objects[i].poset().clone(),
                apex.poset().clone(),
                raw,
            )?);
        }
        Ok((
            EmbeddingDiagram {
                index,
                objects,
                edges,
            },
            cocone,
            apex,
        ))
    }
}

/// Any single-object instance file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFile {
    Poset(RawPoset),
    PointedPoset(RawPoset),
    Finset { elems: Vec<String> },
    Finfn(RawFinFn),
    Functor { functor: RawFunctor },
    Algebra(RawStructured),
    Coalgebra(RawStructured),
    PosetMap(RawPosetMap),
    Embedding { e: RawPosetMap },
    SubsetFamily(RawSubsetFamily),
    MetricFamily(RawMetricFamily),
    PrefixedPoint(RawStructured),
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InstanceFile::Poset(_) => "poset",
            InstanceFile::PointedPoset(_) => "pointed_poset",
            InstanceFile::Finset { .. } => "finset",
            InstanceFile::Finfn(_) => "finfn",
            InstanceFile::Functor { .. } => "functor",
            InstanceFile::Algebra(_) => "algebra",
            InstanceFile::Coalgebra(_) => "coalgebra",
            InstanceFile::PosetMap(_) => "poset_map",
            InstanceFile::Embedding { .. } => "embedding",
            InstanceFile::SubsetFamily(_) => "subset_family",
            InstanceFile::MetricFamily(_) => "metric_family",
            InstanceFile::PrefixedPoint(_) => "prefixed_point",
        }
    }
}
