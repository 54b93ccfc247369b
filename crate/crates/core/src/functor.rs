//! A grammar of endofunctors on finite sets with computable action on
//! objects and morphisms: identity, constants, containers (polynomial
//! functors), binary sums and products, composition, and the finite
//! powerset (full and non-empty).
//!
//! Every functor in the grammar preserves injections; the checker exists to
//! guard extensions of the grammar, not because failures are expected.

use crate::finset::{self, FinFn, FinSetObj};
use crate::term::Term;
use crate::{caps, Error, Result};

/// One container constructor: a name, a finite set of constants, and an
/// arity. A container element is `name[k](x1,...,xarity)` with k drawn from
/// the constant set and children drawn from the argument set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtorSpec {
    pub name: String,
    pub constants: FinSetObj,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorSpec {
    Id,
    Const(FinSetObj),
    Container(Vec<CtorSpec>),
    Sum(Box<FunctorSpec>, Box<FunctorSpec>),
    Product(Box<FunctorSpec>, Box<FunctorSpec>),
    /// `Compose(f, g)` applies `g` first: X goes to F(G(X)).
    Compose(Box<FunctorSpec>, Box<FunctorSpec>),
    FinPowerset,
    NonemptyFinPowerset,
}

impl FunctorSpec {
    /// Constructor names within a container must be distinct.
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctorSpec::Container(ctors) => {
                let mut names: Vec<&str> = ctors.iter().map(|c| c.name.as_str()).collect();
                names.sort_unstable();
                for w in names.windows(2) {
                    if w[0] == w[1] {
                        return Err(Error::DuplicateElement(w[0].to_string()));
                    }
                }
                Ok(())
            }
            FunctorSpec::Sum(f, g) | FunctorSpec::Product(f, g) | FunctorSpec::Compose(f, g) => {
                f.validate()?;
                g.validate()
            }
            _ => Ok(()),
        }
    }

    /// The natural-numbers-style functor X -> 1 + X, as a container with a
    /// nullary and a unary constructor.
    pub fn maybe() -> FunctorSpec {
        FunctorSpec::Container(vec![
            CtorSpec {
                name: "Z".into(),
                constants: FinSetObj::from_names(&["*"]).unwrap(),
                arity: 0,
            },
            CtorSpec {
                name: "S".into(),
                constants: FinSetObj::from_names(&["*"]).unwrap(),
                arity: 1,
            },
        ])
    }
}

/// Cardinality of F(X) for |X| = n, without materializing anything.
pub fn cardinality(f: &FunctorSpec, n: u128) -> u128 {
    match f {
        FunctorSpec::Id => n,
        FunctorSpec::Const(s) => s.len() as u128,
        FunctorSpec::Container(ctors) => ctors
            .iter()
            .map(|c| (c.constants.len() as u128).saturating_mul(n.saturating_pow(c.arity as u32)))
            .fold(0u128, u128::saturating_add),
        FunctorSpec::Sum(f, g) => cardinality(f, n).saturating_add(cardinality(g, n)),
        FunctorSpec::Product(f, g) => cardinality(f, n).saturating_mul(cardinality(g, n)),
        FunctorSpec::Compose(f, g) => cardinality(f, cardinality(g, n)),
        FunctorSpec::FinPowerset => 1u128 << n.min(127),
        FunctorSpec::NonemptyFinPowerset => (1u128 << n.min(127)) - 1,
    }
}

/// Apply the functor to an object. Refuses before materializing anything
/// larger than the object cap.
pub fn apply_obj(f: &FunctorSpec, x: &FinSetObj) -> Result<FinSetObj> {
    f.validate()?;
    caps::require("apply_obj cardinality", cardinality(f, x.len() as u128), caps::obj_cap())?;
    let elems = build_terms(f, x)?;
    let out = FinSetObj::new(elems)?;
    let expect = cardinality(f, x.len() as u128);
    if out.len() as u128 != expect {
        return Err(Error::InternalInvariant(format!(
            "cardinality formula predicts {expect} but {} were materialized",
            out.len()
        )));
    }
    Ok(out)
}

fn build_terms(f: &FunctorSpec, x: &FinSetObj) -> Result<Vec<Term>> {
    Ok(match f {
        FunctorSpec::Id => x.elems().to_vec(),
        FunctorSpec::Const(s) => s.elems().to_vec(),
        FunctorSpec::Container(ctors) => {
            let mut out = Vec::new();
            for c in ctors {
                if c.arity > 0 && x.is_empty() {
                    continue; // X^arity is empty
                }
                for k in c.constants.elems() {
                    let mut tuple = vec![0usize; c.arity];
                    loop {
                        out.push(Term::ctor(
                            &c.name,
                            k.clone(),
                            tuple.iter().map(|&i| x.term(i).clone()).collect(),
                        ));
                        // mixed-radix increment over X^arity
                        let mut pos = 0;
                        loop {
                            if pos == c.arity {
                                break;
                            }
                            tuple[pos] += 1;
                            if tuple[pos] < x.len() {
                                break;
                            }
                            tuple[pos] = 0;
                            pos += 1;
                        }
                        if pos == c.arity {
                            break;
                        }
                    }
                }
            }
            out
        }
        FunctorSpec::Sum(fl, fr) => {
            let mut out: Vec<Term> = build_terms(fl, x)?
                .into_iter()
                .map(|t| Term::Inl(Box::new(t)))
                .collect();
            out.extend(
                build_terms(fr, x)?
                    .into_iter()
                    .map(|t| Term::Inr(Box::new(t))),
            );
            out
        }
        FunctorSpec::Product(fl, fr) => {
            let left = build_terms(fl, x)?;
            let right = build_terms(fr, x)?;
            left.iter()
                .flat_map(|a| {
                    right
                        .iter()
                        .map(move |b| Term::Pair(Box::new(a.clone()), Box::new(b.clone())))
                })
                .collect()
        }
        FunctorSpec::Compose(fo, fi) => {
            let inner = apply_obj(fi, x)?;
            build_terms(fo, &inner)?
        }
        FunctorSpec::FinPowerset => powerset_terms(x, false),
        FunctorSpec::NonemptyFinPowerset => powerset_terms(x, true),
    })
}

fn powerset_terms(x: &FinSetObj, nonempty: bool) -> Vec<Term> {
    let n = x.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u64..(1u64 << n) {
        if nonempty && mask == 0 {
            continue;
        }
        let children: Vec<Term> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| x.term(i).clone())
            .collect();
        out.push(Term::set(children));
    }
    out
}

/// Rebuild a term of F(X) by applying `phi` at every X-position.
pub fn map_term(f: &FunctorSpec, t: &Term, phi: &dyn Fn(&Term) -> Term) -> Result<Term> {
    Ok(match f {
        FunctorSpec::Id => phi(t),
        FunctorSpec::Const(_) => t.clone(),
        FunctorSpec::Container(_) => match t {
            Term::Ctor { name, konst, args } => Term::Ctor {
                name: name.clone(),
                konst: konst.clone(),
                args: args.iter().map(phi).collect(),
            },
            _ => return Err(malformed(f, t)),
        },
        FunctorSpec::Sum(fl, fr) => match t {
            Term::Inl(u) => Term::Inl(Box::new(map_term(fl, u, phi)?)),
            Term::Inr(u) => Term::Inr(Box::new(map_term(fr, u, phi)?)),
            _ => return Err(malformed(f, t)),
        },
        FunctorSpec::Product(fl, fr) => match t {
            Term::Pair(a, b) => Term::Pair(
                Box::new(map_term(fl, a, phi)?),
                Box::new(map_term(fr, b, phi)?),
            ),
            _ => return Err(malformed(f, t)),
        },
        FunctorSpec::Compose(fo, fi) => {
            let inner_phi = |u: &Term| -> Term {
                map_term(fi, u, phi).expect("inner term malformed under composition")
            };
            map_term(fo, t, &inner_phi)?
        }
        FunctorSpec::FinPowerset | FunctorSpec::NonemptyFinPowerset => match t {
            // direct image: sort and deduplicate
            Term::Set(children) => Term::set(children.iter().map(phi).collect()),
            _ => return Err(malformed(f, t)),
        },
    })
}

/// The X-elements occurring in a term of F(X), in traversal order.
pub fn x_children(f: &FunctorSpec, t: &Term) -> Result<Vec<Term>> {
    Ok(match f {
        FunctorSpec::Id => vec![t.clone()],
        FunctorSpec::Const(_) => vec![],
        FunctorSpec::Container(_) => match t {
            Term::Ctor { args, .. } => args.clone(),
            _ => return Err(malformed(f, t)),
        },
        FunctorSpec::Sum(fl, fr) => match t {
            Term::Inl(u) => x_children(fl, u)?,
            Term::Inr(u) => x_children(fr, u)?,
            _ => return Err(malformed(f, t)),
        },
        FunctorSpec::Product(fl, fr) => match t {
            Term::Pair(a, b) => {
                let mut out = x_children(fl, a)?;
                out.extend(x_children(fr, b)?);
                out
            }
            _ => return Err(malformed(f, t)),
        },
        FunctorSpec::Compose(fo, fi) => {
            let mut out = Vec::new();
            for inner in x_children(fo, t)? {
                out.extend(x_children(fi, &inner)?);
            }
            out
        }
        FunctorSpec::FinPowerset | FunctorSpec::NonemptyFinPowerset => match t {
            Term::Set(children) => children.clone(),
            _ => return Err(malformed(f, t)),
        },
    })
}

fn malformed(f: &FunctorSpec, t: &Term) -> Error {
    Error::InternalInvariant(format!("term `{t}` does not belong to {f:?}"))
}

/// Functorial action on a morphism: relabel X-positions through the map;
/// powerset layers take direct images.
pub fn apply_mor(f: &FunctorSpec, m: &FinFn) -> Result<FinFn> {
    let dom = apply_obj(f, m.dom())?;
    let cod = apply_obj(f, m.cod())?;
    let phi = |t: &Term| -> Term {
        m.apply(t)
            .unwrap_or_else(|| panic!("term `{t}` escaped the domain"))
            .clone()
    };
    let map = dom
        .elems()
        .iter()
        .map(|t| {
            let u = map_term(f, t, &phi)?;
            cod.index_of(&u).ok_or_else(|| {
                Error::InternalInvariant(format!("image term `{u}` missing from F(cod)"))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    FinFn::new(dom, cod, map)
}

/// Outcome of a pointwise law check.
#[derive(Debug, Clone)]
pub struct LawReport {
    pub identity_checked: usize,
    pub composition_checked: usize,
}

/// Verify F(id) = id on each sample's domain and F(g . f) = F(g) . F(f)
/// for each composable pair, evaluating through a caller-supplied action so
/// corrupted actions can be exercised in tests.
pub fn check_functor_laws_with(
    f: &FunctorSpec,
    samples: &[(FinFn, FinFn)],
    action: &dyn Fn(&FunctorSpec, &FinFn) -> Result<FinFn>,
) -> Result<LawReport> {
    let mut identity_checked = 0;
    let mut composition_checked = 0;
    for (first, second) in samples {
        if second.dom() != first.cod() {
            return Err(Error::Schema("law samples must be composable pairs".into()));
        }
        for obj in [first.dom(), first.cod(), second.cod()] {
            let fid = action(f, &FinFn::identity(obj.clone()))?;
            let expected = FinFn::identity(apply_obj(f, obj)?);
            if fid != expected {
                return Err(Error::LawViolation(format!(
                    "F(id) differs from id on a {}-element object",
                    obj.len()
                )));
            }
            identity_checked += 1;
        }
        let composite = second.compose(first)?;
        let lhs = action(f, &composite)?;
        let rhs = action(f, second)?.compose(&action(f, first)?)?;
        if lhs != rhs {
            return Err(Error::LawViolation(
                "F(g . f) differs from F(g) . F(f)".into(),
            ));
        }
        composition_checked += 1;
    }
    Ok(LawReport {
        identity_checked,
        composition_checked,
    })
}

/// Functor-law check through the canonical action.
pub fn check_functor_laws(f: &FunctorSpec, samples: &[(FinFn, FinFn)]) -> Result<LawReport> {
    check_functor_laws_with(f, samples, &apply_mor)
}

/// Outcome of the mono-preservation check: failures are reported, not errors.
#[derive(Debug, Clone)]
pub struct MonoPreservationReport {
    pub checked: usize,
    /// The first sample whose image under F stopped being injective, if any.
    pub counterexample: Option<(Term, Term)>,
}

impl MonoPreservationReport {
    pub fn preserved(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Check that F sends each sampled injection to an injection.
pub fn check_mono_preservation(
    f: &FunctorSpec,
    samples: &[FinFn],
) -> Result<MonoPreservationReport> {
    let mut checked = 0;
    for m in samples {
        if !finset::is_mono(m) {
            let (a, b) = finset::mono_counterexample(m).unwrap();
            return Err(Error::NotMono(a.to_string(), b.to_string(), "sample".into()));
        }
        let fm = apply_mor(f, m)?;
        if !finset::is_mono(&fm) {
            return Ok(MonoPreservationReport {
                checked,
                counterexample: finset::mono_counterexample(&fm)
                    .map(|(a, b)| (a, b)),
            });
        }
        checked += 1;
    }
    Ok(MonoPreservationReport {
        checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(ns: &[&str]) -> FinSetObj {
        FinSetObj::from_names(ns).unwrap()
    }

    #[test]
    fn apply_obj_id() {
        let x = named(&["a", "b"]);
        assert_eq!(apply_obj(&FunctorSpec::Id, &x).unwrap(), x);
    }

    #[test]
    fn apply_obj_maybe() {
        // FX = 1 + X on {a,b}: three elements Z, S(a), S(b)
        let x = named(&["a", "b"]);
        let fx = apply_obj(&FunctorSpec::maybe(), &x).unwrap();
        assert_eq!(fx.len(), 3);
        assert!(fx.contains(&Term::ctor("Z", Term::atom("*"), vec![])));
        assert!(fx.contains(&Term::ctor("S", Term::atom("*"), vec![Term::atom("a")])));
        assert!(fx.contains(&Term::ctor("S", Term::atom("*"), vec![Term::atom("b")])));
    }

    #[test]
    fn apply_obj_powerset() {
        let x = named(&["a"]);
        let fx = apply_obj(&FunctorSpec::FinPowerset, &x).unwrap();
        assert_eq!(fx.len(), 2);
        assert!(fx.contains(&Term::set(vec![])));
        assert!(fx.contains(&Term::set(vec![Term::atom("a")])));
        let nfx = apply_obj(&FunctorSpec::NonemptyFinPowerset, &x).unwrap();
        assert_eq!(nfx.len(), 1);
    }

    #[test]
    fn apply_obj_empty_base() {
        let e = FinSetObj::empty();
        assert_eq!(apply_obj(&FunctorSpec::maybe(), &e).unwrap().len(), 1);
        assert_eq!(apply_obj(&FunctorSpec::Id, &e).unwrap().len(), 0);
        assert_eq!(apply_obj(&FunctorSpec::FinPowerset, &e).unwrap().len(), 1);
        let sq = FunctorSpec::Product(Box::new(FunctorSpec::Id), Box::new(FunctorSpec::Id));
        assert_eq!(apply_obj(&sq, &e).unwrap().len(), 0);
    }

    #[test]
    fn cardinality_formulas_exhaustive() {
        let specs = vec![
            FunctorSpec::Id,
            FunctorSpec::Const(named(&["k1", "k2"])),
            FunctorSpec::maybe(),
            FunctorSpec::Sum(Box::new(FunctorSpec::Id), Box::new(FunctorSpec::maybe())),
            FunctorSpec::Product(Box::new(FunctorSpec::Id), Box::new(FunctorSpec::Id)),
            FunctorSpec::Compose(
                Box::new(FunctorSpec::FinPowerset),
                Box::new(FunctorSpec::maybe()),
            ),
            FunctorSpec::FinPowerset,
            FunctorSpec::NonemptyFinPowerset,
        ];
        for f in &specs {
            for n in 0..=4usize {
                if matches!(f, FunctorSpec::NonemptyFinPowerset) && n == 0 {
                    // 2^0 - 1 = 0 elements; still consistent
                }
                let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
                let x = FinSetObj::from_names(&names).unwrap();
                let fx = apply_obj(f, &x).unwrap();
                assert_eq!(fx.len() as u128, cardinality(f, n as u128), "functor {f:?} at n={n}");
            }
        }
    }

    #[test]
    fn apply_mor_cases() {
        // identity goes to identity
        let x = named(&["a", "b"]);
        let f = FunctorSpec::maybe();
        let fid = apply_mor(&f, &FinFn::identity(x.clone())).unwrap();
        assert_eq!(fid, FinFn::identity(apply_obj(&f, &x).unwrap()));

        // constant map: Z stays, S(a) and S(b) collapse to S(c)
        let y = named(&["c"]);
        let konst = FinFn::new(x.clone(), y.clone(), vec![0, 0]).unwrap();
        let fk = apply_mor(&f, &konst).unwrap();
        let z = Term::ctor("Z", Term::atom("*"), vec![]);
        let sc = Term::ctor("S", Term::atom("*"), vec![Term::atom("c")]);
        assert_eq!(fk.apply(&z), Some(&z));
        assert_eq!(
            fk.apply(&Term::ctor("S", Term::atom("*"), vec![Term::atom("a")])),
            Some(&sc)
        );

        // powerset takes direct images: {a,b} collapses to {c}
        let pk = apply_mor(&FunctorSpec::FinPowerset, &konst).unwrap();
        let ab = Term::set(vec![Term::atom("a"), Term::atom("b")]);
        let c = Term::set(vec![Term::atom("c")]);
        assert_eq!(pk.apply(&ab), Some(&c));
    }

    #[test]
    fn functor_laws_pass() {
        let x = named(&["a", "b"]);
        let y = named(&["p", "q", "r"]);
        let z = named(&["u"]);
        let f1 = FinFn::new(x, y.clone(), vec![2, 0]).unwrap();
        let f2 = FinFn::new(y, z, vec![0, 0, 0]).unwrap();
        let samples = vec![(f1, f2)];
        for f in [
            FunctorSpec::Id,
            FunctorSpec::Compose(Box::new(FunctorSpec::FinPowerset), Box::new(FunctorSpec::maybe())),
        ] {
            let r = check_functor_laws(&f, &samples).unwrap();
            assert_eq!(r.composition_checked, 1);
        }
    }

    #[test]
    fn functor_laws_negative_control() {
        // corrupted action: swaps two outputs of the genuine action
        let corrupt = |f: &FunctorSpec, m: &FinFn| -> Result<FinFn> {
            let good = apply_mor(f, m)?;
            let mut map = good.map().to_vec();
            if map.len() >= 2 && good.cod().len() >= 2 {
                let l = map.len();
                map.swap(0, l - 1);
                map[0] = (map[0] + 1) % good.cod().len();
            }
            FinFn::new(good.dom().clone(), good.cod().clone(), map)
        };
        let x = named(&["a", "b"]);
        let y = named(&["p", "q"]);
        let f1 = FinFn::new(x, y.clone(), vec![0, 1]).unwrap();
        let f2 = FinFn::identity(y);
        let err =
            check_functor_laws_with(&FunctorSpec::maybe(), &[(f1, f2)], &corrupt).unwrap_err();
        assert!(matches!(err, Error::LawViolation(_)));
    }

    #[test]
    fn mono_preservation_cases() {
        let x = named(&["a", "b"]);
        let y = named(&["p", "q", "r"]);
        let inj = FinFn::new(x.clone(), y, vec![1, 2]).unwrap();
        for f in [
            FunctorSpec::FinPowerset,
            FunctorSpec::Const(named(&["k"])),
            FunctorSpec::maybe(),
            FunctorSpec::Product(Box::new(FunctorSpec::Id), Box::new(FunctorSpec::maybe())),
        ] {
            let r = check_mono_preservation(&f, &[inj.clone()]).unwrap();
            assert!(r.preserved(), "functor {f:?} must preserve injections");
        }
    }

    #[test]
    fn mono_preservation_rejects_non_mono_sample() {
        let x = named(&["a", "b"]);
        let y = named(&["p"]);
        let bad = FinFn::new(x, y, vec![0, 0]).unwrap();
        assert!(matches!(
            check_mono_preservation(&FunctorSpec::Id, &[bad]).unwrap_err(),
            Error::NotMono(_, _, _)
        ));
    }

    #[test]
    fn duplicate_ctor_names_rejected() {
        let f = FunctorSpec::Container(vec![
            CtorSpec {
                name: "C".into(),
                constants: named(&["*"]),
                arity: 0,
            },
            CtorSpec {
                name: "C".into(),
                constants: named(&["*"]),
                arity: 1,
            },
        ]);
        assert!(matches!(
            apply_obj(&f, &named(&["a"])).unwrap_err(),
            Error::DuplicateElement(_)
        ));
    }

    #[test]
    fn cap_refusal() {
        // powerset of a 30-element set overflows the object cap
        let names: Vec<String> = (0..30).map(|i| format!("x{i}")).collect();
        let x = FinSetObj::from_names(&names).unwrap();
        assert!(matches!(
            apply_obj(&FunctorSpec::FinPowerset, &x).unwrap_err(),
            Error::CapExceeded { .. }
        ));
    }
}
