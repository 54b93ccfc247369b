//! Shared test fixtures.

use crate::coalg::{Algebra, Coalgebra};
use crate::finset::{FinFn, FinSetObj};
use crate::functor::{self, FunctorSpec};
use crate::poset::FinPoset;
use crate::term::Term;

/// The n-chain c0 < c1 < ... < c{n-1}.
pub fn chain(n: usize) -> FinPoset {
    let elems: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let pairs: Vec<(String, String)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (format!("c{i}"), format!("c{j}"))))
        .collect();
    FinPoset::validate(&elems, &pairs).unwrap()
}

/// bot < a, b < top.
pub fn diamond() -> FinPoset {
    FinPoset::validate(
        &["bot", "a", "b", "top"],
        &[
            ("bot", "a"),
            ("bot", "b"),
            ("bot", "top"),
            ("a", "top"),
            ("b", "top"),
        ],
    )
    .unwrap()
}

pub fn z() -> Term {
    Term::ctor("Z", Term::atom("*"), vec![])
}

pub fn s(t: Term) -> Term {
    Term::ctor("S", Term::atom("*"), vec![t])
}

/// The countdown coalgebra on {n0..n{n-1}} for FX = 1 + X:
/// gamma(n0) = Z, gamma(nk) = S(n{k-1}).
pub fn countdown(n: usize) -> Coalgebra {
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let carrier = FinSetObj::from_names(&names).unwrap();
    let f = FunctorSpec::maybe();
    let cod = functor::apply_obj(&f, &carrier).unwrap();
    let structure = FinFn::from_fn(carrier.clone(), cod, |t| {
        let name = t.to_string();
        let k: usize = name[1..].parse().unwrap();
        if k == 0 {
            z()
        } else {
            s(Term::atom(&format!("n{}", k - 1)))
        }
    })
    .unwrap();
    Coalgebra::new(f, carrier, structure).unwrap()
}

/// The min(x+1, size-1) algebra on {m0..m{size-1}} for FX = 1 + X.
pub fn capped_algebra(size: usize) -> Algebra {
    let names: Vec<String> = (0..size).map(|i| format!("m{i}")).collect();
    let carrier = FinSetObj::from_names(&names).unwrap();
    let f = FunctorSpec::maybe();
    let dom = functor::apply_obj(&f, &carrier).unwrap();
    let structure = FinFn::from_fn(dom, carrier.clone(), |t| match t {
        Term::Ctor { name, .. } if name == "Z" => Term::atom("m0"),
        Term::Ctor { args, .. } => {
            let inner = args[0].to_string();
            let k: usize = inner[1..].parse().unwrap();
            Term::atom(&format!("m{}", (k + 1).min(size - 1)))
        }
        _ => unreachable!(),
    })
    .unwrap();
    Algebra::new(f, carrier, structure).unwrap()
}
