//! β- and η-reduction on unmarked terms.
//!
//! `normalize` reaches the β-normal form first and only then contracts
//! η-redexes; on a β-normal term an η-step never creates a β-redex, so the
//! second phase never has to go back to the first.

use thiserror::Error;

use crate::term::{Name, Term};

pub const DEFAULT_FUEL: u64 = 100_000;

/// Intermediate terms above this many nodes count as running out of fuel.
pub const MAX_TERM_SIZE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Beta,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("reduction fuel exhausted")]
pub struct FuelExhausted;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a type: head of the product chain is not atomic")]
pub struct NotAType;

/// Step budget shared by one reduction job.
#[derive(Debug, Clone)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(steps: u64) -> Self {
        Fuel { remaining: steps }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn tick(&mut self) -> Result<(), FuelExhausted> {
        if self.remaining == 0 {
            return Err(FuelExhausted);
        }
        self.remaining -= 1;
        Ok(())
    }
}

fn check_size(t: &Term) -> Result<(), FuelExhausted> {
    if t.size() > MAX_TERM_SIZE {
        Err(FuelExhausted)
    } else {
        Ok(())
    }
}

/// Contractum of a β-redex at the root, if any.
fn contract_beta(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match &**f {
            Term::Abs(_, _, body) => Some(body.subst(0, a)),
            _ => None,
        },
        _ => None,
    }
}

/// Contractum of an η-redex `[x:U](u x)` with `x` not free in `u`.
fn contract_eta(t: &Term) -> Option<Term> {
    match t {
        Term::Abs(_, _, body) => match &**body {
            Term::App(u, x) if **x == Term::Var(0) && !u.occurs_free(0) => Some(u.shift(-1, 0)),
            _ => None,
        },
        _ => None,
    }
}

fn contract(t: &Term, kind: Option<ReductionKind>) -> Option<(Term, ReductionKind)> {
    let beta = || contract_beta(t).map(|r| (r, ReductionKind::Beta));
    let eta = || contract_eta(t).map(|r| (r, ReductionKind::Eta));
    match kind {
        Some(ReductionKind::Beta) => beta(),
        Some(ReductionKind::Eta) => eta(),
        None => beta().or_else(eta),
    }
}

fn rebuild(t: &Term, child: usize, new: Term) -> Term {
    match (t, child) {
        (Term::App(_, a), 0) => Term::App(Box::new(new), a.clone()),
        (Term::App(f, _), 1) => Term::App(f.clone(), Box::new(new)),
        (Term::Abs(n, _, b), 0) => Term::Abs(n.clone(), Box::new(new), b.clone()),
        (Term::Abs(n, d, _), 1) => Term::Abs(n.clone(), d.clone(), Box::new(new)),
        (Term::Prod(n, _, b), 0) => Term::Prod(n.clone(), Box::new(new), b.clone()),
        (Term::Prod(n, d, _), 1) => Term::Prod(n.clone(), d.clone(), Box::new(new)),
        _ => unreachable!("no child {child}"),
    }
}

fn children(t: &Term) -> Vec<&Term> {
    match t {
        Term::Sort(_) | Term::Var(_) => vec![],
        Term::App(a, b) | Term::Abs(_, a, b) | Term::Prod(_, a, b) => vec![a, b],
    }
}

/// Contracts the leftmost-outermost redex of the requested kind (`None`
/// means either kind). Returns the reduct and the path to the redex.
pub fn step(t: &Term, kind: Option<ReductionKind>) -> Option<(Term, Vec<usize>)> {
    if let Some((r, _)) = contract(t, kind) {
        return Some((r, vec![]));
    }
    for (i, c) in children(t).into_iter().enumerate() {
        if let Some((r, mut path)) = step(c, kind) {
            path.insert(0, i);
            return Some((rebuild(t, i, r), path));
        }
    }
    None
}

/// Every one-step reduct, in leftmost-outermost order.
pub fn reducts(t: &Term) -> Vec<(Term, ReductionKind, Vec<usize>)> {
    let mut out = Vec::new();
    if let Some(r) = contract_beta(t) {
        out.push((r, ReductionKind::Beta, vec![]));
    }
    if let Some(r) = contract_eta(t) {
        out.push((r, ReductionKind::Eta, vec![]));
    }
    for (i, c) in children(t).into_iter().enumerate() {
        for (r, k, mut path) in reducts(c) {
            path.insert(0, i);
            out.push((rebuild(t, i, r), k, path));
        }
    }
    out
}

pub fn is_beta_normal(t: &Term) -> bool {
    contract_beta(t).is_none() && children(t).into_iter().all(is_beta_normal)
}

pub fn is_eta_normal(t: &Term) -> bool {
    contract_eta(t).is_none() && children(t).into_iter().all(is_eta_normal)
}

pub fn is_normal(t: &Term) -> bool {
    is_beta_normal(t) && is_eta_normal(t)
}

pub(crate) fn beta_nf(t: &Term, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    match t {
        Term::Sort(_) | Term::Var(_) => Ok(t.clone()),
        Term::Abs(n, d, b) => Ok(Term::Abs(
            n.clone(),
            Box::new(beta_nf(d, fuel)?),
            Box::new(beta_nf(b, fuel)?),
        )),
        Term::Prod(n, d, b) => Ok(Term::Prod(
            n.clone(),
            Box::new(beta_nf(d, fuel)?),
            Box::new(beta_nf(b, fuel)?),
        )),
        Term::App(..) => {
            let mut cur = t.clone();
            loop {
                let (head, args) = cur.spine();
                if let (Term::Abs(_, _, body), Some(first)) = (head, args.first()) {
                    fuel.tick()?;
                    let reduced = body.subst(0, first);
                    let rest: Vec<Term> = args[1..].iter().map(|a| (*a).clone()).collect();
                    let next = Term::apps(reduced, rest);
                    check_size(&next)?;
                    cur = next;
                    continue;
                }
                if !matches!(cur, Term::App(..)) {
                    return beta_nf(&cur, fuel);
                }
                let head = beta_nf(head, fuel)?;
                let args = args
                    .into_iter()
                    .map(|a| beta_nf(a, fuel))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Term::apps(head, args));
            }
        }
    }
}

/// η-normalizes a β-normal term bottom-up.
pub(crate) fn eta_nf(t: &Term, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    match t {
        Term::Sort(_) | Term::Var(_) => Ok(t.clone()),
        Term::App(f, a) => {
            let f = eta_nf(f, fuel)?;
            debug_assert!(
                !matches!(f, Term::Abs(..)),
                "an eta step created a beta redex"
            );
            Ok(Term::app(f, eta_nf(a, fuel)?))
        }
        Term::Prod(n, d, b) => Ok(Term::Prod(
            n.clone(),
            Box::new(eta_nf(d, fuel)?),
            Box::new(eta_nf(b, fuel)?),
        )),
        Term::Abs(n, d, b) => {
            let node = Term::Abs(
                n.clone(),
                Box::new(eta_nf(d, fuel)?),
                Box::new(eta_nf(b, fuel)?),
            );
            match contract_eta(&node) {
                Some(r) => {
                    fuel.tick()?;
                    Ok(r)
                }
                None => Ok(node),
            }
        }
    }
}

pub(crate) fn normalize_with(t: &Term, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    let b = beta_nf(t, fuel)?;
    let n = eta_nf(&b, fuel)?;
    debug_assert!(is_beta_normal(&n));
    Ok(n)
}

/// The βη-normal form.
pub fn normalize(t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    normalize_with(t, &mut Fuel::new(fuel))
}

/// The β-normal form; η-redexes are left in place.
pub fn beta_normalize(t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    beta_nf(t, &mut Fuel::new(fuel))
}

/// Head β-reduction to weak-head normal form.
pub fn whnf(t: &Term, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    loop {
        let (head, args) = cur.spine();
        match (head, args.first()) {
            (Term::Abs(_, _, body), Some(first)) => {
                fuel.tick()?;
                let reduced = body.subst(0, first);
                let rest: Vec<Term> = args[1..].iter().map(|a| (*a).clone()).collect();
                let next = Term::apps(reduced, rest);
                check_size(&next)?;
                cur = next;
            }
            _ => return Ok(cur),
        }
    }
}

/// Head-reduces `t` and returns the product's domain and codomain, if it
/// reaches one.
pub fn whnf_product(t: &Term, fuel: u64) -> Result<Option<(Term, Term)>, FuelExhausted> {
    Ok(whnf_product_named(t, &mut Fuel::new(fuel))?.map(|(_, d, c)| (d, c)))
}

pub(crate) fn whnf_product_named(
    t: &Term,
    fuel: &mut Fuel,
) -> Result<Option<(Name, Term, Term)>, FuelExhausted> {
    match whnf(t, fuel)? {
        Term::Prod(n, d, c) => Ok(Some((n, *d, *c))),
        _ => Ok(None),
    }
}

pub fn convertible(a: &Term, b: &Term, fuel: u64) -> Result<bool, FuelExhausted> {
    if a == b {
        return Ok(true);
    }
    Ok(normalize(a, fuel)? == normalize(b, fuel)?)
}

/// `(h c1 ... cn)` with `h` a variable, or a bare sort.
pub fn is_atomic(t: &Term) -> bool {
    match t.spine() {
        (Term::Var(_), _) => true,
        (Term::Sort(_), args) => args.is_empty(),
        _ => false,
    }
}

/// The decomposition `(x1:P1)...(xn:Pn)P` with `P` atomic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Telescope {
    pub doms: Vec<(Name, Term)>,
    pub head: Term,
}

impl Telescope {
    pub fn len(&self) -> usize {
        self.doms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doms.is_empty()
    }

    /// Rebuilds the product chain.
    pub fn to_term(&self) -> Term {
        self.doms
            .iter()
            .rev()
            .fold(self.head.clone(), |acc, (n, d)| {
                Term::prod(n.clone(), d.clone(), acc)
            })
    }
}

pub fn split_telescope(t: &Term) -> Result<Telescope, NotAType> {
    let mut doms = Vec::new();
    let mut cur = t;
    while let Term::Prod(n, d, c) = cur {
        doms.push((n.clone(), (**d).clone()));
        cur = c;
    }
    if !is_atomic(cur) {
        return Err(NotAType);
    }
    Ok(Telescope {
        doms,
        head: cur.clone(),
    })
}
