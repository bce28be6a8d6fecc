//! Marked terms: every variable, application and abstraction carries its
//! type. Conversion ignores marks; reduction and substitution do not.

use std::collections::BTreeSet;

use crate::reduce::{self, Fuel, FuelExhausted, ReductionKind, MAX_TERM_SIZE};
use crate::syntax::print_marked_with;
use crate::term::{Context, Name, Sort, Term};
use crate::typing::{Checker, SystemSpec, TypeError, TypeErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MarkedTerm {
    Sort(Sort),
    Var(usize, Box<MarkedTerm>),
    App(Box<MarkedTerm>, Box<MarkedTerm>, Box<MarkedTerm>),
    Abs(Name, Box<MarkedTerm>, Box<MarkedTerm>, Box<MarkedTerm>),
    Prod(Name, Box<MarkedTerm>, Box<MarkedTerm>),
}

impl MarkedTerm {
    pub const PROP: MarkedTerm = MarkedTerm::Sort(Sort::Prop);
    pub const TYPE: MarkedTerm = MarkedTerm::Sort(Sort::Type);

    pub fn var(i: usize, mark: MarkedTerm) -> MarkedTerm {
        MarkedTerm::Var(i, Box::new(mark))
    }

    pub fn app(f: MarkedTerm, a: MarkedTerm, mark: MarkedTerm) -> MarkedTerm {
        MarkedTerm::App(Box::new(f), Box::new(a), Box::new(mark))
    }

    pub fn abs(
        hint: impl Into<Name>,
        dom: MarkedTerm,
        body: MarkedTerm,
        mark: MarkedTerm,
    ) -> MarkedTerm {
        MarkedTerm::Abs(hint.into(), Box::new(dom), Box::new(body), Box::new(mark))
    }

    pub fn prod(hint: impl Into<Name>, dom: MarkedTerm, cod: MarkedTerm) -> MarkedTerm {
        MarkedTerm::Prod(hint.into(), Box::new(dom), Box::new(cod))
    }

    /// Non-dependent product; `cod` is scoped outside the binder.
    pub fn arrow(dom: MarkedTerm, cod: MarkedTerm) -> MarkedTerm {
        MarkedTerm::Prod(Name::anon(), Box::new(dom), Box::new(cod.shift(1, 0)))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, MarkedTerm::Sort(_))
    }

    pub fn mark(&self) -> Option<&MarkedTerm> {
        match self {
            MarkedTerm::Var(_, m) | MarkedTerm::App(_, _, m) | MarkedTerm::Abs(_, _, _, m) => {
                Some(m)
            }
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            MarkedTerm::Sort(_) => 1,
            MarkedTerm::Var(_, m) => 1 + m.size(),
            MarkedTerm::App(a, b, m) | MarkedTerm::Abs(_, a, b, m) => {
                1 + a.size() + b.size() + m.size()
            }
            MarkedTerm::Prod(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// The unmarked term obtained by erasing every mark.
    pub fn contents(&self) -> Term {
        match self {
            MarkedTerm::Sort(s) => Term::Sort(*s),
            MarkedTerm::Var(i, _) => Term::Var(*i),
            MarkedTerm::App(f, a, _) => Term::app(f.contents(), a.contents()),
            MarkedTerm::Abs(n, d, b, _) => {
                Term::Abs(n.clone(), Box::new(d.contents()), Box::new(b.contents()))
            }
            MarkedTerm::Prod(n, d, b) => {
                Term::Prod(n.clone(), Box::new(d.contents()), Box::new(b.contents()))
            }
        }
    }

    pub fn shift(&self, by: isize, cutoff: usize) -> MarkedTerm {
        self.try_shift(by, cutoff)
            .unwrap_or_else(|i| panic!("shift underflow at free index {i}"))
    }

    pub fn try_shift(&self, by: isize, cutoff: usize) -> Result<MarkedTerm, usize> {
        Ok(match self {
            MarkedTerm::Sort(_) => self.clone(),
            MarkedTerm::Var(i, m) => {
                let j = if *i >= cutoff {
                    let j = *i as isize + by;
                    if j < 0 {
                        return Err(*i);
                    }
                    j as usize
                } else {
                    *i
                };
                MarkedTerm::var(j, m.try_shift(by, cutoff)?)
            }
            MarkedTerm::App(f, a, m) => MarkedTerm::app(
                f.try_shift(by, cutoff)?,
                a.try_shift(by, cutoff)?,
                m.try_shift(by, cutoff)?,
            ),
            MarkedTerm::Abs(n, d, b, m) => MarkedTerm::Abs(
                n.clone(),
                Box::new(d.try_shift(by, cutoff)?),
                Box::new(b.try_shift(by, cutoff + 1)?),
                Box::new(m.try_shift(by, cutoff)?),
            ),
            MarkedTerm::Prod(n, d, b) => MarkedTerm::Prod(
                n.clone(),
                Box::new(d.try_shift(by, cutoff)?),
                Box::new(b.try_shift(by, cutoff + 1)?),
            ),
        })
    }

    /// Replaces index `target` by `u`; marks are substituted too and the
    /// mark of a replaced variable is dropped.
    pub fn subst(&self, target: usize, u: &MarkedTerm) -> MarkedTerm {
        self.subst_at(target, u, 0)
    }

    fn subst_at(&self, target: usize, u: &MarkedTerm, depth: usize) -> MarkedTerm {
        match self {
            MarkedTerm::Sort(_) => self.clone(),
            MarkedTerm::Var(i, m) => {
                let k = target + depth;
                if *i == k {
                    u.shift(depth as isize, 0)
                } else {
                    let j = if *i > k { i - 1 } else { *i };
                    MarkedTerm::var(j, m.subst_at(target, u, depth))
                }
            }
            MarkedTerm::App(f, a, m) => MarkedTerm::app(
                f.subst_at(target, u, depth),
                a.subst_at(target, u, depth),
                m.subst_at(target, u, depth),
            ),
            MarkedTerm::Abs(n, d, b, m) => MarkedTerm::Abs(
                n.clone(),
                Box::new(d.subst_at(target, u, depth)),
                Box::new(b.subst_at(target, u, depth + 1)),
                Box::new(m.subst_at(target, u, depth)),
            ),
            MarkedTerm::Prod(n, d, b) => MarkedTerm::Prod(
                n.clone(),
                Box::new(d.subst_at(target, u, depth)),
                Box::new(b.subst_at(target, u, depth + 1)),
            ),
        }
    }

    pub fn occurs_free(&self, index: usize) -> bool {
        self.free_vars().contains(&index)
    }

    /// Free indices, including those occurring only inside marks.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(0, &mut out);
        out
    }

    fn collect_free(&self, depth: usize, out: &mut BTreeSet<usize>) {
        match self {
            MarkedTerm::Sort(_) => {}
            MarkedTerm::Var(i, m) => {
                if *i >= depth {
                    out.insert(i - depth);
                }
                m.collect_free(depth, out);
            }
            MarkedTerm::App(f, a, m) => {
                f.collect_free(depth, out);
                a.collect_free(depth, out);
                m.collect_free(depth, out);
            }
            MarkedTerm::Abs(_, d, b, m) => {
                d.collect_free(depth, out);
                b.collect_free(depth + 1, out);
                m.collect_free(depth, out);
            }
            MarkedTerm::Prod(_, d, b) => {
                d.collect_free(depth, out);
                b.collect_free(depth + 1, out);
            }
        }
    }

    /// Splits `(... (h c1)^T1 ... cn)^Tn` into its head and `(ci, Ti)` pairs.
    pub fn spine(&self) -> (&MarkedTerm, Vec<(&MarkedTerm, &MarkedTerm)>) {
        let mut args = Vec::new();
        let mut head = self;
        while let MarkedTerm::App(f, a, m) = head {
            args.push((&**a, &**m));
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Children in search order: term positions, then the mark.
    fn children(&self) -> Vec<&MarkedTerm> {
        match self {
            MarkedTerm::Sort(_) => vec![],
            MarkedTerm::Var(_, m) => vec![m],
            MarkedTerm::App(a, b, m) | MarkedTerm::Abs(_, a, b, m) => vec![a, b, m],
            MarkedTerm::Prod(_, a, b) => vec![a, b],
        }
    }

    /// Binders introduced above each child, parallel to `children`.
    fn child_binds(&self) -> &'static [usize] {
        match self {
            MarkedTerm::Sort(_) => &[],
            MarkedTerm::Var(..) => &[0],
            MarkedTerm::App(..) => &[0, 0, 0],
            MarkedTerm::Abs(..) => &[0, 1, 0],
            MarkedTerm::Prod(..) => &[0, 1],
        }
    }

    fn replace_child(&self, k: usize, c: MarkedTerm) -> MarkedTerm {
        let mut t = self.clone();
        let slot: &mut MarkedTerm = match (&mut t, k) {
            (MarkedTerm::Var(_, m), 0) => m,
            (MarkedTerm::App(a, _, _), 0)
            | (MarkedTerm::Abs(_, a, _, _), 0)
            | (MarkedTerm::Prod(_, a, _), 0) => a,
            (MarkedTerm::App(_, b, _), 1)
            | (MarkedTerm::Abs(_, _, b, _), 1)
            | (MarkedTerm::Prod(_, _, b), 1) => b,
            (MarkedTerm::App(_, _, m), 2) | (MarkedTerm::Abs(_, _, _, m), 2) => m,
            _ => unreachable!("no child {k}"),
        };
        *slot = c;
        t
    }

    /// All strict subterms paired with the number of binders above them;
    /// marks are included.
    pub fn strict_subterms(&self) -> Vec<(MarkedTerm, usize)> {
        let mut out = Vec::new();
        let mut stack: Vec<(&MarkedTerm, usize)> = vec![(self, 0)];
        while let Some((t, d)) = stack.pop() {
            for (c, b) in t.children().into_iter().zip(t.child_binds()) {
                out.push((c.clone(), d + b));
                stack.push((c, d + b));
            }
        }
        out
    }

    /// Whether `self` occurs as a strict subterm of `other` under exactly
    /// `depth` binders.
    pub fn is_strict_subterm_of(&self, other: &MarkedTerm, depth: usize) -> bool {
        let mut stack: Vec<(&MarkedTerm, usize)> = vec![(other, 0)];
        while let Some((t, d)) = stack.pop() {
            for (c, b) in t.children().into_iter().zip(t.child_binds()) {
                if d + b == depth && c == self {
                    return true;
                }
                stack.push((c, d + b));
            }
        }
        false
    }
}

/// A marked context; the last entry is index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MarkedContext {
    entries: Vec<(Name, MarkedTerm)>,
}

impl MarkedContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(Name, MarkedTerm)>) -> Self {
        MarkedContext { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Name, MarkedTerm)] {
        &self.entries
    }

    pub fn push(&mut self, hint: impl Into<Name>, ty: MarkedTerm) {
        self.entries.push((hint.into(), ty));
    }

    pub fn pop(&mut self) -> Option<(Name, MarkedTerm)> {
        self.entries.pop()
    }

    pub fn extended(&self, hint: impl Into<Name>, ty: MarkedTerm) -> MarkedContext {
        let mut c = self.clone();
        c.push(hint, ty);
        c
    }

    /// Declared type of index `i`, valid in the whole context.
    pub fn lookup(&self, i: usize) -> Option<MarkedTerm> {
        let n = self.entries.len();
        (i < n).then(|| self.entries[n - 1 - i].1.shift(i as isize + 1, 0))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(n, _)| n.as_str().to_string())
            .collect()
    }

    pub fn contents(&self) -> Context {
        Context::from_entries(
            self.entries
                .iter()
                .map(|(n, t)| (n.clone(), t.contents()))
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Reduction

fn contract_beta(t: &MarkedTerm) -> Option<MarkedTerm> {
    match t {
        MarkedTerm::App(f, a, _) => match &**f {
            MarkedTerm::Abs(_, _, body, _) => Some(body.subst(0, a)),
            _ => None,
        },
        _ => None,
    }
}

/// `([x:U](u x^V)^W)^X` with `x` free nowhere in `u`, marks included.
fn contract_eta(t: &MarkedTerm) -> Option<MarkedTerm> {
    match t {
        MarkedTerm::Abs(_, _, body, _) => match &**body {
            MarkedTerm::App(u, x, _)
                if matches!(**x, MarkedTerm::Var(0, _)) && !u.occurs_free(0) =>
            {
                Some(u.shift(-1, 0))
            }
            _ => None,
        },
        _ => None,
    }
}

fn contract(t: &MarkedTerm, kind: Option<ReductionKind>) -> Option<(MarkedTerm, ReductionKind)> {
    if kind != Some(ReductionKind::Eta) {
        if let Some(r) = contract_beta(t) {
            return Some((r, ReductionKind::Beta));
        }
    }
    if kind != Some(ReductionKind::Beta) {
        if let Some(r) = contract_eta(t) {
            return Some((r, ReductionKind::Eta));
        }
    }
    None
}

/// Contracts the leftmost-outermost redex, searching the term before the
/// marks at each node. Returns the reduct and the redex position.
pub fn marked_step(
    t: &MarkedTerm,
    kind: Option<ReductionKind>,
) -> Option<(MarkedTerm, Vec<usize>)> {
    if let Some((r, _)) = contract(t, kind) {
        return Some((r, vec![]));
    }
    for (k, c) in t.children().into_iter().enumerate() {
        if let Some((r, mut path)) = marked_step(c, kind) {
            path.insert(0, k);
            return Some((t.replace_child(k, r), path));
        }
    }
    None
}

/// Every one-step reduct, with its kind and redex position.
pub fn marked_reducts(t: &MarkedTerm) -> Vec<(MarkedTerm, ReductionKind, Vec<usize>)> {
    let mut out = Vec::new();
    for kind in [ReductionKind::Beta, ReductionKind::Eta] {
        if let Some((r, _)) = contract(t, Some(kind)) {
            out.push((r, kind, vec![]));
        }
    }
    for (k, c) in t.children().into_iter().enumerate() {
        for (r, kind, mut path) in marked_reducts(c) {
            path.insert(0, k);
            out.push((t.replace_child(k, r), kind, path));
        }
    }
    out
}

pub fn is_marked_normal(t: &MarkedTerm) -> bool {
    contract(t, None).is_none() && t.children().into_iter().all(is_marked_normal)
}

fn check_size(t: &MarkedTerm) -> Result<(), FuelExhausted> {
    if t.size() > MAX_TERM_SIZE {
        Err(FuelExhausted)
    } else {
        Ok(())
    }
}

fn nf(t: &MarkedTerm, fuel: &mut Fuel) -> Result<MarkedTerm, FuelExhausted> {
    Ok(match t {
        MarkedTerm::Sort(_) => t.clone(),
        MarkedTerm::Var(i, m) => MarkedTerm::var(*i, nf(m, fuel)?),
        MarkedTerm::Prod(n, d, b) => {
            MarkedTerm::Prod(n.clone(), Box::new(nf(d, fuel)?), Box::new(nf(b, fuel)?))
        }
        MarkedTerm::App(f, a, m) => {
            let f = nf(f, fuel)?;
            if let MarkedTerm::Abs(_, _, body, _) = &f {
                fuel.tick()?;
                let r = body.subst(0, a);
                check_size(&r)?;
                return nf(&r, fuel);
            }
            MarkedTerm::app(f, nf(a, fuel)?, nf(m, fuel)?)
        }
        MarkedTerm::Abs(n, d, b, m) => {
            let node = MarkedTerm::abs(n.clone(), nf(d, fuel)?, nf(b, fuel)?, nf(m, fuel)?);
            match contract_eta(&node) {
                Some(r) => {
                    fuel.tick()?;
                    r
                }
                None => node,
            }
        }
    })
}

/// The normal form under β and η, marks included.
pub fn marked_normalize(t: &MarkedTerm, fuel: u64) -> Result<MarkedTerm, FuelExhausted> {
    nf(t, &mut Fuel::new(fuel))
}

/// Head β-reduction on the marked term itself.
pub fn marked_whnf(t: &MarkedTerm, fuel: &mut Fuel) -> Result<MarkedTerm, FuelExhausted> {
    match t {
        MarkedTerm::App(f, a, m) => {
            let f = marked_whnf(f, fuel)?;
            if let MarkedTerm::Abs(_, _, body, _) = &f {
                fuel.tick()?;
                let r = body.subst(0, a);
                check_size(&r)?;
                return marked_whnf(&r, fuel);
            }
            Ok(MarkedTerm::App(Box::new(f), a.clone(), m.clone()))
        }
        _ => Ok(t.clone()),
    }
}

/// Convertibility of the contents; marks are ignored.
pub fn marked_convertible(
    a: &MarkedTerm,
    b: &MarkedTerm,
    fuel: u64,
) -> Result<bool, FuelExhausted> {
    reduce::convertible(&a.contents(), &b.contents(), fuel)
}

// ---------------------------------------------------------------------------
// Typing

fn show(ctx: &MarkedContext, t: &MarkedTerm) -> String {
    print_marked_with(t, &ctx.names())
}

impl Checker {
    pub fn marked_convertible(&self, a: &MarkedTerm, b: &MarkedTerm) -> Result<bool, TypeError> {
        Ok(marked_convertible(a, b, self.fuel)?)
    }

    pub fn marked_wf_context(&self, ctx: &MarkedContext) -> Result<(), TypeError> {
        let mut prefix = MarkedContext::new();
        for (k, (name, ty)) in ctx.entries().iter().enumerate() {
            if let Err(e) = self.marked_infer_sort(&prefix, ty) {
                return Err(TypeError::new(TypeErrorKind::IllFormedContext {
                    entry: k,
                    inner: Box::new(e),
                }));
            }
            prefix.push(name.clone(), ty.clone());
        }
        Ok(())
    }

    pub fn marked_infer_sort(
        &self,
        ctx: &MarkedContext,
        t: &MarkedTerm,
    ) -> Result<Sort, TypeError> {
        let ty = self.marked_infer(ctx, t)?;
        match marked_whnf(&ty, &mut Fuel::new(self.fuel))? {
            MarkedTerm::Sort(s) => Ok(s),
            other => Err(TypeError::new(TypeErrorKind::ExpectedSort {
                found: show(ctx, &other),
            })),
        }
    }

    /// Requires `mark` to be a type convertible to `synthesized`.
    fn check_mark(
        &self,
        ctx: &MarkedContext,
        mark: &MarkedTerm,
        synthesized: &MarkedTerm,
    ) -> Result<(), TypeError> {
        self.marked_infer_sort(ctx, mark).map_err(|e| e.within(2))?;
        if self.marked_convertible(mark, synthesized)? {
            Ok(())
        } else {
            Err(TypeError::new(TypeErrorKind::MarkMismatch {
                mark: show(ctx, mark),
                synthesized: show(ctx, synthesized),
            }))
        }
    }

    /// The type of a marked term; for marked nodes this is the mark itself.
    pub fn marked_infer(
        &self,
        ctx: &MarkedContext,
        t: &MarkedTerm,
    ) -> Result<MarkedTerm, TypeError> {
        match t {
            MarkedTerm::Sort(Sort::Prop) => Ok(MarkedTerm::TYPE),
            MarkedTerm::Sort(Sort::Type) => Err(TypeError::new(TypeErrorKind::TypeHasNoType)),
            MarkedTerm::Var(i, mark) => {
                let declared = ctx
                    .lookup(*i)
                    .ok_or_else(|| TypeError::new(TypeErrorKind::UnboundVariable { index: *i }))?;
                self.check_mark(ctx, mark, &declared)?;
                Ok((**mark).clone())
            }
            MarkedTerm::Prod(n, dom, cod) => {
                let s1 = self.marked_infer_sort(ctx, dom).map_err(|e| e.within(0))?;
                let inner = ctx.extended(n.clone(), (**dom).clone());
                let s2 = self
                    .marked_infer_sort(&inner, cod)
                    .map_err(|e| e.within(1))?;
                if !self.system.allows(s1, s2) {
                    return Err(TypeError::new(TypeErrorKind::RuleNotInSystem { s1, s2 }));
                }
                Ok(MarkedTerm::Sort(s2))
            }
            MarkedTerm::Abs(n, dom, body, mark) => {
                self.marked_infer_sort(ctx, dom).map_err(|e| e.within(0))?;
                let inner = ctx.extended(n.clone(), (**dom).clone());
                let body_ty = self.marked_infer(&inner, body).map_err(|e| e.within(1))?;
                let product = MarkedTerm::Prod(n.clone(), dom.clone(), Box::new(body_ty));
                self.marked_infer_sort(ctx, &product)?;
                self.check_mark(ctx, mark, &product)?;
                Ok((**mark).clone())
            }
            MarkedTerm::App(f, a, mark) => {
                let f_ty = self.marked_infer(ctx, f).map_err(|e| e.within(0))?;
                let MarkedTerm::Prod(_, dom, cod) = marked_whnf(&f_ty, &mut Fuel::new(self.fuel))?
                else {
                    return Err(TypeError::new(TypeErrorKind::NotAFunction {
                        found: show(ctx, &f_ty),
                    })
                    .within(0));
                };
                let a_ty = self.marked_infer(ctx, a).map_err(|e| e.within(1))?;
                if !self.marked_convertible(&dom, &a_ty)? {
                    return Err(TypeError::new(TypeErrorKind::DomainMismatch {
                        expected: show(ctx, &dom),
                        got: show(ctx, &a_ty),
                    })
                    .within(1));
                }
                self.check_mark(ctx, mark, &cod.subst(0, a))?;
                Ok((**mark).clone())
            }
        }
    }
}

pub fn marked_wf_context(ctx: &MarkedContext, sys: SystemSpec) -> Result<(), TypeError> {
    Checker::new(sys, reduce::DEFAULT_FUEL).marked_wf_context(ctx)
}

pub fn marked_infer(
    ctx: &MarkedContext,
    t: &MarkedTerm,
    sys: SystemSpec,
) -> Result<MarkedTerm, TypeError> {
    Checker::new(sys, reduce::DEFAULT_FUEL).marked_infer(ctx, t)
}

// ---------------------------------------------------------------------------
// Encoding into unmarked terms

/// `([z:Prop] body) arg` where `body` is already scoped outside `z`.
fn delayed(body: Term, arg: Term) -> Term {
    Term::app(Term::abs("z", Term::PROP, body.shift(1, 0)), arg)
}

/// `t∘` for a term whose fresh variable `o` has index `o`.
pub fn encode_circ(t: &MarkedTerm, o: usize) -> Term {
    match t {
        MarkedTerm::Sort(s) => Term::Sort(*s),
        MarkedTerm::Var(i, m) => delayed(Term::Var(*i), encode_bar(m, o)),
        MarkedTerm::App(f, a, m) => delayed(
            Term::app(encode_circ(f, o), encode_circ(a, o)),
            encode_bar(m, o),
        ),
        MarkedTerm::Abs(n, d, b, m) => delayed(
            Term::Abs(
                n.clone(),
                Box::new(encode_circ(d, o)),
                Box::new(encode_circ(b, o + 1)),
            ),
            encode_bar(m, o),
        ),
        MarkedTerm::Prod(n, d, b) => Term::Prod(
            n.clone(),
            Box::new(encode_circ(d, o)),
            Box::new(encode_circ(b, o + 1)),
        ),
    }
}

/// Overline: a telescope ending syntactically in `Prop` ends in `o`
/// instead; anything else is encoded by `encode_circ`.
pub fn encode_bar(t: &MarkedTerm, o: usize) -> Term {
    fn ends_in_prop(t: &MarkedTerm) -> bool {
        match t {
            MarkedTerm::Sort(Sort::Prop) => true,
            MarkedTerm::Prod(_, _, b) => ends_in_prop(b),
            _ => false,
        }
    }
    fn go(t: &MarkedTerm, o: usize) -> Term {
        match t {
            MarkedTerm::Prod(n, d, b) => Term::Prod(
                n.clone(),
                Box::new(encode_circ(d, o)),
                Box::new(go(b, o + 1)),
            ),
            _ => Term::Var(o),
        }
    }
    if ends_in_prop(t) {
        go(t, o)
    } else {
        encode_circ(t, o)
    }
}

/// `[o:Prop; x1:P1∘; ...]`.
pub fn circ_context(ctx: &MarkedContext) -> Context {
    let mut out = Context::new();
    out.push("o", Term::PROP);
    for (k, (n, ty)) in ctx.entries().iter().enumerate() {
        out.push(n.clone(), encode_circ(ty, k));
    }
    out
}

// ---------------------------------------------------------------------------
// From unmarked to marked

struct Translator {
    ck: Checker,
    normal: bool,
}

impl Translator {
    fn finish(&self, t: MarkedTerm) -> Result<MarkedTerm, TypeError> {
        if self.normal {
            Ok(marked_normalize(&t, self.ck.fuel)?)
        } else {
            Ok(t)
        }
    }

    fn context(&self, ctx: &Context) -> Result<MarkedContext, TypeError> {
        let mut out = MarkedContext::new();
        let mut prefix = Context::new();
        for (n, ty) in ctx.entries() {
            let (t, _) = self.term(&out, &prefix, ty)?;
            out.push(n.clone(), t);
            prefix.push(n.clone(), ty.clone());
        }
        Ok(out)
    }

    /// Returns the marked term and its marked type.
    fn term(
        &self,
        mctx: &MarkedContext,
        ctx: &Context,
        t: &Term,
    ) -> Result<(MarkedTerm, MarkedTerm), TypeError> {
        match t {
            Term::Sort(Sort::Prop) => Ok((MarkedTerm::PROP, MarkedTerm::TYPE)),
            Term::Sort(Sort::Type) => Err(TypeError::new(TypeErrorKind::TypeHasNoType)),
            Term::Var(i) => {
                let p = mctx
                    .lookup(*i)
                    .ok_or_else(|| TypeError::new(TypeErrorKind::UnboundVariable { index: *i }))?;
                Ok((MarkedTerm::var(*i, p.clone()), p))
            }
            Term::Prod(n, dom, cod) => {
                let (d, _) = self.term(mctx, ctx, dom)?;
                let inner = ctx.extended(n.clone(), (**dom).clone());
                let (c, _) = self.term(&mctx.extended(n.clone(), d.clone()), &inner, cod)?;
                let s2 = self.ck.infer_sort(&inner, cod)?;
                Ok((
                    MarkedTerm::Prod(n.clone(), Box::new(d), Box::new(c)),
                    MarkedTerm::Sort(s2),
                ))
            }
            Term::Abs(n, dom, body) => {
                let (d, _) = self.term(mctx, ctx, dom)?;
                let inner = ctx.extended(n.clone(), (**dom).clone());
                let (b, bty) = self.term(&mctx.extended(n.clone(), d.clone()), &inner, body)?;
                let product = MarkedTerm::Prod(n.clone(), Box::new(d.clone()), Box::new(bty));
                let t = MarkedTerm::Abs(
                    n.clone(),
                    Box::new(d),
                    Box::new(b),
                    Box::new(product.clone()),
                );
                Ok((self.finish(t)?, product))
            }
            Term::App(f, a) => {
                let (fm, fty) = self.term(mctx, ctx, f)?;
                let (am, _) = self.term(mctx, ctx, a)?;
                let head = if self.normal {
                    fty
                } else {
                    marked_whnf(&fty, &mut Fuel::new(self.ck.fuel))?
                };
                let MarkedTerm::Prod(_, _, cod) = head else {
                    return Err(TypeError::new(TypeErrorKind::NotAFunction {
                        found: show(mctx, &head),
                    }));
                };
                let mark = cod.subst(0, &am);
                let t = MarkedTerm::app(fm, am, mark.clone());
                Ok((self.finish(t)?, self.finish(mark)?))
            }
        }
    }
}

/// `(Δ*, a*, A*)`: the normal marked translation of a well-typed term, its
/// context and its type.
pub fn star_translate(
    ctx: &Context,
    t: &Term,
    sys: SystemSpec,
    fuel: u64,
) -> Result<(MarkedContext, MarkedTerm, MarkedTerm), TypeError> {
    let ck = Checker::new(sys, fuel);
    ck.wf_context(ctx)?;
    ck.infer(ctx, t)?;
    let tr = Translator { ck, normal: true };
    let mctx = tr.context(ctx)?;
    let (a, ty) = tr.term(&mctx, ctx, t)?;
    Ok((mctx, a, ty))
}

/// Marks every node with its structural type, without normalizing; the
/// result is well-typed and has `t` as contents.
pub fn annotate(
    ctx: &Context,
    t: &Term,
    sys: SystemSpec,
    fuel: u64,
) -> Result<(MarkedContext, MarkedTerm), TypeError> {
    let ck = Checker::new(sys, fuel);
    ck.wf_context(ctx)?;
    ck.infer(ctx, t)?;
    let tr = Translator { ck, normal: false };
    let mctx = tr.context(ctx)?;
    let (a, _) = tr.term(&mctx, ctx, t)?;
    Ok((mctx, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_context, parse_marked, parse_term};
    use crate::typing::named_system;

    const FUEL: u64 = reduce::DEFAULT_FUEL;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn pm(src: &str, ns: &[&str]) -> MarkedTerm {
        parse_marked(src, &names(ns)).unwrap()
    }

    const COUNTER: &str = "([x:T^(Prop)] (y^((([z:T^(Prop)] T^(Prop) -> T^(Prop))^(T^(Prop) -> Prop) x^(T^(Prop)))^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))";

    fn counter_ctx() -> MarkedContext {
        let mut c = MarkedContext::new();
        c.push("T", MarkedTerm::PROP);
        let t = MarkedTerm::var(0, MarkedTerm::PROP);
        c.push("y", MarkedTerm::arrow(t.clone(), t));
        c
    }

    #[test]
    fn contents_erases_marks() {
        let x = MarkedTerm::var(0, MarkedTerm::PROP);
        assert_eq!(x.contents(), Term::Var(0));
        let t = pm(COUNTER, &["T", "y"]);
        let want = parse_term(
            "[x:T] (y x)",
            &parse_context("T : Prop; y : T -> T").unwrap(),
        )
        .unwrap();
        assert_eq!(t.contents(), want);
        let p = MarkedTerm::prod("_", MarkedTerm::var(0, MarkedTerm::PROP), MarkedTerm::PROP);
        assert_eq!(p.contents(), Term::prod("_", Term::Var(0), Term::PROP));
    }

    #[test]
    fn counterexample_reduces_through_its_marks() {
        let t = pm(COUNTER, &["T", "y"]);
        assert!(contract_eta(&t).is_none());
        assert!(reduce::step(&t.contents(), Some(ReductionKind::Eta)).is_some());
        let (r, path) = marked_step(&t, None).unwrap();
        assert!(!path.is_empty());
        let mid = pm(
            "([x:T^(Prop)] (y^(T^(Prop) -> T^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))",
            &["T", "y"],
        );
        assert_eq!(r, mid);
        let (last, path) = marked_step(&mid, None).unwrap();
        assert!(path.is_empty());
        let y = pm("y^(T^(Prop) -> T^(Prop))", &["T", "y"]);
        assert_eq!(last, y);
        assert_eq!(marked_normalize(&t, FUEL).unwrap(), y);
        assert_eq!(last.contents(), Term::Var(0));
        let ty = marked_infer(&counter_ctx(), &t, SystemSpec::CC).unwrap();
        let y_ty = counter_ctx().lookup(0).unwrap();
        assert!(marked_convertible(&ty, &y_ty, FUEL).unwrap());
    }

    #[test]
    fn counterexample_prints_as_parsed() {
        assert_eq!(
            print_marked_with(&pm(COUNTER, &["T", "y"]), &names(&["T", "y"])),
            COUNTER
        );
    }

    #[test]
    fn conversion_ignores_marks() {
        let a = MarkedTerm::var(0, MarkedTerm::PROP);
        let b = MarkedTerm::var(0, MarkedTerm::var(3, MarkedTerm::PROP));
        assert!(marked_convertible(&a, &b, FUEL).unwrap());
        assert!(!marked_convertible(&MarkedTerm::PROP, &MarkedTerm::TYPE, FUEL).unwrap());
        assert!(marked_step(&MarkedTerm::PROP, None).is_none());
    }

    #[test]
    fn mark_mismatch() {
        let mut ctx = MarkedContext::new();
        ctx.push("T", MarkedTerm::PROP);
        ctx.push("U", MarkedTerm::PROP);
        ctx.push("x", MarkedTerm::var(1, MarkedTerm::PROP));
        let bad = MarkedTerm::var(0, MarkedTerm::var(1, MarkedTerm::PROP));
        let e = marked_infer(&ctx, &bad, SystemSpec::STLC).unwrap_err();
        assert_eq!(e.kind_name(), "MarkMismatch");
        let good = MarkedTerm::var(0, MarkedTerm::var(2, MarkedTerm::PROP));
        assert!(marked_infer(&ctx, &good, SystemSpec::STLC).is_ok());
        let e = marked_infer(
            &ctx,
            &MarkedTerm::var(7, MarkedTerm::PROP),
            SystemSpec::STLC,
        )
        .unwrap_err();
        assert_eq!(e.kind_name(), "UnboundVariable");
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(encode_circ(&MarkedTerm::PROP, 0), Term::PROP);
        // x^T in [o; T:Prop; x:T]: ([z:Prop] x T^bar)
        let x = MarkedTerm::var(0, MarkedTerm::var(1, MarkedTerm::PROP));
        let tbar = encode_bar(&MarkedTerm::var(1, MarkedTerm::PROP), 2);
        assert_eq!(
            encode_circ(&x, 2),
            Term::app(Term::abs("z", Term::PROP, Term::Var(1)), tbar)
        );
        let p = MarkedTerm::prod("x", MarkedTerm::var(0, MarkedTerm::PROP), MarkedTerm::PROP);
        let a1 = encode_circ(&MarkedTerm::var(0, MarkedTerm::PROP), 1);
        assert_eq!(encode_bar(&p, 1), Term::prod("x", a1, Term::Var(2)));
        assert_eq!(encode_bar(&MarkedTerm::PROP, 4), Term::Var(4));
        assert_eq!(circ_context(&MarkedContext::new()).len(), 1);
        let mut c = MarkedContext::new();
        c.push("T", MarkedTerm::PROP);
        let cc = circ_context(&c);
        assert_eq!(cc.entries()[1].1, Term::PROP);
    }

    #[test]
    fn encoded_counterexample_checks_in_cc() {
        let t = pm(COUNTER, &["T", "y"]);
        let ctx = counter_ctx();
        let ty = marked_infer(&ctx, &t, SystemSpec::CC).unwrap();
        let cctx = circ_context(&ctx);
        let o = ctx.len();
        let ck = Checker::new(SystemSpec::CC, FUEL);
        ck.wf_context(&cctx).unwrap();
        ck.check(&cctx, &encode_circ(&t, o), &encode_circ(&ty, o))
            .unwrap();
    }

    #[test]
    fn star_examples() {
        let g = parse_context("P : Prop; a : P").unwrap();
        let (mctx, a, ty) = star_translate(&g, &Term::Var(0), SystemSpec::STLC, FUEL).unwrap();
        let p = MarkedTerm::var(1, MarkedTerm::PROP);
        assert_eq!(a, MarkedTerm::var(0, p.clone()));
        assert_eq!(ty, p);
        assert_eq!(mctx.contents(), g);
        let (_, a, ty) = star_translate(&g, &Term::PROP, SystemSpec::STLC, FUEL).unwrap();
        assert_eq!((a, ty), (MarkedTerm::PROP, MarkedTerm::TYPE));
    }

    #[test]
    fn star_of_beta_normal_term_has_same_contents() {
        let sys = named_system("cc").unwrap();
        let g = parse_context("A : Prop; F : A -> Prop; g : (x:A) F x; c : A").unwrap();
        for src in [
            "[x:A] F x -> F x",
            "g c",
            "(x:A) F x",
            "[B:Prop][y:B] y",
            "F",
        ] {
            let t = parse_term(src, &g).unwrap();
            let (mctx, m, ty) = star_translate(&g, &t, sys, FUEL).unwrap();
            assert_eq!(m.contents(), t, "{src}");
            assert!(is_marked_normal(&m));
            let got = marked_infer(&mctx, &m, sys).unwrap();
            assert!(marked_convertible(&got, &ty, FUEL).unwrap());
        }
    }

    #[test]
    fn star_normalizes_redexes() {
        let g = parse_context("P : Prop; a : P").unwrap();
        let t = parse_term("([x:P] x) a", &g).unwrap();
        let (_, m, _) = star_translate(&g, &t, SystemSpec::STLC, FUEL).unwrap();
        assert_eq!(m.contents(), Term::Var(0));
        let (mctx, ann) = annotate(&g, &t, SystemSpec::STLC, FUEL).unwrap();
        assert_eq!(ann.contents(), t);
        assert!(marked_infer(&mctx, &ann, SystemSpec::STLC).is_ok());
    }

    #[test]
    fn subterm_search_includes_marks() {
        let f = pm("f^(P^(Prop) -> P^(Prop))", &["P", "f"]);
        let p = pm("P^(Prop)", &["P", "f"]);
        assert!(p.is_strict_subterm_of(&f, 0));
        assert!(!p.is_strict_subterm_of(&p, 0));
        assert!(!p.is_strict_subterm_of(&f, 1));
    }
}
