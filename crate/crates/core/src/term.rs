//! Unmarked terms with de Bruijn indices.
//!
//! Binder names are kept as display hints only. [`Name`] compares equal to
//! every other name, so the derived structural equality on [`Term`] is
//! α-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// The two sorts at the top of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Prop,
    Type,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Prop => f.write_str("Prop"),
            Sort::Type => f.write_str("Type"),
        }
    }
}

/// Display-only binder name. All names are equal and hash identically.
#[derive(Clone, Default)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    /// The name used by `T -> U` sugar.
    pub fn anon() -> Self {
        Name("_".into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_anon(&self) -> bool {
        self.0.is_empty() || self.0 == "_"
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Sort(Sort),
    Var(usize),
    App(Box<Term>, Box<Term>),
    Abs(Name, Box<Term>, Box<Term>),
    Prod(Name, Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("shift would make free index {index} negative")]
pub struct ShiftUnderflow {
    pub index: usize,
}

impl Term {
    pub const PROP: Term = Term::Sort(Sort::Prop);
    pub const TYPE: Term = Term::Sort(Sort::Type);

    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application `(head a1 ... an)`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn abs(hint: impl Into<Name>, dom: Term, body: Term) -> Term {
        Term::Abs(hint.into(), Box::new(dom), Box::new(body))
    }

    pub fn prod(hint: impl Into<Name>, dom: Term, cod: Term) -> Term {
        Term::Prod(hint.into(), Box::new(dom), Box::new(cod))
    }

    /// Non-dependent product `dom -> cod`, where `cod` is scoped like `dom`.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::Prod(Name::anon(), Box::new(dom), Box::new(cod.shift(1, 0)))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Term::Sort(_))
    }

    pub fn as_sort(&self) -> Option<Sort> {
        match self {
            Term::Sort(s) => Some(*s),
            _ => None,
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Sort(_) | Term::Var(_) => 1,
            Term::App(a, b) | Term::Abs(_, a, b) | Term::Prod(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Adjusts free indices `>= cutoff` by `by`.
    ///
    /// Panics on underflow; use [`Term::try_shift`] when the caller cannot
    /// rule it out.
    pub fn shift(&self, by: isize, cutoff: usize) -> Term {
        self.try_shift(by, cutoff)
            .expect("shift underflow on a term known to be safe")
    }

    pub fn try_shift(&self, by: isize, cutoff: usize) -> Result<Term, ShiftUnderflow> {
        if by == 0 {
            return Ok(self.clone());
        }
        Ok(match self {
            Term::Sort(s) => Term::Sort(*s),
            Term::Var(i) => {
                if *i >= cutoff {
                    let j = *i as isize + by;
                    if j < 0 {
                        return Err(ShiftUnderflow { index: *i });
                    }
                    Term::Var(j as usize)
                } else {
                    Term::Var(*i)
                }
            }
            Term::App(f, a) => Term::app(f.try_shift(by, cutoff)?, a.try_shift(by, cutoff)?),
            Term::Abs(n, d, b) => Term::Abs(
                n.clone(),
                Box::new(d.try_shift(by, cutoff)?),
                Box::new(b.try_shift(by, cutoff + 1)?),
            ),
            Term::Prod(n, d, b) => Term::Prod(
                n.clone(),
                Box::new(d.try_shift(by, cutoff)?),
                Box::new(b.try_shift(by, cutoff + 1)?),
            ),
        })
    }

    /// `self[target <- u]`: replaces index `target` by `u` and lowers the
    /// free indices above it by one. `u` is scoped in the context with
    /// `target` removed.
    pub fn subst(&self, target: usize, u: &Term) -> Term {
        self.subst_at(target, u, 0)
    }

    fn subst_at(&self, target: usize, u: &Term, depth: usize) -> Term {
        match self {
            Term::Sort(s) => Term::Sort(*s),
            Term::Var(i) => {
                let i = *i;
                if i < depth {
                    Term::Var(i)
                } else if i == target + depth {
                    u.shift(depth as isize, 0)
                } else if i > target + depth {
                    Term::Var(i - 1)
                } else {
                    Term::Var(i)
                }
            }
            Term::App(f, a) => {
                Term::app(f.subst_at(target, u, depth), a.subst_at(target, u, depth))
            }
            Term::Abs(n, d, b) => Term::Abs(
                n.clone(),
                Box::new(d.subst_at(target, u, depth)),
                Box::new(b.subst_at(target, u, depth + 1)),
            ),
            Term::Prod(n, d, b) => Term::Prod(
                n.clone(),
                Box::new(d.subst_at(target, u, depth)),
                Box::new(b.subst_at(target, u, depth + 1)),
            ),
        }
    }

    pub fn occurs_free(&self, index: usize) -> bool {
        match self {
            Term::Sort(_) => false,
            Term::Var(i) => *i == index,
            Term::App(f, a) => f.occurs_free(index) || a.occurs_free(index),
            Term::Abs(_, d, b) | Term::Prod(_, d, b) => {
                d.occurs_free(index) || b.occurs_free(index + 1)
            }
        }
    }

    /// Free de Bruijn indices, relative to the root of `self`.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(0, &mut out);
        out
    }

    fn collect_free(&self, depth: usize, out: &mut BTreeSet<usize>) {
        match self {
            Term::Sort(_) => {}
            Term::Var(i) => {
                if *i >= depth {
                    out.insert(i - depth);
                }
            }
            Term::App(f, a) => {
                f.collect_free(depth, out);
                a.collect_free(depth, out);
            }
            Term::Abs(_, d, b) | Term::Prod(_, d, b) => {
                d.collect_free(depth, out);
                b.collect_free(depth + 1, out);
            }
        }
    }

    /// True when every free index is below `len`.
    pub fn is_scoped(&self, len: usize) -> bool {
        self.free_vars().iter().all(|&i| i < len)
    }

    /// Splits `(h c1 ... cn)` into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Child term at a path of child indices (0 = function/domain,
    /// 1 = argument/body).
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = match (cur, i) {
                (Term::App(a, _), 0) | (Term::Abs(_, a, _), 0) | (Term::Prod(_, a, _), 0) => a,
                (Term::App(_, b), 1) | (Term::Abs(_, _, b), 1) | (Term::Prod(_, _, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }
}

/// A typing context; the last entry is the innermost binding (index 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(Name, Term)>) -> Self {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Name, Term)] {
        &self.entries
    }

    pub fn push(&mut self, hint: impl Into<Name>, ty: Term) {
        self.entries.push((hint.into(), ty));
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.entries.pop()
    }

    pub fn extended(&self, hint: impl Into<Name>, ty: Term) -> Context {
        let mut c = self.clone();
        c.push(hint, ty);
        c
    }

    /// The first `len` entries.
    pub fn prefix(&self, len: usize) -> Context {
        Context {
            entries: self.entries[..len].to_vec(),
        }
    }

    /// Type of index `i`, shifted into the full context's scope.
    pub fn lookup(&self, i: usize) -> Option<Term> {
        let n = self.entries.len();
        if i >= n {
            return None;
        }
        Some(self.entries[n - 1 - i].1.shift(i as isize + 1, 0))
    }

    pub fn name_of(&self, i: usize) -> Option<&Name> {
        let n = self.entries.len();
        (i < n).then(|| &self.entries[n - 1 - i].0)
    }

    /// Every entry is scoped over the preceding entries only.
    pub fn is_scoped(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, (_, ty))| ty.is_scoped(k))
    }
}

/// A term paired with the context it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTerm {
    pub ctx: Context,
    pub term: Term,
}

impl LabeledTerm {
    pub fn new(ctx: Context, term: Term) -> Self {
        LabeledTerm { ctx, term }
    }

    /// Direct children with their contexts.
    pub fn children(&self) -> Vec<LabeledTerm> {
        match &self.term {
            Term::Sort(_) | Term::Var(_) => vec![],
            Term::App(f, a) => vec![
                LabeledTerm::new(self.ctx.clone(), (**f).clone()),
                LabeledTerm::new(self.ctx.clone(), (**a).clone()),
            ],
            Term::Abs(n, d, b) | Term::Prod(n, d, b) => vec![
                LabeledTerm::new(self.ctx.clone(), (**d).clone()),
                LabeledTerm::new(self.ctx.extended(n.clone(), (**d).clone()), (**b).clone()),
            ],
        }
    }

    /// The set of strict subterms, each labeled with its context.
    pub fn strict_subterms(&self) -> Vec<LabeledTerm> {
        let mut out: Vec<LabeledTerm> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = self.children();
        stack.reverse();
        while let Some(t) = stack.pop() {
            if !seen.insert(t.clone()) {
                continue;
            }
            let mut kids = t.children();
            kids.reverse();
            out.push(t);
            stack.extend(kids);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Term {
        Term::Var(i)
    }

    #[test]
    fn shift_examples() {
        assert_eq!(v(0).shift(1, 0), v(1));
        let bound = Term::abs("x", Term::PROP, v(0));
        assert_eq!(bound.shift(1, 0), bound);
        assert_eq!(Term::app(v(0), v(2)).shift(3, 1), Term::app(v(0), v(5)));
    }

    #[test]
    fn shift_underflow_is_reported() {
        assert_eq!(v(0).try_shift(-1, 0), Err(ShiftUnderflow { index: 0 }));
        assert_eq!(v(3).try_shift(-1, 0), Ok(v(2)));
    }

    #[test]
    fn subst_examples() {
        let a = Term::Var(7);
        assert_eq!(v(0).subst(0, &a), a);
        assert_eq!(
            Term::app(v(1), v(0)).subst(0, &a),
            Term::app(v(0), a.clone())
        );
        let p = Term::PROP;
        let t = Term::abs("y", p.clone(), v(1));
        assert_eq!(t.subst(0, &v(0)), Term::abs("y", p, v(1)));
    }

    #[test]
    fn occurs_free_examples() {
        assert!(v(0).occurs_free(0));
        assert!(!Term::abs("x", Term::PROP, v(0)).occurs_free(0));
        assert!(Term::abs("x", v(0), v(1)).occurs_free(0));
    }

    #[test]
    fn names_do_not_affect_equality() {
        assert_eq!(
            Term::abs("x", Term::PROP, v(0)),
            Term::abs("y", Term::PROP, v(0))
        );
    }

    #[test]
    fn context_lookup_shifts() {
        let mut c = Context::new();
        c.push("P", Term::PROP);
        c.push("a", v(0));
        assert_eq!(c.lookup(0), Some(v(1)));
        assert_eq!(c.lookup(1), Some(Term::PROP));
        assert_eq!(c.lookup(2), None);
    }

    #[test]
    fn subterms_of_sort_is_empty() {
        let t = LabeledTerm::new(Context::new(), Term::PROP);
        assert!(t.strict_subterms().is_empty());
    }

    fn gamma0() -> Context {
        let mut c = Context::new();
        c.push("P", Term::PROP);
        c.push("f", Term::arrow(v(0), v(0)));
        c.push("a", v(1));
        c
    }

    #[test]
    fn subterms_of_application() {
        let c = gamma0();
        let t = LabeledTerm::new(c.clone(), Term::app(v(1), v(0)));
        let subs = t.strict_subterms();
        assert_eq!(subs.len(), 2);
        assert!(subs.contains(&LabeledTerm::new(c.clone(), v(1))));
        assert!(subs.contains(&LabeledTerm::new(c, v(0))));
    }

    #[test]
    fn subterms_of_abstraction() {
        // [x:P](f x) in [P:Prop; f:P->P]
        let mut c = Context::new();
        c.push("P", Term::PROP);
        c.push("f", Term::arrow(v(0), v(0)));
        let body = Term::app(v(1), v(0));
        let t = LabeledTerm::new(c.clone(), Term::abs("x", v(1), body.clone()));
        let inner = c.extended("x", v(1));
        let expected = vec![
            LabeledTerm::new(c, v(1)),
            LabeledTerm::new(inner.clone(), body),
            LabeledTerm::new(inner.clone(), v(1)),
            LabeledTerm::new(inner, v(0)),
        ];
        let subs = t.strict_subterms();
        assert_eq!(subs.len(), expected.len());
        for e in &expected {
            assert!(subs.contains(e), "missing {e:?}");
        }
    }

    #[test]
    fn subterms_deduplicate() {
        let c = gamma0();
        let t = LabeledTerm::new(c, Term::app(v(0), v(0)));
        assert_eq!(t.strict_subterms().len(), 1);
    }
}
