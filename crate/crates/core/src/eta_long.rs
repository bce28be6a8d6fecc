//! Eta-long forms of unmarked and marked normal terms.

use crate::error::KernelError;
use crate::marked::{star_translate, MarkedContext, MarkedTerm};
use crate::order::{measure_marked, Measurer};
use crate::reduce::{is_beta_normal, split_telescope};
use crate::term::{Context, Name, Term};
use crate::typing::{Checker, SystemSpec};

fn binder_hint(n: &Name) -> Name {
    if n.is_anon() {
        Name::new("y")
    } else {
        n.clone()
    }
}

/// Eta-long expansion of unmarked terms. Every atomic clause checks that
/// the measure of each new bound variable is below that of the term.
pub struct EtaExpander {
    ck: Checker,
    measurer: Measurer,
    /// Number of termination certificates checked so far.
    pub certificates: usize,
}

impl EtaExpander {
    pub fn new(system: SystemSpec, fuel: u64) -> Self {
        EtaExpander {
            ck: Checker::new(system, fuel),
            measurer: Measurer::new(system, fuel),
            certificates: 0,
        }
    }

    pub fn expand(&mut self, ctx: &Context, t: &Term) -> Result<Term, KernelError> {
        if !is_beta_normal(t) {
            return Err(KernelError::Precondition(
                "eta-long form needs a beta-normal term".into(),
            ));
        }
        self.ck.infer(ctx, t)?;
        self.go(ctx, t)
    }

    fn go(&mut self, ctx: &Context, t: &Term) -> Result<Term, KernelError> {
        match t {
            Term::Abs(n, u, b) => {
                let inner = ctx.extended(n.clone(), (**u).clone());
                Ok(Term::Abs(
                    n.clone(),
                    Box::new(self.go(ctx, u)?),
                    Box::new(self.go(&inner, b)?),
                ))
            }
            Term::Prod(n, u, b) => {
                let inner = ctx.extended(n.clone(), (**u).clone());
                Ok(Term::Prod(
                    n.clone(),
                    Box::new(self.go(ctx, u)?),
                    Box::new(self.go(&inner, b)?),
                ))
            }
            _ => self.atomic(ctx, t),
        }
    }

    fn atomic(&mut self, ctx: &Context, t: &Term) -> Result<Term, KernelError> {
        let (head, args) = t.spine();
        match head {
            Term::Var(_) => {}
            Term::Sort(_) if args.is_empty() => return Ok(t.clone()),
            _ => {
                return Err(KernelError::Precondition(
                    "head of an application is not a variable".into(),
                ))
            }
        }
        let ty = self.ck.normal_type(ctx, t)?;
        let tel = split_telescope(&ty)
            .map_err(|_| KernelError::Violation("normal type has no atomic head".into()))?;
        let n = tel.len();
        let mu_t = self.measurer.measure(ctx, t)?;
        let mut body = head.shift(n as isize, 0);
        for c in args {
            body = Term::app(body, self.go(ctx, c)?.shift(n as isize, 0));
        }
        let mut inner = ctx.clone();
        let mut doms = Vec::with_capacity(n);
        for (i, (hint, p)) in tel.doms.iter().enumerate() {
            let p_long = self.go(&inner, p)?;
            let hint = binder_hint(hint);
            inner.push(hint.clone(), p.clone());
            let mu_x = self.measurer.measure(&inner, &Term::Var(0))?;
            if mu_x >= mu_t {
                return Err(KernelError::Violation(format!(
                    "bound variable measure {mu_x} is not below {mu_t}"
                )));
            }
            self.certificates += 1;
            let x_long = self.go(&inner, &Term::Var(0))?;
            body = Term::app(body, x_long.shift((n - i - 1) as isize, 0));
            doms.push((hint, p_long));
        }
        for (hint, d) in doms.into_iter().rev() {
            body = Term::Abs(hint, Box::new(d), Box::new(body));
        }
        Ok(body)
    }
}

/// The eta-long form of a β-normal term well-typed in `ctx`.
pub fn eta_long(ctx: &Context, t: &Term, sys: SystemSpec, fuel: u64) -> Result<Term, KernelError> {
    EtaExpander::new(sys, fuel).expand(ctx, t)
}

/// Eta-long expansion of normal marked terms. The telescope of an atomic
/// term is read off its outermost mark.
pub struct MarkedEtaExpander {
    ck: Checker,
    pub certificates: usize,
}

impl MarkedEtaExpander {
    pub fn new(system: SystemSpec, fuel: u64) -> Self {
        MarkedEtaExpander {
            ck: Checker::new(system, fuel),
            certificates: 0,
        }
    }

    pub fn expand(
        &mut self,
        ctx: &MarkedContext,
        t: &MarkedTerm,
    ) -> Result<MarkedTerm, KernelError> {
        self.ck.marked_infer(ctx, t)?;
        self.go(ctx, t)
    }

    fn go(&mut self, ctx: &MarkedContext, t: &MarkedTerm) -> Result<MarkedTerm, KernelError> {
        match t {
            MarkedTerm::Sort(_) => Ok(t.clone()),
            MarkedTerm::Abs(n, u, b, m) => {
                let inner = ctx.extended(n.clone(), (**u).clone());
                Ok(MarkedTerm::abs(
                    n.clone(),
                    self.go(ctx, u)?,
                    self.go(&inner, b)?,
                    self.go(ctx, m)?,
                ))
            }
            MarkedTerm::Prod(n, u, b) => {
                let inner = ctx.extended(n.clone(), (**u).clone());
                Ok(MarkedTerm::prod(
                    n.clone(),
                    self.go(ctx, u)?,
                    self.go(&inner, b)?,
                ))
            }
            MarkedTerm::Var(..) | MarkedTerm::App(..) => self.atomic(ctx, t),
        }
    }

    fn atomic(&mut self, ctx: &MarkedContext, t: &MarkedTerm) -> Result<MarkedTerm, KernelError> {
        let (head, args) = t.spine();
        let MarkedTerm::Var(w, t0) = head else {
            return Err(KernelError::Precondition(
                "head of an application is not a variable".into(),
            ));
        };
        let outer = t.mark().expect("variables and applications carry marks");
        let mut doms: Vec<(Name, &MarkedTerm)> = Vec::new();
        let mut last = outer;
        while let MarkedTerm::Prod(h, d, b) = last {
            doms.push((binder_hint(h), d));
            last = b;
        }
        let n = doms.len();
        let mu_t = measure_marked(t);
        let shift = |x: MarkedTerm, k: usize| x.shift(k as isize, 0);

        let mut body = MarkedTerm::var(*w, self.go(ctx, t0)?);
        for (c, m) in args {
            body = MarkedTerm::app(body, self.go(ctx, c)?, self.go(ctx, m)?);
        }
        body = shift(body, n);

        let mut inner = ctx.clone();
        let mut p_long = Vec::with_capacity(n);
        let mut x_long = Vec::with_capacity(n);
        for (hint, p) in &doms {
            p_long.push(self.go(&inner, p)?);
            inner.push(hint.clone(), (*p).clone());
            let x = MarkedTerm::var(0, p.shift(1, 0));
            let mu_x = measure_marked(&x);
            if mu_x >= mu_t {
                return Err(KernelError::Violation(format!(
                    "bound variable measure {mu_x} is not below {mu_t}"
                )));
            }
            self.certificates += 1;
            x_long.push(self.go(&inner, &x)?);
        }
        // rest[i]: the expanded telescope from binder i + 1 on, scoped
        // under the first i binders
        let mut rest = vec![self.go(&inner, last)?];
        for i in (0..n).rev() {
            let cod = rest.last().expect("nonempty").clone();
            rest.push(MarkedTerm::prod(doms[i].0.clone(), p_long[i].clone(), cod));
        }
        rest.reverse();

        for (i, x) in x_long.into_iter().enumerate() {
            let k = n - i - 1;
            body = MarkedTerm::app(body, shift(x, k), shift(rest[i + 1].clone(), k));
        }
        for i in (0..n).rev() {
            body = MarkedTerm::abs(doms[i].0.clone(), p_long[i].clone(), body, rest[i].clone());
        }
        Ok(body)
    }
}

pub fn eta_long_marked(
    ctx: &MarkedContext,
    t: &MarkedTerm,
    sys: SystemSpec,
    fuel: u64,
) -> Result<MarkedTerm, KernelError> {
    MarkedEtaExpander::new(sys, fuel).expand(ctx, t)
}

/// `t⁺`: the eta-long form of the normal marked translation, with the
/// translated context.
pub fn plus_translate(
    ctx: &Context,
    t: &Term,
    sys: SystemSpec,
    fuel: u64,
) -> Result<(MarkedContext, MarkedTerm), KernelError> {
    let (mctx, a, _) = star_translate(ctx, t, sys, fuel)?;
    let plus = eta_long_marked(&mctx, &a, sys, fuel)?;
    Ok((mctx, plus))
}
