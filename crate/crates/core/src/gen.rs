//! Seeded generation of well-typed terms by building derivations: each
//! step picks a typing rule whose conclusion fits the goal and generates
//! its premises.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::reduce::split_telescope;
use crate::term::{Context, Name, Sort, Term};
use crate::typing::{Checker, SystemSpec};

/// Fuel for each conversion test made while generating.
pub const GEN_FUEL: u64 = 20_000;

/// A generated judgement `ctx ⊢ term : ty`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sample {
    pub ctx: Context,
    pub term: Term,
    pub ty: Term,
}

pub struct Generator {
    rng: ChaCha8Rng,
    sys: SystemSpec,
    ck: Checker,
    /// Nesting bound for generated terms.
    pub depth: u32,
    budget: u32,
}

const BINDERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// First-order matching of `p`, which lives under `k` pattern binders, against
/// `t`. Both sit under `depth` further local binders.
fn matches(p: &Term, t: &Term, k: usize, depth: usize, sub: &mut [Option<Term>]) -> bool {
    match (p, t) {
        (Term::Sort(a), Term::Sort(b)) => a == b,
        (Term::Var(j), _) if *j >= depth && *j < depth + k => {
            let Ok(value) = t.try_shift(-(depth as isize), 0) else {
                return false;
            };
            let slot = &mut sub[j - depth];
            match slot {
                Some(v) => *v == value,
                None => {
                    *slot = Some(value);
                    true
                }
            }
        }
        (Term::Var(j), Term::Var(i)) => {
            if *j < depth {
                i == j
            } else {
                *i + k == *j
            }
        }
        (Term::App(f, a), Term::App(g, b)) => {
            matches(f, g, k, depth, sub) && matches(a, b, k, depth, sub)
        }
        (Term::Abs(_, d, b), Term::Abs(_, e, c)) | (Term::Prod(_, d, b), Term::Prod(_, e, c)) => {
            std::mem::discriminant(p) == std::mem::discriminant(t)
                && matches(d, e, k, depth, sub)
                && matches(b, c, k, depth + 1, sub)
        }
        _ => false,
    }
}

impl Generator {
    pub fn new(sys: SystemSpec, seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sys,
            ck: Checker::new(sys, GEN_FUEL),
            depth: 3,
            budget: 0,
        }
    }

    pub fn system(&self) -> SystemSpec {
        self.sys
    }

    fn nf(&self, t: &Term) -> Option<Term> {
        self.ck.normalize(t).ok()
    }

    fn normal_type_of_var(&self, ctx: &Context, i: usize) -> Option<Term> {
        self.nf(&ctx.lookup(i)?)
    }

    fn binder(&mut self) -> Name {
        Name::new(*BINDERS.choose(&mut self.rng).expect("nonempty"))
    }

    fn tick(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    /// A random well-formed context; it always starts with `A : Prop`.
    pub fn context(&mut self) -> Context {
        let mut ctx = Context::new();
        ctx.push("A", Term::PROP);
        let mut types = ["B", "C", "D", "E"].iter();
        let mut cons = ["F", "G", "H", "K"].iter();
        let mut terms = ["a", "b", "c", "d", "e", "f", "g", "h"].iter();
        let kinds_allowed =
            self.sys.allows(Sort::Prop, Sort::Type) || self.sys.allows(Sort::Type, Sort::Type);
        let extra = self.rng.gen_range(1..=5);
        for _ in 0..extra {
            self.budget = 200;
            let roll = self.rng.gen_range(0..10);
            let entry = if roll < 2 {
                types.next().map(|n| (*n, Term::PROP))
            } else if roll < 4 && kinds_allowed {
                match self.gen_type(&ctx, Sort::Type, 2) {
                    Some(k) if k != Term::PROP => cons.next().map(|n| (*n, k)),
                    _ => None,
                }
            } else {
                self.gen_type(&ctx, Sort::Prop, 2)
                    .and_then(|t| terms.next().map(|n| (*n, t)))
            };
            if let Some((n, ty)) = entry {
                if self.ck.infer_sort(&ctx, &ty).is_ok() {
                    ctx.push(n, ty);
                }
            }
        }
        ctx
    }

    /// A term whose type is the sort `s`.
    pub fn gen_type(&mut self, ctx: &Context, s: Sort, depth: u32) -> Option<Term> {
        if !self.tick() {
            return None;
        }
        let product = depth > 0 && self.rng.gen_bool(0.45);
        if product {
            let doms: Vec<Sort> = [Sort::Prop, Sort::Type]
                .into_iter()
                .filter(|&s1| self.sys.allows(s1, s))
                .collect();
            if let Some(&s1) = doms.choose(&mut self.rng) {
                let dom = self.gen_type(ctx, s1, depth - 1)?;
                let n = self.binder();
                let inner = ctx.extended(n.clone(), dom.clone());
                let cod = self.gen_type(&inner, s, depth - 1)?;
                return Some(Term::Prod(n, Box::new(dom), Box::new(cod)));
            }
        }
        match s {
            Sort::Type => Some(Term::PROP),
            Sort::Prop => {
                // atomic: a type constructor applied to arguments
                let mut heads = Vec::new();
                for i in 0..ctx.len() {
                    let Some(ty) = self.normal_type_of_var(ctx, i) else {
                        continue;
                    };
                    if let Ok(tel) = split_telescope(&ty) {
                        if tel.head == Term::PROP && (depth > 0 || tel.is_empty()) {
                            heads.push((i, tel.len()));
                        }
                    }
                }
                let &(i, n) = heads.choose(&mut self.rng)?;
                self.apply_var(ctx, i, n, &vec![None; n], depth.saturating_sub(1))
            }
        }
    }

    /// `x a1 ... ak`, using `fixed` arguments where given (indexed from the
    /// last argument backwards) and generating the others.
    fn apply_var(
        &mut self,
        ctx: &Context,
        i: usize,
        k: usize,
        fixed: &[Option<Term>],
        depth: u32,
    ) -> Option<Term> {
        let mut t = Term::Var(i);
        let mut ty = self.normal_type_of_var(ctx, i)?;
        for p in 0..k {
            let Term::Prod(_, dom, cod) = ty else {
                return None;
            };
            let arg = match &fixed[k - 1 - p] {
                Some(a) => a.clone(),
                None => self.gen_of_type(ctx, &dom, depth)?,
            };
            ty = self.nf(&cod.subst(0, &arg))?;
            t = Term::app(t, arg);
        }
        Some(t)
    }

    /// A term of the normal type `ty`.
    pub fn gen_of_type(&mut self, ctx: &Context, ty: &Term, depth: u32) -> Option<Term> {
        if !self.tick() {
            return None;
        }
        match ty {
            Term::Sort(s) => {
                if *s == Sort::Type && !self.rng.gen_bool(0.5) {
                    return Some(Term::PROP);
                }
                let target = if *s == Sort::Type {
                    Sort::Type
                } else {
                    Sort::Prop
                };
                return self.gen_type(ctx, target, depth);
            }
            Term::Prod(n, dom, cod) => {
                let roll = self.rng.gen_range(0..10);
                if roll < 6 || depth == 0 {
                    let inner = ctx.extended(n.clone(), (**dom).clone());
                    if let Some(body) = self.gen_of_type(&inner, cod, depth.saturating_sub(1)) {
                        return Some(Term::Abs(self.binder(), dom.clone(), Box::new(body)));
                    }
                } else if roll < 7 {
                    // eta-expanded neutral term
                    if let Some(f) = self.eliminate(ctx, ty, depth - 1) {
                        let x = Term::app(f.shift(1, 0), Term::Var(0));
                        return Some(Term::Abs(self.binder(), dom.clone(), Box::new(x)));
                    }
                }
            }
            _ => {}
        }
        if depth > 0 && self.rng.gen_bool(0.15) {
            if let Some(r) = self.redex(ctx, ty, depth - 1) {
                return Some(r);
            }
        }
        self.eliminate(ctx, ty, depth)
    }

    /// `([y:A] body) a` of type `ty`.
    fn redex(&mut self, ctx: &Context, ty: &Term, depth: u32) -> Option<Term> {
        let s = self.ck.infer_sort(ctx, ty).ok()?;
        if !self.sys.allows(Sort::Prop, s) {
            return None;
        }
        let dom = self.gen_type(ctx, Sort::Prop, depth)?;
        let dom_nf = self.nf(&dom)?;
        let arg = self.gen_of_type(ctx, &dom_nf, depth)?;
        let n = self.binder();
        let inner = ctx.extended(n.clone(), dom.clone());
        let body = self.gen_of_type(&inner, &ty.shift(1, 0), depth)?;
        Some(Term::app(Term::Abs(n, Box::new(dom), Box::new(body)), arg))
    }

    /// A variable applied to arguments so that the result has type `ty`.
    fn eliminate(&mut self, ctx: &Context, ty: &Term, depth: u32) -> Option<Term> {
        let mut candidates = Vec::new();
        for i in 0..ctx.len() {
            let Some(vty) = self.normal_type_of_var(ctx, i) else {
                continue;
            };
            let mut cod = &vty;
            let mut k = 0;
            loop {
                let mut sub = vec![None; k];
                if matches(cod, ty, k, 0, &mut sub) {
                    candidates.push((i, k, sub));
                }
                match cod {
                    Term::Prod(_, _, c) if depth > 0 || k == 0 => {
                        cod = c;
                        k += 1;
                    }
                    _ => break,
                }
                if depth == 0 {
                    break;
                }
            }
        }
        candidates.shuffle(&mut self.rng);
        for (i, k, sub) in candidates.into_iter().take(3) {
            let Some(t) = self.apply_var(ctx, i, k, &sub, depth.saturating_sub(1)) else {
                continue;
            };
            if let Ok(got) = self.ck.infer(ctx, &t) {
                if self.ck.convertible(&got, ty).unwrap_or(false) {
                    return Some(t);
                }
            }
        }
        None
    }

    fn target(&mut self, ctx: &Context) -> Option<Term> {
        let roll = self.rng.gen_range(0..10);
        let t = match roll {
            0 => Term::PROP,
            1 => Term::TYPE,
            2 => self.gen_type(ctx, Sort::Type, 2)?,
            _ => self.gen_type(ctx, Sort::Prop, 2)?,
        };
        self.nf(&t)
    }

    /// A well-typed term, possibly containing redexes.
    pub fn sample(&mut self) -> Sample {
        for _ in 0..64 {
            let ctx = self.context();
            self.budget = 400;
            let Some(target) = self.target(&ctx) else {
                continue;
            };
            let Some(term) = self.gen_of_type(&ctx, &target, self.depth) else {
                continue;
            };
            if let Ok(ty) = self.ck.infer(&ctx, &term) {
                return Sample { ctx, term, ty };
            }
        }
        let mut ctx = Context::new();
        ctx.push("A", Term::PROP);
        Sample {
            ctx,
            term: Term::Var(0),
            ty: Term::PROP,
        }
    }

    /// A well-typed βη-normal term with its normal type.
    pub fn normal_sample(&mut self) -> Sample {
        loop {
            let s = self.sample();
            let (Some(term), Some(ty)) = (self.nf(&s.term), self.nf(&s.ty)) else {
                continue;
            };
            return Sample {
                ctx: s.ctx,
                term,
                ty,
            };
        }
    }
}

/// `per_system` distinct βη-normal samples for each system, in system order.
pub fn normal_corpus(
    systems: &[SystemSpec],
    per_system: usize,
    seed: u64,
) -> Vec<(SystemSpec, Sample)> {
    let mut out = Vec::new();
    for (k, &sys) in systems.iter().enumerate() {
        let mut g = Generator::new(sys, seed.wrapping_mul(31).wrapping_add(k as u64));
        let mut seen = std::collections::HashSet::new();
        let mut tries = 0;
        while seen.len() < per_system && tries < per_system * 20 {
            tries += 1;
            let s = g.normal_sample();
            if seen.insert((s.ctx.clone(), s.term.clone())) {
                out.push((sys, s));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_well_typed_in_every_system() {
        for sys in SystemSpec::all() {
            let mut g = Generator::new(sys, 11);
            let ck = Checker::new(sys, GEN_FUEL);
            for _ in 0..30 {
                let s = g.sample();
                ck.wf_context(&s.ctx).unwrap();
                let ty = ck.infer(&s.ctx, &s.term).unwrap();
                assert!(ck.convertible(&ty, &s.ty).unwrap());
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a: Vec<Sample> = (0..10)
            .map({
                let mut g = Generator::new(SystemSpec::CC, 5);
                move |_| g.sample()
            })
            .collect();
        let b: Vec<Sample> = (0..10)
            .map({
                let mut g = Generator::new(SystemSpec::CC, 5);
                move |_| g.sample()
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn corpus_has_variety() {
        let c = normal_corpus(&[SystemSpec::CC], 40, 3);
        assert!(c.len() >= 30, "only {} samples", c.len());
        assert!(c.iter().any(|(_, s)| matches!(s.term, Term::Abs(..))));
        assert!(c.iter().any(|(_, s)| matches!(s.term, Term::App(..))));
        assert!(c.iter().any(|(_, s)| matches!(s.term, Term::Prod(..))));
    }

    #[test]
    fn matching_assigns_pattern_variables() {
        // pattern P x0 against P a, with P at index 1 outside one binder
        let p = Term::app(Term::Var(2), Term::Var(0));
        let t = Term::app(Term::Var(1), Term::Var(0));
        let mut sub = vec![None];
        assert!(matches(&p, &t, 1, 0, &mut sub));
        assert_eq!(sub[0], Some(Term::Var(0)));
    }
}
