//! Executable metatheory: each property checks one law on a generated
//! judgement and reports a counterexample description on failure.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::eta_long::{eta_long_marked, EtaExpander};
use crate::gen::Sample;
use crate::marked::{
    annotate, circ_context, encode_circ, is_marked_normal, marked_normalize, marked_reducts,
    marked_step, star_translate, MarkedContext, MarkedTerm,
};
use crate::order::{descend, descend_prime, measure_violations, predecessors, star_embeds};
use crate::reduce::{is_beta_normal, normalize, reducts, step, ReductionKind};
use crate::syntax::{
    parse_context, parse_marked, parse_term, print_context, print_marked, print_term,
};
use crate::term::{Context, LabeledTerm, Term};
use crate::typing::{Checker, SystemSpec};

/// Node budget of the search for a simulating reduction sequence.
pub const SIMULATION_BUDGET: usize = 500;

/// Longest reduction sequence followed from one term.
const MAX_SEQUENCE: usize = 64;

/// Every property run by `Props::run`, in report order.
pub const PROPERTIES: &[&str] = &[
    "subject-reduction",
    "type-uniqueness",
    "confluence",
    "strengthening",
    "marked-subject-reduction",
    "contents-morphism",
    "beta-lifting",
    "injectivity",
    "encoding-free-vars",
    "encoding-substitution",
    "encoding-simulation",
    "encoding-typing",
    "star-round-trip",
    "eta-long-laws",
    "eta-long-square",
    "descent",
    "embedding",
    "parse-print",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub property: &'static str,
    pub detail: String,
}

type Outcome = Result<(), String>;

fn err<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

pub struct Props {
    pub system: SystemSpec,
    pub fuel: u64,
    ck: Checker,
}

impl Props {
    pub fn new(system: SystemSpec, fuel: u64) -> Self {
        Props {
            system,
            fuel,
            ck: Checker::new(system, fuel),
        }
    }

    /// Runs one property by name.
    pub fn check(&self, property: &str, s: &Sample) -> Outcome {
        match property {
            "subject-reduction" => self.subject_reduction(s),
            "type-uniqueness" => self.type_uniqueness(s),
            "confluence" => self.confluence(s),
            "strengthening" => self.strengthening(s),
            "marked-subject-reduction" => {
                self.with_marked(s, |m, c, a| m.marked_subject_reduction(c, a))
            }
            "contents-morphism" => self.with_marked(s, |m, _, a| m.contents_morphism(a)),
            "beta-lifting" => self.with_marked(s, |m, _, a| m.beta_lifting(a)),
            "injectivity" => self.injectivity(s),
            "encoding-free-vars" => self.with_marked(s, |m, c, a| m.encoding_free_vars(c, a)),
            "encoding-substitution" => self.with_marked(s, |m, c, a| m.encoding_substitution(c, a)),
            "encoding-simulation" => self.with_marked(s, |m, c, a| m.encoding_simulation(c, a)),
            "encoding-typing" => self.with_marked(s, |m, c, a| m.encoding_typing(c, a)),
            "star-round-trip" => self.with_normal(s, |m, n| m.star_round_trip(n)),
            "eta-long-laws" => self.with_normal(s, |m, n| m.eta_long_laws(n).map(|_| ())),
            "eta-long-square" => self.with_normal(s, |m, n| m.eta_long_square(n)),
            "descent" => self.with_normal(s, |m, n| m.descent(n)),
            "embedding" => self.with_normal(s, |m, n| m.embedding(n).map(|_| ())),
            "parse-print" => self.parse_print(s),
            other => Err(format!("unknown property `{other}`")),
        }
    }

    pub fn run(&self, s: &Sample) -> Vec<Failure> {
        PROPERTIES
            .iter()
            .filter_map(|&p| {
                self.check(p, s).err().map(|detail| Failure {
                    property: p,
                    detail,
                })
            })
            .collect()
    }

    fn with_marked(
        &self,
        s: &Sample,
        f: impl FnOnce(&Self, &MarkedContext, &MarkedTerm) -> Outcome,
    ) -> Outcome {
        let (mctx, a) =
            annotate(&s.ctx, &s.term, self.system, self.fuel).map_err(err("annotate"))?;
        f(self, &mctx, &a)
    }

    fn with_normal(&self, s: &Sample, f: impl FnOnce(&Self, &Sample) -> Outcome) -> Outcome {
        f(self, &self.normal_form(s)?)
    }

    /// The sample with its term and type in βη-normal form.
    pub fn normal_form(&self, s: &Sample) -> Result<Sample, String> {
        Ok(Sample {
            ctx: s.ctx.clone(),
            term: self.ck.normalize(&s.term).map_err(err("normalize"))?,
            ty: self.ck.normalize(&s.ty).map_err(err("normalize"))?,
        })
    }

    fn has_type(&self, ctx: &Context, t: &Term, ty: &Term) -> Outcome {
        self.ck
            .check(ctx, t, ty)
            .map_err(|e| format!("{} does not check: {e}", print_term(t, ctx)))
    }

    // -----------------------------------------------------------------
    // Unmarked metatheory

    /// Each term of the leftmost reduction sequence, and every one-step
    /// reduct of the start, keeps the type.
    pub fn subject_reduction(&self, s: &Sample) -> Outcome {
        for (u, _, _) in reducts(&s.term) {
            self.has_type(&s.ctx, &u, &s.ty)?;
        }
        let mut t = s.term.clone();
        for _ in 0..MAX_SEQUENCE {
            let Some((u, _)) = step(&t, None) else { break };
            self.has_type(&s.ctx, &u, &s.ty)?;
            t = u;
        }
        Ok(())
    }

    /// Inference in the sample's system, in the full system and on the
    /// normal form all agree up to conversion with the generated type.
    pub fn type_uniqueness(&self, s: &Sample) -> Outcome {
        let a = self.ck.infer(&s.ctx, &s.term).map_err(err("infer"))?;
        let full = Checker::new(SystemSpec::CC, self.fuel);
        let b = full.infer(&s.ctx, &s.term).map_err(err("infer in cc"))?;
        for (x, y) in [(&a, &b), (&a, &s.ty)] {
            if !self.ck.convertible(x, y).map_err(err("conversion"))? {
                return Err(format!(
                    "types {} and {} differ",
                    print_term(x, &s.ctx),
                    print_term(y, &s.ctx)
                ));
            }
        }
        Ok(())
    }

    /// Every pair of one-step reducts has the same normal form.
    pub fn confluence(&self, s: &Sample) -> Outcome {
        let rs = reducts(&s.term);
        let nfs = rs
            .iter()
            .map(|(u, _, _)| normalize(u, self.fuel).map_err(err("normalize")))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, n) in nfs.iter().enumerate().skip(1) {
            if *n != nfs[0] {
                return Err(format!(
                    "{} and {} do not join",
                    print_term(&rs[0].0, &s.ctx),
                    print_term(&rs[i].0, &s.ctx)
                ));
            }
        }
        Ok(())
    }

    /// Dropping a context entry that nothing depends on preserves typing of
    /// β-normal subjects.
    pub fn strengthening(&self, s: &Sample) -> Outcome {
        if !is_beta_normal(&s.term) {
            return Ok(());
        }
        let entries = s.ctx.entries();
        let n = entries.len();
        'entries: for p in 0..n {
            let index = n - 1 - p;
            if s.term.occurs_free(index) || s.ty.occurs_free(index) {
                continue;
            }
            let mut kept = Vec::with_capacity(n - 1);
            for (q, (name, ty)) in entries.iter().enumerate() {
                if q < p {
                    kept.push((name.clone(), ty.clone()));
                } else if q > p {
                    let local = q - 1 - p;
                    if ty.occurs_free(local) {
                        continue 'entries;
                    }
                    kept.push((name.clone(), ty.shift(-1, local)));
                }
            }
            let ctx = Context::from_entries(kept);
            self.ck
                .wf_context(&ctx)
                .map_err(|e| format!("dropping entry {p}: {e}"))?;
            self.has_type(&ctx, &s.term.shift(-1, index), &s.ty.shift(-1, index))?;
        }
        Ok(())
    }

    // -----------------------------------------------------------------
    // Marked metatheory

    fn marked_type(&self, ctx: &MarkedContext, a: &MarkedTerm) -> Result<MarkedTerm, String> {
        self.ck
            .marked_infer(ctx, a)
            .map_err(|e| format!("{} is ill-typed: {e}", print_marked(a, ctx)))
    }

    /// Marked β and η steps preserve the marked type, along all one-step
    /// reducts and the leftmost sequence.
    pub fn marked_subject_reduction(&self, ctx: &MarkedContext, a: &MarkedTerm) -> Outcome {
        let ty = self.marked_type(ctx, a)?;
        let same = |b: &MarkedTerm| -> Outcome {
            let bty = self.marked_type(ctx, b)?;
            if self
                .ck
                .marked_convertible(&ty, &bty)
                .map_err(err("conversion"))?
            {
                Ok(())
            } else {
                Err(format!(
                    "{} changed type to {}",
                    print_marked(b, ctx),
                    print_marked(&bty, ctx)
                ))
            }
        };
        for (b, _, _) in marked_reducts(a) {
            same(&b)?;
        }
        let mut t = a.clone();
        for _ in 0..MAX_SEQUENCE {
            let Some((u, _)) = marked_step(&t, None) else {
                break;
            };
            same(&u)?;
            t = u;
        }
        Ok(())
    }

    /// A marked step leaves the contents unchanged or contracts one redex.
    pub fn contents_morphism(&self, a: &MarkedTerm) -> Outcome {
        let c = a.contents();
        let unmarked: HashSet<Term> = reducts(&c).into_iter().map(|(u, _, _)| u).collect();
        for (b, _, path) in marked_reducts(a) {
            let d = b.contents();
            if d != c && !unmarked.contains(&d) {
                return Err(format!("marked step at {path:?} is not an unmarked step"));
            }
        }
        Ok(())
    }

    /// Every β-step of the contents is the contents of a marked β-step.
    pub fn beta_lifting(&self, a: &MarkedTerm) -> Outcome {
        let lifted: HashSet<Term> = marked_reducts(a)
            .into_iter()
            .filter(|(_, k, _)| *k == ReductionKind::Beta)
            .map(|(b, _, _)| b.contents())
            .collect();
        for (v, kind, path) in reducts(&a.contents()) {
            if kind == ReductionKind::Beta && !lifted.contains(&v) {
                return Err(format!("β-step at {path:?} has no marked counterpart"));
            }
        }
        Ok(())
    }

    /// The marked normal form of the annotated term and the translation of
    /// the normal form have equal contents, so they are equal.
    pub fn injectivity(&self, s: &Sample) -> Outcome {
        let mut ctx = Context::new();
        for (n, ty) in s.ctx.entries() {
            ctx.push(n.clone(), self.ck.normalize(ty).map_err(err("normalize"))?);
        }
        let nf = self.ck.normalize(&s.term).map_err(err("normalize"))?;
        let (mctx, a, _) =
            star_translate(&ctx, &nf, self.system, self.fuel).map_err(err("star"))?;
        let (_, raw) = annotate(&ctx, &s.term, self.system, self.fuel).map_err(err("annotate"))?;
        let b = marked_normalize(&raw, self.fuel).map_err(err("marked normalize"))?;
        self.marked_type(&mctx, &b)?;
        if a.contents() != b.contents() {
            return Err(format!(
                "normal marked contents {} is not the normal form",
                print_term(&b.contents(), &ctx)
            ));
        }
        if a != b {
            return Err(format!(
                "{} and {} share contents",
                print_marked(&a, &mctx),
                print_marked(&b, &mctx)
            ));
        }
        Ok(())
    }

    // -----------------------------------------------------------------
    // The encoding into unmarked terms

    /// FV(t∘) ⊆ FV(t) ∪ {o}.
    pub fn encoding_free_vars(&self, ctx: &MarkedContext, a: &MarkedTerm) -> Outcome {
        let o = ctx.len();
        let mut allowed = a.free_vars();
        allowed.insert(o);
        let extra: Vec<usize> = encode_circ(a, o)
            .free_vars()
            .into_iter()
            .filter(|v| !allowed.contains(v))
            .collect();
        if extra.is_empty() {
            Ok(())
        } else {
            Err(format!("encoding has extra free variables {extra:?}"))
        }
    }

    /// (t[x:=u])∘ and t∘[x:=u∘] have the same normal form, at every
    /// β-redex of the term and for the outermost context entry.
    pub fn encoding_substitution(&self, ctx: &MarkedContext, a: &MarkedTerm) -> Outcome {
        let o = ctx.len();
        let mut sites = Vec::new();
        let mut all = a.strict_subterms();
        all.push((a.clone(), 0));
        for (t, depth) in all {
            if let MarkedTerm::App(f, u, _) = &t {
                if let MarkedTerm::Abs(_, _, body, _) = &**f {
                    sites.push(((**body).clone(), (**u).clone(), o + depth));
                }
            }
        }
        if o > 0 {
            // the last entry replaced by a variable of the same type one level out
            if let Some(MarkedTerm::Var(..)) = ctx.lookup(1).map(|m| MarkedTerm::var(0, m)) {
                let ty = ctx.lookup(1).expect("checked");
                sites.push((a.clone(), MarkedTerm::var(0, ty), o - 1));
            }
        }
        for (body, u, o) in sites {
            let lhs = encode_circ(&body.subst(0, &u), o);
            let rhs = encode_circ(&body, o + 1).subst(0, &encode_circ(&u, o));
            let l = normalize(&lhs, self.fuel).map_err(err("normalize"))?;
            let r = normalize(&rhs, self.fuel).map_err(err("normalize"))?;
            if l != r {
                return Err("substitution does not commute with the encoding".into());
            }
        }
        Ok(())
    }

    /// Each marked step a ▷ b is matched by a ∘ ▷⁺ b∘.
    pub fn encoding_simulation(&self, ctx: &MarkedContext, a: &MarkedTerm) -> Outcome {
        let o = ctx.len();
        let start = encode_circ(a, o);
        for (b, kind, path) in marked_reducts(a) {
            let target = encode_circ(&b, o);
            // the encodings agree outside the image of the redex position
            let at = encoded_path(a, &path);
            let (s, t) = match (start.at_path(&at), target.at_path(&at)) {
                (Some(s), Some(t)) if replace_at(&start, &at, t.clone()) == target => (s, t),
                _ => (&start, &target),
            };
            if !simulates(s, t, SIMULATION_BUDGET) {
                return Err(format!(
                    "{kind:?} step at {path:?} not simulated within {SIMULATION_BUDGET} terms"
                ));
            }
        }
        Ok(())
    }

    /// Γ∘ ⊢ t∘ : T∘ in the calculus of constructions.
    pub fn encoding_typing(&self, ctx: &MarkedContext, a: &MarkedTerm) -> Outcome {
        let ty = self.marked_type(ctx, a)?;
        let o = ctx.len();
        let cctx = circ_context(ctx);
        let cc = Checker::new(SystemSpec::CC, self.fuel);
        cc.wf_context(&cctx).map_err(err("encoded context"))?;
        let t = encode_circ(a, o);
        let ty = encode_circ(&ty, o);
        cc.check(&cctx, &t, &ty)
            .map_err(|e| format!("{} does not check in cc: {e}", print_term(&t, &cctx)))
    }

    // -----------------------------------------------------------------
    // Laws on normal samples

    /// contents(t*) = t, t* re-checks and is marked-normal.
    pub fn star_round_trip(&self, s: &Sample) -> Outcome {
        let (mctx, a, ty) =
            star_translate(&s.ctx, &s.term, self.system, self.fuel).map_err(err("star"))?;
        if a.contents() != s.term {
            return Err(format!(
                "contents of the translation is {}",
                print_term(&a.contents(), &s.ctx)
            ));
        }
        let got = self.marked_type(&mctx, &a)?;
        if !self
            .ck
            .marked_convertible(&got, &ty)
            .map_err(err("conversion"))?
        {
            return Err("translated type disagrees with marked inference".into());
        }
        if !is_marked_normal(&a) {
            return Err(format!("{} is not normal", print_marked(&a, &mctx)));
        }
        Ok(())
    }

    /// Returns the number of certificates checked.
    pub fn eta_long_laws(&self, s: &Sample) -> Result<usize, String> {
        let mut ex = EtaExpander::new(self.system, self.fuel);
        let e = ex.expand(&s.ctx, &s.term).map_err(err("eta-long"))?;
        let certificates = ex.certificates;
        let shown = print_term(&e, &s.ctx);
        if !is_beta_normal(&e) {
            return Err(format!("{shown} is not β-normal"));
        }
        if normalize(&e, self.fuel).map_err(err("normalize"))? != s.term {
            return Err(format!("{shown} does not normalize back"));
        }
        if ex.expand(&s.ctx, &e).map_err(err("eta-long"))? != e {
            return Err(format!("{shown} is not a fixed point"));
        }
        self.has_type(&s.ctx, &e, &s.ty)?;
        Ok(certificates)
    }

    /// contents(eta_long_marked(t*)) = eta_long(t).
    pub fn eta_long_square(&self, s: &Sample) -> Outcome {
        let (mctx, a, _) =
            star_translate(&s.ctx, &s.term, self.system, self.fuel).map_err(err("star"))?;
        let long =
            eta_long_marked(&mctx, &a, self.system, self.fuel).map_err(err("marked eta-long"))?;
        let plain = EtaExpander::new(self.system, self.fuel)
            .expand(&s.ctx, &s.term)
            .map_err(err("eta-long"))?;
        if long.contents() != plain {
            return Err(format!(
                "{} versus {}",
                print_term(&long.contents(), &s.ctx),
                print_term(&plain, &s.ctx)
            ));
        }
        Ok(())
    }

    /// Both descents terminate without cycles and μ decreases along every
    /// edge of the first.
    pub fn descent(&self, s: &Sample) -> Outcome {
        let lt = LabeledTerm::new(s.ctx.clone(), s.term.clone());
        let d = descend(&lt, self.system, self.fuel).map_err(err("descend"))?;
        let bad = measure_violations(&d, self.system, self.fuel).map_err(err("measure"))?;
        if let Some(&(a, b, ma, mb)) = bad.first() {
            return Err(format!(
                "μ({}) = {mb} is not below μ({}) = {ma}",
                print_term(&d.nodes[b].term, &d.nodes[b].ctx),
                print_term(&d.nodes[a].term, &d.nodes[a].ctx)
            ));
        }
        descend_prime(&lt, self.system, self.fuel).map_err(err("descend along eta-long types"))?;
        Ok(())
    }

    /// Each immediate predecessor translates to a strict subterm of the
    /// translation. Returns the number of pairs checked.
    pub fn embedding(&self, s: &Sample) -> Result<usize, String> {
        let lt = LabeledTerm::new(s.ctx.clone(), s.term.clone());
        let preds = predecessors(&lt, self.system, self.fuel).map_err(err("predecessors"))?;
        for p in &preds {
            if !star_embeds(p, &lt, self.system, self.fuel).map_err(err("star"))? {
                return Err(format!(
                    "translation of {} is not inside that of {}",
                    print_term(&p.term, &p.ctx),
                    print_term(&s.term, &s.ctx)
                ));
            }
        }
        Ok(preds.len())
    }

    /// Printing then parsing gives back the context, the term and its
    /// marked translation.
    pub fn parse_print(&self, s: &Sample) -> Outcome {
        let ctx = parse_context(&print_context(&s.ctx)).map_err(err("context"))?;
        if ctx != s.ctx {
            return Err(format!(
                "context {} does not round-trip",
                print_context(&s.ctx)
            ));
        }
        let shown = print_term(&s.term, &s.ctx);
        if parse_term(&shown, &s.ctx).map_err(err("term"))? != s.term {
            return Err(format!("{shown} does not round-trip"));
        }
        let (mctx, a) =
            annotate(&s.ctx, &s.term, self.system, self.fuel).map_err(err("annotate"))?;
        let shown = print_marked(&a, &mctx);
        if parse_marked(&shown, &mctx.names()).map_err(err("marked term"))? != a {
            return Err(format!("{shown} does not round-trip"));
        }
        Ok(())
    }
}

/// The position in `t∘` of the encoding of the subterm of `t` at `path`.
fn encoded_path(t: &MarkedTerm, path: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = t;
    for &k in path {
        match (cur, k) {
            (MarkedTerm::App(f, _, _), 0) | (MarkedTerm::Abs(_, f, _, _), 0) => {
                out.extend([0, 1, 0]);
                cur = f;
            }
            (MarkedTerm::App(_, x, _), 1) | (MarkedTerm::Abs(_, _, x, _), 1) => {
                out.extend([0, 1, 1]);
                cur = x;
            }
            (MarkedTerm::Prod(_, d, _), 0) => {
                out.push(0);
                cur = d;
            }
            (MarkedTerm::Prod(_, _, c), 1) => {
                out.push(1);
                cur = c;
            }
            (MarkedTerm::Var(_, m), 0)
            | (MarkedTerm::App(_, _, m), 2)
            | (MarkedTerm::Abs(_, _, _, m), 2) => {
                out.push(1);
                cur = m;
            }
            _ => break,
        }
    }
    out
}

fn replace_at(t: &Term, path: &[usize], new: Term) -> Term {
    let Some((&k, rest)) = path.split_first() else {
        return new;
    };
    match (t, k) {
        (Term::App(f, a), 0) => Term::app(replace_at(f, rest, new), (**a).clone()),
        (Term::App(f, a), 1) => Term::app((**f).clone(), replace_at(a, rest, new)),
        (Term::Abs(n, d, b), 0) => {
            Term::Abs(n.clone(), Box::new(replace_at(d, rest, new)), b.clone())
        }
        (Term::Abs(n, d, b), 1) => {
            Term::Abs(n.clone(), d.clone(), Box::new(replace_at(b, rest, new)))
        }
        (Term::Prod(n, d, b), 0) => {
            Term::Prod(n.clone(), Box::new(replace_at(d, rest, new)), b.clone())
        }
        (Term::Prod(n, d, b), 1) => {
            Term::Prod(n.clone(), d.clone(), Box::new(replace_at(b, rest, new)))
        }
        _ => t.clone(),
    }
}

/// `t` with its free variables shifted down as far as possible, so that
/// copies of one term under different numbers of binders coincide.
fn erase(t: &Term) -> Term {
    match t.free_vars().first() {
        Some(&m) if m > 0 => t.shift(-(m as isize), 0),
        _ => t.clone(),
    }
}

fn erased_subterms(t: &Term, out: &mut HashMap<Term, usize>) {
    *out.entry(erase(t)).or_default() += 1;
    match t {
        Term::Sort(_) | Term::Var(_) => {}
        Term::App(f, a) | Term::Abs(_, f, a) | Term::Prod(_, f, a) => {
            erased_subterms(f, out);
            erased_subterms(a, out);
        }
    }
}

/// Contracts outer redexes whose shape does not occur in `target` until
/// none is left.
fn clean_up(mut t: Term, target: &Term, kept: &HashMap<Term, usize>, budget: &mut usize) -> Term {
    for _ in 0..MAX_SEQUENCE {
        if &t == target || *budget == 0 {
            break;
        }
        *budget -= 1;
        let next = reducts(&t)
            .into_iter()
            .find(|(_, _, path)| !kept.contains_key(&erase(t.at_path(path).expect("reduct path"))));
        match next {
            Some((u, _, _)) => t = u,
            None => break,
        }
    }
    t
}

/// Short prefixes of redexes near the root, each followed by a clean-up,
/// visiting at most `budget` terms.
fn directed(start: &Term, target: &Term, mut budget: usize) -> bool {
    const PREFIX: usize = 4;
    const NEAR: usize = 2;
    let mut kept = HashMap::new();
    erased_subterms(target, &mut kept);
    let mut seen = HashSet::from([start.clone()]);
    let mut layer = vec![start.clone()];
    for _ in 0..=PREFIX {
        let mut next = Vec::new();
        for t in layer {
            if budget == 0 {
                return false;
            }
            budget -= 1;
            if &clean_up(t.clone(), target, &kept, &mut budget) == target {
                return true;
            }
            for (u, _, path) in reducts(&t) {
                if path.len() <= NEAR && seen.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    false
}

/// Best-first search for a nonempty reduction sequence from `start` to
/// `target`, exploring at most `budget` terms. Contracting a redex that
/// occurs in the target, up to a shift, at least as often as in the current
/// term costs one; other steps are free. Cheaper terms come first, then
/// longer sequences, then outermost redexes.
pub fn reaches(start: &Term, target: &Term, budget: usize) -> bool {
    search(start, target, budget).is_ok()
}

/// `t ▷⁺ u` found by `directed` or `reaches`, each on half of the budget.
pub fn simulates(start: &Term, target: &Term, budget: usize) -> bool {
    directed(start, target, budget / 2) || search(start, target, budget - budget / 2).is_ok()
}

/// `Ok` or `Err` with the number of terms explored.
fn search(start: &Term, target: &Term, budget: usize) -> Result<usize, usize> {
    let mut kept = HashMap::new();
    erased_subterms(target, &mut kept);
    let mut seen: HashSet<Term> = HashSet::from([start.clone()]);
    let mut terms = vec![start.clone()];
    // (cost, steps, redex depth, index into `terms`)
    let mut queue = BinaryHeap::from([Reverse((0usize, Reverse(0usize), 0usize, 0usize))]);
    let mut explored = 0;
    while let Some(Reverse((cost, Reverse(steps), _, k))) = queue.pop() {
        if explored == budget {
            return Err(explored);
        }
        explored += 1;
        let t = terms[k].clone();
        let mut here = HashMap::new();
        erased_subterms(&t, &mut here);
        for (u, _, path) in reducts(&t) {
            if &u == target {
                return Ok(explored);
            }
            if !seen.insert(u.clone()) {
                continue;
            }
            let r = erase(t.at_path(&path).expect("reduct path"));
            let extra = usize::from(here.get(&r) <= kept.get(&r));
            terms.push(u);
            queue.push(Reverse((
                cost + extra,
                Reverse(steps + 1),
                path.len(),
                terms.len() - 1,
            )));
        }
    }
    Err(explored)
}

/// Repeatedly replaces the sample by a well-typed strict subterm on which
/// `property` still fails.
pub fn shrink(props: &Props, property: &str, s: &Sample) -> Sample {
    let mut cur = s.clone();
    'outer: loop {
        let lt = LabeledTerm::new(cur.ctx.clone(), cur.term.clone());
        let mut subs = lt.strict_subterms();
        subs.sort_by_key(|l| l.term.size());
        for l in subs {
            let Ok(ty) = props.ck.infer(&l.ctx, &l.term) else {
                continue;
            };
            let cand = Sample {
                ctx: l.ctx,
                term: l.term,
                ty,
            };
            if props.check(property, &cand).is_err() {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}
