use std::collections::{BTreeSet, HashSet};

use cube_core::eta_long::{eta_long, eta_long_marked, plus_translate};
use cube_core::marked::*;
use cube_core::order::*;
use cube_core::reduce::*;
use cube_core::syntax::*;
use cube_core::term::{Context, LabeledTerm, Sort, Term};
use cube_core::typing::*;

const FUEL: u64 = DEFAULT_FUEL;

fn g0() -> Context {
    parse_context("P : Prop; f : P -> P; a : P").unwrap()
}

fn t(src: &str, ctx: &Context) -> Term {
    parse_term(src, ctx).unwrap()
}

fn sys(name: &str) -> SystemSpec {
    named_system(name).unwrap()
}

fn v(i: usize) -> Term {
    Term::var(i)
}

// ---------------------------------------------------------------------------
// de Bruijn operations

#[test]
fn shift_respects_cutoff() {
    assert_eq!(v(0).shift(1, 0), v(1));
    let id = Term::abs("x", Term::PROP, v(0));
    assert_eq!(id.shift(1, 0), id);
    assert_eq!(Term::app(v(0), v(2)).shift(3, 1), Term::app(v(0), v(5)));
}

#[test]
fn substitution_examples() {
    let a = v(7);
    assert_eq!(v(0).subst(0, &a), a);
    assert_eq!(
        Term::app(v(1), v(0)).subst(0, &a),
        Term::app(v(0), a.clone())
    );
    let lam = Term::abs("y", v(3), v(1));
    assert_eq!(lam.subst(0, &v(0)), Term::abs("y", v(2), v(1)));
}

/// Named terms with capture-avoiding substitution by renaming.
mod named {
    use super::*;

    #[derive(Debug, Clone)]
    pub enum N {
        Sort(Sort),
        Var(String),
        App(Box<N>, Box<N>),
        Abs(String, Box<N>, Box<N>),
    }

    pub fn from_db(t: &Term, names: &mut Vec<String>, fresh: &mut usize) -> N {
        match t {
            Term::Sort(s) => N::Sort(*s),
            Term::Var(i) => N::Var(names[names.len() - 1 - i].clone()),
            Term::App(f, a) => N::App(
                Box::new(from_db(f, names, fresh)),
                Box::new(from_db(a, names, fresh)),
            ),
            Term::Abs(_, d, b) | Term::Prod(_, d, b) => {
                let d = from_db(d, names, fresh);
                *fresh += 1;
                let x = format!("b{fresh}");
                names.push(x.clone());
                let b = from_db(b, names, fresh);
                names.pop();
                N::Abs(x, Box::new(d), Box::new(b))
            }
        }
    }

    pub fn to_db(t: &N, names: &mut Vec<String>) -> Term {
        match t {
            N::Sort(s) => Term::Sort(*s),
            N::Var(x) => v(names.iter().rev().position(|n| n == x).expect("bound")),
            N::App(f, a) => Term::app(to_db(f, names), to_db(a, names)),
            N::Abs(x, d, b) => {
                let d = to_db(d, names);
                names.push(x.clone());
                let b = to_db(b, names);
                names.pop();
                Term::abs(x.as_str(), d, b)
            }
        }
    }

    fn free(t: &N, out: &mut BTreeSet<String>) {
        match t {
            N::Sort(_) => {}
            N::Var(x) => {
                out.insert(x.clone());
            }
            N::App(f, a) => {
                free(f, out);
                free(a, out);
            }
            N::Abs(x, d, b) => {
                free(d, out);
                let mut inner = BTreeSet::new();
                free(b, &mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    fn rename(t: &N, from: &str, to: &str) -> N {
        subst(t, from, &N::Var(to.to_string()))
    }

    pub fn subst(t: &N, x: &str, u: &N) -> N {
        match t {
            N::Sort(_) => t.clone(),
            N::Var(y) if y == x => u.clone(),
            N::Var(_) => t.clone(),
            N::App(f, a) => N::App(Box::new(subst(f, x, u)), Box::new(subst(a, x, u))),
            N::Abs(y, d, b) => {
                let d = subst(d, x, u);
                if y == x {
                    return N::Abs(y.clone(), Box::new(d), b.clone());
                }
                let mut fv = BTreeSet::new();
                free(u, &mut fv);
                if fv.contains(y) {
                    let z = format!("{y}'");
                    let b = rename(b, y, &z);
                    N::Abs(z, Box::new(d), Box::new(subst(&b, x, u)))
                } else {
                    N::Abs(y.clone(), Box::new(d), Box::new(subst(b, x, u)))
                }
            }
        }
    }
}

/// Products are mapped to abstractions by the oracle; compare on terms
/// without products.
fn no_products(t: &Term) -> bool {
    match t {
        Term::Prod(..) => false,
        Term::Sort(_) | Term::Var(_) => true,
        Term::App(f, a) | Term::Abs(_, f, a) => no_products(f) && no_products(a),
    }
}

#[test]
fn substitution_agrees_with_named_oracle() {
    use named::*;
    let names: Vec<String> = (0..4).map(|i| format!("g{i}")).collect();
    let ctx = parse_context("g0 : Prop; g1 : Prop; g2 : Prop; g3 : Prop").unwrap();
    let outer = ctx.prefix(3);
    let bodies = [
        "[x:g0] (g1 x)",
        "[x:g0] [y:g1] (x y g3)",
        "(g2 ([x:g3] (x g3)))",
        "[x:g0] [g1:g1] (g1 x g3)",
        "[g2:g1] (g3 g2)",
        "[x:g3] [y:x] (g3 y)",
    ];
    let args = ["g2", "[y:g0] (y g1)", "(g1 g2)", "g1"];
    for b in bodies {
        let body = t(b, &ctx);
        assert!(no_products(&body));
        for u in args {
            let u = t(u, &outer);
            // g3 is replaced by u, which lives in the first three entries
            let mut fresh = 0;
            let nb = from_db(&body, &mut names.clone(), &mut fresh);
            let nu = from_db(&u, &mut names[..3].to_vec(), &mut fresh);
            let expected = to_db(&subst(&nb, "g3", &nu), &mut names[..3].to_vec());
            assert_eq!(body.subst(0, &u), expected, "{b}");
        }
    }
}

#[test]
fn occurs_free_examples() {
    assert!(v(0).occurs_free(0));
    assert!(!Term::abs("x", Term::PROP, v(0)).occurs_free(0));
    assert!(Term::abs("x", v(0), v(1)).occurs_free(0));
}

#[test]
fn subterm_sets() {
    let empty = LabeledTerm::new(Context::new(), Term::PROP);
    assert!(empty.strict_subterms().is_empty());
    let g = g0();
    let fa = LabeledTerm::new(g.clone(), t("f a", &g));
    let got: Vec<String> = fa
        .strict_subterms()
        .iter()
        .map(|l| print_term(&l.term, &l.ctx))
        .collect();
    assert_eq!(got, ["f", "a"]);
    let lam = LabeledTerm::new(g.clone(), t("[x:P] (f x)", &g));
    let subs = lam.strict_subterms();
    let inner = g.extended("x", t("P", &g));
    let want = [
        LabeledTerm::new(g.clone(), t("P", &g)),
        LabeledTerm::new(inner.clone(), t("f x", &inner)),
        LabeledTerm::new(inner.clone(), t("f", &inner)),
        LabeledTerm::new(inner.clone(), t("x", &inner)),
    ];
    assert_eq!(subs.len(), 4);
    for w in &want {
        assert!(subs.contains(w), "{}", print_term(&w.term, &w.ctx));
    }
}

// ---------------------------------------------------------------------------
// Reduction

#[test]
fn single_steps() {
    let g = g0();
    let (r, _) = step(&t("([x:P] x) a", &g), Some(ReductionKind::Beta)).unwrap();
    assert_eq!(r, t("a", &g));
    let (r, _) = step(&t("[x:P] (f x)", &g), Some(ReductionKind::Eta)).unwrap();
    assert_eq!(r, t("f", &g));
    let h = parse_context("P : Prop; h : P -> P -> P").unwrap();
    assert!(step(&t("[x:P] (h x x)", &h), Some(ReductionKind::Eta)).is_none());
}

/// Every normal form reachable in the reduction graph.
fn reachable_normal_forms(start: &Term) -> HashSet<Term> {
    let mut seen = HashSet::from([start.clone()]);
    let mut todo = vec![start.clone()];
    let mut out = HashSet::new();
    while let Some(x) = todo.pop() {
        let rs = reducts(&x);
        if rs.is_empty() {
            out.insert(x);
        }
        for (u, _, _) in rs {
            if seen.insert(u.clone()) {
                todo.push(u);
            }
        }
    }
    out
}

#[test]
fn normalize_matches_reduction_graph() {
    let g = g0();
    let start = t("([x:P] (f x)) a", &g);
    let nfs = reachable_normal_forms(&start);
    assert_eq!(nfs, HashSet::from([t("f a", &g)]));
    assert_eq!(normalize(&start, FUEL).unwrap(), t("f a", &g));
    assert_eq!(normalize(&Term::PROP, FUEL).unwrap(), Term::PROP);
    assert_eq!(normalize(&t("[x:P] (f x)", &g), FUEL).unwrap(), t("f", &g));
}

#[test]
fn beta_normalize_keeps_eta_redexes() {
    let g = g0();
    let e = t("[x:P] (f x)", &g);
    assert_eq!(beta_normalize(&e, FUEL).unwrap(), e);
    assert_eq!(
        beta_normalize(&t("([x:P] x) a", &g), FUEL).unwrap(),
        t("a", &g)
    );
    assert_eq!(
        beta_normalize(&t("([x:P] x) (([x:P] x) a)", &g), FUEL).unwrap(),
        t("a", &g)
    );
}

#[test]
fn whnf_products() {
    let g = g0();
    let (d, c) = whnf_product(&t("P -> P", &g), FUEL).unwrap().unwrap();
    assert_eq!((d, c), (t("P", &g), t("P", &g).shift(1, 0)));
    let (d, c) = whnf_product(&t("([X:Prop] X -> X) P", &g), FUEL)
        .unwrap()
        .unwrap();
    assert_eq!((d, c), (t("P", &g), t("P", &g).shift(1, 0)));
    assert!(whnf_product(&Term::PROP, FUEL).unwrap().is_none());
}

#[test]
fn conversion() {
    let g = g0();
    assert!(convertible(&Term::PROP, &Term::PROP, FUEL).unwrap());
    assert!(convertible(&t("[x:P] (f x)", &g), &t("f", &g), FUEL).unwrap());
    assert!(!convertible(&Term::PROP, &t("Prop -> Prop", &g), FUEL).unwrap());
}

#[test]
fn atomic_terms_and_telescopes() {
    let h = parse_context("P : Prop; f : P -> P -> P; a : P; b : P").unwrap();
    assert!(is_atomic(&t("f a b", &h)));
    assert!(is_atomic(&Term::PROP));
    assert!(!is_atomic(&Term::app(Term::PROP, t("a", &h))));
    let tel = split_telescope(&t("P", &h)).unwrap();
    assert!(tel.is_empty());
    let tel = split_telescope(&t("P -> Prop", &h)).unwrap();
    assert_eq!(tel.len(), 1);
    assert_eq!(tel.head, Term::PROP);
    // a Type-sorted term's normal type ends in Prop
    let k = parse_context("F : Prop -> Prop -> Prop").unwrap();
    let ty = Checker::new(SystemSpec::CC, FUEL)
        .normal_type(&k, &t("F", &k))
        .unwrap();
    assert_eq!(split_telescope(&ty).unwrap().head, Term::PROP);
}

// ---------------------------------------------------------------------------
// Typing

#[test]
fn context_formation() {
    for s in SystemSpec::all() {
        wf_context(&Context::new(), s).unwrap();
    }
    wf_context(&parse_context("P : Prop").unwrap(), sys("stlc")).unwrap();
    let e = wf_context(&parse_context("x : Type").unwrap(), sys("cc")).unwrap_err();
    assert_eq!(e.root_cause().kind, TypeErrorKind::TypeHasNoType);
}

#[test]
fn inference_examples() {
    let g = g0();
    assert_eq!(infer(&g, &t("f a", &g), sys("stlc")).unwrap(), t("P", &g));
    let e = Context::new();
    let id = t("[A:Prop] [x:A] x", &e);
    assert_eq!(infer(&e, &id, sys("f")).unwrap(), t("(A:Prop) A -> A", &e));
    let err = infer(&e, &id, sys("stlc")).unwrap_err();
    assert_eq!(
        err.kind,
        TypeErrorKind::RuleNotInSystem {
            s1: Sort::Type,
            s2: Sort::Prop
        }
    );
    let err = infer(&e, &Term::TYPE, sys("cc")).unwrap_err();
    assert_eq!(err.kind, TypeErrorKind::TypeHasNoType);
}

#[test]
fn checking_uses_conversion() {
    let g = g0();
    let s = sys("cc");
    check(&g, &t("a", &g), &t("P", &g), s).unwrap();
    check(&g, &t("a", &g), &t("([X:Prop] X) P", &g), s).unwrap();
    let q = parse_context("P : Prop; f : P -> P; a : P; Q : Prop").unwrap();
    let err = check(&q, &t("a", &q), &t("Q", &q), s).unwrap_err();
    assert_eq!(err.kind_name(), "DomainMismatch");
}

#[test]
fn system_names() {
    assert_eq!(sys("stlc").pairs(), [(Sort::Prop, Sort::Prop)]);
    assert_eq!(sys("cc").pairs().len(), 4);
    assert_eq!(
        sys("f").pairs(),
        [(Sort::Prop, Sort::Prop), (Sort::Type, Sort::Prop)]
    );
    assert_eq!(sys("PP,TP"), sys("f"));
}

// ---------------------------------------------------------------------------
// Marked terms

fn counter_ctx() -> MarkedContext {
    parse_marked_context("T : Prop; y : T^(Prop) -> T^(Prop)").unwrap()
}

fn pm(src: &str, ctx: &MarkedContext) -> MarkedTerm {
    parse_marked(src, &ctx.names()).unwrap()
}

/// The η-normal marked term whose contents is an η-redex.
const COUNTER: &str = "([x:T^(Prop)] (y^((([z:T^(Prop)] T^(Prop) -> T^(Prop))^(T^(Prop) -> Prop) x^(T^(Prop)))^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))";

#[test]
fn contents_examples() {
    let c = counter_ctx();
    assert_eq!(
        print_term(
            &pm("y^(T^(Prop) -> T^(Prop))", &c).contents(),
            &c.contents()
        ),
        "y"
    );
    let a = pm(COUNTER, &c);
    assert_eq!(print_term(&a.contents(), &c.contents()), "[x:T] (y x)");
    let p = MarkedTerm::prod("x", pm("T^(Prop)", &c), MarkedTerm::PROP);
    assert_eq!(
        p.contents(),
        Term::prod("x", t("T", &c.contents()), Term::PROP)
    );
}

#[test]
fn marked_conversion_compares_contents() {
    let c = counter_ctx();
    let ck = Checker::new(SystemSpec::CC, FUEL);
    let x1 = pm("y^(T^(Prop) -> T^(Prop))", &c);
    let x2 = pm("y^(Prop)", &c);
    assert!(ck.marked_convertible(&x1, &x2).unwrap());
    assert!(!ck
        .marked_convertible(&MarkedTerm::PROP, &MarkedTerm::TYPE)
        .unwrap());
}

#[test]
fn counterexample_reduces_through_its_mark() {
    let c = counter_ctx();
    let a = pm(COUNTER, &c);
    assert!(is_eta_normal_marked(&a));
    assert!(step(&a.contents(), Some(ReductionKind::Eta)).is_some());
    let (r, _) = marked_step(&a, None).unwrap();
    let expected = pm(
        "([x:T^(Prop)] (y^(T^(Prop) -> T^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))",
        &c,
    );
    assert_eq!(r, expected);
    let (r2, _) = marked_step(&r, Some(ReductionKind::Eta)).unwrap();
    assert_eq!(r2, pm("y^(T^(Prop) -> T^(Prop))", &c));
    assert_eq!(marked_normalize(&a, FUEL).unwrap(), r2);
    assert!(marked_step(&MarkedTerm::PROP, None).is_none());
    assert_eq!(marked_normalize(&r2, FUEL).unwrap(), r2);
    let ty = marked_infer(&c, &a, SystemSpec::CC).unwrap();
    assert!(Checker::new(SystemSpec::CC, FUEL)
        .marked_convertible(&ty, &pm("T^(Prop) -> T^(Prop)", &c))
        .unwrap());
}

fn is_eta_normal_marked(a: &MarkedTerm) -> bool {
    marked_step(a, Some(ReductionKind::Eta)).is_none()
}

#[test]
fn unbound_marked_variable() {
    let c = parse_marked_context("T : Prop").unwrap();
    let a = MarkedTerm::var(5, pm("T^(Prop)", &c));
    let e = marked_infer(&c, &a, SystemSpec::CC).unwrap_err();
    assert_eq!(e.kind_name(), "UnboundVariable");
}

#[test]
fn encoding_examples() {
    assert_eq!(encode_circ(&MarkedTerm::PROP, 0), Term::PROP);
    let c = parse_marked_context("T : Prop; x : T^(Prop)").unwrap();
    let x = pm("x^(T^(Prop))", &c);
    // o sits below the context: index 2 in [o; T; x]
    let o = c.len();
    let tbar = encode_bar(&pm("T^(Prop)", &c), o);
    assert_eq!(
        encode_circ(&x, o),
        Term::app(Term::abs("z", Term::PROP, v(1)), tbar)
    );
    let p = MarkedTerm::prod("x1", pm("T^(Prop)", &c), MarkedTerm::PROP);
    match encode_bar(&p, o) {
        Term::Prod(_, _, cod) => assert_eq!(*cod, v(o + 1)),
        other => panic!("{other:?}"),
    }
    assert_eq!(circ_context(&MarkedContext::new()).len(), 1);
    let cc = circ_context(&parse_marked_context("T : Prop").unwrap());
    assert_eq!(print_context(&cc), "o : Prop; T : Prop");
}

#[test]
fn star_translation_examples() {
    let e = Context::new();
    let (_, a, ty) = star_translate(&e, &Term::PROP, SystemSpec::CC, FUEL).unwrap();
    assert_eq!((a, ty), (MarkedTerm::PROP, MarkedTerm::TYPE));
    let c = parse_context("P : Prop; a : P").unwrap();
    let (mc, a, ty) = star_translate(&c, &t("a", &c), SystemSpec::CC, FUEL).unwrap();
    assert_eq!(print_marked(&a, &mc), "a^(P^(Prop))");
    assert_eq!(print_marked(&ty, &mc), "P^(Prop)");
}

// ---------------------------------------------------------------------------
// Measures, orders, eta-long forms

#[test]
fn measures() {
    let mc = parse_marked_context("P : Prop; f : P^(Prop) -> P^(Prop)").unwrap();
    assert_eq!(measure_marked(&MarkedTerm::PROP), 1);
    assert_eq!(measure_marked(&pm("P^(Prop)", &mc)), 2);
    assert_eq!(measure_marked(&pm("f^(P^(Prop) -> P^(Prop))", &mc)), 5);
    let g = g0();
    let cc = SystemSpec::CC;
    assert_eq!(measure_unmarked(&g, &Term::PROP, cc, FUEL).unwrap(), 1);
    assert_eq!(measure_unmarked(&g, &t("P", &g), cc, FUEL).unwrap(), 2);
    assert_eq!(measure_unmarked(&g, &t("f", &g), cc, FUEL).unwrap(), 5);
}

fn shown(ls: &[LabeledTerm]) -> Vec<String> {
    ls.iter().map(|l| print_term(&l.term, &l.ctx)).collect()
}

#[test]
fn predecessor_sets() {
    let g = g0();
    let cc = SystemSpec::CC;
    let p = LabeledTerm::new(g.prefix(1), Term::var(0));
    assert!(predecessors(&p, cc, FUEL).unwrap().is_empty());
    let a = LabeledTerm::new(g.clone(), t("a", &g));
    assert_eq!(shown(&predecessors(&a, cc, FUEL).unwrap()), ["P"]);
    let fa = LabeledTerm::new(g.clone(), t("f a", &g));
    assert_eq!(
        shown(&predecessors(&fa, cc, FUEL).unwrap()),
        ["f", "a", "P"]
    );
    assert_eq!(shown(&predecessors_prime(&a, cc, FUEL).unwrap()), ["P"]);
}

#[test]
fn prime_predecessors_use_eta_long_types() {
    let h =
        parse_context("A : Prop; c : (A -> A) -> A; F : ((A -> A) -> A) -> Prop; x : F c").unwrap();
    let x = LabeledTerm::new(h.clone(), t("x", &h));
    let plain = predecessors(&x, SystemSpec::CC, FUEL).unwrap();
    let prime = predecessors_prime(&x, SystemSpec::CC, FUEL).unwrap();
    assert_eq!(shown(&plain), ["(F c)"]);
    assert_eq!(shown(&prime), ["(F ([y:A -> A] (c ([y1:A] (y y1)))))"]);
    let p = LabeledTerm::new(h.clone(), t("A", &h));
    assert!(predecessors_prime(&p, SystemSpec::CC, FUEL)
        .unwrap()
        .is_empty());
}

#[test]
fn down_sets() {
    let g = g0();
    let cc = SystemSpec::CC;
    let d = descend(&LabeledTerm::new(Context::new(), Term::PROP), cc, FUEL).unwrap();
    assert!(d.members().is_empty());
    assert_eq!(d.depth, 0);
    let d = descend(&LabeledTerm::new(g.clone(), t("a", &g)), cc, FUEL).unwrap();
    assert_eq!(shown(d.members()), ["P"]);
    assert_eq!(d.depth, 1);
    // f's normal type P -> P is itself a predecessor of f, and its
    // codomain lives under the anonymous binder
    let d = descend(&LabeledTerm::new(g.clone(), t("f a", &g)), cc, FUEL).unwrap();
    assert_eq!(shown(d.members()), ["f", "a", "P", "P -> P", "P"]);
    assert_eq!(d.members()[4].ctx.len(), 4);
    assert_eq!(d.depth, 3);
    assert!(measure_violations(&d, cc, FUEL).unwrap().is_empty());
}

#[test]
fn eta_long_examples() {
    let g = g0();
    let cc = SystemSpec::CC;
    let el =
        |ctx: &Context, s: &str| print_term(&eta_long(ctx, &t(s, ctx), cc, FUEL).unwrap(), ctx);
    assert_eq!(el(&g, "f"), "[y:P] (f y)");
    assert_eq!(el(&g, "a"), "a");
    assert_eq!(el(&g, "[x:P] x"), "[x:P] x");
    let d = parse_context("T : Prop; Pr : T -> Prop; g : (x:T) (Pr x)").unwrap();
    assert_eq!(
        eta_long(&d, &t("g", &d), cc, FUEL).unwrap(),
        t("[x:T] (g x)", &d)
    );
}

#[test]
fn marked_eta_long_examples() {
    let g = g0();
    let cc = SystemSpec::CC;
    let (mc, fstar, _) = star_translate(&g, &t("f", &g), cc, FUEL).unwrap();
    let long = eta_long_marked(&mc, &fstar, cc, FUEL).unwrap();
    assert_eq!(
        print_marked(&long, &mc),
        "([y:P^(Prop)] (f^(P^(Prop) -> P^(Prop)) y^(P^(Prop)))^(P^(Prop)))^(P^(Prop) -> P^(Prop))"
    );
    assert_eq!(
        eta_long_marked(&mc, &MarkedTerm::PROP, cc, FUEL).unwrap(),
        MarkedTerm::PROP
    );
    assert_eq!(
        long.contents(),
        eta_long(&g, &t("f", &g), cc, FUEL).unwrap()
    );
    let (mc, a) = plus_translate(&g, &t("a", &g), cc, FUEL).unwrap();
    assert_eq!(print_marked(&a, &mc), "a^(P^(Prop))");
    let (_, f) = plus_translate(&g, &t("f", &g), cc, FUEL).unwrap();
    assert_eq!(f, long);
    let (_, p) = plus_translate(&Context::new(), &Term::PROP, cc, FUEL).unwrap();
    assert_eq!(p, MarkedTerm::PROP);
}

// ---------------------------------------------------------------------------
// Concrete syntax

#[test]
fn parsing_examples() {
    let c = parse_context("P : Prop").unwrap();
    assert_eq!(t("[x:P] x", &c), Term::abs("x", v(0), v(0)));
    let d = parse_context("T : Prop; Pr : T -> Prop").unwrap();
    assert_eq!(
        t("(x:T) Pr x", &d),
        Term::prod("x", v(1), Term::app(v(1), v(0)))
    );
    assert_eq!(t("P -> P", &c), Term::arrow(v(0), v(0)));
    assert_eq!(parse_context("P : Prop").unwrap().len(), 1);
    let two = parse_context("P : Prop; f : P -> P").unwrap();
    assert_eq!(two.entries()[1].1, Term::arrow(v(0), v(0)));
    assert!(parse_context("").unwrap().is_empty());
}

#[test]
fn printing_examples() {
    let c = parse_context("P : Prop").unwrap();
    assert_eq!(print_term(&Term::abs("x", v(0), v(0)), &c), "[x:P] x");
    let mc = parse_marked_context("x : Prop").unwrap();
    assert_eq!(
        print_marked(&MarkedTerm::var(0, MarkedTerm::PROP), &mc),
        "x^(Prop)"
    );
}
