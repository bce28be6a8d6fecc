//! The eight systems of the cube and syntax-directed type inference.
//!
//! Inference follows the inversion (stripping) principle: the subject's head
//! constructor determines the only rule that can end a derivation, so
//! conversion is only needed at application arguments and in [`check`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::reduce::{self, Fuel, FuelExhausted};
use crate::syntax::print_term;
use crate::term::{Context, Sort, Term};

/// A rule set: which sort pairs may form products. Always contains
/// `(Prop, Prop)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemSpec {
    bits: u8,
}

const PP: u8 = 1;
const PT: u8 = 2;
const TP: u8 = 4;
const TT: u8 = 8;

fn bit(s1: Sort, s2: Sort) -> u8 {
    match (s1, s2) {
        (Sort::Prop, Sort::Prop) => PP,
        (Sort::Prop, Sort::Type) => PT,
        (Sort::Type, Sort::Prop) => TP,
        (Sort::Type, Sort::Type) => TT,
    }
}

const NAMES: [(&str, u8); 8] = [
    ("stlc", PP),
    ("lambda-p", PP | PT),
    ("f", PP | TP),
    ("f-omega-weak", PP | TT),
    ("f-omega", PP | TP | TT),
    ("lambda-p2", PP | PT | TP),
    ("lambda-p-omega-weak", PP | PT | TT),
    ("cc", PP | PT | TP | TT),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown system `{0}` (expected one of stlc, lambda-p, f, f-omega-weak, f-omega, lambda-p2, lambda-p-omega-weak, cc, or a pair list like PP,PT,TP,TT)")]
pub struct UnknownSystem(pub String);

impl SystemSpec {
    pub const STLC: SystemSpec = SystemSpec { bits: PP };
    pub const CC: SystemSpec = SystemSpec {
        bits: PP | PT | TP | TT,
    };

    /// Builds a rule set; `(Prop, Prop)` is always added.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sort, Sort)>) -> SystemSpec {
        let bits = pairs.into_iter().fold(PP, |acc, (a, b)| acc | bit(a, b));
        SystemSpec { bits }
    }

    pub fn allows(&self, s1: Sort, s2: Sort) -> bool {
        self.bits & bit(s1, s2) != 0
    }

    pub fn pairs(&self) -> Vec<(Sort, Sort)> {
        [
            (Sort::Prop, Sort::Prop),
            (Sort::Prop, Sort::Type),
            (Sort::Type, Sort::Prop),
            (Sort::Type, Sort::Type),
        ]
        .into_iter()
        .filter(|&(a, b)| self.allows(a, b))
        .collect()
    }

    pub fn name(&self) -> &'static str {
        NAMES
            .iter()
            .find(|(_, b)| *b == self.bits)
            .map(|(n, _)| *n)
            .expect("every legal rule set is named")
    }

    /// `PP,PT,...` notation.
    pub fn rules_string(&self) -> String {
        let short = |s: Sort| match s {
            Sort::Prop => 'P',
            Sort::Type => 'T',
        };
        self.pairs()
            .into_iter()
            .map(|(a, b)| format!("{}{}", short(a), short(b)))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// All eight systems, from stlc to cc.
    pub fn all() -> [SystemSpec; 8] {
        NAMES.map(|(_, bits)| SystemSpec { bits })
    }

    /// True when every rule of `self` is in `other`.
    pub fn is_subsystem_of(&self, other: &SystemSpec) -> bool {
        self.bits & !other.bits == 0
    }
}

impl fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SystemSpec({}: {})", self.name(), self.rules_string())
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemSpec {
    type Err = UnknownSystem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        named_system(s)
    }
}

/// Looks up a system by name, or parses an explicit pair list such as
/// `PP,TP`.
pub fn named_system(name: &str) -> Result<SystemSpec, UnknownSystem> {
    let key = name.trim().to_ascii_lowercase();
    if let Some((_, bits)) = NAMES.iter().find(|(n, _)| *n == key) {
        return Ok(SystemSpec { bits: *bits });
    }
    let mut bits = 0;
    for part in key.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let sort = |c: char| match c {
            'p' => Some(Sort::Prop),
            't' => Some(Sort::Type),
            _ => None,
        };
        let mut cs = part.chars();
        match (
            cs.next().and_then(sort),
            cs.next().and_then(sort),
            cs.next(),
        ) {
            (Some(a), Some(b), None) => bits |= bit(a, b),
            _ => return Err(UnknownSystem(name.to_string())),
        }
    }
    if bits & PP == 0 {
        return Err(UnknownSystem(name.to_string()));
    }
    Ok(SystemSpec { bits })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TypeErrorKind {
    UnboundVariable {
        index: usize,
    },
    TypeHasNoType,
    RuleNotInSystem {
        s1: Sort,
        s2: Sort,
    },
    /// The term's type does not reduce to a sort where one is required.
    ExpectedSort {
        found: String,
    },
    NotAFunction {
        found: String,
    },
    DomainMismatch {
        expected: String,
        got: String,
    },
    /// A mark is not convertible to the type synthesized for its node.
    MarkMismatch {
        mark: String,
        synthesized: String,
    },
    IllFormedContext {
        entry: usize,
        inner: Box<TypeError>,
    },
    FuelExhausted,
}

impl Serialize for Sort {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A typing failure and the path (child indices) to the offending subterm.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<usize>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind) -> Self {
        TypeError { kind, path: vec![] }
    }

    /// Prefixes the location with a child index.
    pub fn within(mut self, child: usize) -> Self {
        self.path.insert(0, child);
        self
    }

    /// Short name of the error kind, as used in CLI output.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            TypeErrorKind::UnboundVariable { .. } => "UnboundVariable",
            TypeErrorKind::TypeHasNoType => "TypeHasNoType",
            TypeErrorKind::RuleNotInSystem { .. } => "RuleNotInSystem",
            TypeErrorKind::ExpectedSort { .. } => "ExpectedSort",
            TypeErrorKind::NotAFunction { .. } => "NotAFunction",
            TypeErrorKind::DomainMismatch { .. } => "DomainMismatch",
            TypeErrorKind::MarkMismatch { .. } => "MarkMismatch",
            TypeErrorKind::IllFormedContext { .. } => "IllFormedContext",
            TypeErrorKind::FuelExhausted => "FuelExhausted",
        }
    }

    /// The innermost error, looking through `IllFormedContext`.
    pub fn root_cause(&self) -> &TypeError {
        match &self.kind {
            TypeErrorKind::IllFormedContext { inner, .. } => inner.root_cause(),
            _ => self,
        }
    }

    pub fn is_fuel(&self) -> bool {
        matches!(self.root_cause().kind, TypeErrorKind::FuelExhausted)
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TypeErrorKind::UnboundVariable { index } => {
                write!(f, "UnboundVariable: index {index}")?
            }
            TypeErrorKind::TypeHasNoType => {
                f.write_str("TypeHasNoType: the sort Type has no type")?
            }
            TypeErrorKind::RuleNotInSystem { s1, s2 } => write!(f, "RuleNotInSystem({s1},{s2})")?,
            TypeErrorKind::ExpectedSort { found } => {
                write!(f, "ExpectedSort: type `{found}` is not a sort")?
            }
            TypeErrorKind::NotAFunction { found } => {
                write!(f, "NotAFunction: type `{found}` is not a product")?
            }
            TypeErrorKind::DomainMismatch { expected, got } => {
                write!(f, "DomainMismatch: expected `{expected}`, got `{got}`")?
            }
            TypeErrorKind::MarkMismatch { mark, synthesized } => write!(
                f,
                "MarkMismatch: mark `{mark}` is not convertible to `{synthesized}`"
            )?,
            TypeErrorKind::IllFormedContext { entry, inner } => {
                write!(f, "IllFormedContext: entry {entry}: {inner}")?
            }
            TypeErrorKind::FuelExhausted => f.write_str("FuelExhausted")?,
        }
        if !self.path.is_empty() {
            let p: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
            write!(f, " at /{}", p.join("/"))?;
        }
        Ok(())
    }
}

impl From<FuelExhausted> for TypeError {
    fn from(_: FuelExhausted) -> Self {
        TypeError::new(TypeErrorKind::FuelExhausted)
    }
}

/// Derivable judgement `ctx ⊢ subject : ty` in `system`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgement {
    pub ctx: Context,
    pub subject: Term,
    pub ty: Term,
    pub system: SystemSpec,
}

impl Judgement {
    /// Checks the context and infers the subject's type.
    pub fn derive(
        ctx: Context,
        subject: Term,
        system: SystemSpec,
        fuel: u64,
    ) -> Result<Self, TypeError> {
        let ck = Checker::new(system, fuel);
        ck.wf_context(&ctx)?;
        let ty = ck.infer(&ctx, &subject)?;
        Ok(Judgement {
            ctx,
            subject,
            ty,
            system,
        })
    }

    pub fn recheck(&self, fuel: u64) -> Result<(), TypeError> {
        Checker::new(self.system, fuel).check(&self.ctx, &self.subject, &self.ty)
    }
}

/// Type checker for one system with a per-conversion fuel budget.
#[derive(Debug, Clone, Copy)]
pub struct Checker {
    pub system: SystemSpec,
    pub fuel: u64,
}

impl Checker {
    pub fn new(system: SystemSpec, fuel: u64) -> Self {
        Checker { system, fuel }
    }

    pub fn normalize(&self, t: &Term) -> Result<Term, TypeError> {
        Ok(reduce::normalize(t, self.fuel)?)
    }

    pub fn convertible(&self, a: &Term, b: &Term) -> Result<bool, TypeError> {
        Ok(reduce::convertible(a, b, self.fuel)?)
    }

    pub fn wf_context(&self, ctx: &Context) -> Result<(), TypeError> {
        let mut prefix = Context::new();
        for (k, (name, ty)) in ctx.entries().iter().enumerate() {
            if let Err(e) = self.infer_sort(&prefix, ty) {
                return Err(TypeError::new(TypeErrorKind::IllFormedContext {
                    entry: k,
                    inner: Box::new(e),
                }));
            }
            prefix.push(name.clone(), ty.clone());
        }
        Ok(())
    }

    /// Infers the type of `t` and reduces it to a sort.
    pub fn infer_sort(&self, ctx: &Context, t: &Term) -> Result<Sort, TypeError> {
        let ty = self.infer(ctx, t)?;
        match reduce::whnf(&ty, &mut Fuel::new(self.fuel))? {
            Term::Sort(s) => Ok(s),
            other => Err(TypeError::new(TypeErrorKind::ExpectedSort {
                found: print_term(&other, ctx),
            })),
        }
    }

    /// Structural (unnormalized) type of `t` in a well-formed `ctx`.
    pub fn infer(&self, ctx: &Context, t: &Term) -> Result<Term, TypeError> {
        match t {
            Term::Sort(Sort::Prop) => Ok(Term::TYPE),
            Term::Sort(Sort::Type) => Err(TypeError::new(TypeErrorKind::TypeHasNoType)),
            Term::Var(i) => ctx
                .lookup(*i)
                .ok_or_else(|| TypeError::new(TypeErrorKind::UnboundVariable { index: *i })),
            Term::Prod(n, dom, cod) => {
                let s1 = self.infer_sort(ctx, dom).map_err(|e| e.within(0))?;
                let inner = ctx.extended(n.clone(), (**dom).clone());
                let s2 = self.infer_sort(&inner, cod).map_err(|e| e.within(1))?;
                if !self.system.allows(s1, s2) {
                    return Err(TypeError::new(TypeErrorKind::RuleNotInSystem { s1, s2 }));
                }
                Ok(Term::Sort(s2))
            }
            Term::Abs(n, dom, body) => {
                self.infer_sort(ctx, dom).map_err(|e| e.within(0))?;
                let inner = ctx.extended(n.clone(), (**dom).clone());
                let body_ty = self.infer(&inner, body).map_err(|e| e.within(1))?;
                let product = Term::Prod(n.clone(), dom.clone(), Box::new(body_ty));
                self.infer_sort(ctx, &product)?;
                Ok(product)
            }
            Term::App(f, a) => {
                let f_ty = self.infer(ctx, f).map_err(|e| e.within(0))?;
                let Some((_, dom, cod)) =
                    reduce::whnf_product_named(&f_ty, &mut Fuel::new(self.fuel))?
                else {
                    return Err(TypeError::new(TypeErrorKind::NotAFunction {
                        found: print_term(&f_ty, ctx),
                    })
                    .within(0));
                };
                let a_ty = self.infer(ctx, a).map_err(|e| e.within(1))?;
                if !self.convertible(&dom, &a_ty)? {
                    return Err(TypeError::new(TypeErrorKind::DomainMismatch {
                        expected: print_term(&dom, ctx),
                        got: print_term(&a_ty, ctx),
                    })
                    .within(1));
                }
                Ok(cod.subst(0, a))
            }
        }
    }

    pub fn check(&self, ctx: &Context, t: &Term, expected: &Term) -> Result<(), TypeError> {
        let got = self.infer(ctx, t)?;
        if *expected == Term::TYPE {
            if got == Term::TYPE {
                return Ok(());
            }
        } else {
            self.infer_sort(ctx, expected)?;
            if self.convertible(&got, expected)? {
                return Ok(());
            }
        }
        Err(TypeError::new(TypeErrorKind::DomainMismatch {
            expected: print_term(expected, ctx),
            got: print_term(&got, ctx),
        }))
    }

    /// βη-normal form of the type of `t`.
    pub fn normal_type(&self, ctx: &Context, t: &Term) -> Result<Term, TypeError> {
        let ty = self.infer(ctx, t)?;
        self.normalize(&ty)
    }
}

pub fn wf_context(ctx: &Context, sys: SystemSpec) -> Result<(), TypeError> {
    Checker::new(sys, reduce::DEFAULT_FUEL).wf_context(ctx)
}

pub fn infer(ctx: &Context, t: &Term, sys: SystemSpec) -> Result<Term, TypeError> {
    Checker::new(sys, reduce::DEFAULT_FUEL).infer(ctx, t)
}

pub fn check(ctx: &Context, t: &Term, ty: &Term, sys: SystemSpec) -> Result<(), TypeError> {
    Checker::new(sys, reduce::DEFAULT_FUEL).check(ctx, t, ty)
}
