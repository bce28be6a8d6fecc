//! Measures and the well-founded orders on labeled normal terms.

use std::collections::HashMap;

use crate::error::KernelError;
use crate::eta_long::eta_long;
use crate::marked::{star_translate, MarkedTerm};
use crate::reduce::is_beta_normal;
use crate::term::{Context, LabeledTerm, Term};
use crate::typing::{Checker, SystemSpec};

/// Upper bound on the size of an explored down-set.
pub const MAX_DOWN_SET: usize = 100_000;

/// Structural measure of a marked term.
pub fn measure_marked(t: &MarkedTerm) -> u64 {
    match t {
        MarkedTerm::Sort(_) => 1,
        MarkedTerm::Var(_, m) => measure_marked(m) + 1,
        MarkedTerm::App(u, v, m) | MarkedTerm::Abs(_, u, v, m) => {
            measure_marked(u) + measure_marked(v) + measure_marked(m)
        }
        MarkedTerm::Prod(_, u, v) => measure_marked(u) + measure_marked(v),
    }
}

/// Measure of unmarked β-normal terms, memoized per labeled term.
pub struct Measurer {
    ck: Checker,
    memo: HashMap<LabeledTerm, u64>,
    budget: u64,
}

impl Measurer {
    pub fn new(system: SystemSpec, fuel: u64) -> Self {
        Measurer {
            ck: Checker::new(system, fuel),
            memo: HashMap::new(),
            budget: fuel,
        }
    }

    pub fn measure(&mut self, ctx: &Context, t: &Term) -> Result<u64, KernelError> {
        if !is_beta_normal(t) {
            return Err(KernelError::Precondition(
                "measure needs a beta-normal term".into(),
            ));
        }
        self.go(ctx, t)
    }

    fn go(&mut self, ctx: &Context, t: &Term) -> Result<u64, KernelError> {
        let key = LabeledTerm::new(ctx.clone(), t.clone());
        if let Some(&m) = self.memo.get(&key) {
            return Ok(m);
        }
        if self.budget == 0 {
            return Err(crate::reduce::FuelExhausted.into());
        }
        self.budget -= 1;
        let m = match t {
            Term::Sort(_) => 1,
            Term::Var(_) => {
                let ty = self.ck.normal_type(ctx, t)?;
                self.go(ctx, &ty)? + 1
            }
            Term::App(u, v) => {
                let ty = self.ck.normal_type(ctx, t)?;
                self.go(ctx, u)? + self.go(ctx, v)? + self.go(ctx, &ty)?
            }
            Term::Abs(n, u, v) => {
                let ty = self.ck.normal_type(ctx, t)?;
                let inner = ctx.extended(n.clone(), (**u).clone());
                self.go(ctx, u)? + self.go(&inner, v)? + self.go(ctx, &ty)?
            }
            Term::Prod(n, u, v) => {
                let inner = ctx.extended(n.clone(), (**u).clone());
                self.go(ctx, u)? + self.go(&inner, v)?
            }
        };
        self.memo.insert(key, m);
        Ok(m)
    }
}

pub fn measure_unmarked(
    ctx: &Context,
    t: &Term,
    sys: SystemSpec,
    fuel: u64,
) -> Result<u64, KernelError> {
    Measurer::new(sys, fuel).measure(ctx, t)
}

/// Which type the type edge of an order points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// The normal form of the type.
    Normal,
    /// The eta-long form of the normal form of the type.
    EtaLong,
}

/// Immediate predecessors: non-sort strict subterms, then the (eta-long)
/// normal type unless it or `t` is a sort.
pub fn predecessors_in(
    t: &LabeledTerm,
    order: Order,
    sys: SystemSpec,
    fuel: u64,
) -> Result<Vec<LabeledTerm>, KernelError> {
    if t.term.is_sort() {
        return Ok(vec![]);
    }
    let ck = Checker::new(sys, fuel);
    let mut out: Vec<LabeledTerm> = t
        .strict_subterms()
        .into_iter()
        .filter(|s| !s.term.is_sort())
        .collect();
    let ty = ck.normal_type(&t.ctx, &t.term)?;
    if !ty.is_sort() {
        let ty = match order {
            Order::Normal => ty,
            Order::EtaLong => eta_long(&t.ctx, &ty, sys, fuel)?,
        };
        let lt = LabeledTerm::new(t.ctx.clone(), ty);
        if !out.contains(&lt) {
            out.push(lt);
        }
    }
    Ok(out)
}

pub fn predecessors(
    t: &LabeledTerm,
    sys: SystemSpec,
    fuel: u64,
) -> Result<Vec<LabeledTerm>, KernelError> {
    predecessors_in(t, Order::Normal, sys, fuel)
}

pub fn predecessors_prime(
    t: &LabeledTerm,
    sys: SystemSpec,
    fuel: u64,
) -> Result<Vec<LabeledTerm>, KernelError> {
    predecessors_in(t, Order::EtaLong, sys, fuel)
}

/// The explored down-set of a labeled term. `nodes[0]` is the root and
/// each edge `(a, b)` records `nodes[b] ∈ predecessors(nodes[a])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    pub nodes: Vec<LabeledTerm>,
    pub edges: Vec<(usize, usize)>,
    /// Length of the longest descending chain from the root.
    pub depth: usize,
}

impl Descent {
    pub fn members(&self) -> &[LabeledTerm] {
        &self.nodes[1..]
    }
}

/// Worklist closure of `predecessors_in`; fails if the explored graph has a
/// cycle or grows past `MAX_DOWN_SET`.
pub fn descend_in(
    t: &LabeledTerm,
    order: Order,
    sys: SystemSpec,
    fuel: u64,
) -> Result<Descent, KernelError> {
    let mut nodes = vec![t.clone()];
    let mut index: HashMap<LabeledTerm, usize> = HashMap::from([(t.clone(), 0)]);
    let mut edges = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let preds = predecessors_in(&nodes[next], order, sys, fuel)?;
        for p in preds {
            let k = match index.get(&p) {
                Some(&k) => k,
                None => {
                    if nodes.len() >= MAX_DOWN_SET {
                        return Err(KernelError::Violation(format!(
                            "down-set exceeds {MAX_DOWN_SET} members"
                        )));
                    }
                    nodes.push(p.clone());
                    index.insert(p, nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            edges.push((next, k));
        }
        next += 1;
    }
    let depth = longest_chain(nodes.len(), &edges)?;
    Ok(Descent {
        nodes,
        edges,
        depth,
    })
}

pub fn descend(t: &LabeledTerm, sys: SystemSpec, fuel: u64) -> Result<Descent, KernelError> {
    descend_in(t, Order::Normal, sys, fuel)
}

pub fn descend_prime(t: &LabeledTerm, sys: SystemSpec, fuel: u64) -> Result<Descent, KernelError> {
    descend_in(t, Order::EtaLong, sys, fuel)
}

/// Longest path from node 0; a cycle is reported as a violation.
fn longest_chain(n: usize, edges: &[(usize, usize)]) -> Result<usize, KernelError> {
    let mut succ = vec![vec![]; n];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut best = vec![0usize; n];
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    state[0] = 1;
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        if top.1 < succ[v].len() {
            let w = succ[v][top.1];
            top.1 += 1;
            match state[w] {
                0 => {
                    state[w] = 1;
                    stack.push((w, 0));
                }
                1 => {
                    return Err(KernelError::Violation(
                        "descending chain revisits a term".into(),
                    ));
                }
                _ => {}
            }
        } else {
            best[v] = succ[v].iter().map(|&w| best[w] + 1).max().unwrap_or(0);
            state[v] = 2;
            stack.pop();
        }
    }
    Ok(best[0])
}

/// Edges of `d` along which the unmarked measure fails to decrease, with
/// both measures.
pub fn measure_violations(
    d: &Descent,
    sys: SystemSpec,
    fuel: u64,
) -> Result<Vec<(usize, usize, u64, u64)>, KernelError> {
    let mut m = Measurer::new(sys, fuel);
    let mut out = Vec::new();
    for &(a, b) in &d.edges {
        let ma = m.go(&d.nodes[a].ctx, &d.nodes[a].term)?;
        let mb = m.go(&d.nodes[b].ctx, &d.nodes[b].term)?;
        if mb >= ma {
            out.push((a, b, ma, mb));
        }
    }
    Ok(out)
}

/// Whether `lower`'s translation is a strict subterm of `upper`'s, where
/// `lower` lives under `lower.ctx.len() - upper.ctx.len()` binders of
/// `upper`.
pub fn star_embeds(
    lower: &LabeledTerm,
    upper: &LabeledTerm,
    sys: SystemSpec,
    fuel: u64,
) -> Result<bool, KernelError> {
    let (_, lo, _) = star_translate(&lower.ctx, &lower.term, sys, fuel)?;
    let (_, up, _) = star_translate(&upper.ctx, &upper.term, sys, fuel)?;
    let depth = lower
        .ctx
        .len()
        .checked_sub(upper.ctx.len())
        .ok_or_else(|| KernelError::Precondition("lower term lives in a shorter context".into()))?;
    Ok(lo.is_strict_subterm_of(&up, depth))
}
