//! Names and their values.
//!
//! `val(G, τ) = {val(G, σ) : ⟨σ, p⟩ ∈ τ, p ∈ G}` is computed by well-founded recursion on the
//! relation `edrel(eclose({τ}))`, so `τ` need not belong to any ground model. The constructions
//! here are the usual ones: `check(x) = {⟨check(y), 𝟙⟩ : y ∈ x}`, `Ġ = {⟨check(p), p⟩ : p ∈ P}`,
//! and the Union, Separation and Powerset names.
//!
//! # Index layout of the separation name
//!
//! `sep_name(π, σ, φ)` collects the `⟨θ, p⟩ ∈ dom(π) × P` such that `p` forces
//! `x0 ∈ x2 ∧ φ(x0, x1)` in the environment `[θ, σ, π]`:
//!
//! | index | name | value in `M[G]` |
//! |-------|------|-----------------|
//! | 0     | θ    | candidate element `x` |
//! | 1     | σ    | parameter `w` |
//! | 2     | π    | ambient set `c` |
//!
//! `φ` has arity at most 2 and sees exactly indices 0 and 1, so no renaming is needed.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::extension::ForcingFrame;
use crate::forcing::{cond_iter, ForcingNotion, GFilter};
use crate::formula::Formula;
use crate::hfset::{cartprod, domain, eclose, opair, HRelation, HSet};
use crate::semantics::Model;
use crate::wfrec::{edrel, wfrec, wfrec_all, Functional, Predecessors};
use crate::{Caps, Error, Result};

/// A ground model, a forcing notion, and a filter on it.
#[derive(Clone, Debug)]
pub struct NameContext {
    pub model: Model,
    pub notion: Arc<ForcingNotion>,
    pub filter: GFilter,
}

impl NameContext {
    pub fn new(model: Model, notion: Arc<ForcingNotion>, filter: GFilter) -> Self {
        NameContext {
            model,
            notion,
            filter,
        }
    }

    pub fn val(&self, tau: &HSet) -> HSet {
        val(&self.notion, &self.filter, tau)
    }

    pub fn check(&self, x: &HSet) -> HSet {
        check(&self.notion, x)
    }

    pub fn g_dot(&self) -> HSet {
        g_dot(&self.notion)
    }

    /// The filter as a set of conditions.
    pub fn filter_set(&self) -> HSet {
        self.filter.to_hset(&self.notion)
    }

    /// Whether `P`, `≤` and `𝟙` all belong to the ground model.
    pub fn notion_in_model(&self) -> bool {
        self.model.contains(&self.notion.carrier())
            && self.model.contains(&self.notion.order_set())
            && self.model.contains(self.notion.top_element())
    }
}

/// The functional of `val`: `Hv(G)(y, f) = {f(x) : ⟨x, p⟩ ∈ y, p ∈ G}`.
struct ValueStep {
    in_filter: HashSet<HSet>,
}

impl Functional for ValueStep {
    fn apply(&self, y: &HSet, below: &Predecessors) -> Result<HSet> {
        let mut out = Vec::new();
        for e in y.iter() {
            if let Some((x, p)) = e.as_pair() {
                if self.in_filter.contains(&p) {
                    out.push(below.get(&x)?.clone());
                }
            }
        }
        Ok(HSet::new(out))
    }
}

fn value_step(notion: &ForcingNotion, filter: &GFilter) -> ValueStep {
    ValueStep {
        in_filter: filter
            .conditions()
            .map(|p| notion.element(p).clone())
            .collect(),
    }
}

/// `val(G, τ) = wfrec(edrel(eclose({τ})), τ, Hv(G))`
pub fn val(notion: &ForcingNotion, filter: &GFilter, tau: &HSet) -> HSet {
    let closure = eclose(&HSet::singleton(tau.clone()));
    val_over(&edrel(&closure), notion, filter, tau)
}

/// `val` computed over a caller-supplied relation, which must contain the `edrel`-history of `τ`.
pub fn val_over(rel: &HRelation, notion: &ForcingNotion, filter: &GFilter, tau: &HSet) -> HSet {
    wfrec(rel, tau, &value_step(notion, filter))
        .expect("edrel is well founded and Hv only reads predecessors")
}

/// `val` at every listed name, by one recursion over a relation containing all their histories.
pub fn vals_over<'a>(
    rel: &HRelation,
    names: impl IntoIterator<Item = &'a HSet>,
    notion: &ForcingNotion,
    filter: &GFilter,
) -> HashMap<HSet, HSet> {
    wfrec_all(rel, names, &value_step(notion, filter))
        .expect("edrel is well founded and Hv only reads predecessors")
}

/// One unfolding of the value equation, with `val` for the inner names.
pub fn val_unfolded(notion: &ForcingNotion, filter: &GFilter, tau: &HSet) -> HSet {
    HSet::new(domain(tau).iter().filter_map(|t| {
        let witnessed = filter
            .conditions()
            .any(|p| tau.contains(&opair(t, notion.element(p))));
        witnessed.then(|| val(notion, filter, t))
    }))
}

/// `check(x) = {⟨check(y), 𝟙⟩ : y ∈ x}`
pub fn check(notion: &ForcingNotion, x: &HSet) -> HSet {
    let mut memo = HashMap::new();
    check_memo(notion.top_element(), x, &mut memo)
}

/// `check(x)` for every listed `x`, sharing one memo table.
pub fn check_all<'a>(notion: &ForcingNotion, xs: impl IntoIterator<Item = &'a HSet>) -> Vec<HSet> {
    let mut memo = HashMap::new();
    xs.into_iter()
        .map(|x| check_memo(notion.top_element(), x, &mut memo))
        .collect()
}

fn check_memo(top: &HSet, x: &HSet, memo: &mut HashMap<HSet, HSet>) -> HSet {
    if let Some(c) = memo.get(x) {
        return c.clone();
    }
    let c = HSet::new(
        x.iter()
            .map(|y| opair(&check_memo(top, y, memo), top))
            .collect::<Vec<_>>(),
    );
    memo.insert(x.clone(), c.clone());
    c
}

/// `Ġ = {⟨check(p), p⟩ : p ∈ P}`
pub fn g_dot(notion: &ForcingNotion) -> HSet {
    HSet::new(
        notion
            .elements()
            .iter()
            .map(|p| opair(&check(notion, p), p)),
    )
}

/// The body of the union name: `∃⟨σ,q⟩ ∈ τ. ∃r. ⟨θ,r⟩ ∈ σ ∧ p ≤ r ∧ p ≤ q` for `u = ⟨θ,p⟩`.
fn union_body(notion: &ForcingNotion, tau: &HSet, u: &HSet) -> bool {
    let Some((theta, p)) = u.as_pair() else {
        return false;
    };
    tau.iter().filter_map(HSet::as_pair).any(|(sigma, q)| {
        notion.le_sets(&p, &q)
            && sigma
                .iter()
                .filter_map(HSet::as_pair)
                .any(|(t, r)| t == theta && notion.le_sets(&p, &r))
    })
}

/// `{u ∈ dom(⋃ dom(τ)) × P : union_body(u)}`, whose value is `⋃ val(G, τ)` for any filter `G`.
pub fn union_name(notion: &ForcingNotion, tau: &HSet) -> HSet {
    let ambient = cartprod(&domain(&domain(tau).big_union()), &notion.carrier());
    HSet::new(
        ambient
            .iter()
            .filter(|u| union_body(notion, tau, u))
            .cloned(),
    )
}

/// `{x ∈ A × P : q(x)}`
pub fn separation_name(notion: &ForcingNotion, set: &HSet, q: impl Fn(&HSet) -> bool) -> HSet {
    HSet::new(
        cartprod(set, &notion.carrier())
            .iter()
            .filter(|u| q(u))
            .cloned(),
    )
}

/// `x0 ∈ x2 ∧ φ(x0, x1)`
pub fn separation_matrix(phi: &Formula) -> Formula {
    Formula::and(Formula::mem(0, 2), phi.clone())
}

/// The separation name `n = {⟨θ,p⟩ ∈ dom(π) × P : p ⊩ θ ∈ π ∧ φ(θ, σ)}`.
///
/// Its value under every generic `G` is `{x ∈ val(G,π) : M[G], [x, val(G,σ)] ⊨ φ}`.
pub fn sep_name(frame: &ForcingFrame, pi: &HSet, sigma: &HSet, phi: &Formula) -> Result<HSet> {
    let arity = phi.arity();
    if arity > 2 {
        return Err(Error::ArityTooLarge { arity, limit: 2 });
    }
    for name in [pi, sigma] {
        if !frame.model().contains(name) {
            return Err(Error::NameNotInModel(name.to_string()));
        }
    }
    let matrix = separation_matrix(phi);
    let notion = frame.notion();
    let mut out = Vec::new();
    for theta in domain(pi).iter() {
        let env = [theta.clone(), sigma.clone(), pi.clone()];
        for p in 0..notion.len() {
            if frame.forces(p, &matrix, &env)? {
                out.push(opair(theta, notion.element(p)));
            }
        }
    }
    Ok(HSet::new(out))
}

/// The auxiliary name `m = {⟨θ,p⟩ ∈ dom(π) × P : p ∈ G → M[G], [val θ, w, c] ⊨ x0 ∈ x2 ∧ φ}`
/// for the filter of `ext`, which contains `n` and has the same value.
pub fn sep_name_m(
    frame: &ForcingFrame,
    ext: usize,
    pi: &HSet,
    sigma: &HSet,
    phi: &Formula,
) -> Result<HSet> {
    let extension = frame.extension(ext);
    let matrix = separation_matrix(phi);
    let notion = frame.notion();
    let c = extension.value_of(pi)?;
    let w = extension.value_of(sigma)?;
    let mut out = Vec::new();
    for theta in domain(pi).iter() {
        let x = extension.value_of(theta)?;
        let holds =
            crate::semantics::sats(extension.universe(), &matrix, &[x, w.clone(), c.clone()])?;
        for p in 0..notion.len() {
            if !extension.filter().contains(p) || holds {
                out.push(opair(theta, notion.element(p)));
            }
        }
    }
    Ok(HSet::new(out))
}

/// `{⟨χ, 𝟙⟩ : χ ⊆ dom(π) × P, χ ∈ M}`
pub fn pow_name(model: &Model, notion: &ForcingNotion, pi: &HSet, caps: &Caps) -> Result<HSet> {
    let cells: Vec<HSet> = cartprod(&domain(pi), &notion.carrier())
        .iter()
        .cloned()
        .collect();
    let too_large = Error::PowNameTooLarge { cells: cells.len() };
    if cells.len() >= 64 || (1u64 << cells.len()) > caps.pow_candidates {
        return Err(too_large);
    }
    let top = notion.top_element();
    let mut out = Vec::new();
    for mask in 0..(1u64 << cells.len()) {
        let chi = HSet::new(cond_iter(mask).map(|i| cells[i].clone()));
        if model.contains(&chi) {
            out.push(opair(&chi, top));
        }
    }
    Ok(HSet::new(out))
}

/// `x0 ⊆ x1`
pub fn subset_formula() -> Formula {
    Formula::forall(Formula::imp(Formula::mem(0, 1), Formula::mem(0, 2)))
}

/// `{⟨τa, 𝟙⟩, ⟨τb, 𝟙⟩}`, whose value is `{val τa, val τb}` under any filter.
pub fn upair_name(notion: &ForcingNotion, a: &HSet, b: &HSet) -> HSet {
    let top = notion.top_element();
    HSet::upair(opair(a, top), opair(b, top))
}
