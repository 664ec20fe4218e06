//! Generic extensions `M[G] = {val(G, τ) : τ ∈ M}` and the semantic forcing relation.
//!
//! A [`ForcingFrame`] fixes a ground model and a forcing notion and builds one [`Extension`] per
//! generic filter. `p ⊩ φ(τ0, …, τn)` is read as: every generic `G ∋ p` has
//! `M[G], [val(G,τ0), …] ⊨ φ`. Generic filters of a finite poset are the upward closures of its
//! minimal elements, so the quantifier ranges over finitely many extensions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::forcing::{cond_iter, label, Certificate, CondSet, ForcingNotion, GFilter, PosetSpec};
use crate::formula::Formula;
use crate::hfset::{eclose, opair, HSet};
use crate::names::{self, NameContext};
use crate::report::CheckReport;
use crate::semantics::{check_relativized_axiom, sats, Axiom, Model};
use crate::wfrec::edrel;
use crate::{Caps, Error, Result};

/// `M[G]` together with the names that produced each of its elements.
#[derive(Clone, Debug)]
pub struct Extension {
    ctx: NameContext,
    universe: Model,
    values: HashMap<HSet, HSet>,
    name_witness: BTreeMap<HSet, HSet>,
}

/// Builds `M[G]` by evaluating every name of the ground model.
pub fn build_extension(ctx: NameContext, caps: &Caps) -> Result<Extension> {
    let size = ctx.model.len();
    if size > caps.model_cap {
        return Err(Error::ModelTooLarge {
            size,
            cap: caps.model_cap,
        });
    }
    let ground = ctx.model.universe();
    let values: HashMap<HSet, HSet> = if ctx.model.is_transitive() {
        // Every history lies inside M, so one recursion over the membership relation of M
        // evaluates all names at once.
        let rel = edrel(&ctx.model.as_hset());
        names::vals_over(&rel, ground, &ctx.notion, &ctx.filter)
    } else {
        ground
            .par_iter()
            .map(|tau| (tau.clone(), ctx.val(tau)))
            .collect()
    };
    let mut name_witness = BTreeMap::new();
    for tau in ground {
        name_witness
            .entry(values[tau].clone())
            .or_insert_with(|| tau.clone());
    }
    let universe = Model::new(name_witness.keys().cloned());
    debug_assert!(universe.is_transitive());
    Ok(Extension {
        ctx,
        universe,
        values,
        name_witness,
    })
}

impl Extension {
    pub fn ctx(&self) -> &NameContext {
        &self.ctx
    }

    pub fn filter(&self) -> &GFilter {
        &self.ctx.filter
    }

    pub fn universe(&self) -> &Model {
        &self.universe
    }

    pub fn contains(&self, x: &HSet) -> bool {
        self.universe.contains(x)
    }

    /// `val(G, τ)` for a name of the ground model.
    pub fn value_of(&self, tau: &HSet) -> Result<HSet> {
        self.values
            .get(tau)
            .cloned()
            .ok_or_else(|| Error::NameNotInModel(tau.to_string()))
    }

    /// `val(G, τ)` for an arbitrary name.
    pub fn val(&self, tau: &HSet) -> HSet {
        match self.values.get(tau) {
            Some(v) => v.clone(),
            None => self.ctx.val(tau),
        }
    }

    /// The least name in the ground model whose value is `x`.
    pub fn name_witness(&self, x: &HSet) -> Option<&HSet> {
        self.name_witness.get(x)
    }

    /// `M[G] \ M`
    pub fn new_elements(&self) -> Vec<HSet> {
        self.universe
            .universe()
            .iter()
            .filter(|x| !self.ctx.model.contains(x))
            .cloned()
            .collect()
    }

    /// Number of ground elements that are also elements of `M[G]`.
    pub fn ground_overlap(&self) -> usize {
        self.ctx
            .model
            .universe()
            .iter()
            .filter(|x| self.contains(x))
            .count()
    }

    pub fn contains_ground(&self) -> bool {
        self.ground_overlap() == self.ctx.model.len()
    }

    pub fn contains_filter(&self) -> bool {
        self.contains(&self.ctx.filter_set())
    }

    pub fn dump(&self, ground_rank: Option<usize>) -> ExtensionDump {
        let notion = &self.ctx.notion;
        ExtensionDump {
            ground_rank,
            poset: PosetSpec::from(notion.as_ref()),
            generic: self
                .filter()
                .conditions()
                .map(|p| label(notion.element(p)))
                .collect(),
            universe_size: self.universe.len(),
            new_elements: self.new_elements(),
        }
    }
}

/// JSON summary of an extension.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionDump {
    pub ground_rank: Option<usize>,
    pub poset: PosetSpec,
    pub generic: Vec<serde_json::Value>,
    pub universe_size: usize,
    pub new_elements: Vec<HSet>,
}

/// One row of a forcing trace: a generic filter and whether the formula holds in its extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub filter: Vec<usize>,
    pub contains_p: bool,
    pub satisfied: bool,
}

/// A ground model, a forcing notion, and the extensions by all of its generic filters.
#[derive(Debug)]
pub struct ForcingFrame {
    model: Model,
    notion: Arc<ForcingNotion>,
    caps: Caps,
    extensions: Vec<Extension>,
    scanned: OnceLock<Result<Vec<Extension>>>,
}

impl ForcingFrame {
    pub fn new(model: Model, notion: impl Into<Arc<ForcingNotion>>, caps: &Caps) -> Result<Self> {
        let notion = notion.into();
        let extensions = notion
            .generic_filters()
            .into_par_iter()
            .map(|g| build_extension(NameContext::new(model.clone(), notion.clone(), g), caps))
            .collect::<Result<Vec<_>>>()?;
        Ok(ForcingFrame {
            model,
            notion,
            caps: caps.clone(),
            extensions,
            scanned: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn notion(&self) -> &ForcingNotion {
        &self.notion
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn extensions(&self) -> &[Extension] {
        &self.extensions
    }

    pub fn extension(&self, i: usize) -> &Extension {
        &self.extensions[i]
    }

    fn validate_query(&self, p: usize, phi: &Formula, names: &[HSet]) -> Result<()> {
        if p >= self.notion.len() {
            return Err(Error::InvalidPoset(format!("no condition with index {p}")));
        }
        let arity = phi.arity();
        if names.len() < arity {
            return Err(Error::EnvTooShort {
                arity,
                len: names.len(),
            });
        }
        match names.iter().find(|n| !self.model.contains(n)) {
            Some(n) => Err(Error::NameNotInModel(n.to_string())),
            None => Ok(()),
        }
    }

    fn satisfied_in(ext: &Extension, phi: &Formula, names: &[HSet]) -> Result<bool> {
        let env = names
            .iter()
            .map(|n| ext.value_of(n))
            .collect::<Result<Vec<_>>>()?;
        sats(ext.universe(), phi, &env)
    }

    /// `p ⊩ φ(names)`
    pub fn forces(&self, p: usize, phi: &Formula, names: &[HSet]) -> Result<bool> {
        self.validate_query(p, phi, names)?;
        for ext in self.extensions.iter().filter(|e| e.filter().contains(p)) {
            if !Self::satisfied_in(ext, phi, names)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The satisfaction table behind `p ⊩ φ(names)`, one row per generic filter.
    pub fn forces_trace(&self, p: usize, phi: &Formula, names: &[HSet]) -> Result<Vec<TraceRow>> {
        self.validate_query(p, phi, names)?;
        self.extensions
            .iter()
            .map(|ext| {
                Ok(TraceRow {
                    filter: ext.filter().conditions().collect(),
                    contains_p: ext.filter().contains(p),
                    satisfied: Self::satisfied_in(ext, phi, names)?,
                })
            })
            .collect()
    }

    /// The set of conditions forcing `φ(names)`, evaluating each extension once.
    pub fn forcing_set(&self, phi: &Formula, names: &[HSet]) -> Result<CondSet> {
        self.validate_query(self.notion.top(), phi, names)?;
        let mut failing: CondSet = 0;
        for ext in &self.extensions {
            if !Self::satisfied_in(ext, phi, names)? {
                failing |= ext.filter().members;
            }
        }
        Ok(self.notion.full() & !failing)
    }

    /// Extensions by the generic filters found by scanning every subset of `P`.
    fn scanned_extensions(&self) -> Result<&[Extension]> {
        let built = self.scanned.get_or_init(|| {
            let mut out = Vec::new();
            for members in self.notion.all_filters(&self.caps)? {
                if self.notion.is_generic(members, &self.caps)? {
                    let g = GFilter {
                        members,
                        certificate: Certificate::Scanned,
                    };
                    let ctx = NameContext::new(self.model.clone(), self.notion.clone(), g);
                    out.push(build_extension(ctx, &self.caps)?);
                }
            }
            Ok(out)
        });
        match built {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// `p ⊩ φ(names)` with the generic filters found by the subset scan instead of the minimal
    /// elements, and the extensions rebuilt from scratch.
    pub fn forces_by_scan(&self, p: usize, phi: &Formula, names: &[HSet]) -> Result<bool> {
        self.validate_query(p, phi, names)?;
        for ext in self.scanned_extensions()? {
            if ext.filter().contains(p) && !Self::satisfied_in(ext, phi, names)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Both enumerations of generic filters agree on `p ⊩ φ(names)` for every `p`.
    pub fn definition_check(&self, phi: &Formula, names: &[HSet]) -> Result<CheckReport> {
        let mut report = CheckReport::new("definition_of_forcing");
        let forced = self.forcing_set(phi, names)?;
        for p in 0..self.notion.len() {
            let by_scan = self.forces_by_scan(p, phi, names)?;
            let direct = self.forces(p, phi, names)?;
            report.expect(
                by_scan == direct && direct == (forced & 1 << p != 0),
                || self.notion.element(p).clone(),
            );
        }
        Ok(report)
    }

    /// `M[G] ⊨ φ(vals) ⇔ ∃p ∈ G. p ⊩ φ(names)` for the `ext`-th extension.
    pub fn truth_lemma_check(
        &self,
        ext: usize,
        phi: &Formula,
        names: &[HSet],
    ) -> Result<CheckReport> {
        let mut report = CheckReport::new("truth_lemma");
        let extension = &self.extensions[ext];
        let lhs = Self::satisfied_in(extension, phi, names)?;
        let forced = self.forcing_set(phi, names)?;
        let rhs = extension.filter().members & forced != 0;
        report.expect(lhs == rhs, || extension.ctx().filter_set());
        Ok(report)
    }

    /// `p ⊩ φ ∧ p1 ≤ p ⇒ p1 ⊩ φ` over all of `P × P`.
    pub fn strengthening_check(&self, phi: &Formula, names: &[HSet]) -> Result<CheckReport> {
        let mut report = CheckReport::new("strengthening");
        let forced = self.forcing_set(phi, names)?;
        let n = &self.notion;
        for p in cond_iter(forced) {
            for p1 in cond_iter(n.down(p)) {
                report.expect(forced & 1 << p1 != 0, || opair(n.element(p), n.element(p1)));
            }
        }
        Ok(report)
    }

    /// `p ⊩ φ ⇔ {p1 : p1 ⊩ φ} is dense below p`
    pub fn density_check(&self, p: usize, phi: &Formula, names: &[HSet]) -> Result<CheckReport> {
        let mut report = CheckReport::new("density");
        let lhs = self.forces(p, phi, names)?;
        let forced = self.forcing_set(phi, names)?;
        let rhs = self.notion.dense_below(forced, p);
        report.expect(lhs == rhs, || self.notion.element(p).clone());
        Ok(report)
    }

    /// Checks an axiom in the `ext`-th extension.
    ///
    /// Extensionality and Foundation are evaluated directly. The closure axioms look for the
    /// required set in `M[G]` and, when it is missing, for the name that would have produced
    /// it: a name in `M` means the construction is broken (`VIOLATED`), a name outside `M` means
    /// the finite ground model is not closed enough (`PRECONDITION_UNMET`).
    pub fn verify_axiom_in_extension(&self, ext: usize, axiom: &Axiom) -> Result<CheckReport> {
        let extension = &self.extensions[ext];
        let mg = extension.universe();
        match axiom {
            Axiom::Extensionality | Axiom::Foundation => check_relativized_axiom(mg, axiom),
            Axiom::Pairing => Ok(self.pairing(extension)),
            Axiom::Union => Ok(self.union(extension)),
            Axiom::Separation { phi, param } => self.separation(ext, phi, param.as_ref()),
            Axiom::Powerset => self.powerset(ext),
        }
    }

    fn witness(&self, ext: &Extension, x: &HSet) -> HSet {
        ext.name_witness(x)
            .expect("every element of M[G] has a name")
            .clone()
    }

    fn pairing(&self, ext: &Extension) -> CheckReport {
        let mut report = CheckReport::new("pairing");
        let u = ext.universe().universe();
        for (i, a) in u.iter().enumerate() {
            for b in &u[i..] {
                if ext.contains(&HSet::upair(a.clone(), b.clone())) {
                    report.holds();
                    continue;
                }
                let name =
                    names::upair_name(&self.notion, &self.witness(ext, a), &self.witness(ext, b));
                if self.model.contains(&name) {
                    report.violated(opair(a, b));
                } else {
                    report.unmet(opair(a, b));
                }
            }
        }
        report
    }

    fn union(&self, ext: &Extension) -> CheckReport {
        let mut report = CheckReport::new("union");
        for a in ext.universe().universe() {
            let tau = self.witness(ext, a);
            let name = names::union_name(&self.notion, &tau);
            let target = a.big_union();
            if ext.val(&name) != target {
                report.violated(a.clone());
            } else if ext.contains(&target) {
                report.holds();
            } else if self.model.contains(&name) {
                report.violated(a.clone());
            } else {
                report.unmet(a.clone());
            }
        }
        report
    }

    fn separation(&self, ext: usize, phi: &Formula, param: Option<&HSet>) -> Result<CheckReport> {
        let arity = phi.arity();
        if arity > 2 {
            return Err(Error::ArityTooLarge { arity, limit: 2 });
        }
        let extension = &self.extensions[ext];
        let mg = extension.universe();
        let mut report = CheckReport::new(format!("separation({phi})"));
        let params: Vec<HSet> = match param {
            Some(w) => vec![w.clone()],
            None => mg.universe().to_vec(),
        };
        for w in &params {
            let sigma = extension
                .name_witness(w)
                .ok_or_else(|| Error::NameNotInModel(w.to_string()))?;
            for c in mg.universe() {
                let pi = self.witness(extension, c);
                let target = crate::semantics::separation_set(mg, phi, w, c)?;
                let n = names::sep_name(self, &pi, sigma, phi)?;
                let m = names::sep_name_m(self, ext, &pi, sigma, phi)?;
                let (val_n, val_m) = (extension.val(&n), extension.val(&m));
                if val_n != target || !val_n.is_subset(&val_m) || val_m != target {
                    report.violated(opair(c, w));
                } else if mg.contains(&target) {
                    report.holds();
                } else if self.model.contains(&n) {
                    report.violated(opair(c, w));
                } else {
                    report.unmet(opair(c, w));
                }
            }
        }
        Ok(report)
    }

    fn powerset(&self, ext: usize) -> Result<CheckReport> {
        let extension = &self.extensions[ext];
        let mg = extension.universe();
        let mut report = CheckReport::new("powerset");
        let subset = names::subset_formula();
        for a in mg.universe() {
            let pi = self.witness(extension, a);
            let target = HSet::new(mg.universe().iter().filter(|b| b.is_subset(a)).cloned());
            let pn = names::pow_name(&self.model, &self.notion, &pi, &self.caps)?;
            let covered = extension.val(&pn);
            // Every b ⊆ a in M[G] whose χ-name lies in M must be covered by the powerset name.
            let mut inclusion_ok = true;
            for b in target.iter().filter(|b| !covered.contains(b)) {
                let beta = self.witness(extension, b);
                let chi = self.chi_name(&pi, &beta)?;
                if self.model.contains(&chi) {
                    inclusion_ok = false;
                }
            }
            if !inclusion_ok {
                report.violated(a.clone());
            } else if mg.contains(&target) {
                report.holds();
            } else if self.model.contains(&pn) {
                let carved = names::sep_name(self, &pn, &pi, &subset)?;
                let exact = extension.val(&carved) == target;
                if target.is_subset(&covered) && (!exact || self.model.contains(&carved)) {
                    report.violated(a.clone());
                } else {
                    report.unmet(a.clone());
                }
            } else {
                report.unmet(a.clone());
            }
        }
        Ok(report)
    }

    /// `{⟨θ,p⟩ ∈ dom(π) × P : p ⊩ θ ∈ β}`, the candidate `χ` that names `val(β) ∩ val(π)`.
    pub fn chi_name(&self, pi: &HSet, beta: &HSet) -> Result<HSet> {
        let mut out = Vec::new();
        for theta in crate::hfset::domain(pi).iter() {
            let env = [theta.clone(), beta.clone()];
            let forced = self.forcing_set(&Formula::mem(0, 1), &env)?;
            for p in cond_iter(forced) {
                out.push(opair(theta, self.notion.element(p)));
            }
        }
        Ok(HSet::new(out))
    }

    /// Transitivity of `M[G]`, `M ⊆ M[G]` through check names, and `G ∈ M[G]` through `Ġ`.
    ///
    /// The value equations `val(check x) = x` and `val(Ġ) = G` are asserted outright; the
    /// memberships are asserted whenever the witnessing name lies in `M`.
    pub fn structure_checks(&self, ext: usize) -> Vec<CheckReport> {
        let extension = &self.extensions[ext];
        let mut transitive = CheckReport::new("transitive");
        transitive.expect(extension.universe().is_transitive(), || {
            extension.universe().as_hset()
        });

        let mut ground = CheckReport::new("ground_inclusion");
        let ground_elems = self.model.universe();
        let checks = names::check_all(&self.notion, ground_elems);
        let closure = eclose(&HSet::new(checks.iter().cloned()));
        let check_vals =
            names::vals_over(&edrel(&closure), &checks, &self.notion, extension.filter());
        for (x, c) in ground_elems.iter().zip(&checks) {
            if check_vals[c] != *x {
                ground.violated(x.clone());
            } else if extension.contains(x) {
                ground.holds();
            } else if self.model.contains(c) {
                ground.violated(x.clone());
            } else {
                ground.unmet(x.clone());
            }
        }

        let mut generic = CheckReport::new("generic_membership");
        let g_dot = names::g_dot(&self.notion);
        let g = extension.ctx().filter_set();
        if extension.val(&g_dot) != g {
            generic.violated(g);
        } else if extension.contains(&g) {
            generic.holds();
        } else if self.model.contains(&g_dot) {
            generic.violated(g);
        } else {
            generic.unmet(g);
        }
        vec![transitive, ground, generic]
    }
}
