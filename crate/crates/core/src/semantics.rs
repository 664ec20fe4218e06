//! Satisfaction of formulas in a finite set model, separation subsets, and exhaustive checks of
//! relativized axioms.
//!
//! Environments are lists of sets with index `0` at the head; a quantifier binds a new head.

use std::collections::HashSet;
use std::sync::Arc;

use crate::formula::Formula;
use crate::hfset::{self, opair, HSet};
use crate::report::CheckReport;
use crate::{Caps, Error, Result};

/// A finite set of sets, viewed as a structure for `∈`.
#[derive(Clone, Debug)]
pub struct Model {
    universe: Arc<[HSet]>,
    members: Arc<HashSet<HSet>>,
    transitive: bool,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
    }
}

impl Model {
    pub fn new(elems: impl IntoIterator<Item = HSet>) -> Model {
        let mut v: Vec<HSet> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        let members: HashSet<HSet> = v.iter().cloned().collect();
        let transitive = hfset::is_transitive(&v);
        Model {
            universe: v.into(),
            members: Arc::new(members),
            transitive,
        }
    }

    /// `V_k` as a model.
    pub fn v_stage(k: usize, caps: &Caps) -> Result<Model> {
        Ok(Model::new(hfset::v_stage_with(k, caps)?))
    }

    pub fn universe(&self) -> &[HSet] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn contains(&self, x: &HSet) -> bool {
        self.members.contains(x)
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    /// The universe as a single set.
    pub fn as_hset(&self) -> HSet {
        HSet::new(self.universe.iter().cloned())
    }

    /// `x ∩ M`
    pub fn trace(&self, x: &HSet) -> HSet {
        if self.transitive && self.contains(x) {
            return x.clone();
        }
        HSet::new(x.iter().filter(|y| self.contains(y)).cloned())
    }
}

/// Satisfaction `M, env ⊨ φ`.
pub fn sats(model: &Model, phi: &Formula, env: &[HSet]) -> Result<bool> {
    let arity = phi.arity();
    if env.len() < arity {
        return Err(Error::EnvTooShort {
            arity,
            len: env.len(),
        });
    }
    if let Some(index) = env.iter().position(|a| !model.contains(a)) {
        return Err(Error::EnvNotInModel { index });
    }
    // Stored reversed so binding pushes onto the end.
    let mut stack: Vec<HSet> = env.iter().rev().cloned().collect();
    Ok(eval(model, phi, &mut stack))
}

fn lookup(stack: &[HSet], i: usize) -> &HSet {
    &stack[stack.len() - 1 - i]
}

fn eval(model: &Model, phi: &Formula, stack: &mut Vec<HSet>) -> bool {
    match phi {
        Formula::Member(i, j) => lookup(stack, *j).contains(lookup(stack, *i)),
        Formula::Equal(i, j) => lookup(stack, *i) == lookup(stack, *j),
        Formula::Nand(p, q) => !(eval(model, p, stack) && eval(model, q, stack)),
        Formula::Forall(p) => {
            for a in model.universe.iter() {
                stack.push(a.clone());
                let ok = eval(model, p, stack);
                stack.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }
}

/// `{x ∈ A : M, [x, a] ⊨ φ}`
pub fn separation_set(model: &Model, phi: &Formula, a: &HSet, set: &HSet) -> Result<HSet> {
    let arity = phi.arity();
    if arity > 2 {
        return Err(Error::ArityTooLarge { arity, limit: 2 });
    }
    if !model.contains(a) {
        return Err(Error::EnvNotInModel { index: 1 });
    }
    if !model.contains(set) {
        return Err(Error::NameNotInModel(set.to_string()));
    }
    let mut out = Vec::new();
    for x in set.iter() {
        // Elements of A outside a non-transitive M are skipped: the quantifier is relativized.
        if model.contains(x) && sats(model, phi, &[x.clone(), a.clone()])? {
            out.push(x.clone());
        }
    }
    Ok(HSet::new(out))
}

/// Axioms that can be checked relativized to a finite model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    Extensionality,
    Foundation,
    Pairing,
    Union,
    /// The `φ`-instance of Separation with parameter `param`, or with every parameter in the
    /// model when `None`.
    Separation {
        phi: Formula,
        param: Option<HSet>,
    },
    Powerset,
}

impl Axiom {
    /// Looks up an axiom by id. Separation takes its formula from `phi`.
    pub fn from_id(id: &str, phi: Option<Formula>, param: Option<HSet>) -> Result<Axiom> {
        Ok(match id {
            "extensionality" => Axiom::Extensionality,
            "foundation" => Axiom::Foundation,
            "pairing" => Axiom::Pairing,
            "union" => Axiom::Union,
            "powerset" => Axiom::Powerset,
            "separation" | "separation-instance" => Axiom::Separation {
                phi: phi.ok_or_else(|| {
                    Error::UnknownAxiom("separation needs a formula parameter".into())
                })?,
                param,
            },
            other => return Err(Error::UnknownAxiom(other.to_string())),
        })
    }

    pub fn id(&self) -> String {
        match self {
            Axiom::Extensionality => "extensionality".into(),
            Axiom::Foundation => "foundation".into(),
            Axiom::Pairing => "pairing".into(),
            Axiom::Union => "union".into(),
            Axiom::Separation { phi, .. } => format!("separation({phi})"),
            Axiom::Powerset => "powerset".into(),
        }
    }
}

/// Exhaustively evaluates a relativized axiom over `M`.
///
/// Closure axioms ask for some `z ∈ M` whose trace `z ∩ M` is the required set; a missing `z` is
/// reported as `VIOLATED` with the offending parameters as witness.
pub fn check_relativized_axiom(model: &Model, axiom: &Axiom) -> Result<CheckReport> {
    let mut report = CheckReport::new(axiom.id());
    let u = model.universe();
    match axiom {
        Axiom::Extensionality => {
            if model.is_transitive() {
                // Traces are the sets themselves, and those are canonical.
                return Ok(report);
            }
            for (i, x) in u.iter().enumerate() {
                for y in &u[i + 1..] {
                    let separated = u.iter().any(|w| x.contains(w) != y.contains(w));
                    report.expect(separated, || opair(x, y));
                }
            }
        }
        Axiom::Foundation => {
            for x in u {
                let inside: Vec<&HSet> = x.iter().filter(|y| model.contains(y)).collect();
                if inside.is_empty() {
                    report.holds();
                    continue;
                }
                let minimal = inside.iter().any(|y| !inside.iter().any(|z| y.contains(z)));
                report.expect(minimal, || x.clone());
            }
        }
        _ => {
            let traces: HashSet<HSet> = u.iter().map(|z| model.trace(z)).collect();
            let require = |report: &mut CheckReport, target: HSet, witness: &dyn Fn() -> HSet| {
                report.expect(traces.contains(&target), witness);
            };
            match axiom {
                Axiom::Pairing => {
                    for (i, x) in u.iter().enumerate() {
                        for y in &u[i..] {
                            require(&mut report, HSet::upair(x.clone(), y.clone()), &|| {
                                opair(x, y)
                            });
                        }
                    }
                }
                Axiom::Union => {
                    for x in u {
                        let target = HSet::new(
                            x.iter()
                                .filter(|y| model.contains(y))
                                .flat_map(|y| y.iter().filter(|w| model.contains(w)).cloned()),
                        );
                        require(&mut report, target, &|| x.clone());
                    }
                }
                Axiom::Powerset => {
                    for x in u {
                        let target = HSet::new(
                            u.iter()
                                .filter(|w| w.iter().all(|v| !model.contains(v) || x.contains(v)))
                                .cloned(),
                        );
                        require(&mut report, target, &|| x.clone());
                    }
                }
                Axiom::Separation { phi, param } => {
                    let arity = phi.arity();
                    if arity > 2 {
                        return Err(Error::ArityTooLarge { arity, limit: 2 });
                    }
                    let params: Vec<HSet> = match param {
                        Some(a) => vec![a.clone()],
                        None => u.to_vec(),
                    };
                    for a in &params {
                        for set in u {
                            let target = separation_set(model, phi, a, set)?;
                            require(&mut report, target, &|| opair(set, a));
                        }
                    }
                }
                Axiom::Extensionality | Axiom::Foundation => unreachable!(),
            }
        }
    }
    Ok(report)
}
