//! Batch verification runs.
//!
//! A run selects suites by id and executes them concurrently. Every randomized suite draws from
//! its own ChaCha stream of the single run seed, so the report depends only on the
//! configuration, never on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extension::ForcingFrame;
use crate::forcing::{ForcingNotion, GFilter};
use crate::formula::{parse, ren, Formula, Renaming};
use crate::hfset::{HRelation, HSet};
use crate::names::{self, NameContext};
use crate::report::{CheckReport, Status};
use crate::semantics::{sats, Axiom, Model};
use crate::wfrec::{edrel, trancl_predecessors, wfrec, Predecessors};
use crate::{Caps, Error, Result};

/// The built-in formula suite: arity at most 2, quantifier depth at most 3.
pub const BUILTIN_FORMULAS: [&str; 30] = [
    "Eq 0 0",
    "Neg (Eq 0 0)",
    "Mem 0 1",
    "Mem 1 0",
    "Eq 0 1",
    "Mem 0 0",
    "Neg (Mem 0 1)",
    "All (Neg (Mem 0 1))",
    "All (Neg (Mem 0 2))",
    "Ex (Mem 0 1)",
    "All (Imp (Mem 0 1) (Mem 0 2))",
    "All (Imp (Mem 0 2) (Mem 0 1))",
    "All (Iff (Mem 0 1) (Mem 0 2))",
    "Ex (And (Mem 0 1) (Mem 0 2))",
    "All (Imp (Mem 0 1) (All (Imp (Mem 0 1) (Mem 0 2))))",
    "Ex (All (Neg (Mem 0 1)))",
    "All (Imp (Mem 0 1) (Ex (And (Mem 0 2) (Mem 1 0))))",
    "Ex (And (Mem 0 1) (All (Neg (Mem 0 1))))",
    "All (All (Imp (And (Mem 0 3) (Mem 1 3)) (Eq 0 1)))",
    "All (Imp (Mem 0 1) (Eq 0 2))",
    "And (Mem 0 1) (Mem 1 0)",
    "Or (Mem 0 1) (Eq 0 1)",
    "Ex (And (Mem 0 1) (Mem 2 0))",
    "All (Ex (Mem 1 0))",
    "Ex (Ex (And (Mem 0 2) (And (Mem 1 2) (Neg (Eq 0 1)))))",
    "All (Iff (Mem 0 1) (Or (Eq 0 2) (Mem 0 2)))",
    "Ex (All (Imp (Mem 0 2) (Mem 0 1)))",
    "Imp (Ex (Mem 0 1)) (Ex (And (Mem 0 1) (All (Neg (And (Mem 0 1) (Mem 0 2))))))",
    "All (Ex (All (Iff (Mem 0 1) (Or (Eq 0 2) (Eq 0 3)))))",
    "Ex (All (Iff (Mem 0 1) (And (Mem 0 2) (Mem 0 3))))",
];

pub fn builtin_formulas() -> Vec<Formula> {
    BUILTIN_FORMULAS
        .iter()
        .map(|s| parse(s).expect("built-in formula parses"))
        .collect()
}

/// One formula per line; blank lines and lines starting with `#` are skipped.
pub fn parse_formula_file(text: &str) -> Result<Vec<Formula>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Renaming,
    Recursion,
    Names,
    Fundamental,
    Axioms,
}

impl SuiteId {
    pub const ALL: [SuiteId; 5] = [
        SuiteId::Renaming,
        SuiteId::Recursion,
        SuiteId::Names,
        SuiteId::Fundamental,
        SuiteId::Axioms,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Renaming => "renaming",
            SuiteId::Recursion => "recursion",
            SuiteId::Names => "names",
            SuiteId::Fundamental => "fundamental",
            SuiteId::Axioms => "axioms",
        }
    }

    fn stream(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuiteId> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// The rng of one suite: stream `suite` of the ChaCha generator keyed by `seed`.
pub fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub ground_rank: usize,
    /// The poset as given on the command line: a preset name or a file path.
    pub poset: String,
    #[serde(skip)]
    pub notion: ForcingNotion,
    /// The formula file, or `builtin`.
    pub formulas: String,
    #[serde(skip)]
    pub formula_suite: Vec<Formula>,
    pub suites: Vec<SuiteId>,
    pub seed: u64,
    pub caps: Caps,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ground_rank > self.caps.max_stage {
            return Err(Error::StageTooLarge {
                stage: self.ground_rank,
                cap: self.caps.max_stage,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub suite: SuiteId,
    pub check: String,
    pub report: CheckReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub precondition_unmet: usize,
    pub violated: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub checks: Vec<CheckEntry>,
    pub summary: Summary,
    /// Seconds per suite; only recorded on request, since it breaks byte-identical output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<SuiteId, f64>>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.violated > 0 {
            1
        } else {
            0
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<12} {:<44} {:<19} {:>8}",
                c.suite.as_str(),
                c.check,
                c.report.status.to_string(),
                c.report.instances_checked
            ));
            if let Some(w) = &c.report.witness {
                if c.report.status != Status::Holds {
                    out.push_str(&format!("  witness {w}"));
                }
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "holds {}, precondition_unmet {}, violated {}\n",
            self.summary.holds, self.summary.precondition_unmet, self.summary.violated
        ));
        if let Some(t) = &self.timings {
            for (id, secs) in t {
                out.push_str(&format!("{id}: {secs:.3}s\n"));
            }
        }
        out
    }
}

/// Runs every selected suite; suites execute concurrently, results are ordered by suite id.
pub fn run(config: &RunConfig, timings: bool) -> Result<RunReport> {
    config.validate()?;
    let mut ids = config.suites.clone();
    ids.sort();
    ids.dedup();
    let results: Vec<(SuiteId, Vec<(String, CheckReport)>, f64)> = ids
        .par_iter()
        .map(|&id| {
            let start = Instant::now();
            let checks = run_suite(config, id)?;
            Ok((id, checks, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    let mut summary = Summary::default();
    let mut times = BTreeMap::new();
    for (suite, reports, secs) in results {
        times.insert(suite, secs);
        for (check, report) in reports {
            match report.status {
                Status::Holds => summary.holds += 1,
                Status::PreconditionUnmet => summary.precondition_unmet += 1,
                Status::Violated => summary.violated += 1,
            }
            checks.push(CheckEntry {
                suite,
                check,
                report,
            });
        }
    }
    Ok(RunReport {
        config: config.clone(),
        checks,
        summary,
        timings: timings.then_some(times),
    })
}

fn run_suite(config: &RunConfig, id: SuiteId) -> Result<Vec<(String, CheckReport)>> {
    let mut rng = suite_rng(config.seed, id.stream());
    let caps = &config.caps;
    let k = config.ground_rank;
    match id {
        SuiteId::Renaming => {
            let stages: Vec<Model> = (2..=k.clamp(2, 4))
                .map(|s| Model::v_stage(s, caps))
                .collect::<Result<_>>()?;
            Ok(renaming_checks(&stages, 1000, &mut rng))
        }
        SuiteId::Recursion => Ok(vec![(
            "wfrec_restr".into(),
            recursion_restriction(500, &mut rng),
        )]),
        SuiteId::Names => {
            let ground = Model::v_stage(k, caps)?;
            let pool = Model::v_stage(k.min(4), caps)?;
            let notion = std::sync::Arc::new(config.notion.clone());
            let mut out: Vec<(String, CheckReport)> = Vec::new();
            for g in notion.generic_filters() {
                let ctx = NameContext::new(ground.clone(), notion.clone(), g);
                merge_into(
                    &mut out,
                    name_equations(&ctx, pool.universe(), 1000, 100, &mut rng),
                );
            }
            Ok(out)
        }
        SuiteId::Fundamental => {
            let frame = ForcingFrame::new(Model::v_stage(k, caps)?, config.notion.clone(), caps)?;
            let pool = Model::v_stage(k.min(3), caps)?;
            fundamental_checks(&frame, &config.formula_suite, pool.universe())
        }
        SuiteId::Axioms => {
            let frame = ForcingFrame::new(Model::v_stage(k, caps)?, config.notion.clone(), caps)?;
            let separation: Vec<Formula> = config
                .formula_suite
                .iter()
                .filter(|phi| phi.arity() <= 2)
                .take(15)
                .cloned()
                .collect();
            axiom_checks(&frame, &separation)
        }
    }
}

/// Adds reports into an accumulator keyed by check name, keeping first-seen order.
pub fn merge_into(acc: &mut Vec<(String, CheckReport)>, more: Vec<(String, CheckReport)>) {
    for (name, report) in more {
        match acc.iter_mut().find(|(n, _)| *n == name) {
            Some((_, r)) => r.merge(&report),
            None => acc.push((name, report)),
        }
    }
}

/// A random formula whose free indices are below `context`.
pub fn random_formula(rng: &mut impl Rng, context: usize, depth: usize) -> Formula {
    let atom = |rng: &mut dyn rand::RngCore| {
        let i = rng.gen_range(0..context);
        let j = rng.gen_range(0..context);
        if rng.gen_bool(0.5) {
            Formula::mem(i, j)
        } else {
            Formula::eq(i, j)
        }
    };
    if depth == 0 || rng.gen_bool(0.25) {
        return atom(rng);
    }
    if rng.gen_bool(0.5) {
        Formula::nand(
            random_formula(rng, context, depth - 1),
            random_formula(rng, context, depth - 1),
        )
    } else {
        Formula::forall(random_formula(rng, context + 1, depth - 1))
    }
}

pub fn random_renaming(rng: &mut impl Rng, n: usize, max_target: usize) -> Renaming {
    let m = rng.gen_range(1..=max_target);
    let map = (0..n).map(|_| rng.gen_range(0..m)).collect();
    Renaming::new(n, m, map).expect("table values are below the target")
}

/// `M, env ⊨ φ[f] ⇔ M, env∘f ⊨ φ`, together with identity and composition laws of `ren`.
pub fn renaming_checks(
    stages: &[Model],
    instances: usize,
    rng: &mut impl Rng,
) -> Vec<(String, CheckReport)> {
    let mut lemma = CheckReport::new("sats_iff_sats_ren");
    let mut functor = CheckReport::new("ren_functoriality");
    for _ in 0..instances {
        let model = stages.choose(rng).expect("at least one stage");
        let n = rng.gen_range(1..=3);
        let phi = random_formula(rng, n, 4);
        let f = random_renaming(rng, n, 4);
        let env: Vec<HSet> = (0..f.target())
            .map(|_| model.universe().choose(rng).expect("nonempty").clone())
            .collect();
        let pulled: Vec<HSet> = (0..n).map(|i| env[f.apply(i)].clone()).collect();
        let renamed = ren(&phi, &f).expect("arity fits the source context");
        let lhs = sats(model, &renamed, &env).expect("environment is long enough");
        let rhs = sats(model, &phi, &pulled).expect("environment is long enough");
        lemma.expect(lhs == rhs, || HSet::new(env.iter().cloned()));

        let g = random_renaming(rng, f.target(), 4);
        let composite = f.then(&g).expect("contexts compose");
        let twice = ren(&renamed, &g).expect("arity fits");
        let once = ren(&phi, &composite).expect("arity fits");
        let id = ren(&phi, &Renaming::identity(n)).expect("arity fits");
        functor.expect(
            twice == once && id == phi && renamed.same_shape(&phi) && renamed.arity() <= f.target(),
            || HSet::nat(n),
        );
    }
    vec![
        ("sats_iff_sats_ren".into(), lemma),
        ("ren_functoriality".into(), functor),
    ]
}

/// Functionals used to exercise the recursion: each reads only the predecessor values.
fn functional(which: usize) -> impl Fn(&HSet, &Predecessors) -> Result<HSet> {
    move |x: &HSet, below: &Predecessors| {
        let values = below.entries();
        Ok(match which {
            0 => HSet::new(values.into_iter().map(|(_, v)| v.clone())),
            1 => values
                .into_iter()
                .map(|(_, v)| v.succ())
                .max_by_key(|v| v.rank())
                .unwrap_or_default(),
            2 => HSet::new(values.into_iter().map(|(_, v)| v.clone()))
                .big_union()
                .insert(x.clone()),
            _ => HSet::new(values.into_iter().map(|(y, v)| crate::hfset::opair(y, v))),
        })
    }
}

/// A random acyclic relation on `{0, …, size-1}` (edges go upward), as naturals.
pub fn random_wf_relation(rng: &mut impl Rng, size: usize) -> HRelation {
    let mut r = HRelation::new();
    for y in 0..size {
        for x in 0..y {
            if rng.gen_bool(0.3) {
                r.insert(HSet::nat(x), HSet::nat(y));
            }
        }
    }
    r
}

/// `wfrec(r, a, H) = wfrec(r ∩ A×A, a, H)` whenever `A` contains `a` and its `r⁺`-predecessors.
pub fn recursion_restriction(instances: usize, rng: &mut impl Rng) -> CheckReport {
    let mut report = CheckReport::new("wfrec_restr");
    for _ in 0..instances {
        let size = rng.gen_range(1..=10);
        let r = random_wf_relation(rng, size);
        let a = HSet::nat(rng.gen_range(0..size));
        let mut keep = trancl_predecessors(&r, &a);
        keep.insert(a.clone());
        for x in 0..size {
            if rng.gen_bool(0.3) {
                keep.insert(HSet::nat(x));
            }
        }
        let h = functional(rng.gen_range(0..4));
        let full = wfrec(&r, &a, &h);
        let restricted = wfrec(&r.restrict(&keep), &a, &h);
        report.expect(full.is_ok() && full == restricted, || a.clone());
    }
    report
}

/// The equations of names over one generic filter, with names drawn from `pool`.
pub fn name_equations(
    ctx: &NameContext,
    pool: &[HSet],
    mono_samples: usize,
    eq2_samples: usize,
    rng: &mut impl Rng,
) -> Vec<(String, CheckReport)> {
    let notion = &ctx.notion;
    let filter = &ctx.filter;
    let values: BTreeMap<&HSet, HSet> = pool.iter().map(|t| (t, ctx.val(t))).collect();

    let mut def_val = CheckReport::new("def_val");
    let mut check_val = CheckReport::new("val_check");
    let mut union_eq = CheckReport::new("union_name");
    let mut restr = CheckReport::new("val_wfrec_restr");
    let global = ctx
        .model
        .is_transitive()
        .then(|| edrel(&ctx.model.as_hset()));
    for (&tau, v) in &values {
        def_val.expect(names::val_unfolded(notion, filter, tau) == *v, || {
            tau.clone()
        });
        let c = names::check(notion, tau);
        check_val.expect(ctx.val(&c) == *tau, || tau.clone());
        let u = names::union_name(notion, tau);
        union_eq.expect(ctx.val(&u) == v.big_union(), || tau.clone());
        if let (Some(rel), true) = (&global, ctx.model.contains(tau)) {
            restr.expect(names::val_over(rel, notion, filter, tau) == *v, || {
                tau.clone()
            });
        }
    }

    let mut mono = CheckReport::new("val_mono");
    for _ in 0..mono_samples {
        let y = pool.choose(rng).expect("nonempty pool");
        let x = HSet::new(y.iter().filter(|_| rng.gen_bool(0.5)).cloned());
        mono.expect(ctx.val(&x).is_subset(&values[y]), || {
            crate::hfset::opair(&x, y)
        });
    }

    let mut g_dot = CheckReport::new("val_g_dot");
    g_dot.expect(ctx.val(&names::g_dot(notion)) == ctx.filter_set(), || {
        ctx.filter_set()
    });

    let mut eq2 = CheckReport::new("separation_defined_name");
    for _ in 0..eq2_samples {
        let a = HSet::new(pool.iter().filter(|_| rng.gen_bool(0.3)).cloned());
        let cells = crate::hfset::cartprod(&a, &notion.carrier());
        let chosen: std::collections::HashSet<HSet> = cells
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        let b = names::separation_name(notion, &a, |u| chosen.contains(u));
        let expected = HSet::new(
            a.iter()
                .filter(|&t| {
                    filter
                        .conditions()
                        .any(|p| chosen.contains(&crate::hfset::opair(t, notion.element(p))))
                })
                .map(|t| ctx.val(t)),
        );
        eq2.expect(ctx.val(&b) == expected, || b.clone());
    }

    let mut out = vec![
        ("def_val".to_string(), def_val),
        ("val_mono".into(), mono),
        ("val_check".into(), check_val),
        ("val_g_dot".into(), g_dot),
        ("union_name".into(), union_eq),
        ("separation_defined_name".into(), eq2),
    ];
    if global.is_some() {
        out.push(("val_wfrec_restr".into(), restr));
    }
    out
}

/// Truth, Strengthening, Density and the two enumerations of the forcing relation, for every
/// formula, every pair of names from `pool`, every condition and every generic filter.
pub fn fundamental_checks(
    frame: &ForcingFrame,
    formulas: &[Formula],
    pool: &[HSet],
) -> Result<Vec<(String, CheckReport)>> {
    let envs: Vec<[HSet; 2]> = pool
        .iter()
        .flat_map(|a| pool.iter().map(move |b| [a.clone(), b.clone()]))
        .collect();
    let per_formula: Vec<Vec<(String, CheckReport)>> = formulas
        .par_iter()
        .map(|phi| {
            let mut truth = CheckReport::new("truth_lemma");
            let mut strengthening = CheckReport::new("strengthening");
            let mut density = CheckReport::new("density");
            let mut definition = CheckReport::new("definition_of_forcing");
            if phi.arity() > 2 {
                return Err(Error::ArityTooLarge {
                    arity: phi.arity(),
                    limit: 2,
                });
            }
            for env in &envs {
                for i in 0..frame.extensions().len() {
                    truth.merge(&frame.truth_lemma_check(i, phi, env)?);
                }
                strengthening.merge(&frame.strengthening_check(phi, env)?);
                for p in 0..frame.notion().len() {
                    density.merge(&frame.density_check(p, phi, env)?);
                }
                definition.merge(&frame.definition_check(phi, env)?);
            }
            Ok(vec![
                ("truth_lemma".to_string(), truth),
                ("strengthening".into(), strengthening),
                ("density".into(), density),
                ("definition_of_forcing".into(), definition),
            ])
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for reports in per_formula {
        merge_into(&mut out, reports);
    }
    Ok(out)
}

/// Structure and axiom checks in every extension of the frame.
pub fn axiom_checks(
    frame: &ForcingFrame,
    separation: &[Formula],
) -> Result<Vec<(String, CheckReport)>> {
    let mut axioms = vec![
        Axiom::Extensionality,
        Axiom::Foundation,
        Axiom::Pairing,
        Axiom::Union,
        Axiom::Powerset,
    ];
    let mut ids: Vec<String> = axioms.iter().map(Axiom::id).collect();
    for (i, phi) in separation.iter().enumerate() {
        axioms.push(Axiom::Separation {
            phi: phi.clone(),
            param: None,
        });
        ids.push(format!("separation[{i}]"));
    }
    let mut out = Vec::new();
    for i in 0..frame.extensions().len() {
        let structure = frame.structure_checks(i);
        merge_into(
            &mut out,
            structure
                .into_iter()
                .map(|r| (r.axiom.clone(), r))
                .collect(),
        );
        let reports: Vec<(String, CheckReport)> = axioms
            .par_iter()
            .zip(ids.par_iter())
            .map(|(ax, id)| Ok((id.clone(), frame.verify_axiom_in_extension(i, ax)?)))
            .collect::<Result<_>>()?;
        merge_into(&mut out, reports);
    }
    Ok(out)
}

/// A filter from the subset scan, for tests that compare enumerations.
pub fn scanned_generics(notion: &ForcingNotion, caps: &Caps) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for f in notion.all_filters(caps)? {
        if notion.is_generic(f, caps)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Member masks of the minimal-element generic filters, sorted.
pub fn oracle_generics(notion: &ForcingNotion) -> Vec<u64> {
    let mut v: Vec<u64> = notion
        .generic_filters()
        .iter()
        .map(|g: &GFilter| g.members)
        .collect();
    v.sort();
    v
}

/// A random family of dense sets of the poset.
pub fn random_dense_family(
    notion: &ForcingNotion,
    caps: &Caps,
    len: usize,
    rng: &mut impl Rng,
) -> Result<Vec<u64>> {
    let dense = notion.dense_sets(caps)?;
    Ok((0..len)
        .map(|_| *dense.choose(rng).expect("the full set is dense"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn builtin_suite_shape() {
        let fs = builtin_formulas();
        assert_eq!(fs.len(), 30);
        assert!(fs
            .iter()
            .all(|f| f.arity() <= 2 && f.quantifier_depth() <= 3));
    }

    #[test]
    fn formula_file() {
        let fs = parse_formula_file("# comment\n\nMem 0 1\n  Eq 0 0  \n").unwrap();
        assert_eq!(fs, vec![Formula::mem(0, 1), Formula::eq(0, 0)]);
        assert!(parse_formula_file("Mem 0").is_err());
    }

    #[test]
    fn suite_ids() {
        assert_eq!("names".parse::<SuiteId>().unwrap(), SuiteId::Names);
        assert!("bogus".parse::<SuiteId>().is_err());
        assert_eq!(
            serde_json::to_string(&SuiteId::Axioms).unwrap(),
            "\"axioms\""
        );
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a: u64 = suite_rng(7, 2).gen();
        let _: u64 = suite_rng(7, 1).gen();
        let b: u64 = suite_rng(7, 2).gen();
        assert_eq!(a, b);
        assert_ne!(a, suite_rng(7, 3).gen::<u64>());
    }

    fn config(suites: Vec<SuiteId>, rank: usize) -> RunConfig {
        RunConfig {
            ground_rank: rank,
            poset: "v-shape".into(),
            notion: presets::v_shape(),
            formulas: "builtin".into(),
            formula_suite: builtin_formulas(),
            suites,
            seed: 1,
            caps: Caps::default(),
        }
    }

    #[test]
    fn run_is_deterministic_and_clean() {
        let cfg = config(vec![SuiteId::Names, SuiteId::Recursion], 3);
        let a = serde_json::to_string(&run(&cfg, false).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&cfg, false).unwrap()).unwrap();
        assert_eq!(a, b);
        let report = run(&cfg, false).unwrap();
        assert_eq!(report.exit_code(), 0);
        assert_eq!(report.checks[0].suite, SuiteId::Recursion);
    }

    #[test]
    fn rank_above_cap_is_rejected() {
        let cfg = config(vec![SuiteId::Names], 9);
        assert_eq!(
            run(&cfg, false).unwrap_err(),
            Error::StageTooLarge { stage: 9, cap: 5 }
        );
    }
}
