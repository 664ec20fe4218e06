use forcelab::extension::ForcingFrame;
use forcelab::hfset::{opair, HSet};
use forcelab::names;
use forcelab::semantics::Axiom;
use forcelab::suite::{random_formula, suite_rng};
use forcelab::{presets, Caps, Formula, Model, Status};
use rand::seq::SliceRandom;
use rand::Rng;

fn stage(k: usize) -> Model {
    Model::v_stage(k, &Caps::default()).unwrap()
}

#[test]
fn density_on_random_queries() {
    let mut rng = suite_rng(11, 0);
    let posets = presets::family(6);
    let pool = stage(3);
    for _ in 0..50 {
        let (_, notion) = posets.choose(&mut rng).unwrap();
        let frame = ForcingFrame::new(stage(4), notion.clone(), &Caps::default()).unwrap();
        let phi = random_formula(&mut rng, 2, 3);
        let names: Vec<HSet> = (0..2)
            .map(|_| pool.universe().choose(&mut rng).unwrap().clone())
            .collect();
        let p = rng.gen_range(0..notion.len());
        let report = frame.density_check(p, &phi, &names).unwrap();
        assert_eq!(report.status, Status::Holds, "{phi} at {p}");
    }
}

#[test]
fn density_at_minimal_conditions_is_membership() {
    let frame = ForcingFrame::new(stage(4), presets::fork(), &Caps::default()).unwrap();
    let phi = Formula::exists(Formula::mem(0, 1));
    let tau = HSet::singleton(opair(&HSet::empty(), &HSet::nat(0)));
    let forced = frame.forcing_set(&phi, std::slice::from_ref(&tau)).unwrap();
    for &m in frame.notion().minimal() {
        assert_eq!(
            frame.notion().dense_below(forced, m),
            frame.forces(m, &phi, std::slice::from_ref(&tau)).unwrap()
        );
    }
    // Only the filter above 0 contains 0, so only that branch puts ∅ into the value.
    assert!(frame.forces(0, &phi, std::slice::from_ref(&tau)).unwrap());
    assert!(!frame.forces(2, &phi, std::slice::from_ref(&tau)).unwrap());
    assert!(!frame.forces(4, &phi, &[tau]).unwrap());
}

#[test]
fn separation_with_membership_parameter_holds_in_v_shape() {
    let frame = ForcingFrame::new(stage(4), presets::v_shape(), &Caps::default()).unwrap();
    let axiom = Axiom::Separation {
        phi: Formula::mem(1, 0),
        param: None,
    };
    for i in 0..frame.extensions().len() {
        let report = frame.verify_axiom_in_extension(i, &axiom).unwrap();
        assert_eq!(report.status, Status::Holds);
        assert!(report.instances_checked > 0);
    }
}

#[test]
fn pairing_at_the_top_is_unmet_not_violated() {
    let frame = ForcingFrame::new(stage(4), presets::v_shape(), &Caps::default()).unwrap();
    let statuses: Vec<Status> = (0..frame.extensions().len())
        .map(|i| {
            frame
                .verify_axiom_in_extension(i, &Axiom::Pairing)
                .unwrap()
                .status
        })
        .collect();
    assert!(statuses.contains(&Status::PreconditionUnmet));
    assert!(!statuses.contains(&Status::Violated));
}

#[test]
fn forcing_enumerations_agree_on_random_queries() {
    let mut rng = suite_rng(5, 1);
    let pool = stage(3);
    for (_, notion) in presets::family(5) {
        let frame = ForcingFrame::new(stage(3), notion, &Caps::default()).unwrap();
        for _ in 0..20 {
            let phi = random_formula(&mut rng, 2, 3);
            let names: Vec<HSet> = (0..2)
                .map(|_| pool.universe().choose(&mut rng).unwrap().clone())
                .collect();
            let r = frame.definition_check(&phi, &names).unwrap();
            assert_eq!(r.status, Status::Holds);
            let s = frame.strengthening_check(&phi, &names).unwrap();
            assert_eq!(s.status, Status::Holds);
        }
    }
}

#[test]
fn extension_dumps_are_deterministic() {
    let dump = || {
        let frame = ForcingFrame::new(stage(4), presets::chain(3), &Caps::default()).unwrap();
        serde_json::to_string(&frame.extension(0).dump(Some(4))).unwrap()
    };
    assert_eq!(dump(), dump());
    let frame = ForcingFrame::new(stage(4), presets::chain(3), &Caps::default()).unwrap();
    assert_eq!(frame.extensions().len(), 1);
}

#[test]
fn sep_name_rejects_wide_formulas_and_foreign_names() {
    let frame = ForcingFrame::new(stage(3), presets::v_shape(), &Caps::default()).unwrap();
    let e = HSet::empty();
    assert!(names::sep_name(&frame, &e, &e, &Formula::eq(0, 2)).is_err());
    assert!(names::sep_name(&frame, &HSet::nat(5), &e, &Formula::eq(0, 0)).is_err());
}
