mod common;

use common::{Kind, SmallGroup};
use gg_lattice::groups::{GroupInstance, GroupLabel};
use gg_lattice::report::SuiteStatus;
use gg_lattice::tau::Verdict;
use gg_lattice::verify::{run, Suite, VerifyConfig};

#[test]
fn class_counts_match_brute_force() {
    for p in [2, 3, 5] {
        for (label, kind) in [(GroupLabel::GL2, Kind::Gl), (GroupLabel::SL2, Kind::Sl), (GroupLabel::PGL2, Kind::Pgl)] {
            let Ok(g) = GroupInstance::build(label, p) else { continue };
            let oracle = SmallGroup::new(kind, p);
            assert_eq!(g.order(), oracle.order(), "{label} {p}");
            assert_eq!(g.conjugacy_classes().len(), oracle.class_count(false), "{label} {p}");
        }
    }
}

/// Rank of E and of K equals the number of semisimple classes of the dual group.
#[test]
fn lattice_ranks_match_dual_semisimple_classes() {
    for (label, q, dual) in [(GroupLabel::GL2, 2, Kind::Gl), (GroupLabel::GL2, 3, Kind::Gl), (GroupLabel::SL2, 3, Kind::Pgl), (GroupLabel::SL2, 5, Kind::Pgl)] {
        let report = run(&VerifyConfig::new(label, q)).unwrap();
        assert!(report.passed, "{label} {q}");
        let n = SmallGroup::new(dual, q).class_count(true);
        assert_eq!(report.fixed_choices.e_basis_reps.len(), n, "{label} {q}");
        assert_eq!(report.fixed_choices.k_basis_lambdas.len(), n, "{label} {q}");
    }
}

#[test]
fn every_psi_gives_the_same_verdict() {
    for psi in 0..4 {
        let mut cfg = VerifyConfig::new(GroupLabel::GL2, 5);
        cfg.psi = psi;
        let report = run(&cfg).unwrap();
        let v = report.verdicts.as_ref().unwrap();
        assert_eq!((v.verdict, v.routes_agree), (Verdict::Equal, true), "psi {psi}");
        assert_eq!(report.fixed_choices.e_basis_reps.len(), 20);
    }
}

#[test]
fn job_count_does_not_change_results() {
    let mut cfg = VerifyConfig::new(GroupLabel::SL2, 3);
    cfg.pair = true;
    let a = run(&cfg).unwrap();
    cfg.jobs = 4;
    let b = run(&cfg).unwrap();
    let strip = |r: &gg_lattice::report::Report| {
        let mut v = serde_json::to_value(r).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v["config"]["jobs"] = 0.into();
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn prefix_suites_stop_where_asked() {
    let mut cfg = VerifyConfig::new(GroupLabel::GL2, 3);
    cfg.suite = Suite::Curtis;
    let report = run(&cfg).unwrap();
    let names: Vec<&str> = report.suites.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["chartab", "dl", "curtis"]);
    assert!(report.suites.iter().all(|s| s.status == SuiteStatus::Pass));
    assert!(report.verdicts.is_none());
}

#[test]
fn even_characteristic_gl2() {
    let report = run(&VerifyConfig::new(GroupLabel::GL2, 4)).unwrap();
    assert!(report.passed);
    assert_eq!(report.fixed_choices.fq_polynomial, vec![1, 1, 1]);
    assert_eq!(report.fixed_choices.e_basis_reps.len(), gl2_semisimple(4));
}

/// `q^2 - q` semisimple classes in GL2(F_q): central, split and nonsplit.
fn gl2_semisimple(q: usize) -> usize {
    (q - 1) + (q - 1) * (q - 2) / 2 + q * (q - 1) / 2
}
