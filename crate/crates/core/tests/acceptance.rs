mod common;

use std::time::{Duration, Instant};

use common::{Kind, SmallGroup};
use gg_lattice::check::Check;
use gg_lattice::groups::{GroupInstance, GroupLabel};
use gg_lattice::report::Report;
use gg_lattice::tau::Verdict;
use gg_lattice::verify::{run, VerifyConfig};

struct Run {
    label: GroupLabel,
    q: u32,
    pair: bool,
    report: Report,
    elapsed: Duration,
}

impl Run {
    fn new(label: GroupLabel, q: u32, pair: bool, scale: Option<usize>) -> Run {
        let mut cfg = VerifyConfig::new(label, q);
        cfg.pair = pair;
        cfg.scale_k_basis = scale;
        cfg.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        let t = Instant::now();
        let report = run(&cfg).expect("valid configuration");
        Run { label, q, pair, report, elapsed: t.elapsed() }
    }

    fn tag(&self) -> String {
        format!("{}({}){}", self.label, self.q, if self.pair { "+pair" } else { "" })
    }

    fn checks(&self) -> impl Iterator<Item = &Check> {
        self.report.suites.iter().flat_map(|s| s.checks.iter())
    }

    /// Every check whose name ends with `suffix`; at least one must exist.
    fn named(&self, suffix: &str) -> Result<Vec<&Check>, String> {
        let found: Vec<&Check> = self.checks().filter(|c| c.name.ends_with(suffix)).collect();
        if found.is_empty() {
            return Err(format!("{}: no check '{suffix}'", self.tag()));
        }
        Ok(found)
    }

    fn passes(&self, suffix: &str) -> Result<(), String> {
        for c in self.named(suffix)? {
            if !c.passed() {
                return Err(format!("{}: {c}", self.tag()));
            }
        }
        Ok(())
    }

    fn checked(&self, suffix: &str) -> Result<u64, String> {
        Ok(self.named(suffix)?.iter().map(|c| c.checked).sum())
    }

    fn verdict(&self) -> Result<(Verdict, Verdict, bool), String> {
        let v = self.report.verdicts.as_ref().ok_or_else(|| format!("{}: no verdict", self.tag()))?;
        Ok((v.direct, v.duality, v.routes_agree))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_of<'a>(runs: impl IntoIterator<Item = &'a Run>, f: impl Fn(&Run) -> Result<(), String>) -> Result<(), String> {
    runs.into_iter().try_for_each(f)
}

fn main() {
    let gl2: Vec<Run> = [2, 3, 5].iter().map(|&q| Run::new(GroupLabel::GL2, q, false, None)).collect();
    let sl2: Vec<Run> = [3, 5].iter().map(|&q| Run::new(GroupLabel::SL2, q, true, None)).collect();
    let controls = [Run::new(GroupLabel::GL2, 3, false, Some(0)), Run::new(GroupLabel::SL2, 3, true, Some(1))];
    let every = || gl2.iter().chain(&sl2);
    let odd = || gl2.iter().filter(|r| r.q != 2).chain(&sl2);

    let criteria: Vec<(&str, Result<(), String>)> = vec![
        (
            "main theorem for GL2(q), q = 2, 3, 5: EQUAL, under a minute each",
            all_of(&gl2, |r| {
                let (d, u, agree) = r.verdict()?;
                ensure(r.report.passed && d == Verdict::Equal && u == Verdict::Equal && agree, || format!("{}: {:?}", r.tag(), r.report.verdicts))?;
                ensure(r.elapsed < Duration::from_secs(60), || format!("{}: {:?}", r.tag(), r.elapsed))?;
                let n = SmallGroup::new(Kind::Gl, r.q).class_count(true);
                ensure(r.report.fixed_choices.k_basis_lambdas.len() == n && r.report.fixed_choices.e_basis_reps.len() == n, || {
                    format!("{}: rank differs from {n} semisimple classes", r.tag())
                })
            }),
        ),
        (
            "main theorem for SL2(q) via GL2, q = 3, 5: EQUAL by both routes",
            all_of(&sl2, |r| {
                let (d, u, agree) = r.verdict()?;
                ensure(r.report.passed && d == Verdict::Equal && u == Verdict::Equal && agree, || format!("{}: {:?}", r.tag(), r.report.verdicts))?;
                let n = SmallGroup::new(Kind::Pgl, r.q).class_count(true);
                ensure(r.report.fixed_choices.k_basis_lambdas.len() == n, || format!("{}: K rank differs from {n}", r.tag()))
            }),
        ),
        (
            "tau(h_i pi_j) integral on every basis pair; tau on K products in Z",
            all_of(every(), |r| {
                r.passes("tau(h_i pi_j) integral")?;
                r.passes("K Gram matrix is integral and unimodular")?;
                let n = r.report.fixed_choices.e_basis_reps.len() as u64;
                ensure(r.checked("tau(h_i pi_j) integral")? == n * n, || format!("{}: not every pair checked", r.tag()))
            }),
        ),
        (
            "Curtis map equals restriction of the identification; identification is a unital ring isomorphism",
            all_of(every(), |r| {
                for name in ["curtis_bk equals restriction of identify", "curtis_bk(e) = 1", "identify(e) = 1", "identify is multiplicative", "identification with K"] {
                    r.passes(name)?;
                }
                Ok(())
            }),
        ),
        (
            "SL2 < GL2 trace formulae, restriction compatibility, Curtis traces and the inclusion diagram",
            all_of(&sl2, |r| {
                for name in [
                    "pair trace vanishing off ker kappa",
                    "pair trace scaling by |Z^F|",
                    "pair restriction compatibility",
                    "pair Curtis trace sums",
                    "identification commutes with inclusion",
                    "pair duality square",
                    "dual class quotient",
                ] {
                    r.passes(name)?;
                }
                Ok(())
            }),
        ),
        (
            "tau_G(h pi) = tau_H(h pi) on all basis pairs, q = 3, 5",
            all_of(&sl2, |r| {
                r.passes("E_G lies in E_H")?;
                r.passes("tau_G(h pi) = tau_H(h pi)")
            }),
        ),
        (
            "tau~ formulas agree on all elements x K spanning set; restriction to E holds",
            all_of(every(), |r| {
                r.passes("tau~ Weyl average equals torus-class sum")?;
                r.passes("tau~ Jordan form equals torus-class sum")?;
                r.passes("tau~ restricts to tau on E")?;
                let order = GroupInstance::build(r.label, r.q).unwrap().order() as u64;
                let spans = r.checked("K basis spans all pi_lambda")?;
                ensure(r.checked("tau~ Jordan form equals torus-class sum")? == order * spans, || format!("{}: not every element covered", r.tag()))
            }),
        ),
        (
            "Deligne-Lusztig character formula, integrality and norms",
            all_of(every(), |r| {
                for name in ["Deligne-Lusztig characters", "dl character formula", "dl norms", "dl degree", "dl virtual character", "dl unipotent theta-independence"] {
                    r.passes(name)?;
                }
                Ok(())
            }),
        ),
        (
            "reduction to the centralizer torus (q = 3 full grid, q = 5 at least 100 pairs)",
            all_of(odd(), |r| {
                r.passes("reduction to the centralizer torus")?;
                ensure(r.q != 5 || r.checked("reduction to the centralizer torus")? >= 100, || format!("{}: grid too small", r.tag()))
            }),
        ),
        (
            "tau~ integral at central semisimple part for every lambda in the box, q = 3, 5",
            all_of(odd(), |r| {
                r.passes("tau~ integral at central semisimple part")?;
                r.passes("central case via induced characters")
            }),
        ),
        (
            "negative control: scaled K basis is NOT-EQUAL with a witness",
            all_of(&controls, |r| {
                let (d, _, _) = r.verdict()?;
                ensure(!r.report.passed && r.report.exit_code == 1 && d == Verdict::NotEqual, || format!("{}: control passed", r.tag()))?;
                let w = r.checks().filter(|c| !c.passed()).flat_map(|c| c.witnesses.iter()).next();
                ensure(w.is_some_and(|w| w.contains(&format!("({}, [", r.report.fixed_choices.modulus_n))), || format!("{}: no witness", r.tag()))
            }),
        ),
        (
            "character tables orthogonal; class counts GL2(3) = 8, SL2(3) = 7, PGL2(3) = 5",
            all_of(every(), |r| r.passes("orthogonality relations")).and_then(|_| {
                for (label, kind, expected) in [(GroupLabel::GL2, Kind::Gl, 8), (GroupLabel::SL2, Kind::Sl, 7), (GroupLabel::PGL2, Kind::Pgl, 5)] {
                    let oracle = SmallGroup::new(kind, 3).class_count(false);
                    let found = GroupInstance::build(label, 3).unwrap().conjugacy_classes().len();
                    ensure(oracle == expected && found == expected, || format!("{label}(3): {found} classes, oracle {oracle}"))?;
                }
                Ok(())
            }),
        ),
    ];

    let mut failed = 0;
    for (i, (name, result)) in criteria.iter().enumerate() {
        match result {
            Ok(()) => println!("[PASS] {:>2} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {e}", i + 1);
            }
        }
    }
    for r in every() {
        println!("       {:<14} {:>8.2?}", r.tag(), r.elapsed);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
