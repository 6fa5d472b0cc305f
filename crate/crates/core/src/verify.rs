//! The dependency-ordered verification suites behind `gglat verify`.

use std::fmt::Display;
use std::time::Instant;

use crate::cache::{CacheStatus, TableCache};
use crate::chartab::CharacterTable;
use crate::check::Check;
use crate::deligne_lusztig::{verify_dl_formula_all, verify_pair_traces, DlSystem};
use crate::dual::{
    lambda_box, quotient_map, verify_grading, verify_identification, verify_pair_duality, verify_pair_identification, verify_phi,
    verify_quotient, DualInstance, Identification, KLattice, TorusDuality,
};
use crate::gelfand_graev::{regular_characters, EndoBasis};
use crate::groups::{ExtensionData, GroupInstance, GroupLabel};
use crate::instance::Instance;
use crate::report::{field_coords, matrix_json, CacheEvent, ConfigEcho, FixedChoices, Report, SuiteReport, SuiteStatus, Timing, ToolInfo, Verdicts, SCHEMA_VERSION};
use crate::tau::{
    bad_primes, basis_functions, control_prime, instance_ring, main_theorem, root_types, spanning_functions, verify_pair_tau, KBasis,
    TauContext,
};

/// Above this order the Jordan-form identity is checked on class representatives only.
pub const ALL_ELEMENTS_BOUND: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    All,
    Chartab,
    Dl,
    Curtis,
    Identities,
    Lattice,
}

impl Suite {
    /// Concrete suites in dependency order.
    pub const ORDER: [Suite; 5] = [Suite::Chartab, Suite::Dl, Suite::Curtis, Suite::Identities, Suite::Lattice];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Chartab => "chartab",
            Suite::Dl => "dl",
            Suite::Curtis => "curtis",
            Suite::Identities => "identities",
            Suite::Lattice => "lattice",
        }
    }

    /// The suites run for this selection: the selection and everything it depends on.
    pub fn plan(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ORDER.to_vec(),
            s => Suite::ORDER.iter().copied().take_while(|&t| t <= s).collect(),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("group must be GL2 or SL2, got {0}")]
    UnsupportedGroup(GroupLabel),
    #[error("--pair compares SL2 with GL2 and needs --group sl2")]
    PairNeedsSl2,
    #[error("invalid q: {0}")]
    BadQ(String),
    #[error("--psi {index} out of range: there are {count} regular characters")]
    BadPsi { index: usize, count: usize },
    #[error("--jobs must be at least 1")]
    BadJobs,
    #[error("scaled K-basis index {index} out of range: the basis has {len} vectors")]
    BadScaleIndex { index: usize, len: usize },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub group: GroupLabel,
    pub q: u32,
    pub pair: bool,
    pub psi: usize,
    pub suite: Suite,
    pub jobs: usize,
    pub cache: Option<TableCache>,
    /// Multiply this K-basis vector by the control prime before the lattice comparison.
    pub scale_k_basis: Option<usize>,
}

impl VerifyConfig {
    pub fn new(group: GroupLabel, q: u32) -> VerifyConfig {
        VerifyConfig { group, q, pair: false, psi: 0, suite: Suite::All, jobs: 1, cache: None, scale_k_basis: None }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if !matches!(self.group, GroupLabel::GL2 | GroupLabel::SL2) {
            return Err(ConfigError::UnsupportedGroup(self.group));
        }
        if self.pair && self.group != GroupLabel::SL2 {
            return Err(ConfigError::PairNeedsSl2);
        }
        if self.jobs == 0 {
            return Err(ConfigError::BadJobs);
        }
        let g = GroupInstance::build(self.group, self.q).map_err(|e| ConfigError::BadQ(e.to_string()))?;
        let count = regular_characters(&g).len();
        if self.psi >= count {
            return Err(ConfigError::BadPsi { index: self.psi, count });
        }
        Ok(())
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            group: self.group,
            q: self.q,
            pair: self.pair,
            psi: self.psi,
            suite: self.suite.name().to_string(),
            jobs: self.jobs,
            cache_enabled: self.cache.is_some(),
            scaled_k_basis: self.scale_k_basis,
        }
    }
}

/// Objects for one group, built up suite by suite.
#[derive(Default)]
struct Side {
    inst: Option<Instance>,
    dl: Option<DlSystem>,
    dual: Option<DualInstance>,
    dualities: Vec<TorusDuality>,
    basis: Option<EndoBasis>,
    ident: Option<Identification>,
}

struct Run<'c> {
    cfg: &'c VerifyConfig,
    g: Side,
    h: Side,
    ext: Option<ExtensionData>,
    map: Vec<usize>,
    k: Option<KLattice>,
    descent: Option<Check>,
    fixed: FixedChoices,
    cache: Vec<CacheEvent>,
    verdicts: Option<Verdicts>,
}

/// A single-instance check recording whether a construction step succeeded.
fn built<T, E: Display>(checks: &mut Vec<Check>, name: String, r: Result<T, E>) -> Option<T> {
    let mut c = Check::new(name);
    let out = match r {
        Ok(v) => {
            c.record(true, String::new);
            Some(v)
        }
        Err(e) => {
            c.fail(e.to_string());
            None
        }
    };
    checks.push(c);
    out
}

fn prefixed(label: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |mut c| {
        c.name = format!("{label}: {}", c.name);
        c
    })
}

/// Number of conjugacy classes by orbit enumeration.
pub fn brute_force_class_count(g: &GroupInstance) -> usize {
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        count += 1;
        for y in g.elements() {
            seen[g.conj(y, x) as usize] = true;
        }
    }
    count
}

/// Class numbers: `q^2 - 1` for GL2, `q + 4` (odd q) or `q + 1` (even q) for SL2, and
/// `q + 2` or `q + 1` for PGL2.
pub fn expected_class_count(label: GroupLabel, q: u32) -> usize {
    let q = q as usize;
    match (label, q % 2) {
        (GroupLabel::GL2, _) => q * q - 1,
        (GroupLabel::SL2, 1) => q + 4,
        (GroupLabel::PGL2, 1) => q + 2,
        _ => q + 1,
    }
}

impl<'c> Run<'c> {
    fn new(cfg: &'c VerifyConfig) -> Run<'c> {
        Run {
            cfg,
            g: Side::default(),
            h: Side::default(),
            ext: None,
            map: Vec::new(),
            k: None,
            descent: None,
            fixed: FixedChoices::default(),
            cache: Vec::new(),
            verdicts: None,
        }
    }

    fn fill_fixed(&mut self) {
        let Ok(g) = GroupInstance::build(self.cfg.group, self.cfg.q) else { return };
        let t = g.tower();
        let inst_n = crate::instance::instance_modulus(t.p(), t.q());
        let field = crate::arith::CycField::get(inst_n);
        let psi = regular_characters(&g).get(self.cfg.psi).copied();
        self.fixed = FixedChoices {
            p: t.p(),
            q: t.q(),
            modulus_n: inst_n,
            field_conductor: field.conductor(),
            field_degree: field.degree(),
            fq_polynomial: t.fq_poly().to_vec(),
            fq2_polynomial: t.fq2_poly().to_vec(),
            fq_generator: field_coords(t.p(), t.f(), t.g1() as u32),
            fq2_generator: field_coords(t.p(), 2 * t.f(), t.g2() as u32),
            psi_index: self.cfg.psi,
            psi_a: psi.map(|r| field_coords(t.p(), t.f(), r.a as u32)).unwrap_or_default(),
            dual_group: Some(self.cfg.group.dual()),
            bad_primes: bad_primes(&root_types(self.cfg.group)).ok(),
            ..FixedChoices::default()
        };
    }

    fn instance(&mut self, label: GroupLabel, checks: &mut Vec<Check>) -> Option<Instance> {
        let q = self.cfg.q;
        let group = built(checks, format!("{label}: group"), GroupInstance::build(label, q))?;
        let mut event = CacheEvent { group: label, q, status: CacheStatus::Disabled, error: None };
        let inst = match &self.cfg.cache {
            None => Instance::build(label, q),
            Some(cache) => Instance::build_with(group, |g, cc, f, m| {
                let (t, status, err): (CharacterTable, _, _) = cache.table_for(g, cc, f, m)?;
                event.status = status;
                event.error = err.map(|e| e.to_string());
                Ok(t)
            }),
        };
        self.cache.push(event);
        built(checks, format!("{label}: character table"), inst)
    }

    fn chartab(&mut self) -> Vec<Check> {
        let mut checks = Vec::new();
        let mut labels = vec![self.cfg.group];
        if self.cfg.pair {
            labels.push(GroupLabel::GL2);
        }
        for (n, &label) in labels.iter().enumerate() {
            let Some(inst) = self.instance(label, &mut checks) else { continue };
            let mut orth = Check::new(format!("{label}: orthogonality relations"));
            match inst.table().validate() {
                Ok(()) => orth.record(true, String::new),
                Err(e) => orth.record(false, || e.to_string()),
            };
            checks.push(orth);
            let mut count = Check::new(format!("{label}: class count"));
            let (found, brute) = (inst.classes().len(), brute_force_class_count(inst.group()));
            let expected = expected_class_count(label, self.cfg.q);
            count.record(found == brute && found == expected, || format!("{found} classes, {brute} orbits, expected {expected}"));
            checks.push(count);
            let mut degrees = Check::new(format!("{label}: sum of squared degrees"));
            let total: u64 = inst.table().degrees().iter().map(|d| d * d).sum();
            degrees.record(total == inst.group().order() as u64, || format!("{total} vs {}", inst.group().order()));
            checks.push(degrees);
            if n == 0 {
                self.g.inst = Some(inst);
            } else {
                self.h.inst = Some(inst);
            }
        }
        if let (Some(g), Some(h)) = (&self.g.inst, &self.h.inst) {
            self.ext = built(&mut checks, "SL2 < GL2 embedding".into(), ExtensionData::new(g.group(), h.group()));
        }
        checks
    }

    fn dl(&mut self) -> Vec<Check> {
        let mut checks = Vec::new();
        for side in [&mut self.g, &mut self.h] {
            let Some(inst) = &side.inst else { continue };
            let label = inst.label().name();
            side.dl = built(&mut checks, format!("{label}: Deligne-Lusztig characters"), DlSystem::build(inst));
            if let Some(dl) = &side.dl {
                checks.extend(prefixed(label, dl.validate(inst)));
                checks.extend(prefixed(label, vec![verify_dl_formula_all(inst, dl)]));
            }
        }
        if let (Some(g), Some(gd), Some(h), Some(hd), Some(ext)) = (&self.g.inst, &self.g.dl, &self.h.inst, &self.h.dl, &self.ext) {
            checks.extend(verify_pair_traces(g, gd, h, hd, ext));
        }
        checks
    }

    fn curtis_side(side: &mut Side, psi: usize, checks: &mut Vec<Check>) {
        let (Some(inst), Some(dl)) = (&side.inst, &side.dl) else { return };
        let label = inst.label().name();
        side.dual = built(checks, format!("{label}: dual group"), DualInstance::build(inst));
        let Some(dual) = &side.dual else { return };
        checks.extend(prefixed(label, vec![dual.verify_classes()]));
        side.dualities = inst.tori().iter().map(|t| TorusDuality::build(inst, t, dual)).collect();
        for (t, d) in inst.tori().iter().zip(&side.dualities) {
            checks.extend(prefixed(label, d.verify(inst, t, dual)));
        }
        checks.extend(prefixed(label, vec![TauContext::new(inst, dl, dual, &side.dualities).verify_tori()]));
        let psi = regular_characters(inst.group())[psi];
        side.basis = built(checks, format!("{label}: endomorphism basis"), EndoBasis::build(inst.group(), psi, None));
        let Some(basis) = &side.basis else { return };
        side.ident = built(checks, format!("{label}: identification with K"), Identification::build(inst, dl, dual, &side.dualities, basis));
        let Some(ident) = &side.ident else { return };
        checks.extend(prefixed(label, verify_identification(inst, dl, dual, &side.dualities, basis, ident)));
        let lambdas = lambda_box(dual, inst.q() as i64);
        checks.extend(prefixed(label, verify_phi(inst, dl, dual, &side.dualities, basis, ident, &lambdas)));
    }

    fn curtis(&mut self) -> Vec<Check> {
        let mut checks = Vec::new();
        Run::curtis_side(&mut self.g, self.cfg.psi, &mut checks);
        if self.cfg.pair {
            // the GL2 side uses the same character of U_0
            Run::curtis_side(&mut self.h, self.cfg.psi, &mut checks);
        }
        if let (Some(g), Some(h), Some(ext), Some(gd), Some(hd)) = (&self.g.inst, &self.h.inst, &self.ext, &self.g.dual, &self.h.dual) {
            checks.push(verify_pair_duality(g, h, ext, gd, hd, &self.g.dualities, &self.h.dualities));
            self.map = quotient_map(hd, gd);
            checks.push(verify_quotient(hd, gd, &self.map));
            if let (Some(basis), Some(ident), Some(h_dl)) = (&self.g.basis, &self.g.ident, &self.h.dl) {
                checks.push(verify_pair_identification(basis, ident, h, h_dl, hd, &self.h.dualities, ext, &self.map));
            }
        }
        if let (Some(basis), Some(inst)) = (&self.g.basis, &self.g.inst) {
            self.fixed.e_basis_reps = basis.reps().iter().map(|&x| matrix_json(inst.group().tower(), inst.group().matrix(x))).collect();
        }
        checks
    }

    fn identities(&mut self) -> Vec<Check> {
        let mut checks = Vec::new();
        let (Some(inst), Some(dl), Some(dual), Some(basis), Some(ident)) = (&self.g.inst, &self.g.dl, &self.g.dual, &self.g.basis, &self.g.ident)
        else {
            return checks;
        };
        let Some(ring) = built(&mut checks, "coefficient ring".into(), instance_ring(inst)) else { return checks };
        self.fixed.ring = Some(ring);
        self.fixed.control_prime = Some(control_prime(&ring));
        let k = if self.cfg.pair {
            let Some(hd) = &self.h.dual else { return checks };
            built(&mut checks, "K lattice (graded descent)".into(), KLattice::build_graded(hd, dual, &self.map)).map(|(k, descent)| {
                self.descent = Some(descent);
                k
            })
        } else {
            built(&mut checks, "K lattice".into(), KLattice::build(dual))
        };
        let Some(k) = k else { return checks };
        let ctx = TauContext::new(inst, dl, dual, &self.g.dualities);
        let span = spanning_functions(&k);
        checks.extend(ctx.verify_coherence(&span, inst.group().order() <= ALL_ELEMENTS_BOUND));
        checks.push(ctx.verify_restriction(basis, ident, &basis_functions(&KBasis::from_lattice(&k))));
        let lambdas = lambda_box(dual, dual.modulus() as i64 / inst.p() as i64);
        checks.push(ctx.verify_reduction(&lambdas));
        checks.extend(ctx.verify_central(&lambdas, &ring));
        if let (Some(h), Some(hd), Some(h_basis), Some(h_ident), Some(ext)) = (&self.h.inst, &self.h.dual, &self.h.basis, &self.h.ident, &self.ext) {
            let h_lambdas = lambda_box(hd, inst.q() as i64 + 1);
            checks.push(verify_grading(hd, &h_lambdas));
            checks.extend(verify_pair_tau(basis, ident, h.group(), h_basis, h_ident, ext, &self.map, &span, inst.field()));
        }
        self.k = Some(k);
        checks
    }

    fn lattice(&mut self) -> Result<Vec<Check>, ConfigError> {
        let mut checks = Vec::new();
        let (Some(inst), Some(dl), Some(dual), Some(basis), Some(ident), Some(k), Some(ring)) =
            (&self.g.inst, &self.g.dl, &self.g.dual, &self.g.basis, &self.g.ident, &self.k, self.fixed.ring)
        else {
            return Ok(checks);
        };
        checks.push(k.verify_spanning(&ring));
        checks.push(k.verify_box_stabilization(dual, &ring));
        if let Some(d) = self.descent.take() {
            checks.push(d);
        }
        let mut kb = KBasis::from_lattice(k);
        self.fixed.k_basis_lambdas = kb.lambdas.clone();
        if let Some(index) = self.cfg.scale_k_basis {
            if index >= kb.len() {
                return Err(ConfigError::BadScaleIndex { index, len: kb.len() });
            }
            kb = kb.scaled(index, control_prime(&ring));
        }
        let ctx = TauContext::new(inst, dl, dual, &self.g.dualities);
        let Some(main) = built(&mut checks, "lattice comparison".into(), main_theorem(&ctx, basis, ident, k, &kb, ring)) else {
            return Ok(checks);
        };
        checks.extend(prefixed("direct", main.direct.clone()));
        checks.extend(prefixed("duality", main.duality.clone()));
        let mut agree = Check::new("both routes agree");
        agree.record(main.routes_agree(), || format!("direct {} vs duality {}", main.direct_verdict, main.duality_verdict));
        checks.push(agree);
        self.verdicts = Some(Verdicts {
            direct: main.direct_verdict,
            duality: main.duality_verdict,
            routes_agree: main.routes_agree(),
            verdict: main.verdict(),
            scaled_k_basis: main.scaled,
        });
        Ok(checks)
    }

    fn suite(&mut self, s: Suite) -> Result<Vec<Check>, ConfigError> {
        Ok(match s {
            Suite::Chartab => self.chartab(),
            Suite::Dl => self.dl(),
            Suite::Curtis => self.curtis(),
            Suite::Identities => self.identities(),
            Suite::Lattice => return self.lattice(),
            Suite::All => unreachable!("plans contain concrete suites"),
        })
    }
}

/// Runs the selected suites, each gated on the ones before it.
pub fn run(cfg: &VerifyConfig) -> Result<Report, ConfigError> {
    cfg.check()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().map_err(|e| ConfigError::Pool(e.to_string()))?;
    pool.install(|| run_suites(cfg))
}

/// Runs `plan` in order; after the first suite that does not pass, the rest are skipped.
pub fn run_plan<E>(plan: &[Suite], mut suite: impl FnMut(Suite) -> Result<Vec<Check>, E>) -> Result<(Vec<SuiteReport>, Vec<Timing>), E> {
    let mut suites = Vec::new();
    let mut timings = Vec::new();
    let mut gate: Option<&'static str> = None;
    for &s in plan {
        if let Some(failed) = gate {
            suites.push(SuiteReport::skipped(s.name(), format!("gate failed: {failed}")));
            continue;
        }
        let t = Instant::now();
        let report = SuiteReport::from_checks(s.name(), suite(s)?);
        timings.push(Timing { stage: s.name().to_string(), millis: t.elapsed().as_secs_f64() * 1e3 });
        if report.status != SuiteStatus::Pass {
            gate = Some(s.name());
        }
        suites.push(report);
    }
    Ok((suites, timings))
}

fn run_suites(cfg: &VerifyConfig) -> Result<Report, ConfigError> {
    let mut run = Run::new(cfg);
    run.fill_fixed();
    let start = Instant::now();
    let (suites, mut timings) = run_plan(&cfg.suite.plan(), |s| run.suite(s))?;
    timings.push(Timing { stage: "total".into(), millis: start.elapsed().as_secs_f64() * 1e3 });
    let passed = suites.iter().all(|s| s.status == SuiteStatus::Pass);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::default(),
        config: cfg.echo(),
        passed,
        exit_code: if passed { 0 } else { 1 },
        fixed_choices: run.fixed,
        cache: run.cache,
        suites,
        verdicts: run.verdicts,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_prefixes() {
        assert_eq!(Suite::Chartab.plan(), vec![Suite::Chartab]);
        assert_eq!(Suite::Curtis.plan(), vec![Suite::Chartab, Suite::Dl, Suite::Curtis]);
        assert_eq!(Suite::All.plan(), Suite::Lattice.plan());
    }

    #[test]
    fn failed_gate_skips_later_suites() {
        let (suites, _) = run_plan::<()>(&Suite::All.plan(), |s| {
            let mut c = Check::new("probe");
            c.record(s != Suite::Dl, || "injected".into());
            Ok(vec![c])
        })
        .unwrap();
        let status: Vec<SuiteStatus> = suites.iter().map(|s| s.status).collect();
        assert_eq!(status, [SuiteStatus::Pass, SuiteStatus::Fail, SuiteStatus::Skipped, SuiteStatus::Skipped, SuiteStatus::Skipped]);
        assert_eq!(suites[2].reason.as_deref(), Some("gate failed: dl"));
        let (suites, _) = run_plan::<()>(&[Suite::Chartab], |_| Ok(Vec::new())).unwrap();
        assert_eq!(suites[0].status, SuiteStatus::Fail);
    }

    #[test]
    fn class_counts() {
        for (label, q) in [(GroupLabel::GL2, 3), (GroupLabel::SL2, 3), (GroupLabel::PGL2, 3), (GroupLabel::SL2, 5), (GroupLabel::PGL2, 5), (GroupLabel::GL2, 4)] {
            let g = GroupInstance::build(label, q).unwrap();
            assert_eq!(brute_force_class_count(&g), expected_class_count(label, q), "{label} {q}");
        }
    }

    #[test]
    fn config_errors() {
        let mut cfg = VerifyConfig::new(GroupLabel::GL2, 3);
        cfg.pair = true;
        assert_eq!(cfg.check(), Err(ConfigError::PairNeedsSl2));
        let mut cfg = VerifyConfig::new(GroupLabel::SL2, 6);
        assert!(matches!(cfg.check(), Err(ConfigError::BadQ(_))));
        cfg.q = 3;
        cfg.psi = 2;
        assert_eq!(cfg.check(), Err(ConfigError::BadPsi { index: 2, count: 2 }));
        cfg.psi = 0;
        cfg.jobs = 0;
        assert_eq!(cfg.check(), Err(ConfigError::BadJobs));
        assert_eq!(VerifyConfig::new(GroupLabel::PGL2, 3).check(), Err(ConfigError::UnsupportedGroup(GroupLabel::PGL2)));
    }

    #[test]
    fn gl2_2_all_suites() {
        let report = run(&VerifyConfig::new(GroupLabel::GL2, 2)).unwrap();
        for s in &report.suites {
            assert_eq!(s.status, SuiteStatus::Pass, "{}: {:?}", s.name, s.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
        }
        assert_eq!(report.exit_code, 0);
    }
}
