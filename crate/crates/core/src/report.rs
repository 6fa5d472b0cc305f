//! JSON verification report. Everything except `timings` is a function of the configuration.

use serde::Serialize;

use crate::arith::LocalRingSpec;
use crate::cache::CacheStatus;
use crate::check::Check;
use crate::groups::{FieldTower, GroupLabel, Mat2};
use crate::tau::{BadPrimeData, Verdict};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "gglat";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub passed: bool,
    pub exit_code: i32,
    pub fixed_choices: FixedChoices,
    pub cache: Vec<CacheEvent>,
    pub suites: Vec<SuiteReport>,
    pub verdicts: Option<Verdicts>,
    pub timings: Vec<Timing>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> ToolInfo {
        ToolInfo { name: TOOL_NAME, version: TOOL_VERSION }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub group: GroupLabel,
    pub q: u32,
    pub pair: bool,
    pub psi: usize,
    pub suite: String,
    pub jobs: usize,
    pub cache_enabled: bool,
    pub scaled_k_basis: Option<usize>,
}

/// Choices that fix the computation: field polynomials, generators, the modulus `N`, `psi`.
/// Field elements are written as coefficient lists over `F_p`, lowest degree first.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FixedChoices {
    pub p: u32,
    pub q: u32,
    pub modulus_n: u32,
    pub field_conductor: u32,
    pub field_degree: usize,
    pub fq_polynomial: Vec<u32>,
    pub fq2_polynomial: Vec<u32>,
    pub fq_generator: Vec<u32>,
    pub fq2_generator: Vec<u32>,
    pub psi_index: usize,
    pub psi_a: Vec<u32>,
    pub dual_group: Option<GroupLabel>,
    pub ring: Option<LocalRingSpec>,
    pub bad_primes: Option<BadPrimeData>,
    pub control_prime: Option<i64>,
    pub e_basis_reps: Vec<Mat2Json>,
    pub k_basis_lambdas: Vec<[i64; 2]>,
}

pub type Mat2Json = [[Vec<u32>; 2]; 2];

/// Base-`p` digits of an encoded field element, `len` of them.
pub fn field_coords(p: u32, len: u32, mut a: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

pub fn matrix_json(t: &FieldTower, m: Mat2) -> Mat2Json {
    let c = |x: u16| field_coords(t.p(), t.f(), x as u32);
    [[c(m[0]), c(m[1])], [c(m[2]), c(m[3])]]
}

#[derive(Debug, Clone, Serialize)]
pub struct CacheEvent {
    pub group: GroupLabel,
    pub q: u32,
    pub status: CacheStatus,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub status: SuiteStatus,
    pub reason: Option<String>,
    pub checked: u64,
    pub failed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn from_checks(name: &str, checks: Vec<Check>) -> SuiteReport {
        let ok = !checks.is_empty() && checks.iter().all(Check::passed);
        SuiteReport {
            name: name.to_string(),
            status: if ok { SuiteStatus::Pass } else { SuiteStatus::Fail },
            reason: None,
            checked: checks.iter().map(|c| c.checked).sum(),
            failed: checks.iter().map(|c| c.failed).sum(),
            checks,
        }
    }

    pub fn skipped(name: &str, reason: String) -> SuiteReport {
        SuiteReport { name: name.to_string(), status: SuiteStatus::Skipped, reason: Some(reason), checked: 0, failed: 0, checks: Vec::new() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub direct: Verdict,
    pub duality: Verdict,
    pub routes_agree: bool,
    pub verdict: Verdict,
    /// `(index, r)` when a K-basis vector was multiplied by `r`.
    pub scaled_k_basis: Option<(usize, i64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub stage: String,
    pub millis: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}
