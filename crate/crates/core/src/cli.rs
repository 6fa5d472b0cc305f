//! Command-line front end: `verify`, `list` and `cache`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cache::{TableCache, CACHE_ENV};
use crate::groups::{GroupInstance, GroupLabel};
use crate::instance::instance_modulus;
use crate::report::SuiteStatus;
use crate::verify::{run, Suite, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Instances listed by `gglat list`, with `--pair` available on the SL2 rows.
pub const CATALOG: [(GroupLabel, u32); 8] = [
    (GroupLabel::GL2, 2),
    (GroupLabel::GL2, 3),
    (GroupLabel::GL2, 4),
    (GroupLabel::GL2, 5),
    (GroupLabel::GL2, 7),
    (GroupLabel::SL2, 3),
    (GroupLabel::SL2, 5),
    (GroupLabel::SL2, 7),
];

#[derive(Debug, Parser)]
#[command(name = "gglat", version, about = "Exact checks of Gelfand-Graev endomorphism lattices for GL2 and SL2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// List the supported instances.
    List,
    /// Manage the character-table cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        /// Cache directory (defaults to $GGLAT_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CacheAction {
    Clear,
    Validate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GroupArg {
    Gl2,
    Sl2,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub group: GroupArg,
    #[arg(long)]
    pub q: u32,
    /// Also build GL2 and check the SL2 < GL2 compatibilities (SL2 only).
    #[arg(long)]
    pub pair: bool,
    /// Index of the nontrivial character of U_0.
    #[arg(long, default_value_t = 0)]
    pub psi: usize,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long)]
    pub out: PathBuf,
    /// Cache directory (defaults to $GGLAT_CACHE_DIR; no caching when neither is set).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Test hook: multiply this K-basis vector by a prime outside pM.
    #[arg(long, hide = true)]
    pub scale_k_basis: Option<usize>,
}

impl VerifyArgs {
    pub fn config(&self) -> VerifyConfig {
        VerifyConfig {
            group: match self.group {
                GroupArg::Gl2 => GroupLabel::GL2,
                GroupArg::Sl2 => GroupLabel::SL2,
            },
            q: self.q,
            pair: self.pair,
            psi: self.psi,
            suite: self.suite,
            jobs: self.jobs,
            cache: TableCache::resolve(self.cache_dir.as_deref()),
            scale_k_basis: self.scale_k_basis,
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match cli.command {
        Command::Verify(args) => verify(&args, out, err),
        Command::List => list(out),
        Command::Cache { action, cache_dir } => cache(action, cache_dir, out, err),
    }
}

fn verify(args: &VerifyArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let report = match run(&args.config()) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = std::fs::write(&args.out, report.to_json() + "\n") {
        let _ = writeln!(err, "error: cannot write {}: {e}", args.out.display());
        return EXIT_CONFIG;
    }
    for ev in &report.cache {
        if let Some(e) = &ev.error {
            let _ = writeln!(err, "warning: {e}");
        }
    }
    for s in &report.suites {
        let status = match s.status {
            SuiteStatus::Pass => "PASS",
            SuiteStatus::Fail => "FAIL",
            SuiteStatus::Skipped => "SKIP",
        };
        let _ = writeln!(out, "{status} {:<10} {} checked, {} failed", s.name, s.checked, s.failed);
        for c in s.checks.iter().filter(|c| !c.passed()) {
            let _ = writeln!(out, "     {c}");
        }
        if let Some(r) = &s.reason {
            let _ = writeln!(out, "     {r}");
        }
    }
    if let Some(v) = &report.verdicts {
        let _ = writeln!(out, "verdict {} (direct {}, duality {})", v.verdict, v.direct, v.duality);
    }
    report.exit_code
}

fn list(out: &mut impl Write) -> i32 {
    let _ = writeln!(out, "{:<6}{:>4}{:>8}{:>6}{:>6}  pair", "group", "q", "order", "N", "deg");
    for (label, q) in CATALOG {
        let Ok(g) = GroupInstance::build(label, q) else { continue };
        let n = instance_modulus(g.p(), q);
        let deg = crate::arith::CycField::get(n).degree();
        let pair = if label == GroupLabel::SL2 { "yes" } else { "-" };
        let _ = writeln!(out, "{:<6}{:>4}{:>8}{:>6}{:>6}  {pair}", label.name(), q, g.order(), n, deg);
    }
    EXIT_PASS
}

fn cache(action: CacheAction, dir: Option<PathBuf>, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let Some(cache) = TableCache::resolve(dir.as_deref()) else {
        let _ = writeln!(err, "error: no cache directory: pass --cache-dir or set {CACHE_ENV}");
        return EXIT_CONFIG;
    };
    match action {
        CacheAction::Clear => match cache.clear() {
            Ok(n) => {
                let _ = writeln!(out, "removed {n} entries from {}", cache.dir().display());
                EXIT_PASS
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_CONFIG
            }
        },
        CacheAction::Validate => match cache.validate() {
            Ok(entries) => {
                if entries.is_empty() {
                    let _ = writeln!(out, "cache {} is empty", cache.dir().display());
                }
                for e in &entries {
                    let _ = writeln!(out, "{} {}: {}", if e.ok { "ok  " } else { "FAIL" }, e.file, e.detail);
                }
                if entries.iter().all(|e| e.ok) {
                    EXIT_PASS
                } else {
                    EXIT_CHECK_FAILED
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_CONFIG
            }
        },
    }
}
