//! Run the verification suites programmatically and print the JSON report.

use gg_lattice::groups::GroupLabel;
use gg_lattice::verify::{run, Suite, VerifyConfig};

fn main() {
    let mut cfg = VerifyConfig::new(GroupLabel::SL2, 3);
    cfg.pair = true;
    cfg.suite = Suite::Lattice;
    cfg.jobs = 2;
    let report = run(&cfg).expect("valid configuration");
    for s in &report.suites {
        println!("{:<10} {:?} ({} checks)", s.name, s.status, s.checked);
    }
    println!("exit code {}", report.exit_code);
    println!("{}", report.to_json());
}
