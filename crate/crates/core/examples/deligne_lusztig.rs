//! Deligne-Lusztig characters R_S(theta) of GL2(F_q) and their Green functions.

use gg_lattice::deligne_lusztig::{verify_dl_formula_all, DlSystem};
use gg_lattice::groups::GroupLabel;
use gg_lattice::instance::Instance;

fn main() {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let inst = Instance::build(GroupLabel::GL2, q).unwrap();
    let dl = DlSystem::build(&inst).unwrap();
    for t in dl.tori() {
        println!("torus {} (sign {}): {} characters, Green function {:?}", t.kind().name(), t.sign(), t.len(), t.green());
        let chi = t.character(1);
        println!("  R(theta_1) = [{}]", chi.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "));
    }
    for c in dl.validate(&inst) {
        println!("{c}");
    }
    println!("{}", verify_dl_formula_all(&inst, &dl));
}
