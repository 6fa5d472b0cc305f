//! tau~ on E_G x K: three formulas, the torus reduction and the central case.

use gg_lattice::deligne_lusztig::DlSystem;
use gg_lattice::dual::{lambda_box, DualInstance, KLattice, TorusDuality};
use gg_lattice::groups::GroupLabel;
use gg_lattice::instance::Instance;
use gg_lattice::tau::{instance_ring, spanning_functions, TauContext};

fn main() {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let inst = Instance::build(GroupLabel::GL2, q).unwrap();
    let dl = DlSystem::build(&inst).unwrap();
    let dual = DualInstance::build(&inst).unwrap();
    let dualities: Vec<TorusDuality> = inst.tori().iter().map(|t| TorusDuality::build(&inst, t, &dual)).collect();
    let k = KLattice::build(&dual).unwrap();
    let ring = instance_ring(&inst).unwrap();
    let ctx = TauContext::new(&inst, &dl, &dual, &dualities);

    let pi = &spanning_functions(&k)[1];
    let x = inst.classes().rep(inst.classes().len() - 1);
    println!("tau~({:?}, {}) = {}", inst.group().matrix(x), pi.0, ctx.tau_tilde_checked(x, &pi.1).unwrap());

    println!("{}", ctx.verify_tori());
    for c in ctx.verify_coherence(&spanning_functions(&k), true) {
        println!("{c}");
    }
    let lambdas = lambda_box(&dual, (q * q - 1) as i64);
    println!("{}", ctx.verify_reduction(&lambdas));
    for c in ctx.verify_central(&lambdas, &ring) {
        println!("{c}");
    }
}
