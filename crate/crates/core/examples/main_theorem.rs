//! E-lattice versus K-lattice over Z[zeta_N][1/pM] by both routes, then the scaled-basis control.

use gg_lattice::deligne_lusztig::DlSystem;
use gg_lattice::dual::{DualInstance, Identification, KLattice, TorusDuality};
use gg_lattice::gelfand_graev::{regular_characters, EndoBasis};
use gg_lattice::groups::GroupLabel;
use gg_lattice::instance::Instance;
use gg_lattice::tau::{control_prime, instance_ring, main_theorem, KBasis, TauContext};

fn main() {
    let mut args = std::env::args().skip(1);
    let label: GroupLabel = args.next().and_then(|a| a.parse().ok()).unwrap_or(GroupLabel::GL2);
    let q: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);

    let inst = Instance::build(label, q).unwrap();
    let dl = DlSystem::build(&inst).unwrap();
    let dual = DualInstance::build(&inst).unwrap();
    let dualities: Vec<TorusDuality> = inst.tori().iter().map(|t| TorusDuality::build(&inst, t, &dual)).collect();
    let basis = EndoBasis::build(inst.group(), regular_characters(inst.group())[0], None).unwrap();
    let ident = Identification::build(&inst, &dl, &dual, &dualities, &basis).unwrap();
    let k = KLattice::build(&dual).unwrap();
    let ring = instance_ring(&inst).unwrap();
    let ctx = TauContext::new(&inst, &dl, &dual, &dualities);

    let kb = KBasis::from_lattice(&k);
    let main = main_theorem(&ctx, &basis, &ident, &k, &kb, ring).unwrap();
    println!("{label}(F_{q}) over Z[zeta_{}][1/{}]", inst.modulus(), ring.inverted());
    for c in main.direct.iter().chain(&main.duality) {
        println!("  {c}");
    }
    println!("verdict {} (routes agree: {})", main.verdict(), main.routes_agree());

    let r = control_prime(&ring);
    let bad = main_theorem(&ctx, &basis, &ident, &k, &kb.scaled(0, r), ring).unwrap();
    println!("K-basis vector 0 scaled by {r}: {}", bad.verdict());
    if let Some(c) = bad.direct.iter().find(|c| !c.passed()) {
        println!("  {c}");
    }
}
