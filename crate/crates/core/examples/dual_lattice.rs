//! The dual group, Brauer characters pi_lambda, the K-lattice and the identification of E_G.

use gg_lattice::deligne_lusztig::DlSystem;
use gg_lattice::dual::{pi_lambda, verify_identification, DualInstance, Identification, KLattice, TorusDuality};
use gg_lattice::gelfand_graev::{regular_characters, EndoBasis};
use gg_lattice::groups::GroupLabel;
use gg_lattice::instance::Instance;
use gg_lattice::tau::instance_ring;

fn main() {
    let inst = Instance::build(GroupLabel::SL2, 3).unwrap();
    let dl = DlSystem::build(&inst).unwrap();
    let dual = DualInstance::build(&inst).unwrap();
    println!("dual group {}: {} semisimple classes", dual.label(), dual.len());

    let pi = pi_lambda(&dual, [0, 2]).unwrap();
    println!("pi_(0,2) = [{}]", pi.iter().map(|v| v.to_cycnum(dual.field()).to_string()).collect::<Vec<_>>().join(", "));

    let k = KLattice::build(&dual).unwrap();
    println!("K spanned by {} orbit sums, basis lambdas {:?}", k.len(), k.basis_lambdas());
    println!("{}", k.verify_spanning(&instance_ring(&inst).unwrap()));

    let dualities: Vec<TorusDuality> = inst.tori().iter().map(|t| TorusDuality::build(&inst, t, &dual)).collect();
    let basis = EndoBasis::build(inst.group(), regular_characters(inst.group())[0], None).unwrap();
    let ident = Identification::build(&inst, &dl, &dual, &dualities, &basis).unwrap();
    for (i, f) in ident.images().iter().enumerate() {
        println!("identify(h_{i}) = [{}]", f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "));
    }
    for c in verify_identification(&inst, &dl, &dual, &dualities, &basis, &ident) {
        println!("{c}");
    }
}
