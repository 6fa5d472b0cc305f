//! The Gelfand-Graev idempotent, a basis of E_G = e End e with structure constants, and tau.

use gg_lattice::gelfand_graev::{gg_idempotent, regular_characters, EndoBasis};
use gg_lattice::groups::{GroupInstance, GroupLabel};

fn main() {
    let g = GroupInstance::build(GroupLabel::GL2, 3).unwrap();
    let psi = regular_characters(&g)[0];
    let e = gg_idempotent(&g, psi);
    println!("e_psi has {} terms, e^2 = e: {}", e.len(), e.mul(&e, &g) == e);

    let basis = EndoBasis::build(&g, psi, None).unwrap();
    println!("dim E_G = {}", basis.dim());
    for (i, &x) in basis.reps().iter().enumerate() {
        println!("  h_{i} = e {:?} e", g.matrix(x));
    }
    let n = basis.dim();
    println!("h_1 h_1 = {}", (0..n).map(|k| format!("({})h_{k}", basis.structure_constant(1, 1, k))).collect::<Vec<_>>().join(" + "));
    println!("Gram matrix tau(h_i h_j):");
    for row in basis.gram() {
        println!("  {}", row.iter().map(|v| format!("{v:>6}")).collect::<Vec<_>>().join(" "));
    }
}
