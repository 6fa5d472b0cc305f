//! Exact character table of SL2(F_q) and both orthogonality relations.

use gg_lattice::groups::GroupLabel;
use gg_lattice::instance::Instance;

fn main() {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let inst = Instance::build(GroupLabel::SL2, q).expect("odd q");
    let table = inst.table();
    let cc = inst.classes();
    println!("SL2(F_{q}), values in Q(zeta_{})", inst.field().conductor());
    print!("{:>10}", "size");
    for c in 0..cc.len() {
        print!(" | {:>3}", cc.size(c));
    }
    println!();
    for (chi, d) in table.chars().iter().zip(table.degrees()) {
        print!("deg {d:>6}");
        for v in chi.values() {
            print!(" | {v}");
        }
        println!();
    }
    match table.validate() {
        Ok(()) => println!("row and column orthogonality hold exactly"),
        Err(e) => println!("validation failed: {e}"),
    }
    let reg = table.regular_character();
    let mult = table.decompose(&reg).unwrap();
    println!("regular character multiplicities: {}", mult.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "));
}
