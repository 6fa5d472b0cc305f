//! Exact arithmetic in Q(zeta_N) and integrality over Z[zeta_N][1/pM].

use gg_lattice::arith::{is_pm_integral, rat, CycField, CycNum, LocalRingSpec};

fn main() {
    let k = CycField::get(24);
    println!("Q(zeta_24): degree {}, polynomial {:?}", k.degree(), k.cyclotomic_polynomial());

    let z = CycNum::zeta_pow(&k, 1);
    let i = CycNum::root_of_unity(&k, 4, 1).unwrap();
    println!("zeta^6 = i: {}", z.pow(6) == i);
    println!("zeta^24 = 1: {}", z.pow(24).is_one());

    let x = &z + &CycNum::from_ratio(&k, 1, 3);
    let y = x.inv().unwrap();
    println!("x = {x}");
    println!("x * x^-1 = {}", &x * &y);
    println!("N(x) = {}", x.norm());
    println!("conj(conj(x)) = x: {}", x.conj().conj() == x);

    let ring = LocalRingSpec::new(3, 1).unwrap();
    for v in [CycNum::from_ratio(&k, 1, 3), CycNum::from_ratio(&k, 1, 2), z.scale(&rat(5, 9))] {
        println!("{v:>12} integral over Z[zeta][1/3]: {}", is_pm_integral(&v, &ring));
    }
}
