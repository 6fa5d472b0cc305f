//! GL2, SL2 and PGL2 over F_q: orders, conjugacy classes, Jordan decomposition and maximal tori.

use gg_lattice::groups::{GroupInstance, GroupLabel};

fn main() {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    for label in [GroupLabel::GL2, GroupLabel::SL2, GroupLabel::PGL2] {
        let Ok(g) = GroupInstance::build(label, q) else {
            println!("{label}(F_{q}) is not supported");
            continue;
        };
        let cc = g.conjugacy_classes();
        println!("{label}(F_{q}): order {}, {} classes", g.order(), cc.len());
        for c in 0..cc.len() {
            let x = cc.rep(c);
            let j = g.jordan(x);
            let kind = if g.is_central(x) {
                "central"
            } else if g.is_unipotent(x) {
                "unipotent"
            } else if j.u == g.identity() {
                "semisimple"
            } else {
                "mixed"
            };
            println!("  {:>2}  {:?}  size {:>3}  order {:>2}  {kind}", c, g.matrix(x), cc.size(c), cc.rep_order(c));
        }
        if label != GroupLabel::PGL2 {
            for t in g.tori() {
                println!("  torus {}: order {}, |W(S)| = {}", t.kind().name(), t.order(), t.weyl_order());
            }
        }
    }
}
