//! The extension `tau~(h, pi)` of `(h, pi) -> tau(h pi)` to the whole group algebra, its torus
//! and central reductions, bad primes, and the comparison of the two lattices.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{determinant, is_pm_integral, rat, ArithError, CycField, CycNum, ExactSolver, LocalRingSpec, Rat, RootAcc, RootVec};
use crate::chartab::{induce, ChartabError};
use crate::check::{cyc_witness, Check};
use crate::deligne_lusztig::{theta, DlSystem, RootWeights};
use crate::dual::{pi_lambda, root_weights, to_cycnums, torus_inverse_roots, weyl_orbit, DualError, DualInstance, Identification, KLattice, SsClassFunction, TorusDuality};
use crate::gelfand_graev::{include_into_h, EndoBasis};
use crate::groups::{Elem, ExtensionData, GroupInstance, GroupLabel, JordanPair, TorusConjugate, TorusKind};
use crate::instance::Instance;

#[derive(Debug, thiserror::Error)]
pub enum TauError {
    #[error("unknown root system type {0:?}")]
    UnknownType(String),
    #[error("tau~ formulas disagree at class {class}: {detail}")]
    FormulaMismatch { class: usize, detail: String },
    #[error("lattice basis has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Chartab(#[from] ChartabError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadPrimeData {
    pub types: Vec<String>,
    pub primes: Vec<u64>,
    pub m: u64,
}

fn parse_type(label: &str) -> Option<(char, u32)> {
    let t: String = label.trim().chars().filter(|&c| c != '_').collect();
    let mut chars = t.chars();
    let family = chars.next()?.to_ascii_uppercase();
    let n: u32 = chars.as_str().parse().ok()?;
    let ok = match family {
        'A' => n >= 1,
        'B' | 'C' => n >= 2,
        'D' => n >= 4,
        'G' => n == 2,
        'F' => n == 4,
        'E' => (6..=8).contains(&n),
        _ => false,
    };
    ok.then_some((family, n))
}

/// Bad primes of a root system given by its irreducible factors: 2 if some factor is not of
/// type A; 3 and 5 if some factor is exceptional; 7 if some factor is `E8`.
pub fn bad_primes<S: AsRef<str>>(types: &[S]) -> Result<BadPrimeData, TauError> {
    let mut primes = BTreeSet::new();
    for label in types {
        let label = label.as_ref();
        let (family, n) = parse_type(label).ok_or_else(|| TauError::UnknownType(label.to_string()))?;
        if family != 'A' {
            primes.insert(2);
        }
        if matches!(family, 'G' | 'F' | 'E') {
            primes.insert(3);
            primes.insert(5);
        }
        if family == 'E' && n == 8 {
            primes.insert(7);
        }
    }
    let primes: Vec<u64> = primes.into_iter().collect();
    let m = primes.iter().product();
    Ok(BadPrimeData { types: types.iter().map(|t| t.as_ref().to_string()).collect(), primes, m })
}

/// Irreducible factors of the root system.
pub fn root_types(label: GroupLabel) -> Vec<&'static str> {
    match label {
        GroupLabel::GL2 | GroupLabel::SL2 | GroupLabel::PGL2 => vec!["A1"],
    }
}

/// `Z[zeta_N][1/pM]` for an instance.
pub fn instance_ring(inst: &Instance) -> Result<LocalRingSpec, TauError> {
    let bad = bad_primes(&root_types(inst.label()))?;
    Ok(LocalRingSpec::new(inst.p() as u64, bad.m)?)
}

/// A function on the classes of `G^F`, `scale * roots[c]`.
#[derive(Debug, Clone)]
pub struct ClassTable {
    roots: Vec<RootVec>,
    scale: Rat,
}

impl ClassTable {
    pub fn roots(&self) -> &[RootVec] {
        &self.roots
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn value(&self, c: usize, field: &Arc<CycField>) -> CycNum {
        self.roots[c].to_cycnum(field).scale(&self.scale)
    }

    pub fn values(&self, field: &Arc<CycField>) -> Vec<CycNum> {
        (0..self.roots.len()).map(|c| self.value(c, field)).collect()
    }

    /// `sum_c w_c T[c]`.
    pub fn pair(&self, w: &RootWeights, field: &Arc<CycField>) -> CycNum {
        w.pair(&self.roots, field).scale(&self.scale)
    }
}

/// `r * x` for a root sum `r`.
pub fn root_mul(r: &RootVec, x: &CycNum) -> CycNum {
    let m = r.modulus();
    r.terms().iter().fold(CycNum::zero(x.field()), |acc, &(e, k)| acc + x.mul_root(m, e as i64).scale_int(k))
}

/// Torus data for evaluating `tau~` on one instance.
pub struct TauContext<'a> {
    inst: &'a Instance,
    dl: &'a DlSystem,
    dual: &'a DualInstance,
    dualities: &'a [TorusDuality],
    conjugates: Vec<Vec<TorusConjugate>>,
    locator: Vec<Option<(usize, usize, usize)>>,
}

impl<'a> TauContext<'a> {
    pub fn new(inst: &'a Instance, dl: &'a DlSystem, dual: &'a DualInstance, dualities: &'a [TorusDuality]) -> TauContext<'a> {
        let g = inst.group();
        let conjugates: Vec<Vec<TorusConjugate>> = inst.tori().iter().map(|t| g.torus_conjugates(t)).collect();
        let mut locator = vec![None; g.order()];
        for (i, cs) in conjugates.iter().enumerate() {
            for (j, c) in cs.iter().enumerate() {
                for (pos, &x) in c.elements.iter().enumerate() {
                    if !g.is_central(x) {
                        locator[x as usize] = Some((i, j, pos));
                    }
                }
            }
        }
        TauContext { inst, dl, dual, dualities, conjugates, locator }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn field(&self) -> &Arc<CycField> {
        self.inst.field()
    }

    /// Every noncentral semisimple element lies in exactly one maximal torus, and every torus
    /// contains the centre.
    pub fn verify_tori(&self) -> Check {
        let g = self.inst.group();
        let mut check = Check::new("maximal tori cover semisimple elements");
        let mut count = vec![0usize; g.order()];
        for cs in &self.conjugates {
            for c in cs {
                for &x in &c.elements {
                    count[x as usize] += 1;
                }
            }
        }
        let tori: usize = self.conjugates.iter().map(Vec::len).sum();
        for x in g.elements() {
            if !g.is_semisimple(x) {
                continue;
            }
            let expected = if g.is_central(x) { tori } else { 1 };
            check.record(count[x as usize] == expected, || format!("element {x} in {} tori, expected {expected}", count[x as usize]));
        }
        check
    }

    fn on_torus(&self, i: usize, pi: &[RootVec]) -> Vec<RootVec> {
        self.dualities[i].classes().iter().map(|&c| pi[c].clone()).collect()
    }

    /// `|S| * Cur_S(pi)` in `Q S^F` for each standard torus, by torus position.
    pub fn curtis_coefficients(&self, pi: &[RootVec]) -> Vec<Vec<RootVec>> {
        let m = self.inst.modulus();
        (0..self.dualities.len()).map(|i| torus_inverse_roots(&self.inst.tori()[i], m, &self.on_torus(i, pi))).collect()
    }

    /// Sum over torus classes `S`, weighted by `eps / (|W_G(S)^F| |S^F|)`, of
    /// `sum_chi R_S(chi)(c) chi(Cur_S(pi))`, with `chi(Cur_S(pi)) = pi(s*_chi)`.
    pub fn table18(&self, pi: &[RootVec]) -> ClassTable {
        let m = self.inst.modulus();
        let denoms: Vec<i64> = self.inst.tori().iter().map(|t| (t.weyl_order() * t.order()) as i64).collect();
        let l = denoms.iter().fold(1i64, |a, d| a.lcm(d));
        let roots = (0..self.inst.classes().len())
            .map(|c| {
                let mut acc = RootAcc::new(m);
                for (i, d) in self.dualities.iter().enumerate() {
                    let dt = self.dl.torus(i);
                    let k = dt.sign() * (l / denoms[i]);
                    for b in 0..d.len() {
                        let r = &dt.roots(b)[c];
                        if !r.is_zero() {
                            acc.add_product(r, &pi[d.class(b)], k);
                        }
                    }
                }
                acc.to_rootvec()
            })
            .collect();
        ClassTable { roots, scale: rat(1, l) }
    }

    /// Average over `w in W = {1, s}` with `T_1` split and `T_s` nonsplit, weighted by
    /// `eps / |T_w^F|`, of `sum_chi R_{T_w}(chi)(c) chi(Cur_{T_w}(pi))`, where `chi(Cur)` is
    /// evaluated from the coefficients of `Cur` in `Q T_w^F`.
    pub fn table16(&self, pi: &[RootVec]) -> ClassTable {
        let m = self.inst.modulus();
        let tori = self.inst.tori();
        let weyl: Vec<usize> = [TorusKind::Split, TorusKind::Nonsplit]
            .iter()
            .map(|&k| tori.iter().position(|t| t.kind() == k).expect("both torus kinds"))
            .collect();
        let w_order = weyl.len() as i64;
        let denoms: Vec<i64> = weyl.iter().map(|&i| w_order * (tori[i].order() * tori[i].order()) as i64).collect();
        let l = denoms.iter().fold(1i64, |a, d| a.lcm(d));
        let cur = self.curtis_coefficients(pi);
        let chi_cur: Vec<Vec<RootVec>> = weyl
            .iter()
            .map(|&i| {
                let torus = &tori[i];
                (0..torus.order())
                    .map(|b| {
                        let mut acc = RootAcc::new(m);
                        for (t, c) in cur[i].iter().enumerate() {
                            if !c.is_zero() {
                                acc.add_product(c, &theta(torus, b, t, m), 1);
                            }
                        }
                        acc.to_rootvec()
                    })
                    .collect()
            })
            .collect();
        let roots = (0..self.inst.classes().len())
            .map(|c| {
                let mut acc = RootAcc::new(m);
                for (w, &i) in weyl.iter().enumerate() {
                    let dt = self.dl.torus(i);
                    let k = dt.sign() * (l / denoms[w]);
                    for (b, x) in chi_cur[w].iter().enumerate() {
                        let r = &dt.roots(b)[c];
                        if !r.is_zero() && !x.is_zero() {
                            acc.add_product(r, x, k);
                        }
                    }
                }
                acc.to_rootvec()
            })
            .collect();
        ClassTable { roots, scale: rat(1, l) }
    }

    /// Value at the group element `x = su` from the tori containing `s`: for central `s`, all
    /// tori with their Green functions; otherwise the unique torus containing `s`.
    pub fn tau20(&self, x: Elem, cur: &[Vec<RootVec>]) -> (RootVec, Rat) {
        let g = self.inst.group();
        let m = self.inst.modulus();
        let JordanPair { s, u } = g.jordan(x);
        let s_inv = g.inv(s);
        if g.is_central(s) {
            let uc = self.inst.classes().class_of(u);
            let mut acc = RootAcc::new(m);
            for (i, cs) in self.conjugates.iter().enumerate() {
                let dt = self.dl.torus(i);
                let green = self.dl.green_at(i, uc).expect("u is unipotent");
                for conj in cs {
                    let pos = conj.elements.iter().position(|&y| y == s_inv).expect("the centre lies in every torus");
                    acc.add(&cur[i][pos], dt.sign() * green);
                }
            }
            (acc.to_rootvec(), rat(1, g.order() as i64))
        } else {
            let (i, _, pos) = self.locator[s_inv as usize].expect("noncentral semisimple elements lie in a torus");
            let k = if u == g.identity() { self.dl.torus(i).sign() } else { 0 };
            (cur[i][pos].scale(k), rat(1, self.inst.tori()[i].order() as i64))
        }
    }

    /// `tau~(h, pi)` for a group-algebra element given by its class weights.
    pub fn tau_tilde(&self, h: &RootWeights, pi: &[RootVec]) -> CycNum {
        self.table18(pi).pair(h, self.field())
    }

    /// `tau~(x, pi)` at a group element, evaluated by all three formulas.
    pub fn tau_tilde_checked(&self, x: Elem, pi: &[RootVec]) -> Result<CycNum, TauError> {
        let field = self.field();
        let c = self.inst.classes().class_of(x);
        let a = self.table18(pi).value(c, field);
        let b = self.table16(pi).value(c, field);
        let (r, s) = self.tau20(x, &self.curtis_coefficients(pi));
        let j = r.to_cycnum(field).scale(&s);
        if a != b || a != j {
            return Err(TauError::FormulaMismatch {
                class: c,
                detail: format!("torus classes {}, Weyl sum {}, Jordan {}", cyc_witness(&a), cyc_witness(&b), cyc_witness(&j)),
            });
        }
        Ok(a)
    }

    /// The three formulas agree on every class (every element when `all_elements`) for each `pi`.
    pub fn verify_coherence(&self, pis: &[(String, Vec<RootVec>)], all_elements: bool) -> Vec<Check> {
        let field = self.field();
        let g = self.inst.group();
        let cc = self.inst.classes();
        let elements: Vec<Elem> = if all_elements { g.elements().collect() } else { cc.reps().to_vec() };
        let parts: Vec<(Check, Check)> = pis
            .par_iter()
            .map(|(name, pi)| {
                let mut weyl = Check::new("tau~ Weyl average equals torus-class sum");
                let mut jordan = Check::new("tau~ Jordan form equals torus-class sum");
                let t18 = self.table18(pi).values(field);
                let t16 = self.table16(pi).values(field);
                for c in 0..cc.len() {
                    weyl.record(t16[c] == t18[c], || format!("{name} class {c}: {} vs {}", cyc_witness(&t16[c]), cyc_witness(&t18[c])));
                }
                let cur = self.curtis_coefficients(pi);
                let mut seen: HashMap<(RootVec, Rat), CycNum> = HashMap::new();
                for &x in &elements {
                    let key = self.tau20(x, &cur);
                    let v = seen.entry(key).or_insert_with_key(|(r, s)| r.to_cycnum(field).scale(s)).clone();
                    let c = cc.class_of(x);
                    jordan.record(v == t18[c], || format!("{name} element {x}: {} vs {}", cyc_witness(&v), cyc_witness(&t18[c])));
                }
                (weyl, jordan)
            })
            .collect();
        let (weyl, jordan): (Vec<Check>, Vec<Check>) = parts.into_iter().unzip();
        vec![
            merge_all("tau~ Weyl average equals torus-class sum", weyl),
            merge_all("tau~ Jordan form equals torus-class sum", jordan),
        ]
    }

    /// `tau~(h_i, pi) = tau(h_i * pi)` with `pi` pulled back to `E` and `tau` taken from the Gram matrix.
    pub fn verify_restriction(&self, basis: &EndoBasis, ident: &Identification, pis: &[(String, Vec<RootVec>)]) -> Check {
        let field = self.field();
        let mut check = Check::new("tau~ restricts to tau on E");
        let weights: Vec<RootWeights> = basis.elements().iter().map(|h| root_weights(self.inst, h)).collect();
        let gram = lift_matrix(basis.gram(), field);
        for (name, pi) in pis {
            let x = match ident.preimage(&to_cycnums(field, pi)) {
                Ok(x) => x,
                Err(e) => {
                    check.fail(format!("{name}: {e}"));
                    continue;
                }
            };
            let table = self.table18(pi);
            for (i, w) in weights.iter().enumerate() {
                let lhs = table.pair(w, field);
                let rhs = x.iter().zip(&gram[i]).fold(CycNum::zero(field), |acc, (a, b)| acc + a * b);
                check.record(lhs == rhs, || format!("h_{i}, {name}: {} vs {}", cyc_witness(&lhs), cyc_witness(&rhs)));
            }
        }
        check
    }

    /// Both sides of the torus reduction at class `c` (`None` when the semisimple part is central).
    pub fn reduction_sides(&self, c: usize, lambda: [i64; 2], table: &ClassTable) -> Option<(CycNum, CycNum)> {
        let g = self.inst.group();
        let field = self.field();
        let m = self.inst.modulus();
        let x = self.inst.classes().rep(c);
        let JordanPair { s, u } = g.jordan(x);
        if g.is_central(s) {
            return None;
        }
        assert_eq!(u, g.identity(), "the centralizer of a noncentral semisimple element is a torus");
        let (i, _, pos) = self.locator[s as usize].expect("noncentral semisimple elements lie in a torus");
        let torus = &self.inst.tori()[i];
        let d = &self.dualities[i];
        let mut acc = RootAcc::new(m);
        for mu in weyl_orbit(lambda) {
            for b in 0..d.len() {
                let [l1, l2] = d.logs(b);
                let pi_s = self.dual.brauer_lift(mu[0] * l1 + mu[1] * l2);
                acc.add_product(&pi_s, &theta(torus, b, pos, m), self.dl.torus(i).sign());
            }
        }
        let rhs = acc.finish(field).scale(&rat(1, torus.order() as i64));
        Some((table.value(c, field), rhs))
    }

    /// The torus reduction at every class with noncentral semisimple part, for each `lambda`.
    pub fn verify_reduction(&self, lambdas: &[[i64; 2]]) -> Check {
        let name = "reduction to the centralizer torus";
        let parts: Vec<Check> = lambdas
            .par_iter()
            .map(|&lambda| {
                let mut check = Check::new(name);
                let pi = match pi_lambda(self.dual, lambda) {
                    Ok(pi) => pi,
                    Err(e) => {
                        check.fail(format!("{lambda:?}: {e}"));
                        return check;
                    }
                };
                let table = self.table18(&pi);
                for c in 0..self.inst.classes().len() {
                    if let Some((lhs, rhs)) = self.reduction_sides(c, lambda, &table) {
                        check.record(lhs == rhs, || format!("class {c}, lambda {lambda:?}: {} vs {}", cyc_witness(&lhs), cyc_witness(&rhs)));
                    }
                }
                check
            })
            .collect();
        merge_all(name, parts)
    }

    /// `gamma = (1/|W|) sum_w eps Q_{T_w}(u) Ind_{T_w*}^{G*}(s^{-1} hat)` on the classes of
    /// `G*^{F*}`, for `x = su` with central `s`.
    pub fn central_gamma(&self, x: Elem) -> Result<Vec<CycNum>, TauError> {
        let g = self.inst.group();
        let m = self.inst.modulus();
        let field = self.dual.field();
        let JordanPair { s, u } = g.jordan(x);
        let s_inv = g.inv(s);
        let uc = self.inst.classes().class_of(u);
        let w_order = self.dualities.len() as i64;
        let mut gamma = vec![CycNum::zero(field); self.dual.classes().len()];
        for (i, d) in self.dualities.iter().enumerate() {
            let torus = &self.inst.tori()[i];
            let pos = torus.position(s_inv).expect("the centre lies in every torus");
            let f: Vec<CycNum> = (0..d.len()).map(|b| theta(torus, b, pos, m).to_cycnum(field)).collect();
            let ind = induce(self.dual.context(), self.dual.group(), self.dual.classes(), d.elements(), &f)?;
            let k = self.dl.torus(i).sign() * self.dl.green_at(i, uc).expect("u is unipotent");
            for (acc, v) in gamma.iter_mut().zip(ind.values()) {
                *acc = &*acc + &v.scale(&rat(k, w_order));
            }
        }
        Ok(gamma)
    }

    /// `<pi, gamma>` over `G*^{F*}`; `gamma` must vanish off semisimple classes.
    pub fn central_pairing(&self, gamma: &[CycNum], pi: &[RootVec]) -> Option<CycNum> {
        let dg = self.dual.group();
        let dc = self.dual.classes();
        let field = self.dual.field();
        let mut acc = CycNum::zero(field);
        for (c, v) in gamma.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let k = self.dual.class_of_element(dc.rep(c)).filter(|_| dg.is_semisimple(dc.rep(c)))?;
            acc = acc + root_mul(&pi[k], &v.conj()).scale_int(dc.size(c) as i64);
        }
        Some(acc.scale(&rat(1, dg.order() as i64)))
    }

    /// Classes whose semisimple part is central.
    pub fn central_classes(&self) -> Vec<usize> {
        let g = self.inst.group();
        let cc = self.inst.classes();
        (0..cc.len()).filter(|&c| g.is_central(g.jordan(cc.rep(c)).s)).collect()
    }

    /// Orthogonality form at central classes, its integrality, and integrality at every class.
    pub fn verify_central(&self, lambdas: &[[i64; 2]], ring: &LocalRingSpec) -> Vec<Check> {
        let field = self.field();
        let cc = self.inst.classes();
        let mut identity = Check::new("central case via induced characters");
        let mut integral = Check::new("tau~ integral at central semisimple part");
        let mut weak = Check::new("tau~ integral at every element");
        let central = self.central_classes();
        let mut gammas = Vec::new();
        for &c in &central {
            match self.central_gamma(cc.rep(c)) {
                Ok(g) => gammas.push(Some(g)),
                Err(e) => {
                    identity.fail(format!("class {c}: {e}"));
                    gammas.push(None);
                }
            }
        }
        let parts: Vec<[Check; 3]> = lambdas
            .par_iter()
            .map(|&lambda| {
                let mut identity = Check::new(identity.name.clone());
                let mut integral = Check::new(integral.name.clone());
                let mut weak = Check::new(weak.name.clone());
                let pi = match pi_lambda(self.dual, lambda) {
                    Ok(pi) => pi,
                    Err(e) => {
                        identity.fail(format!("{lambda:?}: {e}"));
                        return [identity, integral, weak];
                    }
                };
                let values = self.table18(&pi).values(field);
                for (c, v) in values.iter().enumerate() {
                    weak.record(is_pm_integral(v, ring), || format!("class {c}, lambda {lambda:?}: {}", cyc_witness(v)));
                }
                for (&c, gamma) in central.iter().zip(&gammas) {
                    let Some(gamma) = gamma else { continue };
                    integral.record(is_pm_integral(&values[c], ring), || format!("class {c}, lambda {lambda:?}: {}", cyc_witness(&values[c])));
                    match self.central_pairing(gamma, &pi) {
                        Some(rhs) => {
                            identity.record(values[c] == rhs, || {
                                format!("class {c}, lambda {lambda:?}: {} vs {}", cyc_witness(&values[c]), cyc_witness(&rhs))
                            });
                        }
                        None => identity.fail(format!("class {c}: gamma is not supported on semisimple classes")),
                    }
                }
                [identity, integral, weak]
            })
            .collect();
        for [a, b, c] in parts {
            identity.merge(a);
            integral.merge(b);
            weak.merge(c);
        }
        vec![identity, integral, weak]
    }

    /// `Gram_K[i][j] = tau~(e_psi, pi_i pi_j)`: rational integers with determinant a unit of `Z[1/pM]`.
    pub fn verify_self_dual_k(&self, unit: &RootWeights, k: &KBasis, ring: &LocalRingSpec) -> Check {
        let field = self.field();
        let mut check = Check::new("K Gram matrix is integral and unimodular");
        let n = k.len();
        let mut gram = vec![vec![CycNum::zero(field); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod: Vec<RootVec> = k.roots[i].iter().zip(&k.roots[j]).map(|(a, b)| a.mul(b)).collect();
                let v = self.tau_tilde(unit, &prod);
                check.record(v.to_integer().is_some(), || format!("tau(pi_{i} pi_{j}) = {}", cyc_witness(&v)));
                gram[i][j] = v.clone();
                gram[j][i] = v;
            }
        }
        record_unit_det(&mut check, field, &gram, ring);
        check
    }

    /// `tau~(h_i, pi_j)` is integral for every `E`-basis element and `K`-basis vector.
    pub fn verify_cross(&self, weights: &[RootWeights], k: &KBasis, ring: &LocalRingSpec) -> Check {
        let field = self.field();
        let mut check = Check::new("tau(h_i pi_j) integral");
        for (j, pi) in k.roots.iter().enumerate() {
            let table = self.table18(pi);
            for (i, w) in weights.iter().enumerate() {
                let v = table.pair(w, field);
                check.record(is_pm_integral(&v, ring), || format!("h_{i}, pi_{j} (lambda {:?}): {}", k.lambdas[j], cyc_witness(&v)));
            }
        }
        check
    }
}

fn lift_matrix(m: &[Vec<CycNum>], field: &Arc<CycField>) -> Vec<Vec<CycNum>> {
    m.iter().map(|row| row.iter().map(|x| x.lift_to(field).expect("coefficient field embeds")).collect()).collect()
}

fn record_unit_det(check: &mut Check, field: &Arc<CycField>, gram: &[Vec<CycNum>], ring: &LocalRingSpec) {
    match determinant(field, gram) {
        Ok(d) => {
            let unit = is_pm_integral(&d, ring) && d.inv().is_ok_and(|x| is_pm_integral(&x, ring));
            check.record(unit, || format!("determinant {}", cyc_witness(&d)));
        }
        Err(e) => check.fail(format!("determinant: {e}")),
    }
}

fn merge_all(name: &str, parts: Vec<Check>) -> Check {
    let mut all = Check::new(name);
    for c in parts {
        all.merge(c);
    }
    all
}

/// `tau(h_i h_j)` is integral with unit determinant.
pub fn verify_self_dual_e(basis: &EndoBasis, ring: &LocalRingSpec) -> Check {
    let mut check = Check::new("E Gram matrix is integral and unimodular");
    for (i, row) in basis.gram().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            check.record(is_pm_integral(v, ring), || format!("tau(h_{i} h_{j}) = {}", cyc_witness(v)));
        }
    }
    record_unit_det(&mut check, basis.field(), basis.gram(), ring);
    check
}

/// A basis of the K-lattice as root sums, possibly with one vector scaled.
#[derive(Debug, Clone)]
pub struct KBasis {
    pub lambdas: Vec<[i64; 2]>,
    pub roots: Vec<Vec<RootVec>>,
    pub scaled: Option<(usize, i64)>,
}

impl KBasis {
    pub fn from_lattice(k: &KLattice) -> KBasis {
        KBasis {
            lambdas: k.basis_lambdas(),
            roots: k.basis_indices().iter().map(|&i| k.generator(i).to_vec()).collect(),
            scaled: None,
        }
    }

    /// The same basis with vector `index` multiplied by `r`.
    pub fn scaled(&self, index: usize, r: i64) -> KBasis {
        let mut out = self.clone();
        out.roots[index] = out.roots[index].iter().map(|v| v.scale(r)).collect();
        out.scaled = Some((index, r));
        out
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn values(&self, field: &Arc<CycField>) -> Vec<SsClassFunction> {
        self.roots.iter().map(|v| to_cycnums(field, v)).collect()
    }
}

/// Smallest prime not dividing `pM`.
pub fn control_prime(ring: &LocalRingSpec) -> i64 {
    (2..).find(|&r: &u64| (2..r).all(|d| r % d != 0) && !ring.inverted().is_multiple_of(r)).expect("primes are infinite") as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "EQUAL")]
    Equal,
    #[serde(rename = "NOT-EQUAL")]
    NotEqual,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "EQUAL",
            Verdict::NotEqual => "NOT-EQUAL",
        })
    }
}

impl Verdict {
    pub fn from_checks<'c>(checks: impl IntoIterator<Item = &'c Check>) -> Verdict {
        if checks.into_iter().all(Check::passed) {
            Verdict::Equal
        } else {
            Verdict::NotEqual
        }
    }
}

/// The `Lambda`-span of a basis of functions on semisimple classes.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    name: String,
    basis: Vec<SsClassFunction>,
    ring: LocalRingSpec,
    solver: ExactSolver,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Inside(Vec<CycNum>),
    Outside { coordinate: usize, value: CycNum },
    NotInSpan,
}

impl LatticeSpec {
    pub fn new(name: impl Into<String>, field: &Arc<CycField>, basis: Vec<SsClassFunction>, ring: LocalRingSpec) -> Result<LatticeSpec, TauError> {
        let n = basis.first().map_or(0, Vec::len);
        let matrix: Vec<Vec<CycNum>> = (0..n).map(|c| basis.iter().map(|v| v[c].clone()).collect()).collect();
        let solver = ExactSolver::new(field, &matrix)?;
        if solver.rank() != basis.len() || basis.len() != n {
            return Err(TauError::RankDeficient { rank: solver.rank(), expected: n });
        }
        Ok(LatticeSpec { name: name.into(), basis, ring, solver })
    }

    /// Reuses a solver already built on the matrix whose columns are `basis`.
    pub fn with_solver(name: impl Into<String>, basis: Vec<SsClassFunction>, ring: LocalRingSpec, solver: ExactSolver) -> LatticeSpec {
        LatticeSpec { name: name.into(), basis, ring, solver }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[SsClassFunction] {
        &self.basis
    }

    pub fn ring(&self) -> LocalRingSpec {
        self.ring
    }

    pub fn membership(&self, v: &[CycNum]) -> Membership {
        match self.solver.solve(v) {
            Ok(x) => match x.iter().position(|c| !is_pm_integral(c, &self.ring)) {
                Some(j) => Membership::Outside { coordinate: j, value: x[j].clone() },
                None => Membership::Inside(x),
            },
            Err(_) => Membership::NotInSpan,
        }
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        matches!(self.membership(v), Membership::Inside(_))
    }
}

/// Every basis vector of `a` lies in `b`.
pub fn lattice_contains(a: &LatticeSpec, b: &LatticeSpec) -> Check {
    let mut check = Check::new(format!("{} inside {}", a.name, b.name));
    for (k, v) in a.basis.iter().enumerate() {
        match b.membership(v) {
            Membership::Inside(_) => {
                check.record(true, String::new);
            }
            Membership::Outside { coordinate, value } => {
                check.fail(format!("{} vector {k}: coordinate {coordinate} = {} is not integral", a.name, cyc_witness(&value)))
            }
            Membership::NotInSpan => check.fail(format!("{} vector {k} is outside the span", a.name)),
        }
    }
    check
}

pub fn lattice_equal(a: &LatticeSpec, b: &LatticeSpec) -> (Verdict, Vec<Check>) {
    let checks = vec![lattice_contains(a, b), lattice_contains(b, a)];
    (Verdict::from_checks(&checks), checks)
}

/// Both verdict routes: direct mutual membership, and self-duality of each lattice with
/// integrality of the cross pairing.
#[derive(Debug, Clone)]
pub struct MainTheorem {
    pub ring: LocalRingSpec,
    pub scaled: Option<(usize, i64)>,
    pub direct: Vec<Check>,
    pub direct_verdict: Verdict,
    pub duality: Vec<Check>,
    pub duality_verdict: Verdict,
}

impl MainTheorem {
    pub fn routes_agree(&self) -> bool {
        self.direct_verdict == self.duality_verdict
    }

    pub fn verdict(&self) -> Verdict {
        if self.direct_verdict == Verdict::Equal && self.duality_verdict == Verdict::Equal {
            Verdict::Equal
        } else {
            Verdict::NotEqual
        }
    }
}

pub fn main_theorem(ctx: &TauContext, basis: &EndoBasis, ident: &Identification, k: &KLattice, kb: &KBasis, ring: LocalRingSpec) -> Result<MainTheorem, TauError> {
    let field = ctx.field();
    let e = LatticeSpec::with_solver("E", ident.images().to_vec(), ring, ident.solver().clone());
    let kspec = match kb.scaled {
        None => LatticeSpec::with_solver("K", kb.values(field), ring, k.solver().clone()),
        Some(_) => LatticeSpec::new("K", field, kb.values(field), ring)?,
    };
    let (direct_verdict, direct) = lattice_equal(&e, &kspec);
    let weights: Vec<RootWeights> = basis.elements().iter().map(|h| root_weights(ctx.instance(), h)).collect();
    let duality = vec![
        verify_self_dual_e(basis, &ring),
        ctx.verify_self_dual_k(&weights[basis.unit_index()], kb, &ring),
        ctx.verify_cross(&weights, kb, &ring),
    ];
    let duality_verdict = Verdict::from_checks(&duality);
    Ok(MainTheorem { ring, scaled: kb.scaled, direct, direct_verdict, duality, duality_verdict })
}

/// `tau_G(h pi) = tau_H(h pi)` for `G = SL2 < H = GL2`: the left side through the Gram matrix of
/// `E_G`, the right side through `E_H` and products in `Q H`.
#[allow(clippy::too_many_arguments)]
pub fn verify_pair_tau(
    g_basis: &EndoBasis,
    g_ident: &Identification,
    h_group: &GroupInstance,
    h_basis: &EndoBasis,
    h_ident: &Identification,
    ext: &ExtensionData,
    map: &[usize],
    pis: &[(String, Vec<RootVec>)],
    field: &Arc<CycField>,
) -> Vec<Check> {
    let mut inclusion = Check::new("E_G lies in E_H");
    let mut agreement = Check::new("tau_G(h pi) = tau_H(h pi)");
    let q = h_group.q() as i64;
    let inc: Vec<_> = g_basis.elements().iter().map(|h| include_into_h(h, ext)).collect();
    for (i, x) in inc.iter().enumerate() {
        inclusion.record(h_basis.coordinates(x).is_some(), || format!("h_{i}"));
    }
    let pair: Vec<Vec<CycNum>> = inc
        .iter()
        .map(|x| {
            h_basis
                .elements()
                .iter()
                .map(|y| {
                    x.terms()
                        .fold(CycNum::zero(x.field()), |acc, (g, c)| acc + c * &y.coeff(h_group.inv(g)))
                        .scale_int(q)
                        .lift_to(field)
                        .expect("coefficient field embeds")
                })
                .collect()
        })
        .collect();
    let g_gram = lift_matrix(g_basis.gram(), field);
    for (name, pi) in pis {
        let pi_g = to_cycnums(field, pi);
        let pi_h: Vec<CycNum> = map.iter().map(|&c| pi_g[c].clone()).collect();
        let (xg, xh) = match (g_ident.preimage(&pi_g), h_ident.preimage(&pi_h)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                agreement.fail(format!("{name}: no preimage"));
                continue;
            }
        };
        for i in 0..g_basis.dim() {
            let lhs = xg.iter().zip(&g_gram[i]).fold(CycNum::zero(field), |acc, (a, b)| acc + a * b);
            let rhs = xh.iter().zip(&pair[i]).fold(CycNum::zero(field), |acc, (a, b)| acc + a * b);
            agreement.record(lhs == rhs, || format!("h_{i}, {name}: {} vs {}", cyc_witness(&lhs), cyc_witness(&rhs)));
        }
    }
    vec![inclusion, agreement]
}

/// `(label, pi_lambda)` for each generator of the lattice.
pub fn spanning_functions(k: &KLattice) -> Vec<(String, Vec<RootVec>)> {
    (0..k.len()).map(|i| (format!("lambda {:?}", k.lambdas()[i]), k.generator(i).to_vec())).collect()
}

/// `(label, pi)` for the basis vectors only.
pub fn basis_functions(kb: &KBasis) -> Vec<(String, Vec<RootVec>)> {
    kb.lambdas.iter().zip(&kb.roots).map(|(l, v)| (format!("lambda {l:?}"), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{lambda_box, quotient_map};
    use crate::gelfand_graev::regular_characters;

    struct Built {
        inst: Instance,
        dl: DlSystem,
        dual: DualInstance,
        dualities: Vec<TorusDuality>,
        basis: EndoBasis,
        ident: Identification,
    }

    fn build(label: GroupLabel, q: u32) -> Built {
        let inst = Instance::build(label, q).unwrap();
        let dl = DlSystem::build(&inst).unwrap();
        let dual = DualInstance::build(&inst).unwrap();
        let dualities: Vec<TorusDuality> = inst.tori().iter().map(|t| TorusDuality::build(&inst, t, &dual)).collect();
        let basis = EndoBasis::build(inst.group(), regular_characters(inst.group())[0], None).unwrap();
        let ident = Identification::build(&inst, &dl, &dual, &dualities, &basis).unwrap();
        Built { inst, dl, dual, dualities, basis, ident }
    }

    #[test]
    fn bad_prime_table() {
        assert_eq!(bad_primes(&["A1"]).unwrap().m, 1);
        let e8 = bad_primes(&["E8"]).unwrap();
        assert_eq!((e8.primes.as_slice(), e8.m), (&[2, 3, 5, 7][..], 210));
        let g2 = bad_primes(&["G2"]).unwrap();
        assert_eq!((g2.primes.as_slice(), g2.m), (&[2, 3, 5][..], 30));
        assert_eq!(bad_primes(&["A2", "B_3"]).unwrap().primes, vec![2]);
        assert!(matches!(bad_primes(&["H3"]), Err(TauError::UnknownType(_))));
        assert!(bad_primes::<&str>(&[]).unwrap().primes.is_empty());
    }

    #[test]
    fn unit_values() {
        let b = build(GroupLabel::GL2, 3);
        let ctx = TauContext::new(&b.inst, &b.dl, &b.dual, &b.dualities);
        let field = b.inst.field();
        let one = pi_lambda(&b.dual, [0, 0]).unwrap();
        let identity = b.inst.group().identity();
        assert_eq!(ctx.tau_tilde_checked(identity, &one).unwrap(), CycNum::from_int(field, 3));
        let e = root_weights(&b.inst, b.basis.element(b.basis.unit_index()));
        assert_eq!(ctx.tau_tilde(&e, &one), CycNum::one(field));
        assert!(ctx.verify_tori().passed());
    }

    #[test]
    fn gl2_3_full_chain() {
        let b = build(GroupLabel::GL2, 3);
        let ctx = TauContext::new(&b.inst, &b.dl, &b.dual, &b.dualities);
        let ring = instance_ring(&b.inst).unwrap();
        let k = KLattice::build(&b.dual).unwrap();
        let span = spanning_functions(&k);
        for c in ctx.verify_coherence(&span, true) {
            assert!(c.passed(), "{c}");
        }
        assert!(ctx.verify_restriction(&b.basis, &b.ident, &span).passed());
        let lambdas = lambda_box(&b.dual, 8);
        let red = ctx.verify_reduction(&lambdas);
        assert!(red.passed() && red.checked > 0, "{red}");
        for c in ctx.verify_central(&lambdas, &ring) {
            assert!(c.passed() && c.checked > 0, "{c}");
        }
        let kb = KBasis::from_lattice(&k);
        let main = main_theorem(&ctx, &b.basis, &b.ident, &k, &kb, ring).unwrap();
        for c in main.direct.iter().chain(&main.duality) {
            assert!(c.passed(), "{c}");
        }
        assert_eq!(main.verdict(), Verdict::Equal);
        let r = control_prime(&ring);
        assert_eq!(r, 2);
        let bad = main_theorem(&ctx, &b.basis, &b.ident, &k, &kb.scaled(0, r), ring).unwrap();
        assert_eq!(bad.direct_verdict, Verdict::NotEqual);
        assert_eq!(bad.duality_verdict, Verdict::NotEqual);
        assert!(bad.direct.iter().any(|c| !c.witnesses.is_empty()));
    }

    #[test]
    fn sl2_3_pair_chain() {
        let g = build(GroupLabel::SL2, 3);
        let h = build(GroupLabel::GL2, 3);
        let ctx = TauContext::new(&g.inst, &g.dl, &g.dual, &g.dualities);
        let ring = instance_ring(&g.inst).unwrap();
        let map = quotient_map(&h.dual, &g.dual);
        let (k, descent) = KLattice::build_graded(&h.dual, &g.dual, &map).unwrap();
        assert!(descent.passed());
        let span = spanning_functions(&k);
        for c in ctx.verify_coherence(&span, true) {
            assert!(c.passed(), "{c}");
        }
        let lambdas = lambda_box(&g.dual, 8);
        assert!(ctx.verify_reduction(&lambdas).passed());
        for c in ctx.verify_central(&lambdas, &ring) {
            assert!(c.passed(), "{c}");
        }
        let h_basis = EndoBasis::build(h.inst.group(), g.basis.psi(), None).unwrap();
        let h_ident = Identification::build(&h.inst, &h.dl, &h.dual, &h.dualities, &h_basis).unwrap();
        let ext = ExtensionData::new(g.inst.group(), h.inst.group()).unwrap();
        for c in verify_pair_tau(&g.basis, &g.ident, h.inst.group(), &h_basis, &h_ident, &ext, &map, &span, g.inst.field()) {
            assert!(c.passed() && c.checked > 0, "{c}");
        }
        let kb = KBasis::from_lattice(&k);
        let main = main_theorem(&ctx, &g.basis, &g.ident, &k, &kb, ring).unwrap();
        assert_eq!(main.verdict(), Verdict::Equal, "{:?}", main);
        assert!(main.routes_agree());
    }

    #[test]
    fn lattice_membership_basics() {
        let b = build(GroupLabel::GL2, 2);
        let field = b.inst.field();
        let ring = instance_ring(&b.inst).unwrap();
        let k = KLattice::build(&b.dual).unwrap();
        let vals = KBasis::from_lattice(&k).values(field);
        let l = LatticeSpec::new("K", field, vals.clone(), ring).unwrap();
        assert!(l.contains(&vals[1]));
        let half: Vec<CycNum> = vals[1].iter().map(|x| x.scale(&rat(1, 2))).collect();
        assert!(l.contains(&half));
        let third: Vec<CycNum> = vals[1].iter().map(|x| x.scale(&rat(1, 3))).collect();
        assert!(matches!(l.membership(&third), Membership::Outside { coordinate: 1, .. }));
        let by_p = LatticeSpec::new("pK", field, vals.iter().map(|v| v.iter().map(|x| x.scale_int(2)).collect()).collect(), ring).unwrap();
        assert_eq!(lattice_equal(&l, &by_p).0, Verdict::Equal);
    }
}
