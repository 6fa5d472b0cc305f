//! Deligne-Lusztig characters `R_S(theta)`, Green functions and the trace tables
//! `Tr((g, t))`, realized on the character level.
//!
//! Split tori use Harish-Chandra induction from the upper Borel. For the nonsplit torus the
//! values off the unipotent part are fixed by the character formula, and the Green function is
//! the unique solution of the degree condition plus orthogonality to every split-torus character.

use std::collections::HashMap;

use crate::arith::{rat, ArithError, CycNum, ExactSolver, RootAcc, RootVec};
use crate::chartab::ClassFunction;
use crate::check::Check;
use crate::groups::{Elem, ExtensionData, GroupInstance, GroupLabel, Torus, TorusKind};
use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DlError {
    #[error("Green function system for the {torus} torus has a {dim}-dimensional solution space")]
    AmbiguousConstraintSystem { torus: &'static str, dim: usize },
    #[error("Green function system for the {torus} torus is inconsistent")]
    InconsistentSystem { torus: &'static str },
    #[error("Green function of the {torus} torus is not integral or depends on theta")]
    BadGreenFunction { torus: &'static str },
    #[error("Harish-Chandra induction left a non-integral coefficient at class {class}")]
    Induction { class: usize },
    #[error("trace Tr(({class}, {t})) on the {torus} torus is not a rational integer")]
    NonIntegralTrace { torus: &'static str, class: usize, t: usize },
    #[error("semisimple part of class {0} is neither central nor regular")]
    UnexpectedClass(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `theta_b(t_a)` as a root of unity of order dividing `modulus`.
pub fn theta(torus: &Torus, b: usize, a: usize, modulus: u32) -> RootVec {
    let e = torus.pairing(a, b) * (modulus / torus.modulus()) as i64;
    RootVec::root(modulus, e, 1)
}

/// Class weights `sum_{g in c} x_g` of a group-algebra element, as root sums over one denominator.
#[derive(Debug, Clone)]
pub struct RootWeights {
    den: i64,
    values: Vec<RootVec>,
}

impl RootWeights {
    /// Weights must lie in a subfield `Q(zeta_n)` with `n | modulus`.
    pub fn new(weights: &[CycNum], modulus: u32) -> RootWeights {
        let den = weights.iter().fold(num_bigint::BigInt::from(1), |acc, w| num_integer::Integer::lcm(&acc, w.denominator()));
        let den = i64::try_from(&den).expect("weight denominator fits in i64");
        let values = weights
            .iter()
            .map(|w| {
                let n = w.conductor();
                assert_eq!(modulus % n, 0, "weights must lie in Q(zeta_{modulus})");
                let f = den / i64::try_from(w.denominator()).expect("denominator fits");
                let terms = w.numerators().iter().enumerate().map(|(i, c)| {
                    ((i as u32 * (modulus / n)) as i64, i64::try_from(c).expect("numerator fits in i64") * f)
                });
                RootVec::from_terms(modulus, terms.collect::<Vec<_>>())
            })
            .collect();
        RootWeights { den, values }
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn values(&self) -> &[RootVec] {
        &self.values
    }

    /// `sum_c w_c f(c) = (1/den) * root sum`.
    pub fn pair(&self, f: &[RootVec], field: &std::sync::Arc<crate::arith::CycField>) -> CycNum {
        let mut acc = RootAcc::new(f[0].modulus());
        for (w, v) in self.values.iter().zip(f) {
            if !w.is_zero() {
                acc.add_product(w, v, 1);
            }
        }
        acc.finish(field).scale(&rat(1, self.den))
    }
}

#[derive(Debug, Clone)]
pub struct DlTorus {
    kind: TorusKind,
    sign: i64,
    chars: Vec<Vec<RootVec>>,
    values: Vec<ClassFunction>,
    green: Vec<i64>,
    trace: Vec<Vec<i64>>,
}

impl DlTorus {
    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    /// `epsilon_G epsilon_S`.
    pub fn sign(&self) -> i64 {
        self.sign
    }

    /// Number of characters of `S^F`.
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// `R_S(theta_b)` at every class, as root sums.
    pub fn roots(&self, b: usize) -> &[RootVec] {
        &self.chars[b]
    }

    pub fn character(&self, b: usize) -> &ClassFunction {
        &self.values[b]
    }

    /// Green function on the unipotent classes, in the order of [`DlSystem::unipotent_classes`].
    pub fn green(&self) -> &[i64] {
        &self.green
    }

    /// `Tr((g, t))` for `g` in class `class` and `t` at position `t` of the torus.
    pub fn trace(&self, class: usize, t: usize) -> i64 {
        self.trace[class][t]
    }

    /// `R_S(theta_b)(x)` for a group-algebra element given by its class weights.
    pub fn evaluate(&self, b: usize, weights: &RootWeights, field: &std::sync::Arc<crate::arith::CycField>) -> CycNum {
        weights.pair(&self.chars[b], field)
    }
}

#[derive(Debug, Clone)]
pub struct DlSystem {
    label: GroupLabel,
    unipotent: Vec<usize>,
    tori: Vec<DlTorus>,
}

fn root_inner(inst: &Instance, f: &[RootVec], g: &[RootVec]) -> CycNum {
    let sizes = &inst.context().sizes;
    let mut acc = RootAcc::new(inst.modulus());
    for (c, &s) in sizes.iter().enumerate() {
        acc.add_product(&f[c], &g[c].conj(), s as i64);
    }
    acc.finish(inst.field()).scale(&rat(1, inst.group().order() as i64))
}

fn solver_error(torus: &'static str, e: ArithError) -> DlError {
    match e {
        ArithError::Inconsistent => DlError::InconsistentSystem { torus },
        ArithError::AmbiguousSolution { dim } => DlError::AmbiguousConstraintSystem { torus, dim },
        other => DlError::Arith(other),
    }
}

impl DlSystem {
    pub fn build(inst: &Instance) -> Result<DlSystem, DlError> {
        let g = inst.group();
        let cc = inst.classes();
        let unipotent: Vec<usize> = (0..cc.len()).filter(|&c| g.is_unipotent(cc.rep(c))).collect();
        let split = build_split(inst, &inst.tori()[0])?;
        let nonsplit = build_nonsplit(inst, &inst.tori()[1], &split, &unipotent)?;
        let mut tori = vec![split, nonsplit];
        for (dt, torus) in tori.iter_mut().zip(inst.tori()) {
            dt.green = unipotent.iter().map(|&c| int_root(inst, &dt.chars[0][c])).collect::<Option<Vec<_>>>().ok_or(
                DlError::BadGreenFunction { torus: torus.kind().name() },
            )?;
            dt.values = dt.chars.iter().map(|row| inst.context().function(row.iter().map(|v| v.to_cycnum(inst.field())).collect())).collect();
            dt.trace = trace_table(inst, torus, &dt.chars)?;
        }
        Ok(DlSystem { label: inst.label(), unipotent, tori })
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    /// Classes of unipotent elements, identity first.
    pub fn unipotent_classes(&self) -> &[usize] {
        &self.unipotent
    }

    /// Split torus first, then nonsplit, matching [`Instance::tori`].
    pub fn tori(&self) -> &[DlTorus] {
        &self.tori
    }

    pub fn torus(&self, i: usize) -> &DlTorus {
        &self.tori[i]
    }

    /// `epsilon_G = (-1)^rank`.
    pub fn epsilon_g(&self) -> i64 {
        if self.label.rank().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `Q_S(u)` for the unipotent class `class`.
    pub fn green_at(&self, i: usize, class: usize) -> Option<i64> {
        self.unipotent.iter().position(|&c| c == class).map(|k| self.tori[i].green[k])
    }

    /// Exact invariants: degrees, norms and orthogonality, theta-independence on unipotent
    /// classes, integrality of multiplicities and the split Green value at the identity.
    pub fn validate(&self, inst: &Instance) -> Vec<Check> {
        let g = inst.group();
        let mut degree = Check::new("dl degree");
        let mut norms = Check::new("dl norms");
        let mut unip = Check::new("dl unipotent theta-independence");
        let mut virt = Check::new("dl virtual character");
        let mut green = Check::new("dl split green at identity");
        for (i, (dt, torus)) in self.tori.iter().zip(inst.tori()).enumerate() {
            let d = dt.sign * (g.order_p_prime() / torus.order()) as i64;
            for b in 0..dt.len() {
                degree.record(int_root(inst, &dt.chars[b][0]) == Some(d), || format!("torus {i} theta {b}"));
                for (k, &c) in self.unipotent.iter().enumerate() {
                    unip.record(int_root(inst, &dt.chars[b][c]) == Some(dt.green[k]), || format!("torus {i} theta {b} class {c}"));
                }
                for (row, chi) in inst.table().root_values().iter().enumerate() {
                    let m = root_inner(inst, &dt.chars[b], chi);
                    virt.record(m.to_integer().is_some(), || format!("torus {i} theta {b} irreducible {row}: {m}"));
                }
            }
            for (j, (dt2, _)) in self.tori.iter().zip(inst.tori()).enumerate() {
                for b in 0..dt.len() {
                    for b2 in 0..dt2.len() {
                        let expected = if i == j { (b == b2) as i64 + (torus.weyl(b) == b2) as i64 } else { 0 };
                        let ip = root_inner(inst, &dt.chars[b], &dt2.chars[b2]);
                        norms.record(ip == CycNum::from_int(inst.field(), expected), || {
                            format!("<R_{i}({b}), R_{j}({b2})> = {ip}, expected {expected}")
                        });
                    }
                }
            }
        }
        let index = g.order() / g.borel().len();
        green.record(self.tori[0].green[0] == index as i64, || format!("Q(1) = {}, |G:B| = {index}", self.tori[0].green[0]));
        vec![degree, norms, unip, virt, green]
    }
}

fn int_root(inst: &Instance, v: &RootVec) -> Option<i64> {
    let mut acc = RootAcc::new(inst.modulus());
    acc.add(v, 1);
    acc.to_integer(inst.field())
}

fn build_split(inst: &Instance, torus: &Torus) -> Result<DlTorus, DlError> {
    let g = inst.group();
    let cc = inst.classes();
    let m = inst.modulus();
    let borel = g.borel();
    let mut hits: Vec<Vec<usize>> = vec![Vec::new(); cc.len()];
    for &x in &borel {
        let [a, _, _, d] = g.matrix(x);
        let t = torus.position(g.index_of([a, 0, 0, d])).expect("diagonal part lies in the split torus");
        hits[cc.class_of(x)].push(t);
    }
    let mut chars = Vec::with_capacity(torus.order());
    for b in 0..torus.order() {
        let mut row = Vec::with_capacity(cc.len());
        for (c, ts) in hits.iter().enumerate() {
            let sum = RootVec::from_terms(m, ts.iter().flat_map(|&t| theta(torus, b, t, m).terms().to_vec()).map(|(j, k)| (j as i64, k)));
            let num = cc.centralizer_order(c) as i64;
            let den = borel.len() as i64;
            let mut terms = Vec::with_capacity(sum.terms().len());
            for &(j, k) in sum.terms() {
                if (k * num) % den != 0 {
                    return Err(DlError::Induction { class: c });
                }
                terms.push((j as i64, k * num / den));
            }
            row.push(RootVec::from_terms(m, terms));
        }
        chars.push(row);
    }
    Ok(DlTorus { kind: torus.kind(), sign: torus.sign(), chars, values: Vec::new(), green: Vec::new(), trace: Vec::new() })
}

enum ClassShape {
    /// `z u` with `z` central at torus position `z`, `u` in unipotent slot `u`.
    Central { z: usize, u: usize },
    /// Regular semisimple; torus positions in the class.
    Regular(Vec<usize>),
}

fn automorphism_fusion(g: &GroupInstance, cc: &crate::groups::ConjClassData, unipotent: &[usize]) -> Vec<(usize, usize)> {
    // conjugation by diag(g1, 1) preserves SL2 and is inner on GL2
    let t = g.tower();
    let g1 = t.g1();
    let mut out = Vec::new();
    for (k, &c) in unipotent.iter().enumerate() {
        let [a, b, cc_, d] = g.matrix(cc.rep(c));
        let img = g.index_of([a, t.mul(g1, b), t.mul(cc_, t.inv(g1)), d]);
        let k2 = unipotent.iter().position(|&u| u == cc.class_of(img)).expect("unipotent image");
        if k2 != k && !out.contains(&(k2, k)) {
            out.push((k, k2));
        }
    }
    out
}

fn build_nonsplit(inst: &Instance, torus: &Torus, split: &DlTorus, unipotent: &[usize]) -> Result<DlTorus, DlError> {
    let g = inst.group();
    let cc = inst.classes();
    let m = inst.modulus();
    let field = inst.field();
    let name = torus.kind().name();
    let mut shapes = Vec::with_capacity(cc.len());
    for c in 0..cc.len() {
        let jp = g.jordan(cc.rep(c));
        if g.is_central(jp.s) {
            let z = torus.position(jp.s).expect("the centre lies in every torus");
            let u = unipotent.iter().position(|&k| k == cc.class_of(jp.u)).expect("unipotent class");
            shapes.push(ClassShape::Central { z, u });
        } else {
            if jp.u != g.identity() {
                return Err(DlError::UnexpectedClass(c));
            }
            let ts = (0..torus.order()).filter(|&t| cc.class_of(torus.element(t)) == c).collect();
            shapes.push(ClassShape::Regular(ts));
        }
    }
    let nu = unipotent.len();
    let fusion = automorphism_fusion(g, cc, unipotent);
    let degree = torus.sign() * (g.order_p_prime() / torus.order()) as i64;
    let sizes = &inst.context().sizes;
    let mut greens: Vec<Vec<CycNum>> = Vec::new();
    let mut chars = Vec::with_capacity(torus.order());
    for b in 0..torus.order() {
        let known: Vec<Option<RootVec>> = shapes
            .iter()
            .map(|s| match s {
                ClassShape::Regular(ts) => Some(ts.iter().fold(RootVec::zero(m), |acc, &t| acc.add(&theta(torus, b, t, m)))),
                ClassShape::Central { .. } => None,
            })
            .collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut first = vec![CycNum::zero(field); nu];
        first[0] = CycNum::one(field);
        rows.push(first);
        rhs.push(CycNum::from_int(field, degree));
        for &(k, k2) in &fusion {
            let mut r = vec![CycNum::zero(field); nu];
            r[k] = CycNum::one(field);
            r[k2] = CycNum::from_int(field, -1);
            rows.push(r);
            rhs.push(CycNum::zero(field));
        }
        for other in &split.chars {
            let mut coef: Vec<RootAcc> = (0..nu).map(|_| RootAcc::new(m)).collect();
            let mut rest = RootAcc::new(m);
            for (c, shape) in shapes.iter().enumerate() {
                let w = other[c].conj();
                match shape {
                    ClassShape::Regular(_) => rest.add_product(known[c].as_ref().unwrap(), &w, sizes[c] as i64),
                    ClassShape::Central { z, u } => coef[*u].add_product(&theta(torus, b, *z, m), &w, sizes[c] as i64),
                }
            }
            rows.push(coef.into_iter().map(|a| a.finish(field)).collect());
            rhs.push(-rest.finish(field));
        }
        let q = ExactSolver::new(field, &rows)
            .and_then(|s| s.solve(&rhs))
            .map_err(|e| solver_error(name, e))?;
        let qi: Vec<i64> = q
            .iter()
            .map(|x| x.to_integer().and_then(|v| i64::try_from(v).ok()))
            .collect::<Option<_>>()
            .ok_or(DlError::BadGreenFunction { torus: name })?;
        let row = shapes
            .iter()
            .zip(known)
            .map(|(s, k)| match s {
                ClassShape::Regular(_) => k.unwrap(),
                ClassShape::Central { z, u } => theta(torus, b, *z, m).scale(qi[*u]),
            })
            .collect();
        greens.push(q);
        chars.push(row);
    }
    if greens.windows(2).any(|w| w[0] != w[1]) {
        return Err(DlError::BadGreenFunction { torus: name });
    }
    Ok(DlTorus { kind: torus.kind(), sign: torus.sign(), chars, values: Vec::new(), green: Vec::new(), trace: Vec::new() })
}

/// `Tr((g, t)) = sum_theta R_S(theta)(g) theta(t)`, required to be a rational integer.
fn trace_table(inst: &Instance, torus: &Torus, chars: &[Vec<RootVec>]) -> Result<Vec<Vec<i64>>, DlError> {
    let m = inst.modulus();
    let k = inst.classes().len();
    let thetas: Vec<Vec<RootVec>> = (0..torus.order()).map(|b| (0..torus.order()).map(|t| theta(torus, b, t, m)).collect()).collect();
    let mut out = vec![vec![0i64; torus.order()]; k];
    for (c, row) in out.iter_mut().enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let mut acc = RootAcc::new(m);
            for (b, ch) in chars.iter().enumerate() {
                acc.add_product(&ch[c], &thetas[b][t], 1);
            }
            *slot = acc
                .to_integer(inst.field())
                .ok_or(DlError::NonIntegralTrace { torus: torus.kind().name(), class: c, t })?;
        }
    }
    Ok(out)
}

/// `Tr((g, t))` for group elements.
pub fn dl_trace(inst: &Instance, dl: &DlSystem, torus: usize, g: Elem, t: Elem) -> Option<i64> {
    let pos = inst.tori()[torus].position(t)?;
    Some(dl.torus(torus).trace(inst.classes().class_of(g), pos))
}

/// Recomputes `R_S(theta)(h)` for every torus and character from the character formula,
/// summing over `g` with `g^{-1} s g` in `S`.
pub fn verify_dl_formula(inst: &Instance, dl: &DlSystem, h: Elem) -> bool {
    let g = inst.group();
    let cc = inst.classes();
    let m = inst.modulus();
    let jp = g.jordan(h);
    let central = g.is_central(jp.s);
    let cent = g.elements().filter(|&x| g.mul(x, jp.s) == g.mul(jp.s, x)).count() as i64;
    let class = cc.class_of(h);
    for (i, torus) in inst.tori().iter().enumerate() {
        let dt = dl.torus(i);
        // Green function of C_G(s)° on the relevant torus at u
        let q = if central {
            dl.green_at(i, cc.class_of(jp.u)).expect("unipotent class")
        } else {
            (jp.u == g.identity()) as i64
        };
        let hits: Vec<usize> = g.elements().filter_map(|x| torus.position(g.mul(g.mul(g.inv(x), jp.s), x))).collect();
        for b in 0..torus.order() {
            let mut acc = RootAcc::new(m);
            for &t in &hits {
                acc.add(&theta(torus, b, t, m), q);
            }
            let lhs = acc.finish(inst.field()).scale(&rat(1, cent));
            if &lhs != dt.character(b).value(class) {
                return false;
            }
        }
    }
    true
}

/// The character formula at every class representative.
pub fn verify_dl_formula_all(inst: &Instance, dl: &DlSystem) -> Check {
    let mut check = Check::new("dl character formula");
    for c in 0..inst.classes().len() {
        check.record(verify_dl_formula(inst, dl, inst.classes().rep(c)), || format!("class {c}"));
    }
    check
}

/// Trace formulae, restriction compatibility and the Curtis trace-sum equality for `SL2 < GL2`.
pub fn verify_pair_traces(g_inst: &Instance, g_dl: &DlSystem, h_inst: &Instance, h_dl: &DlSystem, ext: &ExtensionData) -> Vec<Check> {
    let (g, h) = (g_inst.group(), h_inst.group());
    let (gcc, hcc) = (g_inst.classes(), h_inst.classes());
    let zf = (h.order() / g.order()) as i64;
    let mut aligned = Check::new("pair torus alignment");
    let mut vanish = Check::new("pair trace vanishing off ker kappa");
    let mut scaling = Check::new("pair trace scaling by |Z^F|");
    let mut restriction = Check::new("pair restriction compatibility");
    let mut curtis = Check::new("pair Curtis trace sums");
    for i in 0..2 {
        let (tg, th) = (&g_inst.tori()[i], &h_inst.tori()[i]);
        let (dg, dh) = (g_dl.torus(i), h_dl.torus(i));
        let mut inside: Vec<Elem> = th.elements().iter().copied().filter(|&y| h.det(y) == 1).collect();
        let mut incl: Vec<Elem> = tg.elements().iter().map(|&x| ext.include(x)).collect();
        inside.sort_unstable();
        incl.sort_unstable();
        aligned.record(inside == incl, || format!("torus {i}"));
        let tpos: Vec<usize> = tg.elements().iter().map(|&x| th.position(ext.include(x)).expect("T_G < T_H")).collect();
        for c in 0..hcc.len() {
            let d = h.det(hcc.rep(c));
            for t in 0..th.order() {
                if h.tower().mul(d, h.det(th.element(t))) != 1 {
                    let v = dh.trace(c, t);
                    vanish.record(v == 0, || format!("torus {i} class {c} t {t}: {v}"));
                }
            }
        }
        for c in 0..gcc.len() {
            let hc = hcc.class_of(ext.include(gcc.rep(c)));
            for t in 0..tg.order() {
                let (a, b) = (dh.trace(hc, tpos[t]), dg.trace(c, t));
                scaling.record(a == zf * b, || format!("torus {i} class {c} t {t}: {a} vs {zf}*{b}"));
            }
        }
        let m = h_inst.modulus();
        for chi in 0..th.order() {
            let restricted: Vec<RootVec> = tpos.iter().map(|&p| theta(th, chi, p, m)).collect();
            let b = (0..tg.order()).find(|&b| (0..tg.order()).all(|t| theta(tg, b, t, m) == restricted[t]));
            let ok = b.is_some_and(|b| {
                (0..gcc.len()).all(|c| {
                    let hc = hcc.class_of(ext.include(gcc.rep(c)));
                    dh.character(chi).value(hc).coords() == dg.character(b).value(c).coords()
                })
            });
            restriction.record(ok, || format!("torus {i} character {chi}"));
        }
        for c in 0..gcc.len() {
            let hc = hcc.class_of(ext.include(gcc.rep(c)));
            let mut lhs: HashMap<usize, num_rational::BigRational> = HashMap::new();
            for t in 0..th.order() {
                let v = rat(dh.trace(hc, th.inverse(t)), th.order() as i64);
                lhs.insert(t, v);
            }
            let mut ok = true;
            for t in 0..th.order() {
                let rhs = match tpos.iter().position(|&p| p == t) {
                    Some(s) => rat(dg.trace(c, tg.inverse(s)), tg.order() as i64),
                    None => rat(0, 1),
                };
                ok &= lhs[&t] == rhs;
            }
            curtis.record(ok, || format!("torus {i} class {c}"));
        }
    }
    vec![aligned, vanish, scaling, restriction, curtis]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: &CycNum) -> i64 {
        i64::try_from(v.to_integer().expect("integer")).unwrap()
    }

    #[test]
    fn gl2_3_degrees_and_green() {
        let inst = Instance::build(GroupLabel::GL2, 3).unwrap();
        let dl = DlSystem::build(&inst).unwrap();
        for b in 0..dl.torus(0).len() {
            assert_eq!(int(dl.torus(0).character(b).value(0)), 4);
        }
        for b in 0..dl.torus(1).len() {
            assert_eq!(int(dl.torus(1).character(b).value(0)), -2);
        }
        assert_eq!(dl.torus(0).green(), &[4, 1]);
        assert_eq!(dl.torus(1).green(), &[-2, 1]);
        assert_eq!(dl.torus(0).trace(0, 0), 16);
        for i in 0..2 {
            let s: i64 = (0..dl.torus(i).len()).map(|t| dl.torus(i).trace(0, t)).sum();
            assert_eq!(s % inst.tori()[i].order() as i64, 0);
        }
        assert!(dl.validate(&inst).iter().all(Check::passed));
        assert!(verify_dl_formula_all(&inst, &dl).passed());
    }

    #[test]
    fn sl2_pair_identities() {
        let gi = Instance::build(GroupLabel::SL2, 3).unwrap();
        let hi = Instance::build(GroupLabel::GL2, 3).unwrap();
        let gd = DlSystem::build(&gi).unwrap();
        let hd = DlSystem::build(&hi).unwrap();
        assert!(gd.validate(&gi).iter().all(Check::passed));
        assert!(verify_dl_formula_all(&gi, &gd).passed());
        let ext = ExtensionData::new(gi.group(), hi.group()).unwrap();
        for c in verify_pair_traces(&gi, &gd, &hi, &hd, &ext) {
            assert!(c.passed(), "{c}");
        }
        assert_eq!(hd.torus(0).trace(0, 0), 2 * gd.torus(0).trace(0, 0));
    }
}
