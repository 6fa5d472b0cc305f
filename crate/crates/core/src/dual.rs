//! The dual group: semisimple classes keyed by eigenvalues, torus dualities, the Brauer
//! characters `pi_lambda`, the K-lattice, Curtis homomorphisms and the identification of `E`
//! with functions on semisimple dual classes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::arith::{is_pm_integral, rat, ArithError, CycField, CycNum, ExactSolver, LocalRingSpec, RootAcc, RootVec};
use crate::chartab::dixon::{is_prime, pow_mod, primitive_root};
use crate::chartab::ClassContext;
use crate::check::Check;
use crate::deligne_lusztig::{theta, DlSystem, RootWeights};
use crate::gelfand_graev::{gg_character, include_into_h, EndoBasis, GroupAlgebraElement};
use crate::groups::{ConjClassData, Elem, ExtensionData, GroupInstance, GroupLabel, Mat2, Torus, TorusKind};
use crate::instance::Instance;

/// Values on the semisimple classes of a [`DualInstance`].
pub type SsClassFunction = Vec<CycNum>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("no dual group for {0}")]
    UnsupportedInstance(GroupLabel),
    #[error("lambda = {0:?} has nonzero degree, so pi_lambda does not descend to PGL2")]
    NotGradedZero([i64; 2]),
    #[error("combination is not invariant under swapping coordinates")]
    NotWInvariant,
    #[error("spanning set has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("Curtis images disagree at dual class {0}")]
    OverlapInconsistency(usize),
    #[error("dual class {0} is not reached by any torus")]
    Uncovered(usize),
    #[error("identification has rank {rank} on a {dim}-dimensional algebra")]
    NotInjective { rank: usize, dim: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `G*^{F*}` with its semisimple classes, keyed by the sorted pair of eigenvalue logarithms
/// (base `g2`, modulo `q^2 - 1`), taken modulo scaling for `PGL2`.
pub struct DualInstance {
    source: GroupLabel,
    q: i64,
    n: i64,
    modulus: u32,
    field: Arc<CycField>,
    group: GroupInstance,
    classes: ConjClassData,
    context: ClassContext,
    keys: Vec<[i64; 2]>,
    index: HashMap<[i64; 2], usize>,
}

impl std::fmt::Debug for DualInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DualInstance({:?}, {} classes)", self.group, self.keys.len())
    }
}

impl DualInstance {
    pub fn build(inst: &Instance) -> Result<DualInstance, DualError> {
        let source = inst.label();
        if source == GroupLabel::PGL2 {
            return Err(DualError::UnsupportedInstance(source));
        }
        let group = GroupInstance::with_tower(source.dual(), Arc::clone(inst.group().tower()))
            .map_err(|_| DualError::UnsupportedInstance(source))?;
        let classes = group.conjugacy_classes();
        let context = ClassContext::new(&group, &classes, inst.field());
        let q = inst.q() as i64;
        let n = q * q - 1;
        let mut d = DualInstance {
            source,
            q,
            n,
            modulus: inst.modulus(),
            field: Arc::clone(inst.field()),
            group,
            classes,
            context,
            keys: Vec::new(),
            index: HashMap::new(),
        };
        let mut keys: Vec<[i64; 2]> = Vec::new();
        for i in 0..q - 1 {
            for j in 0..q - 1 {
                keys.push(d.canonical_key([(q + 1) * i, (q + 1) * j]));
            }
        }
        for a in 0..n {
            keys.push(d.canonical_key([a, q * a]));
        }
        keys.sort_unstable();
        keys.dedup();
        d.index = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        d.keys = keys;
        Ok(d)
    }

    pub fn label(&self) -> GroupLabel {
        self.group.label()
    }

    pub fn source(&self) -> GroupLabel {
        self.source
    }

    pub fn q(&self) -> u32 {
        self.q as u32
    }

    /// Number of semisimple classes.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[[i64; 2]] {
        &self.keys
    }

    pub fn key(&self, c: usize) -> [i64; 2] {
        self.keys[c]
    }

    pub fn group(&self) -> &GroupInstance {
        &self.group
    }

    pub fn classes(&self) -> &ConjClassData {
        &self.classes
    }

    pub fn context(&self) -> &ClassContext {
        &self.context
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn canonical_key(&self, logs: [i64; 2]) -> [i64; 2] {
        let sorted = |a: i64, b: i64| {
            let (a, b) = (a.rem_euclid(self.n), b.rem_euclid(self.n));
            if a <= b {
                [a, b]
            } else {
                [b, a]
            }
        };
        match self.label() {
            GroupLabel::PGL2 => (0..self.q - 1)
                .map(|c| sorted(logs[0] + (self.q + 1) * c, logs[1] + (self.q + 1) * c))
                .min()
                .expect("q > 1"),
            _ => sorted(logs[0], logs[1]),
        }
    }

    pub fn class_of_logs(&self, logs: [i64; 2]) -> Option<usize> {
        self.index.get(&self.canonical_key(logs)).copied()
    }

    /// Eigenvalue logarithms of a matrix, from the roots of its characteristic polynomial in `F_{q^2}`.
    pub fn matrix_logs(&self, m: Mat2) -> [i64; 2] {
        let t = &**self.group.tower();
        let tr = t.embed(t.add(m[0], m[3]));
        let det = t.embed(self.group.mat_det(m));
        let roots: Vec<i64> = (0..self.n)
            .filter(|&i| {
                let x = t.exp2(i);
                t.add2(t.sub2(t.mul2(x, x), t.mul2(tr, x)), det) == 0
            })
            .collect();
        match roots.as_slice() {
            [a] => [*a, *a],
            [a, b] => [*a, *b],
            _ => unreachable!("a quadratic over F_q splits over F_q^2"),
        }
    }

    /// Semisimple class of a dual-group element (`None` unless it is semisimple).
    pub fn class_of_element(&self, x: Elem) -> Option<usize> {
        if !self.group.is_semisimple(x) {
            return None;
        }
        self.class_of_logs(self.matrix_logs(self.group.matrix(x)))
    }

    /// `zeta_{q^2-1}^log`, the fixed Brauer lift of `g2^log`.
    pub fn brauer_lift(&self, log: i64) -> RootVec {
        RootVec::root(self.modulus, log * (self.modulus as i64 / self.n), 1)
    }

    pub fn expected_len(&self) -> usize {
        let q = self.q as usize;
        match self.label() {
            GroupLabel::PGL2 => q + 1,
            _ => q * (q - 1),
        }
    }

    /// The keys are in bijection with the semisimple conjugacy classes of the dual group, and
    /// every semisimple element lands in the class of its conjugacy class representative.
    pub fn verify_classes(&self) -> Check {
        let mut check = Check::new(format!("{} semisimple classes", self.label()));
        check.record(self.len() == self.expected_len(), || format!("{} keys, expected {}", self.len(), self.expected_len()));
        let mut hit = vec![0usize; self.len()];
        for c in 0..self.classes.len() {
            let r = self.classes.rep(c);
            if self.group.is_semisimple(r) {
                match self.class_of_element(r) {
                    Some(k) => hit[k] += 1,
                    None => check.fail(format!("class {c} has no key")),
                }
            }
        }
        for (k, &h) in hit.iter().enumerate() {
            check.record(h == 1, || format!("key {:?} hit by {h} conjugacy classes", self.keys[k]));
        }
        for x in self.group.elements() {
            if self.group.is_semisimple(x) {
                let r = self.classes.rep(self.classes.class_of(x));
                check.record(self.class_of_element(x) == self.class_of_element(r), || format!("element {x}"));
            }
        }
        check
    }

    /// True for classes of scalar matrices.
    pub fn is_central(&self, c: usize) -> bool {
        let [a, b] = self.keys[c];
        a == b && a % (self.q + 1) == 0
    }
}

/// For `GL2* -> PGL2*`: the class of the image of each semisimple class.
pub fn quotient_map(h: &DualInstance, g: &DualInstance) -> Vec<usize> {
    h.keys().iter().map(|&k| g.class_of_logs(k).expect("every class has an image")).collect()
}

/// Fibers of the quotient are exactly the orbits under scaling by `F_q^x`.
pub fn verify_quotient(h: &DualInstance, g: &DualInstance, map: &[usize]) -> Check {
    let mut check = Check::new("dual class quotient");
    let q = h.q;
    let mut covered = vec![false; g.len()];
    for (i, &key) in h.keys().iter().enumerate() {
        covered[map[i]] = true;
        let mut orbit: Vec<usize> = (0..q - 1)
            .map(|c| h.class_of_logs([key[0] + (q + 1) * c, key[1] + (q + 1) * c]).expect("scaled key"))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        let fiber: Vec<usize> = (0..h.len()).filter(|&j| map[j] == map[i]).collect();
        check.record(orbit == fiber, || format!("class {key:?}: fiber {fiber:?}, orbit {orbit:?}"));
    }
    check.record(covered.iter().all(|&c| c), || "quotient is not surjective".into());
    check
}

/// `theta_b <-> s*_b`: each character of `S^F` as an element of the dual torus, with its
/// eigenvalue logarithms and its semisimple class.
#[derive(Debug, Clone)]
pub struct TorusDuality {
    kind: TorusKind,
    logs: Vec<[i64; 2]>,
    elements: Vec<Elem>,
    classes: Vec<usize>,
}

impl TorusDuality {
    pub fn build(inst: &Instance, torus: &Torus, dual: &DualInstance) -> TorusDuality {
        let g = dual.group();
        let t = &**g.tower();
        let q = inst.q() as i64;
        let mut logs = Vec::with_capacity(torus.order());
        let mut elements = Vec::with_capacity(torus.order());
        for b in 0..torus.order() {
            let c = torus.coords(b);
            let (m, l): (Mat2, [i64; 2]) = match (inst.label(), torus.kind()) {
                (GroupLabel::GL2, TorusKind::Split) => ([t.exp(c[0]), 0, 0, t.exp(c[1])], [(q + 1) * c[0], (q + 1) * c[1]]),
                (GroupLabel::SL2, TorusKind::Split) => ([t.exp(c[0]), 0, 0, 1], [(q + 1) * c[0], 0]),
                (_, TorusKind::Nonsplit) => (g.regular_matrix(t.exp2(c[0])), [c[0], q * c[0]]),
                (GroupLabel::PGL2, _) => unreachable!("tori live on the GL2/SL2 side"),
            };
            logs.push(l);
            elements.push(g.index_of(m));
        }
        let classes = logs.iter().map(|&l| dual.class_of_logs(l).expect("dual torus element has a class")).collect();
        TorusDuality { kind: torus.kind(), logs, elements, classes }
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Eigenvalue logarithms of `s*_b`, in a fixed order.
    pub fn logs(&self, b: usize) -> [i64; 2] {
        self.logs[b]
    }

    pub fn element(&self, b: usize) -> Elem {
        self.elements[b]
    }

    /// `S*^{F*}` as a list of dual-group elements, indexed like the characters of `S^F`.
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn class(&self, b: usize) -> usize {
        self.classes[b]
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    /// Bijectivity and multiplicativity of `b -> s*_b`, class consistency, perfectness of the
    /// pairing, and Fourier inversion on `S^F` for every indicator function and the constant 1.
    pub fn verify(&self, inst: &Instance, torus: &Torus, dual: &DualInstance) -> Vec<Check> {
        let name = torus.kind().name();
        let g = dual.group();
        let m = inst.modulus();
        let n = torus.order();
        let mut hom = Check::new(format!("{name} duality is an isomorphism"));
        let mut sorted = self.elements.clone();
        sorted.sort_unstable();
        sorted.dedup();
        hom.record(sorted.len() == n, || format!("{} distinct dual elements for {n} characters", sorted.len()));
        for a in 0..n {
            for b in 0..n {
                let ca = torus.coords(a);
                let cb = torus.coords(b);
                let sum: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
                let ab = torus.pos_of(&sum);
                hom.record(g.mul(self.elements[a], self.elements[b]) == self.elements[ab], || format!("s*_{a} s*_{b}"));
            }
        }
        let mut classes = Check::new(format!("{name} duality class map"));
        for b in 0..n {
            classes.record(dual.class_of_element(self.elements[b]) == Some(self.classes[b]), || format!("character {b}"));
        }
        let thetas: Vec<Vec<RootVec>> = (0..n).map(|b| (0..n).map(|t| theta(torus, b, t, m)).collect()).collect();
        let mut perfect = Check::new(format!("{name} duality pairing is perfect"));
        for t in 0..n {
            for t2 in 0..n {
                let mut acc = RootAcc::new(m);
                for row in &thetas {
                    acc.add_product(&row[t], &row[torus.inverse(t2)], 1);
                }
                let want = if t == t2 { n as i64 } else { 0 };
                perfect.record(acc.to_integer(inst.field()) == Some(want), || format!("t = {t}, t' = {t2}"));
            }
        }
        let mut inversion = Check::new(format!("{name} Fourier inversion"));
        let mut functions: Vec<Vec<RootVec>> = (0..n)
            .map(|c| (0..n).map(|b| RootVec::from_int(m, (b == c) as i64)).collect())
            .collect();
        functions.push(vec![RootVec::from_int(m, 1); n]);
        for (k, f) in functions.iter().enumerate() {
            let scaled = torus_inverse_roots(torus, m, f);
            if k == n {
                for (t, c) in scaled.iter().enumerate() {
                    let want = if t == 0 { n as i64 } else { 0 };
                    let mut acc = RootAcc::new(m);
                    acc.add(c, 1);
                    inversion.record(acc.to_integer(inst.field()) == Some(want), || format!("ev_{t}(1)"));
                }
            }
            for b in 0..n {
                let mut acc = RootAcc::new(m);
                for (t, c) in scaled.iter().enumerate() {
                    acc.add_product(c, &thetas[b][t], 1);
                }
                let mut want = RootAcc::new(m);
                want.add(&f[b], n as i64);
                inversion.record(acc.finish(inst.field()) == want.finish(inst.field()), || format!("function {k} at s*_{b}"));
            }
        }
        vec![hom, classes, perfect, inversion]
    }
}

/// `|S| ev_t(f) = sum_b f(s*_b) theta_b(t^{-1})` for every `t`, as root sums.
pub fn torus_inverse_roots(torus: &Torus, m: u32, f: &[RootVec]) -> Vec<RootVec> {
    (0..torus.order())
        .map(|t| {
            let ti = torus.inverse(t);
            let mut acc = RootAcc::new(m);
            for (b, v) in f.iter().enumerate() {
                acc.add_product(v, &theta(torus, b, ti, m), 1);
            }
            acc.to_rootvec()
        })
        .collect()
}

/// `f(s*_b) = sum_t c_t theta_b(t)`: an element of `Q S^F` as a function on `S*^{F*}`.
pub fn torus_transform(torus: &Torus, coeffs: &[CycNum]) -> Vec<CycNum> {
    let n = torus.modulus();
    (0..torus.order())
        .map(|b| {
            let field = coeffs[0].field();
            coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).fold(CycNum::zero(field), |acc, (t, c)| {
                acc + c.mul_root(n, torus.pairing(t, b))
            })
        })
        .collect()
}

/// Inverse of [`torus_transform`]: `c_t = (1/|S|) sum_b f(s*_b) theta_b(t^{-1})`.
pub fn torus_inverse_transform(torus: &Torus, f: &[CycNum]) -> Vec<CycNum> {
    let n = torus.modulus();
    let s = rat(1, torus.order() as i64);
    (0..torus.order())
        .map(|t| {
            let field = f[0].field();
            f.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(CycNum::zero(field), |acc, (b, v)| acc + v.mul_root(n, -torus.pairing(t, b)))
                .scale(&s)
        })
        .collect()
}

/// Pair mode: the duality of each torus of `G = SL2` is the restriction of the duality of the
/// matching torus of `H = GL2`, through `T_G < T_H` and `T_H* -> T_G*`.
pub fn verify_pair_duality(
    g_inst: &Instance,
    h_inst: &Instance,
    ext: &ExtensionData,
    g_dual: &DualInstance,
    h_dual: &DualInstance,
    g_dualities: &[TorusDuality],
    h_dualities: &[TorusDuality],
) -> Check {
    let mut check = Check::new("pair duality square");
    let m = h_inst.modulus();
    for i in 0..2 {
        let (tg, th) = (&g_inst.tori()[i], &h_inst.tori()[i]);
        let tpos: Vec<usize> = tg.elements().iter().map(|&x| th.position(ext.include(x)).expect("T_G < T_H")).collect();
        for b in 0..th.order() {
            let found = (0..tg.order()).find(|&b2| (0..tg.order()).all(|t| theta(tg, b2, t, m) == theta(th, b, tpos[t], m)));
            let ok = found.is_some_and(|b2| {
                let img = g_dual.group().index_of(h_dual.group().matrix(h_dualities[i].element(b)));
                img == g_dualities[i].element(b2)
            });
            check.record(ok, || format!("torus {i} character {b}"));
        }
    }
    check
}

/// `{lambda, w lambda}` without repetition.
pub fn weyl_orbit(lambda: [i64; 2]) -> Vec<[i64; 2]> {
    if lambda[0] == lambda[1] {
        vec![lambda]
    } else {
        vec![lambda, [lambda[1], lambda[0]]]
    }
}

/// `pi_lambda` on every semisimple class, as root sums.
pub fn pi_lambda(dual: &DualInstance, lambda: [i64; 2]) -> Result<Vec<RootVec>, DualError> {
    if dual.label() == GroupLabel::PGL2 && (lambda[0] + lambda[1]).rem_euclid(dual.q - 1) != 0 {
        return Err(DualError::NotGradedZero(lambda));
    }
    let orbit = weyl_orbit(lambda);
    Ok(dual
        .keys()
        .iter()
        .map(|&[x, y]| {
            let scale = dual.modulus as i64 / dual.n;
            RootVec::from_terms(dual.modulus, orbit.iter().map(|mu| ((mu[0] * x + mu[1] * y) * scale, 1)))
        })
        .collect())
}

pub fn to_cycnums(field: &Arc<CycField>, v: &[RootVec]) -> SsClassFunction {
    v.iter().map(|r| r.to_cycnum(field)).collect()
}

/// Degree of `pi_{H, lambda}` for the grading by characters of the centre of `GL2*`.
pub fn grading_degree(q: u32, lambda: [i64; 2]) -> i64 {
    (lambda[0] + lambda[1]).rem_euclid(q as i64 - 1)
}

/// Homogeneity: `pi_lambda(z x) = lift(z)^{lambda_1 + lambda_2} pi_lambda(x)` for scalar `z`.
pub fn verify_grading(dual: &DualInstance, lambdas: &[[i64; 2]]) -> Check {
    let mut check = Check::new("pi_lambda homogeneity");
    let q = dual.q;
    for &lambda in lambdas {
        let Ok(pi) = pi_lambda(dual, lambda) else {
            check.fail(format!("{lambda:?}"));
            continue;
        };
        let deg = grading_degree(q as u32, lambda);
        for (c, &key) in dual.keys().iter().enumerate() {
            for z in 0..q - 1 {
                let zc = dual.class_of_logs([key[0] + (q + 1) * z, key[1] + (q + 1) * z]).expect("scaled key");
                let lifted = dual.brauer_lift((q + 1) * z * deg).mul(&pi[c]);
                let mut acc = RootAcc::new(dual.modulus);
                acc.add(&lifted, 1);
                acc.add(&pi[zc], -1);
                check.record(acc.to_integer(dual.field()) == Some(0), || format!("lambda {lambda:?} class {key:?} z {z}"));
            }
        }
    }
    check
}

/// Arithmetic modulo a prime `P = 1 (mod M)`, for fast rank decisions.
struct ModP {
    p: u64,
    powers: Vec<u64>,
}

impl ModP {
    fn new(m: u32) -> ModP {
        let m = m as u64;
        let p = (1u64..).map(|k| (1 << 30) / m * m + k * m + 1).find(|&p| is_prime(p)).expect("Dirichlet");
        let omega = pow_mod(primitive_root(p), (p - 1) / m, p);
        let powers = (0..m).scan(1u64, |acc, _| {
            let v = *acc;
            *acc = *acc * omega % p;
            Some(v)
        });
        ModP { p, powers: powers.collect() }
    }

    fn eval(&self, v: &RootVec) -> u64 {
        v.terms().iter().fold(0u64, |acc, &(j, c)| (acc + c.rem_euclid(self.p as i64) as u64 * self.powers[j as usize]) % self.p)
    }
}

/// Greedy choice of linearly independent vectors, in order.
fn independent_subset(vectors: &[Vec<RootVec>], m: u32, want: usize) -> Vec<usize> {
    let mp = ModP::new(m);
    let p = mp.p;
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if chosen.len() == want {
            break;
        }
        let mut r: Vec<u64> = v.iter().map(|x| mp.eval(x)).collect();
        for (piv, row) in &rows {
            let f = r[*piv];
            if f != 0 {
                for (a, b) in r.iter_mut().zip(row) {
                    *a = (*a + p - f * b % p) % p;
                }
            }
        }
        if let Some(piv) = r.iter().position(|&x| x != 0) {
            let inv = pow_mod(r[piv], p - 2, p);
            for a in r.iter_mut() {
                *a = *a * inv % p;
            }
            rows.push((piv, r));
            chosen.push(i);
        }
    }
    chosen
}

/// The Lambda-span of the `pi_lambda`, with a basis drawn greedily from the spanning set.
pub struct KLattice {
    field: Arc<CycField>,
    modulus: u32,
    lambdas: Vec<[i64; 2]>,
    spanning: Vec<Vec<RootVec>>,
    basis: Vec<usize>,
    basis_values: Vec<SsClassFunction>,
    solver: ExactSolver,
}

impl std::fmt::Debug for KLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KLattice({} generators, basis {:?})", self.spanning.len(), self.basis_lambdas())
    }
}

/// Weyl-orbit representatives of the box `[0, n)^2`, optionally restricted to degree zero.
pub fn lambda_box(dual: &DualInstance, n: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            if dual.label() != GroupLabel::PGL2 || (a + b) % (dual.q - 1) == 0 {
                out.push([a, b]);
            }
        }
    }
    out.sort_by_key(|l| (l[0].max(l[1]), l[0] + l[1], l[0]));
    out
}

impl KLattice {
    /// Spanning set `{pi_lambda : lambda in [0, q^2 - 2]^2}` (degree zero for `PGL2`).
    pub fn build(dual: &DualInstance) -> Result<KLattice, DualError> {
        let lambdas = lambda_box(dual, dual.n);
        let spanning = lambdas.iter().map(|&l| pi_lambda(dual, l)).collect::<Result<Vec<_>, _>>()?;
        KLattice::from_spanning(dual, lambdas, spanning)
    }

    /// Degree-zero `pi_{H, lambda}` of `GL2*` pushed through the class quotient to `PGL2*`;
    /// the check records that each is constant on fibers and equals `pi_lambda` of `PGL2*`.
    pub fn build_graded(h: &DualInstance, g: &DualInstance, map: &[usize]) -> Result<(KLattice, Check), DualError> {
        let mut check = Check::new("graded component descends to PGL2");
        let lambdas = lambda_box(g, g.n);
        let mut spanning = Vec::with_capacity(lambdas.len());
        for &l in &lambdas {
            let ph = pi_lambda(h, l)?;
            let mut down: Vec<Option<RootVec>> = vec![None; g.len()];
            for (i, v) in ph.into_iter().enumerate() {
                match &down[map[i]] {
                    Some(prev) => {
                        let ok = prev.to_cycnum(h.field()) == v.to_cycnum(h.field());
                        check.record(ok, || format!("lambda {l:?} not constant on fiber of {}", map[i]));
                    }
                    None => down[map[i]] = Some(v),
                }
            }
            let down: Vec<RootVec> = down.into_iter().map(|v| v.expect("quotient is surjective")).collect();
            let direct = pi_lambda(g, l)?;
            let same = down.iter().zip(&direct).all(|(a, b)| a.to_cycnum(g.field()) == b.to_cycnum(g.field()));
            check.record(same, || format!("lambda {l:?} disagrees with pi_lambda on PGL2"));
            spanning.push(down);
        }
        Ok((KLattice::from_spanning(g, lambdas, spanning)?, check))
    }

    pub fn from_spanning(dual: &DualInstance, lambdas: Vec<[i64; 2]>, spanning: Vec<Vec<RootVec>>) -> Result<KLattice, DualError> {
        let n = dual.len();
        let basis = independent_subset(&spanning, dual.modulus, n);
        if basis.len() < n {
            return Err(DualError::RankDeficient { rank: basis.len(), expected: n });
        }
        let field = Arc::clone(dual.field());
        let basis_values: Vec<SsClassFunction> = basis.iter().map(|&i| to_cycnums(&field, &spanning[i])).collect();
        let matrix: Vec<Vec<CycNum>> = (0..n).map(|c| basis_values.iter().map(|v| v[c].clone()).collect()).collect();
        let solver = ExactSolver::new(&field, &matrix)?;
        if solver.rank() < n {
            return Err(DualError::RankDeficient { rank: solver.rank(), expected: n });
        }
        Ok(KLattice { field, modulus: dual.modulus, lambdas, spanning, basis, basis_values, solver })
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.spanning.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spanning.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn lambdas(&self) -> &[[i64; 2]] {
        &self.lambdas
    }

    pub fn generator(&self, i: usize) -> &[RootVec] {
        &self.spanning[i]
    }

    pub fn generator_values(&self, i: usize) -> SsClassFunction {
        to_cycnums(&self.field, &self.spanning[i])
    }

    pub fn basis_indices(&self) -> &[usize] {
        &self.basis
    }

    pub fn basis_lambdas(&self) -> Vec<[i64; 2]> {
        self.basis.iter().map(|&i| self.lambdas[i]).collect()
    }

    pub fn basis_values(&self) -> &[SsClassFunction] {
        &self.basis_values
    }

    /// Coordinates of a function in the chosen basis.
    pub fn coordinates(&self, v: &[CycNum]) -> Result<Vec<CycNum>, DualError> {
        Ok(self.solver.solve(v)?)
    }

    /// Every generator has Lambda-integral coordinates in the basis, so the basis spans the lattice.
    pub fn verify_spanning(&self, ring: &LocalRingSpec) -> Check {
        let mut check = Check::new("K basis spans all pi_lambda");
        for (i, g) in self.spanning.iter().enumerate() {
            let ok = match self.coordinates(&to_cycnums(&self.field, g)) {
                Ok(x) => x.iter().all(|c| is_pm_integral(c, ring)),
                Err(_) => false,
            };
            check.record(ok, || format!("lambda {:?}", self.lambdas[i]));
        }
        check
    }

    /// Enlarging the box to `[0, 2(q^2 - 1)]^2` leaves the spanned lattice unchanged.
    pub fn verify_box_stabilization(&self, dual: &DualInstance, ring: &LocalRingSpec) -> Check {
        let mut check = Check::new("lambda box stabilization");
        let known: HashMap<&Vec<RootVec>, usize> = self.spanning.iter().enumerate().map(|(i, v)| (v, i)).collect();
        for l in lambda_box(dual, 2 * dual.n + 1) {
            let Ok(v) = pi_lambda(dual, l) else {
                check.fail(format!("{l:?}"));
                continue;
            };
            let inside = known.contains_key(&v)
                || self.coordinates(&to_cycnums(&self.field, &v)).is_ok_and(|x| x.iter().all(|c| is_pm_integral(c, ring)));
            check.record(inside, || format!("lambda {l:?} leaves the lattice"));
        }
        check
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn solver(&self) -> &ExactSolver {
        &self.solver
    }
}

/// Class weights of `x` as root sums of the instance modulus.
pub fn root_weights(inst: &Instance, x: &GroupAlgebraElement) -> RootWeights {
    RootWeights::new(&x.class_weights(inst.classes(), x.field()), inst.modulus())
}

/// `s*_b -> eps_G eps_S R_S(theta_b)(x)` from class weights of `x`.
pub fn curtis_characters(inst: &Instance, dl: &DlSystem, i: usize, weights: &RootWeights) -> Vec<CycNum> {
    let dt = dl.torus(i);
    (0..dt.len()).map(|b| dt.evaluate(b, weights, inst.field()).scale_int(dt.sign())).collect()
}

/// `Cur_S(x) = (eps_G eps_S / |S^F|) sum_t Tr((x, t)) t^{-1}` in `Q S^F`: the coefficient at
/// each torus position is `scale` times the returned root sum.
pub fn curtis_bk_roots(inst: &Instance, dl: &DlSystem, i: usize, weights: &RootWeights) -> (Vec<RootVec>, crate::arith::Rat) {
    let torus = &inst.tori()[i];
    let dt = dl.torus(i);
    let coeffs = (0..torus.order())
        .map(|t| {
            let ti = torus.inverse(t);
            let mut acc = RootAcc::new(inst.modulus());
            for (c, w) in weights.values().iter().enumerate() {
                if !w.is_zero() {
                    acc.add(w, dt.trace(c, ti));
                }
            }
            acc.to_rootvec()
        })
        .collect();
    (coeffs, rat(dt.sign(), torus.order() as i64 * weights.den()))
}

pub fn curtis_bk_element(inst: &Instance, dl: &DlSystem, i: usize, weights: &RootWeights) -> Vec<CycNum> {
    let (roots, s) = curtis_bk_roots(inst, dl, i, weights);
    roots.iter().map(|r| r.to_cycnum(inst.field()).scale(&s)).collect()
}

/// [`curtis_bk_element`] read as a function on `S*^{F*}`.
pub fn curtis_bk(inst: &Instance, dl: &DlSystem, i: usize, x: &GroupAlgebraElement) -> Vec<CycNum> {
    let torus = &inst.tori()[i];
    let m = inst.modulus();
    let (roots, s) = curtis_bk_roots(inst, dl, i, &root_weights(inst, x));
    (0..torus.order())
        .map(|b| {
            let mut acc = RootAcc::new(m);
            for (t, c) in roots.iter().enumerate() {
                if !c.is_zero() {
                    acc.add_product(c, &theta(torus, b, t, m), 1);
                }
            }
            acc.finish(inst.field()).scale(&s)
        })
        .collect()
}

/// The function on semisimple dual classes whose restriction to every dual torus is the Curtis image.
pub fn identify(inst: &Instance, dl: &DlSystem, dualities: &[TorusDuality], classes: usize, x: &GroupAlgebraElement) -> Result<SsClassFunction, DualError> {
    let w = root_weights(inst, x);
    let mut out: Vec<Option<CycNum>> = vec![None; classes];
    for (i, d) in dualities.iter().enumerate() {
        for (b, v) in curtis_characters(inst, dl, i, &w).into_iter().enumerate() {
            let c = d.class(b);
            match &out[c] {
                Some(prev) if *prev != v => return Err(DualError::OverlapInconsistency(c)),
                Some(_) => {}
                None => out[c] = Some(v),
            }
        }
    }
    out.into_iter().enumerate().map(|(c, v)| v.ok_or(DualError::Uncovered(c))).collect()
}

/// Images of an `E`-basis under the identification, with the inverse map.
pub struct Identification {
    images: Vec<SsClassFunction>,
    solver: ExactSolver,
}

impl std::fmt::Debug for Identification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Identification({} images)", self.images.len())
    }
}

impl Identification {
    pub fn build(inst: &Instance, dl: &DlSystem, dual: &DualInstance, dualities: &[TorusDuality], basis: &EndoBasis) -> Result<Identification, DualError> {
        let images = basis
            .elements()
            .iter()
            .map(|h| identify(inst, dl, dualities, dual.len(), h))
            .collect::<Result<Vec<_>, _>>()?;
        let n = dual.len();
        let matrix: Vec<Vec<CycNum>> = (0..n).map(|c| images.iter().map(|v| v[c].clone()).collect()).collect();
        let solver = ExactSolver::new(inst.field(), &matrix)?;
        if solver.rank() != basis.dim() || basis.dim() != n {
            return Err(DualError::NotInjective { rank: solver.rank(), dim: basis.dim() });
        }
        Ok(Identification { images, solver })
    }

    pub fn images(&self) -> &[SsClassFunction] {
        &self.images
    }

    pub fn image(&self, k: usize) -> &SsClassFunction {
        &self.images[k]
    }

    pub fn solver(&self) -> &ExactSolver {
        &self.solver
    }

    /// `E`-coordinates of the element identified with `f`.
    pub fn preimage(&self, f: &[CycNum]) -> Result<Vec<CycNum>, DualError> {
        Ok(self.solver.solve(f)?)
    }
}

fn lift(x: &CycNum, field: &Arc<CycField>) -> CycNum {
    x.lift_to(field).expect("coefficient field embeds")
}

/// Unit, ring homomorphism, both Curtis definitions, and agreement with the Gamma-constituent
/// `chi_s` of `eps R_S(theta)` evaluated at each basis element.
pub fn verify_identification(
    inst: &Instance,
    dl: &DlSystem,
    dual: &DualInstance,
    dualities: &[TorusDuality],
    basis: &EndoBasis,
    ident: &Identification,
) -> Vec<Check> {
    let field = inst.field();
    let n = basis.dim();
    let one = CycNum::one(field);
    let mut unit = Check::new("identify(e) = 1");
    for v in ident.image(basis.unit_index()) {
        unit.record(*v == one, || format!("value {v}"));
    }
    let mut ring = Check::new("identify is multiplicative");
    let mut cur_ring = Check::new("curtis_bk is multiplicative");
    let mut cur_unit = Check::new("curtis_bk(e) = 1");
    let mut restriction = Check::new("curtis_bk equals restriction of identify");
    let curs: Vec<Vec<Vec<CycNum>>> = (0..dualities.len())
        .map(|i| basis.elements().iter().map(|h| curtis_bk(inst, dl, i, h)).collect())
        .collect();
    for (i, d) in dualities.iter().enumerate() {
        for k in 0..n {
            for b in 0..d.len() {
                let ok = curs[i][k][b] == ident.image(k)[d.class(b)];
                restriction.record(ok, || format!("torus {i} basis {k} character {b}"));
            }
        }
        for v in &curs[i][basis.unit_index()] {
            cur_unit.record(*v == one, || format!("torus {i}: {v}"));
        }
    }
    for a in 0..n {
        for b in a..n {
            let consts: Vec<CycNum> = (0..n).map(|k| lift(basis.structure_constant(a, b, k), field)).collect();
            for c in 0..dual.len() {
                let lhs = &ident.image(a)[c] * &ident.image(b)[c];
                let rhs = consts.iter().enumerate().fold(CycNum::zero(field), |acc, (k, s)| acc + s * &ident.image(k)[c]);
                ring.record(lhs == rhs, || format!("h_{a} h_{b} at class {c}"));
            }
            for (i, cur) in curs.iter().enumerate() {
                for t in 0..cur[a].len() {
                    let lhs = &cur[a][t] * &cur[b][t];
                    let rhs = consts.iter().enumerate().fold(CycNum::zero(field), |acc, (k, s)| acc + s * &cur[k][t]);
                    cur_ring.record(lhs == rhs, || format!("torus {i} h_{a} h_{b} at {t}"));
                }
            }
        }
    }
    let mut chars = Check::new("identify agrees with Gamma-constituents");
    let gamma = gg_character(inst.context(), inst.group(), inst.classes(), basis.psi()).ok();
    let gamma_mult = gamma.and_then(|g| inst.table().decompose(&g).ok());
    for c in 0..dual.len() {
        let Some((i, b)) = dualities.iter().enumerate().find_map(|(i, d)| (0..d.len()).find(|&b| d.class(b) == c).map(|b| (i, b))) else {
            chars.fail(format!("class {c} uncovered"));
            continue;
        };
        let dt = dl.torus(i);
        let r = dt.character(b).scale(&CycNum::from_int(field, dt.sign()));
        let constituent = match (&gamma_mult, inst.table().decompose(&r)) {
            (Some(gm), Ok(rm)) => {
                let found: Vec<usize> = (0..rm.len()).filter(|&j| !rm[j].is_zero() && gm[j].is_one()).collect();
                (found.len() == 1 && rm[found[0]].is_one()).then(|| found[0])
            }
            _ => None,
        };
        let Some(j) = constituent else {
            chars.fail(format!("class {c}: no unique Gamma-constituent"));
            continue;
        };
        let chi = &inst.table().root_values()[j];
        for k in 0..n {
            let val = root_weights(inst, basis.element(k)).pair(chi, field);
            chars.record(val == ident.image(k)[c], || format!("class {c} basis {k}"));
        }
    }
    vec![unit, ring, cur_unit, restriction, cur_ring, chars]
}

/// Diagram of rings for `SL2 < GL2`: identifying an included basis element on the `GL2` side
/// gives the `SL2`-side identification pulled back along the class quotient.
#[allow(clippy::too_many_arguments)]
pub fn verify_pair_identification(
    basis: &EndoBasis,
    g_ident: &Identification,
    h_inst: &Instance,
    h_dl: &DlSystem,
    h_dual: &DualInstance,
    h_dualities: &[TorusDuality],
    ext: &ExtensionData,
    map: &[usize],
) -> Check {
    let mut check = Check::new("identification commutes with inclusion");
    for k in 0..basis.dim() {
        let inc = include_into_h(basis.element(k), ext);
        match identify(h_inst, h_dl, h_dualities, h_dual.len(), &inc) {
            Ok(v) => {
                for (c, x) in v.iter().enumerate() {
                    check.record(*x == g_ident.image(k)[map[c]], || format!("basis {k} class {c}"));
                }
            }
            Err(e) => check.fail(format!("basis {k}: {e}")),
        }
    }
    check
}

/// An integer combination of weights `(l1, l2)`, an element of `Z[X(T*)]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightPolynomial {
    terms: BTreeMap<[i64; 2], i64>,
}

impl WeightPolynomial {
    /// The orbit sum `r_lambda`.
    pub fn orbit_sum(lambda: [i64; 2]) -> WeightPolynomial {
        WeightPolynomial { terms: weyl_orbit(lambda).into_iter().map(|m| (m, 1)).collect() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([i64; 2], i64)>) -> WeightPolynomial {
        let mut out = WeightPolynomial::default();
        for (m, c) in terms {
            *out.terms.entry(m).or_insert(0) += c;
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = ([i64; 2], i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn mul(&self, other: &WeightPolynomial) -> WeightPolynomial {
        WeightPolynomial::from_terms(
            self.terms().flat_map(|(a, x)| other.terms().map(move |(b, y)| ([a[0] + b[0], a[1] + b[1]], x * y))),
        )
    }

    pub fn is_w_invariant(&self) -> bool {
        self.terms().all(|(m, c)| self.terms.get(&[m[1], m[0]]) == Some(&c))
    }
}

/// `phi_S`: each weight evaluated at the eigenvalues of `s*_b`, extended linearly.
pub fn phi_map(dual: &DualInstance, duality: &TorusDuality, x: &WeightPolynomial) -> Result<Vec<RootVec>, DualError> {
    if !x.is_w_invariant() {
        return Err(DualError::NotWInvariant);
    }
    let scale = dual.modulus as i64 / dual.n;
    Ok((0..duality.len())
        .map(|b| {
            let [u, v] = duality.logs(b);
            RootVec::from_terms(dual.modulus, x.terms().map(|(m, c)| ((m[0] * u + m[1] * v) * scale, c)))
        })
        .collect())
}

/// `Cur_S(identify^{-1}(pi_lambda)) = phi_S(r_lambda)` for the given weights, with the
/// Curtis side computed from the trace table, and `phi_S` multiplicative on orbit-sum products.
#[allow(clippy::too_many_arguments)]
pub fn verify_phi(
    inst: &Instance,
    dl: &DlSystem,
    dual: &DualInstance,
    dualities: &[TorusDuality],
    basis: &EndoBasis,
    ident: &Identification,
    lambdas: &[[i64; 2]],
) -> Vec<Check> {
    let field = inst.field();
    let mut rel = Check::new("Curtis of pi_lambda is phi(r_lambda)");
    let mut ring = Check::new("phi is multiplicative");
    let curs: Vec<Vec<Vec<CycNum>>> = (0..dualities.len())
        .map(|i| basis.elements().iter().map(|h| curtis_bk(inst, dl, i, h)).collect())
        .collect();
    for &l in lambdas {
        let pi = match pi_lambda(dual, l) {
            Ok(v) => to_cycnums(field, &v),
            Err(e) => {
                rel.fail(format!("{l:?}: {e}"));
                continue;
            }
        };
        let x = match ident.preimage(&pi) {
            Ok(x) => x,
            Err(e) => {
                rel.fail(format!("{l:?}: {e}"));
                continue;
            }
        };
        for (i, d) in dualities.iter().enumerate() {
            let phi = phi_map(dual, d, &WeightPolynomial::orbit_sum(l)).expect("orbit sums are invariant");
            for b in 0..d.len() {
                let cur = x.iter().enumerate().fold(CycNum::zero(field), |acc, (k, c)| acc + c * &curs[i][k][b]);
                rel.record(cur == phi[b].to_cycnum(field), || format!("lambda {l:?} torus {i} character {b}"));
            }
        }
    }
    for (a, &la) in lambdas.iter().enumerate() {
        for &lb in &lambdas[a..] {
            let (ra, rb) = (WeightPolynomial::orbit_sum(la), WeightPolynomial::orbit_sum(lb));
            let prod = ra.mul(&rb);
            for d in dualities {
                let (fa, fb, fp) = (phi_map(dual, d, &ra), phi_map(dual, d, &rb), phi_map(dual, d, &prod));
                let ok = match (fa, fb, fp) {
                    (Ok(fa), Ok(fb), Ok(fp)) => (0..d.len()).all(|b| {
                        let mut acc = RootAcc::new(dual.modulus);
                        acc.add(&fa[b].mul(&fb[b]), 1);
                        acc.add(&fp[b], -1);
                        acc.to_integer(field) == Some(0)
                    }),
                    _ => false,
                };
                ring.record(ok, || format!("r_{la:?} r_{lb:?}"));
            }
        }
    }
    vec![rel, ring]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gelfand_graev::regular_characters;

    #[test]
    fn class_counts_and_quotient() {
        let gl = Instance::build(GroupLabel::GL2, 3).unwrap();
        let sl = Instance::build(GroupLabel::SL2, 3).unwrap();
        let h = DualInstance::build(&gl).unwrap();
        let g = DualInstance::build(&sl).unwrap();
        assert_eq!(h.len(), 6);
        assert_eq!(g.len(), 4);
        assert!(h.verify_classes().passed());
        assert!(g.verify_classes().passed());
        let map = quotient_map(&h, &g);
        assert!(verify_quotient(&h, &g, &map).passed());
        let ss = h.classes().reps().iter().filter(|&&r| h.group().is_semisimple(r)).count();
        assert_eq!(ss, 6);
    }

    #[test]
    fn brauer_lift_and_pi() {
        let gl = Instance::build(GroupLabel::GL2, 3).unwrap();
        let h = DualInstance::build(&gl).unwrap();
        let k = gl.field();
        assert_eq!(h.brauer_lift(0).to_cycnum(k), CycNum::one(k));
        assert_eq!(h.brauer_lift(4).to_cycnum(k), CycNum::from_int(k, -1));
        let q1 = h.brauer_lift(1).to_cycnum(k).pow(4);
        assert_eq!(q1, h.brauer_lift(4).to_cycnum(k));
        let one = pi_lambda(&h, [0, 0]).unwrap();
        assert!(one.iter().all(|v| v.to_cycnum(k).is_one()));
        let id = h.class_of_logs([0, 0]).unwrap();
        assert_eq!(pi_lambda(&h, [1, 0]).unwrap()[id].to_cycnum(k), CycNum::from_int(k, 2));
        let sl = Instance::build(GroupLabel::SL2, 3).unwrap();
        let g = DualInstance::build(&sl).unwrap();
        assert!(matches!(pi_lambda(&g, [1, 0]), Err(DualError::NotGradedZero(_))));
        assert!(verify_grading(&h, &[[1, 0], [2, 5], [3, 3]]).passed());
    }

    #[test]
    fn gl2_3_identification() {
        let inst = Instance::build(GroupLabel::GL2, 3).unwrap();
        let dl = DlSystem::build(&inst).unwrap();
        let dual = DualInstance::build(&inst).unwrap();
        let dualities: Vec<TorusDuality> = inst.tori().iter().map(|t| TorusDuality::build(&inst, t, &dual)).collect();
        for (d, t) in dualities.iter().zip(inst.tori()) {
            for c in d.verify(&inst, t, &dual) {
                assert!(c.passed(), "{c}");
            }
        }
        let basis = EndoBasis::build(inst.group(), regular_characters(inst.group())[0], Some(6)).unwrap();
        let ident = Identification::build(&inst, &dl, &dual, &dualities, &basis).unwrap();
        for c in verify_identification(&inst, &dl, &dual, &dualities, &basis, &ident) {
            assert!(c.passed(), "{c}");
        }
        let k = KLattice::build(&dual).unwrap();
        assert_eq!(k.rank(), 6);
        let ring = LocalRingSpec::new(3, 1).unwrap();
        assert!(k.verify_spanning(&ring).passed());
        assert!(k.verify_box_stabilization(&dual, &ring).passed());
        for c in verify_phi(&inst, &dl, &dual, &dualities, &basis, &ident, &[[0, 0], [1, 0], [1, 1], [2, 5]]) {
            assert!(c.passed(), "{c}");
        }
    }

    #[test]
    fn sl2_3_pair() {
        let gi = Instance::build(GroupLabel::SL2, 3).unwrap();
        let hi = Instance::build(GroupLabel::GL2, 3).unwrap();
        let (gd, hd) = (DlSystem::build(&gi).unwrap(), DlSystem::build(&hi).unwrap());
        let (gdual, hdual) = (DualInstance::build(&gi).unwrap(), DualInstance::build(&hi).unwrap());
        let gdu: Vec<TorusDuality> = gi.tori().iter().map(|t| TorusDuality::build(&gi, t, &gdual)).collect();
        let hdu: Vec<TorusDuality> = hi.tori().iter().map(|t| TorusDuality::build(&hi, t, &hdual)).collect();
        let ext = ExtensionData::new(gi.group(), hi.group()).unwrap();
        assert!(verify_pair_duality(&gi, &hi, &ext, &gdual, &hdual, &gdu, &hdu).passed());
        let basis = EndoBasis::build(gi.group(), regular_characters(gi.group())[0], Some(4)).unwrap();
        let ident = Identification::build(&gi, &gd, &gdual, &gdu, &basis).unwrap();
        for c in verify_identification(&gi, &gd, &gdual, &gdu, &basis, &ident) {
            assert!(c.passed(), "{c}");
        }
        let map = quotient_map(&hdual, &gdual);
        assert!(verify_pair_identification(&basis, &ident, &hi, &hd, &hdual, &hdu, &ext, &map).passed());
        let (k, descent) = KLattice::build_graded(&hdual, &gdual, &map).unwrap();
        assert!(descent.passed(), "{descent}");
        assert_eq!(k.rank(), 4);
        assert!(k.verify_spanning(&LocalRingSpec::new(3, 1).unwrap()).passed());
    }
}
