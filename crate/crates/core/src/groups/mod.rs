//! Concrete rank-one groups over `F_q`: `GL2`, `SL2` and `PGL2`, with classes and subgroups.

mod extension;
mod field;
mod torus;

use std::fmt;
use std::sync::Arc;

pub use extension::ExtensionData;
pub use field::{FieldTower, Fq, Fq2, MAX_Q};
pub use torus::{ProjPoint, Torus, TorusConjugate, TorusKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("q = {p}^{f} exceeds the supported bound")]
    BoundExceeded { p: u32, f: u32 },
    #[error("unsupported instance {label} over F_{q}")]
    UnsupportedInstance { label: GroupLabel, q: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum GroupLabel {
    GL2,
    SL2,
    PGL2,
}

impl GroupLabel {
    pub fn name(self) -> &'static str {
        match self {
            GroupLabel::GL2 => "GL2",
            GroupLabel::SL2 => "SL2",
            GroupLabel::PGL2 => "PGL2",
        }
    }

    /// `F_q`-rank, which fixes the sign `epsilon_G`.
    pub fn rank(self) -> u32 {
        match self {
            GroupLabel::GL2 => 2,
            GroupLabel::SL2 | GroupLabel::PGL2 => 1,
        }
    }

    /// Label of the dual group.
    pub fn dual(self) -> GroupLabel {
        match self {
            GroupLabel::GL2 => GroupLabel::GL2,
            GroupLabel::SL2 => GroupLabel::PGL2,
            GroupLabel::PGL2 => GroupLabel::SL2,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GroupLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gl2" => Ok(GroupLabel::GL2),
            "sl2" => Ok(GroupLabel::SL2),
            "pgl2" => Ok(GroupLabel::PGL2),
            other => Err(format!("unknown group label '{other}'")),
        }
    }
}

/// A 2x2 matrix `[[a, b], [c, d]]` stored row-major.
pub type Mat2 = [Fq; 4];

/// Element index inside a [`GroupInstance`].
pub type Elem = u32;

pub struct GroupInstance {
    label: GroupLabel,
    tower: Arc<FieldTower>,
    elements: Vec<Mat2>,
    lookup: Vec<u32>,
    inverses: Vec<Elem>,
    orders: Vec<u32>,
}

impl fmt::Debug for GroupInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.label, self.tower.q())
    }
}

impl GroupInstance {
    pub fn build(label: GroupLabel, q: u32) -> Result<GroupInstance, GroupError> {
        let tower = Arc::new(FieldTower::for_q(q)?);
        GroupInstance::with_tower(label, tower)
    }

    pub fn with_tower(label: GroupLabel, tower: Arc<FieldTower>) -> Result<GroupInstance, GroupError> {
        let q = tower.q();
        if label != GroupLabel::GL2 && q.is_multiple_of(2) {
            return Err(GroupError::UnsupportedInstance { label, q });
        }
        let t = &tower;
        let mut elements = Vec::new();
        for code in 0..q.pow(4) {
            let m = decode(code, q);
            let det = t.sub(t.mul(m[0], m[3]), t.mul(m[1], m[2]));
            let keep = match label {
                GroupLabel::GL2 => det != 0,
                GroupLabel::SL2 => det == 1,
                GroupLabel::PGL2 => det != 0 && projective_canonical(t, m) == m,
            };
            if keep {
                elements.push(m);
            }
        }
        let id: Mat2 = [1, 0, 0, 1];
        let pos = elements.iter().position(|&m| m == id).expect("identity is an element");
        let idm = elements.remove(pos);
        elements.insert(0, idm);
        let mut lookup = vec![u32::MAX; q.pow(4) as usize];
        for (i, &m) in elements.iter().enumerate() {
            lookup[encode(m, q) as usize] = i as u32;
        }
        let mut g = GroupInstance { label, tower, elements, lookup, inverses: Vec::new(), orders: Vec::new() };
        g.inverses = (0..g.order() as Elem).map(|i| g.index_of(g.mat_inv(g.elements[i as usize]))).collect();
        g.orders = (0..g.order() as Elem).map(|i| g.compute_order(i)).collect();
        Ok(g)
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn p(&self) -> u32 {
        self.tower.p()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `|G|` from the closed formula, used as an independent check of the enumeration.
    pub fn expected_order(&self) -> usize {
        let q = self.q() as usize;
        match self.label {
            GroupLabel::GL2 => q * (q - 1) * (q - 1) * (q + 1),
            GroupLabel::SL2 | GroupLabel::PGL2 => q * (q * q - 1),
        }
    }

    /// The `p'`-part of `|G|`.
    pub fn order_p_prime(&self) -> usize {
        let mut n = self.order();
        let p = self.p() as usize;
        while n.is_multiple_of(p) {
            n /= p;
        }
        n
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn matrix(&self, x: Elem) -> Mat2 {
        self.elements[x as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order() as Elem
    }

    /// Index of a matrix (projectively normalized for `PGL2`); panics if it is not an element.
    pub fn index_of(&self, m: Mat2) -> Elem {
        self.try_index_of(m).unwrap_or_else(|| panic!("{m:?} is not in {self:?}"))
    }

    pub fn try_index_of(&self, m: Mat2) -> Option<Elem> {
        let m = if self.label == GroupLabel::PGL2 { projective_canonical(&self.tower, m) } else { m };
        let i = self.lookup[encode(m, self.q()) as usize];
        (i != u32::MAX).then_some(i)
    }

    pub fn mat_mul(&self, x: Mat2, y: Mat2) -> Mat2 {
        let t = &self.tower;
        [
            t.add(t.mul(x[0], y[0]), t.mul(x[1], y[2])),
            t.add(t.mul(x[0], y[1]), t.mul(x[1], y[3])),
            t.add(t.mul(x[2], y[0]), t.mul(x[3], y[2])),
            t.add(t.mul(x[2], y[1]), t.mul(x[3], y[3])),
        ]
    }

    pub fn mat_det(&self, x: Mat2) -> Fq {
        let t = &self.tower;
        t.sub(t.mul(x[0], x[3]), t.mul(x[1], x[2]))
    }

    fn mat_inv(&self, x: Mat2) -> Mat2 {
        let t = &self.tower;
        let di = t.inv(self.mat_det(x));
        [t.mul(x[3], di), t.neg(t.mul(x[1], di)), t.neg(t.mul(x[2], di)), t.mul(x[0], di)]
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.index_of(self.mat_mul(self.elements[x as usize], self.elements[y as usize]))
    }

    pub fn inv(&self, x: Elem) -> Elem {
        self.inverses[x as usize]
    }

    /// `g x g^{-1}`.
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: Elem, e: i64) -> Elem {
        let base = if e < 0 { self.inv(x) } else { x };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn compute_order(&self, x: Elem) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn element_order(&self, x: Elem) -> u32 {
        self.orders[x as usize]
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u32 {
        self.orders.iter().fold(1u32, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn det(&self, x: Elem) -> Fq {
        self.mat_det(self.elements[x as usize])
    }

    /// Semisimple means order prime to `p`.
    pub fn is_semisimple(&self, x: Elem) -> bool {
        !self.orders[x as usize].is_multiple_of(self.p())
    }

    /// Unipotent means order a power of `p`.
    pub fn is_unipotent(&self, x: Elem) -> bool {
        let mut o = self.orders[x as usize];
        while o.is_multiple_of(self.p()) {
            o /= self.p();
        }
        o == 1
    }

    pub fn is_central(&self, x: Elem) -> bool {
        let m = self.elements[x as usize];
        m[1] == 0 && m[2] == 0 && m[0] == m[3]
    }

    /// Jordan decomposition `x = s u` with `s` semisimple, `u` unipotent, commuting.
    pub fn jordan(&self, x: Elem) -> JordanPair {
        let n = self.orders[x as usize] as u64;
        let p = self.p() as u64;
        let mut pp = 1u64;
        while (n / pp).is_multiple_of(p) {
            pp *= p;
        }
        let m = n / pp;
        // a = 1 mod m, a = 0 mod pp
        let a = (0..n).step_by(pp as usize).find(|a| a % m == 1 % m).unwrap_or(0);
        let b = (n + 1 - a) % n;
        JordanPair { s: self.pow(x, a as i64), u: self.pow(x, b as i64) }
    }

    /// Upper triangular matrices.
    pub fn borel(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.elements[x as usize][2] == 0).collect()
    }

    /// `U_0`, indexed by `x` in `[[1, x], [0, 1]]`.
    pub fn unipotent_radical(&self) -> Vec<Elem> {
        self.tower.elements().map(|x| self.index_of([1, x, 0, 1])).collect()
    }

    /// `x` with `g = [[1, x], [0, 1]]`, when `g` is in `U_0`.
    pub fn unipotent_coordinate(&self, g: Elem) -> Option<Fq> {
        let m = self.elements[g as usize];
        (m[0] == 1 && m[2] == 0 && m[3] == 1).then_some(m[1])
    }

    pub fn conjugacy_classes(&self) -> ConjClassData {
        ConjClassData::compute(self)
    }
}

fn encode(m: Mat2, q: u32) -> u32 {
    ((m[0] as u32 * q + m[1] as u32) * q + m[2] as u32) * q + m[3] as u32
}

fn decode(code: u32, q: u32) -> Mat2 {
    [(code / (q * q * q)) as Fq, (code / (q * q) % q) as Fq, (code / q % q) as Fq, (code % q) as Fq]
}

/// Scales a matrix so that its first nonzero entry is 1.
fn projective_canonical(t: &FieldTower, m: Mat2) -> Mat2 {
    let lead = m.iter().copied().find(|&v| v != 0).expect("nonzero matrix");
    let s = t.inv(lead);
    [t.mul(m[0], s), t.mul(m[1], s), t.mul(m[2], s), t.mul(m[3], s)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JordanPair {
    pub s: Elem,
    pub u: Elem,
}

/// Conjugacy classes with representatives, sizes and power maps.
#[derive(Debug, Clone)]
pub struct ConjClassData {
    group_order: usize,
    class_of: Vec<u32>,
    reps: Vec<Elem>,
    members: Vec<Vec<Elem>>,
    inverse_class: Vec<usize>,
    rep_orders: Vec<u32>,
}

impl ConjClassData {
    fn compute(g: &GroupInstance) -> ConjClassData {
        let n = g.order();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for x in g.elements() {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            let mut orbit = Vec::new();
            for h in g.elements() {
                let y = g.conj(h, x);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = c;
                    orbit.push(y);
                }
            }
            orbit.sort_unstable();
            reps.push(x);
            members.push(orbit);
        }
        let inverse_class = reps.iter().map(|&r| class_of[g.inv(r) as usize] as usize).collect();
        let rep_orders = reps.iter().map(|&r| g.element_order(r)).collect();
        ConjClassData { group_order: n, class_of, reps, members, inverse_class, rep_orders }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn rep(&self, c: usize) -> Elem {
        self.reps[c]
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    pub fn members(&self, c: usize) -> &[Elem] {
        &self.members[c]
    }

    pub fn size(&self, c: usize) -> usize {
        self.members[c].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn centralizer_order(&self, c: usize) -> usize {
        self.group_order / self.members[c].len()
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    pub fn rep_order(&self, c: usize) -> u32 {
        self.rep_orders[c]
    }

    /// Class of `rep(c)^k`.
    pub fn power_class(&self, g: &GroupInstance, c: usize, k: i64) -> usize {
        self.class_of(g.pow(self.reps[c], k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_formulas() {
        for &(l, q) in &[(GroupLabel::GL2, 2), (GroupLabel::GL2, 3), (GroupLabel::SL2, 3), (GroupLabel::PGL2, 3), (GroupLabel::GL2, 4), (GroupLabel::SL2, 5)] {
            let g = GroupInstance::build(l, q).unwrap();
            assert_eq!(g.order(), g.expected_order(), "{l} {q}");
            assert_eq!(g.matrix(0), [1, 0, 0, 1]);
        }
        assert!(GroupInstance::build(GroupLabel::SL2, 4).is_err());
    }

    #[test]
    fn class_counts_q3() {
        let counts: Vec<usize> = [GroupLabel::GL2, GroupLabel::SL2, GroupLabel::PGL2]
            .iter()
            .map(|&l| GroupInstance::build(l, 3).unwrap().conjugacy_classes().len())
            .collect();
        assert_eq!(counts, vec![8, 7, 5]);
    }

    #[test]
    fn jordan_examples() {
        let g = GroupInstance::build(GroupLabel::GL2, 3).unwrap();
        let h = g.index_of([1, 1, 0, 1]);
        assert_eq!(g.jordan(h), JordanPair { s: 0, u: h });
        let h = g.index_of([2, 0, 0, 1]);
        assert_eq!(g.jordan(h), JordanPair { s: h, u: 0 });
        let h = g.index_of([2, 1, 0, 2]);
        let jp = g.jordan(h);
        assert_eq!(g.matrix(jp.s), [2, 0, 0, 2]);
        assert_eq!(g.matrix(jp.u), [1, 2, 0, 1]);
    }

    #[test]
    fn jordan_invariants_everywhere() {
        for &(l, q) in &[(GroupLabel::GL2, 4), (GroupLabel::SL2, 5), (GroupLabel::PGL2, 5)] {
            let g = GroupInstance::build(l, q).unwrap();
            for x in g.elements() {
                let JordanPair { s, u } = g.jordan(x);
                assert_eq!(g.mul(s, u), x);
                assert_eq!(g.mul(u, s), x);
                assert!(g.is_semisimple(s));
                assert!(g.is_unipotent(u));
            }
        }
    }

    #[test]
    fn class_equation() {
        let g = GroupInstance::build(GroupLabel::GL2, 5).unwrap();
        let cc = g.conjugacy_classes();
        assert_eq!(cc.len(), 24);
        assert_eq!(cc.sizes().iter().sum::<usize>(), g.order());
        for c in 0..cc.len() {
            assert_eq!(cc.size(c) * cc.centralizer_order(c), g.order());
            let r = cc.rep(c);
            let brute = g.elements().filter(|&h| g.mul(h, r) == g.mul(r, h)).count();
            assert_eq!(brute, cc.centralizer_order(c));
            assert_eq!(cc.members(c)[0], r);
        }
    }
}
