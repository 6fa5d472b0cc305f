//! Maximal tori of `GL2` and `SL2` with abstract coordinates.
//!
//! An `F`-stable maximal torus is determined by its pair of eigenlines in
//! `P^1(F_{q^2})`; this key identifies tori even when `S^F` is trivial.

use std::collections::{BTreeMap, HashMap};

use super::{Elem, Fq2, GroupInstance, GroupLabel, Mat2};

/// Point of `P^1(F_{q^2})`: `x` encodes `[x : 1]`, and `q^2` encodes `[1 : 0]`.
pub type ProjPoint = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum TorusKind {
    Split,
    Nonsplit,
}

impl TorusKind {
    pub fn name(self) -> &'static str {
        match self {
            TorusKind::Split => "split",
            TorusKind::Nonsplit => "nonsplit",
        }
    }
}

/// `S^F` with coordinates in `(Z/n)^rank`; the element at coordinate `a` pairs with the
/// character at coordinate `b` to `zeta_n^{a . b}`.
#[derive(Debug, Clone)]
pub struct Torus {
    kind: TorusKind,
    group: GroupLabel,
    q: u32,
    n: u32,
    rank: usize,
    elements: Vec<Elem>,
    position: HashMap<Elem, usize>,
    lines: [ProjPoint; 2],
    weyl_order: usize,
}

/// One `G^F`-conjugate `g S g^{-1}` of a standard torus, with positions aligned to `S`.
#[derive(Debug, Clone)]
pub struct TorusConjugate {
    pub kind: TorusKind,
    pub conjugator: Elem,
    pub lines: [ProjPoint; 2],
    pub elements: Vec<Elem>,
}

impl GroupInstance {
    /// Point of `P^1(F_{q^2})` moved by a matrix.
    pub fn act_on_point(&self, x: Elem, pt: ProjPoint) -> ProjPoint {
        let t = &**self.tower();
        let q2 = (t.q() * t.q()) as ProjPoint;
        let m = self.matrix(x);
        let [a, b, c, d] = m.map(|v| t.embed(v));
        let (num, den) = if pt == q2 { (a, c) } else { (t.add2(t.mul2(a, pt), b), t.add2(t.mul2(c, pt), d)) };
        if den == 0 {
            q2
        } else {
            t.mul2(num, t.inv2(den))
        }
    }

    fn line_key(&self, x: Elem, lines: [ProjPoint; 2]) -> [ProjPoint; 2] {
        let mut k = lines.map(|l| self.act_on_point(x, l));
        k.sort_unstable();
        k
    }

    /// The standard split and nonsplit tori.
    pub fn tori(&self) -> Vec<Torus> {
        assert!(self.label() != GroupLabel::PGL2, "tori are built on the GL2/SL2 side");
        vec![Torus::standard(self, TorusKind::Split), Torus::standard(self, TorusKind::Nonsplit)]
    }

    /// Multiplication by `x` on `F_{q^2}` in the basis `(1, g2)`, as a group element.
    pub fn regular_embedding(&self, x: Fq2) -> Elem {
        self.index_of(self.regular_matrix(x))
    }

    /// Matrix of multiplication by `x` on `F_{q^2}` in the basis `(1, g2)`.
    pub fn regular_matrix(&self, x: Fq2) -> Mat2 {
        let t = &**self.tower();
        let g2 = t.g2();
        let c1 = t.neg(t.trace2(g2));
        let c0 = t.norm(g2);
        let (alpha, beta) = t
            .elements()
            .flat_map(|a| t.elements().map(move |b| (a, b)))
            .find(|&(a, b)| t.add2(t.embed(a), t.mul2(t.embed(b), g2)) == x)
            .expect("(1, g2) is a basis");
        [alpha, t.neg(t.mul(beta, c0)), beta, t.sub(alpha, t.mul(beta, c1))]
    }

    /// Every `F`-stable maximal torus conjugate to `s`, one entry per torus.
    pub fn torus_conjugates(&self, s: &Torus) -> Vec<TorusConjugate> {
        let mut seen: BTreeMap<[ProjPoint; 2], Elem> = BTreeMap::new();
        for g in self.elements() {
            seen.entry(self.line_key(g, s.lines)).or_insert(g);
        }
        let mut out: Vec<TorusConjugate> = seen
            .into_iter()
            .map(|(lines, g)| TorusConjugate {
                kind: s.kind,
                conjugator: g,
                lines,
                elements: s.elements.iter().map(|&t| self.conj(g, t)).collect(),
            })
            .collect();
        out.sort_by_key(|c| c.conjugator);
        out
    }
}

fn eigenline(g: &GroupInstance, m: Mat2, lambda: Fq2) -> ProjPoint {
    let t = &**g.tower();
    let q2 = (t.q() * t.q()) as ProjPoint;
    let [a, b, c, d] = m.map(|v| t.embed(v));
    // (A - lambda) v = 0
    let (v0, v1) = if b != 0 {
        (b, t.sub2(lambda, a))
    } else if c != 0 {
        (t.sub2(lambda, d), c)
    } else if a == lambda {
        (1, 0)
    } else {
        (0, 1)
    };
    if v1 == 0 {
        q2
    } else {
        t.mul2(v0, t.inv2(v1))
    }
}

impl Torus {
    fn standard(g: &GroupInstance, kind: TorusKind) -> Torus {
        let t = &**g.tower();
        let q = t.q();
        let q2 = (q * q) as ProjPoint;
        let (n, rank) = match (g.label(), kind) {
            (GroupLabel::GL2, TorusKind::Split) => (q - 1, 2),
            (GroupLabel::GL2, TorusKind::Nonsplit) => (q * q - 1, 1),
            (GroupLabel::SL2, TorusKind::Split) => (q - 1, 1),
            (GroupLabel::SL2, TorusKind::Nonsplit) => (q + 1, 1),
            (GroupLabel::PGL2, _) => unreachable!(),
        };
        let size = (n as usize).pow(rank as u32);
        let mut elements = Vec::with_capacity(size);
        for pos in 0..size {
            let a = |k: usize| -> i64 {
                if rank == 2 {
                    if k == 0 {
                        (pos / n as usize) as i64
                    } else {
                        (pos % n as usize) as i64
                    }
                } else {
                    pos as i64
                }
            };
            let e = match (g.label(), kind) {
                (GroupLabel::GL2, TorusKind::Split) => g.index_of([t.exp(a(0)), 0, 0, t.exp(a(1))]),
                (GroupLabel::SL2, TorusKind::Split) => g.index_of([t.exp(a(0)), 0, 0, t.exp(-a(0))]),
                (GroupLabel::GL2, TorusKind::Nonsplit) => g.regular_embedding(t.exp2(a(0))),
                (GroupLabel::SL2, TorusKind::Nonsplit) => g.regular_embedding(t.exp2((q as i64 - 1) * a(0))),
                (GroupLabel::PGL2, _) => unreachable!(),
            };
            elements.push(e);
        }
        let lines = match kind {
            TorusKind::Split => [0, q2],
            TorusKind::Nonsplit => {
                let gen = g.regular_matrix(t.g2());
                let mut l = [eigenline(g, gen, t.g2()), eigenline(g, gen, t.frob(t.g2()))];
                l.sort_unstable();
                l
            }
        };
        let position = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut torus =
            Torus { kind, group: g.label(), q, n, rank, elements, position, lines, weyl_order: 0 };
        let normalizer = g.elements().filter(|&x| g.line_key(x, lines) == lines).count();
        torus.weyl_order = normalizer / torus.order();
        torus
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn group_label(&self) -> GroupLabel {
        self.group
    }

    /// Modulus of the coordinates.
    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn element(&self, pos: usize) -> Elem {
        self.elements[pos]
    }

    pub fn position(&self, x: Elem) -> Option<usize> {
        self.position.get(&x).copied()
    }

    pub fn lines(&self) -> [ProjPoint; 2] {
        self.lines
    }

    /// `|W_G(S)^F|`, from the stabilizer of the eigenline pair.
    pub fn weyl_order(&self) -> usize {
        self.weyl_order
    }

    /// `epsilon_G epsilon_S`.
    pub fn sign(&self) -> i64 {
        match self.kind {
            TorusKind::Split => 1,
            TorusKind::Nonsplit => -1,
        }
    }

    /// `F_q`-rank of the torus.
    pub fn fq_rank(&self) -> u32 {
        match (self.group, self.kind) {
            (GroupLabel::GL2, TorusKind::Split) => 2,
            (GroupLabel::GL2, TorusKind::Nonsplit) | (GroupLabel::SL2, TorusKind::Split) => 1,
            _ => 0,
        }
    }

    pub fn coords(&self, pos: usize) -> Vec<i64> {
        let n = self.n as usize;
        if self.rank == 2 {
            vec![(pos / n) as i64, (pos % n) as i64]
        } else {
            vec![pos as i64]
        }
    }

    pub fn pos_of(&self, coords: &[i64]) -> usize {
        let n = self.n as i64;
        coords.iter().fold(0usize, |acc, &c| acc * n as usize + c.rem_euclid(n) as usize)
    }

    /// Exponent `e` with `theta_b(t_a) = zeta_n^e`.
    pub fn pairing(&self, a: usize, b: usize) -> i64 {
        let n = self.n as i64;
        let ca = self.coords(a);
        let cb = self.coords(b);
        ca.iter().zip(&cb).map(|(x, y)| x * y).sum::<i64>().rem_euclid(n)
    }

    /// The nontrivial Weyl element acting on coordinates (of elements or of characters).
    pub fn weyl(&self, pos: usize) -> usize {
        let c = self.coords(pos);
        let q = self.q as i64;
        let w = match (self.group, self.kind) {
            (GroupLabel::GL2, TorusKind::Split) => vec![c[1], c[0]],
            (GroupLabel::GL2, TorusKind::Nonsplit) => vec![q * c[0]],
            _ => vec![-c[0]],
        };
        self.pos_of(&w)
    }

    pub fn inverse(&self, pos: usize) -> usize {
        let c: Vec<i64> = self.coords(pos).iter().map(|x| -x).collect();
        self.pos_of(&c)
    }

    /// Discrete logs (base `g2`) of the two eigenvalues of the element at `pos`.
    pub fn eigen_logs(&self, pos: usize) -> [i64; 2] {
        let q = self.q as i64;
        let m = q * q - 1;
        let c = self.coords(pos);
        let r = match (self.group, self.kind) {
            (GroupLabel::GL2, TorusKind::Split) => [(q + 1) * c[0], (q + 1) * c[1]],
            (GroupLabel::GL2, TorusKind::Nonsplit) => [c[0], q * c[0]],
            (GroupLabel::SL2, TorusKind::Split) => [(q + 1) * c[0], -(q + 1) * c[0]],
            _ => [(q - 1) * c[0], q * (q - 1) * c[0]],
        };
        r.map(|x| x.rem_euclid(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_orders_and_weyl_groups() {
        for &(l, q) in &[(GroupLabel::GL2, 2), (GroupLabel::GL2, 3), (GroupLabel::SL2, 3), (GroupLabel::GL2, 4), (GroupLabel::SL2, 5)] {
            let g = GroupInstance::build(l, q).unwrap();
            let tori = g.tori();
            let q = q as usize;
            let (ns, nn) = if l == GroupLabel::GL2 { ((q - 1) * (q - 1), q * q - 1) } else { (q - 1, q + 1) };
            assert_eq!(tori[0].order(), ns);
            assert_eq!(tori[1].order(), nn);
            let mut count = 0;
            for s in &tori {
                assert_eq!(s.weyl_order(), 2);
                let conj = g.torus_conjugates(s);
                assert_eq!(conj.len(), g.order() / (s.order() * s.weyl_order()));
                count += conj.len();
                let mut els: Vec<Elem> = s.elements().to_vec();
                els.sort_unstable();
                els.dedup();
                assert_eq!(els.len(), s.order());
                for x in s.elements() {
                    for y in s.elements() {
                        assert_eq!(g.mul(*x, *y), g.mul(*y, *x));
                    }
                }
            }
            assert_eq!(count, q * q);
        }
    }

    #[test]
    fn nonsplit_eigenvalues_are_logs() {
        let g = GroupInstance::build(GroupLabel::GL2, 5).unwrap();
        let s = &g.tori()[1];
        let t = g.tower();
        for pos in 0..s.order() {
            let x = s.element(pos);
            let m = g.matrix(x);
            let [l1, l2] = s.eigen_logs(pos);
            let tr = t.add2(t.exp2(l1), t.exp2(l2));
            assert_eq!(Some(t.add(m[0], m[3])), t.restrict(tr));
            assert_eq!(t.embed(g.det(x)), t.mul2(t.exp2(l1), t.exp2(l2)));
        }
    }

    #[test]
    fn weyl_action_is_conjugation() {
        for &(l, q) in &[(GroupLabel::GL2, 3), (GroupLabel::SL2, 5)] {
            let g = GroupInstance::build(l, q).unwrap();
            for s in g.tori() {
                let w = g.elements().find(|&x| g.line_key(x, s.lines()) == s.lines() && s.position(x).is_none()).unwrap();
                for pos in 0..s.order() {
                    let c = g.conj(w, s.element(pos));
                    assert_eq!(s.position(c), Some(s.weyl(pos)));
                }
            }
        }
    }
}
