//! The fields `F_q` and `F_{q^2}` with fixed defining polynomials and generators.
//!
//! Elements are small integers: `sum c_i p^i` encodes the residue class of `sum c_i x^i`.
//! In particular the prime field is `0..p`.

use crate::groups::GroupError;

pub type Fq = u16;
pub type Fq2 = u16;

pub const MAX_Q: u32 = 16;

#[derive(Debug, Clone)]
struct SmallField {
    size: u32,
    poly: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

fn digits(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic `m` over `F_p` (lowest coefficient first).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let top = r.pop().unwrap();
        if top != 0 {
            let off = r.len() - dm;
            for i in 0..dm {
                r[off + i] = (r[off + i] + (p - top) * m[i] % p) % p;
            }
        }
    }
    r
}

/// Brute-force irreducibility: no monic factor of degree at most `deg / 2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let mut f = digits(code, p, d);
            f.push(1);
            if poly_rem(poly, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `deg`, ordering by `(c_{deg-1}, .., c_0)`.
fn smallest_irreducible(p: u32, deg: u32) -> Vec<u32> {
    for code in 0..p.pow(deg) {
        let mut f = digits(code, p, deg);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl SmallField {
    fn new(p: u32, deg: u32) -> SmallField {
        let poly = smallest_irreducible(p, deg);
        let size = p.pow(deg);
        let n = size as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..size {
            let da = digits(a, p, deg);
            for b in 0..size {
                let db = digits(b, p, deg);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * size + b) as usize] = undigits(&s, p) as u16;
                let mut prod = vec![0u32; 2 * deg as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &poly, p);
                r.resize(deg as usize, 0);
                mul[(a * size + b) as usize] = undigits(&r, p) as u16;
            }
        }
        let mut neg = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for a in 0..size {
            for b in 0..size {
                if add[(a * size + b) as usize] == 0 {
                    neg[a as usize] = b as u16;
                }
                if mul[(a * size + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                }
            }
        }
        SmallField { size, poly, add, mul, neg, inv }
    }

    #[inline]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size as usize + b as usize]
    }

    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size as usize + b as usize]
    }

    fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut acc = 1u16;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn order(&self, a: u16) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// `F_p < F_q < F_{q^2}` with `g1 = g2^{q+1}`.
#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    f: u32,
    q: u32,
    fq: SmallField,
    fq2: SmallField,
    embed: Vec<Fq2>,
    restrict: Vec<Option<Fq>>,
    g2: Fq2,
    g1: Fq,
    log_q: Vec<u32>,
    exp_q: Vec<Fq>,
    log_q2: Vec<u32>,
    exp_q2: Vec<Fq2>,
}

impl FieldTower {
    pub fn new(p: u32, f: u32) -> Result<FieldTower, GroupError> {
        if p < 2 || (2..p).any(|d| d * d <= p && p.is_multiple_of(d)) {
            return Err(GroupError::NotPrime(p));
        }
        let q = p.checked_pow(f).filter(|&q| f >= 1 && q <= MAX_Q).ok_or(GroupError::BoundExceeded { p, f })?;
        let fq = SmallField::new(p, f);
        let fq2 = SmallField::new(p, 2 * f);
        let q2 = q * q;
        let g2 = (1..q2 as u16)
            .find(|&a| fq2.order(a) == q2 - 1)
            .expect("multiplicative group of a finite field is cyclic");
        // embed F_q by sending x to the smallest root of its defining polynomial
        let root = (0..q2 as u16)
            .find(|&a| {
                let mut acc = 0u16;
                for &c in fq.poly.iter().rev() {
                    acc = fq2.add(fq2.mul(acc, a), c as u16);
                }
                acc == 0
            })
            .expect("F_q embeds in F_{q^2}");
        let mut embed = vec![0u16; q as usize];
        for a in 0..q {
            let d = digits(a, p, f);
            let mut acc = 0u16;
            for &c in d.iter().rev() {
                acc = fq2.add(fq2.mul(acc, root), c as u16);
            }
            embed[a as usize] = acc;
        }
        let mut restrict = vec![None; q2 as usize];
        for (a, &e) in embed.iter().enumerate() {
            restrict[e as usize] = Some(a as Fq);
        }
        let g1_big = fq2.pow(g2, (q + 1) as u64);
        let g1 = restrict[g1_big as usize].expect("norm lands in F_q");
        let mut exp_q2 = Vec::with_capacity(q2 as usize - 1);
        let mut log_q2 = vec![u32::MAX; q2 as usize];
        let mut x = 1u16;
        for i in 0..q2 - 1 {
            exp_q2.push(x);
            log_q2[x as usize] = i;
            x = fq2.mul(x, g2);
        }
        let mut exp_q = Vec::with_capacity(q as usize - 1);
        let mut log_q = vec![u32::MAX; q as usize];
        let mut x = 1u16;
        for i in 0..q - 1 {
            exp_q.push(x);
            log_q[x as usize] = i;
            x = fq.mul(x, g1);
        }
        Ok(FieldTower { p, f, q, fq, fq2, embed, restrict, g2, g1, log_q, exp_q, log_q2, exp_q2 })
    }

    /// The tower for a prime power `q`.
    pub fn for_q(q: u32) -> Result<FieldTower, GroupError> {
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or(GroupError::BoundExceeded { p: q, f: 1 })?;
        let mut f = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            f += 1;
        }
        if r != 1 {
            return Err(GroupError::NotPrimePower(q));
        }
        FieldTower::new(p, f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining polynomial of `F_q` over `F_p`, lowest coefficient first.
    pub fn fq_poly(&self) -> &[u32] {
        &self.fq.poly
    }

    pub fn fq2_poly(&self) -> &[u32] {
        &self.fq2.poly
    }

    pub fn g1(&self) -> Fq {
        self.g1
    }

    pub fn g2(&self) -> Fq2 {
        self.g2
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.fq.add(a, b)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.fq.add(a, self.fq.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.fq.mul(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.fq.neg[a as usize]
    }

    /// Inverse of a nonzero element (0 maps to 0).
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        self.fq.inv[a as usize]
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        self.fq.pow(a, e)
    }

    /// `g1^i`.
    pub fn exp(&self, i: i64) -> Fq {
        self.exp_q[i.rem_euclid(self.q as i64 - 1) as usize]
    }

    /// Discrete log to base `g1` of a nonzero element.
    pub fn log(&self, a: Fq) -> u32 {
        let l = self.log_q[a as usize];
        assert!(l != u32::MAX, "log of zero");
        l
    }

    #[inline]
    pub fn add2(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.fq2.add(a, b)
    }

    #[inline]
    pub fn sub2(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.fq2.add(a, self.fq2.neg[b as usize])
    }

    #[inline]
    pub fn mul2(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.fq2.mul(a, b)
    }

    #[inline]
    pub fn inv2(&self, a: Fq2) -> Fq2 {
        self.fq2.inv[a as usize]
    }

    pub fn pow2(&self, a: Fq2, e: u64) -> Fq2 {
        self.fq2.pow(a, e)
    }

    /// `g2^i`.
    pub fn exp2(&self, i: i64) -> Fq2 {
        let n = (self.q * self.q - 1) as i64;
        self.exp_q2[i.rem_euclid(n) as usize]
    }

    /// Discrete log to base `g2` of a nonzero element of `F_{q^2}`.
    pub fn log2(&self, a: Fq2) -> u32 {
        let l = self.log_q2[a as usize];
        assert!(l != u32::MAX, "log of zero");
        l
    }

    #[inline]
    pub fn embed(&self, a: Fq) -> Fq2 {
        self.embed[a as usize]
    }

    /// The preimage in `F_q`, when the element lies in the subfield.
    pub fn restrict(&self, a: Fq2) -> Option<Fq> {
        self.restrict[a as usize]
    }

    /// `Tr_{F_q / F_p}`, returned as an integer in `0..p`.
    pub fn trace(&self, a: Fq) -> u32 {
        let mut acc = 0u16;
        let mut x = a;
        for _ in 0..self.f {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!((acc as u32) < self.p);
        acc as u32
    }

    /// Frobenius `x -> x^q` on `F_{q^2}`.
    pub fn frob(&self, a: Fq2) -> Fq2 {
        self.pow2(a, self.q as u64)
    }

    /// Norm `F_{q^2} -> F_q`.
    pub fn norm(&self, a: Fq2) -> Fq {
        self.restrict(self.pow2(a, self.q as u64 + 1)).expect("norm lies in F_q")
    }

    /// Trace `F_{q^2} -> F_q`.
    pub fn trace2(&self, a: Fq2) -> Fq {
        self.restrict(self.add2(a, self.frob(a))).expect("trace lies in F_q")
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q as Fq
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> {
        1..self.q as Fq
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q3_generators() {
        let t = FieldTower::new(3, 1).unwrap();
        assert_eq!(t.fq2.order(t.g2()), 8);
        let minus_one = t.embed(t.neg(1));
        assert_eq!(t.pow2(t.g2(), 4), minus_one);
        let g1_powers: Vec<Fq> = (0..2).map(|i| t.exp(i)).collect();
        assert_eq!(g1_powers, vec![1, 2]);
    }

    #[test]
    fn q2_builds_f4() {
        let t = FieldTower::new(2, 1).unwrap();
        assert_eq!(t.fq2.order(t.g2()), 3);
        assert_eq!(t.g1(), 1);
    }

    #[test]
    fn subfields_and_norm_compatibility() {
        for &(p, f) in &[(2, 2), (3, 2), (2, 3), (5, 1), (7, 1), (2, 4)] {
            let t = FieldTower::new(p, f).unwrap();
            let q = t.q();
            assert_eq!(t.fq.order(t.g1()), q - 1);
            for a in t.elements() {
                for b in t.elements() {
                    assert_eq!(t.embed(t.mul(a, b)), t.mul2(t.embed(a), t.embed(b)));
                    assert_eq!(t.embed(t.add(a, b)), t.add2(t.embed(a), t.embed(b)));
                }
                assert!(t.trace(a) < p);
            }
            assert_eq!(t.embed(t.g1()), t.pow2(t.g2(), (q + 1) as u64));
        }
    }

    #[test]
    fn bound_and_primality() {
        assert!(matches!(FieldTower::new(17, 1), Err(GroupError::BoundExceeded { .. })));
        assert!(matches!(FieldTower::new(4, 1), Err(GroupError::NotPrime(4))));
        assert!(matches!(FieldTower::for_q(6), Err(GroupError::NotPrimePower(6))));
    }
}
