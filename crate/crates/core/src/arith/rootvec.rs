//! Integer combinations of roots of unity `sum c_j zeta_M^j`, kept unreduced.
//!
//! Character values are short sums of roots of unity, so products and sums in this
//! form are far cheaper than in the power basis. Conversion to [`CycNum`] reduces once.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{CycField, CycNum};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootVec {
    modulus: u32,
    terms: Vec<(u32, i64)>,
}

impl RootVec {
    pub fn zero(modulus: u32) -> RootVec {
        RootVec { modulus, terms: Vec::new() }
    }

    pub fn from_int(modulus: u32, c: i64) -> RootVec {
        RootVec::root(modulus, 0, c)
    }

    /// `c * zeta_M^j`.
    pub fn root(modulus: u32, j: i64, c: i64) -> RootVec {
        let mut v = RootVec::zero(modulus);
        if c != 0 {
            v.terms.push((j.rem_euclid(modulus as i64) as u32, c));
        }
        v
    }

    pub fn from_terms(modulus: u32, terms: impl IntoIterator<Item = (i64, i64)>) -> RootVec {
        let mut map: BTreeMap<u32, i64> = BTreeMap::new();
        for (j, c) in terms {
            *map.entry(j.rem_euclid(modulus as i64) as u32).or_insert(0) += c;
        }
        RootVec { modulus, terms: map.into_iter().filter(|&(_, c)| c != 0).collect() }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &RootVec) -> RootVec {
        assert_eq!(self.modulus, other.modulus);
        RootVec::from_terms(
            self.modulus,
            self.terms.iter().chain(&other.terms).map(|&(j, c)| (j as i64, c)),
        )
    }

    pub fn neg(&self) -> RootVec {
        RootVec { modulus: self.modulus, terms: self.terms.iter().map(|&(j, c)| (j, -c)).collect() }
    }

    pub fn sub(&self, other: &RootVec) -> RootVec {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> RootVec {
        if k == 0 {
            return RootVec::zero(self.modulus);
        }
        RootVec { modulus: self.modulus, terms: self.terms.iter().map(|&(j, c)| (j, c * k)).collect() }
    }

    pub fn mul(&self, other: &RootVec) -> RootVec {
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus as u64;
        let mut buf = vec![0i64; self.modulus as usize];
        for &(i, a) in &self.terms {
            for &(j, b) in &other.terms {
                buf[((i as u64 + j as u64) % m) as usize] += a * b;
            }
        }
        RootVec {
            modulus: self.modulus,
            terms: buf.into_iter().enumerate().filter(|&(_, c)| c != 0).map(|(j, c)| (j as u32, c)).collect(),
        }
    }

    /// `zeta -> zeta^k`.
    pub fn galois(&self, k: i64) -> RootVec {
        let m = self.modulus as i64;
        RootVec::from_terms(self.modulus, self.terms.iter().map(|&(j, c)| (j as i64 * k % m, c)))
    }

    pub fn conj(&self) -> RootVec {
        self.galois(-1)
    }

    pub fn to_cycnum(&self, field: &Arc<CycField>) -> CycNum {
        let mut acc = RootAcc::new(self.modulus);
        acc.add(self, 1);
        acc.finish(field)
    }
}

/// Dense accumulator for sums of [`RootVec`] products.
pub struct RootAcc {
    modulus: u32,
    buf: Vec<i128>,
}

impl RootAcc {
    pub fn new(modulus: u32) -> RootAcc {
        RootAcc { modulus, buf: vec![0; modulus as usize] }
    }

    pub fn add(&mut self, v: &RootVec, k: i64) {
        for &(j, c) in &v.terms {
            self.buf[j as usize] += c as i128 * k as i128;
        }
    }

    /// Adds `k * a * b`.
    pub fn add_product(&mut self, a: &RootVec, b: &RootVec, k: i64) {
        let m = self.modulus as u64;
        for &(i, x) in &a.terms {
            let xk = x as i128 * k as i128;
            for &(j, y) in &b.terms {
                self.buf[((i as u64 + j as u64) % m) as usize] += xk * y as i128;
            }
        }
    }

    pub fn add_root(&mut self, j: i64, c: i64) {
        self.buf[j.rem_euclid(self.modulus as i64) as usize] += c as i128;
    }

    /// Integer power-basis coordinates of the accumulated sum.
    fn reduce(&self, field: &Arc<CycField>) -> Vec<i128> {
        let n = field.conductor();
        let m = self.modulus;
        assert!(field.contains_roots_of_order(m), "modulus {m} does not fit conductor {n}");
        let mut out = vec![0i128; field.degree()];
        for (j, &c) in self.buf.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (idx, c) = if n.is_multiple_of(m) {
                (j as u64 * (n / m) as u64 % n as u64, c)
            } else {
                // n odd, m | 2n: zeta_{2n}^k = (-1)^k zeta_n^{k (n + 1) / 2}
                let k = j as u64 * (2 * n / m) as u64;
                (k * (n as u64).div_ceil(2) % n as u64, if k % 2 == 1 { -c } else { c })
            };
            for (o, &x) in out.iter_mut().zip(field.power_coords(idx as usize)) {
                *o += c * x as i128;
            }
        }
        out
    }

    pub fn finish(self, field: &Arc<CycField>) -> CycNum {
        let v = self.reduce(field);
        CycNum::from_integer_coords(field, v.into_iter().map(BigInt::from).collect())
    }

    /// The accumulated sum as an unreduced root vector.
    pub fn to_rootvec(&self) -> RootVec {
        let terms = self.buf.iter().enumerate().filter(|&(_, &c)| c != 0).map(|(j, &c)| (j as u32, i64::try_from(c).expect("root coefficient overflow")));
        RootVec { modulus: self.modulus, terms: terms.collect() }
    }

    /// The sum as a rational integer, if it is one.
    pub fn to_integer(&self, field: &Arc<CycField>) -> Option<i64> {
        let v = self.reduce(field);
        if v[1..].iter().all(|&x| x == 0) {
            i64::try_from(v[0]).ok()
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_cycnum() {
        let k = CycField::get(24);
        let a = RootVec::from_terms(24, [(1, 2), (5, -1), (12, 3)]);
        let b = RootVec::from_terms(24, [(23, 1), (7, 4)]);
        assert_eq!(a.mul(&b).to_cycnum(&k), &a.to_cycnum(&k) * &b.to_cycnum(&k));
        assert_eq!(a.conj().to_cycnum(&k), a.to_cycnum(&k).conj());
    }

    #[test]
    fn odd_conductor_with_even_modulus() {
        // modulus 6 inside Q(zeta_3)
        let k = CycField::get(6);
        let z6 = RootVec::root(6, 1, 1).to_cycnum(&k);
        assert_eq!(z6, CycNum::root_of_unity(&k, 6, 1).unwrap());
        assert_eq!(RootVec::root(6, 3, 1).to_cycnum(&k), CycNum::from_int(&k, -1));
    }
}
