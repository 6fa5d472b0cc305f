//! Brute-force matrix groups over a prime field, independent of the library's group code.

#![allow(dead_code)]

use std::collections::HashSet;

pub type M = [u32; 4];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Gl,
    Sl,
    Pgl,
}

fn mul(p: u32, a: M, b: M) -> M {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

fn det(p: u32, a: M) -> u32 {
    (a[0] * a[3] + p * p - a[1] * a[2] % p) % p
}

fn inv_mod(p: u32, x: u32) -> u32 {
    (1..p).find(|y| x * y % p == 1).unwrap()
}

/// Scale so the first nonzero entry is 1.
fn normalize(p: u32, a: M) -> M {
    let lead = *a.iter().find(|&&x| x != 0).unwrap();
    let s = inv_mod(p, lead);
    a.map(|x| x * s % p)
}

pub struct SmallGroup {
    pub p: u32,
    pub kind: Kind,
    pub elements: Vec<M>,
}

impl SmallGroup {
    pub fn new(kind: Kind, p: u32) -> SmallGroup {
        let mut elements = Vec::new();
        for code in 0..p.pow(4) {
            let a = [code % p, code / p % p, code / (p * p) % p, code / (p * p * p)];
            let d = det(p, a);
            let keep = match kind {
                Kind::Gl => d != 0,
                Kind::Sl => d == 1,
                Kind::Pgl => d != 0 && normalize(p, a) == a,
            };
            if keep {
                elements.push(a);
            }
        }
        SmallGroup { p, kind, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn canon(&self, a: M) -> M {
        if self.kind == Kind::Pgl {
            normalize(self.p, a)
        } else {
            a
        }
    }

    fn inv(&self, a: M) -> M {
        let d = inv_mod(self.p, det(self.p, a));
        let p = self.p;
        self.canon([a[3] * d % p, (p - a[1]) * d % p, (p - a[2]) * d % p, a[0] * d % p])
    }

    fn conj(&self, g: M, x: M) -> M {
        self.canon(mul(self.p, mul(self.p, g, x), self.inv(g)))
    }

    fn is_identity(&self, a: M) -> bool {
        self.canon(a) == [1, 0, 0, 1]
    }

    pub fn element_order(&self, a: M) -> u32 {
        let mut x = a;
        let mut n = 1;
        while !self.is_identity(x) {
            x = self.canon(mul(self.p, x, a));
            n += 1;
        }
        n
    }

    /// Conjugacy classes as orbits, optionally restricted to elements of order prime to `p`.
    pub fn class_count(&self, semisimple_only: bool) -> usize {
        let mut seen: HashSet<M> = HashSet::new();
        let mut count = 0;
        for &x in &self.elements {
            if seen.contains(&x) || (semisimple_only && self.element_order(x).is_multiple_of(self.p)) {
                continue;
            }
            count += 1;
            for &g in &self.elements {
                seen.insert(self.conj(g, x));
            }
        }
        count
    }
}
