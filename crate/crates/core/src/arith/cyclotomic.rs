//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `{zeta_N^i : 0 <= i < phi(N)}` modulo the
//! N-th cyclotomic polynomial, as a vector of integer numerators over one common
//! positive denominator. Conductors `N = 2 (mod 4)` are normalized to `N / 2`, so the
//! representation of every element is unique and `Z[zeta_N]` is exactly the set of
//! elements with denominator 1.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ArithError, Rat};

/// Tables shared by every element of one cyclotomic field.
pub struct CycField {
    conductor: u32,
    degree: usize,
    /// Monic `Phi_N`, lowest coefficient first, length `degree + 1`.
    phi_poly: Vec<i64>,
    /// `zeta^j` in the power basis, for `0 <= j < conductor`.
    powers: Vec<Vec<i64>>,
    units: Vec<u32>,
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor)
    }
}

fn registry() -> &'static Mutex<HashMap<u32, Arc<CycField>>> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();
    FIELDS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Canonical conductor: `N = 2 (mod 4)` collapses to `N / 2`, and `2` to `1`.
pub fn canonical_conductor(n: u32) -> u32 {
    assert!(n > 0, "conductor must be positive");
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both monic, integer coefficients, lowest first
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - den.len();
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn cyclotomic_poly(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut acc = num;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d, cache);
            acc = poly_divexact(&acc, &phi_d);
        }
    }
    cache.insert(n, acc.clone());
    acc
}

impl CycField {
    /// Returns the shared field `Q(zeta_n)` (conductor normalized).
    pub fn get(n: u32) -> Arc<CycField> {
        let n = canonical_conductor(n);
        let mut reg = registry().lock().expect("cyclotomic registry poisoned");
        if let Some(f) = reg.get(&n) {
            return Arc::clone(f);
        }
        let field = Arc::new(CycField::build(n));
        reg.insert(n, Arc::clone(&field));
        field
    }

    fn build(n: u32) -> CycField {
        let mut cache = HashMap::new();
        let phi_poly = cyclotomic_poly(n, &mut cache);
        let degree = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by zeta
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * phi_poly[i];
                }
            }
        }
        let units = (0..n).filter(|&k| k.gcd(&n) == 1).collect();
        CycField { conductor: n, degree, phi_poly, powers, units }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates of `zeta_N^j`, `0 <= j < N`.
    pub(crate) fn power_coords(&self, j: usize) -> &[i64] {
        &self.powers[j]
    }

    /// `phi(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.phi_poly
    }

    /// Residues `k mod N` with `gcd(k, N) = 1`; they index the Galois automorphisms.
    pub fn galois_units(&self) -> &[u32] {
        &self.units
    }

    /// True when a primitive m-th root of unity lives in this field.
    pub fn contains_roots_of_order(&self, m: u32) -> bool {
        m > 0 && (self.conductor.is_multiple_of(m) || (self.conductor % 2 == 1 && (2 * self.conductor).is_multiple_of(m)))
    }
}

/// An element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycField>,
    num: Vec<BigInt>,
    den: BigInt,
}

fn small(v: &[BigInt]) -> Option<Vec<i64>> {
    const LIM: u64 = 1 << 50;
    v.iter()
        .map(|x| x.to_i64().filter(|&y| y.unsigned_abs() < LIM))
        .collect()
}

impl CycNum {
    pub fn zero(field: &Arc<CycField>) -> CycNum {
        CycNum { field: Arc::clone(field), num: vec![BigInt::zero(); field.degree], den: BigInt::one() }
    }

    pub fn one(field: &Arc<CycField>) -> CycNum {
        CycNum::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycField>, v: i64) -> CycNum {
        let mut z = CycNum::zero(field);
        z.num[0] = BigInt::from(v);
        z
    }

    pub fn from_bigint(field: &Arc<CycField>, v: BigInt) -> CycNum {
        let mut z = CycNum::zero(field);
        z.num[0] = v;
        z
    }

    pub(crate) fn from_integer_coords(field: &Arc<CycField>, num: Vec<BigInt>) -> CycNum {
        debug_assert_eq!(num.len(), field.degree);
        CycNum { field: Arc::clone(field), num, den: BigInt::one() }
    }

    pub fn from_rat(field: &Arc<CycField>, r: &Rat) -> CycNum {
        let mut z = CycNum::zero(field);
        z.num[0] = r.numer().clone();
        z.den = r.denom().clone();
        z.normalize();
        z
    }

    pub fn from_ratio(field: &Arc<CycField>, n: i64, d: i64) -> CycNum {
        CycNum::from_rat(field, &Rat::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Builds an element from power-basis coordinates.
    pub fn from_coords(field: &Arc<CycField>, coords: &[Rat]) -> Result<CycNum, ArithError> {
        if coords.len() != field.degree {
            return Err(ArithError::CoordinateLength { expected: field.degree, got: coords.len() });
        }
        let mut den = BigInt::one();
        for c in coords {
            den = den.lcm(c.denom());
        }
        let num = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut z = CycNum { field: Arc::clone(field), num, den };
        z.normalize();
        Ok(z)
    }

    /// `zeta_N^j` for the field's own conductor.
    pub fn zeta_pow(field: &Arc<CycField>, j: i64) -> CycNum {
        let n = field.conductor as i64;
        let idx = j.rem_euclid(n) as usize;
        CycNum {
            field: Arc::clone(field),
            num: field.powers[idx].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// `zeta_m^k`, a primitive m-th root of unity raised to `k`.
    pub fn root_of_unity(field: &Arc<CycField>, m: u32, k: i64) -> Result<CycNum, ArithError> {
        let n = field.conductor;
        if m == 0 || !field.contains_roots_of_order(m) {
            return Err(ArithError::ConductorMismatch { left: m, right: n });
        }
        let m64 = m as i64;
        let k = k.rem_euclid(m64);
        if n.is_multiple_of(m) {
            return Ok(CycNum::zeta_pow(field, k * (n / m) as i64));
        }
        // n odd and m | 2n: zeta_{2n} = -zeta_n^{(n+1)/2}
        let j = k * (2 * n / m) as i64;
        let base = CycNum::zeta_pow(field, j * ((n as i64 + 1) / 2));
        Ok(if j % 2 == 1 { -base } else { base })
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn same_field(&self, other: &CycNum) -> bool {
        Arc::ptr_eq(&self.field, &other.field)
    }

    /// Common denominator (positive, coprime to the numerator content).
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn coords(&self) -> Vec<Rat> {
        self.num.iter().map(|n| Rat::new(n.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rat::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The value as a rational integer, when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self.to_rat() {
            Some(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// True when every coordinate is an integer, i.e. the element is in `Z[zeta_N]`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in &mut self.num {
                *c = &*c / &g;
            }
        }
    }

    fn check(&self, other: &CycNum) -> Result<(), ArithError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(ArithError::ConductorMismatch { left: self.conductor(), right: other.conductor() })
        }
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum, ArithError> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &CycNum) -> Result<CycNum, ArithError> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &CycNum, negate: bool) -> CycNum {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let l = self.den.lcm(&other.den);
            let fa = &l / &self.den;
            let fb = &l / &other.den;
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let x = a * &fa;
                    let y = b * &fb;
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, l)
        };
        let mut z = CycNum { field: Arc::clone(&self.field), num, den };
        z.normalize();
        z
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum, ArithError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &CycNum) -> CycNum {
        if self.is_zero() || other.is_zero() {
            return CycNum::zero(&self.field);
        }
        let d = self.field.degree;
        let num = match (small(&self.num), small(&other.num)) {
            (Some(a), Some(b)) => match mul_reduce_i128(&a, &b, &self.field.phi_poly) {
                Some(v) => v,
                None => mul_reduce_big(&self.num, &other.num, &self.field.phi_poly),
            },
            _ => mul_reduce_big(&self.num, &other.num, &self.field.phi_poly),
        };
        debug_assert_eq!(num.len(), d);
        let mut z = CycNum { field: Arc::clone(&self.field), num, den: &self.den * &other.den };
        z.normalize();
        z
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, r: &Rat) -> CycNum {
        if r.is_zero() {
            return CycNum::zero(&self.field);
        }
        let mut z = CycNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| c * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        z.normalize();
        z
    }

    pub fn scale_int(&self, k: i64) -> CycNum {
        self.scale(&Rat::from_integer(BigInt::from(k)))
    }

    /// Multiplication by `zeta_N^j`, without a full product.
    pub fn mul_zeta(&self, j: i64) -> CycNum {
        let n = self.field.conductor as i64;
        let j = j.rem_euclid(n) as usize;
        if j == 0 || self.is_zero() {
            return self.clone();
        }
        let n = n as usize;
        let mut out = vec![BigInt::zero(); self.field.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pw = &self.field.powers[(i + j) % n];
            for (o, &p) in out.iter_mut().zip(pw) {
                if p != 0 {
                    *o += c * p;
                }
            }
        }
        let mut z = CycNum { field: Arc::clone(&self.field), num: out, den: self.den.clone() };
        z.normalize();
        z
    }

    /// Multiplication by `zeta_m^k`, for `m` with `zeta_m` in the field.
    pub fn mul_root(&self, m: u32, k: i64) -> CycNum {
        let n = self.field.conductor;
        assert!(self.field.contains_roots_of_order(m), "zeta_{m} is not in Q(zeta_{n})");
        let k = k.rem_euclid(m as i64);
        if n.is_multiple_of(m) {
            return self.mul_zeta(k * (n / m) as i64);
        }
        let j = k * (2 * n / m) as i64;
        let r = self.mul_zeta(j * ((n as i64 + 1) / 2));
        if j % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// The Galois automorphism `zeta -> zeta^k` (`gcd(k, N) = 1`).
    pub fn galois(&self, k: i64) -> CycNum {
        let n = self.field.conductor as i64;
        let k = k.rem_euclid(n) as usize;
        let mut out = vec![BigInt::zero(); self.field.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pw = &self.field.powers[(i * k) % n as usize];
            for (o, &p) in out.iter_mut().zip(pw) {
                if p != 0 {
                    *o += c * p;
                }
            }
        }
        let mut z = CycNum { field: Arc::clone(&self.field), num: out, den: self.den.clone() };
        z.normalize();
        z
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> CycNum {
        if self.field.conductor <= 2 {
            return self.clone();
        }
        self.galois(-1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Rat {
        let mut acc = self.clone();
        for &k in self.field.units.iter().filter(|&&k| k != 1 % self.field.conductor) {
            acc = acc.mul_unchecked(&self.galois(k as i64));
        }
        acc.to_rat().expect("norm of a cyclotomic number is rational")
    }

    pub fn inv(&self) -> Result<CycNum, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.to_rat() {
            return Ok(CycNum::from_rat(&self.field, &r.recip()));
        }
        let one = 1 % self.field.conductor;
        let mut cof = CycNum::one(&self.field);
        for &k in self.field.units.iter().filter(|&&k| k != one) {
            cof = cof.mul_unchecked(&self.galois(k as i64));
        }
        let nrm = self.mul_unchecked(&cof).to_rat().expect("norm is rational");
        Ok(cof.scale(&nrm.recip()))
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum, ArithError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Re-expresses this element in a field whose conductor is a multiple of ours.
    pub fn lift_to(&self, target: &Arc<CycField>) -> Result<CycNum, ArithError> {
        if Arc::ptr_eq(&self.field, target) {
            return Ok(self.clone());
        }
        let n = self.field.conductor;
        if !target.contains_roots_of_order(n) {
            return Err(ArithError::ConductorMismatch { left: n, right: target.conductor });
        }
        let mut acc = CycNum::zero(target);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = CycNum::root_of_unity(target, n.max(1), i as i64)?;
            acc = acc.add_unchecked(&r.scale(&Rat::from_integer(c.clone())), false);
        }
        Ok(acc.scale(&Rat::new(BigInt::one(), self.den.clone())))
    }
}

fn mul_reduce_i128(a: &[i64], b: &[i64], phi: &[i64]) -> Option<Vec<BigInt>> {
    let d = a.len();
    let mut prod = vec![0i128; 2 * d - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = prod[i + j].checked_add(x.checked_mul(y as i128)?)?;
            }
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &p) in phi.iter().take(d).enumerate() {
            if p != 0 {
                let t = c.checked_mul(p as i128)?;
                prod[k - d + i] = prod[k - d + i].checked_sub(t)?;
            }
        }
    }
    Some(prod[..d].iter().map(|&c| BigInt::from(c)).collect())
}

fn mul_reduce_big(a: &[BigInt], b: &[BigInt], phi: &[i64]) -> Vec<BigInt> {
    let d = a.len();
    let mut prod = vec![BigInt::zero(); 2 * d - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    for k in (d..2 * d - 1).rev() {
        if prod[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut prod[k]);
        for (i, &p) in phi.iter().take(d).enumerate() {
            if p != 0 {
                prod[k - d + i] -= &c * p;
            }
        }
    }
    prod.truncate(d);
    prod
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.den.hash(state);
        self.num.hash(state);
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A fixed total order (lexicographic on rational coordinates); not a field order.
impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.conductor()
            .cmp(&other.conductor())
            .then_with(|| {
                for (a, b) in self.num.iter().zip(&other.num) {
                    let o = (a * &other.den).cmp(&(b * &self.den));
                    if o != std::cmp::Ordering::Equal {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.field.conductor;
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = Rat::new(c.clone(), self.den.clone());
            let neg = r.is_negative();
            let a = r.abs();
            if !first {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{n}")?;
                    } else {
                        write!(f, "z{n}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                self.$f(rhs).expect("cyclotomic operands must share a conductor")
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$f(&rhs).expect("cyclotomic operands must share a conductor")
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$f(rhs).expect("cyclotomic operands must share a conductor")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { field: Arc::clone(&self.field), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// Sums `coef * zeta^j` terms in an unreduced length-N buffer and reduces once.
pub struct RootSum {
    field: Arc<CycField>,
    buf: Vec<Rat>,
}

impl RootSum {
    pub fn new(field: &Arc<CycField>) -> RootSum {
        RootSum { field: Arc::clone(field), buf: vec![Rat::zero(); field.conductor as usize] }
    }

    pub fn add_root(&mut self, j: i64, coef: &Rat) {
        let n = self.field.conductor as i64;
        self.buf[j.rem_euclid(n) as usize] += coef;
    }

    pub fn add_root_int(&mut self, j: i64, coef: i64) {
        let n = self.field.conductor as i64;
        self.buf[j.rem_euclid(n) as usize] += Rat::from_integer(BigInt::from(coef));
    }

    pub fn finish(self) -> CycNum {
        let d = self.field.degree;
        let mut den = BigInt::one();
        for c in &self.buf {
            if !c.is_zero() {
                den = den.lcm(c.denom());
            }
        }
        let mut num = vec![BigInt::zero(); d];
        for (j, c) in self.buf.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            for (o, &p) in num.iter_mut().zip(&self.field.powers[j]) {
                if p != 0 {
                    *o += &scaled * p;
                }
            }
        }
        let mut z = CycNum { field: self.field, num, den };
        z.normalize();
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u32) -> Arc<CycField> {
        CycField::get(n)
    }

    #[test]
    fn conductor_normalization() {
        assert_eq!(f(6).conductor(), 3);
        assert_eq!(f(2).conductor(), 1);
        assert_eq!(f(12).degree(), 4);
        assert_eq!(f(120).degree(), 32);
        assert!(Arc::ptr_eq(&f(10), &f(5)));
    }

    #[test]
    fn roots_of_unity_basics() {
        let k = f(12);
        assert!(CycNum::root_of_unity(&k, 1, 0).unwrap().is_one());
        let i = CycNum::root_of_unity(&k, 4, 1).unwrap();
        assert_eq!(&i * &i, CycNum::from_int(&k, -1));
        let s = CycNum::root_of_unity(&k, 3, 1).unwrap() + CycNum::root_of_unity(&k, 3, 2).unwrap();
        assert_eq!(s, CycNum::from_int(&k, -1));
        assert!(matches!(CycNum::root_of_unity(&k, 5, 1), Err(ArithError::ConductorMismatch { .. })));
    }

    #[test]
    fn odd_conductor_supplies_sign_roots() {
        let k = f(6);
        let m1 = CycNum::root_of_unity(&k, 2, 1).unwrap();
        assert_eq!(m1, CycNum::from_int(&k, -1));
        let z6 = CycNum::root_of_unity(&k, 6, 1).unwrap();
        assert!(z6.pow(6).is_one());
        assert!(!z6.pow(3).is_one());
        assert!(!z6.pow(2).is_one());
    }

    #[test]
    fn field_op_examples() {
        let k = f(5);
        let z = CycNum::zeta_pow(&k, 1);
        let half = CycNum::from_ratio(&k, 1, 2);
        assert_eq!((&half + &z) - z.clone(), half);
        let k8 = f(8);
        let z8 = CycNum::zeta_pow(&k8, 1);
        assert_eq!(z8.inv().unwrap(), CycNum::zeta_pow(&k8, 7));
        let k7 = f(7);
        assert_eq!(CycNum::zeta_pow(&k7, 3).conj(), CycNum::zeta_pow(&k7, 4));
        assert!(matches!(CycNum::zero(&k7).inv(), Err(ArithError::DivisionByZero)));
        let mism = CycNum::one(&k7).checked_add(&CycNum::one(&k8));
        assert!(matches!(mism, Err(ArithError::ConductorMismatch { .. })));
    }

    #[test]
    fn lift_between_conductors() {
        let k3 = f(3);
        let k24 = f(24);
        let w = CycNum::zeta_pow(&k3, 1);
        let lifted = w.lift_to(&k24).unwrap();
        assert_eq!(lifted, CycNum::zeta_pow(&k24, 8));
        assert!(w.lift_to(&f(8)).is_err());
    }

    #[test]
    fn root_sum_matches_direct() {
        let k = f(24);
        let mut rs = RootSum::new(&k);
        rs.add_root_int(3, 2);
        rs.add_root(29, &Rat::new(BigInt::from(1), BigInt::from(3)));
        let direct = CycNum::zeta_pow(&k, 3).scale_int(2) + CycNum::zeta_pow(&k, 5).scale(&Rat::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(rs.finish(), direct);
    }

    #[test]
    fn norm_of_one_plus_zeta() {
        // N(1 + zeta_5) = Phi_5(-1) = 1
        let k = f(5);
        let x = CycNum::one(&k) + CycNum::zeta_pow(&k, 1);
        assert_eq!(x.norm(), Rat::from_integer(BigInt::from(1)));
    }
}
