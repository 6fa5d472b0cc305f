use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ArithError, CycNum};

/// The ring `Z[zeta_N][1/pM]` seen from inside `Q(zeta_N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LocalRingSpec {
    p: u64,
    m: u64,
}

impl LocalRingSpec {
    pub fn new(p: u64, m: u64) -> Result<LocalRingSpec, ArithError> {
        if m == 0 || p < 2 || (m > 1 && m.is_multiple_of(p)) {
            return Err(ArithError::BadLocalRing { p, m });
        }
        Ok(LocalRingSpec { p, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn inverted(&self) -> u64 {
        self.p * self.m
    }

    /// True when `d` is a unit of `Z[1/pM]`, i.e. only primes of `pM` divide it.
    pub fn is_unit_int(&self, d: &BigInt) -> bool {
        if d.is_zero() {
            return false;
        }
        let mut d = d.abs();
        let pm = BigInt::from(self.inverted());
        loop {
            let g = d.gcd(&pm);
            if g.is_one() {
                return d.is_one();
            }
            while (&d % &g).is_zero() {
                d /= &g;
            }
        }
    }
}

/// Membership in `Z[zeta_N][1/pM]`: the common denominator involves only primes of `pM`.
pub fn is_pm_integral(x: &CycNum, ring: &LocalRingSpec) -> bool {
    ring.is_unit_int(x.denominator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, CycField};

    #[test]
    fn spec_examples() {
        let k = CycField::get(8);
        let r3 = LocalRingSpec::new(3, 1).unwrap();
        assert!(is_pm_integral(&CycNum::from_rat(&k, &rat(1, 3)), &r3));
        assert!(!is_pm_integral(&CycNum::from_rat(&k, &rat(1, 2)), &r3));
        let x = (CycNum::one(&k) + CycNum::zeta_pow(&k, 1)).scale(&rat(1, 9));
        assert!(is_pm_integral(&x, &r3));
    }

    #[test]
    fn ring_spec_rejects_p_dividing_m() {
        assert!(LocalRingSpec::new(3, 30).is_err());
        assert!(LocalRingSpec::new(7, 30).is_ok());
        let r = LocalRingSpec::new(7, 30).unwrap();
        assert!(r.is_unit_int(&BigInt::from(2 * 2 * 3 * 5 * 49)));
        assert!(!r.is_unit_int(&BigInt::from(11)));
    }
}
