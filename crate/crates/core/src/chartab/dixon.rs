//! Dixon's method: simultaneous eigenvectors of the class matrices over `F_P`, then a
//! lift of each character value from its eigenvalue multiplicities.

use crate::arith::RootVec;
use crate::groups::{ConjClassData, GroupInstance};

use super::ChartabError;

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Smallest prime `P = 1 (mod e)` with `P^2 > 4 |G|`.
pub(crate) fn dixon_prime(exponent: u64, group_order: u64) -> u64 {
    (1..)
        .map(|t| 1 + t * exponent)
        .find(|&p| p * p > 4 * group_order && is_prime(p) && !group_order.is_multiple_of(p))
        .expect("Dirichlet")
}

pub(crate) fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1)).expect("cyclic")
}

/// Rows brought to reduced echelon form in place; returns the pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + p - f * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn nullspace(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.first().map_or(0, Vec::len);
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows, p);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[i][fc]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial via reduction to Hessenberg form, lowest coefficient first.
fn charpoly(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], p);
        for j in m + 1..n {
            if h[j][m - 1] == 0 {
                continue;
            }
            let u = h[j][m - 1] * inv % p;
            for c in 0..n {
                h[j][c] = (h[j][c] + p - u * h[m][c] % p) % p;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[j]) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - h[m][m] * c % p) % p;
        }
        let mut t = 1u64;
        for i in 1..=m {
            t = t * h[m - i + 1][m - i] % p;
            let f = t * h[m - i][m] % p;
            if f != 0 {
                for (k, &c) in polys[m - i].iter().enumerate() {
                    next[k] = (next[k] + p - f * c % p) % p;
                }
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
        .collect()
}

pub(crate) struct DixonOutput {
    pub degrees: Vec<u64>,
    pub values: Vec<Vec<RootVec>>,
}

/// Irreducible characters as root-of-unity sums with modulus `modulus` (a multiple of the exponent).
pub(crate) fn dixon(g: &GroupInstance, cc: &ConjClassData, modulus: u32) -> Result<DixonOutput, ChartabError> {
    let k = cc.len();
    let order = g.order() as u64;
    let exponent = g.exponent() as u64;
    if !(modulus as u64).is_multiple_of(exponent) {
        return Err(ChartabError::TableComputationFailed(format!("exponent {exponent} does not divide {modulus}")));
    }
    let p = dixon_prime(exponent, order);
    // c[i][j][l] = #{x in C_i : x^{-1} z_l in C_j}
    let mut c = vec![vec![vec![0u64; k]; k]; k];
    for l in 0..k {
        let z = cc.rep(l);
        for x in g.elements() {
            let y = g.mul(g.inv(x), z);
            c[cc.class_of(x)][cc.class_of(y)][l] += 1;
        }
    }
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()];
    for i in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            let d = basis.len();
            if d == 1 {
                next.push(basis);
                continue;
            }
            let mut b = basis.clone();
            let pivots = rref(&mut b, p);
            let images: Vec<Vec<u64>> = b
                .iter()
                .map(|v| (0..k).map(|j| (0..k).fold(0u64, |acc, l| (acc + c[i][j][l] % p * v[l]) % p)).collect())
                .collect();
            // x[r][a] = (M_i v_a)[pivot_r]
            let x: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|a| images[a][pivots[r]]).collect()).collect();
            let eig = roots(&charpoly(x.clone(), p), p);
            if eig.len() <= 1 {
                next.push(b);
                continue;
            }
            for lam in eig {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| (0..d).map(|a| if r == a { (x[r][a] + p - lam) % p } else { x[r][a] }).collect())
                    .collect();
                let mut sub: Vec<Vec<u64>> = nullspace(&shifted, p)
                    .iter()
                    .map(|y| (0..k).map(|j| (0..d).fold(0u64, |acc, a| (acc + y[a] * b[a][j]) % p)).collect())
                    .collect();
                rref(&mut sub, p);
                next.push(sub);
            }
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|s| s.len() != 1) {
        return Err(ChartabError::TableComputationFailed("class matrices did not separate characters".into()));
    }
    let z = pow_mod(primitive_root(p), (p - 1) / exponent, p);
    let sizes: Vec<u64> = cc.sizes().iter().map(|&s| s as u64).collect();
    let power: Vec<Vec<usize>> = (0..k)
        .map(|j| (0..cc.rep_order(j) as i64).map(|e| cc.power_class(g, j, e)).collect())
        .collect();
    let mut degrees = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for space in spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(ChartabError::TableComputationFailed("eigenvector vanishes at the identity".into()));
        }
        let n0 = inv_mod(v[0], p);
        let omega: Vec<u64> = v.iter().map(|&x| x * n0 % p).collect();
        let s = (0..k).fold(0u64, |acc, j| {
            (acc + omega[j] * omega[cc.inverse_class(j)] % p * inv_mod(sizes[j] % p, p)) % p
        });
        let target = order % p * inv_mod(s, p) % p;
        let d = (1..)
            .take_while(|d: &u64| d * d <= order)
            .find(|&d| d * d % p == target && order.is_multiple_of(d))
            .ok_or_else(|| ChartabError::TableComputationFailed("no admissible degree".into()))?;
        let chi: Vec<u64> = (0..k).map(|j| d * omega[j] % p * inv_mod(sizes[j] % p, p) % p).collect();
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let o = cc.rep_order(j) as u64;
            let zo = pow_mod(z, exponent / o, p);
            let o_inv = inv_mod(o % p, p);
            let mut terms = Vec::new();
            for l in 0..o {
                let mut acc = 0u64;
                for (e, &pc) in power[j].iter().enumerate() {
                    acc = (acc + chi[pc] * pow_mod(zo, (p - 1 - l * e as u64 % (p - 1)) % (p - 1), p)) % p;
                }
                let m = acc * o_inv % p;
                if m > d {
                    return Err(ChartabError::TableComputationFailed(format!("eigenvalue multiplicity {m} exceeds degree {d}")));
                }
                if m > 0 {
                    terms.push(((l * modulus as u64 / o) as i64, m as i64));
                }
            }
            row.push(RootVec::from_terms(modulus, terms));
        }
        degrees.push(d);
        values.push(row);
    }
    Ok(DixonOutput { degrees, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion() {
        let p = 101;
        // companion matrix of x^3 - 2x^2 + 3x - 5
        let m = vec![vec![0, 0, 5], vec![1, 0, p - 3], vec![0, 1, 2]];
        assert_eq!(charpoly(m, p), vec![p - 5, 3, p - 2, 1]);
    }

    #[test]
    fn prime_choice() {
        let p = dixon_prime(24, 48);
        assert_eq!(p % 24, 1);
        assert!(p * p > 4 * 48);
        assert!(is_prime(p));
    }
}
