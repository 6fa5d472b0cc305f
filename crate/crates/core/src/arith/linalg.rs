//! Gauss-Jordan elimination over a cyclotomic field.
//!
//! Pivots are the first nonzero entry scanning rows in order, so every result is
//! deterministic.

use std::sync::Arc;

use super::{ArithError, CycField, CycNum};

/// Reduced row echelon form of a matrix together with the row operations that produced it.
#[derive(Debug, Clone)]
pub struct ExactSolver {
    rows: usize,
    cols: usize,
    field: Arc<CycField>,
    /// `transform * original = reduced`.
    transform: Vec<Vec<CycNum>>,
    reduced: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl ExactSolver {
    pub fn new(field: &Arc<CycField>, a: &[Vec<CycNum>]) -> Result<ExactSolver, ArithError> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if a.iter().any(|r| r.len() != cols) {
            return Err(ArithError::Shape("ragged matrix".into()));
        }
        for x in a.iter().flatten() {
            if !Arc::ptr_eq(x.field(), field) {
                return Err(ArithError::ConductorMismatch { left: x.conductor(), right: field.conductor() });
            }
        }
        let mut m: Vec<Vec<CycNum>> = a.to_vec();
        let mut t: Vec<Vec<CycNum>> = (0..rows)
            .map(|i| (0..rows).map(|j| if i == j { CycNum::one(field) } else { CycNum::zero(field) }).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            t.swap(r, pr);
            let inv = m[r][c].inv()?;
            if !inv.is_one() {
                for x in m[r].iter_mut().chain(t[r].iter_mut()) {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
            }
            for i in 0..rows {
                if i == r || m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                let (mr, mi) = pick(&mut m, r, i);
                axpy(mi, &f, mr);
                let (tr, ti) = pick(&mut t, r, i);
                axpy(ti, &f, tr);
            }
            pivots.push(c);
            r += 1;
        }
        Ok(ExactSolver { rows, cols, field: Arc::clone(field), transform: t, reduced: m, pivots })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced(&self) -> &[Vec<CycNum>] {
        &self.reduced
    }

    /// Solves `A x = b` for the matrix this solver was built from.
    pub fn solve(&self, b: &[CycNum]) -> Result<Vec<CycNum>, ArithError> {
        if b.len() != self.rows {
            return Err(ArithError::Shape(format!("rhs length {} for {} rows", b.len(), self.rows)));
        }
        let tb: Vec<CycNum> = self.transform.iter().map(|row| dot(&self.field, row, b)).collect();
        if tb[self.rank()..].iter().any(|x| !x.is_zero()) {
            return Err(ArithError::Inconsistent);
        }
        if self.rank() < self.cols {
            return Err(ArithError::AmbiguousSolution { dim: self.cols - self.rank() });
        }
        let mut x = vec![CycNum::zero(&self.field); self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = tb[i].clone();
        }
        Ok(x)
    }

    /// A particular solution with free variables set to zero, when the system is consistent.
    pub fn solve_any(&self, b: &[CycNum]) -> Result<Vec<CycNum>, ArithError> {
        if b.len() != self.rows {
            return Err(ArithError::Shape(format!("rhs length {} for {} rows", b.len(), self.rows)));
        }
        let tb: Vec<CycNum> = self.transform.iter().map(|row| dot(&self.field, row, b)).collect();
        if tb[self.rank()..].iter().any(|x| !x.is_zero()) {
            return Err(ArithError::Inconsistent);
        }
        let mut x = vec![CycNum::zero(&self.field); self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = tb[i].clone();
        }
        Ok(x)
    }

    /// Basis of the null space `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<CycNum>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![CycNum::zero(&self.field); self.cols];
                v[fc] = CycNum::one(&self.field);
                for (i, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = -&self.reduced[i][fc];
                }
                v
            })
            .collect()
    }
}

fn pick<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    if a < b {
        let (l, r) = v.split_at_mut(b);
        (&l[a], &mut r[0])
    } else {
        let (l, r) = v.split_at_mut(a);
        (&r[0], &mut l[b])
    }
}

/// `dst -= f * src`
fn axpy(dst: &mut [CycNum], f: &CycNum, src: &[CycNum]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d - &(f * s);
        }
    }
}

fn dot(field: &Arc<CycField>, a: &[CycNum], b: &[CycNum]) -> CycNum {
    let mut acc = CycNum::zero(field);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x * y;
        }
    }
    acc
}

/// Unique solution of `A x = b`.
pub fn solve_exact(field: &Arc<CycField>, a: &[Vec<CycNum>], b: &[CycNum]) -> Result<Vec<CycNum>, ArithError> {
    ExactSolver::new(field, a)?.solve(b)
}

pub fn rank(field: &Arc<CycField>, a: &[Vec<CycNum>]) -> Result<usize, ArithError> {
    Ok(ExactSolver::new(field, a)?.rank())
}

pub fn determinant(field: &Arc<CycField>, a: &[Vec<CycNum>]) -> Result<CycNum, ArithError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(ArithError::Shape("determinant of a non-square matrix".into()));
    }
    let mut m = a.to_vec();
    let mut det = CycNum::one(field);
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Ok(CycNum::zero(field));
        };
        if pr != c {
            m.swap(pr, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv()?;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let (mc, mi) = pick(&mut m, c, i);
            axpy(mi, &f, mc);
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(k: &Arc<CycField>, rows: &[&[i64]]) -> Vec<Vec<CycNum>> {
        rows.iter().map(|r| r.iter().map(|&v| CycNum::from_int(k, v)).collect()).collect()
    }

    #[test]
    fn identity_and_small_system() {
        let k = CycField::get(12);
        let id = ints(&k, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = vec![CycNum::zeta_pow(&k, 1), CycNum::from_ratio(&k, 2, 3), CycNum::zero(&k)];
        assert_eq!(solve_exact(&k, &id, &b).unwrap(), b);
        let a = ints(&k, &[&[1, 1], &[1, -1]]);
        let x = solve_exact(&k, &a, &[CycNum::from_int(&k, 2), CycNum::zero(&k)]).unwrap();
        assert_eq!(x, vec![CycNum::one(&k), CycNum::one(&k)]);
    }

    #[test]
    fn inconsistent_and_ambiguous() {
        let k = CycField::get(1);
        let a = ints(&k, &[&[1, 1], &[2, 2]]);
        let r = solve_exact(&k, &a, &[CycNum::from_int(&k, 1), CycNum::from_int(&k, 3)]);
        assert_eq!(r, Err(ArithError::Inconsistent));
        let r = solve_exact(&k, &a, &[CycNum::from_int(&k, 1), CycNum::from_int(&k, 2)]);
        assert_eq!(r, Err(ArithError::AmbiguousSolution { dim: 1 }));
        let s = ExactSolver::new(&k, &a).unwrap();
        let ker = s.kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(&ker[0][0] + &ker[0][1], CycNum::zero(&k));
    }

    #[test]
    fn determinant_of_vandermonde() {
        let k = CycField::get(1);
        let a = ints(&k, &[&[1, 1, 1], &[1, 2, 3], &[1, 4, 9]]);
        assert_eq!(determinant(&k, &a).unwrap(), CycNum::from_int(&k, 2));
        assert_eq!(rank(&k, &a).unwrap(), 3);
    }
}
