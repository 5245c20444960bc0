//! Exact Gaussian elimination over `Q` and `Z/p`.
//!
//! Pivot choice is deterministic: for each column, the first row (in row
//! order) at or below the current pivot row with a nonzero entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Elem, Ring};
use crate::error::{Result, WittError};

/// Reduce `m` to row echelon form in place; returns the pivot columns.
fn echelon(ring: &Ring, m: &mut [Vec<Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !ring.is_zero(&m[r][col])) else { continue };
        m.swap(row, p);
        let inv = ring.inverse(&m[row][col]).expect("nonzero entries of a field are units");
        for c in col..m[row].len() {
            m[row][c] = ring.mul(&m[row][c], &inv);
        }
        for r in 0..m.len() {
            if r != row && !ring.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for c in col..m[r].len() {
                    let t = ring.mul(&factor, &m[row][c]);
                    m[r][c] = ring.sub(&m[r][c], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a matrix over a field.
pub fn rank(ring: &Ring, matrix: &[Vec<Elem>]) -> Result<usize> {
    ring.require_field()?;
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m = matrix.to_vec();
    Ok(echelon(ring, &mut m, cols).len())
}

/// Solve `matrix * v = rhs` over a field. Free variables are set to zero.
pub fn solve_linear(ring: &Ring, matrix: &[Vec<Elem>], rhs: &[Elem]) -> Result<Vec<Elem>> {
    ring.require_field()?;
    if matrix.len() != rhs.len() {
        return Err(WittError::DimensionMismatch { expected: matrix.len(), got: rhs.len() });
    }
    let cols = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Elem>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = echelon(ring, &mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return Err(WittError::NoSolution);
    }
    let mut v = vec![ring.zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        v[col] = aug[row][cols].clone();
    }
    Ok(v)
}

/// Determinant of a square integer matrix, computed by elimination over `Q`.
pub fn determinant_over_q(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    let mut m: Vec<Vec<BigRational>> = matrix
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = m[r][col].clone() / m[col][col].clone();
                let (above, below) = m.split_at_mut(r);
                for (x, p) in below[0][col..].iter_mut().zip(&above[col][col..]) {
                    *x -= f.clone() * p.clone();
                }
            }
        }
    }
    det.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ring: &Ring, rows: &[&[i64]]) -> Vec<Vec<Elem>> {
        rows.iter().map(|r| r.iter().map(|&x| ring.from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_examples() {
        let q = Ring::rationals();
        assert_eq!(rank(&q, &mat(&q, &[&[0, 1], &[1, 2]])).unwrap(), 2);
        assert_eq!(rank(&q, &mat(&q, &[&[1, 2], &[2, 4]])).unwrap(), 1);
        assert!(matches!(rank(&Ring::integers(), &[]), Err(WittError::NotAField(_))));
        assert!(rank(&Ring::modular(4).unwrap(), &[]).is_err());
    }

    #[test]
    fn solve_examples() {
        let q = Ring::rationals();
        let v = solve_linear(&q, &mat(&q, &[&[1]]), &[q.from_i64(5)]).unwrap();
        assert_eq!(v, vec![q.from_i64(5)]);

        let z3 = Ring::modular(3).unwrap();
        let a = mat(&z3, &[&[1, 1], &[1, 2]]);
        let v = solve_linear(&z3, &a, &[z3.from_i64(0), z3.from_i64(1)]).unwrap();
        assert_eq!(v, vec![z3.from_i64(2), z3.from_i64(1)]);

        let singular = mat(&q, &[&[1, 1], &[1, 1]]);
        assert_eq!(solve_linear(&q, &singular, &[q.from_i64(0), q.from_i64(1)]), Err(WittError::NoSolution));
    }

    #[test]
    fn determinants() {
        let d = |rows: &[&[i64]]| {
            determinant_over_q(&rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>())
        };
        assert_eq!(d(&[&[0, 1], &[1, 2]]), BigInt::from(-1));
        assert_eq!(d(&[&[2, 0, 0], &[0, 3, 0], &[1, 1, 1]]), BigInt::from(6));
        assert_eq!(d(&[&[1, 2], &[2, 4]]), BigInt::from(0));
    }
}
