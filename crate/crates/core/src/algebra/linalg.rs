use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{AlgebraError, IntegerMatrix};

fn to_rational(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect()
}

/// Signature of a symmetric matrix, by congruence over the rationals.
///
/// Zero rows (the radical once everything else is cleared) are dropped; a
/// zero pivot with a nonzero off-diagonal entry is fixed by adding that row
/// and column, which makes the new pivot twice the off-diagonal entry.
pub fn signature(m: &IntegerMatrix) -> Result<i64, AlgebraError> {
    if !m.is_symmetric() {
        return Err(AlgebraError::NonSymmetric);
    }
    let mut a = to_rational(m);
    let mut active: Vec<usize> = (0..m.rows()).collect();
    let mut sig = 0i64;
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let hit = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = hit else { break };
                // row_i += row_j, col_i += col_j
                for t in 0..a.len() {
                    let x = a[j][t].clone();
                    a[i][t] += x;
                }
                for t in 0..a.len() {
                    let x = a[t][j].clone();
                    a[t][i] += x;
                }
                i
            }
        };
        let d = a[p][p].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        active.retain(|&i| i != p);
        let prow = a[p].clone();
        for &i in &active {
            if prow[i].is_zero() {
                continue;
            }
            let f = &prow[i] / &d;
            for &j in &active {
                let x = &f * &prow[j];
                a[i][j] -= x;
            }
            a[i][p] = BigRational::zero();
            a[p][i] = BigRational::zero();
        }
    }
    Ok(sig)
}

/// Reduced row echelon form; returns pivot columns.
fn rref(a: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    let x = &f * &a[row][j];
                    a[i][j] -= x;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

/// Some rational `x` with `m x = v`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_rational(m: &IntegerMatrix, v: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(v.len(), m.rows(), "right-hand side length");
    let n = m.cols();
    let mut a = to_rational(m);
    for (row, x) in a.iter_mut().zip(v) {
        row.push(BigRational::from_integer(x.clone()));
    }
    let pivots = rref(&mut a, n);
    if pivots.last() == Some(&n) || a.iter().skip(pivots.len()).any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

pub fn rank(m: &IntegerMatrix) -> usize {
    let mut a = to_rational(m);
    rref(&mut a, m.cols()).len()
}

/// Basis of the rational kernel, scaled to primitive integer vectors.
pub fn kernel_basis(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols();
    let mut a = to_rational(m);
    let pivots = rref(&mut a, n);
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut x = vec![BigRational::zero(); n];
        x[f] = BigRational::from_integer(1.into());
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = -a[i][f].clone();
        }
        let den = x.iter().fold(BigInt::from(1), |acc, q| num_integer::lcm(acc, q.denom().clone()));
        out.push(x.into_iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect());
    }
    out
}
