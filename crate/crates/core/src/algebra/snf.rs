use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// `d == u * m * w` with `u`, `w` unimodular and `d` diagonal, `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub w: IntegerMatrix,
}

impl SmithForm {
    /// Diagonal entries, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut w = IntegerMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            // smallest |entry| in the trailing block; ties go to the lowest row, then column
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, d, w };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            w.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                w.add_col(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and go again
            let p = d[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&p)));
            if let Some(i) = bad {
                let one = BigInt::from(1);
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            if p.is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    SmithForm { u, d, w }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntegerMatrix) -> Vec<BigInt> {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.w, s.d);
        assert!(s.u.is_unimodular() && s.w.is_unimodular());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for x in &diag {
            assert!(!x.is_negative());
        }
        for pair in diag.windows(2) {
            if !pair[0].is_zero() {
                assert!(pair[1].is_multiple_of(&pair[0]));
            } else {
                assert!(pair[1].is_zero());
            }
        }
        diag
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hyperbolic_block() {
        let m = IntegerMatrix::from_rows(&[vec![0, -1], vec![-1, 0]]);
        assert_eq!(check(&m), ints(&[1, 1]));
    }

    #[test]
    fn identity_is_fixed() {
        assert_eq!(check(&IntegerMatrix::identity(3)), ints(&[1, 1, 1]));
    }

    #[test]
    fn divisibility_is_enforced() {
        let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m), ints(&[1, 6]));
        let m = IntegerMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]);
        assert_eq!(check(&m), ints(&[2, 2, 60]));
    }

    #[test]
    fn small_relation_matrix() {
        let m = IntegerMatrix::from_rows(&[
            vec![-1, 0, 0, 1],
            vec![0, 0, 0, -1],
            vec![0, 0, 0, 0],
            vec![1, -1, 0, 0],
        ]);
        assert_eq!(check(&m), ints(&[1, 1, 1, 0]));
    }

    #[test]
    fn empty_and_rectangular() {
        let s = smith_normal_form(&IntegerMatrix::zeros(0, 3));
        assert!(s.diagonal().is_empty());
        assert_eq!(s.w.rows(), 3);
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 6]]);
        assert_eq!(check(&m), ints(&[2]));
        assert_eq!(check(&m.transpose()), ints(&[2]));
    }
}
