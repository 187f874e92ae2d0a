//! Smith normal form and the cokernel of an integer matrix.

use obinv::algebra::{cokernel, smith_normal_form, IntegerMatrix};

fn main() {
    let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&m);
    println!("diagonal: {:?}", s.diagonal().iter().map(|d| d.to_string()).collect::<Vec<_>>());
    println!("u unimodular: {}, w unimodular: {}", s.u.is_unimodular(), s.w.is_unimodular());
    println!("coker: {}", cokernel(&m));

    let g = cokernel(&IntegerMatrix::from_rows(&[vec![4, 0], vec![0, 0]]));
    let x = g.reduce(&[6.into(), (-1).into()]);
    println!("{x} in {g} has order {:?}", g.element_order(&x));
}
