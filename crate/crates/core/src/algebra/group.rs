use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{smith_normal_form, IntegerMatrix};

/// Finitely generated abelian group `Z^n / rowspace(M)` together with the
/// change of basis that puts an integer vector into canonical coordinates.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
    // columns of `w` paired with the diagonal: generator j of Z^n maps to row j of `w`
    w: IntegerMatrix,
    torsion_cols: Vec<usize>,
    free_cols: Vec<usize>,
}

/// Element of an `AbelianGroup`: free coordinates first, then residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

pub fn cokernel(m: &IntegerMatrix) -> AbelianGroup {
    let s = smith_normal_form(m);
    let diag = s.diagonal();
    let n = m.cols();
    let mut torsion_cols = Vec::new();
    let mut invariant_factors = Vec::new();
    let mut free_cols = Vec::new();
    for j in 0..n {
        match diag.get(j) {
            Some(d) if d.is_zero() => free_cols.push(j),
            Some(d) if d.is_one() => {}
            Some(d) => {
                torsion_cols.push(j);
                invariant_factors.push(d.clone());
            }
            None => free_cols.push(j),
        }
    }
    AbelianGroup { free_rank: free_cols.len(), invariant_factors, w: s.w, torsion_cols, free_cols }
}

impl AbelianGroup {
    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Number of generators of the presentation this group came from.
    pub fn ambient_rank(&self) -> usize {
        self.w.rows()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Same isomorphism type.
    pub fn same_type(&self, other: &AbelianGroup) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }

    /// Canonical coordinates of an integer vector of the presentation.
    pub fn reduce(&self, v: &[BigInt]) -> GroupElement {
        assert_eq!(v.len(), self.w.rows(), "vector length does not match the presentation");
        // y = v W, so relations become the rows of D
        let y: Vec<BigInt> = (0..self.w.cols())
            .map(|j| v.iter().enumerate().map(|(i, x)| x * &self.w[(i, j)]).sum())
            .collect();
        GroupElement {
            free: self.free_cols.iter().map(|&j| y[j].clone()).collect(),
            torsion: self
                .torsion_cols
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&j, d)| y[j].mod_floor(d))
                .collect(),
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.invariant_factors.len()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.clone().combine(b, &self.invariant_factors)
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| x * k).collect(),
            torsion: a.torsion.iter().zip(&self.invariant_factors).map(|(x, d)| (x * k).mod_floor(d)).collect(),
        }
    }

    /// Order of an element, `None` for elements of infinite order.
    pub fn element_order(&self, a: &GroupElement) -> Option<BigInt> {
        if a.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(a.torsion.iter().zip(&self.invariant_factors).fold(BigInt::one(), |acc, (x, d)| {
            let o = d / x.gcd(d);
            acc.lcm(&o)
        }))
    }
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    pub fn is_torsion(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }

    fn combine(mut self, b: &GroupElement, ds: &[BigInt]) -> GroupElement {
        for (x, y) in self.free.iter_mut().zip(&b.free) {
            *x += y;
        }
        for ((x, y), d) in self.torsion.iter_mut().zip(&b.torsion).zip(ds) {
            *x = (&*x + y).mod_floor(d);
        }
        self
    }
}

/// Generators are named g1, g2, ...: free ones first, then one per invariant factor.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, x) in self.free.iter().chain(&self.torsion).enumerate() {
            if x.is_zero() {
                continue;
            }
            let g = format!("g{}", i + 1);
            terms.push(if x.is_one() {
                g
            } else if *x == BigInt::from(-1) {
                format!("-{g}")
            } else {
                format!("{x}*{g}")
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbelianGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let factors: Vec<String> = self.invariant_factors.iter().map(ToString::to_string).collect();
        st.serialize_field("invariant_factors", &factors)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}
