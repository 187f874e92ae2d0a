//! Contact (+-1)-surgery diagrams and the invariants computed from them.
//!
//! An open book becomes a diagram by pushing each twist curve onto its own
//! page of the trivial open book and trading every band for a (+1)-surgered
//! Legendrian unknot. Everything downstream only sees the linking matrix,
//! the rotation numbers and the count of (+1) components.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{bilinear, cokernel, signature, solve_rational, AbelianGroup, AlgebraError, GroupElement, IntegerMatrix};
use crate::mapping::OpenBook;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KirbyError {
    #[error("coefficient {0} is not of the form 1/m")]
    UnsupportedCoefficient(String),
    #[error("indicator is not characteristic for the linking matrix")]
    NotCharacteristic,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    PageCurve,
    TradedUnknot,
    Legendrian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryComponent {
    pub name: String,
    pub kind: ComponentKind,
    /// Contact framing relative to the Seifert framing.
    pub tb: BigInt,
    pub rotation: BigInt,
    pub coefficient: BigRational,
}

impl SurgeryComponent {
    pub fn legendrian(name: &str, tb: i64, rotation: i64, coefficient: BigRational) -> Self {
        SurgeryComponent { name: name.into(), kind: ComponentKind::Legendrian, tb: tb.into(), rotation: rotation.into(), coefficient }
    }

    /// Smooth framing, defined once the coefficient is an integer.
    pub fn framing(&self) -> Option<BigInt> {
        self.coefficient.is_integer().then(|| &self.tb + self.coefficient.to_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContactSurgeryDiagram {
    pub components: Vec<SurgeryComponent>,
    linking: Vec<Vec<BigInt>>,
}

pub fn coefficient(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

impl ContactSurgeryDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn push(&mut self, c: SurgeryComponent) -> usize {
        for row in &mut self.linking {
            row.push(BigInt::zero());
        }
        self.components.push(c);
        self.linking.push(vec![BigInt::zero(); self.components.len()]);
        self.components.len() - 1
    }

    pub fn set_link(&mut self, i: usize, j: usize, v: BigInt) {
        assert_ne!(i, j, "self-linking is the framing");
        self.linking[i][j] = v.clone();
        self.linking[j][i] = v;
    }

    pub fn link(&self, i: usize, j: usize) -> &BigInt {
        &self.linking[i][j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    /// Number of (+1) components.
    pub fn q(&self) -> usize {
        self.components.iter().filter(|c| c.coefficient.is_one()).count()
    }

    pub fn is_expanded(&self) -> bool {
        self.components.iter().all(|c| c.coefficient.abs().is_one())
    }
}

/// Replaces each `1/m` component by `|m|` Legendrian push-offs with coefficient `sign(m)`.
pub fn expand_rational(d: &ContactSurgeryDiagram) -> Result<ContactSurgeryDiagram, KirbyError> {
    let mut copies: Vec<Vec<usize>> = Vec::new();
    let mut out = ContactSurgeryDiagram::new();
    for c in &d.components {
        let q = &c.coefficient;
        if q.is_zero() || !q.numer().abs().is_one() {
            return Err(KirbyError::UnsupportedCoefficient(q.to_string()));
        }
        let m = q.denom() * q.numer();
        let n = m.abs().to_usize().ok_or_else(|| KirbyError::UnsupportedCoefficient(q.to_string()))?;
        let sign = BigRational::from_integer(m.signum());
        let mut ids = Vec::new();
        for t in 0..n {
            let name = if n == 1 { c.name.clone() } else { format!("{}#{}", c.name, t + 1) };
            ids.push(out.push(SurgeryComponent { name, coefficient: sign.clone(), ..c.clone() }));
        }
        for (a, &x) in ids.iter().enumerate() {
            for &y in &ids[a + 1..] {
                out.set_link(x, y, c.tb.clone());
            }
        }
        copies.push(ids);
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            for &x in &copies[i] {
                for &y in &copies[j] {
                    out.set_link(x, y, d.linking[i][j].clone());
                }
            }
        }
    }
    Ok(out)
}

/// Surgery diagram of an open book: twist curves in word order, then one
/// traded unknot per band. Rotation numbers are blackboard windings.
pub fn diagram_from_openbook(ob: &OpenBook) -> ContactSurgeryDiagram {
    let page = ob.page();
    let v = page.seifert_matrix();
    let letters = &ob.word().letters;
    let mut d = ContactSurgeryDiagram::new();
    for (i, l) in letters.iter().enumerate() {
        let h = &l.curve.homology;
        d.push(SurgeryComponent {
            name: format!("{}{}@{}", if l.sign > 0 { '+' } else { '-' }, l.curve.name, i + 1),
            kind: ComponentKind::PageCurve,
            tb: bilinear(h, v, h),
            rotation: page.blackboard_winding(&l.curve),
            coefficient: BigRational::from_integer(BigInt::from(-l.sign)),
        });
    }
    for b in 0..page.band_count() {
        d.push(SurgeryComponent {
            name: format!("U{}", b + 1),
            kind: ComponentKind::TradedUnknot,
            tb: BigInt::from(-1),
            rotation: BigInt::zero(),
            coefficient: BigRational::one(),
        });
    }
    let n = letters.len();
    for i in 0..n {
        for j in i + 1..n {
            // the earlier page sits below
            d.set_link(i, j, bilinear(&letters[i].curve.homology, v, &letters[j].curve.homology));
        }
        for b in 0..page.band_count() {
            d.set_link(i, n + b, letters[i].curve.homology[b].clone());
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingPresentation {
    pub matrix: IntegerMatrix,
    pub labels: Vec<String>,
    pub rotation: Vec<BigInt>,
    pub q: usize,
}

impl LinkingPresentation {
    pub fn from_diagram(d: &ContactSurgeryDiagram) -> Result<Self, KirbyError> {
        let d = if d.is_expanded() { d.clone() } else { expand_rational(d)? };
        let n = d.len();
        let mut matrix = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = if i == j {
                    d.components[i].framing().expect("expanded coefficients are integral")
                } else {
                    d.linking[i][j].clone()
                };
            }
        }
        Ok(LinkingPresentation {
            matrix,
            labels: d.components.iter().map(|c| c.name.clone()).collect(),
            rotation: d.components.iter().map(|c| c.rotation.clone()).collect(),
            q: d.q(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn homology(&self) -> AbelianGroup {
        cokernel(&self.matrix)
    }
}

#[derive(Debug, Clone)]
pub struct EulerClass {
    pub group: AbelianGroup,
    pub element: GroupElement,
    pub torsion: bool,
}

/// Class of the rotation vector in the cokernel of the linking matrix.
pub fn euler_class(lp: &LinkingPresentation) -> EulerClass {
    let group = lp.homology();
    let element = group.reduce(&lp.rotation);
    let torsion = element.is_torsion();
    EulerClass { group, element, torsion }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum D3 {
    Defined(BigRational),
    Undefined,
}

impl D3 {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            D3::Defined(q) => Some(q),
            D3::Undefined => None,
        }
    }
}

impl std::fmt::Display for D3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            D3::Defined(q) => write!(f, "{q}"),
            D3::Undefined => write!(f, "undefined (non-torsion e)"),
        }
    }
}

/// `(c^2 - 3 sigma - 2 chi) / 4 + q`, with `chi = 1 + #components`.
pub fn d3(lp: &LinkingPresentation) -> Result<D3, KirbyError> {
    let torsion = euler_class(lp).torsion;
    let sol = solve_rational(&lp.matrix, &lp.rotation);
    let x = match (torsion, sol) {
        (false, _) => return Ok(D3::Undefined),
        (true, Some(x)) => x,
        (true, None) => {
            return Err(KirbyError::InternalInconsistency("torsion Euler class without a rational solution".into()))
        }
    };
    let c2: BigRational = x.iter().zip(&lp.rotation).map(|(a, b)| a * BigRational::from_integer(b.clone())).sum();
    let sigma = signature(&lp.matrix)?;
    let chi = 1 + lp.len() as i64;
    let r = |n: i64| BigRational::from_integer(n.into());
    Ok(D3::Defined((c2 - r(3 * sigma) - r(2 * chi)) / r(4) + r(lp.q as i64)))
}

/// Indicator vector of a characteristic sublink.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpinStructure(pub Vec<u8>);

impl std::fmt::Display for SpinStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = self.0.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
        write!(f, "{}", if s.is_empty() { "-" } else { &s })
    }
}

fn parity(x: &BigInt) -> u8 {
    if x.is_odd() {
        1
    } else {
        0
    }
}

/// All solutions over F2 of `a s = b`.
fn solve_mod2(a: &[Vec<u8>], b: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut rows: Vec<Vec<u8>> = a.iter().zip(b).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
    let mut pivots = Vec::new();
    let mut at = 0;
    for c in 0..n {
        let Some(p) = (at..rows.len()).find(|&i| rows[i][c] == 1) else { continue };
        rows.swap(at, p);
        for i in 0..rows.len() {
            if i != at && rows[i][c] == 1 {
                let src = rows[at].clone();
                for (x, y) in rows[i].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        at += 1;
    }
    if rows[at..].iter().any(|r| r[n] == 1) {
        return Vec::new();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut s = vec![0u8; n];
        for (t, &f) in free.iter().enumerate() {
            s[f] = ((mask >> t) & 1) as u8;
        }
        for (i, &c) in pivots.iter().enumerate() {
            let mut x = rows[i][n];
            for &f in &free {
                x ^= rows[i][f] & s[f];
            }
            s[c] = x;
        }
        out.push(s);
    }
    out.sort();
    out
}

fn mod2_matrix(m: &IntegerMatrix) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(parity).collect()).collect()
}

pub fn spin_structures(lp: &LinkingPresentation) -> Vec<SpinStructure> {
    let n = lp.len();
    let a = mod2_matrix(&lp.matrix);
    let b: Vec<u8> = (0..n).map(|i| parity(&lp.matrix[(i, i)])).collect();
    solve_mod2(&a, &b, n).into_iter().map(SpinStructure).collect()
}

pub fn is_characteristic(lp: &LinkingPresentation, s: &SpinStructure) -> bool {
    s.0.len() == lp.len()
        && (0..lp.len()).all(|i| {
            let sum: u8 = (0..lp.len()).map(|j| parity(&lp.matrix[(i, j)]) & s.0[j]).fold(0, |a, b| a ^ b);
            sum == parity(&lp.matrix[(i, i)])
        })
}

/// Spin structures that extend over a 0-framed 2-handle along a meridian of `component`.
pub fn designated_spin_structures(lp: &LinkingPresentation, component: usize) -> Vec<SpinStructure> {
    let n = lp.len();
    let mut a = mod2_matrix(&lp.matrix);
    let mut b: Vec<u8> = (0..n).map(|i| parity(&lp.matrix[(i, i)])).collect();
    for (i, row) in a.iter_mut().enumerate() {
        row.push(u8::from(i == component));
    }
    let mut probe = vec![0u8; n + 1];
    probe[component] = 1;
    a.push(probe);
    b.push(0);
    let mut found: Vec<SpinStructure> = solve_mod2(&a, &b, n + 1)
        .into_iter()
        .map(|mut s| {
            s.pop();
            SpinStructure(s)
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaValue {
    Conclusive(GroupElement),
    /// Components where `r + lk(K, L_s)` is odd.
    Inconclusive { odd_components: Vec<usize> },
}

/// Class of `v_i = (r_i + lk(K_i, L_s)) / 2` in the cokernel of the linking matrix.
pub fn gamma(lp: &LinkingPresentation, s: &SpinStructure) -> Result<GammaValue, KirbyError> {
    if !is_characteristic(lp, s) {
        return Err(KirbyError::NotCharacteristic);
    }
    let sv: Vec<BigInt> = s.0.iter().map(|&b| BigInt::from(b)).collect();
    let lk = lp.matrix.mul_vec(&sv);
    let twice: Vec<BigInt> = lp.rotation.iter().zip(&lk).map(|(r, l)| r + l).collect();
    let odd: Vec<usize> = (0..twice.len()).filter(|&i| twice[i].is_odd()).collect();
    if !odd.is_empty() {
        return Ok(GammaValue::Inconclusive { odd_components: odd });
    }
    let v: Vec<BigInt> = twice.iter().map(|x| x / 2).collect();
    Ok(GammaValue::Conclusive(lp.homology().reduce(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::standard_page;

    fn lp_of(g: usize, r: usize, w: &str) -> LinkingPresentation {
        let ob = OpenBook::from_names(standard_page(g, r).unwrap(), w).unwrap();
        LinkingPresentation::from_diagram(&diagram_from_openbook(&ob)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        coefficient(n, d)
    }

    #[test]
    fn annulus_matrices() {
        let lp = lp_of(0, 2, "-c -c -c");
        let expect = IntegerMatrix::from_rows(&[vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1], vec![1, 1, 1, 0]]);
        assert_eq!(lp.matrix, expect);
        assert_eq!(lp.q, 4);
        let lp = lp_of(0, 2, "+c +c");
        assert_eq!(lp.matrix, IntegerMatrix::from_rows(&[vec![-1, 0, 1], vec![0, -1, 1], vec![1, 1, 0]]));
        assert_eq!(lp.q, 1);
        assert_eq!(lp.homology().to_string(), "Z/2");
    }

    #[test]
    fn overtwisted_lens_d3() {
        for p in 1..9i64 {
            let lp = lp_of(0, 2, &"-c ".repeat(p as usize));
            assert!(euler_class(&lp).element.is_zero());
            assert_eq!(d3(&lp).unwrap(), D3::Defined(rat(3 - p, 4)));
        }
    }

    #[test]
    fn empty_disk_is_standard() {
        let lp = lp_of(0, 1, "");
        assert!(lp.is_empty());
        assert_eq!(d3(&lp).unwrap(), D3::Defined(rat(-1, 2)));
        assert_eq!(spin_structures(&lp).len(), 1);
    }

    #[test]
    fn push_off_expansion() {
        let mut d = ContactSurgeryDiagram::new();
        d.push(SurgeryComponent::legendrian("K", -1, 0, rat(1, 2)));
        let e = expand_rational(&d).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.q(), 2);
        assert_eq!(e.link(0, 1), &BigInt::from(-1));

        let mut d = ContactSurgeryDiagram::new();
        d.push(SurgeryComponent::legendrian("K", -1, 0, rat(-1, 3)));
        let e = expand_rational(&d).unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.components.iter().all(|c| c.coefficient == rat(-1, 1)));

        let mut d = ContactSurgeryDiagram::new();
        d.push(SurgeryComponent::legendrian("K", -1, 0, rat(1, 1)));
        assert_eq!(expand_rational(&d).unwrap(), d);

        let mut d = ContactSurgeryDiagram::new();
        d.push(SurgeryComponent::legendrian("K", -1, 0, rat(2, 3)));
        assert!(matches!(expand_rational(&d), Err(KirbyError::UnsupportedCoefficient(_))));
    }

    #[test]
    fn spin_counts() {
        assert_eq!(spin_structures(&lp_of(0, 2, "-c -c")).len(), 2);
        assert_eq!(spin_structures(&lp_of(0, 2, "-c -c -c")).len(), 1);
        assert_eq!(spin_structures(&lp_of(1, 1, &"+b1 +a1 ".repeat(5))).len(), 1);
    }

    #[test]
    fn gamma_doubles_to_euler() {
        for w in ["-c -c", "-c -c -c -c", "+c +c +c +c", "-c -c -c -c -c -c"] {
            let lp = lp_of(0, 2, w);
            let e = euler_class(&lp);
            for s in spin_structures(&lp) {
                match gamma(&lp, &s).unwrap() {
                    GammaValue::Conclusive(g) => assert_eq!(e.group.scale(&g, &2.into()), e.element),
                    GammaValue::Inconclusive { .. } => panic!("inconclusive on {w}"),
                }
            }
        }
        let lp = lp_of(0, 2, "-c -c");
        assert_eq!(gamma(&lp, &SpinStructure(vec![1, 0, 0])), Err(KirbyError::NotCharacteristic));
    }

    #[test]
    fn designated_gamma_is_half_p() {
        for p in [2usize, 4, 6] {
            let lp = lp_of(0, 2, &"-c ".repeat(p));
            let des = designated_spin_structures(&lp, p);
            assert_eq!(des.len(), 1);
            let GammaValue::Conclusive(g) = gamma(&lp, &des[0]).unwrap() else { panic!() };
            let group = lp.homology();
            assert_eq!(group.element_order(&g), Some(BigInt::from(2)));
        }
    }

    fn d3_of(ob: &OpenBook) -> D3 {
        d3(&LinkingPresentation::from_diagram(&diagram_from_openbook(ob)).unwrap()).unwrap()
    }

    #[test]
    fn sphere_table() {
        use crate::manifold::mmnk;
        let cases = [
            ((-1, 1, 0), rat(1, 2)),
            ((-1, -1, 0), rat(3, 2)),
            ((0, 1, 1), rat(-1, 2)),
            ((3, 2, -1), rat(3, 2)),
            ((-2, -3, 1), rat(-1, 2)),
        ];
        for ((m, n, k), want) in cases {
            assert_eq!(d3_of(&mmnk(m, n, k)), D3::Defined(want), "({m},{n},{k})");
        }
        for j in -2..=2 {
            assert_eq!(d3_of(&mmnk(1, j, -1)), D3::Defined(rat(1, 2)));
        }
    }

    #[test]
    fn elliptic_example() {
        let lp = lp_of(1, 2, &format!("{}+gamma +gamma +c +c", "+a1 +b1 ".repeat(5)));
        let e = euler_class(&lp);
        assert_eq!(e.group.to_string(), "Z");
        assert!(!e.torsion);
        assert_eq!(e.element.free.len(), 1);
        assert_eq!(e.element.free[0].abs(), BigInt::from(2));
        assert_eq!(d3(&lp).unwrap(), D3::Undefined);
    }

    #[test]
    fn push_off_pair_matches_annulus() {
        let mut xi1 = ContactSurgeryDiagram::new();
        xi1.push(SurgeryComponent::legendrian("K", -1, 0, rat(1, 1)));
        xi1.push(SurgeryComponent::legendrian("K'", -1, 0, rat(1, 1)));
        xi1.set_link(0, 1, BigInt::from(-1));
        let mut xi2 = ContactSurgeryDiagram::new();
        xi2.push(SurgeryComponent::legendrian("K", -1, 0, rat(1, 2)));
        for d in [xi1, xi2] {
            let lp = LinkingPresentation::from_diagram(&d).unwrap();
            assert!(lp.homology().is_trivial());
            assert_eq!(d3(&lp).unwrap(), D3::Defined(rat(1, 2)));
        }
        assert_eq!(d3(&lp_of(0, 2, "-c")).unwrap(), D3::Defined(rat(1, 2)));
    }

    #[test]
    fn l41_pair() {
        let mut d = ContactSurgeryDiagram::new();
        d.push(SurgeryComponent::legendrian("K", -3, 0, rat(-1, 1)));
        let tight = LinkingPresentation::from_diagram(&d).unwrap();
        let ot = lp_of(0, 2, "-c -c -c -c");
        assert_eq!(tight.homology().to_string(), "Z/4");
        assert!(euler_class(&tight).element.is_zero());
        assert_eq!(d3(&tight).unwrap(), D3::Defined(rat(-1, 4)));
        assert_eq!(d3(&ot).unwrap(), d3(&tight).unwrap());
        let g = |lp: &LinkingPresentation, probe| {
            let s = designated_spin_structures(lp, probe);
            assert_eq!(s.len(), 1);
            gamma(lp, &s[0]).unwrap()
        };
        let a = g(&tight, 0);
        let b = g(&ot, 4);
        assert_eq!(a, GammaValue::Conclusive(tight.homology().zero()));
        assert_ne!(a, b);
    }

    #[test]
    fn planar_l41_book() {
        let lp = lp_of(0, 4, "+c2 +c3 +delta_2_4 +delta_3_4");
        assert_eq!(lp.homology().to_string(), "Z/4");
        assert!(euler_class(&lp).element.is_zero());
        assert_eq!(d3(&lp).unwrap(), D3::Defined(rat(-1, 4)));
    }

    #[test]
    fn stabilizations_shift_d3() {
        use crate::mapping::{stabilize, Stabilization};
        let ob = OpenBook::from_names(standard_page(0, 2).unwrap(), "-c").unwrap();
        let neg = stabilize(&ob, Stabilization::Negative, (1, 1)).unwrap();
        assert_eq!(d3_of(&neg), D3::Defined(rat(3, 2)));
        let pos = stabilize(&ob, Stabilization::Positive, (1, 2)).unwrap();
        assert_eq!(d3_of(&pos), D3::Defined(rat(1, 2)));
    }
}
