//! The 3-manifold of an open book: homology and fundamental group presentations.

use std::fmt;

use num_bigint::BigInt;

use crate::algebra::{cokernel, AbelianGroup, IntegerMatrix};
use crate::mapping::{monodromy_action, OpenBook, TwistLetter, TwistWord};
use crate::page::standard_page;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ManifoldError {
    #[error("abelianized images disagree with the twist word: {0}")]
    AbelianizationMismatch(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

/// Relation matrix with one row per basis class (`phi(x) - x`) and one per arc.
pub fn relation_matrix(ob: &OpenBook) -> IntegerMatrix {
    let act = monodromy_action(ob);
    let k = ob.page().band_count();
    let mut rows = (&act.matrix - &IntegerMatrix::identity(k)).transpose();
    for a in act.arcs {
        rows.push_row(a.correction);
    }
    rows
}

/// Arc corrections `phi(sigma_j) - sigma_j` as `[x1,...,xk]`, for j = 2..r.
pub fn monodromy_arcs_text(ob: &OpenBook) -> Vec<String> {
    monodromy_action(ob)
        .arcs
        .iter()
        .map(|a| format!("[{}]", a.correction.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect()
}

pub fn h1_via_monodromy(ob: &OpenBook) -> (AbelianGroup, IntegerMatrix) {
    let m = relation_matrix(ob);
    (cokernel(&m), m)
}

/// A word in a free group: `(generator, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeWord(pub Vec<(usize, i64)>);

impl FreeWord {
    /// Merges neighbours and cancels.
    pub fn reduced(&self) -> FreeWord {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for &(g, e) in &self.0 {
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ if e != 0 => out.push((g, e)),
                _ => {}
            }
        }
        FreeWord(out)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn abelianize(&self, n: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::from(0); n];
        for &(g, e) in &self.0 {
            v[g] += e;
        }
        v
    }

    /// Parses `a1 b1^-1 c2^3` against the given generator names.
    pub fn parse(text: &str, names: &[String]) -> Result<FreeWord, ManifoldError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| ManifoldError::UnknownGenerator(tok.into()))?),
                None => (tok, 1),
            };
            if name == "1" {
                continue;
            }
            let g = names.iter().position(|n| n == name).ok_or_else(|| ManifoldError::UnknownGenerator(name.into()))?;
            out.push((g, exp));
        }
        Ok(FreeWord(out))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{}", names[g], e) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl GroupPresentation {
    pub fn relation_matrix(&self) -> IntegerMatrix {
        let n = self.generators.len();
        let rows: Vec<Vec<BigInt>> = self.relators.iter().map(|r| r.abelianize(n)).collect();
        IntegerMatrix::from_rows_with_cols(&rows, n)
    }

    pub fn abelianization(&self) -> AbelianGroup {
        cokernel(&self.relation_matrix())
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.render(&self.generators)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Images of the free generators of the page group, supplied by the caller,
/// plus the loops `phi(sigma_j) sigma_j^-1` for the arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyEndomorphism {
    pub images: Vec<FreeWord>,
    pub arc_loops: Vec<FreeWord>,
}

impl MonodromyEndomorphism {
    pub fn identity(ob: &OpenBook) -> Self {
        let k = ob.page().band_count();
        MonodromyEndomorphism {
            images: (0..k).map(|i| FreeWord(vec![(i, 1)])).collect(),
            arc_loops: vec![FreeWord::default(); ob.page().boundary_count() - 1],
        }
    }
}

/// Names of the free generators of the page group, in band order.
pub fn generator_names(ob: &OpenBook) -> Vec<String> {
    let g = ob.page().genus();
    let k = ob.page().band_count();
    let std = crate::page::standard_page(g, ob.page().boundary_count())
        .map(|p| p.feet() == ob.page().feet())
        .unwrap_or(false);
    if !std {
        return (1..=k).map(|i| format!("x{i}")).collect();
    }
    let mut names = Vec::new();
    for i in 1..=g {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    let r = ob.page().boundary_count();
    for j in 2..=r {
        names.push(if r == 2 { "c".to_string() } else { format!("c{j}") });
    }
    names
}

pub fn pi1_presentation(ob: &OpenBook, phi: &MonodromyEndomorphism) -> Result<GroupPresentation, ManifoldError> {
    let k = ob.page().band_count();
    let act = monodromy_action(ob);
    if phi.images.len() != k || phi.arc_loops.len() != act.arcs.len() {
        return Err(ManifoldError::AbelianizationMismatch(format!(
            "expected {k} images and {} arc loops",
            act.arcs.len()
        )));
    }
    let names = generator_names(ob);
    for (i, w) in phi.images.iter().enumerate() {
        if w.abelianize(k) != act.matrix.column(i) {
            return Err(ManifoldError::AbelianizationMismatch(format!("image of {}", names[i])));
        }
    }
    for (a, w) in act.arcs.iter().zip(&phi.arc_loops) {
        if w.abelianize(k) != a.correction {
            return Err(ManifoldError::AbelianizationMismatch(format!("arc from boundary {}", a.boundary)));
        }
    }
    let mut relators = Vec::new();
    for (i, w) in phi.images.iter().enumerate() {
        relators.push(FreeWord(vec![(i, 1)]).concat(&w.inverse()).reduced());
    }
    relators.extend(phi.arc_loops.iter().map(FreeWord::reduced));
    relators.retain(|r| !r.0.is_empty());
    Ok(GroupPresentation { generators: names, relators })
}

/// Planar page with three boundary components and twists `t_d1^m t_d2^n t_d3^k`
/// along curves parallel to each boundary.
pub fn mmnk(m: i64, n: i64, k: i64) -> OpenBook {
    let page = standard_page(0, 3).expect("planar page");
    let mut letters = Vec::new();
    for (e, name) in [(m, "outer"), (n, "c2"), (k, "c3")] {
        let curve = page.curve(name).expect("catalog curve").clone();
        for _ in 0..e.unsigned_abs() {
            letters.push(TwistLetter { curve: curve.clone(), sign: if e > 0 { 1 } else { -1 } });
        }
    }
    OpenBook::new(page, TwistWord { letters }).expect("curves from the same page")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1(g: usize, r: usize, w: &str) -> String {
        let ob = OpenBook::from_names(standard_page(g, r).unwrap(), w).unwrap();
        h1_via_monodromy(&ob).0.to_string()
    }

    #[test]
    fn lens_spaces() {
        for p in 1..6 {
            let w = "+c ".repeat(p);
            let expect = if p == 1 { "0".to_string() } else { format!("Z/{p}") };
            assert_eq!(h1(0, 2, &w), expect);
        }
    }

    #[test]
    fn worked_examples() {
        assert_eq!(h1(1, 2, &format!("{}+gamma +gamma +c +c", "+a1 +b1 ".repeat(5))), "Z");
        assert_eq!(h1(1, 1, ""), "Z^2");
        assert_eq!(h1(1, 1, &"+b1 +a1 ".repeat(5)), "0");
        assert_eq!(h1(0, 1, ""), "0");
    }

    #[test]
    fn mmnk_homology() {
        assert_eq!(h1_via_monodromy(&mmnk(0, 4, 1)).0.to_string(), "Z/4");
        assert_eq!(h1_via_monodromy(&mmnk(0, 2, 2)).0.to_string(), "Z/2 + Z/2");
        assert_eq!(h1_via_monodromy(&mmnk(0, 2, 1)).0.to_string(), "Z/2");
        assert!(h1_via_monodromy(&mmnk(-1, 1, 0)).0.is_trivial());
    }

    #[test]
    fn presentations() {
        let ob = OpenBook::from_names(standard_page(1, 1).unwrap(), "").unwrap();
        let p = pi1_presentation(&ob, &MonodromyEndomorphism::identity(&ob)).unwrap();
        assert!(p.relators.is_empty());
        assert_eq!(p.abelianization().to_string(), "Z^2");
        assert_eq!(p.to_string(), "< a1, b1 |  >");

        let ann = OpenBook::from_names(standard_page(0, 2).unwrap(), "+c").unwrap();
        let names = generator_names(&ann);
        let phi = MonodromyEndomorphism {
            images: vec![FreeWord::parse("c", &names).unwrap()],
            arc_loops: vec![FreeWord::parse("c", &names).unwrap()],
        };
        let p = pi1_presentation(&ann, &phi).unwrap();
        assert!(p.abelianization().is_trivial());

        let tb = OpenBook::from_names(standard_page(1, 1).unwrap(), "+b1").unwrap();
        let e = pi1_presentation(&tb, &MonodromyEndomorphism::identity(&tb));
        assert!(matches!(e, Err(ManifoldError::AbelianizationMismatch(_))));
    }

    #[test]
    fn free_words() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let w = FreeWord::parse("a b b^-1 a^2", &names).unwrap();
        assert_eq!(w.reduced().render(&names), "a^3");
        assert_eq!(w.concat(&w.inverse()).reduced(), FreeWord::default());
        assert!(FreeWord::parse("q", &names).is_err());
    }
}
