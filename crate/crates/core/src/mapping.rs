//! Dehn-twist words and their action on the homology of the page.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{bilinear, IntegerMatrix};
use crate::page::{AnnotatedCurve, PageError, PageSurface};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error(transparent)]
    Page(#[from] PageError),
    #[error("invalid stabilization feet: {0}")]
    InvalidFeet(String),
    #[error("no curve named `{0}` on this page")]
    UnknownCurve(String),
    #[error("hyperelliptic check needs at most two boundary components, page has {0}")]
    UnsupportedPage(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistLetter {
    pub curve: AnnotatedCurve,
    /// +1 for a right-handed twist.
    pub sign: i8,
}

/// Leftmost letter acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwistWord {
    pub letters: Vec<TwistLetter>,
}

impl TwistWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn right_twists(&self) -> usize {
        self.letters.iter().filter(|l| l.sign > 0).count()
    }

    pub fn left_twists(&self) -> usize {
        self.letters.len() - self.right_twists()
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("{}{}", if l.sign > 0 { '+' } else { '-' }, l.curve.name))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone)]
pub struct OpenBook {
    page: PageSurface,
    word: TwistWord,
}

impl OpenBook {
    pub fn new(page: PageSurface, word: TwistWord) -> Result<Self, MappingError> {
        for l in &word.letters {
            if l.curve.page_id() != page.id() || l.curve.homology.len() != page.band_count() {
                return Err(PageError::PageMismatch(l.curve.name.clone()).into());
            }
        }
        Ok(OpenBook { page, word })
    }

    /// Builds a word from catalog names; `+name` or `-name`, or a bare name for a right twist.
    pub fn from_names(page: PageSurface, word: &str) -> Result<Self, MappingError> {
        let mut letters = Vec::new();
        for tok in word.split_whitespace() {
            let (sign, name) = match tok.as_bytes()[0] {
                b'+' => (1, &tok[1..]),
                b'-' => (-1, &tok[1..]),
                _ => (1, tok),
            };
            let curve = page.curve(name).ok_or_else(|| MappingError::UnknownCurve(name.to_string()))?.clone();
            letters.push(TwistLetter { curve, sign });
        }
        OpenBook::new(page, TwistWord { letters })
    }

    pub fn page(&self) -> &PageSurface {
        &self.page
    }

    pub fn word(&self) -> &TwistWord {
        &self.word
    }
}

/// State of the relative arc from boundary `boundary` to boundary 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcState {
    pub boundary: usize,
    pub pairing: Vec<BigInt>,
    /// `phi(sigma) - sigma` as an absolute class.
    pub correction: Vec<BigInt>,
}

impl ArcState {
    pub fn new(page: &PageSurface, boundary: usize) -> Self {
        let pairing = page.arc_pairing().row(boundary - 2).to_vec();
        ArcState { boundary, pairing, correction: vec![BigInt::zero(); page.band_count()] }
    }

    pub fn apply(&mut self, page: &PageSurface, c: &[BigInt], sign: i8) {
        let rel: BigInt = self.pairing.iter().zip(c).map(|(a, b)| a * b).sum();
        let abs = bilinear(&self.correction, page.intersection_matrix(), c);
        let f = (rel + abs) * BigInt::from(sign);
        for (x, y) in self.correction.iter_mut().zip(c) {
            *x += &f * y;
        }
    }
}

/// `x -> x + sign * <x, c> c` as a matrix acting on column vectors.
pub fn twist_matrix(page: &PageSurface, c: &[BigInt], sign: i8) -> IntegerMatrix {
    let k = page.band_count();
    let jc = page.intersection_matrix().mul_vec(c);
    let s = BigInt::from(sign);
    let mut t = IntegerMatrix::identity(k);
    for i in 0..k {
        for j in 0..k {
            t[(i, j)] += &s * &c[i] * &jc[j];
        }
    }
    t
}

#[derive(Debug, Clone)]
pub struct MonodromyAction {
    pub matrix: IntegerMatrix,
    pub arcs: Vec<ArcState>,
}

pub fn monodromy_action(ob: &OpenBook) -> MonodromyAction {
    let page = &ob.page;
    let mut matrix = IntegerMatrix::identity(page.band_count());
    let mut arcs: Vec<ArcState> = (2..=page.boundary_count()).map(|j| ArcState::new(page, j)).collect();
    for l in &ob.word.letters {
        matrix = &twist_matrix(page, &l.curve.homology, l.sign) * &matrix;
        for a in &mut arcs {
            a.apply(page, &l.curve.homology, l.sign);
        }
    }
    MonodromyAction { matrix, arcs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stabilization {
    Positive,
    Negative,
}

/// Attaches a band with feet on boundary components `b1`, `b2` (1-based) and
/// appends a twist along a curve running once over it.
pub fn stabilize(ob: &OpenBook, kind: Stabilization, (b1, b2): (usize, usize)) -> Result<OpenBook, MappingError> {
    let page = &ob.page;
    let r = page.boundary_count();
    for b in [b1, b2] {
        if b == 0 || b > r {
            return Err(MappingError::InvalidFeet(format!("boundary {b} not in 1..={r}")));
        }
    }
    let k = page.band_count();
    let n = page.feet().len();
    // gap g sits between feet g and g+1, so a foot dropped there lands at index g+1
    let slot = |b: usize| page.boundary_gap(b).map_or(0, |g| (g + 1) % (n + 1));
    let (s1, s2) = (slot(b1), slot(b2));
    let mut feet = page.feet().to_vec();
    if s1 == s2 {
        feet.splice(s1..s1, [k, k]);
    } else {
        let (lo, hi) = (s1.min(s2), s1.max(s2));
        feet.insert(hi, k);
        feet.insert(lo, k);
    }
    let mut new_page = PageSurface::from_feet(feet, page.trivialization(), page.convention())?;
    for c in page.catalog() {
        new_page.define(new_page.adopt(c, 1))?;
    }
    let mut m = 1;
    while new_page.curve(&format!("s{m}")).is_some() {
        m += 1;
    }
    let mut h = vec![BigInt::zero(); k + 1];
    h[k] = 1.into();
    let s = new_page.new_curve(&format!("s{m}"), h, page.trivialization().basis_winding(), false)?;
    new_page.define(s.clone())?;

    let mut letters: Vec<TwistLetter> = ob
        .word
        .letters
        .iter()
        .map(|l| TwistLetter { curve: new_page.adopt(&l.curve, 1), sign: l.sign })
        .collect();
    let sign = match kind {
        Stabilization::Positive => 1,
        Stabilization::Negative => -1,
    };
    letters.push(TwistLetter { curve: s, sign });
    OpenBook::new(new_page, TwistWord { letters })
}

/// True iff every twist curve is flagged symmetric under the hyperelliptic involution.
pub fn hyperelliptic_check(ob: &OpenBook) -> Result<bool, MappingError> {
    let r = ob.page.boundary_count();
    if r > 2 {
        return Err(MappingError::UnsupportedPage(r));
    }
    Ok(ob.word.letters.iter().all(|l| l.curve.h_symmetric))
}
