//! Pages as a disk with bands attached along its boundary.
//!
//! A page is stored as the cyclic sequence of band feet read counterclockwise
//! around the disk. Each band label occurs twice. The basis curve of a band runs
//! from its first foot to its second through the band and returns along a chord
//! of the disk, so band coordinates are homology coordinates.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{bilinear, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PageError {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("curve `{0}` lives on a different page")]
    PageMismatch(String),
    #[error("quarter turns sum to {0}, not a multiple of 4")]
    NonIntegralTurning(i64),
    #[error("path does not close up: {0}")]
    OpenPath(String),
}

/// Which of the two Seifert forms with entries in {0, 1, -1} is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SeifertConvention {
    /// `V = max(J, 0)`
    Upper,
    /// `V = min(J, 0)`
    Lower,
}

pub const DEFAULT_SEIFERT: SeifertConvention = SeifertConvention::Upper;

/// Trivialization of the tangent bundle that windings are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Trivialization {
    /// The plane the flat page is drawn in. Every band's basis curve winds 1.
    Blackboard,
    /// Blackboard twisted once backwards over every band. Basis curves wind 0.
    Handle,
}

impl Trivialization {
    pub fn basis_winding(self) -> i64 {
        match self {
            Trivialization::Blackboard => 1,
            Trivialization::Handle => 0,
        }
    }

    /// Quarter turns added for one pass over a band in its forward direction.
    pub fn band_correction(self) -> i64 {
        match self {
            Trivialization::Blackboard => 0,
            Trivialization::Handle => -4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AnnotatedCurve {
    pub name: String,
    pub homology: Vec<BigInt>,
    pub winding: i64,
    pub h_symmetric: bool,
    #[serde(skip)]
    page_id: u64,
}

impl AnnotatedCurve {
    pub fn page_id(&self) -> u64 {
        self.page_id
    }
}

#[derive(Debug, Clone)]
pub struct PageSurface {
    genus: usize,
    boundary_count: usize,
    feet: Vec<usize>,
    // boundary components as cycles of gaps; gap i sits between feet i and i+1
    boundaries: Vec<Vec<usize>>,
    j: IntegerMatrix,
    v: IntegerMatrix,
    arc_pairing: IntegerMatrix,
    catalog: Vec<AnnotatedCurve>,
    trivialization: Trivialization,
    convention: SeifertConvention,
    id: u64,
}

fn in_arc(p: usize, q: usize, x: usize, n: usize) -> bool {
    let d = (x + n - p) % n;
    d > 0 && d < (q + n - p) % n
}

/// Sign of the crossing of the chords p1->q1 and p2->q2 on a circle with n marks.
fn chord_sign(p1: usize, q1: usize, p2: usize, q2: usize, n: usize) -> i64 {
    match (in_arc(p1, q1, p2, n), in_arc(p1, q1, q2, n)) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

impl PageSurface {
    pub fn from_feet(
        feet: Vec<usize>,
        trivialization: Trivialization,
        convention: SeifertConvention,
    ) -> Result<Self, PageError> {
        let k = feet.iter().max().map_or(0, |m| m + 1);
        let mut pos = vec![Vec::new(); k];
        for (i, &l) in feet.iter().enumerate() {
            pos[l].push(i);
        }
        if let Some(l) = pos.iter().position(|p| p.len() != 2) {
            return Err(PageError::InvalidSurface(format!("band {l} does not have exactly two feet")));
        }
        let n = feet.len();
        let mut j = IntegerMatrix::zeros(k, k);
        for x in 0..k {
            for y in 0..k {
                if x != y {
                    j[(x, y)] = chord_sign(pos[x][1], pos[x][0], pos[y][1], pos[y][0], n).into();
                }
            }
        }
        let mut v = IntegerMatrix::zeros(k, k);
        for x in 0..k {
            for y in 0..k {
                let e = &j[(x, y)];
                let keep = match convention {
                    SeifertConvention::Upper => e.is_positive(),
                    SeifertConvention::Lower => e.is_negative(),
                };
                if keep {
                    v[(x, y)] = e.clone();
                }
            }
        }

        let mut partner = vec![0; n];
        for p in &pos {
            partner[p[0]] = p[1];
            partner[p[1]] = p[0];
        }
        let mut seen = vec![false; n];
        let mut boundaries = Vec::new();
        let starts = n.checked_sub(1).into_iter().chain(0..n.saturating_sub(1));
        for g0 in starts {
            if seen[g0] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut g = g0;
            while !seen[g] {
                seen[g] = true;
                cycle.push(g);
                g = partner[(g + 1) % n];
            }
            boundaries.push(cycle);
        }
        if boundaries.is_empty() {
            boundaries.push(Vec::new());
        }
        let r = boundaries.len();
        if (k + 1) < r || !(k + 1 - r).is_multiple_of(2) {
            return Err(PageError::InvalidSurface("inconsistent band layout".into()));
        }
        let genus = (k + 1 - r) / 2;

        // relative arcs, in doubled coordinates so gaps sit between feet
        let mut arc_pairing = IntegerMatrix::zeros(r - 1, k);
        for (jdx, cyc) in boundaries.iter().enumerate().skip(1) {
            let root = 2 * boundaries[0][0] + 1;
            let from = 2 * cyc[0] + 1;
            for l in 0..k {
                arc_pairing[(jdx - 1, l)] = chord_sign(from, root, 2 * pos[l][1], 2 * pos[l][0], 2 * n).into();
            }
        }

        let mut h = DefaultHasher::new();
        (&feet, trivialization, convention).hash(&mut h);
        let id = h.finish();
        Ok(PageSurface {
            genus,
            boundary_count: r,
            feet,
            boundaries,
            j,
            v,
            arc_pairing,
            catalog: Vec::new(),
            trivialization,
            convention,
            id,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn band_count(&self) -> usize {
        self.j.rows()
    }

    /// Minus the Euler characteristic, `2g + r - 2`.
    pub fn neg_euler(&self) -> i64 {
        2 * self.genus as i64 + self.boundary_count as i64 - 2
    }

    pub fn feet(&self) -> &[usize] {
        &self.feet
    }

    pub fn intersection_matrix(&self) -> &IntegerMatrix {
        &self.j
    }

    pub fn seifert_matrix(&self) -> &IntegerMatrix {
        &self.v
    }

    /// Row `j - 2` pairs the arc from boundary `j` to boundary 1 with each basis curve.
    pub fn arc_pairing(&self) -> &IntegerMatrix {
        &self.arc_pairing
    }

    pub fn trivialization(&self) -> Trivialization {
        self.trivialization
    }

    pub fn convention(&self) -> SeifertConvention {
        self.convention
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn catalog(&self) -> &[AnnotatedCurve] {
        &self.catalog
    }

    pub fn curve(&self, name: &str) -> Option<&AnnotatedCurve> {
        self.catalog.iter().find(|c| c.name == name)
    }

    /// Representative gap of boundary component `b` (1-based).
    pub(crate) fn boundary_gap(&self, b: usize) -> Option<usize> {
        self.boundaries.get(b.checked_sub(1)?)?.first().copied()
    }

    pub fn new_curve(
        &self,
        name: &str,
        homology: Vec<BigInt>,
        winding: i64,
        h_symmetric: bool,
    ) -> Result<AnnotatedCurve, PageError> {
        if homology.len() != self.band_count() {
            return Err(PageError::PageMismatch(name.to_string()));
        }
        Ok(AnnotatedCurve { name: name.to_string(), homology, winding, h_symmetric, page_id: self.id })
    }

    /// Adds a curve to the catalog, replacing one with the same name.
    pub fn define(&mut self, curve: AnnotatedCurve) -> Result<(), PageError> {
        self.check(&curve)?;
        self.catalog.retain(|c| c.name != curve.name);
        self.catalog.push(curve);
        Ok(())
    }

    fn check(&self, c: &AnnotatedCurve) -> Result<(), PageError> {
        if c.page_id != self.id || c.homology.len() != self.band_count() {
            return Err(PageError::PageMismatch(c.name.clone()));
        }
        Ok(())
    }

    pub fn intersection(&self, x: &AnnotatedCurve, y: &AnnotatedCurve) -> Result<BigInt, PageError> {
        self.check(x)?;
        self.check(y)?;
        Ok(bilinear(&x.homology, &self.j, &y.homology))
    }

    pub fn seifert(&self, x: &AnnotatedCurve, y: &AnnotatedCurve) -> Result<BigInt, PageError> {
        self.check(x)?;
        self.check(y)?;
        Ok(bilinear(&x.homology, &self.v, &y.homology))
    }

    /// Winding in the blackboard trivialization. Its parity always matches
    /// `seifert(x, x) + 1` for embedded curves.
    pub fn blackboard_winding(&self, c: &AnnotatedCurve) -> BigInt {
        let w = BigInt::from(c.winding);
        match self.trivialization {
            Trivialization::Blackboard => w,
            Trivialization::Handle => w + c.homology.iter().sum::<BigInt>(),
        }
    }

    /// Copies a curve from a page this one was built from; new bands get coordinate 0.
    pub(crate) fn adopt(&self, c: &AnnotatedCurve, extra_bands: usize) -> AnnotatedCurve {
        let mut h = c.homology.clone();
        h.extend(std::iter::repeat_n(BigInt::zero(), extra_bands));
        AnnotatedCurve { name: c.name.clone(), homology: h, winding: c.winding, h_symmetric: false, page_id: self.id }
    }
}

pub fn standard_page(g: usize, r: usize) -> Result<PageSurface, PageError> {
    standard_page_with(g, r, DEFAULT_SEIFERT)
}

/// `a_i b_i a_i b_i` for each genus pair, then `c_j c_j` for j = 2..r.
pub fn standard_page_with(g: usize, r: usize, convention: SeifertConvention) -> Result<PageSurface, PageError> {
    if r < 1 {
        return Err(PageError::InvalidSurface("a page needs at least one boundary component".into()));
    }
    let mut feet = Vec::new();
    for i in 0..g {
        feet.extend([2 * i, 2 * i + 1, 2 * i, 2 * i + 1]);
    }
    for j in 0..r - 1 {
        feet.extend([2 * g + j, 2 * g + j]);
    }
    let triv = if g == 0 { Trivialization::Blackboard } else { Trivialization::Handle };
    let mut page = PageSurface::from_feet(feet, triv, convention)?;
    debug_assert_eq!((page.genus, page.boundary_count), (g, r));
    page.catalog = standard_catalog(&page, g, r);
    Ok(page)
}

fn standard_catalog(page: &PageSurface, g: usize, r: usize) -> Vec<AnnotatedCurve> {
    let k = page.band_count();
    let unit = |idx: &[usize]| {
        let mut v = vec![BigInt::zero(); k];
        for &i in idx {
            v[i] += 1;
        }
        v
    };
    let hyper = r <= 2;
    let mut out = Vec::new();
    let mut push = |name: String, h: Vec<BigInt>, w: i64, sym: bool| {
        out.push(AnnotatedCurve { name, homology: h, winding: w, h_symmetric: sym, page_id: page.id });
    };
    for i in 0..g {
        // the symmetric chain is a1, b1, d1, b2, d2, ..., b_g
        push(format!("a{}", i + 1), unit(&[2 * i]), 0, hyper && i == 0);
        push(format!("b{}", i + 1), unit(&[2 * i + 1]), 0, hyper);
        if i + 1 < g {
            push(format!("d{}", i + 1), unit(&[2 * i, 2 * i + 2]), -1, hyper);
        }
    }
    let planar = g == 0;
    let cband = |j: usize| 2 * g + j - 2;
    for j in 2..=r {
        let name = if r == 2 { "c".to_string() } else { format!("c{j}") };
        let w = if planar { 1 } else { 0 };
        push(name, unit(&[cband(j)]), w, planar && r == 2);
    }
    if (3..=7).contains(&r) {
        let m = r - 1;
        for mask in 1u32..(1 << m) {
            let size = mask.count_ones() as usize;
            if size < 2 || (planar && size == m) {
                continue;
            }
            let js: Vec<usize> = (0..m).filter(|b| mask & (1 << b) != 0).map(|b| b + 2).collect();
            let name = format!("delta_{}", js.iter().map(ToString::to_string).collect::<Vec<_>>().join("_"));
            let idx: Vec<usize> = js.iter().map(|&j| cband(j)).collect();
            let w = if planar { 1 } else { 1 - size as i64 };
            push(name, unit(&idx), w, false);
        }
    }
    if g >= 1 || r >= 3 {
        let idx: Vec<usize> = (2..=r).map(cband).collect();
        let w = if planar { 1 } else { 2 - 2 * g as i64 - r as i64 };
        push("outer".to_string(), unit(&idx), w, g >= 1 && r == 1);
    }
    if (g, r) == (1, 2) {
        push("gamma".to_string(), unit(&[0, 2]), 1, false);
    }
    out
}

/// One piece of a closed path on the page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathStep {
    /// Over a band, from its first foot to its second unless reversed.
    Band { band: usize, reversed: bool },
    /// Through the disk between two feet (positions in the foot sequence).
    Disk { from: usize, to: usize, quarter_turns: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TurningPath {
    pub steps: Vec<PathStep>,
}

impl TurningPath {
    pub fn new(steps: Vec<PathStep>) -> Self {
        TurningPath { steps }
    }

    pub fn reversed(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match *s {
                PathStep::Band { band, reversed } => PathStep::Band { band, reversed: !reversed },
                PathStep::Disk { from, to, quarter_turns } => PathStep::Disk { from: to, to: from, quarter_turns: -quarter_turns },
            })
            .collect();
        TurningPath { steps }
    }

    pub fn concat(&self, other: &TurningPath) -> Self {
        TurningPath { steps: self.steps.iter().chain(&other.steps).cloned().collect() }
    }

    pub fn homology(&self, k: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); k];
        for s in &self.steps {
            if let PathStep::Band { band, reversed } = *s {
                if band < k {
                    v[band] += if reversed { -1 } else { 1 };
                }
            }
        }
        v
    }
}

pub fn winding_from_turning_sequence(page: &PageSurface, path: &TurningPath) -> Result<i64, PageError> {
    let k = page.band_count();
    let mut pos = vec![Vec::new(); k];
    for (i, &l) in page.feet.iter().enumerate() {
        pos[l].push(i);
    }
    let n = page.feet.len();
    let ends = |s: &PathStep| -> Result<(usize, usize), PageError> {
        match *s {
            PathStep::Band { band, reversed } => {
                let p = pos.get(band).ok_or_else(|| PageError::OpenPath(format!("no band {band}")))?;
                Ok(if reversed { (p[1], p[0]) } else { (p[0], p[1]) })
            }
            PathStep::Disk { from, to, .. } if from < n && to < n => Ok((from, to)),
            PathStep::Disk { from, to, .. } => Err(PageError::OpenPath(format!("no foot {}", from.max(to)))),
        }
    };
    let first = path.steps.first().ok_or_else(|| PageError::OpenPath("empty path".into()))?;
    let start = ends(first)?.0;
    let mut at = start;
    let mut total = 0i64;
    for (i, s) in path.steps.iter().enumerate() {
        let (a, b) = ends(s)?;
        if a != at {
            return Err(PageError::OpenPath(format!("step {} starts at foot {a}, previous ended at {at}", i + 1)));
        }
        at = b;
        total += match *s {
            PathStep::Disk { quarter_turns, .. } => quarter_turns,
            PathStep::Band { reversed, .. } => {
                let c = page.trivialization.band_correction();
                if reversed { -c } else { c }
            }
        };
    }
    if at != start {
        return Err(PageError::OpenPath(format!("ends at foot {at}, started at {start}")));
    }
    if total % 4 != 0 {
        return Err(PageError::NonIntegralTurning(total));
    }
    Ok(total / 4)
}
