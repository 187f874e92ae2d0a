//! Everything known about one open book or surgery diagram, plus rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::AbelianGroup;
use crate::kirby::{
    d3, designated_spin_structures, diagram_from_openbook, euler_class, gamma, spin_structures,
    ContactSurgeryDiagram, EulerClass, GammaValue, KirbyError, LinkingPresentation, SpinStructure, D3,
};
use crate::manifold::h1_via_monodromy;
use crate::mapping::{hyperelliptic_check, OpenBook};

#[derive(Debug, Clone)]
pub enum Subject {
    OpenBook(OpenBook),
    Diagram(ContactSurgeryDiagram),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageStats {
    pub genus: usize,
    pub boundary_count: usize,
    /// `-chi(page) = 2g + r - 2`
    pub neg_euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaRow {
    pub spin: SpinStructure,
    pub designated: bool,
    pub value: GammaValue,
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub h1: AbelianGroup,
    /// Same group computed from the monodromy; only for open books.
    pub h1_monodromy: Option<AbelianGroup>,
    pub euler: EulerClass,
    pub d3: D3,
    pub gamma: Vec<GammaRow>,
    pub page: Option<PageStats>,
    pub word: Option<String>,
    pub components: usize,
    pub hyperelliptic: Option<bool>,
    pub notes: Vec<String>,
}

impl InvariantReport {
    pub fn designated_gamma(&self) -> Option<&GammaValue> {
        self.gamma.iter().find(|r| r.designated).map(|r| &r.value)
    }

    pub fn is_inconclusive(&self) -> bool {
        self.d3 == D3::Undefined || self.gamma.iter().any(|r| matches!(r.value, GammaValue::Inconclusive { .. }))
    }
}

pub fn linking_presentation(subject: &Subject) -> Result<LinkingPresentation, KirbyError> {
    match subject {
        Subject::OpenBook(ob) => LinkingPresentation::from_diagram(&diagram_from_openbook(ob)),
        Subject::Diagram(d) => LinkingPresentation::from_diagram(d),
    }
}

/// Component whose meridian carries the 0-framed probe handle.
fn probe(subject: &Subject) -> usize {
    match subject {
        Subject::OpenBook(ob) => ob.word().len(),
        Subject::Diagram(_) => 0,
    }
}

pub fn invariant_report(subject: &Subject) -> Result<InvariantReport, KirbyError> {
    let lp = linking_presentation(subject)?;
    let euler = euler_class(&lp);
    let h1 = euler.group.clone();
    let d3v = d3(&lp)?;

    let designated = if lp.is_empty() { Vec::new() } else { designated_spin_structures(&lp, probe(subject).min(lp.len() - 1)) };
    let all = spin_structures(&lp);
    let unique = all.len() == 1;
    let mut rows = Vec::new();
    for s in all {
        let value = gamma(&lp, &s)?;
        rows.push(GammaRow { designated: unique || (designated.len() == 1 && designated[0] == s), spin: s, value });
    }

    let (mut h1_monodromy, mut page, mut word, mut hyper) = (None, None, None, None);
    if let Subject::OpenBook(ob) = subject {
        let (g, _) = h1_via_monodromy(ob);
        if !g.same_type(&h1) {
            return Err(KirbyError::InternalInconsistency(format!(
                "H1 from the monodromy is {g} but the linking matrix gives {h1}"
            )));
        }
        h1_monodromy = Some(g);
        let p = ob.page();
        page = Some(PageStats { genus: p.genus(), boundary_count: p.boundary_count(), neg_euler: p.neg_euler() });
        word = Some(ob.word().to_string());
        hyper = hyperelliptic_check(ob).ok();
    }

    let mut report = InvariantReport {
        h1,
        h1_monodromy,
        euler,
        d3: d3v,
        gamma: rows,
        page,
        word,
        components: lp.len(),
        hyperelliptic: hyper,
        notes: Vec::new(),
    };
    report.notes = classify(subject, &report);
    Ok(report)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Sign and count when the book is the annulus with a power of the core twist.
fn annular_power(ob: &OpenBook) -> Option<i64> {
    let p = ob.page();
    if p.genus() != 0 || p.boundary_count() != 2 {
        return None;
    }
    let letters = &ob.word().letters;
    let sign = letters.first()?.sign;
    letters
        .iter()
        .all(|l| l.sign == sign && l.curve.homology[0].abs().is_one())
        .then(|| i64::from(sign) * letters.len() as i64)
}

/// Planar books with at most three binding components whose twists run along
/// boundary-parallel curves and leave at most two exceptional fibers. These
/// are lens spaces, so trivial H1 means S^3.
fn is_small_seifert(ob: &OpenBook) -> bool {
    let p = ob.page();
    if p.genus() != 0 || p.boundary_count() > 3 {
        return false;
    }
    if p.boundary_count() < 3 {
        return true;
    }
    let classes: [Vec<BigInt>; 3] = [vec![1.into(), 1.into()], vec![1.into(), 0.into()], vec![0.into(), 1.into()]];
    let mut net = [0i64; 3];
    for l in &ob.word().letters {
        let Some(i) = classes.iter().position(|c| *c == l.curve.homology) else { return false };
        net[i] += i64::from(l.sign);
    }
    net.iter().any(|e| e.abs() <= 1)
}

/// The Legendrian surgery on the tb = -3, rot = 0 unknot, or its planar book.
fn is_tight_l41(subject: &Subject) -> bool {
    match subject {
        Subject::Diagram(d) => {
            d.len() == 1 && {
                let c = &d.components[0];
                c.tb == BigInt::from(-3) && c.rotation.is_zero() && c.coefficient == -BigRational::one()
            }
        }
        Subject::OpenBook(ob) => {
            let p = ob.page();
            let mut got: Vec<Vec<BigInt>> = ob.word().letters.iter().filter(|l| l.sign > 0).map(|l| l.curve.homology.clone()).collect();
            got.sort();
            let mut want: Vec<Vec<BigInt>> = [[0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1]]
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            want.sort();
            p.genus() == 0 && p.boundary_count() == 4 && ob.word().len() == 4 && got == want
        }
    }
}

fn classify(subject: &Subject, r: &InvariantReport) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(ps) = r.page {
        if ps.genus == 0 && ps.boundary_count == 1 {
            notes.push("n = -1: standard tight S^3".into());
            return notes;
        }
    }
    if let Subject::OpenBook(ob) = subject {
        match annular_power(ob) {
            Some(1) => notes.push("annulus with t_c: standard tight S^3, bn = 1".into()),
            Some(p) if p > 1 => notes.push(format!("annulus with t_c^{p}: the unique tight structure on L({p},{}), bn = 2", p - 1)),
            Some(p) if p < 0 => {
                let p = -p;
                let mut s = format!("annulus with t_c^-{p}: overtwisted structure on L({p},1), bn = 2, e = 0, d3 = -{p}/4 + 3/4");
                if p % 2 == 0 {
                    s.push_str(&format!(", designated Gamma has order 2 (= {}/2 in Z/{p})", p));
                }
                notes.push(s);
            }
            _ => {}
        }
    }
    if let Some(q) = r.d3.value() {
        if let Subject::OpenBook(ob) = subject {
            if r.h1.is_trivial() && is_small_seifert(ob) {
                notes.extend(sphere_note(q));
            }
        }
        if is_tight_l41(subject) {
            notes.push("tight structure on L(4,1) with d3 = -1/4: sg = 0, bn = 4".into());
        }
    }
    notes
}

fn sphere_note(q: &BigRational) -> Option<String> {
    let twice = (q * rat(2, 1)).to_integer();
    if !(q * rat(2, 1)).is_integer() || twice.is_even() {
        return None;
    }
    let s = if *q == rat(-1, 2) {
        "S^3, d3 = -1/2: homotopic to the standard tight structure (bn = 1 if tight, bn = 3 if overtwisted)".to_string()
    } else {
        let bn = if *q == rat(1, 2) {
            "bn = 2".to_string()
        } else if *q == rat(3, 2) {
            "bn = 3".to_string()
        } else if *q == rat(5, 2) {
            "bn = 4".to_string()
        } else if twice.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
            "4 <= bn <= 5".to_string()
        } else {
            "4 <= bn <= 6".to_string()
        };
        format!("overtwisted S^3 with d3 = {q}: {bn}")
    };
    Some(s)
}

fn gamma_text(v: &GammaValue) -> String {
    match v {
        GammaValue::Conclusive(g) => g.to_string(),
        GammaValue::Inconclusive { odd_components } => {
            let c: Vec<String> = odd_components.iter().map(|i| (i + 1).to_string()).collect();
            format!("inconclusive (odd at components {})", c.join(","))
        }
    }
}

fn euler_text(e: &EulerClass) -> String {
    format!("{} ({})", e.element, if e.torsion { "torsion" } else { "non-torsion" })
}

impl InvariantReport {
    /// `key: value` lines, one fact per line.
    pub fn lines(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        if let Some(ps) = self.page {
            put("page", format!("g={} r={}", ps.genus, ps.boundary_count));
            put("-chi", ps.neg_euler.to_string());
        }
        if let Some(w) = &self.word {
            put("word", if w.is_empty() { "(empty)".into() } else { w.clone() });
        }
        put("components", self.components.to_string());
        put("H1", self.h1.to_string());
        if let Some(g) = &self.h1_monodromy {
            put("H1 (monodromy)", g.to_string());
        }
        put("e", euler_text(&self.euler));
        put("d3", self.d3.to_string());
        put("spin structures", self.gamma.len().to_string());
        for row in &self.gamma {
            let mut v = gamma_text(&row.value);
            if row.designated {
                v.push_str(" [designated]");
            }
            put(&format!("Gamma[{}]", row.spin), v);
        }
        if let Some(ps) = self.page {
            put("sg", format!("<= {}", ps.genus));
            put("bn", if ps.genus == 0 { format!("<= {}", ps.boundary_count) } else { format!("<= {} (at genus {})", ps.boundary_count, ps.genus) });
            put("n", format!("<= {}", ps.neg_euler));
        }
        if let Some(h) = self.hyperelliptic {
            put("hyperelliptic", if h { "yes".into() } else { "no".into() });
        }
        for n in &self.notes {
            put("note", n.clone());
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.lines().into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }

    pub fn to_json(&self) -> Value {
        let gamma: Vec<Value> = self
            .gamma
            .iter()
            .map(|r| {
                json!({
                    "spin": r.spin.to_string(),
                    "designated": r.designated,
                    "value": gamma_text(&r.value),
                    "conclusive": matches!(r.value, GammaValue::Conclusive(_)),
                })
            })
            .collect();
        json!({
            "page": self.page.map(|p| json!({"genus": p.genus, "boundary_count": p.boundary_count, "neg_euler": p.neg_euler})),
            "word": self.word,
            "components": self.components,
            "h1": self.h1,
            "h1_monodromy": self.h1_monodromy,
            "euler": {"element": self.euler.element.to_string(), "torsion": self.euler.torsion},
            "d3": self.d3.value().map(|q| q.to_string()),
            "gamma": gamma,
            "bounds": self.page.map(|p| json!({"sg": p.genus, "bn": p.boundary_count, "n": p.neg_euler})),
            "hyperelliptic": self.hyperelliptic,
            "notes": self.notes,
        })
    }
}
