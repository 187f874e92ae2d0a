//! The `.ob` input format.
//!
//! ```text
//! # comments start with '#'
//! page g=1 r=2
//! curve a1 class=[1,0,0] winding=0 hsym
//! twist +a1
//! stabilize neg 1 1
//! image a1 a1 b1^-1
//! arcimage 2 c
//! ```
//!
//! or, for surgery diagrams,
//!
//! ```text
//! diagram
//! component K tb=-1 rot=0 coeff=1/2
//! link K L -1
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::kirby::{ComponentKind, ContactSurgeryDiagram, SurgeryComponent};
use crate::manifold::{generator_names, FreeWord, MonodromyEndomorphism};
use crate::mapping::{stabilize, OpenBook, Stabilization, TwistLetter, TwistWord};
use crate::page::{standard_page, AnnotatedCurve, PageSurface};
use crate::report::Subject;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("curve `{0}` is not declared")]
    UndeclaredCurve(String),
    #[error("component `{0}` is not declared")]
    UndeclaredComponent(String),
    #[error("link {0} {1} contradicts an earlier value")]
    AsymmetricLink(String, String),
    #[error("bad coefficient `{0}`: expected +1, -1, 1/m or -1/m")]
    BadCoefficient(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Comment(String),
    Page { g: usize, r: usize },
    Curve { name: String, class: Vec<BigInt>, winding: i64, hsym: bool },
    Twist { name: String, sign: i8 },
    Stabilize { kind: Stabilization, b1: usize, b2: usize },
    Image { generator: String, word: Vec<String> },
    ArcImage { boundary: usize, word: Vec<String> },
    Diagram,
    Component { name: String, tb: i64, rot: i64, coeff: BigRational },
    Link { a: String, b: String, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub items: Vec<Item>,
    /// Source line of each item and the column of its first argument.
    pub pos: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Built {
    pub subject: Subject,
    /// Present when the document gives `image` or `arcimage` lines.
    pub phi: Option<MonodromyEndomorphism>,
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain([(line.len(), ' ')]) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], col: line[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn err(line: usize, col: usize, kind: ErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    err(line, col, ErrorKind::Syntax(msg.into()))
}

fn keyed<'a>(t: &Tok<'a>, key: &str, line: usize) -> Result<&'a str, ParseError> {
    t.text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| syntax(line, t.col, format!("expected {key}=...")))
}

fn int<T: std::str::FromStr>(s: &str, line: usize, col: usize) -> Result<T, ParseError> {
    s.parse().map_err(|_| syntax(line, col, format!("`{s}` is not an integer")))
}

fn coefficient(s: &str, line: usize, col: usize) -> Result<BigRational, ParseError> {
    let bad = || err(line, col, ErrorKind::BadCoefficient(s.to_string()));
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let den: i64 = match body.split_once('/') {
        None if body == "1" => 1,
        Some(("1", m)) if !m.starts_with(['-', '+']) => m.parse().map_err(|_| bad())?,
        _ => return Err(bad()),
    };
    if den == 0 {
        return Err(bad());
    }
    let q = BigRational::new(BigInt::one(), den.into());
    Ok(if neg { -q } else { q })
}

fn class(s: &str, line: usize, col: usize) -> Result<Vec<BigInt>, ParseError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| syntax(line, col, "class must look like [i1,...,ik]"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|x| int::<BigInt>(x.trim(), line, col)).collect()
}

fn parse_line(toks: &[Tok<'_>], line: usize) -> Result<Item, ParseError> {
    let head = &toks[0];
    let arity = |n: usize| {
        if toks.len() == n {
            Ok(())
        } else {
            Err(syntax(line, head.col, format!("`{}` takes {} argument(s)", head.text, n - 1)))
        }
    };
    Ok(match head.text {
        "page" => {
            arity(3)?;
            let g = int(keyed(&toks[1], "g", line)?, line, toks[1].col)?;
            let r = int(keyed(&toks[2], "r", line)?, line, toks[2].col)?;
            Item::Page { g, r }
        }
        "curve" => {
            if toks.len() != 4 && toks.len() != 5 {
                return Err(syntax(line, head.col, "usage: curve <name> class=[..] winding=<int> [hsym]"));
            }
            let hsym = match toks.get(4) {
                None => false,
                Some(t) if t.text == "hsym" => true,
                Some(t) => return Err(syntax(line, t.col, "expected `hsym`")),
            };
            Item::Curve {
                name: toks[1].text.to_string(),
                class: class(keyed(&toks[2], "class", line)?, line, toks[2].col)?,
                winding: int(keyed(&toks[3], "winding", line)?, line, toks[3].col)?,
                hsym,
            }
        }
        "twist" => {
            arity(2)?;
            let t = &toks[1];
            let (sign, name) = match t.text.as_bytes()[0] {
                b'+' => (1, &t.text[1..]),
                b'-' => (-1, &t.text[1..]),
                _ => return Err(syntax(line, t.col, "twist needs +name or -name")),
            };
            if name.is_empty() {
                return Err(syntax(line, t.col, "missing curve name"));
            }
            Item::Twist { name: name.to_string(), sign }
        }
        "stabilize" => {
            arity(4)?;
            let kind = match toks[1].text {
                "pos" => Stabilization::Positive,
                "neg" => Stabilization::Negative,
                _ => return Err(syntax(line, toks[1].col, "expected pos or neg")),
            };
            Item::Stabilize { kind, b1: int(toks[2].text, line, toks[2].col)?, b2: int(toks[3].text, line, toks[3].col)? }
        }
        "image" => {
            if toks.len() < 2 {
                return Err(syntax(line, head.col, "usage: image <generator> <word>"));
            }
            Item::Image { generator: toks[1].text.to_string(), word: toks[2..].iter().map(|t| t.text.to_string()).collect() }
        }
        "arcimage" => {
            if toks.len() < 2 {
                return Err(syntax(line, head.col, "usage: arcimage <boundary> <word>"));
            }
            Item::ArcImage { boundary: int(toks[1].text, line, toks[1].col)?, word: toks[2..].iter().map(|t| t.text.to_string()).collect() }
        }
        "diagram" => {
            arity(1)?;
            Item::Diagram
        }
        "component" => {
            arity(5)?;
            Item::Component {
                name: toks[1].text.to_string(),
                tb: int(keyed(&toks[2], "tb", line)?, line, toks[2].col)?,
                rot: int(keyed(&toks[3], "rot", line)?, line, toks[3].col)?,
                coeff: coefficient(keyed(&toks[4], "coeff", line)?, line, toks[4].col)?,
            }
        }
        "link" => {
            arity(4)?;
            Item::Link { a: toks[1].text.to_string(), b: toks[2].text.to_string(), value: int(toks[3].text, line, toks[3].col)? }
        }
        other => return Err(syntax(line, head.col, format!("unknown directive `{other}`"))),
    })
}

pub fn parse(text: &str) -> Result<InputDocument, ParseError> {
    let mut doc = InputDocument { items: Vec::new(), pos: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (item, col) = if let Some(c) = trimmed.strip_prefix('#') {
            (Item::Comment(c.trim().to_string()), 1)
        } else {
            let toks = tokens(raw);
            (parse_line(&toks, line)?, toks.get(1).map_or(1, |t| t.col))
        };
        doc.items.push(item);
        doc.pos.push((line, col));
    }
    doc.build()?;
    Ok(doc)
}

struct BookState {
    page: PageSurface,
    g: usize,
    r: usize,
    curves: BTreeMap<String, AnnotatedCurve>,
    letters: Vec<TwistLetter>,
}

impl InputDocument {
    pub fn build(&self) -> Result<Built, ParseError> {
        let first = self.items.iter().zip(&self.pos).find(|(it, _)| !matches!(it, Item::Comment(_)));
        match first {
            None => Err(syntax(1, 1, "empty document: expected `page` or `diagram`")),
            Some((Item::Page { .. }, _)) => self.build_book(),
            Some((Item::Diagram, _)) => self.build_diagram(),
            Some((_, &(line, _))) => Err(syntax(line, 1, "document must start with `page` or `diagram`")),
        }
    }

    fn build_book(&self) -> Result<Built, ParseError> {
        let mut st: Option<BookState> = None;
        let mut images: Vec<(usize, usize, &str, &Vec<String>)> = Vec::new();
        let mut arcs: Vec<(usize, usize, usize, &Vec<String>)> = Vec::new();
        for (item, &(line, col)) in self.items.iter().zip(&self.pos) {
            let invalid = |m: String| err(line, 1, ErrorKind::Invalid(m));
            match item {
                Item::Comment(_) => {}
                Item::Page { g, r } => {
                    if st.is_some() {
                        return Err(invalid("only one `page` line is allowed".into()));
                    }
                    let page = standard_page(*g, *r).map_err(|e| invalid(e.to_string()))?;
                    st = Some(BookState { page, g: *g, r: *r, curves: BTreeMap::new(), letters: Vec::new() });
                }
                Item::Curve { name, class, winding, hsym } => {
                    let s = st.as_mut().expect("page comes first");
                    let k = 2 * s.g + s.r - 1;
                    if class.len() != k {
                        return Err(invalid(format!("curve {name} has {} coordinates, page has {k} bands", class.len())));
                    }
                    let c = s.page.new_curve(name, class.clone(), *winding, *hsym).map_err(|e| invalid(e.to_string()))?;
                    s.page.define(c.clone()).map_err(|e| invalid(e.to_string()))?;
                    s.curves.insert(name.clone(), c);
                }
                Item::Twist { name, sign } => {
                    let s = st.as_mut().expect("page comes first");
                    let curve = s.curves.get(name).ok_or_else(|| err(line, col, ErrorKind::UndeclaredCurve(name.clone())))?;
                    s.letters.push(TwistLetter { curve: curve.clone(), sign: *sign });
                }
                Item::Stabilize { kind, b1, b2 } => {
                    let s = st.take().expect("page comes first");
                    let ob = OpenBook::new(s.page, TwistWord { letters: s.letters }).map_err(|e| invalid(e.to_string()))?;
                    let new = stabilize(&ob, *kind, (*b1, *b2)).map_err(|e| invalid(e.to_string()))?;
                    let (g, r) = (new.page().genus(), new.page().boundary_count());
                    let mut curves = BTreeMap::new();
                    for name in s.curves.keys() {
                        curves.insert(name.clone(), new.page().curve(name).expect("adopted").clone());
                    }
                    let fresh = new.word().letters.last().expect("stabilization twist").curve.clone();
                    curves.insert(fresh.name.clone(), fresh);
                    st = Some(BookState { page: new.page().clone(), g, r, curves, letters: new.word().letters.clone() });
                }
                Item::Image { generator, word } => images.push((line, col, generator, word)),
                Item::ArcImage { boundary, word } => arcs.push((line, col, *boundary, word)),
                Item::Diagram | Item::Component { .. } | Item::Link { .. } => {
                    return Err(invalid("diagram lines are not allowed in an open book document".into()))
                }
            }
        }
        let s = st.expect("page comes first");
        let ob = OpenBook::new(s.page, TwistWord { letters: s.letters }).map_err(|e| err(1, 1, ErrorKind::Invalid(e.to_string())))?;
        let phi = if images.is_empty() && arcs.is_empty() {
            None
        } else {
            let names = generator_names(&ob);
            let mut phi = MonodromyEndomorphism::identity(&ob);
            for (line, col, gen, word) in images {
                let i = names.iter().position(|n| n == gen).ok_or_else(|| err(line, col, ErrorKind::Invalid(format!("unknown generator `{gen}`"))))?;
                phi.images[i] = FreeWord::parse(&word.join(" "), &names).map_err(|e| err(line, 1, ErrorKind::Invalid(e.to_string())))?;
            }
            for (line, col, j, word) in arcs {
                if j < 2 || j > ob.page().boundary_count() {
                    return Err(err(line, col, ErrorKind::Invalid(format!("arc boundary {j} not in 2..={}", ob.page().boundary_count()))));
                }
                phi.arc_loops[j - 2] = FreeWord::parse(&word.join(" "), &names).map_err(|e| err(line, 1, ErrorKind::Invalid(e.to_string())))?;
            }
            Some(phi)
        };
        Ok(Built { subject: Subject::OpenBook(ob), phi })
    }

    fn build_diagram(&self) -> Result<Built, ParseError> {
        let mut d = ContactSurgeryDiagram::new();
        let mut seen: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (item, &(line, col)) in self.items.iter().zip(&self.pos) {
            let invalid = |m: &str| err(line, 1, ErrorKind::Invalid(m.to_string()));
            match item {
                Item::Comment(_) => {}
                Item::Diagram if d.is_empty() && seen.is_empty() => {}
                Item::Component { name, tb, rot, coeff } => {
                    if d.index_of(name).is_some() {
                        return Err(invalid(&format!("component {name} declared twice")));
                    }
                    d.push(SurgeryComponent {
                        name: name.clone(),
                        kind: ComponentKind::Legendrian,
                        tb: (*tb).into(),
                        rotation: (*rot).into(),
                        coefficient: coeff.clone(),
                    });
                }
                Item::Link { a, b, value } => {
                    let find = |n: &String| d.index_of(n).ok_or_else(|| err(line, col, ErrorKind::UndeclaredComponent(n.clone())));
                    let (i, j) = (find(a)?, find(b)?);
                    if i == j {
                        return Err(invalid("a component does not link itself; use tb"));
                    }
                    let key = (i.min(j), i.max(j));
                    if let Some(old) = seen.insert(key, *value) {
                        if old != *value {
                            return Err(err(line, 1, ErrorKind::AsymmetricLink(a.clone(), b.clone())));
                        }
                    }
                    d.set_link(i, j, (*value).into());
                }
                _ => return Err(invalid("only component and link lines are allowed in a diagram document")),
            }
        }
        Ok(Built { subject: Subject::Diagram(d), phi: None })
    }
}

fn render_coeff(q: &BigRational) -> String {
    if q.is_integer() {
        let n = q.to_integer();
        if n > BigInt::zero() {
            format!("+{n}")
        } else {
            n.to_string()
        }
    } else {
        q.to_string()
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Comment(c) if c.is_empty() => write!(f, "#"),
            Item::Comment(c) => write!(f, "# {c}"),
            Item::Page { g, r } => write!(f, "page g={g} r={r}"),
            Item::Curve { name, class, winding, hsym } => {
                let cls: Vec<String> = class.iter().map(ToString::to_string).collect();
                write!(f, "curve {name} class=[{}] winding={winding}{}", cls.join(","), if *hsym { " hsym" } else { "" })
            }
            Item::Twist { name, sign } => write!(f, "twist {}{name}", if *sign > 0 { '+' } else { '-' }),
            Item::Stabilize { kind, b1, b2 } => {
                write!(f, "stabilize {} {b1} {b2}", if *kind == Stabilization::Positive { "pos" } else { "neg" })
            }
            Item::Image { generator, word } => write!(f, "image {generator} {}", word.join(" ")),
            Item::ArcImage { boundary, word } => write!(f, "arcimage {boundary} {}", word.join(" ")),
            Item::Diagram => write!(f, "diagram"),
            Item::Component { name, tb, rot, coeff } => write!(f, "component {name} tb={tb} rot={rot} coeff={}", render_coeff(coeff)),
            Item::Link { a, b, value } => write!(f, "link {a} {b} {value}"),
        }
    }
}

pub fn render(doc: &InputDocument) -> String {
    doc.items.iter().map(|i| format!("{}\n", i.to_string().trim_end())).collect()
}

/// Document text for an open book on a standard page: the page, every curve in its word, and the word.
pub fn render_openbook(ob: &OpenBook, header: &[String]) -> Option<String> {
    let mut items: Vec<Item> = header.iter().map(|h| Item::Comment(h.clone())).collect();
    let p = ob.page();
    if standard_page(p.genus(), p.boundary_count()).ok()?.feet() != p.feet() {
        return None;
    }
    items.push(Item::Page { g: p.genus(), r: p.boundary_count() });
    let mut done = Vec::new();
    for l in &ob.word().letters {
        if !done.contains(&l.curve.name) {
            done.push(l.curve.name.clone());
            items.push(Item::Curve {
                name: l.curve.name.clone(),
                class: l.curve.homology.clone(),
                winding: l.curve.winding,
                hsym: l.curve.h_symmetric,
            });
        }
    }
    for l in &ob.word().letters {
        items.push(Item::Twist { name: l.curve.name.clone(), sign: l.sign });
    }
    let pos = (1..=items.len()).map(|l| (l, 1)).collect();
    Some(render(&InputDocument { items, pos }))
}
