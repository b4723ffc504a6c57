//! The text format: one statement per line, blocks for categories.
//!
//! ```text
//! field rat
//! space X = {x0, x1}
//! space I = {i0, i1}
//! over X -> I : x0=i0, x1=i1
//! map phi : I -> I : i0=i1, i1=i1
//! kernel k : X -> X over phi
//! k x0 = {x1: 1/2}
//! bundle V over I : i0=2, i1=1
//! category C
//!   objects a, b
//!   arrow f : a -> b
//! end
//! presheaf P on C : a=2, b=1
//! P f = [0, 1]
//! monoidal M = chain-3-max
//! theory T = fq_modules(2, 3)
//! model A = free(T, 2)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use sketchy_core::arith::{PrimeField, Rational};
use sketchy_core::dayconv::{monoidal_fixtures, MonoidalFinCategory};
use sketchy_core::fibered::{FinMap, LinearBundle};
use sketchy_core::fincat::{check_category, FinCategory, Presheaf};
use sketchy_core::kernels::{AtomicMeasure, BasedSpace, Kernel, MeasSpace};
use sketchy_core::site::{Cover, FiniteSite};
use sketchy_core::theory::{FiniteAlgebra, Model, MonoidActions, TheoryPresentation};

use crate::syntax::{error, is_word, tokenize, Cursor, ErrorKind, PResult, Pos, Token};

const KEYWORDS: &[&str] =
    &["field", "space", "over", "map", "bundle", "kernel", "category", "presheaf", "monoidal", "theory", "model", "end"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rat,
    Prime(u32),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Option<FieldSpec> {
        if s == "rat" || s == "Q" {
            return Some(FieldSpec::Rat);
        }
        let p: u32 = s.strip_prefix('F').unwrap_or(s).parse().ok()?;
        PrimeField::new(p).map(|_| FieldSpec::Prime(p))
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rat => f.write_str("rat"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpaceDecl {
    pub name: String,
    pub points: Vec<String>,
    /// Base space and base map, if an `over` line was given.
    pub over: Option<(String, Vec<usize>)>,
}

#[derive(Debug, Clone)]
pub struct MapDecl {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BundleDecl {
    pub name: String,
    pub base: String,
    pub dims: Vec<usize>,
}

/// A kernel as written; the support condition is checked on resolution.
#[derive(Debug, Clone)]
pub struct KernelDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub phi: Option<String>,
    pub rows: Vec<Vec<(usize, Rational)>>,
}

#[derive(Debug, Clone)]
pub struct CategoryDecl {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<(String, usize, usize)>,
    /// `(g, f, g∘f)` over non-identity arrows, as arrow indices of the built
    /// category.
    pub compose: Vec<(usize, usize, usize)>,
    pub covers: Vec<(usize, Vec<usize>)>,
    pub cat: Arc<FinCategory>,
    pub site: Option<FiniteSite>,
}

#[derive(Debug, Clone)]
pub enum PresheafBody {
    Explicit,
    Representable(String),
    Constant(usize),
    Empty,
}

#[derive(Debug, Clone)]
pub struct PresheafDecl {
    pub name: String,
    pub on: String,
    pub body: PresheafBody,
    pub presheaf: Presheaf,
}

#[derive(Debug, Clone)]
pub struct MonoidalDecl {
    pub name: String,
    pub spec: String,
    pub monoidal: MonoidalFinCategory,
}

#[derive(Debug, Clone)]
pub struct TheoryDecl {
    pub name: String,
    pub spec: String,
    pub theory: Arc<TheoryPresentation>,
}

#[derive(Debug, Clone)]
pub enum ModelSpec {
    Free(usize),
    Of(String),
}

#[derive(Debug, Clone)]
pub struct ModelDecl {
    pub name: String,
    pub theory: String,
    pub spec: ModelSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    Decl(Kind, usize),
    /// The `over` line of a space.
    Over(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Space,
    Map,
    Bundle,
    Kernel,
    Category,
    Presheaf,
    Monoidal,
    Theory,
    Model,
}

/// A parsed document. Declarations keep their order; names are global.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub field: Option<FieldSpec>,
    pub spaces: Vec<SpaceDecl>,
    pub maps: Vec<MapDecl>,
    pub bundles: Vec<BundleDecl>,
    pub kernels: Vec<KernelDecl>,
    pub categories: Vec<CategoryDecl>,
    pub presheaves: Vec<PresheafDecl>,
    pub monoidals: Vec<MonoidalDecl>,
    pub theories: Vec<TheoryDecl>,
    pub models: Vec<ModelDecl>,
    order: Vec<Entry>,
    names: HashMap<String, (Kind, usize)>,
}

/// A failure to turn a declaration into a core value.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolveError {
    Missing(String),
    Core(sketchy_core::Error),
}

impl std::fmt::Display for ResolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResolveError::Missing(n) => write!(f, "no declaration named {n}"),
            ResolveError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ResolveError {}

impl From<sketchy_core::Error> for ResolveError {
    fn from(e: sketchy_core::Error) -> Self {
        ResolveError::Core(e)
    }
}

fn inconsistent(pos: Pos, msg: impl Into<String>) -> crate::syntax::ParseError {
    error(pos, ErrorKind::Inconsistent, msg)
}

fn undeclared(pos: Pos, msg: impl Into<String>) -> crate::syntax::ParseError {
    error(pos, ErrorKind::Undeclared, msg)
}

pub fn parse_rational(t: &Token) -> PResult<Rational> {
    let bad = || error(t.pos, ErrorKind::Syntax, format!("expected a rational, found `{}`", t.text));
    let (n, d) = match t.text.split_once('/') {
        Some((n, d)) => (n.parse::<i128>().map_err(|_| bad())?, d.parse::<i128>().map_err(|_| bad())?),
        None => (t.text.parse::<i128>().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

struct Pending {
    /// Explicit presheaves still missing arrow actions: decl index, header
    /// position, tables so far.
    presheaves: Vec<(usize, Pos, Vec<usize>, Vec<Option<Vec<u32>>>)>,
}

impl Document {
    pub fn parse(src: &str) -> PResult<Document> {
        let mut doc = Document::default();
        let mut pending = Pending { presheaves: Vec::new() };
        let lines: Vec<&str> = src.lines().collect();
        let mut i = 0;
        while i < lines.len() {
            let line_no = i + 1;
            let toks = tokenize(lines[i], line_no);
            i += 1;
            if toks.is_empty() {
                continue;
            }
            let mut c = Cursor::new(&toks, line_no, lines[line_no - 1].chars().count());
            let head = &toks[0];
            match head.text.as_str() {
                "category" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.finish()?;
                    let start = i;
                    let mut body = Vec::new();
                    loop {
                        let Some(l) = lines.get(i) else {
                            return Err(error(Pos { line: start, col: 1 }, ErrorKind::Syntax, "category block without `end`"));
                        };
                        i += 1;
                        let t = tokenize(l, i);
                        if t.first().is_some_and(|t| t.is("end")) {
                            if t.len() > 1 {
                                return Err(error(t[1].pos, ErrorKind::Syntax, "unexpected text after `end`"));
                            }
                            body.push((i, l.chars().count(), t));
                            break;
                        }
                        if !t.is_empty() {
                            body.push((i, l.chars().count(), t));
                        }
                    }
                    let decl = parse_category(name, &body)?;
                    doc.declare(Kind::Category, decl.name.clone());
                    doc.categories.push(decl);
                }
                "end" => return Err(error(head.pos, ErrorKind::Syntax, "`end` outside a category block")),
                "field" => {
                    c.next()?;
                    let t = c.word("a field")?;
                    let f = FieldSpec::parse(&t.text)
                        .ok_or_else(|| error(t.pos, ErrorKind::Syntax, format!("unknown field `{}`", t.text)))?;
                    c.finish()?;
                    if doc.field.is_some() {
                        return Err(inconsistent(head.pos, "field declared twice"));
                    }
                    doc.field = Some(f);
                }
                "space" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect("=")?;
                    c.expect("{")?;
                    let pts = c.list("}", |c| c.word("a point").cloned())?;
                    c.finish()?;
                    let mut points: Vec<String> = Vec::new();
                    for p in pts {
                        if points.contains(&p.text) {
                            return Err(inconsistent(p.pos, format!("duplicate point {}", p.text)));
                        }
                        points.push(p.text);
                    }
                    doc.declare(Kind::Space, name.clone());
                    doc.spaces.push(SpaceDecl { name, points, over: None });
                }
                "over" => {
                    c.next()?;
                    let x = doc.space_ref(&mut c)?;
                    c.expect("->")?;
                    let b = doc.space_ref(&mut c)?;
                    c.expect(":")?;
                    let table = doc.assignment(&mut c, x, b)?;
                    c.finish()?;
                    if doc.spaces[x].over.is_some() {
                        return Err(inconsistent(head.pos, format!("space {} is already over a base", doc.spaces[x].name)));
                    }
                    if doc.kernels.iter().any(|k| k.source == doc.spaces[x].name || k.target == doc.spaces[x].name) {
                        return Err(inconsistent(head.pos, "base maps must precede the kernels that use them"));
                    }
                    let base = doc.spaces[b].name.clone();
                    doc.spaces[x].over = Some((base, table));
                    doc.order.push(Entry::Over(x));
                }
                "map" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect(":")?;
                    let a = doc.space_ref(&mut c)?;
                    c.expect("->")?;
                    let b = doc.space_ref(&mut c)?;
                    c.expect(":")?;
                    let table = doc.assignment(&mut c, a, b)?;
                    c.finish()?;
                    let (domain, codomain) = (doc.spaces[a].name.clone(), doc.spaces[b].name.clone());
                    doc.declare(Kind::Map, name.clone());
                    doc.maps.push(MapDecl { name, domain, codomain, table });
                }
                "bundle" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect("over")?;
                    let b = doc.space_ref(&mut c)?;
                    c.expect(":")?;
                    let dims = doc.point_values(&mut c, b, |c| c.number("a dimension"))?;
                    c.finish()?;
                    let base = doc.spaces[b].name.clone();
                    doc.declare(Kind::Bundle, name.clone());
                    doc.bundles.push(BundleDecl { name, base, dims });
                }
                "kernel" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect(":")?;
                    let x = doc.space_ref(&mut c)?;
                    c.expect("->")?;
                    let y = doc.space_ref(&mut c)?;
                    let phi = if c.eat("over") { Some(doc.map_ref(&mut c)?) } else { None };
                    c.finish()?;
                    let (bx, by) = (doc.base_name(x), doc.base_name(y));
                    match phi {
                        Some(m) => {
                            let m = &doc.maps[m];
                            if m.domain != bx || m.codomain != by {
                                return Err(inconsistent(
                                    head.pos,
                                    format!("{} runs {} -> {}, not {bx} -> {by}", m.name, m.domain, m.codomain),
                                ));
                            }
                        }
                        None if bx != by => {
                            return Err(inconsistent(head.pos, format!("kernel between bases {bx} and {by} needs `over`")));
                        }
                        None => {}
                    }
                    let decl = KernelDecl {
                        name: name.clone(),
                        source: doc.spaces[x].name.clone(),
                        target: doc.spaces[y].name.clone(),
                        phi: phi.map(|m| doc.maps[m].name.clone()),
                        rows: vec![Vec::new(); doc.spaces[x].points.len()],
                    };
                    doc.declare(Kind::Kernel, name);
                    doc.kernels.push(decl);
                }
                "presheaf" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    if c.eat("=") {
                        let kind = c.word("a presheaf constructor")?;
                        c.expect("(")?;
                        let on_tok = c.word("a category")?;
                        let (on, cat) = doc.category_ref(on_tok)?;
                        let body = match kind.text.as_str() {
                            "representable" => {
                                c.expect(",")?;
                                let ob = c.word("an object")?;
                                cat.object_by_name(&ob.text)
                                    .ok_or_else(|| undeclared(ob.pos, format!("object {} of {on}", ob.text)))?;
                                PresheafBody::Representable(ob.text.clone())
                            }
                            "constant" => {
                                c.expect(",")?;
                                PresheafBody::Constant(c.number("a size")?)
                            }
                            "empty" => PresheafBody::Empty,
                            other => {
                                return Err(error(kind.pos, ErrorKind::Syntax, format!("unknown presheaf constructor `{other}`")))
                            }
                        };
                        c.expect(")")?;
                        c.finish()?;
                        let presheaf = match &body {
                            PresheafBody::Representable(ob) => {
                                let ob = cat.object_by_name(ob).expect("checked");
                                Presheaf::representable(cat, ob)
                            }
                            PresheafBody::Constant(k) => Presheaf::constant(cat, *k),
                            _ => Presheaf::empty(cat),
                        };
                        doc.declare(Kind::Presheaf, name.clone());
                        doc.presheaves.push(PresheafDecl { name, on, body, presheaf });
                    } else {
                        c.expect("on")?;
                        let on_tok = c.word("a category")?;
                        let (on, cat) = doc.category_ref(on_tok)?;
                        c.expect(":")?;
                        let sizes = c.rest(|c| {
                            let ob = c.word("an object")?;
                            let o = cat
                                .object_by_name(&ob.text)
                                .ok_or_else(|| undeclared(ob.pos, format!("object {} of {on}", ob.text)))?;
                            c.expect("=")?;
                            Ok((o, ob.pos, c.number("a size")?))
                        })?;
                        let mut sz = vec![None; cat.object_count()];
                        for (o, pos, s) in sizes {
                            if sz[o].replace(s).is_some() {
                                return Err(inconsistent(pos, format!("size of {} given twice", cat.object_name(o))));
                            }
                        }
                        if let Some(o) = sz.iter().position(Option::is_none) {
                            return Err(inconsistent(head.pos, format!("no size for object {}", cat.object_name(o))));
                        }
                        let sizes: Vec<usize> = sz.into_iter().map(Option::unwrap).collect();
                        let tables = cat
                            .arrows()
                            .map(|f| if cat.is_identity(f) { Some((0..sizes[cat.dst(f)] as u32).collect()) } else { None })
                            .collect();
                        let presheaf = Presheaf::empty(cat);
                        pending.presheaves.push((doc.presheaves.len(), head.pos, sizes, tables));
                        doc.declare(Kind::Presheaf, name.clone());
                        doc.presheaves.push(PresheafDecl { name, on, body: PresheafBody::Explicit, presheaf });
                    }
                }
                "monoidal" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect("=")?;
                    let spec_tok = c.word("a monoidal category")?;
                    let spec = spec_tok.text.clone();
                    let monoidal = if let Some(n) = spec.strip_prefix("finset-product-") {
                        n.parse().ok().map(MonoidalFinCategory::finset_product)
                    } else if let Some(n) = spec.strip_prefix("finset-coproduct-") {
                        n.parse().ok().map(MonoidalFinCategory::finset_coproduct)
                    } else {
                        monoidal_fixtures().into_iter().find(|m| m.name() == spec)
                    }
                    .ok_or_else(|| undeclared(spec_tok.pos, format!("unknown monoidal category `{spec}`")))?;
                    c.finish()?;
                    doc.declare(Kind::Monoidal, name.clone());
                    doc.monoidals.push(MonoidalDecl { name, spec, monoidal });
                }
                "theory" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect("=")?;
                    let (spec, theory) = parse_theory(&mut c)?;
                    c.finish()?;
                    doc.declare(Kind::Theory, name.clone());
                    doc.theories.push(TheoryDecl { name, spec, theory: Arc::new(theory) });
                }
                "model" => {
                    c.next()?;
                    let name = doc.fresh_name(&mut c)?;
                    c.expect("=")?;
                    let kind = c.word("`free` or `of`")?;
                    c.expect("(")?;
                    let t = c.word("a theory")?;
                    let ti = match doc.names.get(&t.text) {
                        Some(&(Kind::Theory, i)) => i,
                        _ => return Err(undeclared(t.pos, format!("theory {}", t.text))),
                    };
                    c.expect(",")?;
                    let spec = match kind.text.as_str() {
                        "free" => ModelSpec::Free(c.number("a rank")?),
                        "of" => {
                            let p = c.word("a presheaf")?;
                            match doc.names.get(&p.text) {
                                Some(&(Kind::Presheaf, pi)) => {
                                    if !Arc::ptr_eq(doc.presheaves[pi].presheaf.cat(), doc.theories[ti].theory.theory())
                                        && **doc.presheaves[pi].presheaf.cat() != **doc.theories[ti].theory.theory()
                                    {
                                        return Err(inconsistent(p.pos, format!("{} is not a presheaf on {}", p.text, t.text)));
                                    }
                                }
                                _ => return Err(undeclared(p.pos, format!("presheaf {}", p.text))),
                            }
                            ModelSpec::Of(p.text.clone())
                        }
                        other => return Err(error(kind.pos, ErrorKind::Syntax, format!("unknown model constructor `{other}`"))),
                    };
                    c.expect(")")?;
                    c.finish()?;
                    doc.declare(Kind::Model, name.clone());
                    doc.models.push(ModelDecl { name, theory: t.text.clone(), spec });
                }
                _ => match doc.names.get(&head.text).copied() {
                    Some((Kind::Kernel, k)) => {
                        c.next()?;
                        doc.kernel_row(&mut c, k)?;
                    }
                    Some((Kind::Presheaf, p)) => {
                        c.next()?;
                        let Some(slot) = pending.presheaves.iter_mut().find(|e| e.0 == p) else {
                            return Err(inconsistent(head.pos, format!("{} is not an explicit presheaf", head.text)));
                        };
                        let cat = doc.presheaves[p].presheaf.cat().clone();
                        let f = c.word("an arrow")?;
                        let a = cat
                            .arrow_by_name(&f.text)
                            .ok_or_else(|| undeclared(f.pos, format!("arrow {} of {}", f.text, doc.presheaves[p].on)))?;
                        c.expect("=")?;
                        c.expect("[")?;
                        let vals = c.list("]", |c| {
                            let pos = c.pos();
                            Ok((pos, c.number("an element")?))
                        })?;
                        c.finish()?;
                        let sizes = &slot.2;
                        if cat.is_identity(a) || slot.3[a].is_some() {
                            return Err(inconsistent(f.pos, format!("action of {} given twice", f.text)));
                        }
                        if vals.len() != sizes[cat.dst(a)] {
                            return Err(inconsistent(
                                f.pos,
                                format!("action of {} needs {} entries", f.text, sizes[cat.dst(a)]),
                            ));
                        }
                        if let Some((pos, v)) = vals.iter().find(|(_, v)| *v >= sizes[cat.src(a)]) {
                            return Err(inconsistent(*pos, format!("element {v} out of range")));
                        }
                        slot.3[a] = Some(vals.into_iter().map(|(_, v)| v as u32).collect());
                    }
                    _ if KEYWORDS.contains(&head.text.as_str()) => unreachable!(),
                    _ => return Err(undeclared(head.pos, format!("`{}` is not a keyword or a declared name", head.text))),
                },
            }
        }
        for (p, pos, sizes, tables) in pending.presheaves {
            let cat = doc.presheaves[p].presheaf.cat().clone();
            if let Some(f) = tables.iter().position(Option::is_none) {
                return Err(inconsistent(pos, format!("no action given for arrow {}", cat.arrow_name(f))));
            }
            let tables = tables.into_iter().map(Option::unwrap).collect();
            doc.presheaves[p].presheaf =
                Presheaf::new(cat, sizes, tables).map_err(|e| inconsistent(pos, e.to_string()))?;
        }
        Ok(doc)
    }

    fn declare(&mut self, kind: Kind, name: String) {
        let idx = match kind {
            Kind::Space => self.spaces.len(),
            Kind::Map => self.maps.len(),
            Kind::Bundle => self.bundles.len(),
            Kind::Kernel => self.kernels.len(),
            Kind::Category => self.categories.len(),
            Kind::Presheaf => self.presheaves.len(),
            Kind::Monoidal => self.monoidals.len(),
            Kind::Theory => self.theories.len(),
            Kind::Model => self.models.len(),
        };
        self.names.insert(name, (kind, idx));
        self.order.push(Entry::Decl(kind, idx));
    }

    fn fresh_name(&self, c: &mut Cursor<'_>) -> PResult<String> {
        let t = c.word("a name")?;
        if KEYWORDS.contains(&t.text.as_str()) || t.text == "->" || t.text == "." {
            return Err(error(t.pos, ErrorKind::Syntax, format!("`{}` is reserved", t.text)));
        }
        if self.names.contains_key(&t.text) {
            return Err(inconsistent(t.pos, format!("{} is already declared", t.text)));
        }
        Ok(t.text.clone())
    }

    fn space_ref(&self, c: &mut Cursor<'_>) -> PResult<usize> {
        let t = c.word("a space")?;
        match self.names.get(&t.text) {
            Some(&(Kind::Space, i)) => Ok(i),
            _ => Err(undeclared(t.pos, format!("space {}", t.text))),
        }
    }

    fn map_ref(&self, c: &mut Cursor<'_>) -> PResult<usize> {
        let t = c.word("a map")?;
        match self.names.get(&t.text) {
            Some(&(Kind::Map, i)) => Ok(i),
            _ => Err(undeclared(t.pos, format!("map {}", t.text))),
        }
    }

    fn point(&self, c: &mut Cursor<'_>, space: usize) -> PResult<usize> {
        let t = c.word("a point")?;
        let s = &self.spaces[space];
        s.points
            .iter()
            .position(|p| *p == t.text)
            .ok_or_else(|| undeclared(t.pos, format!("point {} of {}", t.text, s.name)))
    }

    /// `p=v, ...` covering every point of `space` exactly once.
    fn point_values<T: Clone>(
        &self,
        c: &mut Cursor<'_>,
        space: usize,
        mut value: impl FnMut(&mut Cursor<'_>) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        let start = c.pos();
        let items = c.rest(|c| {
            let pos = c.pos();
            let p = self.point(c, space)?;
            c.expect("=")?;
            Ok((pos, p, value(c)?))
        })?;
        let mut out: Vec<Option<T>> = vec![None; self.spaces[space].points.len()];
        for (pos, p, v) in items {
            if out[p].replace(v).is_some() {
                return Err(inconsistent(pos, format!("point {} assigned twice", self.spaces[space].points[p])));
            }
        }
        if let Some(p) = out.iter().position(Option::is_none) {
            return Err(inconsistent(start, format!("point {} not assigned", self.spaces[space].points[p])));
        }
        Ok(out.into_iter().map(Option::unwrap).collect())
    }

    fn assignment(&self, c: &mut Cursor<'_>, from: usize, to: usize) -> PResult<Vec<usize>> {
        self.point_values(c, from, |c| self.point(c, to))
    }

    fn kernel_row(&mut self, c: &mut Cursor<'_>, k: usize) -> PResult<()> {
        let (x, y) = {
            let kd = &self.kernels[k];
            (self.names[&kd.source].1, self.names[&kd.target].1)
        };
        let xp = c.pos();
        let xi = self.point(c, x)?;
        c.expect("=")?;
        c.expect("{")?;
        let masses = c.list("}", |c| {
            let pos = c.pos();
            let y = self.point(c, y)?;
            c.expect(":")?;
            let m = parse_rational(c.word("a mass")?)?;
            Ok((pos, y, m))
        })?;
        c.finish()?;
        if !self.kernels[k].rows[xi].is_empty() {
            return Err(inconsistent(xp, format!("row {} given twice", self.spaces[x].points[xi])));
        }
        let mut row: Vec<(usize, Rational)> = Vec::new();
        for (pos, y, m) in masses {
            if row.iter().any(|e| e.0 == y) {
                return Err(inconsistent(pos, format!("point {} given twice", self.spaces[self.names[&self.kernels[k].target].1].points[y])));
            }
            if m != Rational::from_integer(0) {
                row.push((y, m));
            }
        }
        row.sort_by_key(|e| e.0);
        self.kernels[k].rows[xi] = row;
        Ok(())
    }

    fn base_name(&self, space: usize) -> String {
        self.spaces[space].over.as_ref().map_or_else(|| "*".to_string(), |o| o.0.clone())
    }

    fn category_ref(&self, t: &Token) -> PResult<(String, Arc<FinCategory>)> {
        let (head, site) = match t.text.strip_suffix(".site") {
            Some(h) => (h, true),
            None => (t.text.as_str(), false),
        };
        let cat = match self.names.get(head) {
            Some(&(Kind::Category, i)) if !site => Some(self.categories[i].cat.clone()),
            Some(&(Kind::Monoidal, i)) if !site => Some(self.monoidals[i].monoidal.base().clone()),
            Some(&(Kind::Theory, i)) => {
                let t = &self.theories[i].theory;
                Some(if site { t.site().cat().clone() } else { t.theory().clone() })
            }
            _ => None,
        };
        cat.map(|c| (t.text.clone(), c)).ok_or_else(|| undeclared(t.pos, format!("category {}", t.text)))
    }

    pub fn kind_of(&self, name: &str) -> Option<Kind> {
        self.names.get(name).map(|e| e.0)
    }

    fn index(&self, name: &str, kind: Kind) -> Result<usize, ResolveError> {
        match self.names.get(name) {
            Some(&(k, i)) if k == kind => Ok(i),
            _ => Err(ResolveError::Missing(name.to_string())),
        }
    }

    pub fn space(&self, name: &str) -> Result<MeasSpace, ResolveError> {
        let s = &self.spaces[self.index(name, Kind::Space)?];
        Ok(MeasSpace::new(s.points.clone())?)
    }

    pub fn based_space(&self, name: &str) -> Result<BasedSpace, ResolveError> {
        let s = &self.spaces[self.index(name, Kind::Space)?];
        let space = MeasSpace::new(s.points.clone())?;
        Ok(match &s.over {
            None => BasedSpace::trivial(space),
            Some((b, table)) => BasedSpace::new(space, self.space(b)?, FinMap::new(table.clone(), self.space(b)?.len())?)?,
        })
    }

    pub fn map(&self, name: &str) -> Result<FinMap, ResolveError> {
        let m = &self.maps[self.index(name, Kind::Map)?];
        Ok(FinMap::new(m.table.clone(), self.space(&m.codomain)?.len())?)
    }

    pub fn kernel(&self, name: &str) -> Result<Kernel, ResolveError> {
        let k = &self.kernels[self.index(name, Kind::Kernel)?];
        let source = self.based_space(&k.source)?;
        let target = self.based_space(&k.target)?;
        let phi = match &k.phi {
            Some(m) => self.map(m)?,
            None => FinMap::identity(source.base().len()),
        };
        let n = target.len();
        let rows = k.rows.iter().map(|r| AtomicMeasure::from_pairs(n, r.iter().copied())).collect::<Result<_, _>>()?;
        Ok(Kernel::new(source, target, phi, rows)?)
    }

    pub fn bundle<F: sketchy_core::arith::Field>(&self, name: &str, field: &F) -> Result<LinearBundle<F>, ResolveError> {
        let b = &self.bundles[self.index(name, Kind::Bundle)?];
        let points = self.spaces[self.index(&b.base, Kind::Space)?].points.clone();
        Ok(LinearBundle::with_names(field, points, b.dims.clone())?)
    }

    pub fn category(&self, name: &str) -> Result<&CategoryDecl, ResolveError> {
        Ok(&self.categories[self.index(name, Kind::Category)?])
    }

    pub fn presheaf(&self, name: &str) -> Result<&Presheaf, ResolveError> {
        Ok(&self.presheaves[self.index(name, Kind::Presheaf)?].presheaf)
    }

    pub fn monoidal(&self, name: &str) -> Result<&MonoidalFinCategory, ResolveError> {
        Ok(&self.monoidals[self.index(name, Kind::Monoidal)?].monoidal)
    }

    pub fn theory(&self, name: &str) -> Result<&Arc<TheoryPresentation>, ResolveError> {
        Ok(&self.theories[self.index(name, Kind::Theory)?].theory)
    }

    /// Builds a model; `bound` limits reflection rounds and free-algebra
    /// generation.
    pub fn model(&self, name: &str, bound: usize) -> Result<(Model, Arc<TheoryPresentation>), ResolveError> {
        let m = &self.models[self.index(name, Kind::Model)?];
        let t = self.theory(&m.theory)?.clone();
        let model = match &m.spec {
            ModelSpec::Free(k) => {
                let a = FiniteAlgebra::free(*k, &t, bound)?;
                Model::new(a.to_presheaf(&t), &t)?
            }
            ModelSpec::Of(p) => Model::new(self.presheaf(p)?.clone(), &t)?,
        };
        Ok((model, t))
    }

    /// Adds a space (and its base line) unless one of that name exists.
    pub fn add_based_space(&mut self, name: &str, space: &BasedSpace, base_name: Option<&str>) {
        if self.names.contains_key(name) {
            return;
        }
        self.declare(Kind::Space, name.to_string());
        self.spaces.push(SpaceDecl { name: name.to_string(), points: space.space().names().to_vec(), over: None });
        if let Some(b) = base_name {
            if !self.names.contains_key(b) {
                self.declare(Kind::Space, b.to_string());
                self.spaces.push(SpaceDecl { name: b.to_string(), points: space.base().names().to_vec(), over: None });
            }
            let x = self.names[name].1;
            self.spaces[x].over = Some((b.to_string(), space.map().table().to_vec()));
            self.order.push(Entry::Over(x));
        }
    }

    pub fn add_map(&mut self, name: &str, domain: &str, codomain: &str, map: &FinMap) {
        if self.names.contains_key(name) {
            return;
        }
        self.declare(Kind::Map, name.to_string());
        self.maps.push(MapDecl {
            name: name.to_string(),
            domain: domain.to_string(),
            codomain: codomain.to_string(),
            table: map.table().to_vec(),
        });
    }

    /// Adds a kernel between declared spaces.
    pub fn add_kernel(&mut self, name: &str, source: &str, target: &str, phi: Option<&str>, k: &Kernel) {
        self.declare(Kind::Kernel, name.to_string());
        self.kernels.push(KernelDecl {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            phi: phi.map(str::to_string),
            rows: k.rows().iter().map(|r| r.masses().to_vec()).collect(),
        });
    }

    pub fn add_presheaf(&mut self, name: &str, on: &str, p: Presheaf) {
        self.declare(Kind::Presheaf, name.to_string());
        self.presheaves.push(PresheafDecl { name: name.to_string(), on: on.to_string(), body: PresheafBody::Explicit, presheaf: p });
    }

    pub fn add_bundle(&mut self, name: &str, base: &str, dims: Vec<usize>) {
        self.declare(Kind::Bundle, name.to_string());
        self.bundles.push(BundleDecl { name: name.to_string(), base: base.to_string(), dims });
    }

    pub fn has(&self, name: &str) -> bool {
        self.names.contains_key(name)
    }

    /// The canonical text: declarations in order, kernel rows and presheaf
    /// actions right after their headers.
    pub fn print(&self) -> String {
        let mut out = String::new();
        if let Some(f) = self.field {
            writeln!(out, "field {f}").unwrap();
        }
        for &entry in &self.order {
            let (kind, i) = match entry {
                Entry::Decl(kind, i) => (kind, i),
                Entry::Over(x) => {
                    let s = &self.spaces[x];
                    let (b, table) = s.over.as_ref().expect("over line");
                    let bp = &self.spaces[self.names[b].1].points;
                    let items: Vec<String> = table.iter().enumerate().map(|(x, &t)| format!("{}={}", s.points[x], bp[t])).collect();
                    writeln!(out, "over {} -> {b} : {}", s.name, items.join(", ")).unwrap();
                    continue;
                }
            };
            match kind {
                Kind::Space => {
                    let s = &self.spaces[i];
                    writeln!(out, "space {} = {{{}}}", s.name, s.points.join(", ")).unwrap();
                }
                Kind::Map => {
                    let m = &self.maps[i];
                    let dp = &self.spaces[self.names[&m.domain].1].points;
                    let cp = &self.spaces[self.names[&m.codomain].1].points;
                    let items: Vec<String> = m.table.iter().enumerate().map(|(x, &t)| format!("{}={}", dp[x], cp[t])).collect();
                    writeln!(out, "map {} : {} -> {} : {}", m.name, m.domain, m.codomain, items.join(", ")).unwrap();
                }
                Kind::Bundle => {
                    let b = &self.bundles[i];
                    let bp = &self.spaces[self.names[&b.base].1].points;
                    let items: Vec<String> = b.dims.iter().enumerate().map(|(p, d)| format!("{}={d}", bp[p])).collect();
                    writeln!(out, "bundle {} over {} : {}", b.name, b.base, items.join(", ")).unwrap();
                }
                Kind::Kernel => {
                    let k = &self.kernels[i];
                    match &k.phi {
                        Some(phi) => writeln!(out, "kernel {} : {} -> {} over {phi}", k.name, k.source, k.target),
                        None => writeln!(out, "kernel {} : {} -> {}", k.name, k.source, k.target),
                    }
                    .unwrap();
                    let xp = &self.spaces[self.names[&k.source].1].points;
                    let yp = &self.spaces[self.names[&k.target].1].points;
                    for (x, row) in k.rows.iter().enumerate().filter(|r| !r.1.is_empty()) {
                        let items: Vec<String> = row.iter().map(|(y, m)| format!("{}: {m}", yp[*y])).collect();
                        writeln!(out, "{} {} = {{{}}}", k.name, xp[x], items.join(", ")).unwrap();
                    }
                }
                Kind::Category => print_category(&mut out, &self.categories[i]),
                Kind::Presheaf => {
                    let p = &self.presheaves[i];
                    let cat = p.presheaf.cat();
                    match &p.body {
                        PresheafBody::Representable(ob) => {
                            writeln!(out, "presheaf {} = representable({}, {ob})", p.name, p.on).unwrap()
                        }
                        PresheafBody::Constant(k) => writeln!(out, "presheaf {} = constant({}, {k})", p.name, p.on).unwrap(),
                        PresheafBody::Empty => writeln!(out, "presheaf {} = empty({})", p.name, p.on).unwrap(),
                        PresheafBody::Explicit => {
                            let sizes: Vec<String> = p
                                .presheaf
                                .sizes()
                                .enumerate()
                                .map(|(o, s)| format!("{}={s}", cat.object_name(o)))
                                .collect();
                            writeln!(out, "presheaf {} on {} : {}", p.name, p.on, sizes.join(", ")).unwrap();
                            for f in cat.arrows().filter(|&f| !cat.is_identity(f)) {
                                let t: Vec<String> = p.presheaf.table(f).iter().map(u32::to_string).collect();
                                writeln!(out, "{} {} = [{}]", p.name, cat.arrow_name(f), t.join(", ")).unwrap();
                            }
                        }
                    }
                }
                Kind::Monoidal => {
                    let m = &self.monoidals[i];
                    writeln!(out, "monoidal {} = {}", m.name, m.spec).unwrap();
                }
                Kind::Theory => {
                    let t = &self.theories[i];
                    writeln!(out, "theory {} = {}", t.name, t.spec).unwrap();
                }
                Kind::Model => {
                    let m = &self.models[i];
                    match &m.spec {
                        ModelSpec::Free(k) => writeln!(out, "model {} = free({}, {k})", m.name, m.theory),
                        ModelSpec::Of(p) => writeln!(out, "model {} = of({}, {p})", m.name, m.theory),
                    }
                    .unwrap();
                }
            }
        }
        out
    }
}

fn print_category(out: &mut String, c: &CategoryDecl) {
    writeln!(out, "category {}", c.name).unwrap();
    writeln!(out, "  objects {}", c.objects.join(", ")).unwrap();
    for (name, s, d) in &c.arrows {
        writeln!(out, "  arrow {name} : {} -> {}", c.objects[*s], c.objects[*d]).unwrap();
    }
    for &(g, f, h) in &c.compose {
        writeln!(out, "  compose {} . {} = {}", c.cat.arrow_name(g), c.cat.arrow_name(f), c.cat.arrow_name(h)).unwrap();
    }
    for (apex, legs) in &c.covers {
        let names: Vec<&str> = legs.iter().map(|&l| c.cat.arrow_name(l)).collect();
        writeln!(out, "  cover {} : {}", c.objects[*apex], names.join(", ")).unwrap();
    }
    out.push_str("end\n");
}

fn parse_category(name: String, body: &[(usize, usize, Vec<Token>)]) -> PResult<CategoryDecl> {
    let mut objects: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, usize, usize)> = Vec::new();
    let mut raw_compose: Vec<(Pos, Token, Token, Token)> = Vec::new();
    let mut raw_covers: Vec<(Pos, Token, Vec<Token>)> = Vec::new();
    let (end_line, _, _) = body.last().expect("end line");
    let end_pos = Pos { line: *end_line, col: 1 };
    let object = |objects: &[String], t: &Token| {
        objects.iter().position(|o| *o == t.text).ok_or_else(|| undeclared(t.pos, format!("object {}", t.text)))
    };
    for (line, len, toks) in &body[..body.len() - 1] {
        let mut c = Cursor::new(toks, *line, *len);
        let head = c.word("a category statement")?;
        match head.text.as_str() {
            "objects" => {
                for t in c.rest(|c| c.word("an object").cloned())? {
                    if objects.contains(&t.text) {
                        return Err(inconsistent(t.pos, format!("object {} declared twice", t.text)));
                    }
                    objects.push(t.text);
                }
            }
            "arrow" => {
                let n = c.word("an arrow name")?;
                c.expect(":")?;
                let s = object(&objects, c.word("an object")?)?;
                c.expect("->")?;
                let d = object(&objects, c.word("an object")?)?;
                c.finish()?;
                if arrows.iter().any(|a| a.0 == n.text) || n.text.starts_with("id_") {
                    return Err(inconsistent(n.pos, format!("arrow {} declared twice or reserved", n.text)));
                }
                arrows.push((n.text.clone(), s, d));
            }
            "compose" => {
                let g = c.word("an arrow")?.clone();
                c.expect(".")?;
                let f = c.word("an arrow")?.clone();
                c.expect("=")?;
                let h = c.word("an arrow")?.clone();
                c.finish()?;
                raw_compose.push((head.pos, g, f, h));
            }
            "cover" => {
                let apex = c.word("an object")?.clone();
                c.expect(":")?;
                let legs = c.rest(|c| c.word("an arrow").cloned())?;
                raw_covers.push((head.pos, apex, legs));
            }
            other => return Err(error(head.pos, ErrorKind::Syntax, format!("unknown category statement `{other}`"))),
        }
    }
    let nob = objects.len();
    let mut all: Vec<(String, usize, usize)> = (0..nob).map(|o| (format!("id_{}", objects[o]), o, o)).collect();
    all.extend(arrows.iter().cloned());
    let na = all.len();
    let arrow = |t: &Token| all.iter().position(|a| a.0 == t.text).ok_or_else(|| undeclared(t.pos, format!("arrow {}", t.text)));
    let mut comp = vec![u32::MAX; na * na];
    for g in 0..na {
        for f in 0..na {
            if all[f].2 != all[g].1 {
                continue;
            }
            if g < nob {
                comp[g * na + f] = f as u32;
            } else if f < nob {
                comp[g * na + f] = g as u32;
            }
        }
    }
    let mut compose = Vec::new();
    for (pos, g, f, h) in &raw_compose {
        let (gi, fi, hi) = (arrow(g)?, arrow(f)?, arrow(h)?);
        if gi < nob || fi < nob {
            return Err(inconsistent(*pos, "identity composites are implicit"));
        }
        if all[fi].2 != all[gi].1 {
            return Err(inconsistent(*pos, format!("{} and {} are not composable", g.text, f.text)));
        }
        if all[hi].1 != all[fi].1 || all[hi].2 != all[gi].2 {
            return Err(inconsistent(h.pos, format!("{} has the wrong endpoints", h.text)));
        }
        if comp[gi * na + fi] != u32::MAX {
            return Err(inconsistent(*pos, format!("composite {} . {} given twice", g.text, f.text)));
        }
        comp[gi * na + fi] = hi as u32;
        compose.push((gi, fi, hi));
    }
    for g in nob..na {
        for f in nob..na {
            if all[f].2 == all[g].1 && comp[g * na + f] == u32::MAX {
                return Err(inconsistent(end_pos, format!("composite {} . {} is not given", all[g].0, all[f].0)));
            }
        }
    }
    let cat = FinCategory::from_tables(objects.clone(), all.clone(), (0..nob).collect(), comp);
    if let Some(v) = check_category(&cat).first() {
        return Err(inconsistent(end_pos, format!("not a category: {v:?}")));
    }
    let mut covers = Vec::new();
    for (_, apex, legs) in &raw_covers {
        let a = object(&objects, apex)?;
        let mut ls = Vec::new();
        for l in legs {
            let li = arrow(l)?;
            if all[li].2 != a {
                return Err(inconsistent(l.pos, format!("{} does not land in {}", l.text, apex.text)));
            }
            ls.push(li);
        }
        covers.push((a, ls));
    }
    let cat = Arc::new(cat);
    let site = if covers.is_empty() {
        None
    } else {
        let cv = covers.iter().map(|(a, l)| Cover { apex: *a, legs: l.clone() }).collect();
        Some(FiniteSite::new(cat.clone(), cv).map_err(|e| inconsistent(end_pos, e.to_string()))?)
    };
    Ok(CategoryDecl { name, objects, arrows, compose, covers, cat, site })
}

/// `fq_modules(q, n)`, `degenerate(n)`, `pointed_sets(n)`, `semilattices(n)`,
/// `cyclic_actions(k, n)`, `left_zero_actions(n)`.
fn parse_theory(c: &mut Cursor<'_>) -> PResult<(String, TheoryPresentation)> {
    let kind = c.word("a theory")?;
    c.expect("(")?;
    let args = c.list(")", |c| c.number("a number"))?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(error(kind.pos, ErrorKind::Syntax, format!("`{}` takes {n} arguments", kind.text)))
        }
    };
    let t = match kind.text.as_str() {
        "fq_modules" => arity(2).map(|_| TheoryPresentation::fq_modules(args[0] as u64, args[1])),
        "degenerate" => arity(1).map(|_| TheoryPresentation::degenerate(args[0])),
        "pointed_sets" => arity(1).map(|_| TheoryPresentation::pointed_sets(args[0])),
        "semilattices" => arity(1).map(|_| TheoryPresentation::semilattices(args[0])),
        "cyclic_actions" => arity(2).map(|_| TheoryPresentation::monoid_actions(MonoidActions::cyclic(args[0]), args[1])),
        "left_zero_actions" => arity(1).map(|_| TheoryPresentation::monoid_actions(MonoidActions::left_zero(), args[0])),
        other => return Err(undeclared(kind.pos, format!("unknown theory `{other}`"))),
    }?
    .map_err(|e| inconsistent(kind.pos, e.to_string()))?;
    let spec = format!("{}({})", kind.text, args.iter().map(usize::to_string).collect::<Vec<_>>().join(", "));
    Ok((spec, t))
}

/// Renames points that are not printable words.
pub fn printable(names: &[String], prefix: &str) -> Vec<String> {
    if names.iter().all(|n| is_word(n)) {
        names.to_vec()
    } else {
        (0..names.len()).map(|i| format!("{prefix}{i}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sketchy_core::arith::rat;

    const KERNELS: &str = "\
space X = {x0, x1}
space I = {i0, i1}
over X -> I : x0=i0, x1=i1
map phi : I -> I : i0=i1, i1=i1
kernel k : X -> X over phi
k x0 = {x1: 1/2}
k x1 = {x1: -3}
";

    #[test]
    fn kernel_round_trip() {
        let d = Document::parse(KERNELS).unwrap();
        assert_eq!(d.print(), KERNELS);
        let k = d.kernel("k").unwrap();
        assert_eq!(k.entry(0, 1), rat(1, 2));
        assert_eq!(k.norm(), rat(3, 1));
    }

    #[test]
    fn rows_are_gathered_under_their_kernel() {
        let src = "space X = {a, b}\nkernel k : X -> X\nspace Y = {c}\nk b = {a: 2/4, b: 0}\n";
        let d = Document::parse(src).unwrap();
        assert_eq!(d.print(), "space X = {a, b}\nkernel k : X -> X\nk b = {a: 1/2}\nspace Y = {c}\n");
    }

    #[test]
    fn broken_support_parses_but_does_not_resolve() {
        let src = KERNELS.replace("k x1 = {x1: -3}", "k x1 = {x0: -3}");
        let d = Document::parse(&src).unwrap();
        assert_eq!(
            d.kernel("k"),
            Err(ResolveError::Core(sketchy_core::Error::SupportViolation { source: 1, target: 0 }))
        );
    }

    #[test]
    fn errors_have_positions() {
        let e = Document::parse("space X = {a, b}\nmap f : X -> Y : a=a\n").unwrap_err();
        assert_eq!((e.pos, e.kind), (Pos { line: 2, col: 14 }, ErrorKind::Undeclared));
        let e = Document::parse("space X = {a}\nspace X = {b}\n").unwrap_err();
        assert_eq!((e.pos.line, e.kind), (2, ErrorKind::Inconsistent));
        let e = Document::parse("space X = {a, a}\n").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 15 });
        let e = Document::parse("space X = {a}\nkernel k : X -> X\nk a = {b: 1}\n").unwrap_err();
        assert_eq!((e.pos, e.kind), (Pos { line: 3, col: 8 }, ErrorKind::Undeclared));
        let e = Document::parse("space X = {a\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
    }

    #[test]
    fn categories_and_presheaves() {
        let src = "\
category C
  objects a, b
  arrow f : a -> b
  arrow g : b -> b
  compose g . f = f
  compose g . g = g
  cover b : f
end
presheaf P on C : a=2, b=1
P f = [1]
P g = [0]
presheaf Y = representable(C, b)
";
        let d = Document::parse(src).unwrap();
        assert_eq!(d.print(), src);
        let c = d.category("C").unwrap();
        assert_eq!(c.cat.arrow_count(), 4);
        assert!(c.site.is_some());
        assert!(d.presheaf("P").unwrap().check_functoriality().is_empty());
        assert_eq!(d.presheaf("Y").unwrap().sizes().collect::<Vec<_>>(), vec![1, 2]);
        let e = Document::parse(&src.replace("  compose g . g = g\n", "")).unwrap_err();
        assert_eq!(e.pos.line, 7);
        assert!(e.message.contains("g . g"));
        let e = Document::parse(&src.replace("P g = [0]\n", "P h = [0]\n")).unwrap_err();
        assert_eq!((e.pos, e.kind), (Pos { line: 11, col: 3 }, ErrorKind::Undeclared));
    }

    #[test]
    fn theories_models_and_fields() {
        let src = "field F2\ntheory T = fq_modules(2, 2)\nmodel A = free(T, 1)\nmonoidal M = chain-3-max\npresheaf U = constant(M, 1)\n";
        let d = Document::parse(src).unwrap();
        assert_eq!(d.print(), src);
        assert_eq!(d.field, Some(FieldSpec::Prime(2)));
        let (m, _) = d.model("A", 8).unwrap();
        assert_eq!(m.presheaf().sizes().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(Document::parse("theory T = fq_modules(4, 2)\n").is_err());
        assert!(Document::parse("monoidal M = nope\n").is_err());
    }
}
