use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub type Ob = usize;
pub type Arr = usize;

pub(crate) const NONE: u32 = u32::MAX;

/// A finite category stored as dense tables.
///
/// `comp[g * arrows + f]` holds `g ∘ f` when `dst f == src g` and [`NONE`]
/// otherwise. Construction does not validate; run [`check_category`] on
/// untrusted data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    ob_names: Vec<String>,
    arr_names: Vec<String>,
    src: Vec<u32>,
    dst: Vec<u32>,
    ident: Vec<u32>,
    comp: Vec<u32>,
    hom: Vec<Vec<u32>>,
    hom_pos: Vec<u32>,
    into: Vec<Vec<u32>>,
    into_pos: Vec<u32>,
}

/// One failed category law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    /// A declared arrow or identity refers to an object out of range.
    BadEndpoint { arrow: Arr },
    /// The identity of `ob` is not an endo-arrow on `ob`.
    IdentityEndpoints { ob: Ob },
    /// `g ∘ f` is composable but has no table entry.
    MissingComposite { g: Arr, f: Arr },
    /// `g ∘ f` has an entry although `dst f != src g`.
    SpuriousComposite { g: Arr, f: Arr },
    /// `g ∘ f = h` but `h` does not run from `src f` to `dst g`.
    EndpointMismatch { g: Arr, f: Arr, h: Arr },
    LeftIdentity { f: Arr },
    RightIdentity { f: Arr },
    Associativity { h: Arr, g: Arr, f: Arr },
}

impl FinCategory {
    /// Builds a category from raw tables. `comp` must have `arrows.len()²`
    /// entries, [`NONE`]-free exactly on composable pairs for a valid category.
    pub fn from_tables(
        ob_names: Vec<String>,
        arrows: Vec<(String, Ob, Ob)>,
        ident: Vec<Arr>,
        comp: Vec<u32>,
    ) -> Self {
        let nob = ob_names.len();
        let na = arrows.len();
        assert_eq!(comp.len(), na * na, "composition table has wrong size");
        assert_eq!(ident.len(), nob, "one identity per object");
        let mut arr_names = Vec::with_capacity(na);
        let mut src = Vec::with_capacity(na);
        let mut dst = Vec::with_capacity(na);
        for (name, s, d) in arrows {
            arr_names.push(name);
            src.push(s as u32);
            dst.push(d as u32);
        }
        let mut hom = alloc::vec![Vec::new(); nob * nob];
        let mut hom_pos = alloc::vec![0u32; na];
        let mut into = alloc::vec![Vec::new(); nob];
        let mut into_pos = alloc::vec![0u32; na];
        for f in 0..na {
            let (s, d) = (src[f] as usize, dst[f] as usize);
            if s < nob && d < nob {
                let h = &mut hom[s * nob + d];
                hom_pos[f] = h.len() as u32;
                h.push(f as u32);
                into_pos[f] = into[d].len() as u32;
                into[d].push(f as u32);
            }
        }
        FinCategory {
            ob_names,
            arr_names,
            src,
            dst,
            ident: ident.into_iter().map(|a| a as u32).collect(),
            comp,
            hom,
            hom_pos,
            into,
            into_pos,
        }
    }

    /// Builds a category from a composition function, consulted only on
    /// composable pairs.
    pub fn from_fn(
        ob_names: Vec<String>,
        arrows: Vec<(String, Ob, Ob)>,
        ident: Vec<Arr>,
        mut compose: impl FnMut(Arr, Arr) -> Arr,
    ) -> Self {
        let na = arrows.len();
        let mut comp = alloc::vec![NONE; na * na];
        for g in 0..na {
            for f in 0..na {
                if arrows[f].2 == arrows[g].1 {
                    comp[g * na + f] = compose(g, f) as u32;
                }
            }
        }
        Self::from_tables(ob_names, arrows, ident, comp)
    }

    /// The category with one object and one arrow.
    pub fn terminal() -> Self {
        Self::from_tables(
            alloc::vec!["*".into()],
            alloc::vec![("id".into(), 0, 0)],
            alloc::vec![0],
            alloc::vec![0],
        )
    }

    /// The empty category.
    pub fn empty() -> Self {
        Self::from_tables(Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    /// `n` objects and only identities.
    pub fn discrete(n: usize) -> Self {
        let obs = (0..n).map(|i| format!("{i}")).collect();
        let arrows = (0..n).map(|i| (format!("id{i}"), i, i)).collect();
        Self::from_fn(obs, arrows, (0..n).collect(), |g, _| g)
    }

    /// The poset category on `0..n` with an arrow `i → j` iff `leq(i, j)`.
    /// `leq` must be reflexive and transitive.
    pub fn poset(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let obs = (0..n).map(|i| format!("{i}")).collect();
        let mut arrows = Vec::new();
        let mut index = alloc::vec![usize::MAX; n * n];
        let mut ident = alloc::vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    index[i * n + j] = arrows.len();
                    if i == j {
                        ident[i] = arrows.len();
                        arrows.push((format!("id{i}"), i, j));
                    } else {
                        arrows.push((format!("{i}<{j}"), i, j));
                    }
                }
            }
        }
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.1, a.2)).collect();
        Self::from_fn(obs, arrows, ident, |g, f| index[ends[f].0 * n + ends[g].1])
    }

    /// A one-object category from a finite monoid on `0..n` with unit `e`.
    pub fn monoid(n: usize, e: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let arrows = (0..n).map(|i| (format!("m{i}"), 0, 0)).collect();
        Self::from_fn(alloc::vec!["*".into()], arrows, alloc::vec![e], mul)
    }

    /// The full subcategory of finite sets on the objects `0..=max`, every
    /// function `m → n` being an arrow. Functions are encoded as base-`n`
    /// digit strings, least significant first.
    pub fn finset(max: usize) -> Self {
        let nob = max + 1;
        let mut arrows = Vec::new();
        let mut base = alloc::vec![0usize; nob * nob];
        let mut tables: Vec<Vec<u8>> = Vec::new();
        for m in 0..nob {
            for n in 0..nob {
                base[m * nob + n] = arrows.len();
                let count = n.pow(m as u32);
                for code in 0..count {
                    let mut t = Vec::with_capacity(m);
                    let mut c = code;
                    for _ in 0..m {
                        t.push((c % n) as u8);
                        c /= n;
                    }
                    arrows.push((finset_arrow_name(&t, n), m, n));
                    tables.push(t);
                }
            }
        }
        let encode = |t: &[u8], n: usize| -> usize {
            t.iter().rev().fold(0usize, |acc, &d| acc * n + d as usize)
        };
        let ident = (0..nob)
            .map(|m| {
                let t: Vec<u8> = (0..m as u8).collect();
                base[m * nob + m] + encode(&t, m)
            })
            .collect();
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.1, a.2)).collect();
        let obs = (0..nob).map(|i| format!("{i}")).collect();
        Self::from_fn(obs, arrows, ident, |g, f| {
            let t: Vec<u8> = tables[f].iter().map(|&i| tables[g][i as usize]).collect();
            let (m, n) = (ends[f].0, ends[g].1);
            base[m * nob + n] + encode(&t, n)
        })
    }

    pub fn object_count(&self) -> usize {
        self.ob_names.len()
    }
    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }
    pub fn objects(&self) -> core::ops::Range<Ob> {
        0..self.ob_names.len()
    }
    pub fn arrows(&self) -> core::ops::Range<Arr> {
        0..self.src.len()
    }
    pub fn object_name(&self, c: Ob) -> &str {
        &self.ob_names[c]
    }
    pub fn arrow_name(&self, f: Arr) -> &str {
        &self.arr_names[f]
    }
    pub fn object_by_name(&self, name: &str) -> Option<Ob> {
        self.ob_names.iter().position(|n| n == name)
    }
    pub fn arrow_by_name(&self, name: &str) -> Option<Arr> {
        self.arr_names.iter().position(|n| n == name)
    }
    pub fn src(&self, f: Arr) -> Ob {
        self.src[f] as usize
    }
    pub fn dst(&self, f: Arr) -> Ob {
        self.dst[f] as usize
    }
    pub fn id(&self, c: Ob) -> Arr {
        self.ident[c] as usize
    }
    pub fn is_identity(&self, f: Arr) -> bool {
        self.id(self.src(f)) == f
    }

    /// `g ∘ f`, or `None` when the table has no entry.
    pub fn try_compose(&self, g: Arr, f: Arr) -> Option<Arr> {
        let h = self.comp[g * self.src.len() + f];
        (h != NONE).then_some(h as usize)
    }

    /// `g ∘ f`. Panics on a non-composable pair.
    pub fn compose(&self, g: Arr, f: Arr) -> Arr {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("arrows {g} and {f} do not compose"))
    }

    /// Arrows `a → b`, in index order.
    pub fn hom(&self, a: Ob, b: Ob) -> &[u32] {
        &self.hom[a * self.ob_names.len() + b]
    }
    /// Position of `f` within `hom(src f, dst f)`.
    pub fn hom_index(&self, f: Arr) -> usize {
        self.hom_pos[f] as usize
    }
    /// Arrows with codomain `c`, in index order.
    pub fn arrows_into(&self, c: Ob) -> &[u32] {
        &self.into[c]
    }
    /// Position of `f` within `into(dst f)`.
    pub fn into_index(&self, f: Arr) -> usize {
        self.into_pos[f] as usize
    }

    /// Total number of hom-set elements, i.e. the arrow count.
    pub fn hom_total(&self) -> usize {
        self.src.len()
    }
}

fn finset_arrow_name(t: &[u8], n: usize) -> String {
    let mut s = format!("f{}to{}", t.len(), n);
    if !t.is_empty() {
        s.push('_');
        for d in t {
            s.push_str(&format!("{d}"));
        }
    }
    s
}

/// Checks every identity, endpoint and associativity law. An empty result
/// means the tables define a category.
/// A greedy set of non-identity arrows whose composites give every arrow.
/// With `allowed`, only arrows between allowed objects are generated, using
/// composites through allowed objects.
pub fn composition_generators(cat: &FinCategory, allowed: Option<&[bool]>) -> Vec<u32> {
    let na = cat.arrow_count();
    let ok = |c: Ob| allowed.map_or(true, |a| a[c]);
    let inside = |f: Arr| ok(cat.src(f)) && ok(cat.dst(f));
    let mut reached = alloc::vec![false; na];
    for c in cat.objects() {
        if cat.id(c) < na {
            reached[cat.id(c)] = true;
        }
    }
    let mut order: Vec<usize> = cat.arrows().filter(|&f| inside(f)).collect();
    order.sort_by_key(|&f| (cat.src(f).max(cat.dst(f)), cat.src(f), cat.dst(f), f));
    let mut gens: Vec<u32> = Vec::new();
    for f in order {
        if reached[f] {
            continue;
        }
        gens.push(f as u32);
        reached[f] = true;
        // Reached arrows are closed under left multiplication by generators.
        loop {
            let mut grew = false;
            for h in cat.arrows() {
                if !reached[h] || !inside(h) {
                    continue;
                }
                for &g in &gens {
                    if let Some(gh) = cat.try_compose(g as usize, h).filter(|&x| x < na) {
                        if !reached[gh] {
                            reached[gh] = true;
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }
    gens
}

pub fn check_category(c: &FinCategory) -> Vec<CategoryViolation> {
    use CategoryViolation::*;
    let mut out = Vec::new();
    let nob = c.object_count();
    let na = c.arrow_count();
    for f in 0..na {
        if c.src[f] as usize >= nob || c.dst[f] as usize >= nob {
            out.push(BadEndpoint { arrow: f });
        }
    }
    for ob in 0..nob {
        let i = c.ident[ob] as usize;
        if i >= na || c.src(i) != ob || c.dst(i) != ob {
            out.push(IdentityEndpoints { ob });
        }
    }
    if !out.is_empty() {
        return out;
    }
    // Pairs whose entry is unusable are excluded from the identity and
    // associativity checks so each defect is reported once.
    let mut sound = alloc::vec![true; na * na];
    for g in 0..na {
        for f in 0..na {
            let composable = c.dst(f) == c.src(g);
            let entry = c.comp[g * na + f];
            match (composable, entry == NONE) {
                (true, true) => {
                    out.push(MissingComposite { g, f });
                    sound[g * na + f] = false;
                }
                (false, false) => {
                    out.push(SpuriousComposite { g, f });
                    sound[g * na + f] = false;
                }
                (true, false) => {
                    let h = entry as usize;
                    if h >= na || c.src(h) != c.src(f) || c.dst(h) != c.dst(g) {
                        out.push(EndpointMismatch { g, f, h });
                        sound[g * na + f] = false;
                    }
                }
                (false, true) => sound[g * na + f] = false,
            }
        }
    }
    for f in 0..na {
        let l = c.id(c.dst(f));
        if sound[l * na + f] && c.compose(l, f) != f {
            out.push(LeftIdentity { f });
        }
        let r = c.id(c.src(f));
        if sound[f * na + r] && c.compose(f, r) != f {
            out.push(RightIdentity { f });
        }
    }
    for f in 0..na {
        let b = c.dst(f);
        for g in (0..nob).flat_map(|x| c.hom(b, x).iter().map(|&g| g as usize)) {
            if !sound[g * na + f] {
                continue;
            }
            let gf = c.compose(g, f);
            let d = c.dst(g);
            for h in (0..nob).flat_map(|x| c.hom(d, x).iter().map(|&h| h as usize)) {
                if !sound[h * na + g] || !sound[h * na + gf] {
                    continue;
                }
                let hg = c.compose(h, g);
                if !sound[hg * na + f] {
                    continue;
                }
                if c.compose(hg, f) != c.compose(h, gf) {
                    out.push(Associativity { h, g, f });
                }
            }
        }
    }
    out
}

/// The product category. Object `(x, y)` is `x * |B| + y`; arrow `(f, g)` is
/// `f * arrows(B) + g`.
pub fn product(a: &FinCategory, b: &FinCategory) -> FinCategory {
    let (nb, mb) = (b.object_count(), b.arrow_count());
    let mut obs = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            obs.push(format!("({}|{})", a.object_name(x), b.object_name(y)));
        }
    }
    let mut arrows = Vec::new();
    for f in a.arrows() {
        for g in b.arrows() {
            arrows.push((
                format!("({}|{})", a.arrow_name(f), b.arrow_name(g)),
                a.src(f) * nb + b.src(g),
                a.dst(f) * nb + b.dst(g),
            ));
        }
    }
    let ident = a
        .objects()
        .flat_map(|x| b.objects().map(move |y| (x, y)))
        .map(|(x, y)| a.id(x) * mb + b.id(y))
        .collect();
    FinCategory::from_fn(obs, arrows, ident, |g, f| {
        a.compose(g / mb, f / mb) * mb + b.compose(g % mb, f % mb)
    })
}

/// The `k`-fold power `A^k`, objects and arrows encoded in base `|A|` with
/// the first factor most significant.
pub fn power(a: &FinCategory, k: usize) -> FinCategory {
    let mut out = FinCategory::terminal();
    for _ in 0..k {
        out = product(&out, a);
    }
    out
}
