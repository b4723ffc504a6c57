use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::Field;
use crate::error::{malformed, precondition, Result};
use crate::linalg::Matrix;

/// A function between finite sets `0..domain → 0..codomain`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    table: Vec<usize>,
    codomain: usize,
}

impl FinMap {
    pub fn new(table: Vec<usize>, codomain: usize) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&q| q >= codomain) {
            return Err(malformed(format!("value {bad} outside codomain of size {codomain}")));
        }
        Ok(FinMap { table, codomain })
    }

    pub fn identity(n: usize) -> Self {
        FinMap { table: (0..n).collect(), codomain: n }
    }

    pub fn constant(domain: usize, codomain: usize, q: usize) -> Result<Self> {
        Self::new(alloc::vec![q; domain], codomain)
    }

    pub fn domain(&self) -> usize {
        self.table.len()
    }
    pub fn codomain(&self) -> usize {
        self.codomain
    }
    pub fn table(&self) -> &[usize] {
        &self.table
    }
    pub fn apply(&self, p: usize) -> usize {
        self.table[p]
    }

    /// `g ∘ self`; `None` unless `g` starts where `self` ends.
    pub fn then(&self, g: &FinMap) -> Option<FinMap> {
        (g.domain() == self.codomain).then(|| FinMap {
            table: self.table.iter().map(|&q| g.table[q]).collect(),
            codomain: g.codomain,
        })
    }

    /// The points over `q`, ascending.
    pub fn fiber(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.table.iter().enumerate().filter(move |&(_, &x)| x == q).map(|(p, _)| p)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = alloc::vec![false; self.codomain];
        self.table.len() == self.codomain
            && self.table.iter().all(|&q| !core::mem::replace(&mut seen[q], true))
    }

    /// Every function `domain → codomain`, first point least significant.
    pub fn all(domain: usize, codomain: usize) -> impl Iterator<Item = FinMap> {
        let count = if domain == 0 { 1 } else { codomain.pow(domain as u32) };
        (0..count).map(move |mut code| {
            let table = (0..domain)
                .map(|_| {
                    let d = code % codomain;
                    code /= codomain;
                    d
                })
                .collect();
            FinMap { table, codomain }
        })
    }
}

/// A finite family of finite-dimensional vector spaces indexed by a finite
/// base set. Fibers have standard bases; basis vector `k` of the fiber at
/// `p` is labelled `"{p}.e{k}"`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBundle<F: Field> {
    field: F,
    points: Vec<String>,
    dims: Vec<usize>,
}

impl<F: Field> LinearBundle<F> {
    /// Points named `p0, p1, …`.
    pub fn new(field: &F, dims: Vec<usize>) -> Self {
        let points = (0..dims.len()).map(|p| format!("p{p}")).collect();
        LinearBundle { field: field.clone(), points, dims }
    }

    pub fn with_names(field: &F, points: Vec<String>, dims: Vec<usize>) -> Result<Self> {
        if points.len() != dims.len() {
            return Err(malformed("one dimension per base point"));
        }
        Ok(LinearBundle { field: field.clone(), points, dims })
    }

    /// The zero bundle over a base of size `n`.
    pub fn zero(field: &F, n: usize) -> Self {
        Self::new(field, alloc::vec![0; n])
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn base_size(&self) -> usize {
        self.dims.len()
    }
    pub fn dim(&self, p: usize) -> usize {
        self.dims[p]
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn point_name(&self, p: usize) -> &str {
        &self.points[p]
    }
    pub fn point_names(&self) -> &[String] {
        &self.points
    }
    pub fn basis_label(&self, p: usize, k: usize) -> String {
        format!("{}.e{k}", self.points[p])
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.dims == other.dims
    }
}

/// A bundle map `T: V → W` over a fixed base: one matrix `T_p` of shape
/// `dim W_p × dim V_p` per point.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleMap<F: Field> {
    source: LinearBundle<F>,
    target: LinearBundle<F>,
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> BundleMap<F> {
    pub fn new(source: LinearBundle<F>, target: LinearBundle<F>, blocks: Vec<Matrix<F>>) -> Result<Self> {
        if source.base_size() != target.base_size() || blocks.len() != source.base_size() {
            return Err(malformed("bundle map needs one block per base point"));
        }
        for (p, b) in blocks.iter().enumerate() {
            if b.rows() != target.dim(p) || b.cols() != source.dim(p) {
                return Err(malformed(format!(
                    "block at {} is {}x{}, expected {}x{}",
                    source.point_name(p),
                    b.rows(),
                    b.cols(),
                    target.dim(p),
                    source.dim(p)
                )));
            }
        }
        Ok(BundleMap { source, target, blocks })
    }

    pub fn identity(v: &LinearBundle<F>) -> Self {
        let blocks = v.dims.iter().map(|&d| Matrix::identity(&v.field, d)).collect();
        BundleMap { source: v.clone(), target: v.clone(), blocks }
    }

    pub fn source(&self) -> &LinearBundle<F> {
        &self.source
    }
    pub fn target(&self) -> &LinearBundle<F> {
        &self.target
    }
    pub fn block(&self, p: usize) -> &Matrix<F> {
        &self.blocks[p]
    }

    /// `other ∘ self`; fibers are matched by dimension, not by name.
    pub fn then(&self, other: &BundleMap<F>) -> Result<BundleMap<F>> {
        if !self.target.same_shape(&other.source) {
            return Err(precondition("bundle maps do not compose"));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| b.mul(a).expect("shapes checked"))
            .collect();
        Ok(BundleMap { source: self.source.clone(), target: other.target.clone(), blocks })
    }

    /// Same blocks; fibers compared by dimension.
    pub fn agrees_with(&self, other: &BundleMap<F>) -> bool {
        self.source.same_shape(&other.source)
            && self.target.same_shape(&other.target)
            && self.blocks == other.blocks
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.is_identity())
    }

    /// Pointwise inverse, `None` unless every block is invertible.
    pub fn inverse(&self) -> Option<BundleMap<F>> {
        let blocks = self.blocks.iter().map(|b| b.inverse()).collect::<Option<Vec<_>>>()?;
        Some(BundleMap { source: self.target.clone(), target: self.source.clone(), blocks })
    }

    /// The first point where the block is not invertible, with its rank.
    pub fn singular_point(&self) -> Option<(usize, usize)> {
        self.blocks.iter().enumerate().find_map(|(p, b)| {
            let r = b.rank();
            (b.rows() != b.cols() || r != b.rows()).then_some((p, r))
        })
    }
}

fn check_base<F: Field>(phi: &FinMap, size: usize) -> Result<()> {
    if phi.codomain() != size {
        return Err(precondition(format!(
            "base map lands in a set of size {}, bundle lives over {size}",
            phi.codomain()
        )));
    }
    Ok(())
}

fn check_domain<F: Field>(phi: &FinMap, size: usize) -> Result<()> {
    if phi.domain() != size {
        return Err(precondition(format!(
            "base map starts at a set of size {}, bundle lives over {size}",
            phi.domain()
        )));
    }
    Ok(())
}

/// `(φ*V)_p = V_{φ(p)}`.
pub fn pullback_bundle<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Result<LinearBundle<F>> {
    check_base::<F>(phi, v.base_size())?;
    let points = (0..phi.domain()).map(|p| format!("p{p}")).collect();
    let dims = phi.table().iter().map(|&q| v.dim(q)).collect();
    LinearBundle::with_names(v.field(), points, dims)
}

pub fn pullback_map<F: Field>(phi: &FinMap, t: &BundleMap<F>) -> Result<BundleMap<F>> {
    let source = pullback_bundle(phi, &t.source)?;
    let target = pullback_bundle(phi, &t.target)?;
    let blocks = phi.table().iter().map(|&q| t.blocks[q].clone()).collect();
    BundleMap::new(source, target, blocks)
}

/// Offset of each `V_p` inside `(Σ_φ V)_{φ(p)}`; summands ordered by `p`.
fn offsets<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Vec<usize> {
    let mut next = alloc::vec![0usize; phi.codomain()];
    phi.table()
        .iter()
        .enumerate()
        .map(|(p, &q)| {
            let o = next[q];
            next[q] += v.dim(p);
            o
        })
        .collect()
}

fn pushed_dims<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Vec<usize> {
    let mut dims = alloc::vec![0usize; phi.codomain()];
    for (p, &q) in phi.table().iter().enumerate() {
        dims[q] += v.dim(p);
    }
    dims
}

/// `(Σ_φ V)_q = ⊕_{φ(p)=q} V_p`.
pub fn sigma_bundle<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Result<LinearBundle<F>> {
    check_domain::<F>(phi, v.base_size())?;
    Ok(LinearBundle::new(v.field(), pushed_dims(phi, v)))
}

/// `(Π_φ V)_q = ∏_{φ(p)=q} V_p`. Finite products of vector spaces are direct
/// sums, so the fibers agree with [`sigma_bundle`]; the two differ in their
/// units and counits.
pub fn pi_bundle<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Result<LinearBundle<F>> {
    sigma_bundle(phi, v)
}

fn pushed_map<F: Field>(phi: &FinMap, t: &BundleMap<F>) -> Result<BundleMap<F>> {
    let source = sigma_bundle(phi, &t.source)?;
    let target = sigma_bundle(phi, &t.target)?;
    let f = t.source.field();
    let blocks = (0..phi.codomain())
        .map(|q| {
            let parts: Vec<Matrix<F>> = phi.fiber(q).map(|p| t.blocks[p].clone()).collect();
            Matrix::block_diagonal(f, &parts)
        })
        .collect();
    BundleMap::new(source, target, blocks)
}

pub fn sigma_map<F: Field>(phi: &FinMap, t: &BundleMap<F>) -> Result<BundleMap<F>> {
    pushed_map(phi, t)
}

pub fn pi_map<F: Field>(phi: &FinMap, t: &BundleMap<F>) -> Result<BundleMap<F>> {
    pushed_map(phi, t)
}

/// Unit of `Σ_φ ⊣ φ*`: the summand inclusions `V_p → (Σ_φ V)_{φ(p)}`.
pub fn sigma_unit<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Result<BundleMap<F>> {
    let s = sigma_bundle(phi, v)?;
    let target = pullback_bundle(phi, &s)?;
    let off = offsets(phi, v);
    let f = v.field();
    let blocks = (0..v.base_size())
        .map(|p| {
            let mut m = Matrix::zeros(f, s.dim(phi.apply(p)), v.dim(p));
            m.paste(off[p], 0, &Matrix::identity(f, v.dim(p)));
            m
        })
        .collect();
    BundleMap::new(v.clone(), target, blocks)
}

/// Counit of `Σ_φ ⊣ φ*`: the codiagonal `⊕_{φ(p)=q} W_q → W_q`.
pub fn sigma_counit<F: Field>(phi: &FinMap, w: &LinearBundle<F>) -> Result<BundleMap<F>> {
    let pulled = pullback_bundle(phi, w)?;
    let source = sigma_bundle(phi, &pulled)?;
    let f = w.field();
    let blocks = (0..w.base_size())
        .map(|q| {
            let d = w.dim(q);
            let mut m = Matrix::zeros(f, d, source.dim(q));
            for (k, _) in phi.fiber(q).enumerate() {
                m.paste(0, k * d, &Matrix::identity(f, d));
            }
            m
        })
        .collect();
    BundleMap::new(source, w.clone(), blocks)
}

/// Unit of `φ* ⊣ Π_φ`: the diagonal `W_q → ∏_{φ(p)=q} W_q`.
pub fn pi_unit<F: Field>(phi: &FinMap, w: &LinearBundle<F>) -> Result<BundleMap<F>> {
    let pulled = pullback_bundle(phi, w)?;
    let target = pi_bundle(phi, &pulled)?;
    let f = w.field();
    let blocks = (0..w.base_size())
        .map(|q| {
            let d = w.dim(q);
            let mut m = Matrix::zeros(f, target.dim(q), d);
            for (k, _) in phi.fiber(q).enumerate() {
                m.paste(k * d, 0, &Matrix::identity(f, d));
            }
            m
        })
        .collect();
    BundleMap::new(w.clone(), target, blocks)
}

/// Counit of `φ* ⊣ Π_φ`: the projections `(Π_φ V)_{φ(p)} → V_p`.
pub fn pi_counit<F: Field>(phi: &FinMap, v: &LinearBundle<F>) -> Result<BundleMap<F>> {
    let prod = pi_bundle(phi, v)?;
    let source = pullback_bundle(phi, &prod)?;
    let off = offsets(phi, v);
    let f = v.field();
    let blocks = (0..v.base_size())
        .map(|p| {
            let mut m = Matrix::zeros(f, v.dim(p), prod.dim(phi.apply(p)));
            m.paste(0, off[p], &Matrix::identity(f, v.dim(p)));
            m
        })
        .collect();
    BundleMap::new(source, v.clone(), blocks)
}

/// Which of the four triangle identities hold for `Σ_φ ⊣ φ* ⊣ Π_φ` at a
/// bundle `v` over the domain and `w` over the codomain of `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangles {
    /// `ε_{Σv} ∘ Σ(η_v) = id`.
    pub sigma_left: bool,
    /// `φ*(ε_w) ∘ η_{φ*w} = id`.
    pub sigma_right: bool,
    /// `ε_{φ*w} ∘ φ*(η_w) = id`.
    pub pi_left: bool,
    /// `Π(ε_v) ∘ η_{Πv} = id`.
    pub pi_right: bool,
}

impl Triangles {
    pub fn all(&self) -> bool {
        self.sigma_left && self.sigma_right && self.pi_left && self.pi_right
    }
}

pub fn triangle_identities<F: Field>(
    phi: &FinMap,
    v: &LinearBundle<F>,
    w: &LinearBundle<F>,
) -> Result<Triangles> {
    let pw = pullback_bundle(phi, w)?;
    let sv = sigma_bundle(phi, v)?;
    let sigma_left = sigma_map(phi, &sigma_unit(phi, v)?)?.then(&sigma_counit(phi, &sv)?)?;
    let sigma_right = sigma_unit(phi, &pw)?.then(&pullback_map(phi, &sigma_counit(phi, w)?)?)?;
    let pi_left = pullback_map(phi, &pi_unit(phi, w)?)?.then(&pi_counit(phi, &pw)?)?;
    let pi_right = pi_unit(phi, &sv)?.then(&pi_map(phi, &pi_counit(phi, v)?)?)?;
    Ok(Triangles {
        sigma_left: sigma_left.is_identity(),
        sigma_right: sigma_right.is_identity(),
        pi_left: pi_left.is_identity(),
        pi_right: pi_right.is_identity(),
    })
}

/// `(V ⊗ W)_p = V_p ⊗ W_p`, basis ordered lexicographically.
pub fn tensor_bundle<F: Field>(v: &LinearBundle<F>, w: &LinearBundle<F>) -> Result<LinearBundle<F>> {
    if v.base_size() != w.base_size() {
        return Err(precondition("tensor factors live over different bases"));
    }
    let dims = v.dims.iter().zip(&w.dims).map(|(a, b)| a * b).collect();
    LinearBundle::with_names(v.field(), v.points.clone(), dims)
}

pub fn tensor_map<F: Field>(a: &BundleMap<F>, b: &BundleMap<F>) -> Result<BundleMap<F>> {
    let source = tensor_bundle(&a.source, &b.source)?;
    let target = tensor_bundle(&a.target, &b.target)?;
    let blocks = a.blocks.iter().zip(&b.blocks).map(|(x, y)| x.kronecker(y)).collect();
    BundleMap::new(source, target, blocks)
}
