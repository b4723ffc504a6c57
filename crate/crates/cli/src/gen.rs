//! Seeded random instances and documents that replay them.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sketchy_core::arith::{rat, Rational};
use sketchy_core::fibered::FinMap;
use sketchy_core::kernels::{AtomicMeasure, BasedSpace, Kernel, MeasSpace};

use crate::doc::{printable, Document};

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_map(rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> FinMap {
    FinMap::new((0..domain).map(|_| rng.gen_range(0..codomain)).collect(), codomain).expect("in range")
}

/// `n` points named `{prefix}0, …` over a base of `b ≥ 1` points.
pub fn random_based(rng: &mut ChaCha8Rng, prefix: &str, n: usize, b: usize) -> BasedSpace {
    let map = random_map(rng, n, b);
    BasedSpace::new(MeasSpace::of_size(prefix, n), MeasSpace::of_size("i", b), map).expect("shapes match")
}

/// Random masses on about half of the allowed support.
pub fn random_kernel(rng: &mut ChaCha8Rng, source: &BasedSpace, target: &BasedSpace, phi: &FinMap) -> Kernel {
    let rows = (0..source.len())
        .map(|x| {
            let over = phi.apply(source.over(x));
            let mut masses = Vec::new();
            for y in (0..target.len()).filter(|&y| target.over(y) == over) {
                if rng.gen_bool(0.5) {
                    masses.push((y, small_rational(rng)));
                }
            }
            AtomicMeasure::from_pairs(target.len(), masses).expect("in range")
        })
        .collect();
    Kernel::new(source.clone(), target.clone(), phi.clone(), rows).expect("support by construction")
}

pub fn random_kernel_any(rng: &mut ChaCha8Rng, source: &BasedSpace, target: &BasedSpace) -> Kernel {
    let phi = random_map(rng, source.base().len(), target.base().len());
    random_kernel(rng, source, target, &phi)
}

fn is_point(b: &MeasSpace) -> bool {
    b.len() == 1 && b.name(0) == "*0"
}

/// Collects kernels into a document, sharing equal spaces.
#[derive(Default)]
pub struct KernelDoc {
    doc: Document,
    spaces: Vec<(BasedSpace, String)>,
    bases: Vec<(MeasSpace, String)>,
    maps: usize,
}

impl KernelDoc {
    /// Starts from an existing document, reusing its spaces by value.
    pub fn from_document(doc: Document) -> Self {
        let mut spaces = Vec::new();
        let mut bases = Vec::new();
        for s in &doc.spaces {
            if let Ok(b) = doc.based_space(&s.name) {
                spaces.push((b.clone(), s.name.clone()));
                bases.push((b.space().clone(), s.name.clone()));
            }
        }
        KernelDoc { doc, spaces, bases, maps: 0 }
    }

    fn fresh(&self, prefix: &str, mut i: usize) -> String {
        loop {
            let n = format!("{prefix}{i}");
            if !self.doc.has(&n) {
                return n;
            }
            i += 1;
        }
    }

    fn base_name(&mut self, b: &MeasSpace) -> Option<String> {
        if is_point(b) {
            return None;
        }
        if let Some((_, n)) = self.bases.iter().find(|(s, _)| s == b) {
            return Some(n.clone());
        }
        let name = self.fresh("B", self.bases.len());
        self.bases.push((b.clone(), name.clone()));
        Some(name)
    }

    /// Declares a space (and its base) if no equal one exists yet.
    pub fn space(&mut self, s: &BasedSpace) -> String {
        if let Some((_, n)) = self.spaces.iter().find(|(t, _)| t == s) {
            return n.clone();
        }
        let name = self.fresh("S", self.spaces.len());
        let base = self.base_name(s.base());
        let renamed = rename(s);
        if let Some(b) = &base {
            if !self.doc.has(b) {
                let bs = BasedSpace::trivial(renamed.base().clone());
                self.doc.add_based_space(b, &bs, None);
            }
        }
        self.doc.add_based_space(&name, &renamed, base.as_deref());
        self.spaces.push((s.clone(), name.clone()));
        name
    }

    pub fn kernel(&mut self, name: &str, k: &Kernel) {
        let source = self.space(k.source());
        let target = self.space(k.target());
        let (sb, tb) = (self.base_name(k.source().base()), self.base_name(k.target().base()));
        let phi = if sb == tb && k.phi().is_bijective() && (0..k.phi().domain()).all(|i| k.phi().apply(i) == i) {
            None
        } else {
            let (d, c) = (sb.as_deref().unwrap_or("*"), tb.as_deref().unwrap_or("*"));
            let known = self.doc.maps.iter().find(|m| m.domain == d && m.codomain == c && m.table == k.phi().table());
            if let Some(m) = known {
                let n = m.name.clone();
                self.doc.add_kernel(name, &source, &target, Some(&n), k);
                return;
            }
            if sb.is_none() || tb.is_none() {
                self.ensure_point();
            }
            let n = self.fresh("phi", self.maps);
            self.maps += 1;
            self.doc.add_map(&n, sb.as_deref().unwrap_or("*"), tb.as_deref().unwrap_or("*"), k.phi());
            Some(n)
        };
        self.doc.add_kernel(name, &source, &target, phi.as_deref(), k);
    }

    fn ensure_point(&mut self) {
        if !self.doc.has("*") {
            let p = BasedSpace::trivial(MeasSpace::of_size("p", 1));
            self.doc.add_based_space("*", &p, None);
        }
    }

    pub fn finish(self) -> Document {
        self.doc
    }
}

fn rename(s: &BasedSpace) -> BasedSpace {
    let pts = printable(s.space().names(), "x");
    let base = printable(s.base().names(), "i");
    BasedSpace::new(
        MeasSpace::new(pts).expect("distinct"),
        MeasSpace::new(base).expect("distinct"),
        s.map().clone(),
    )
    .expect("shapes match")
}

/// A document holding the given kernels.
pub fn kernel_doc(kernels: &[(&str, &Kernel)]) -> Document {
    let mut b = KernelDoc::default();
    for (n, k) in kernels {
        b.kernel(n, k);
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn kernel_documents_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (n, b, m, c) = (rng.gen_range(0..4), rng.gen_range(1..3), rng.gen_range(0..4), rng.gen_range(1..3));
            let x = random_based(&mut rng, "x", n, b);
            let y = random_based(&mut rng, "y", m, c);
            let k = random_kernel_any(&mut rng, &x, &y);
            let l = random_kernel_any(&mut rng, &y, &x);
            let d = kernel_doc(&[("k", &k), ("l", &l)]);
            let text = d.print();
            let back = Document::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back.print(), text);
            assert_eq!(back.kernel("k").unwrap().rows(), k.rows());
            assert_eq!(back.kernel("l").unwrap().phi(), l.phi());
        }
        let p = BasedSpace::trivial(MeasSpace::of_size("a", 2));
        let k = sketchy_core::kernels::dirac(&p);
        assert_eq!(kernel_doc(&[("d", &k)]).print(), "space S0 = {a0, a1}\nkernel d : S0 -> S0\nd a0 = {a0: 1}\nd a1 = {a1: 1}\n");
    }
}
