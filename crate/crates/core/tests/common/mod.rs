#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sketchy_core::arith::{rat, Rational};
use sketchy_core::fibered::FinMap;
use sketchy_core::kernels::{AtomicMeasure, BasedSpace, Kernel, MeasSpace};

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_map(rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> FinMap {
    FinMap::new((0..domain).map(|_| rng.gen_range(0..codomain)).collect(), codomain).unwrap()
}

/// A space of `n` points over a base of `b` points (`b ≥ 1`).
pub fn random_based(rng: &mut ChaCha8Rng, name: &str, n: usize, b: usize) -> BasedSpace {
    let map = random_map(rng, n, b);
    BasedSpace::new(MeasSpace::of_size(name, n), MeasSpace::of_size(&format!("{name}b"), b), map).unwrap()
}

/// A kernel with random masses on the allowed support, about half of them
/// zero.
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
            AtomicMeasure::from_pairs(target.len(), masses).unwrap()
        })
        .collect();
    Kernel::new(source.clone(), target.clone(), phi.clone(), rows).unwrap()
}

/// As [`random_kernel`], over a random base map.
pub fn random_kernel_any(rng: &mut ChaCha8Rng, source: &BasedSpace, target: &BasedSpace) -> Kernel {
    let phi = random_map(rng, source.base().len(), target.base().len());
    random_kernel(rng, source, target, &phi)
}
