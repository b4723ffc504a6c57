//! Acceptance criteria, one line each.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sketchy::doc::Document;
use sketchy::gen::{random_based, random_kernel, random_kernel_any, random_map};
use sketchy::suites::{random_endo, run_suite, Options};
use sketchy_core::arith::{rat, PrimeField, Rational, Rationals};
use sketchy_core::dayconv::{
    associator_iso, day_hom_into_model, day_tensor, left_unit_iso, model_tensor, monoidal_fixtures, right_unit_iso,
    symmetry_iso, tensor_iso, yoneda_tensor_iso, CommutativeTheory, MonoidalFinCategory, TensorRoute,
};
use sketchy_core::fibered::{
    alpha_beta_iso, beta_alpha_iso, check_beck_chevalley, check_projection_formula, lawvere_to_linton,
    linton_to_lawvere, projection_is_natural, FamilyFibration, FinMap, LawvereModel, LinearBundle, Square,
};
use sketchy_core::fincat::{count_homs, Isomorphism, NatTransformation, Presheaf, PresheafLike};
use sketchy_core::kernels::{
    cartesian_lift, compose, dirac, product_map, pushforward, tensor_kernels, AtomicMeasure, BasedSpace, Kernel,
    MeasSpace,
};
use sketchy_core::site::{is_sheaf, TruncatedFinSetSite};
use sketchy_core::theory::{adjunction_check, free_model, FiniteAlgebra, Model, TheoryPresentation};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> Document {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    Document::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

// ---------------------------------------------------------------------------
// 1. Kernel algebra laws

/// `Σ_y k(x, y) k2(y, z)` on dense tables.
fn dense_product(k: &Kernel, k2: &Kernel) -> Vec<Vec<Rational>> {
    let (n, m, l) = (k.source().len(), k.target().len(), k2.target().len());
    (0..n)
        .map(|x| (0..l).map(|z| (0..m).fold(rat(0, 1), |acc, y| acc + k.entry(x, y) * k2.entry(y, z))).collect())
        .collect()
}

fn matches_dense(k: &Kernel, d: &[Vec<Rational>]) -> bool {
    d.iter().enumerate().all(|(x, row)| row.iter().enumerate().all(|(z, &v)| k.entry(x, z) == v))
}

fn kernel_triple(k1: &Kernel, k2: &Kernel, k3: &Kernel) -> Result<(), String> {
    let k12 = compose(k1, k2).map_err(|e| e.to_string())?;
    let k23 = compose(k2, k3).map_err(|e| e.to_string())?;
    ensure(matches_dense(&k12, &dense_product(k1, k2)), || "composite differs from the matrix product".into())?;
    let left = compose(&k12, k3).map_err(|e| e.to_string())?;
    let right = compose(k1, &k23).map_err(|e| e.to_string())?;
    ensure(left == right, || "associativity".into())?;
    for k in [k1, k2, k3] {
        let l = compose(&dirac(k.source()), k).map_err(|e| e.to_string())?;
        let r = compose(k, &dirac(k.target())).map_err(|e| e.to_string())?;
        ensure(l == *k && r == *k, || "Dirac identity".into())?;
    }
    Ok(())
}

fn c1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut exhaustive = 0;
    for shape in 0..625 {
        let sizes: Vec<usize> = (0..4).map(|i| shape / 5usize.pow(i) % 5).collect();
        for bases in 0..16 {
            let xs: Vec<BasedSpace> =
                (0..4).map(|i| random_based(&mut rng, &format!("x{i}_"), sizes[i], 1 + (bases >> i & 1))).collect();
            let k1 = random_kernel_any(&mut rng, &xs[0], &xs[1]);
            let k2 = random_kernel_any(&mut rng, &xs[1], &xs[2]);
            let k3 = random_kernel_any(&mut rng, &xs[2], &xs[3]);
            kernel_triple(&k1, &k2, &k3).map_err(|e| format!("shape {sizes:?} bases {bases}: {e}"))?;
            exhaustive += 1;
        }
    }
    for t in 0..1000 {
        let xs: Vec<BasedSpace> = (0..4)
            .map(|i| {
                let n = rng.gen_range(0..=6);
                let b = rng.gen_range(1..=3);
                random_based(&mut rng, &format!("x{i}_"), n, b)
            })
            .collect();
        let k1 = random_kernel_any(&mut rng, &xs[0], &xs[1]);
        let k2 = random_kernel_any(&mut rng, &xs[1], &xs[2]);
        let k3 = random_kernel_any(&mut rng, &xs[2], &xs[3]);
        kernel_triple(&k1, &k2, &k3).map_err(|e| format!("random triple {t}: {e}"))?;
    }
    Ok(format!("{exhaustive} shape triples (spaces <= 4, bases <= 2) and 1000 random triples (spaces <= 6)"))
}

// ---------------------------------------------------------------------------
// 2. Cartesian lifts

fn c2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut rejected = 0;
    for t in 0..200 {
        let (jn, in_) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (zn, xn) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
        let z = random_based(&mut rng, "z", zn, jn);
        let x = random_based(&mut rng, "x", xn, in_);
        let phi = random_map(&mut rng, jn, in_);
        let k = random_kernel(&mut rng, &z, &x, &phi);
        let cl = cartesian_lift(&k).map_err(|e| format!("instance {t}: {e}"))?;
        // The fibered product has one point per (x, j) over the same point of I.
        let expected: usize = (0..jn).map(|j| (0..xn).filter(|&xi| x.over(xi) == phi.apply(j)).count()).sum();
        ensure(cl.pullback.len() == expected, || format!("instance {t}: pullback has {} points", cl.pullback.len()))?;
        ensure(*cl.lift.phi() == FinMap::identity(jn), || format!("instance {t}: lift is not over the identity"))?;
        ensure(compose(&cl.lift, &cl.projection).as_ref() == Ok(&k), || format!("instance {t}: no factorization"))?;
        ensure(cl.from_marginal(&cl.lift).as_ref() == Ok(&cl.lift), || format!("instance {t}: marginal"))?;
        // Any other kernel over the identity of J fails to factor.
        for _ in 0..5 {
            let rows: Vec<AtomicMeasure> = (0..zn)
                .map(|zi| {
                    let mut row = cl.lift.row(zi).clone();
                    let allowed: Vec<usize> = (0..cl.pairs.len()).filter(|&p| cl.pairs[p].1 == z.over(zi)).collect();
                    if !allowed.is_empty() && rng.gen_bool(0.5) {
                        let at = allowed[rng.gen_range(0..allowed.len())];
                        let bump = AtomicMeasure::from_pairs(cl.pairs.len(), [(at, rat(rng.gen_range(1..=3), 2))]).unwrap();
                        row = row.add(&bump);
                    }
                    row
                })
                .collect();
            let candidate = Kernel::new(z.clone(), cl.pullback.clone(), FinMap::identity(jn), rows)
                .map_err(|e| format!("instance {t}: {e}"))?;
            let same = candidate == cl.lift;
            ensure(cl.factors(&candidate, &k) == same, || format!("instance {t}: a second factorization"))?;
            rejected += usize::from(!same);
        }
    }
    Ok(format!("200 lifts over bases <= 3, {rejected} perturbed candidates rejected"))
}

// ---------------------------------------------------------------------------
// 3. Strict monoidality of the pushforward

fn trivial(n: usize, prefix: &str) -> BasedSpace {
    BasedSpace::trivial(MeasSpace::of_size(prefix, n))
}

fn c3() -> Check {
    let one = FinMap::identity(1);
    let mut maps = Vec::new();
    for a in 0..=3 {
        for b in 0..=3 {
            maps.extend(FinMap::all(a, b));
        }
    }
    let mut count = 0;
    for h1 in &maps {
        for h2 in &maps {
            let (a1, b1) = (trivial(h1.domain(), "a"), trivial(h1.codomain(), "b"));
            let (a2, b2) = (trivial(h2.domain(), "c"), trivial(h2.codomain(), "d"));
            let m1 = pushforward(h1, &a1, &b1, &one).map_err(|e| e.to_string())?;
            let m2 = pushforward(h2, &a2, &b2, &one).map_err(|e| e.to_string())?;
            let left = tensor_kernels(&m1, &m2);
            let right = pushforward(&product_map(h1, h2), &a1.product(&a2), &b1.product(&b2), &product_map(&one, &one))
                .map_err(|e| e.to_string())?;
            ensure(left == right, || format!("{:?} x {:?}", h1.table(), h2.table()))?;
            // Entry (x1, x2) → (y1, y2) is 1 exactly when y1 = h1 x1 and y2 = h2 x2.
            let (d2, c2) = (h2.domain(), h2.codomain());
            for x in 0..h1.domain() * d2 {
                for y in 0..h1.codomain() * c2 {
                    let hit = y / c2 == h1.apply(x / d2) && y % c2 == h2.apply(x % d2);
                    ensure(left.entry(x, y) == rat(i128::from(hit), 1), || "entry oracle".into())?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} pairs of functions between sets <= 3"))
}

// ---------------------------------------------------------------------------
// 4. Free-forget adjunction

fn free_vector_model(j: usize, t: &TheoryPresentation) -> Model {
    Model::new(FiniteAlgebra::free(j, t, 64).unwrap().to_presheaf(t), t).unwrap()
}

fn c4() -> Check {
    let t = TheoryPresentation::fq_modules(2, 3).map_err(|e| e.to_string())?;
    let site = TruncatedFinSetSite::new(3);
    let mut pairs = 0;
    // A sheaf for the extensive topology is determined by its set at 1, so
    // X ↦ (n ↦ X^n) with |X| <= 4 covers all of them up to isomorphism.
    for k in 0..=4usize {
        let x = site.power_sheaf(k);
        ensure(is_sheaf(&x, site.site()), || format!("power sheaf {k} is not a sheaf"))?;
        for j in 0..=3usize {
            let m = free_vector_model(j, &t);
            let r = adjunction_check(&x, &m, &t, 8).map_err(|e| e.to_string())?;
            // Linear maps F2^k → F2^j and functions k → F2^j.
            let expected = 1usize << (j * k);
            ensure(r.bijective && r.model_homs == expected && r.sheaf_homs == expected, || {
                format!("|X| = {k}, F2^{j}: {r:?}")
            })?;
            pairs += 1;
        }
    }
    let site_cat = t.site().cat().clone();
    for n in 0..=3 {
        let y = Presheaf::representable(site_cat.clone(), n);
        let f = free_model(&y, &t, 8).map_err(|e| e.to_string())?;
        ensure(f.model.size(1) == 1 << n, || format!("|F(y {n})(1)| = {}", f.model.size(1)))?;
        let ty = Presheaf::representable(t.theory().clone(), n);
        let e = f.unit.apply(n, site_cat.hom_index(site_cat.id(n)));
        let iso = Isomorphism::from_forward(NatTransformation::yoneda(&f.model, n, e), &ty, &f.model)
            .ok_or_else(|| format!("F(y {n}) is not y({n})"))?;
        ensure(iso.verify(&ty, &f.model), || format!("witness for n = {n}"))?;
    }
    Ok(format!("{pairs} sheaf/model pairs bijective with 2^(jk) maps; F(y n) = y(n) for n <= 3"))
}

// ---------------------------------------------------------------------------
// 5. The free functor is monoidal

fn c5() -> Check {
    let t = TheoryPresentation::fq_modules(2, 3).map_err(|e| e.to_string())?;
    let ct = CommutativeTheory::new(t.clone()).map_err(|e| e.to_string())?;
    let site_cat = t.site().cat().clone();
    let free_on = |n: usize| free_model(&Presheaf::representable(site_cat.clone(), n), &t, 8).unwrap();
    for m in 0..=2usize {
        for n in 0..=2usize {
            let (fm, fn_) = (free_on(m), free_on(n));
            let ym = Presheaf::representable(site_cat.clone(), m);
            let yn = Presheaf::representable(site_cat.clone(), n);
            let x = ym.product(&yn).map_err(|e| e.to_string())?;
            let fx = free_model(&x, &t, 8).map_err(|e| e.to_string())?;
            let fxa = FiniteAlgebra::from_model(&fx.model, &t).map_err(|e| e.to_string())?;
            let expected = 1usize << (m * n);
            ensure(fxa.size() == expected, || format!("|F(y{m} x y{n})| = {}", fxa.size()))?;
            let mut tensors = Vec::new();
            for route in [TensorRoute::Day, TensorRoute::Congruence] {
                let tm = model_tensor(&fm.model, &fn_.model, &ct, route, 16).map_err(|e| e.to_string())?;
                ensure(tm.algebra.size() == expected, || format!("{m} (x) {n} by {route:?}: {}", tm.algebra.size()))?;
                // The transpose of (a, b) ↦ η a ⊗ η b.
                let nb = fn_.model.size(1);
                let seeds: Vec<(usize, usize)> = (0..x.size(1))
                    .map(|e| {
                        let (a, b) = (e / yn.size(1), e % yn.size(1));
                        let (ua, ub) = (fm.unit.apply(1, a), fn_.unit.apply(1, b));
                        (fx.unit.apply(1, e), tm.pair[ua * nb + ub] as usize)
                    })
                    .collect();
                let h = fxa.extend_hom(&tm.algebra, &seeds).ok_or_else(|| format!("{m} (x) {n}: no comparison map"))?;
                let mut seen = vec![false; expected];
                for &v in &h {
                    ensure(!std::mem::replace(&mut seen[v as usize], true), || format!("{m} (x) {n}: not injective"))?;
                }
                tensors.push(tm);
            }
            ensure(tensor_iso(&tensors[0], &tensors[1]).is_some(), || format!("{m} (x) {n}: routes disagree"))?;
        }
    }
    Ok("F(y m x y n) = F(y m) (x) F(y n) of size 2^(mn) for m, n <= 2, both routes".into())
}

// ---------------------------------------------------------------------------
// 6. Exponential ideal

fn c6() -> Check {
    let doc = fixture("f2.sk");
    let t = doc.theory("T").map_err(|e| e.to_string())?.clone();
    let ct = CommutativeTheory::new((*t).clone()).map_err(|e| e.to_string())?;
    let models: Vec<(String, Model)> =
        doc.models.iter().map(|m| (m.name.clone(), doc.model(&m.name, 8).unwrap().0)).collect();
    let cat = t.theory().clone();
    let gens: Vec<usize> = t.generating_arrows().collect();
    let n = cat.object_count();
    let mut presheaves = 0;
    let mut failure: Option<String> = None;
    // Sizes are non-decreasing (P(k) is a retract of P(k + 1)), and empty at
    // 0 forces empty everywhere; other size vectors admit no presheaf.
    for code in 0..4usize.pow(n as u32) {
        let sizes: Vec<usize> = (0..n).map(|i| code / 4usize.pow(i as u32) % 4).collect();
        if sizes.windows(2).any(|w| w[0] > w[1]) || (sizes[0] == 0 && sizes.iter().any(|&s| s > 0)) {
            continue;
        }
        support::presheaves::for_each_presheaf(&cat, &gens, &sizes, |p| {
            presheaves += 1;
            for (name, m) in &models {
                let bad = match day_hom_into_model(&p, m, &ct) {
                    Ok(h) if h.is_model && h.maps.len() as u64 == count_homs(&p, m.presheaf()) => continue,
                    Ok(h) => format!("[P, {name}] with P of sizes {sizes:?}: model {} with {} maps", h.is_model, h.maps.len()),
                    Err(e) => format!("[P, {name}] with P of sizes {sizes:?}: {e}"),
                };
                failure = Some(bad);
                return false;
            }
            true
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!("{presheaves} presheaves with <= 3 elements per object against {} models, no counterexample", models.len()))
}

// ---------------------------------------------------------------------------
// 7. Beck–Chevalley

/// Multisets of `(fiber, dim)` with at most `max` points, as sorted lists.
fn multisets(kinds: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().copied().unwrap_or(0);
            for k in from..kinds {
                let mut t: Vec<usize> = s.clone();
                t.push(k);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn c7() -> Check {
    let mut squares = 0;
    for c in 1..=4usize {
        // Right legs up to relabeling of A: fiber sizes with total <= 4.
        let rights: Vec<FinMap> = multisets(c, 4)
            .into_iter()
            .map(|pts| FinMap::new(pts, c).unwrap())
            .collect();
        // Bottom legs and bundles up to relabeling of B: points are
        // (fiber, dim) pairs with dim <= 3.
        for pts in multisets(c * 4, 4) {
            let bottom = FinMap::new(pts.iter().map(|k| k / 4).collect(), c).unwrap();
            let dims: Vec<usize> = pts.iter().map(|k| k % 4).collect();
            let v = LinearBundle::new(&Rationals, dims.clone());
            for right in &rights {
                let sq = Square::pullback(right.clone(), bottom.clone()).map_err(|e| e.to_string())?;
                let w = check_beck_chevalley(&sq, &v).map_err(|e| e.to_string())?;
                ensure(w.is_iso() && w.verify(), || format!("right {:?} bottom {:?} dims {dims:?}", right.table(), bottom.table()))?;
                // Both sides have dimension Σ_{b over right(a)} dim V(b) at a.
                for a in 0..right.domain() {
                    let d: usize = (0..bottom.domain()).filter(|&b| bottom.apply(b) == right.apply(a)).map(|b| dims[b]).sum();
                    ensure(w.map().source().dim(a) == d && w.map().target().dim(a) == d, || "dimension oracle".into())?;
                }
                squares += 1;
            }
        }
    }
    ensure(squares >= 500, || format!("only {squares} squares"))?;
    Ok(format!("{squares} pullback squares over bases <= 4 with dims <= 3"))
}

// ---------------------------------------------------------------------------
// 8. Projection formula

fn dims_up_to(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..4usize.pow(n as u32)).map(move |code| (0..n).map(|i| code / 4usize.pow(i as u32) % 4).collect())
}

fn c8() -> Check {
    let f5 = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut count = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            for phi in FinMap::all(a, b) {
                for dp in dims_up_to(b) {
                    for dt in dims_up_to(a) {
                        let (tp, t) = (LinearBundle::new(&Rationals, dp.clone()), LinearBundle::new(&Rationals, dt.clone()));
                        let w = check_projection_formula(&phi, &tp, &t).map_err(|e| e.to_string())?;
                        let tag = || format!("phi {:?} T' {dp:?} T {dt:?}", phi.table());
                        ensure(w.is_iso() && w.verify(), tag)?;
                        for q in 0..b {
                            let d = dp[q] * phi.fiber(q).map(|p| dt[p]).sum::<usize>();
                            ensure(w.map().source().dim(q) == d && w.map().target().dim(q) == d, tag)?;
                        }
                        let (tp5, t5) = (LinearBundle::new(&f5, dp.clone()), LinearBundle::new(&f5, dt.clone()));
                        let (ep, e) = (random_endo(&mut rng, &f5, &tp5), random_endo(&mut rng, &f5, &t5));
                        ensure(projection_is_natural(&phi, &ep, &e).map_err(|e| e.to_string())?, tag)?;
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} instances over maps between sets <= 3 with dims <= 3, natural in random endomorphisms"))
}

// ---------------------------------------------------------------------------
// 9. Lawvere and Linton models

fn round_trips(t: &TheoryPresentation, pool: &[Presheaf]) -> Result<(usize, usize), String> {
    let fib = FamilyFibration::new(t, 2).map_err(|e| e.to_string())?;
    let (mut ab, mut ba) = (0, 0);
    for j in 1..=2usize {
        let mut linton: Vec<Presheaf> = fib.fiber(j).objects().map(|x| Presheaf::representable(fib.fiber(j).clone(), x)).collect();
        let mut idx = vec![0usize; j];
        loop {
            let family: Vec<Presheaf> = idx.iter().map(|&i| pool[i].clone()).collect();
            let m = LawvereModel::from_family(&fib, &family).map_err(|e| e.to_string())?;
            let isos = beta_alpha_iso(&fib, &m).map_err(|e| e.to_string())?;
            let bar = lawvere_to_linton(&fib, &m).map_err(|e| e.to_string())?;
            let round = linton_to_lawvere(&fib, j, &bar).map_err(|e| e.to_string())?;
            for (k, row) in isos.iter().enumerate() {
                for (c, iso) in row.iter().enumerate() {
                    let (i, jj) = (c / j, c % j);
                    ensure(iso.verify(m.component(k, i, jj), round.component(k, i, jj)), || format!("beta alpha at {idx:?}"))?;
                    ba += 1;
                }
            }
            linton.push(bar);
            let mut k = 0;
            while k < j && idx[k] + 1 == pool.len() {
                idx[k] = 0;
                k += 1;
            }
            if k == j {
                break;
            }
            idx[k] += 1;
        }
        for bar in &linton {
            let iso = alpha_beta_iso(&fib, j, bar).map_err(|e| e.to_string())?;
            let round = lawvere_to_linton(&fib, &linton_to_lawvere(&fib, j, bar).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure(iso.verify(bar, &round), || format!("alpha beta over {j} sorts"))?;
            ab += 1;
        }
    }
    Ok((ab, ba))
}

fn c9() -> Check {
    let mut out = Vec::new();
    for t in [TheoryPresentation::degenerate(2), TheoryPresentation::fq_modules(2, 2)] {
        let t = t.map_err(|e| e.to_string())?;
        let th = t.theory().clone();
        let mut pool: Vec<Presheaf> = th.objects().map(|n| Presheaf::representable(th.clone(), n)).collect();
        for k in 0..=2 {
            pool.push(FiniteAlgebra::free(k, &t, 64).map_err(|e| e.to_string())?.to_presheaf(&t));
        }
        let (ab, ba) = round_trips(&t, &pool)?;
        out.push(format!("{}: {ab} alpha-beta and {ba} beta-alpha witnesses", t.name()));
    }
    Ok(out.join("; "))
}

// ---------------------------------------------------------------------------
// 10. Day convolution

/// `|(P ⊗ Q)(c)|` as a quotient of `Σ_{a,b} P(a) × Q(b) × C(c, a ⊗ b)`.
fn coend_sizes(p: &Presheaf, q: &Presheaf, m: &MonoidalFinCategory) -> Vec<usize> {
    let cat = m.base();
    cat.objects()
        .map(|c| {
            let mut index = std::collections::HashMap::new();
            let mut elems = Vec::new();
            for a in cat.objects() {
                for b in cat.objects() {
                    let Some(ab) = m.tensor_ob(a, b) else { continue };
                    for x in 0..p.size(a) {
                        for y in 0..q.size(b) {
                            for &h in cat.hom(c, ab) {
                                index.insert((a, b, x, y, h as usize), elems.len());
                                elems.push((a, b, x, y, h as usize));
                            }
                        }
                    }
                }
            }
            let mut parent: Vec<usize> = (0..elems.len()).collect();
            fn find(parent: &mut [usize], mut i: usize) -> usize {
                while parent[i] != i {
                    parent[i] = parent[parent[i]];
                    i = parent[i];
                }
                i
            }
            // (P(f) x, Q(g) y, h) ~ (x, y, (f ⊗ g) ∘ h) for f: a' → a, g: b' → b.
            for &(a2, b2, x2, y2, h) in &elems.clone() {
                let _ = (x2, y2);
                for f in cat.arrows().filter(|&f| cat.src(f) == a2) {
                    for g in cat.arrows().filter(|&g| cat.src(g) == b2) {
                        let Some(fg) = m.tensor_arr(f, g) else { continue };
                        let (a, b) = (cat.dst(f), cat.dst(g));
                        for x in (0..p.size(a)).filter(|&x| p.act(f, x) == x2) {
                            for y in (0..q.size(b)).filter(|&y| q.act(g, y) == y2) {
                                let there = index[&(a, b, x, y, cat.compose(fg, h))];
                                let here = index[&(a2, b2, x2, y2, h)];
                                let (r1, r2) = (find(&mut parent, here), find(&mut parent, there));
                                parent[r1] = r2;
                            }
                        }
                    }
                }
            }
            (0..elems.len()).filter(|&i| find(&mut parent, i) == i).count()
        })
        .collect()
}

fn c10() -> Check {
    let mut isos = 0;
    let fixtures = monoidal_fixtures();
    for m in &fixtures {
        let cat = m.base().clone();
        let tag = |what: &str| format!("{}: {what}", m.name());
        let mut pool: Vec<Presheaf> = cat.objects().map(|o| Presheaf::representable(cat.clone(), o)).collect();
        pool.push(Presheaf::constant(cat.clone(), 2));
        pool.push(pool[0].coproduct(&pool[cat.object_count() - 1]).unwrap());
        for a in cat.objects() {
            for b in cat.objects() {
                if m.tensor_ob(a, b).is_none() {
                    continue;
                }
                let (y, t, iso) = yoneda_tensor_iso(a, b, m).map_err(|e| e.to_string())?;
                let iso = iso.ok_or_else(|| tag("yoneda"))?;
                ensure(iso.verify(&y, &t.presheaf), || tag("yoneda witness"))?;
                isos += 1;
            }
        }
        for p in &pool {
            for left in [true, false] {
                let (t, iso) = if left { left_unit_iso(p, m) } else { right_unit_iso(p, m) }.map_err(|e| e.to_string())?;
                ensure(iso.is_some_and(|i| i.verify(p, &t.presheaf)), || tag("unit"))?;
                isos += 1;
            }
        }
        for p in &pool {
            for q in &pool {
                let pq = day_tensor(p, q, m).map_err(|e| e.to_string())?;
                let qp = day_tensor(q, p, m).map_err(|e| e.to_string())?;
                let sizes: Vec<usize> = cat.objects().map(|c| pq.presheaf.size(c)).collect();
                ensure(sizes == coend_sizes(p, q, m), || tag("coend sizes"))?;
                let s = symmetry_iso(&pq, &qp, m).ok_or_else(|| tag("symmetry"))?;
                ensure(s.verify(&pq.presheaf, &qp.presheaf), || tag("symmetry witness"))?;
                isos += 1;
                for r in &pool {
                    let pq_r = day_tensor(&pq.presheaf, r, m).map_err(|e| e.to_string())?;
                    let qr = day_tensor(q, r, m).map_err(|e| e.to_string())?;
                    let p_qr = day_tensor(p, &qr.presheaf, m).map_err(|e| e.to_string())?;
                    let a = associator_iso(&pq, &pq_r, &qr, &p_qr, m).ok_or_else(|| tag("associator"))?;
                    ensure(a.verify(&pq_r.presheaf, &p_qr.presheaf), || tag("associator witness"))?;
                    isos += 1;
                }
            }
        }
    }
    Ok(format!("{isos} witnessed isomorphisms on {} monoidal fixtures", fixtures.len()))
}

// ---------------------------------------------------------------------------
// 11. Reproducible reports

fn c11() -> Check {
    let mut lines = 0;
    for (suite, file) in [("kern-laws", "kernels.sk"), ("fib-beck-chevalley", "bundles.sk"), ("fib-projection", "bundles.sk"), ("day-laws", "monoidal.sk")] {
        let doc = fixture(file);
        let opts = Options { seed: 20241019, trials: 100, ..Options::default() };
        let first = run_suite(suite, &doc, &opts).map_err(|e| e.to_string())?.jsonl();
        let second = run_suite(suite, &doc, &opts).map_err(|e| e.to_string())?.jsonl();
        ensure(first == second, || format!("{suite} reports differ"))?;
        lines += first.lines().count();
    }
    Ok(format!("four suites, {lines} identical report lines"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("kernel algebra laws", c1),
        ("cartesian-lift factorization", c2),
        ("strict monoidality", c3),
        ("free-forget adjunction", c4),
        ("monoidal free functor", c5),
        ("exponential ideal", c6),
        ("Beck-Chevalley", c7),
        ("projection formula", c8),
        ("Lawvere-Linton round trip", c9),
        ("Day convolution laws", c10),
        ("reproducibility", c11),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {n:>2} pass  {name}: {detail} [{took:.2?}]"),
            Err(detail) => {
                println!("criterion {n:>2} FAIL  {name}: {detail} [{took:.2?}]");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
