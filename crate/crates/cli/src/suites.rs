//! Law suites over the declarations of a document plus seeded random trials.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sketchy_core::arith::{Field, PrimeField, Rationals};
use sketchy_core::dayconv::{
    associator_iso, day_hom_into_model, day_tensor, left_unit_iso, model_tensor, right_unit_iso, symmetry_iso,
    tensor_iso, tensor_sketchy, yoneda_tensor_iso, CommutativeTheory, MonoidalFinCategory, TensorRoute,
};
use sketchy_core::fibered::{
    alpha_beta_iso, beta_alpha_iso, check_beck_chevalley, check_projection_formula, projection_is_natural,
    BundleMap, FamilyFibration, FinMap, LawvereModel, LinearBundle, Square,
};
use sketchy_core::fincat::{check_category, Isomorphism, NatTransformation, Presheaf};
use sketchy_core::kernels::{
    cartesian_lift, compose, dirac, product_map, pushforward, tensor_kernels, BasedSpace, Kernel, MeasSpace,
};
use sketchy_core::linalg::Matrix;
use sketchy_core::site::TruncatedFinSetSite;
use sketchy_core::theory::{adjunction_check, free_model, model_of, validate_theory, Model, TheoryPresentation};

use crate::doc::{Document, FieldSpec};
use crate::gen::{kernel_doc, random_based, random_kernel_any, random_map};
use crate::report::{Outcome, SuiteReport};

pub const SUITES: &[&str] = &[
    "category-laws",
    "day-laws",
    "exp-ideal",
    "fib-alpha-beta",
    "fib-beck-chevalley",
    "fib-projection",
    "kern-laws",
    "theory-models",
    "theory-tensor",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Day,
    Congruence,
    Both,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    /// Reflection rounds.
    pub bound: usize,
    pub trials: usize,
    /// Overrides the `field` line of the document.
    pub field: Option<FieldSpec>,
    /// Size of the base object for the family fibration.
    pub base: usize,
    pub route: Route,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, bound: 8, trials: 0, field: None, base: 2, route: Route::Both }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl std::fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown suite `{}` (known: {})", self.0, SUITES.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

pub fn run_suite(name: &str, doc: &Document, opts: &Options) -> Result<SuiteReport, UnknownSuite> {
    let start = Instant::now();
    let mut r = SuiteReport::new(name, opts.seed);
    match name {
        "category-laws" => category_laws(doc, &mut r),
        "day-laws" => day_laws(doc, &mut r),
        "exp-ideal" => exp_ideal(doc, opts, &mut r),
        "fib-alpha-beta" => alpha_beta(doc, opts, &mut r),
        "fib-beck-chevalley" | "fib-projection" => {
            let beck = name == "fib-beck-chevalley";
            match opts.field.or(doc.field).unwrap_or(FieldSpec::Rat) {
                FieldSpec::Rat => bundle_laws(doc, opts, &Rationals, beck, &mut r),
                FieldSpec::Prime(p) => {
                    let f = PrimeField::new(p).expect("checked when parsed");
                    bundle_laws(doc, opts, &f, beck, &mut r)
                }
            }
        }
        "kern-laws" => kern_laws(doc, opts, &mut r),
        "theory-models" => theory_models(doc, opts, &mut r),
        "theory-tensor" => theory_tensor(doc, opts, &mut r),
        _ => return Err(UnknownSuite(name.to_string())),
    }
    r.elapsed = start.elapsed();
    Ok(r)
}

fn trial_id(t: usize) -> String {
    format!("trial-{t:05}")
}

fn core_outcome<T>(res: sketchy_core::Result<T>, ok: impl FnOnce(T) -> Outcome) -> Outcome {
    match res {
        Ok(v) => ok(v),
        Err(e) => Outcome::from_error(&e),
    }
}

// ---------------------------------------------------------------------------
// Kernels

fn kern_laws(doc: &Document, opts: &Options, r: &mut SuiteReport) {
    for law in ["associativity", "cartesian-lift", "dirac-identity", "submultiplicative", "support"] {
        r.declare(law);
    }
    let replay = || doc.print();
    let mut ks: Vec<(&str, &str, &str, Kernel)> = Vec::new();
    for kd in &doc.kernels {
        match doc.kernel(&kd.name) {
            Ok(k) => {
                r.record("support", &kd.name, Outcome::Pass);
                ks.push((&kd.name, &kd.source, &kd.target, k));
            }
            Err(e) => r.record("support", &kd.name, Outcome::fail(e.to_string()).with_replay(replay)),
        }
    }
    for (name, _, _, k) in &ks {
        r.record("dirac-identity", *name, dirac_law(k).with_replay(replay));
        r.record("cartesian-lift", *name, lift_law(k).with_replay(replay));
    }
    for (a, _, at, ka) in &ks {
        for (b, bs, bt, kb) in &ks {
            if at != bs {
                continue;
            }
            let ab = compose(ka, kb).expect("declared spaces match");
            let o = Outcome::check(ab.norm() <= ka.norm() * kb.norm(), || {
                format!("|{a};{b}| = {} > {} * {}", ab.norm(), ka.norm(), kb.norm())
            });
            r.record("submultiplicative", format!("{a},{b}"), o.with_replay(replay));
            for (c, cs, _, kc) in &ks {
                if bt != cs {
                    continue;
                }
                r.record("associativity", format!("{a},{b},{c}"), assoc_law(ka, kb, kc).with_replay(replay));
            }
        }
    }
    if opts.trials == 0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in 0..opts.trials {
        let id = trial_id(t);
        let sizes: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=6)).collect();
        let bases: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let xs: Vec<BasedSpace> =
            (0..4).map(|i| random_based(&mut rng, &format!("x{i}_"), sizes[i], bases[i])).collect();
        let k1 = random_kernel_any(&mut rng, &xs[0], &xs[1]);
        let k2 = random_kernel_any(&mut rng, &xs[1], &xs[2]);
        let k3 = random_kernel_any(&mut rng, &xs[2], &xs[3]);
        let o = assoc_law(&k1, &k2, &k3).with_replay(|| kernel_doc(&[("k1", &k1), ("k2", &k2), ("k3", &k3)]).print());
        r.record("associativity", id.clone(), o);
        r.record("dirac-identity", id.clone(), dirac_law(&k1).with_replay(|| kernel_doc(&[("k1", &k1)]).print()));
        r.record("cartesian-lift", id.clone(), lift_law(&k2).with_replay(|| kernel_doc(&[("k2", &k2)]).print()));
        let ab = compose(&k1, &k2).expect("composable");
        r.record("submultiplicative", id.clone(), Outcome::check(ab.norm() <= k1.norm() * k2.norm(), || "norm".into()));
        let n: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=3)).collect();
        let h1 = random_map(&mut rng, n[0], n[1].max(1));
        let h2 = random_map(&mut rng, n[2], n[3].max(1));
        r.record("strict-monoidal", id.clone(), strict_monoidal_law(&h1, &h2));
        let gc = rng.gen_range(1..=3);
        let g = random_map(&mut rng, h1.codomain(), gc);
        r.record("pushforward-functor", id, functor_law(&h1, &g));
    }
}

pub fn dirac_law(k: &Kernel) -> Outcome {
    let left = compose(&dirac(k.source()), k);
    let right = compose(k, &dirac(k.target()));
    Outcome::check(left.as_ref() == Ok(k) && right.as_ref() == Ok(k), || "Dirac kernel is not an identity".into())
}

pub fn assoc_law(k1: &Kernel, k2: &Kernel, k3: &Kernel) -> Outcome {
    let left = compose(k1, k2).and_then(|k| compose(&k, k3));
    let right = compose(k2, k3).and_then(|k| compose(k1, &k));
    match (left, right) {
        (Ok(a), Ok(b)) if a == b => Outcome::Pass,
        (Ok(a), Ok(b)) => {
            let x = (0..a.rows().len()).find(|&x| a.row(x) != b.row(x)).unwrap_or(0);
            Outcome::fail(format!("composites differ at source point {}", a.source().space().name(x)))
        }
        (Err(e), _) | (_, Err(e)) => Outcome::from_error(&e),
    }
}

pub fn lift_law(k: &Kernel) -> Outcome {
    core_outcome(cartesian_lift(k), |cl| {
        let round = compose(&cl.lift, &cl.projection);
        if round.as_ref() != Ok(k) {
            return Outcome::fail("lift followed by the projection is not the kernel");
        }
        Outcome::check(cl.from_marginal(&cl.lift).as_ref() == Ok(&cl.lift), || "marginal does not recover the lift".into())
    })
}

fn trivial(n: usize, prefix: &str) -> BasedSpace {
    BasedSpace::trivial(MeasSpace::of_size(prefix, n))
}

/// `M(h_1) ⊗ M(h_2) = M(h_1 × h_2)` for point maps over the point.
pub fn strict_monoidal_law(h1: &FinMap, h2: &FinMap) -> Outcome {
    let one = FinMap::identity(1);
    let (a1, b1) = (trivial(h1.domain(), "a"), trivial(h1.codomain(), "b"));
    let (a2, b2) = (trivial(h2.domain(), "c"), trivial(h2.codomain(), "d"));
    let left = tensor_kernels(
        &pushforward(h1, &a1, &b1, &one).expect("commutes over the point"),
        &pushforward(h2, &a2, &b2, &one).expect("commutes over the point"),
    );
    let right = pushforward(&product_map(h1, h2), &a1.product(&a2), &b1.product(&b2), &product_map(&one, &one));
    let ok = right.as_ref() == Ok(&left);
    Outcome::check(ok, || format!("tensor of pushforwards along {:?} and {:?}", h1.table(), h2.table()))
        .with_replay(|| kernel_doc(&[("left", &left)]).print())
}

pub fn functor_law(h: &FinMap, g: &FinMap) -> Outcome {
    let one = FinMap::identity(1);
    let (x, y, z) = (trivial(h.domain(), "x"), trivial(h.codomain(), "y"), trivial(g.codomain(), "z"));
    let gh = h.then(g).expect("composable");
    let both = pushforward(&gh, &x, &z, &one).expect("commutes over the point");
    let each = compose(&pushforward(h, &x, &y, &one).unwrap(), &pushforward(g, &y, &z, &one).unwrap()).unwrap();
    let id = pushforward(&FinMap::identity(h.domain()), &x, &x, &one).unwrap();
    Outcome::check(both == each && id == dirac(&x), || format!("pushforward along {:?} then {:?}", h.table(), g.table()))
}

// ---------------------------------------------------------------------------
// Bundles

fn bundle_laws<F: Field>(doc: &Document, opts: &Options, field: &F, beck: bool, r: &mut SuiteReport) {
    let replay = || doc.print();
    if beck {
        r.declare("beck-chevalley");
        for right in &doc.maps {
            for bottom in doc.maps.iter().filter(|b| b.codomain == right.codomain) {
                let sq = Square::pullback(doc.map(&right.name).unwrap(), doc.map(&bottom.name).unwrap()).unwrap();
                for v in doc.bundles.iter().filter(|v| v.base == bottom.domain) {
                    let o = beck_law(&sq, &doc.bundle(&v.name, field).unwrap());
                    r.record("beck-chevalley", format!("{},{},{}", right.name, bottom.name, v.name), o.with_replay(replay));
                }
            }
        }
    } else {
        r.declare("projection-formula");
        r.declare("projection-natural");
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for phi in &doc.maps {
            let f = doc.map(&phi.name).unwrap();
            for tp in doc.bundles.iter().filter(|b| b.base == phi.codomain) {
                for t in doc.bundles.iter().filter(|b| b.base == phi.domain) {
                    let (tpb, tb) = (doc.bundle(&tp.name, field).unwrap(), doc.bundle(&t.name, field).unwrap());
                    let id = format!("{},{},{}", phi.name, tp.name, t.name);
                    r.record("projection-formula", id.clone(), projection_law(&f, &tpb, &tb).with_replay(replay));
                    let o = natural_law(&mut rng, field, &f, &tpb, &tb);
                    r.record("projection-natural", id, o.with_replay(replay));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in 0..opts.trials {
        let id = trial_id(t);
        if beck {
            let (a, b, c) = (rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(1..=4));
            let right = random_map(&mut rng, a, c);
            let bottom = random_map(&mut rng, b, c);
            let dims: Vec<usize> = (0..b).map(|_| rng.gen_range(0..=3)).collect();
            let sq = Square::pullback(right.clone(), bottom.clone()).unwrap();
            let v = LinearBundle::new(field, dims.clone());
            let o = beck_law(&sq, &v).with_replay(|| {
                bundle_doc(opts.field.or(doc.field), &[("A", a), ("B", b), ("C", c)], &[("right", 0, 2, &right), ("bottom", 1, 2, &bottom)], &[("V", 1, dims.clone())])
            });
            r.record("beck-chevalley", id, o);
        } else {
            let (a, b) = (rng.gen_range(0..=3), rng.gen_range(1..=3));
            let phi = random_map(&mut rng, a, b);
            let dt: Vec<usize> = (0..a).map(|_| rng.gen_range(0..=3)).collect();
            let dp: Vec<usize> = (0..b).map(|_| rng.gen_range(0..=3)).collect();
            let (tp, t) = (LinearBundle::new(field, dp.clone()), LinearBundle::new(field, dt.clone()));
            let rep = || {
                bundle_doc(opts.field.or(doc.field), &[("A", a), ("B", b)], &[("phi", 0, 1, &phi)], &[("Tp", 1, dp.clone()), ("T", 0, dt.clone())])
            };
            r.record("projection-formula", id.clone(), projection_law(&phi, &tp, &t).with_replay(rep));
            r.record("projection-natural", id, natural_law(&mut rng, field, &phi, &tp, &t).with_replay(rep));
        }
    }
}

/// A document with point sets, maps between them (by index) and bundles.
pub fn bundle_doc(
    field: Option<FieldSpec>,
    sets: &[(&str, usize)],
    maps: &[(&str, usize, usize, &FinMap)],
    bundles: &[(&str, usize, Vec<usize>)],
) -> String {
    let mut d = Document::default();
    d.field = field;
    for (name, n) in sets {
        let prefix = name.to_lowercase();
        d.add_based_space(name, &trivial(*n, &prefix), None);
    }
    for (name, a, b, m) in maps {
        d.add_map(name, sets[*a].0, sets[*b].0, m);
    }
    for (name, base, dims) in bundles {
        d.add_bundle(name, sets[*base].0, dims.clone());
    }
    d.print()
}

pub fn beck_law<F: Field>(sq: &Square, v: &LinearBundle<F>) -> Outcome {
    core_outcome(check_beck_chevalley(sq, v), |w| {
        Outcome::check(w.verify(), || match &w {
            sketchy_core::fibered::Witness::NotIso { point, source_dim, target_dim, rank, .. } => {
                format!("comparison at point {point} is {source_dim} -> {target_dim} of rank {rank}")
            }
            _ => "inverse does not check".into(),
        })
    })
}

pub fn projection_law<F: Field>(phi: &FinMap, tp: &LinearBundle<F>, t: &LinearBundle<F>) -> Outcome {
    core_outcome(check_projection_formula(phi, tp, t), |w| Outcome::check(w.verify(), || "projection map is not invertible".into()))
}

/// A bundle endomorphism with entries in `-2..=2`.
pub fn random_endo<F: Field>(rng: &mut ChaCha8Rng, field: &F, v: &LinearBundle<F>) -> BundleMap<F> {
    let blocks = v
        .dims()
        .iter()
        .map(|&d| {
            let mut m = Matrix::zeros(field, d, d);
            for i in 0..d {
                for j in 0..d {
                    m.set(i, j, field.from_i64(rng.gen_range(-2..=2)));
                }
            }
            m
        })
        .collect();
    BundleMap::new(v.clone(), v.clone(), blocks).expect("square blocks")
}

fn natural_law<F: Field>(rng: &mut ChaCha8Rng, field: &F, phi: &FinMap, tp: &LinearBundle<F>, t: &LinearBundle<F>) -> Outcome {
    let a = random_endo(rng, field, t);
    let ap = random_endo(rng, field, tp);
    core_outcome(projection_is_natural(phi, &ap, &a), |ok| Outcome::check(ok, || "naturality square does not commute".into()))
}

// ---------------------------------------------------------------------------
// Lawvere and Linton models

fn theory_models_of(doc: &Document, theory: &str, bound: usize) -> Vec<(String, Result<Model, String>)> {
    doc.models
        .iter()
        .filter(|m| m.theory == theory)
        .map(|m| (m.name.clone(), doc.model(&m.name, bound).map(|x| x.0).map_err(|e| e.to_string())))
        .collect()
}

fn alpha_beta(doc: &Document, opts: &Options, r: &mut SuiteReport) {
    r.declare("alpha-beta");
    r.declare("beta-alpha");
    let replay = || doc.print();
    for td in &doc.theories {
        let fib = match FamilyFibration::new(&td.theory, opts.base) {
            Ok(f) => f,
            Err(e) => {
                r.record("alpha-beta", &td.name, Outcome::from_error(&e).with_replay(replay));
                continue;
            }
        };
        for j in 1..=opts.base {
            let cat = fib.fiber(j).clone();
            for x in cat.objects() {
                let y = Presheaf::representable(cat.clone(), x);
                let o = alpha_beta_law(&fib, j, &y);
                r.record("alpha-beta", format!("{}/{j}/y({})", td.name, cat.object_name(x)), o.with_replay(replay));
            }
        }
        let th = td.theory.theory().clone();
        let mut pool: Vec<(String, Presheaf)> =
            th.objects().map(|n| (format!("y({})", th.object_name(n)), Presheaf::representable(th.clone(), n))).collect();
        for (name, m) in theory_models_of(doc, &td.name, opts.bound) {
            match m {
                Ok(m) => pool.push((name, m.into_presheaf())),
                Err(e) => r.record("beta-alpha", format!("{}/{name}", td.name), Outcome::fail(e).with_replay(replay)),
            }
        }
        for j in 1..=opts.base {
            let mut idx = vec![0usize; j];
            loop {
                let family: Vec<Presheaf> = idx.iter().map(|&i| pool[i].1.clone()).collect();
                let names: Vec<&str> = idx.iter().map(|&i| pool[i].0.as_str()).collect();
                let o = beta_alpha_law(&fib, &family);
                r.record("beta-alpha", format!("{}/[{}]", td.name, names.join(",")), o.with_replay(replay));
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
        }
    }
}

pub fn alpha_beta_law(fib: &FamilyFibration, sorts: usize, bar_m: &Presheaf) -> Outcome {
    let round = sketchy_core::fibered::linton_to_lawvere(fib, sorts, bar_m)
        .and_then(|m| sketchy_core::fibered::lawvere_to_linton(fib, &m));
    match (alpha_beta_iso(fib, sorts, bar_m), round) {
        (Ok(iso), Ok(round)) => Outcome::check(iso.verify(bar_m, &round), || "witness is not an isomorphism".into()),
        (Err(e), _) | (_, Err(e)) => Outcome::from_error(&e),
    }
}

pub fn beta_alpha_law(fib: &FamilyFibration, family: &[Presheaf]) -> Outcome {
    core_outcome(LawvereModel::from_family(fib, family), |m| {
        let round = sketchy_core::fibered::lawvere_to_linton(fib, &m)
            .and_then(|bar| sketchy_core::fibered::linton_to_lawvere(fib, m.sorts(), &bar));
        match (beta_alpha_iso(fib, &m), round) {
            (Ok(isos), Ok(round)) => {
                let ok = isos.iter().enumerate().all(|(k, row)| {
                    row.iter().enumerate().all(|(c, iso)| {
                        let (i, jj) = (c / m.sorts(), c % m.sorts());
                        iso.verify(m.component(k, i, jj), round.component(k, i, jj))
                    })
                });
                Outcome::check(ok, || "component witness is not an isomorphism".into())
            }
            (Err(e), _) | (_, Err(e)) => Outcome::from_error(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Theories, models and tensors

fn theory_models(doc: &Document, opts: &Options, r: &mut SuiteReport) {
    for law in ["certificate", "free-forget", "free-representable", "model"] {
        r.declare(law);
    }
    let replay = || doc.print();
    for td in &doc.theories {
        let t = &td.theory;
        let v = validate_theory(t);
        r.record("certificate", &td.name, Outcome::check(v.is_empty(), || format!("{:?}", v[0])).with_replay(replay));
        let models = theory_models_of(doc, &td.name, opts.bound);
        for (name, m) in &models {
            let o = match m {
                Ok(m) => Outcome::check(model_of(m.presheaf(), t), || "not a model".into()),
                Err(e) => Outcome::fail(e.clone()),
            };
            r.record("model", format!("{}/{name}", td.name), o.with_replay(replay));
        }
        let Some(n) = t.finset_bound() else { continue };
        for k in 0..=n {
            r.record("free-representable", format!("{}/{k}", td.name), free_representable_law(t, k, opts.bound));
        }
        let site = TruncatedFinSetSite::new(n);
        for k in 0..=2 {
            let x = site.power_sheaf(k);
            for (name, m) in models.iter().filter_map(|(n, m)| m.as_ref().ok().map(|m| (n, m))) {
                let o = core_outcome(adjunction_check(&x, m, t, opts.bound), |a| {
                    Outcome::check(a.bijective, || format!("{} model maps against {} sheaf maps", a.model_homs, a.sheaf_homs))
                });
                r.record("free-forget", format!("{}/{name}/x^{k}", td.name), o.with_replay(replay));
            }
        }
    }
}

/// `F(y(k)) ≅ y(τk)` with the iso induced by the unit at the identity.
pub fn free_representable_law(t: &TheoryPresentation, k: usize, bound: usize) -> Outcome {
    let site_cat = t.site().cat().clone();
    let y = Presheaf::representable(site_cat.clone(), k);
    core_outcome(free_model(&y, t, bound), |f| {
        let ty = Presheaf::representable(t.theory().clone(), k);
        let e = f.unit.apply(k, site_cat.hom_index(site_cat.id(k)));
        let fwd = NatTransformation::yoneda(&f.model, k, e);
        Outcome::check(Isomorphism::from_forward(fwd, &ty, &f.model).is_some(), || format!("F(y({k})) is not y({k})"))
    })
}

fn commutative(td: &crate::doc::TheoryDecl) -> sketchy_core::Result<CommutativeTheory> {
    CommutativeTheory::new((*td.theory).clone())
}

fn theory_tensor(doc: &Document, opts: &Options, r: &mut SuiteReport) {
    r.declare("sketchy");
    let replay = || doc.print();
    for td in &doc.theories {
        let ct = match commutative(td) {
            Ok(ct) => ct,
            Err(e) => {
                r.record("sketchy", &td.name, Outcome::from_error(&e).with_replay(replay));
                continue;
            }
        };
        let v = tensor_sketchy(&ct);
        r.record("sketchy", &td.name, Outcome::check(v.is_empty(), || format!("{:?}", v[0])).with_replay(replay));
        let models: Vec<(String, Model)> = theory_models_of(doc, &td.name, opts.bound)
            .into_iter()
            .filter_map(|(n, m)| m.ok().map(|m| (n, m)))
            .collect();
        for (i, (an, a)) in models.iter().enumerate() {
            for (bn, b) in &models[i..] {
                let id = format!("{}/{an},{bn}", td.name);
                let o = tensor_law(a, b, &ct, opts.route, opts.bound);
                r.record(tensor_law_name(opts.route), id, o.with_replay(replay));
            }
        }
    }
}

pub fn tensor_law_name(route: Route) -> &'static str {
    match route {
        Route::Day => "tensor-day",
        Route::Congruence => "tensor-congruence",
        Route::Both => "tensor-routes-agree",
    }
}

pub fn tensor_law(a: &Model, b: &Model, ct: &CommutativeTheory, route: Route, bound: usize) -> Outcome {
    let day = || model_tensor(a, b, ct, TensorRoute::Day, bound);
    let cong = || model_tensor(a, b, ct, TensorRoute::Congruence, bound);
    match route {
        Route::Day => core_outcome(day(), |_| Outcome::Pass),
        Route::Congruence => core_outcome(cong(), |_| Outcome::Pass),
        Route::Both => core_outcome(day(), |x| {
            core_outcome(cong(), |y| {
                Outcome::check(tensor_iso(&x, &y).is_some(), || {
                    format!("routes give {} and {} elements with no matching iso", x.algebra.size(), y.algebra.size())
                })
            })
        }),
    }
}

fn exp_ideal(doc: &Document, opts: &Options, r: &mut SuiteReport) {
    r.declare("exponential-ideal");
    let replay = || doc.print();
    for td in &doc.theories {
        let Ok(ct) = commutative(td) else { continue };
        let models = theory_models_of(doc, &td.name, opts.bound);
        for p in doc.presheaves.iter().filter(|p| **p.presheaf.cat() == **td.theory.theory()) {
            for (mn, m) in models.iter().filter_map(|(n, m)| m.as_ref().ok().map(|m| (n, m))) {
                let o = core_outcome(day_hom_into_model(&p.presheaf, m, &ct), |h| {
                    Outcome::check(h.is_model, || format!("[{}, {mn}] is not a model", p.name))
                });
                r.record("exponential-ideal", format!("{}/{},{mn}", td.name, p.name), o.with_replay(replay));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Day convolution and plain categories

fn day_laws(doc: &Document, r: &mut SuiteReport) {
    for law in ["associativity", "left-unit", "right-unit", "symmetry", "yoneda"] {
        r.declare(law);
    }
    let replay = || doc.print();
    for md in &doc.monoidals {
        let m = &md.monoidal;
        let mut pool: Vec<(String, Presheaf)> = doc
            .presheaves
            .iter()
            .filter(|p| **p.presheaf.cat() == **m.base())
            .map(|p| (p.name.clone(), p.presheaf.clone()))
            .collect();
        if pool.is_empty() {
            let b = m.base();
            pool = b.objects().map(|o| (format!("y({})", b.object_name(o)), Presheaf::representable(b.clone(), o))).collect();
        }
        day_laws_on(&md.name, m, &pool, r, &replay);
    }
}

/// Unit, symmetry and associativity isomorphisms on every pair and triple
/// from `pool`, and `y(a) ⊗ y(b) ≅ y(a ⊗ b)` on every pair of objects.
pub fn day_laws_on(
    name: &str,
    m: &MonoidalFinCategory,
    pool: &[(String, Presheaf)],
    r: &mut SuiteReport,
    replay: &dyn Fn() -> String,
) {
    let base = m.base();
    for a in base.objects() {
        for b in base.objects() {
            let o = core_outcome(yoneda_tensor_iso(a, b, m), |(_, _, iso)| Outcome::check(iso.is_some(), || "no iso".into()));
            let id = format!("{name}/{},{}", base.object_name(a), base.object_name(b));
            r.record("yoneda", id, o.with_replay(replay));
        }
    }
    for (pn, p) in pool {
        let id = format!("{name}/{pn}");
        let o = core_outcome(left_unit_iso(p, m), |(_, iso)| Outcome::check(iso.is_some(), || "no iso".into()));
        r.record("left-unit", id.clone(), o.with_replay(replay));
        let o = core_outcome(right_unit_iso(p, m), |(_, iso)| Outcome::check(iso.is_some(), || "no iso".into()));
        r.record("right-unit", id, o.with_replay(replay));
    }
    for (pn, p) in pool {
        for (qn, q) in pool {
            let pq = match (day_tensor(p, q, m), day_tensor(q, p, m)) {
                (Ok(pq), Ok(qp)) => {
                    let o = Outcome::check(symmetry_iso(&pq, &qp, m).is_some(), || "no iso".into());
                    r.record("symmetry", format!("{name}/{pn},{qn}"), o.with_replay(replay));
                    pq
                }
                (Err(e), _) | (_, Err(e)) => {
                    r.record("symmetry", format!("{name}/{pn},{qn}"), Outcome::from_error(&e).with_replay(replay));
                    continue;
                }
            };
            for (sn, s) in pool {
                let id = format!("{name}/{pn},{qn},{sn}");
                let res = day_tensor(&pq.presheaf, s, m).and_then(|pq_s| {
                    let qs = day_tensor(q, s, m)?;
                    let p_qs = day_tensor(p, &qs.presheaf, m)?;
                    Ok(associator_iso(&pq, &pq_s, &qs, &p_qs, m).is_some())
                });
                let o = core_outcome(res, |ok| Outcome::check(ok, || "no iso".into()));
                r.record("associativity", id, o.with_replay(replay));
            }
        }
    }
}

fn category_laws(doc: &Document, r: &mut SuiteReport) {
    r.declare("category");
    r.declare("functoriality");
    let replay = || doc.print();
    for c in &doc.categories {
        let v = check_category(&c.cat);
        r.record("category", &c.name, Outcome::check(v.is_empty(), || format!("{:?}", v[0])).with_replay(replay));
    }
    for p in &doc.presheaves {
        let v = p.presheaf.check_functoriality();
        let o = Outcome::check(v.is_empty(), || format!("{:?}", v[0]));
        r.record("functoriality", &p.name, o.with_replay(replay));
    }
}

/// The theory of a declaration, shared.
pub fn theory_of(doc: &Document, name: &str) -> Option<Arc<TheoryPresentation>> {
    doc.theory(name).ok().cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    const KERNELS: &str = "\
space X = {x0, x1, x2}
space I = {i0, i1}
over X -> I : x0=i0, x1=i0, x2=i1
map phi : I -> I : i0=i0, i1=i0
kernel k : X -> X over phi
k x0 = {x0: 1/2, x1: 1/2}
k x2 = {x1: -1}
kernel l : X -> X
l x1 = {x0: 2}
";

    #[test]
    fn kernel_suite_passes_and_catches_tampering() {
        let doc = Document::parse(KERNELS).unwrap();
        let opts = Options { trials: 20, seed: 3, ..Options::default() };
        let r = run_suite("kern-laws", &doc, &opts).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.text());
        assert_eq!(r.laws["associativity"].instances, 8 + 20);
        let bad = Document::parse(&KERNELS.replace("k x2 = {x1: -1}", "k x2 = {x2: -1}")).unwrap();
        let r = run_suite("kern-laws", &bad, &opts).unwrap();
        assert_eq!(r.exit_code(), 1);
        let w = &r.laws["support"].witnesses[0];
        assert_eq!(w.instance, "k");
        // The replay reproduces the failure.
        let again = Document::parse(w.replay.as_ref().unwrap()).unwrap();
        assert!(again.kernel("k").is_err());
    }

    #[test]
    fn same_seed_same_bytes() {
        let doc = Document::parse(KERNELS).unwrap();
        let opts = Options { trials: 30, seed: 9, ..Options::default() };
        let a = run_suite("kern-laws", &doc, &opts).unwrap();
        let b = run_suite("kern-laws", &doc, &opts).unwrap();
        assert_eq!(a.jsonl(), b.jsonl());
        assert!(run_suite("nope", &doc, &opts).is_err());
    }

    #[test]
    fn bundle_suites() {
        let src = "\
field F3
space A = {a0, a1, a2}
space C = {c0, c1}
map f : A -> C : a0=c0, a1=c1, a2=c1
map g : A -> C : a0=c1, a1=c1, a2=c0
bundle V over A : a0=2, a1=0, a2=1
bundle W over C : c0=1, c1=3
";
        let doc = Document::parse(src).unwrap();
        let opts = Options { trials: 10, ..Options::default() };
        let r = run_suite("fib-beck-chevalley", &doc, &opts).unwrap();
        assert_eq!((r.exit_code(), r.laws["beck-chevalley"].instances), (0, 4 + 10));
        let r = run_suite("fib-projection", &doc, &opts).unwrap();
        assert_eq!((r.exit_code(), r.laws["projection-formula"].instances), (0, 2 + 10));
    }

    #[test]
    fn alpha_beta_on_degenerate_theory() {
        let doc = Document::parse("theory T = degenerate(2)\n").unwrap();
        let r = run_suite("fib-alpha-beta", &doc, &Options::default()).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.text());
        // Objects of the fibers over 1 and 2, families of length 1 and 2.
        assert_eq!(r.laws["alpha-beta"].instances, 3 + 9);
        assert_eq!(r.laws["beta-alpha"].instances, 3 + 9);
    }

    #[test]
    fn day_suite_on_a_fixture() {
        let doc = Document::parse("monoidal M = chain-3-max\n").unwrap();
        let r = run_suite("day-laws", &doc, &Options::default()).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.text());
        assert_eq!(r.laws["associativity"].instances, 27);
    }
}
