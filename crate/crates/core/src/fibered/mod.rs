//! Linear bundles over finite sets with base change `Σ_φ ⊣ φ* ⊣ Π_φ`, the
//! Beck–Chevalley and projection-formula comparisons, and the family
//! fibration of a theory with the passage between fibered multiplicative
//! models and Linton models over a base object.

mod beck;
mod bundle;
mod family;

pub use beck::{
    beck_chevalley_map, check_beck_chevalley, check_projection_formula, projection_is_natural, projection_map,
    Square, Witness,
};
pub use bundle::{
    pi_bundle, pi_counit, pi_map, pi_unit, pullback_bundle, pullback_map, sigma_bundle, sigma_counit, sigma_map,
    sigma_unit, tensor_bundle, tensor_map, triangle_identities, BundleMap, FinMap, LinearBundle, Triangles,
};
pub use family::{
    alpha_beta_iso, beta_alpha_iso, check_lawvere, lawvere_to_linton, linton_to_lawvere, FamilyFibration,
    FiberedPresentation, FiberedViolation, LawvereFailure, LawvereModel,
};
