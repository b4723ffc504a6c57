//! Finite categories, functors, presheaves and natural transformations,
//! finite limits and colimits of sets, Kan extensions, ends and coends.
//!
//! Ends and coends use the usual variance: in `∫_c H(c, c)` and
//! `∫^c H(c, c)` the first argument of `H` is contravariant.

mod category;
mod csp;
mod ends;
mod functor;
mod hom;
mod kan;
mod limits;
mod presheaf;

pub use category::{check_category, composition_generators, power, product, Arr, CategoryViolation, FinCategory, Ob};
pub use ends::{coend_of, end_of, Bifunctor};
pub use functor::{FinFunctor, FunctorViolation};
pub use hom::{count_homs, find_iso, for_each_hom, homs};
pub use kan::{lan, ran, LeftKan, RightKan};
pub use limits::{colimit, limit, Colimit, Limit, SetDiagram};
pub use presheaf::{
    check_functoriality, Isomorphism, NatTransformation, Presheaf, PresheafLike, PresheafViolation,
    Restriction,
};

pub(crate) use category::NONE;
pub(crate) use functor::same_category;
