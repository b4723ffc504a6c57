//! Day convolution of presheaves over a finite monoidal category, internal
//! homs, and tensor products of models of a commutative theory.

mod day;
mod models;
mod monoidal;

pub use day::{
    associator_iso, day_curry, day_hom, day_tensor, left_unit_iso, right_unit_iso, shifted, symmetry_iso,
    yoneda_tensor_iso, DayHom, DayTensor,
};

pub use monoidal::{monoidal_fixtures, Component, MonoidalFinCategory, MonoidalViolation};
pub use models::{
    curry, day_hom_into_model, model_hom, model_tensor, tensor_iso, tensor_sketchy, CommutativeTheory, ModelHom,
    ModelTensor, SketchyViolation, TensorRoute,
};
