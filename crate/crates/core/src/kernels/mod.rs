//! Finitely supported signed measures and kernels between spaces fibered
//! over finite bases.

mod concrete;
mod kernel;
mod measure;

pub use concrete::{is_concrete, terminal_object, ConcreteWitness};
pub use kernel::{cartesian_lift, compose, dirac, pushforward, tensor_kernels, CartesianLift, Kernel};
pub use measure::{product_map, AtomicMeasure, BasedSpace, MeasSpace};
