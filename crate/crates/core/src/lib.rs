//! Braided fusion category invariants and the monotone preorders they induce
//! on mixed-state topological order.
//!
//! The numeric core is generic over the [`Real`] scalar (`f32`/`f64`);
//! the `*64` aliases below fix it to `f64`, which the file format and CLI use.

pub mod catalog;
pub mod error;
pub mod fusion;
pub mod matrix;
pub mod modular;
pub mod pointed;
pub mod preorder;
pub mod sampling;
pub mod scalar;
pub mod semisimple;
pub mod transport;
pub mod validation;

pub use catalog::{catalog_model, CatalogModel};
pub use error::{Error, Result};
pub use fusion::{FusionRing, Label};
pub use matrix::{CMatrix, Matrix};
pub use modular::ModularData;
pub use pointed::{FiniteAbelianGroup, PointedCategory};
pub use scalar::Real;
pub use semisimple::{BlockMorphism, ConjugateDeformation, SemisimpleObject, Side};
pub use transport::{TensorFunctorData, TransportResult};
pub use validation::{ValidationReport, Violation};

pub type ModularData64 = ModularData<f64>;
pub type ModularData32 = ModularData<f32>;
pub type PointedCategory64 = PointedCategory<f64>;
