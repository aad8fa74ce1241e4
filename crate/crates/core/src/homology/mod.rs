//! Homology over ℤ by Smith normal form, mapping cones, and spectral sequences
//! of filtered complexes over a field.

pub mod augmentation;
pub mod complex;
pub mod field;
pub mod snf;
pub mod spectral;

pub use complex::{FiniteComplex, Homology};
pub use field::Field;
pub use spectral::{FilteredComplex, Page, SpectralSequence};
