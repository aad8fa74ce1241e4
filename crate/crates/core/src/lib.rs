//! Exact computations with simplicial sets, cobar constructions, Szczarba's
//! twisting cochain and twisted tensor products.

pub mod chain;
pub mod chainmaps;
pub mod cobar;
pub mod cuts;
pub mod error;
pub mod group;
pub mod homology;
pub mod io;
pub mod models;
pub mod presentation;
pub mod simplex;
pub mod simplicial;
pub mod suites;
pub mod szczarba;
pub mod twist;
pub mod twisted_tensor;

pub use chain::{Basis, Chain, Tensor};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupWord, Letter, SimplicialGroup};
pub use presentation::{Presentation, PresentationBuilder};
pub use simplex::{GenId, Op, OperatorWord, Simplex};
pub use simplicial::{Cell, Pair, Product, Simplicial};
pub use twist::{Action, GSpace, GroupFibre, SetFibre, TwistViolation, TwistedProduct, TwistingFunction};
