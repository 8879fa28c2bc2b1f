//! Discrete geometric currents: cell complexes, chains and polynomial forms,
//! linear-programming flat norms, transport of currents along vector-field
//! flows, space-time slicing and variation, and the Flat Mountain
//! construction.

pub mod cell;
pub mod chain;
pub mod cli;
pub mod complex;
pub mod error;
pub mod field;
pub mod flatnorm;
pub mod form;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod mountain;
pub mod path;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod spacetime;
pub mod transport;
pub mod verify;

pub use cell::{Cell, Point};
pub use chain::Current;
pub use complex::{CellComplex, ComplexKind};
pub use error::{GeoError, Result};
pub use field::VectorField;
pub use flatnorm::{flat_distance, flat_norm, plateau_filling, FlatKind, FlatNormCertificate};
pub use form::PolyForm;
pub use path::CurrentPath;
pub use spacetime::SpaceTimeCurrent;
pub use poly::{Poly, RPoly};
pub use rational::{Measure, Rational};
