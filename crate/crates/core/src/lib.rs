//! Time-frequency analysis of Kohn-Nirenberg operators on finite abelian
//! groups: Fourier and short-time Fourier transforms, Gabor frames, symbol
//! calculus, and Sjöstrand-class norms with their Gabor-matrix
//! characterization.

pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod psido;
pub mod sjostrand;
pub mod gabor;
pub mod transforms;

pub use error::{Error, Result};
pub use gabor::{FrameDiagnostics, GaborSystem};
pub use group::{DualPhasePoint, Element, Group, Lattice, PhasePoint, Side, Subgroup, Weight, WeightKind};
pub use psido::{SpreadingFunction, Symbol};
pub use sjostrand::{CvMatrix, Envelope, GaborMatrix};
pub use transforms::{PhaseDomain, PhaseFunction, Signal};
