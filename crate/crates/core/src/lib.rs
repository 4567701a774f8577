//! Certified evaluation of Schur multiple zeta-functions of Hurwitz type,
//! their Euler–Zagier and root-system building blocks, and numerical or exact
//! verification of the determinant, expansion and derivative identities they
//! satisfy.

pub mod certified;
pub mod error;
pub mod ezzeta;
pub mod identities;
pub mod lgv;
pub mod perm;
pub mod rootzeta;
pub mod schurzeta;
pub mod shapes;
pub mod tableaux;

pub use certified::{Approx, EvalConfig, TailMode};
pub use error::{Result, ZetaError};
pub use shapes::{Cell, FrobeniusCoords, Partition, SkewShape};
pub use tableaux::{ContentSpec, Tableau};

pub use num_complex::Complex64;
