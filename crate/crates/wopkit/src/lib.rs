//! Exact computations around weighted orbital integrals on gl_n(Q_p).

pub mod exactnum;
pub mod orbits;
pub mod paracomb;
pub mod gmfam;
pub mod weights;
pub mod integrals;
pub mod suites;

pub use exactnum::{Matrix, Polynomial, Rat, SurdPoly};

pub type MatQ = Matrix<Rat>;
pub type PolyQ = Polynomial<Rat>;
