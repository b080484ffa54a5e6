//! Numerical substrate: arbitrary-precision scalars, dense polynomials,
//! small dense linear algebra and polynomial root finding.

pub mod complex;
pub mod linalg;
pub mod poly;
pub mod real;
pub mod roots;

pub use complex::Complex;
pub use linalg::{cholesky_pd, solve_dense, sym_eigen, sym_eigen_vectors, Matrix, SymMatrix};
pub use poly::Poly;
pub use real::{
    precision_digits, rel_diff, set_working_precision, tol, working_precision, BigReal,
    DEFAULT_PRECISION,
};
pub use roots::{expand_roots, poly_roots, real_roots, root_snap_tol, sort_roots};
