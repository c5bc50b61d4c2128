//! Apsidal angles of central-force orbits.
//!
//! The library covers two force-law families on the plane, a homogeneous
//! potential of exponent `alpha` in `[-2, 1]` and the logarithmic potential,
//! and computes the apsidal angle (the angle swept between a pericenter and
//! the following apocenter) by several independent routes:
//!
//! * [`apsidal::apsidal_angle_classic`] — the radial integral between the
//!   apses, with square-root unfolding of the endpoint singularities;
//! * [`apsidal::apsidal_angle_griffin`] — the inverse-radius form of the same
//!   integral;
//! * [`apsidal::apsidal_angle_fixed`] — a fixed-endpoint integral over
//!   `[0, 1]` whose integrand depends on the orbit only through the shape
//!   parameter `q = 1 - r_minus/r_plus`;
//! * [`orbit_oracle`] — direct numerical integration of the equations of
//!   motion, used as a brute-force cross-check.
//!
//! [`series_engine`] holds the combinatorial machinery behind the fixed
//! route: the kernel `E_alpha(s, q)`, its `q`-derivative, the weight and
//! auxiliary-function families, and the exact-rational coefficient tables.
//! [`verified`] provides outward-rounded interval arithmetic and the grid
//! computations that certify positivity bounds for the logarithmic-potential
//! monotonicity result.

pub mod apsidal;
pub mod central_force;
pub mod orbit_oracle;
pub mod quadrature;
pub mod series_engine;
pub mod verified;

pub use apsidal::{AngleResult, Method, QuadratureSpec, ScanRow};
pub use central_force::{ApsisPair, OrbitConfig, PotentialSpec};
pub use verified::{GridReport, Interval};
