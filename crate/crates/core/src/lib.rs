//! Verlinde numbers of classical groups and their center quotients.
//!
//! The crate computes the Verlinde dimension `N_ℓ(G)` of the space of
//! generalized theta functions on a genus-g curve for simply connected
//! classical groups, for quotients `G/Γ` by order-2 central subgroups
//! (SO(r) for all r ≥ 3), and for Sp(2r). Every value is obtained as an
//! arbitrary-precision trigonometric sum and certified as an exact integer.
//!
//! Module map:
//! - [`rootsys`]: exact root-system data,
//! - [`weights`]: level sets, center actions and orbits,
//! - [`numeric`]: arbitrary-precision reals and integer certification,
//! - [`verlinde`]: the Verlinde sums,
//! - [`so_oracle`]: an independent SO(r) evaluation from u-coordinate sets,
//! - [`suite`]: batch identity checks and reports,
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod numeric;
pub mod rootsys;
pub mod so_oracle;
pub mod suite;
pub mod verlinde;
pub mod weights;

pub use error::{Error, Result};
pub use numeric::{BigReal, Certified, DEFAULT_PRECISION};
pub use rootsys::{Family, GroupType, RootSystem, WeightVector, Q};
pub use verlinde::{
    delta, n_so, n_sp, theta_dim, torus_order, torus_order_oracle, verlinde_product_quotient,
    verlinde_quotient, verlinde_sc, Evaluator, Level, VerlindeResult,
};
pub use weights::{CenterSubgroupSpec, LevelWeight, OrbitSet};
