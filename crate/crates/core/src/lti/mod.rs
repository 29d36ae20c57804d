//! Polynomial, transfer-function and state-space numerics.

pub mod discrete;
pub mod eig;
pub mod freq;
pub mod lyap;
pub mod norm;
pub mod poly;
pub mod reduce;
pub mod ss;
pub mod tf;

pub use discrete::{discretize_tustin, discretize_zoh, step_response, DiscreteRunner, DiscreteStateSpace, SisoRunner};
pub use freq::{FrequencyGrid, RIPPLE_OMEGA};
pub use lyap::{lyap_residual, lyap_solve};
pub use norm::{hinf_norm, hinf_norm_grid_oracle, oracle_grid};
pub use poly::Polynomial;
pub use reduce::{balanced_truncation, hankel_singular_values, Reduction};
pub use ss::{BlockDiagram, Signal, StateSpace};
pub use tf::TransferFunction;
