//! Entanglement and correlation measures built on the geometry of local
//! unitary orbits.
//!
//! * [`pure_ed`]: entanglement distance of pure states from the
//!   Fubini–Study metric of local rotations.
//! * [`qcd`]: quantum correlation distance of mixed states in closed form.
//! * [`ed_mixed`]: convex-roof style entanglement distance of mixed states,
//!   computed by restarted Nelder–Mead.
//! * [`oracles`]: Bell-diagonal and Werner reference formulas, concurrence
//!   and the partial-transpose test.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ed_mixed;
pub mod error;
pub mod linalg;
pub mod optim;
pub mod oracles;
pub mod pure_ed;
pub mod qcd;
pub mod qstate;
pub mod random;
pub mod state_io;
pub mod su2;

pub use ed_mixed::{
    ed, ed_inner, ed_with_warm_start, eigen_decomposition, mix_decomposition, Decomposition, EdMode, EdResult, EdWitness,
    LocalUnitaryAssignment, OptimizerOptions,
};
pub use error::{Error, Result};
pub use linalg::C64;
pub use oracles::{BdCorrelationVector, BdWeights, BellLabel};
pub use pure_ed::{fs_metric, pure_ed, MetricTensor};
pub use qcd::{qcd, QcdResult};
pub use qstate::{BlochVector, DensityMatrix, PauliAxis, PureState, UnitVector3};
pub use state_io::{parse_state, StateInput};
