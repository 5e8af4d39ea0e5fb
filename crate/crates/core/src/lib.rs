//! Numerical toolkit for weakly coupled time-fractional subdiffusion systems.

pub mod decay;
pub mod error;
pub mod frac_ode;
pub mod mittag_leffler;
pub mod quadrature;
pub mod spectral;
pub mod subdiff_fd;

pub use decay::{fit_decay, fit_exponent, l2_norm, pointwise_exponent, DecayFit, NormSeries};
pub use error::{Error, Result};
pub use frac_ode::{
    branch_cut_invert, check_decay_assumption, find_poles, im_parts, picard_monotonicity, picard_solve, q_of_r,
    LaplaceSymbol, OdePath, OdeSpec, PicardOptions,
};
pub use mittag_leffler::{gamma_fn, mittag_leffler, ml_eval, relaxation_kernel, MLQuery};
pub use spectral::{
    asymptotic_v, decoupled_solve, mode_convolution, q_integral, r_series_identity, ModeConvolution,
    SpectralSolution,
};
pub use subdiff_fd::{
    assemble_block_matrix, banded_solve, gershgorin_disks, l1_weights, simulate, stability_condition,
    step_fully_implicit, step_semi_implicit, BandedMatrix, Field, Grid, History, L1Weights, PairCase, Profile,
    Scheme, SystemSpec, TripleCase,
};
