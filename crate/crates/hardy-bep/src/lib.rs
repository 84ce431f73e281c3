//! Bounded extremal problems in the Hardy space H² of the unit disk.
//!
//! Given data `f` on an arc-set `I` of the unit circle and a modulus bound `M`
//! on the complement `J`, the crate computes the best `L²(I)` approximant
//! `g0 ∈ H²` with `|g0| <= M` on `J` in two independent ways:
//!
//! * [`bep_solver`]: ascent on the dual functional, with the candidate `g_mu`
//!   evaluated through a Toeplitz solve and cross-checked by the Carleman
//!   (outer-function) formula;
//! * [`poly_solver`]: degree-`n` polynomial approximants under the
//!   semi-infinite constraint, with KKT certificates.
//!
//! [`carleman_recovery`] reconstructs an analytic function inside the disk
//! from its values on `I` alone.
//!
//! ```
//! use hardy_bep::prelude::*;
//! use num_complex::Complex64;
//!
//! let grid = Grid::new(256).unwrap();
//! let f = GridFunction::from_fn(grid, |t| Complex64::from_polar(0.5, t));
//! let problem = BepProblem::with_unit_bound(ArcSet::upper_half(), f, SolverOptions::with_grid(256)).unwrap();
//! let sol = solve_bep(&problem).unwrap();
//! assert!(sol.primal < 1e-8);
//! assert!((sol.g0.coeff(1) - 0.5).norm() < 1e-6);
//! ```

// `!(x > 0.0)` style checks are kept because they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bep_solver;
pub mod carleman_recovery;
pub mod error;
pub mod fourier_core;
pub mod hardy_functions;
pub(crate) mod linalg;
pub mod poly_solver;

pub use error::{BepError, Result};

/// Common imports.
pub mod prelude {
    pub use crate::bep_solver::{
        carleman_g_mu, dual_gradient, dual_value, herglotz_check, kkt_residuals, lp_bound_check, normalize_problem,
        solve_bep, solve_toeplitz, toeplitz_apply, AscentRule, BepProblem, BepSolution, SolverOptions,
    };
    pub use crate::carleman_recovery::{quenching_function, recover_sequence, QuenchingFunction};
    pub use crate::error::{BepError, Result};
    pub use crate::fourier_core::{
        conjugate_function, fft_analyze, fft_synthesize, inner_product, norm_l2, norm_sup, project_minus, project_plus,
        FourierSeries, Grid, GridFunction,
    };
    pub use crate::hardy_functions::{
        blaschke_eval, eval_disk, outer_from_modulus, riesz_herglotz, ArcSet, BlaschkeProduct, OuterFunction,
    };
    pub use crate::poly_solver::{
        convergence_study, gram_matrix, kkt_certificate, solve_fbep, PolyOptions, PolyProblem, PolySolution,
    };
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/fourier.md")]
    struct Fourier;
    #[doc = include_str!("../../../book/src/hardy.md")]
    struct Hardy;
    #[doc = include_str!("../../../book/src/dual_ascent.md")]
    struct DualAscent;
    #[doc = include_str!("../../../book/src/polynomial.md")]
    struct Polynomial;
    #[doc = include_str!("../../../book/src/carleman.md")]
    struct Carleman;
}
