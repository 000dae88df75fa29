//! Spectral solvers for radial Schrödinger and Dirac problems, quantum-defect
//! estimation from spectra and sliding inverse recovery of the potential.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub mod coulomb;
pub mod dirac;
pub mod inverse;
pub mod io;
pub mod numerics;
pub mod ode;
pub mod potential;
pub mod schrodinger;
pub mod statsum;
pub mod types;

pub use coulomb::CoulombParams;
pub use dirac::{BranchedEnergy, DiracBasis, DiracParams};
pub use inverse::{DefectCurve, DefectField2D, Side, Smoothing};
pub use potential::{Interpolation, PotentialSpec, PotentialTag};
pub use statsum::{BoxDomain, StatSumReport};
pub use types::{DefectEstimate, EigenSpectrum, Level, SolutionSample};
