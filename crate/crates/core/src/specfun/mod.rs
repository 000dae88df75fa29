//! Special functions: Γ, Kummer Φ, Tricomi Ψ and Whittaker M, W.

mod gamma;
mod kummer;
mod tricomi;
mod whittaker;

pub use gamma::{gamma, log_gamma, pochhammer, rgamma};
pub use kummer::{
    kummer_phi, kummer_phi_with, HypergeoParams, KummerMethod, SERIES_CAP, SERIES_TOL,
};
pub use tricomi::{tricomi_psi, tricomi_psi_derivative, tricomi_psi_with, TricomiMethod};
pub use whittaker::{
    phi_asymptotic_factor, tricomi_psi_closed, whittaker_m, whittaker_m_asymptotic,
    whittaker_m_derivative, whittaker_w, whittaker_w_derivative,
};
