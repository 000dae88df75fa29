//! Whittaker functions M_{κ,ℓ+1/2} and W_{κ,ℓ+1/2} for integer ℓ.

use super::gamma::gamma;
use super::kummer::{kummer_phi, HypergeoParams};
use super::tricomi::{tricomi_psi, tricomi_psi_derivative};
use crate::error::{Error, Result};
use num_complex::Complex64;

fn prefactor(ell: u32, x: Complex64) -> Complex64 {
    (-x / 2.0).exp() * x.powc(Complex64::new(ell as f64 + 1.0, 0.0))
}

/// M_{κ,ℓ+1/2}(x) = e^{−x/2} x^{ℓ+1} Φ(ℓ+1−κ, 2ℓ+2, x), principal branch of x^{ℓ+1}.
pub fn whittaker_m(kappa: Complex64, ell: u32, x: Complex64) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("Whittaker M at x = 0".into()));
    }
    let p = HypergeoParams::new(
        ell as f64 + 1.0 - kappa,
        Complex64::new(2.0 * ell as f64 + 2.0, 0.0),
    )?;
    Ok(prefactor(ell, x) * kummer_phi(&p, x)?)
}

/// W_{κ,ℓ+1/2}(x) = e^{−x/2} x^{ℓ+1} Ψ(ℓ+1−κ, 2ℓ+2, x).
pub fn whittaker_w(kappa: Complex64, ell: u32, x: Complex64) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("Whittaker W at x = 0".into()));
    }
    let a = ell as f64 + 1.0 - kappa;
    let b = Complex64::new(2.0 * ell as f64 + 2.0, 0.0);
    Ok(prefactor(ell, x) * tricomi_psi(a, b, x)?)
}

/// dW_{κ,ℓ+1/2}/dx.
pub fn whittaker_w_derivative(kappa: Complex64, ell: u32, x: Complex64) -> Result<Complex64> {
    let a = ell as f64 + 1.0 - kappa;
    let b = Complex64::new(2.0 * ell as f64 + 2.0, 0.0);
    let u = tricomi_psi(a, b, x)?;
    let du = tricomi_psi_derivative(a, b, x)?;
    let l1 = ell as f64 + 1.0;
    Ok(prefactor(ell, x) * (u * (l1 / x - 0.5) + du))
}

/// dM_{κ,ℓ+1/2}/dx.
pub fn whittaker_m_derivative(kappa: Complex64, ell: u32, x: Complex64) -> Result<Complex64> {
    let a = ell as f64 + 1.0 - kappa;
    let b = Complex64::new(2.0 * ell as f64 + 2.0, 0.0);
    let p = HypergeoParams::new(a, b)?;
    let dp = HypergeoParams::new(a + 1.0, b + 1.0)?;
    let phi = kummer_phi(&p, x)?;
    let dphi = a / b * kummer_phi(&dp, x)?;
    let l1 = ell as f64 + 1.0;
    Ok(prefactor(ell, x) * (phi * (l1 / x - 0.5) + dphi))
}

/// Γ(ℓ+1)·W_{0,ℓ+1/2}(x) by the finite sum e^{−x/2} x^{−ℓ} Σ_p C(ℓ,p) Γ(2ℓ−p+1) x^p.
pub fn tricomi_psi_closed(ell: u32, x: Complex64) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("closed-form W at x = 0".into()));
    }
    let l = ell as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    let mut xp = Complex64::new(1.0, 0.0);
    for p in 0..=l {
        sum += binom * factorial(2 * l - p) * xp;
        binom *= (l - p) as f64 / (p + 1) as f64;
        xp *= x;
    }
    Ok((-x / 2.0).exp() * x.powi(-(ell as i32)) * sum)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Two-term large-argument factor φ(r, ε, ℓ) = 1 + ℓ(ℓ+1)/(2rε).
pub fn phi_asymptotic_factor(r: f64, eps: Complex64, ell: u32) -> Result<Complex64> {
    let re = eps * r;
    if re.norm() == 0.0 {
        return Err(Error::Domain("rε = 0".into()));
    }
    let l = ell as f64;
    Ok(1.0 + l * (l + 1.0) / (2.0 * re))
}

/// Two-exponential large-ε form of M_{0,ℓ+1/2}(2rε):
/// (2ε)^{ℓ+1} C₁ (−e^{iπℓ/2} e^{−rε} φ(r,ε) + e^{−iπℓ/2} e^{rε} φ(r,−ε)),
/// with C₁ = e^{iπℓ/2} Γ(2ℓ+2)/Γ(ℓ+1) (2ε)^{−(ℓ+1)}.
pub fn whittaker_m_asymptotic(r: f64, eps: Complex64, ell: u32) -> Result<Complex64> {
    let l = ell as f64;
    let ph = Complex64::new(0.0, std::f64::consts::FRAC_PI_2 * l).exp();
    let g = gamma(Complex64::new(2.0 * l + 2.0, 0.0))? / gamma(Complex64::new(l + 1.0, 0.0))?;
    let a = -ph * (-eps * r).exp() * phi_asymptotic_factor(r, eps, ell)?;
    let b = (eps * r).exp() * phi_asymptotic_factor(r, -eps, ell)? / ph;
    Ok(ph * g * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn m_zero_kappa_ell_zero_is_sinh() {
        for &x in &[c(0.3, 0.0), c(2.0, 1.0), c(0.0, 7.0)] {
            let v = whittaker_m(c(0.0, 0.0), 0, x).unwrap();
            let e = 2.0 * (x / 2.0).sinh();
            assert!((v - e).norm() < 1e-14 * e.norm().max(1.0));
        }
        let z = whittaker_m(c(0.0, 0.0), 0, c(0.0, 2.0 * std::f64::consts::PI)).unwrap();
        assert!(z.norm() < 1e-14);
    }

    #[test]
    fn closed_form_values() {
        let x = c(2.0, 0.0);
        let v = tricomi_psi_closed(1, x).unwrap();
        assert!((v.re - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let v0 = tricomi_psi_closed(0, c(1.7, 0.4)).unwrap();
        assert!((v0 - (-c(1.7, 0.4) / 2.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn closed_form_matches_general_w() {
        for ell in 0..5u32 {
            for &x in &[c(0.5, 0.0), c(3.0, 4.0), c(0.0, 12.0)] {
                let a = tricomi_psi_closed(ell, x).unwrap() / factorial(ell as usize);
                let b = whittaker_w(c(0.0, 0.0), ell, x).unwrap();
                assert!((a - b).norm() < 1e-12 * a.norm(), "ell={ell} x={x}");
            }
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            phi_asymptotic_factor(1.0, c(1.0, 0.0), 0).unwrap(),
            c(1.0, 0.0)
        );
        assert!((phi_asymptotic_factor(1.0, c(1.0, 0.0), 1).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!(
            (phi_asymptotic_factor(1.0, c(0.0, 3.0), 2).unwrap() - c(1.0, -1.0)).norm() < 1e-15
        );
    }

    #[test]
    fn derivatives_match_differences() {
        let (k, l, x) = (c(0.1, -0.3), 2u32, c(1.5, 2.5));
        let h = 1e-5;
        let nm =
            (whittaker_m(k, l, x + h).unwrap() - whittaker_m(k, l, x - h).unwrap()) / (2.0 * h);
        let nw =
            (whittaker_w(k, l, x + h).unwrap() - whittaker_w(k, l, x - h).unwrap()) / (2.0 * h);
        assert!((nm - whittaker_m_derivative(k, l, x).unwrap()).norm() < 1e-8 * nm.norm());
        assert!((nw - whittaker_w_derivative(k, l, x).unwrap()).norm() < 1e-8 * nw.norm());
    }
}
