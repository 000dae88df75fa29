use num_complex::Complex64;
use proptest::prelude::*;
use sliding_core::coulomb::{coulomb_dirac_basis, CoulombParams};
use sliding_core::dirac::{free_basis, free_wronskian};
use sliding_core::inverse::differentiate;
use sliding_core::schrodinger::{eigenvalue, RadialProblem};
use sliding_core::specfun::{kummer_phi, HypergeoParams};
use sliding_core::statsum::*;
use sliding_core::{BranchedEnergy, DiracParams, PotentialSpec};

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

// Σ αₖxᵏ/(cₖk!) summed plainly, for moderate positive x
fn naive_series(a: f64, c: f64, x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..400 {
        let k = k as f64;
        term *= (a + k) / (c + k) * x / (k + 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn kummer_reflection(a in -3.0f64..3.0, c in 0.3f64..5.0, x in -15.0f64..15.0) {
        let p = HypergeoParams::real(a, c).unwrap();
        let q = HypergeoParams::real(c - a, c).unwrap();
        let x = Complex64::new(x, 0.0);
        let lhs = kummer_phi(&p, x).unwrap();
        let rhs = x.exp() * kummer_phi(&q, -x).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn kummer_matches_plain_series(a in 0.0f64..3.0, c in 0.5f64..5.0, x in 0.0f64..10.0) {
        let v = kummer_phi(&HypergeoParams::real(a, c).unwrap(), Complex64::new(x, 0.0)).unwrap();
        let o = naive_series(a, c, x);
        prop_assert!((v.re - o).abs() <= 1e-12 * o.abs() && v.im.abs() < 1e-14 * o.abs());
    }

    #[test]
    fn differences_exact_on_quadratics(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0,
                                       steps in prop::collection::vec(0.05f64..0.2, 3..30)) {
        let mut x = vec![1.0];
        for s in &steps { x.push(x[x.len() - 1] + s); }
        let f: Vec<f64> = x.iter().map(|t| c0 + c1 * t + c2 * t * t).collect();
        let d = differentiate(&x, &f).unwrap();
        for (t, v) in x.iter().zip(&d) {
            prop_assert!((v - (c1 + 2.0 * c2 * t)).abs() < 1e-9);
        }
    }

    #[test]
    fn theta_identity_any_z(lz in -2.0f64..4.0) {
        let (l, r) = theta_identity_check(10f64.powf(lz)).unwrap();
        prop_assert!((l - r).abs() < 1e-12);
    }

    #[test]
    fn product_law(a1 in 0.5f64..2.0, a2 in 0.5f64..2.0, s1 in -1.0f64..1.0, s2 in -1.0f64..1.0, t in 1.0f64..40.0) {
        let l1 = LevelLaw::Dirichlet { a: a1, shift: s1 };
        let l2 = LevelLaw::Dirichlet { a: a2, shift: s2 };
        let joint = partition_sum_separable(&[law_spectrum(&l1, 150), law_spectrum(&l2, 150)], t).unwrap();
        let prod = partition_sum_law(&l1, t).unwrap().value * partition_sum_law(&l2, t).unwrap().value;
        prop_assert!((joint / prod - 1.0).abs() < 1e-10);
    }

    #[test]
    fn free_dirac_wronskian(ell in 1i32..4, z in 1.2f64..40.0, r in 0.01f64..8.0) {
        let e = BranchedEnergy::dirac(z, 1.0).unwrap();
        let b = free_basis(&DiracParams::new(ell, 1.0, PotentialSpec::zero()).unwrap(), &e, r).unwrap();
        let w = free_wronskian(ell as u32, e.eps).unwrap();
        prop_assert!((b.det() - w).norm() < 1e-9 * w.norm());
    }

    #[test]
    fn coulomb_dirac_determinant_constant(a in -0.9f64..0.9, z in 1.5f64..30.0, r1 in 0.05f64..3.0, r2 in 0.05f64..3.0) {
        prop_assume!(a.abs() > 1e-3);
        let p = CoulombParams::dirac(a, 1, 1.0).unwrap();
        let e = BranchedEnergy::dirac(z, 1.0).unwrap();
        let d1 = coulomb_dirac_basis(&p, &e, r1).unwrap().det();
        let d2 = coulomb_dirac_basis(&p, &e, r2).unwrap().det();
        prop_assert!((d1 - d2).norm() < 1e-9 * d1.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn constant_shift_moves_every_level(c in -3.0f64..3.0, a in 0.8f64..3.0, n in 1usize..15) {
        let z0 = eigenvalue(&RadialProblem::new(PotentialSpec::zero(), 0, a).unwrap(), n).unwrap().z;
        let zc = eigenvalue(&RadialProblem::new(PotentialSpec::constant(c), 0, a).unwrap(), n).unwrap().z;
        prop_assert!((zc - z0 - c).abs() < 1e-8 * z0.max(1.0));
    }
}
