use sliding_core::schrodinger::*;
use sliding_core::{PotentialSpec, PotentialTag};
use std::f64::consts::PI;

// first positive root of tan x = x by plain bisection on (π, 3π/2)
fn tan_root() -> f64 {
    let f = |x: f64| x.sin() - x * x.cos();
    let (mut lo, mut hi) = (PI + 1e-9, 1.5 * PI - 1e-9);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(lo) * f(m) <= 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    0.5 * (lo + hi)
}

fn free(ell: u32, a: f64) -> RadialProblem {
    RadialProblem::new(PotentialSpec::zero(), ell, a).unwrap()
}

#[test]
fn free_modes_are_squares() {
    let spec = eigenvalues_dirichlet(&free(0, PI), 20).unwrap();
    for l in &spec.levels {
        let n = l.n as f64;
        assert!((l.z - n * n).abs() < 1e-8, "n={} z={}", l.n, l.z);
        assert!(l.residual < 1e-10);
    }
}

#[test]
fn regular_solution_free_cases() {
    let s = integrate_regular(&free(0, PI), 1.0, 50).unwrap();
    let u = &s.components[0];
    let scale = u.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    assert!(u.last().unwrap().re.abs() < 1e-10 * scale);
    let k = s.r[0] / s.r[0].sin();
    for (r, v) in s.r.iter().zip(u) {
        assert!((v.re - k * r.sin()).abs() < 1e-10, "r={r}");
    }
    // ℓ = 1: u = 3(sin r / r − cos r) for u ~ r²
    let s = integrate_regular(&free(1, 4.0), 1.0, 40).unwrap();
    let closed = |r: f64| {
        if r < 0.1 {
            let r2 = r * r;
            r2 / 3.0 * (1.0 - r2 / 10.0 + r2 * r2 / 280.0 - r2 * r2 * r2 / 15120.0)
        } else {
            r.sin() / r - r.cos()
        }
    };
    let k = s.r[0].powi(2) / closed(s.r[0]);
    for (r, v) in s.r.iter().zip(&s.components[0]) {
        let e = k * closed(*r);
        assert!(
            (v.re - e).abs() < 1e-9 * e.abs().max(r.powi(2)),
            "r={r}: {} vs {e}",
            v.re
        );
    }
}

#[test]
fn constant_shift_pointwise() {
    let c = 1.7;
    let p = RadialProblem::new(PotentialSpec::constant(c), 0, 2.0).unwrap();
    let a = integrate_regular(&p, 5.0, 30).unwrap();
    let b = integrate_regular(&free(0, 2.0), 5.0 - c, 30).unwrap();
    for (x, y) in a.components[0].iter().zip(&b.components[0]) {
        assert!((x - y).norm() < 1e-10);
    }
}

#[test]
fn constant_potential_levels() {
    let (c, a) = (0.8, 2.0);
    let p = RadialProblem::new(PotentialSpec::constant(c), 0, a).unwrap();
    let spec = eigenvalues_dirichlet(&p, 15).unwrap();
    for l in &spec.levels {
        let e = (PI * l.n as f64 / a).powi(2) + c;
        assert!((l.z - e).abs() < 1e-8, "n={}", l.n);
    }
}

#[test]
fn ell_one_ground_state_matches_tan_root() {
    let x1 = tan_root();
    assert!((x1 - 4.4934094579).abs() < 1e-9);
    let l = eigenvalue(&free(1, PI), 1).unwrap();
    assert!((l.z - (x1 / PI).powi(2)).abs() < 1e-8);
    let approx = asymptotic_sqrt_z(1, PI, 1, 0.0);
    assert!((approx - (1.5 - 1.0 / (1.5 * PI * PI))).abs() < 1e-15);
    assert!((approx - l.z.sqrt()).abs() < 3e-3);
}

#[test]
fn defect_of_constant_potential() {
    let (c, a) = (0.6, 1.5);
    let p = RadialProblem::new(PotentialSpec::constant(c), 0, a).unwrap();
    let spec = eigenvalues_dirichlet(&p, 50).unwrap();
    let d = estimate_defect(&spec, a, 0).unwrap();
    assert!((d.value - c * a).abs() < 1e-6, "{d:?}");
}

#[test]
fn defect_of_free_ell_one() {
    let spec = eigenvalues_dirichlet(&free(1, PI), 50).unwrap();
    let d = estimate_defect(&spec, PI, 1).unwrap();
    assert!(d.value.abs() < 0.01, "{}", d.value);
}

#[test]
fn defect_of_sine_improves_with_levels() {
    let p = RadialProblem::new(PotentialSpec::analytic(PotentialTag::Sin), 0, PI).unwrap();
    let spec = eigenvalues_dirichlet(&p, 60).unwrap();
    let mut errs = Vec::new();
    for &n in &[15usize, 30, 60] {
        let sub = sliding_core::EigenSpectrum {
            levels: spec.levels[..n].to_vec(),
        };
        errs.push((estimate_defect(&sub, PI, 0).unwrap().value - 2.0).abs());
    }
    assert!(errs[2] < 0.05, "{errs:?}");
    assert!(errs[2] <= errs[1] && errs[1] <= errs[0], "{errs:?}");
}

#[test]
fn insufficient_levels() {
    let spec = eigenvalues_dirichlet(&free(0, PI), 4).unwrap();
    assert!(estimate_defect(&spec, PI, 0).is_err());
}

#[test]
fn node_count_indexing() {
    for (tag, ell) in [
        (PotentialTag::Zero, 0u32),
        (PotentialTag::Sin, 1),
        (
            PotentialTag::Gauss {
                mu: 1.0,
                sigma: 0.3,
                amp: 4.0,
            },
            2,
        ),
    ] {
        let p = RadialProblem::new(PotentialSpec::analytic(tag), ell, 2.5).unwrap();
        let spec = eigenvalues_dirichlet(&p, 12).unwrap();
        for l in &spec.levels {
            assert_eq!(
                interior_nodes(&p, l.z).unwrap() as i64,
                l.n - 1,
                "{tag} n={}",
                l.n
            );
        }
    }
}

#[test]
fn sliding_monotonicity_in_endpoint() {
    let q = PotentialSpec::analytic(PotentialTag::Sin);
    for n in [1usize, 4, 9] {
        let mut prev = f64::INFINITY;
        for a in [1.0, 1.3, 1.7, 2.2, 2.9] {
            let z = eigenvalue(&RadialProblem::new(q.clone(), 1, a).unwrap(), n)
                .unwrap()
                .z;
            assert!(z < prev);
            prev = z;
        }
    }
}

#[test]
fn asymptotic_residual_shrinks() {
    let gauss = PotentialTag::Gauss {
        mu: 1.0,
        sigma: 0.4,
        amp: 1.5,
    };
    for tag in [PotentialTag::Sin, gauss] {
        let a = 2.0;
        let q = PotentialSpec::analytic(tag);
        let delta = q.integral(0.0, a);
        let p = RadialProblem::new(q, 0, a).unwrap();
        let spec = eigenvalues_dirichlet(&p, 60).unwrap();
        let res = |lo: usize, hi: usize| {
            spec.levels[lo - 1..hi]
                .iter()
                .map(|l| {
                    (l.n as f64 * (l.z.sqrt() - asymptotic_sqrt_z(l.n as usize, a, 0, delta))).abs()
                })
                .fold(0.0, f64::max)
        };
        assert!(
            res(30, 60) < res(5, 10),
            "{tag}: {} vs {}",
            res(30, 60),
            res(5, 10)
        );
    }
}

#[test]
fn shift_identity_for_spectra() {
    let c = 2.5;
    let g = PotentialTag::Gauss {
        mu: 0.8,
        sigma: 0.3,
        amp: 2.0,
    };
    let a = RadialProblem::new(PotentialSpec::analytic(g), 1, 2.0).unwrap();
    let grid: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
    let shifted: Vec<f64> = grid.iter().map(|&r| g.eval(r) + c).collect();
    let b = RadialProblem::new(
        PotentialSpec::sampled(grid, shifted, sliding_core::Interpolation::Cubic).unwrap(),
        1,
        2.0,
    )
    .unwrap();
    let sa = eigenvalues_dirichlet(&a, 8).unwrap();
    let sb = eigenvalues_dirichlet(&b, 8).unwrap();
    for (x, y) in sa.levels.iter().zip(&sb.levels) {
        assert!((y.z - x.z - c).abs() < 1e-5, "n={}: {}", x.n, y.z - x.z);
    }
}

#[test]
fn whittaker_zero_scaling() {
    for ell in 0..3u32 {
        let zs = whittaker_zeros(ell, 40, ZeroConvention::Scaled).unwrap();
        let lit = whittaker_zeros(ell, 3, ZeroConvention::Literal).unwrap();
        assert!((lit[0] - 2.0 * zs[0]).abs() < 1e-12);
        let res = |n: usize| n as f64 * (zs[n - 1] - whittaker_zero_asymptotic(n, ell)).abs();
        assert!(
            res(40) < res(4) || res(4) < 1e-12,
            "ell={ell}: {} {}",
            res(4),
            res(40)
        );
        assert!(res(40) < 1e-3);
        if ell == 0 {
            assert!((zs[4] - 5.0 * PI).abs() < 1e-11);
        }
    }
}
