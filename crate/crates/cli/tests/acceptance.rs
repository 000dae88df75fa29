//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use sliding_core::coulomb::{
    coulomb_dirac_basis, coulomb_dirac_defect, coulomb_dirac_regular, coulomb_schrodinger_decaying,
    coulomb_schrodinger_pair,
};
use sliding_core::dirac::{
    eigenvalue_bc, eigenvalues_bc, estimate_defect_dirac, estimate_tail_defect, free_basis,
    BcReading,
};
use sliding_core::inverse::{
    recover_q_multidim, recover_values_1d, sliding_pipeline_schrodinger, DefectCurve,
    DefectField2D, PipelineOptions, Side, Smoothing,
};
use sliding_core::schrodinger::{
    asymptotic_sqrt_z, eigenvalues_dirichlet, estimate_defect, RadialProblem,
};
use sliding_core::statsum::{
    anharmonic_defect, anharmonic_levels, anharmonic_levels_shooting, asympt_1d, asympt_anharmonic,
    asympt_multidim, law_spectrum, partition_sum_law, partition_sum_separable,
    theta_identity_check, theta_remainder, BoxDomain, LevelLaw,
};
use sliding_core::{
    BranchedEnergy, Complex64, CoulombParams, DiracParams, EigenSpectrum, PotentialSpec,
    PotentialTag,
};
use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn grid(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let n = ((hi - lo) / h).round() as usize;
    (0..=n).map(|i| lo + h * i as f64).collect()
}

fn fmt_vec(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", cells.join(", "))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn free_spectrum() -> Check {
    let p = RadialProblem::new(PotentialSpec::zero(), 0, PI).map_err(e2s)?;
    let spec = eigenvalues_dirichlet(&p, 20).map_err(e2s)?;
    ensure(spec.len() == 20, || format!("{} levels", spec.len()))?;
    let err = spec
        .levels
        .iter()
        .map(|l| (l.z - (l.n * l.n) as f64).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-8, || format!("max |z_n − n²| = {err:.3e}"))?;
    Ok(format!("max |z_n − n²| = {err:.3e} for n ≤ 20"))
}

fn theta_identity() -> Check {
    let mut worst = 0.0f64;
    for z in [0.01, 1.0, 10.0, 100.0, 1e4] {
        let (l, r) = theta_identity_check(z).map_err(e2s)?;
        let d = (l - r).abs();
        ensure(d < 1e-12, || format!("z={z}: |lhs − rhs| = {d:.3e}"))?;
        worst = worst.max(d);
    }
    for z in [1.0, 2.0, 5.0, 10.0, 50.0] {
        let rem = theta_remainder(z);
        let bound = (-z * PI * PI / 2.0).exp();
        ensure(rem < bound, || {
            format!("z={z}: remainder {rem:.3e} ≥ bound {bound:.3e}")
        })?;
    }
    Ok(format!(
        "max |lhs − rhs| = {worst:.3e}; remainder below e^(−zπ²/2) for z ∈ [1, 50]"
    ))
}

fn schrodinger_defect() -> Check {
    let (c, a) = (0.6, 1.5);
    let p = RadialProblem::new(PotentialSpec::constant(c), 0, a).map_err(e2s)?;
    let d = estimate_defect(&eigenvalues_dirichlet(&p, 50).map_err(e2s)?, a, 0).map_err(e2s)?;
    let err_c = (d.value - c * a).abs();
    ensure(err_c < 1e-6, || format!("constant: |δ̂ − ca| = {err_c:.3e}"))?;

    let q = PotentialSpec::analytic(PotentialTag::Sin);
    let p = RadialProblem::new(q, 0, PI).map_err(e2s)?;
    let spec = eigenvalues_dirichlet(&p, 60).map_err(e2s)?;
    let d = estimate_defect(&spec, PI, 0).map_err(e2s)?;
    let rel = (d.value - 2.0).abs() / 2.0;
    ensure(rel < 0.05, || {
        format!("sin: δ̂ = {} ({:.2}% off)", d.value, 100.0 * rel)
    })?;
    let res = |lo: usize, hi: usize| {
        spec.levels[lo - 1..hi]
            .iter()
            .map(|l| {
                (l.n as f64 * (l.z.sqrt() - asymptotic_sqrt_z(l.n as usize, PI, 0, 2.0))).abs()
            })
            .fold(0.0, f64::max)
    };
    let (early, late) = (res(5, 10), res(30, 60));
    ensure(late < early, || {
        format!("window residual {early:.3e} → {late:.3e} did not decrease")
    })?;
    Ok(format!(
        "const |δ̂ − ca| = {err_c:.2e}; sin δ̂ = {:.6} ({:.3}%); residual [5,10] {early:.2e} → [30,60] {late:.2e}",
        d.value,
        100.0 * rel
    ))
}

fn wronskian() -> Check {
    let m = 1.0;
    let mut worst = 0.0f64;
    for ell in 1..=3i32 {
        let p = DiracParams::new(ell, m, PotentialSpec::zero()).map_err(e2s)?;
        // Γ(2ℓ)/Γ(ℓ) = (2ℓ−1)!/(ℓ−1)!
        let ratio = (ell..2 * ell).map(|k| k as f64).product::<f64>();
        for z in [1.5, 4.0, 25.0, 100.0] {
            let e = BranchedEnergy::dirac(z, m).map_err(e2s)?;
            let want = Complex64::new(ratio, 0.0) / e.eps;
            let dets: Vec<Complex64> = (0..=16)
                .map(|k| free_basis(&p, &e, 1e-3 * 10f64.powf(k as f64 / 4.0)).map(|b| b.det()))
                .collect::<Result<_, _>>()
                .map_err(e2s)?;
            for d in &dets {
                let spread = (d - dets[0]).norm() / dets[0].norm();
                let off = (d - want).norm() / want.norm();
                ensure(spread < 1e-9 && off < 1e-9, || {
                    format!("ℓ={ell} z={z}: spread {spread:.2e}, off {off:.2e}")
                })?;
                worst = worst.max(spread).max(off);
            }
        }
    }
    Ok(format!(
        "max relative deviation {worst:.2e} over ℓ ∈ {{1,2,3}}, r ∈ [1e−3, 10]"
    ))
}

fn dirac_asymptotics() -> Check {
    let (a, ell) = (2.0, 1);
    let p = DiracParams::new(ell, 1.0, PotentialSpec::zero()).map_err(e2s)?;
    let res: Vec<f64> = [1i64, 10, 100, 1000]
        .iter()
        .map(|&n| {
            eigenvalue_bc(&p, a, FRAC_PI_2, n, BcReading::F1Sin)
                .map(|l| (a * l.z - PI * (n as f64 + ell as f64 / 2.0)).abs())
        })
        .collect::<Result<_, _>>()
        .map_err(e2s)?;
    ensure(strictly_decreasing(&res), || {
        format!("residuals across n-decades {}", fmt_vec(&res))
    })?;

    let c = 0.5;
    let p = DiracParams::new(ell, 1.0, PotentialSpec::constant(c)).map_err(e2s)?;
    let spec = eigenvalues_bc(&p, a, FRAC_PI_2, 1..=40).map_err(e2s)?;
    let d = estimate_defect_dirac(&spec, a, ell, FRAC_PI_2).map_err(e2s)?;
    let rel = (d.value - c * a).abs() / (c * a);
    ensure(rel < 0.02, || {
        format!("constant: δ̂ = {} vs {}", d.value, c * a)
    })?;
    Ok(format!(
        "residual at n = 1, 10, 100, 1000: {}; const δ̂ off by {:.3}%",
        fmt_vec(&res),
        100.0 * rel
    ))
}

fn anharmonic() -> Check {
    let spec =
        anharmonic_levels_shooting(&PotentialSpec::constant(0.0), 10, Some(20.0)).map_err(e2s)?;
    let err = spec
        .levels
        .iter()
        .map(|l| (l.z - (2.0 * l.n as f64 - 0.5)).abs())
        .fold(0.0, f64::max);
    ensure(spec.len() == 10 && err < 1e-8, || {
        format!("max |z_n − (2n − 1/2)| = {err:.3e}")
    })?;

    let q = PotentialSpec::analytic(PotentialTag::Gauss {
        mu: 1.5,
        sigma: 0.4,
        amp: 1.0,
    });
    let delta = q.integral(0.0, 12.0);
    let spec = anharmonic_levels(&q, 60).map_err(e2s)?;
    let top = EigenSpectrum {
        levels: spec.levels[19..].to_vec(),
    };
    let d = anharmonic_defect(&top).map_err(e2s)?;
    let rel = (d.value - delta).abs() / delta;
    ensure(rel < 0.05, || {
        format!("bump: fit {} vs ∫q = {delta}", d.value)
    })?;
    Ok(format!(
        "q ≡ 0 max error {err:.2e}; bump fit off by {:.2}% on n ∈ [20, 60]",
        100.0 * rel
    ))
}

fn direct(law: LevelLaw, t: f64) -> Result<f64, String> {
    partition_sum_law(&law, t).map(|s| s.value).map_err(e2s)
}

fn statsum() -> Check {
    let ts = [1e2, 1e3, 1e4];
    let trend = |name: &str, res: Vec<f64>| -> Result<(), String> {
        ensure(nonincreasing(&res), || {
            format!("{name}: residuals {} increase", fmt_vec(&res))
        })
    };

    let (a, c) = (1.3, 0.7);
    let res: Vec<f64> = ts
        .iter()
        .map(|&t| {
            direct(LevelLaw::Dirichlet { a, shift: c }, t)
                .map(|z| (z - asympt_1d(t, a, c * a)).abs())
        })
        .collect::<Result<_, _>>()?;
    trend("1-D box", res)?;

    let (a1, a2, c1, c2) = (1.0, 1.5, 0.4, 0.3);
    let b = BoxDomain::new(vec![a1, a2]).map_err(e2s)?;
    let res: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let z = direct(LevelLaw::Dirichlet { a: a1, shift: c1 }, t)?
                * direct(LevelLaw::Dirichlet { a: a2, shift: c2 }, t)?;
            Ok((z - asympt_multidim(t, &b, (c1 + c2) * a1 * a2)).abs())
        })
        .collect::<Result<_, String>>()?;
    trend("2-D box", res)?;

    for k in [1u32, 2] {
        let res: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let z = direct(LevelLaw::Harmonic { shift: 0.0 }, t)?.powi(k as i32);
                Ok((z - asympt_anharmonic(t, 0.0, k).map_err(e2s)?).abs())
            })
            .collect::<Result<_, String>>()?;
        trend(&format!("anharmonic k={k}"), res)?;
    }

    // product law on the k = 2 box [0, π]², direct sums
    let t = 1e4;
    let law = LevelLaw::Dirichlet { a: PI, shift: 0.0 };
    let one = law_spectrum(&law, 800);
    let joint = partition_sum_separable(&[one.clone(), one], t).map_err(e2s)?;
    let z1 = direct(law, t)?;
    let prod_rel = (joint / (z1 * z1) - 1.0).abs();
    ensure(prod_rel < 1e-10, || {
        format!("product law off by {prod_rel:.3e}")
    })?;
    let b = BoxDomain::new(vec![PI, PI]).map_err(e2s)?;
    let exp_rel = (asympt_multidim(t, &b, 0.0) / (z1 * z1) - 1.0).abs();
    ensure(exp_rel < 1e-2, || {
        format!("truncated expansion off by {exp_rel:.3e}")
    })?;
    Ok(format!(
        "residuals nonincreasing for 1-D, 2-D box, anharmonic k = 1, 2; product law {prod_rel:.1e}; expansion {exp_rel:.1e} at T = 1e4"
    ))
}

fn inverse() -> Check {
    let x = grid(0.1, 3.0, 1e-3);
    let d: Vec<f64> = x.iter().map(|a| 1.0 - a.cos()).collect();
    let q = recover_values_1d(
        &DefectCurve::new(x.clone(), d, Side::FromOrigin).map_err(e2s)?,
        Smoothing::None,
    )
    .map_err(e2s)?;
    let err_cos = x
        .iter()
        .zip(&q)
        .map(|(a, v)| (v - a.sin()).abs())
        .fold(0.0, f64::max);
    ensure(err_cos < 1e-5, || {
        format!("1 − cos a: max error {err_cos:.3e}")
    })?;

    let x = grid(0.2, 3.0, 1e-3);
    let d: Vec<f64> = x.iter().map(|r| (-r).exp()).collect();
    let q = recover_values_1d(
        &DefectCurve::new(x.clone(), d, Side::Tail).map_err(e2s)?,
        Smoothing::None,
    )
    .map_err(e2s)?;
    let err_tail = x
        .iter()
        .zip(&q)
        .map(|(r, v)| (v - (-r).exp()).abs())
        .fold(0.0, f64::max);
    ensure(err_tail < 1e-5, || {
        format!("tail e^(−r): max error {err_tail:.3e}")
    })?;

    let a_grid = grid(1.0, 3.1, 0.05);
    let sin = PotentialSpec::analytic(PotentialTag::Sin);
    let r = sliding_pipeline_schrodinger(&sin, 0, &a_grid, 60, &PipelineOptions::default())
        .map_err(e2s)?;
    ensure(r.l2_relative < 0.1, || {
        format!("pipeline L² relative error {:.3e}", r.l2_relative)
    })?;

    // O(h²): the error at h = 1e−3 is below 1e−5 and shrinks about fourfold when h halves
    let mixed_err = |h: f64| -> Result<f64, String> {
        let ax = grid(0.5, 1.5, h);
        let f = DefectField2D::from_fn(ax.clone(), ax.clone(), |a, b| {
            b * (1.0 - a.cos()) + a * (1.0 - b.cos())
        })
        .map_err(e2s)?;
        let q = recover_q_multidim(&f).map_err(e2s)?;
        let mut err = 0.0f64;
        for (i, a) in ax.iter().enumerate() {
            for (j, b) in ax.iter().enumerate() {
                err = err.max((q.values[i][j] - a.sin() - b.sin()).abs());
            }
        }
        Ok(err)
    };
    let (e1, e2) = (mixed_err(1e-2)?, mixed_err(5e-3)?);
    let e3 = mixed_err(1e-3)?;
    let order = (e1 / e2).log2();
    ensure(e3 < 1e-5 && (1.8..2.2).contains(&order), || {
        format!("2-D: error {e3:.3e}, observed order {order:.2}")
    })?;
    Ok(format!(
        "1-D max errors {err_cos:.1e} / {err_tail:.1e}; pipeline L² {:.2}%; 2-D error {e3:.1e}, order {order:.2}",
        100.0 * r.l2_relative
    ))
}

fn coulomb() -> Check {
    let strengths = [0.1, 0.01, 0.001];
    let monotone = |name: &str, d: &[f64]| {
        ensure(strictly_decreasing(d), || {
            format!("{name}: deviations {}", fmt_vec(d))
        })
    };

    // Schrödinger pair and decaying solution against the ℓ = 0 free pair sinh(rε)/ε, e^{−rε}
    let e = BranchedEnergy::schrodinger(Complex64::new(9.0, 0.0)).map_err(e2s)?;
    let r = 0.7;
    let (f1, f2) = ((r * e.eps).sinh() / e.eps, (-r * e.eps).exp());
    let mut d_pair = Vec::new();
    let mut d_dec = Vec::new();
    for &a in &strengths {
        let p = CoulombParams::schrodinger(a, 0).map_err(e2s)?;
        let (u1, u2) = coulomb_schrodinger_pair(&p, &e, r).map_err(e2s)?;
        d_pair.push(((u1 - f1).norm() / f1.norm()).max((u2 - f2).norm() / f2.norm()));
        let s = coulomb_schrodinger_decaying(&p, &e, &PotentialSpec::zero(), &[r]).map_err(e2s)?;
        d_dec.push((s.components[0][0] - f2).norm() / f2.norm());
    }
    monotone("schrodinger pair", &d_pair)?;
    monotone("schrodinger decaying", &d_dec)?;

    // Dirac basis and regular solution against the free ones
    let (ell, m, z) = (2, 1.0, 4.0);
    let e = BranchedEnergy::dirac(z, m).map_err(e2s)?;
    let free_p = DiracParams::new(ell, m, PotentialSpec::zero()).map_err(e2s)?;
    let free = free_basis(&free_p, &e, 0.8).map_err(e2s)?;
    let fr = free.regular();
    let mut d_basis = Vec::new();
    let mut d_reg = Vec::new();
    for &a in &strengths {
        let p = CoulombParams::dirac(a, ell, m).map_err(e2s)?;
        let b = coulomb_dirac_basis(&p, &e, 0.8).map_err(e2s)?;
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((b.u0[i][j] - free.u0[i][j]).norm() / free.u0[i][j].norm());
            }
        }
        d_basis.push(d);
        let s = coulomb_dirac_regular(&p, &e, &PotentialSpec::zero(), &[0.8]).map_err(e2s)?;
        d_reg.push(
            (0..2)
                .map(|i| (s.components[i][0] - fr[i]).norm() / fr[i].norm())
                .fold(0.0, f64::max),
        );
    }
    monotone("dirac basis", &d_basis)?;
    monotone("dirac regular", &d_reg)?;

    // tail defect against the free-Dirac estimator
    let bump = PotentialSpec::analytic(PotentialTag::Bump {
        center: 1.0,
        width: 0.4,
        amp: 2.5,
    });
    let zs = [10.0, 50.0, 250.0];
    let free_q = DiracParams::new(1, 1.0, bump.clone()).map_err(e2s)?;
    let free_tail = estimate_tail_defect(&free_q, 0.3, &zs).map_err(e2s)?.value;
    let d_tail: Vec<f64> = strengths
        .iter()
        .map(|&a| {
            let p = CoulombParams::dirac(a, 1, 1.0)?;
            coulomb_dirac_defect(&p, &bump, 0.3, &zs).map(|d| (d.value - free_tail).abs())
        })
        .collect::<Result<_, _>>()
        .map_err(e2s)?;
    monotone("tail defect", &d_tail)?;

    // origin exponent ω
    let p = CoulombParams::dirac(0.7, 1, 1.0).map_err(e2s)?;
    let w = p.omega.ok_or("no ω")?;
    let e = BranchedEnergy::dirac(2.5, 1.0).map_err(e2s)?;
    let rs = [1e-5, 1e-3];
    let s = coulomb_dirac_regular(&p, &e, &PotentialSpec::zero(), &rs).map_err(e2s)?;
    let n = |k: usize| s.components[0][k].norm().hypot(s.components[1][k].norm());
    let slope = (n(1) / n(0)).ln() / (rs[1] / rs[0]).ln();
    ensure((slope - w).abs() < 1e-3, || {
        format!("origin exponent {slope} vs ω = {w}")
    })?;

    // tail phase against ∫_r^∞ q = 1 for the bump, r = 0.3
    let exact = bump.integral(0.3, 2.0);
    let p = CoulombParams::dirac(0.4, 1, 1.0).map_err(e2s)?;
    let d = coulomb_dirac_defect(&p, &bump, 0.3, &zs).map_err(e2s)?;
    let rel = (d.value - exact).abs() / exact;
    ensure(rel < 0.03, || format!("tail defect {} vs {exact}", d.value))?;
    Ok(format!(
        "monotone a → 0 deviations (pair {:.1e}, decaying {:.1e}, basis {:.1e}, regular {:.1e}, tail {:.1e} at a = 1e−3); exponent off {:.1e}; tail defect off {:.2}%",
        d_pair[2],
        d_dec[2],
        d_basis[2],
        d_reg[2],
        d_tail[2],
        (slope - w).abs(),
        100.0 * rel
    ))
}

fn determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_sliding");
    let dir = std::env::temp_dir().join(format!("sliding-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(e2s)?;
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        "[invert]\na_grid = \"1:2:0.1\"\nn = 30\nq = \"sin\"\n",
    )
    .map_err(e2s)?;
    let cfg = cfg.to_string_lossy().to_string();
    let runs: [&[&str]; 5] = [
        &[
            "eigen",
            "--l",
            "0",
            "--a",
            "3.14159265",
            "--q",
            "zero",
            "--n",
            "20",
        ],
        &[
            "statsum",
            "--law",
            "dirichlet",
            "--k",
            "2",
            "--shift",
            "0.3",
        ],
        &["dirac", "--q", "gauss:1,0.3,1", "--n-range", "-3:10"],
        &[
            "coulomb",
            "--a-coul",
            "0.5",
            "--mode",
            "tail",
            "--q",
            "bump:1,0.4,2.5",
            "--r-grid",
            "0.3:0.9:0.3",
        ],
        &["--config", &cfg, "invert"],
    ];
    for args in runs {
        let once = || -> Result<Vec<u8>, String> {
            let out = Command::new(bin)
                .args(args)
                .env("SLIDING_SPECTRAL_THREADS", "4")
                .output()
                .map_err(e2s)?;
            ensure(out.status.success(), || {
                format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr))
            })?;
            Ok(out.stdout)
        };
        let (a, b) = (once()?, once()?);
        ensure(!a.is_empty() && a == b, || {
            format!("{args:?}: outputs differ")
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} commands byte-identical across two runs",
        runs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("free-spectrum exactness", free_spectrum),
        ("theta identity", theta_identity),
        ("Schrödinger defect law", schrodinger_defect),
        ("Wronskian identity", wronskian),
        ("Dirac boundary asymptotics", dirac_asymptotics),
        ("anharmonic levels", anharmonic),
        ("statistical-sum asymptotes", statsum),
        ("inverse round trip", inverse),
        ("Coulomb limits", coulomb),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
