//! Acceptance suite. One line per criterion; exits nonzero if any fails.
//!
//! Run with `cargo test -p sphereframe --test acceptance`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sphereframe::constructions::{
    curvelet_eval_closed, curvelet_spec, kappa1, phi, polar_sample, wavelet_spec, zonal_spec, Window,
};
use sphereframe::diagnostics::{
    autocorrelation, autocorrelation_closed, localization_report, scale_signal, uncertainty_bound,
    var_space, xi0_d_spectral, xi0_numeric,
};
use sphereframe::frames::{
    analysis_all, canonical_dual, dual_residuals, parseval_check, sigma_j, sigma_profile, synthesis,
    FrameSpec, FrameSystem, Metadata, Signal,
};
use sphereframe::harmonics::{
    dim_harmonic, eval_harmonic, index_set, matrix_function_numeric, to_spherical, CoeffTable, Expansion,
    Rotation, Workspace,
};
use sphereframe::quadrature::{
    embed_subsphere_rotation, rotation_rule, sphere_rule, Variant, DEFAULT_MAX_NODES,
};
use sphereframe::specfun::{gegenbauer, q_coupling};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn random_unit(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Complex Gaussian coefficients on every (n, k) with n ≤ degree, unit energy.
fn random_signal(d: usize, degree: u32, rng: &mut impl Rng) -> Signal {
    let mut t = CoeffTable::new(d);
    for n in 0..=degree {
        for k in index_set(d, n) {
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            t.insert(n, k, c).unwrap();
        }
    }
    let norm = t.norm_sq().sqrt();
    Signal::new(t.map_by_degree(|_, c| c / norm), degree).unwrap()
}

fn basis_table(d: usize, n_max: u32) -> CoeffTable {
    let mut t = CoeffTable::new(d);
    for n in 0..=n_max {
        for k in index_set(d, n) {
            t.insert(n, k, Complex64::new(1.0, 0.0)).unwrap();
        }
    }
    t
}

/// Random rotation: product of random planar rotations in every coordinate plane.
fn random_rotation(d: usize, rng: &mut impl Rng) -> Rotation {
    let mut g = Rotation::identity(d);
    for _ in 0..3 {
        for i in 0..d - 1 {
            g = g.compose(&Rotation::givens(d, i, rng.gen_range(0.0..std::f64::consts::TAU)));
        }
    }
    g
}

fn binomial(top: f64, k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (top - k as f64 + i as f64) / i as f64)
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for &lam in &[0.5, 1.0, 1.5, 3.0] {
        for n in 0..=64u32 {
            let want = binomial(n as f64 + 2.0 * lam - 1.0, n);
            let got = gegenbauer(lam, n, 1.0).unwrap();
            worst = worst.max(((got - want) / want).abs());
        }
    }
    ensure(worst < 1e-12, format!("Gegenbauer at 1: rel err {worst:e}"))?;
    let mut tail: f64 = 0.0;
    for d in 3..=6usize {
        for k1 in 0..=10i64 {
            for n in 11..=10_000u32 {
                let dq = q_coupling(d, k1, n - 1).unwrap() - q_coupling(d, k1, n).unwrap();
                tail = tail.max(dq.abs() * (n as f64).powi(3));
            }
        }
    }
    ensure(tail < 1e3, format!("|ΔQ|·n³ reached {tail}"))?;
    Ok(format!("C_n(1) rel err {worst:.1e}; max |ΔQ|·n³ = {tail:.2}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for d in 3..=5usize {
        for _ in 0..50 {
            let p = to_spherical(&random_unit(d, &mut rng)).unwrap();
            for n in 0..=20u32 {
                let sum: f64 = index_set(d, n)
                    .iter()
                    .map(|k| eval_harmonic(d, n, k, &p).unwrap().norm_sqr())
                    .sum();
                let dim = dim_harmonic(d, n).unwrap() as f64;
                worst = worst.max((sum - dim).abs() / dim);
            }
        }
    }
    ensure(worst < 1e-10, format!("rel err {worst:e}"))?;
    Ok(format!("max rel err {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    // orthonormality under sphere_rule(d, 8)
    let mut worst_sphere: f64 = 0.0;
    for d in [3usize, 4] {
        let rule = sphere_rule(d, 8).unwrap();
        let e = Expansion::new(&basis_table(d, 8));
        let m = e.num_terms();
        let mut ws = Workspace::default();
        let mut vals = vec![Complex64::new(0.0, 0.0); m];
        let mut gram = vec![Complex64::new(0.0, 0.0); m * m];
        for (x, w) in rule.iter() {
            e.eval_terms(x, &mut ws, &mut vals);
            for a in 0..m {
                let wa = w * vals[a];
                for b in 0..m {
                    gram[a * m + b] += wa * vals[b].conj();
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                let want = if a == b { 1.0 } else { 0.0 };
                worst_sphere = worst_sphere.max((gram[a * m + b] - want).norm());
            }
        }
    }
    ensure(worst_sphere < 1e-12, format!("sphere Gram defect {worst_sphere:e}"))?;

    // Schur orthogonality of matrix functions over the class-3 SO(4) grid
    let d = 4;
    let n_max = 3u32;
    let grid = rotation_rule(d, n_max, Variant::General, DEFAULT_MAX_NODES).unwrap();
    let rule = sphere_rule(d, n_max).unwrap();
    let basis = Expansion::new(&basis_table(d, n_max));
    let labels: Vec<(u32, usize)> = (0..=n_max)
        .flat_map(|n| (0..dim_harmonic(d, n).unwrap() as usize).map(move |i| (n, i)))
        .collect();
    let offsets: Vec<usize> = (0..=n_max)
        .scan(0usize, |acc, n| {
            let o = *acc;
            *acc += dim_harmonic(d, n).unwrap() as usize;
            Some(o)
        })
        .collect();
    let nb = labels.len();
    let mut ws = Workspace::default();
    let mut conj_y = vec![Complex64::new(0.0, 0.0); rule.len() * nb];
    for (i, (x, w)) in rule.iter().enumerate() {
        basis.eval_terms(x, &mut ws, &mut conj_y[i * nb..(i + 1) * nb]);
        conj_y[i * nb..(i + 1) * nb].iter_mut().for_each(|v| *v = w * v.conj());
    }
    // functions indexed by (n, k, m) flattened per degree block
    let nfun: usize = (0..=n_max).map(|n| (dim_harmonic(d, n).unwrap() as usize).pow(2)).sum();
    let mut gram = vec![Complex64::new(0.0, 0.0); nfun * nfun];
    let mut row = vec![Complex64::new(0.0, 0.0); nfun];
    let mut rotated = vec![Complex64::new(0.0, 0.0); rule.len() * nb];
    let mut y = vec![0.0; d];
    for (g, mu) in grid.rotations.iter().zip(&grid.weights) {
        for (i, (x, _)) in rule.iter().enumerate() {
            g.apply_inverse(x, &mut y);
            basis.eval_terms(&y, &mut ws, &mut rotated[i * nb..(i + 1) * nb]);
        }
        let mut f = 0;
        for n in 0..=n_max {
            let dn = dim_harmonic(d, n).unwrap() as usize;
            let o = offsets[n as usize];
            for k in 0..dn {
                for m in 0..dn {
                    let mut t = Complex64::new(0.0, 0.0);
                    for i in 0..rule.len() {
                        t += rotated[i * nb + o + m] * conj_y[i * nb + o + k];
                    }
                    row[f] = t;
                    f += 1;
                }
            }
        }
        for a in 0..nfun {
            let ra = mu * row[a];
            let line = &mut gram[a * nfun..(a + 1) * nfun];
            for (gb, rb) in line.iter_mut().zip(&row) {
                *gb += ra * rb.conj();
            }
        }
    }
    let mut worst_grid: f64 = 0.0;
    let mut f = 0;
    let mut dims = Vec::with_capacity(nfun);
    for n in 0..=n_max {
        let dn = dim_harmonic(d, n).unwrap() as usize;
        for _ in 0..dn * dn {
            dims.push(dn as f64);
            f += 1;
        }
    }
    assert_eq!(f, nfun);
    for a in 0..nfun {
        for b in 0..nfun {
            let want = if a == b { 1.0 / dims[a] } else { 0.0 };
            worst_grid = worst_grid.max((gram[a * nfun + b] - want).norm());
        }
    }
    // spot-check the batched matrix functions against the single-entry oracle
    let g = &grid.rotations[grid.len() / 3];
    let set = index_set(d, 2);
    let t = matrix_function_numeric(d, 2, &set[3], &set[5], g, &rule).unwrap();
    let mut direct = Complex64::new(0.0, 0.0);
    for (i, (x, _)) in rule.iter().enumerate() {
        g.apply_inverse(x, &mut y);
        basis.eval_terms(&y, &mut ws, &mut rotated[i * nb..(i + 1) * nb]);
        direct += rotated[i * nb + offsets[2] + 5] * conj_y[i * nb + offsets[2] + 3];
    }
    ensure((t - direct).norm() < 1e-12, "batched matrix function disagrees with oracle".into())?;
    ensure(worst_grid < 1e-10, format!("SO(4) Schur defect {worst_grid:e}"))?;
    Ok(format!(
        "sphere Gram defect {worst_sphere:.1e}; SO(4) grid ({} rotations) Schur defect {worst_grid:.1e} over {nfun} matrix functions",
        grid.len()
    ))
}

fn criterion_4() -> Outcome {
    let n_max = 256;
    let spec = wavelet_spec(4, 4, 8, Window::Kappa2).unwrap();
    let p = sigma_profile(&spec, n_max);
    let min = p.sigma.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(min > 0.0, format!("σ vanishes at {:?}", p.zeros()))?;
    let dual = canonical_dual(&spec).unwrap();
    let res = dual_residuals(&spec, &dual, n_max).unwrap();
    let worst = res.iter().copied().fold(0.0, f64::max);
    ensure(worst < 1e-12, format!("dual residual {worst:e}"))?;

    // smooth window: the top degree 2^J is not covered without a scale J+1
    let smooth = wavelet_spec(4, 4, 8, Window::Kappa1).unwrap();
    let ps = sigma_profile(&smooth, n_max);
    let smooth_min = ps.sigma[..256].iter().copied().fold(f64::INFINITY, f64::min);
    ensure(smooth_min > 0.0, "smooth-window σ vanishes below 256".into())?;
    let sdual = canonical_dual(&smooth).unwrap();
    let sres = dual_residuals(&smooth, &sdual, 255).unwrap();
    let sworst = sres.iter().copied().fold(0.0, f64::max);
    ensure(sworst < 1e-12, format!("smooth-window dual residual {sworst:e}"))?;
    let ratio = p.sigma.iter().copied().fold(0.0, f64::max) / min;
    Ok(format!(
        "sine window: min σ {min:.3e}, C2/C1 {ratio:.3e}, dual residual {worst:.1e} (n ≤ 256); \
         smooth window: σ > 0 and residual {sworst:.1e} for n ≤ 255, σ_256 = {:.1e}",
        ps.sigma[256]
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for window in [Window::Kappa1, Window::Kappa2] {
        let spec = wavelet_spec(4, 4, 3, window).unwrap();
        let system = FrameSystem::new(spec, DEFAULT_MAX_NODES).unwrap();
        ensure(
            matches!(system.grids[3].variant, Variant::SteerableSoD2(4)),
            "wavelet grid is not the steerable one".into(),
        )?;
        {
            let f = random_signal(4, 8, &mut rng);
            let r = parseval_check(&system, &f).unwrap();
            worst = worst.max(r.rel_gap);
            rows.push(r.rel_gap);
        }
    }
    ensure(worst < 1e-10, format!("rel gap {worst:e}"))?;
    Ok(format!("max rel gap {worst:.1e} over {} signals", rows.len()))
}

fn reconstruct(spec: FrameSpec, degree: u32, seed: u64) -> f64 {
    let d = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_signal(d, degree, &mut rng);
    let dual = canonical_dual(&spec).unwrap();
    let system = FrameSystem::new(spec, DEFAULT_MAX_NODES).unwrap();
    let coeffs = analysis_all(&system, &f).unwrap();
    let back = synthesis(&system, &dual, &coeffs, degree).unwrap();
    back.relative_error(&f)
}

fn criterion_6() -> Outcome {
    let e3 = reconstruct(zonal_spec(3, 4, Window::Kappa2).unwrap(), 16, 61);
    ensure(e3 < 1e-9, format!("d=3 rel error {e3:e}"))?;
    let e4 = reconstruct(wavelet_spec(4, 4, 3, Window::Kappa2).unwrap(), 8, 62);
    ensure(e4 < 1e-9, format!("d=4 rel error {e4:e}"))?;
    Ok(format!("d=3 J=4 N_f=16: {e3:.1e}; d=4 J=3 N_f=8: {e4:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_shape: f64 = 0.0;
    for d in 3..=5usize {
        for levels in 1..=8u32 {
            let spec = zonal_spec(d, levels, Window::Kappa1).unwrap();
            let top = 1u32 << levels;
            for n in 0..=top {
                let s = sigma_j(&spec, &spec, levels as usize, n).unwrap();
                let shape = phi(n as f64 / top as f64).powi(2);
                worst_shape = worst_shape.max((s - shape).norm());
                if n <= top / 2 {
                    worst = worst.max((s - 1.0).norm());
                }
            }
        }
    }
    ensure(worst < 1e-12, format!("|σ_J − 1| = {worst:e}"))?;
    ensure(worst_shape < 1e-12, format!("|σ_J − φ²| = {worst_shape:e}"))?;
    Ok(format!("max |σ_J(n) − 1| {worst:.1e} (n ≤ 2^(J−1)); max |σ_J − φ²(n/2^J)| {worst_shape:.1e}"))
}

fn criterion_8() -> Outcome {
    let spec = wavelet_spec(4, 4, 4, Window::Kappa1).unwrap();
    let f = scale_signal(&spec, 4).unwrap();
    let rule = sphere_rule(4, f.degree() + 1).unwrap();
    let num = xi0_numeric(&f, &rule).unwrap();
    let spectral = xi0_d_spectral(&f).unwrap().value;
    let wavelet_gap = (num[3] - spectral).abs();
    ensure(wavelet_gap < 1e-8, format!("wavelet gap {wavelet_gap:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for d in 3..=5usize {
        for degree in [1u32, 4, 8, 12] {
            let f = random_signal(d, degree, &mut rng);
            let rule = sphere_rule(d, degree + 1).unwrap();
            let num = xi0_numeric(&f, &rule).unwrap();
            let spectral = xi0_d_spectral(&f).unwrap().value;
            worst = worst.max((num[d - 1] - spectral).abs());
        }
    }
    ensure(worst < 1e-10, format!("random-signal gap {worst:e}"))?;
    Ok(format!("wavelet gap {wavelet_gap:.1e} (ξ_0^d = {spectral:.6}); random-signal gap {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let bound = uncertainty_bound(4);
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let mut min_product = f64::INFINITY;
    for window in [Window::Kappa1, Window::Kappa2] {
        for cutoff in [4u32, 9] {
            let spec = wavelet_spec(4, cutoff, 7, window).unwrap();
            let report = localization_report(&spec, &[4, 5, 6, 7]).unwrap();
            let scaled: Vec<f64> = report
                .scales
                .iter()
                .map(|s| s.var_space * 4f64.powi(s.j as i32))
                .collect();
            let hi = scaled.iter().copied().fold(0.0, f64::max);
            let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
            for s in &report.scales {
                min_product = min_product.min(s.uncertainty_product);
                if s.uncertainty_product < bound * (1.0 - 1e-10) {
                    failures.push(format!("{} K={cutoff} j={}: product {}", window.name(), s.j, s.uncertainty_product));
                }
                if s.var_space_upper < s.var_space * (1.0 - 1e-10) {
                    failures.push(format!("{} K={cutoff} j={}: upper bound below exact", window.name(), s.j));
                }
            }
            if hi / lo > 3.0 {
                failures.push(format!("{} K={cutoff}: Var_S·4^j ratio {:.3}", window.name(), hi / lo));
            }
            lines.push(format!(
                "{} K={cutoff}: Var_S·4^j ∈ [{lo:.3}, {hi:.3}] ratio {:.3}",
                window.name(),
                hi / lo
            ));
        }
    }
    // random polynomials as well
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in 3..=5usize {
        for degree in [2u32, 6, 10] {
            let f = random_signal(d, degree, &mut rng);
            let v = var_space(&f).unwrap().exact;
            let m = sphereframe::diagnostics::var_momentum(&f).unwrap();
            if v * m < uncertainty_bound(d) * (1.0 - 1e-10) {
                failures.push(format!("random d={d} N={degree}: product {}", v * m));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{}; min product {min_product:.4} ≥ {bound}", lines.join("; ")))
    } else {
        Err(format!("{} | {}", failures.join("; "), lines.join("; ")))
    }
}

fn criterion_10() -> Outcome {
    let d = 4;
    let spec = wavelet_spec(d, 4, 4, Window::Kappa1).unwrap();
    let j = 4;
    let rule = sphere_rule(d, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let h = embed_subsphere_rotation(&random_unit(d - 1, &mut rng)).unwrap()
            .compose(&Rotation::givens(d, 0, rng.gen_range(0.0..std::f64::consts::TAU)));
        let numeric = autocorrelation(&spec, j, &h, &rule).unwrap();
        let s = h.get(d - 2, d - 2);
        let closed = autocorrelation_closed(&spec, j, s).unwrap();
        worst = worst.max((numeric - closed).norm());
    }
    ensure(worst < 1e-8, format!("closed vs numeric {worst:e}"))?;
    let zonal = zonal_spec(d, 4, Window::Kappa1).unwrap();
    let energy = zonal.scales()[4].coeffs.norm_sq();
    let mut spread: f64 = 0.0;
    for _ in 0..10 {
        let h = random_rotation(d - 1, &mut rng).embed();
        let v = autocorrelation(&zonal, 4, &h, &rule).unwrap();
        // normalized by ‖Ψ‖²: the raw value is O(10³) and carries rounding at that scale
        spread = spread.max((v - energy).norm() / energy);
    }
    ensure(spread < 1e-12, format!("zonal autocorrelation varies by {spread:e} (relative)"))?;
    Ok(format!("wavelet closed vs numeric {worst:.1e}; zonal variation {spread:.1e}"))
}

fn criterion_11() -> Outcome {
    let d = 4;
    let spec = curvelet_spec(d, 5).unwrap();
    let g0 = spec.metadata().base_rotation.clone().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    let mut y = vec![0.0; d];
    for j in 1..=5u32 {
        let e = Expansion::new(&spec.scales()[j as usize].coeffs);
        for _ in 0..20 {
            let x = random_unit(d, &mut rng);
            g0.apply_inverse(&x, &mut y);
            let via_table = e.eval(&y);
            let closed = curvelet_eval_closed(d, j, &x).unwrap();
            worst = worst.max((via_table - closed).norm() / closed.abs().max(1.0));
        }
    }
    ensure(worst < 1e-10, format!("closed vs expansion {worst:e}"))?;
    let mut sigma_worst: f64 = 0.0;
    for j in 1..=5u32 {
        let one = FrameSpec::new(d, vec![spec.scales()[j as usize].clone()], Metadata::default()).unwrap();
        let p = sigma_profile(&one, 1 << j);
        for n in 0..=(1u32 << j) {
            let dim = dim_harmonic(d, n).unwrap() as f64;
            let want = kappa1(d, j, n).powi(2);
            sigma_worst = sigma_worst.max((p.sigma[n as usize] * dim - want).abs() / want.max(1.0));
        }
    }
    ensure(sigma_worst < 1e-12, format!("Σ_k|Ψ|² vs κ² {sigma_worst:e}"))?;
    Ok(format!("closed vs rotated expansion {worst:.1e}; Σ_k|Ψ(n,k)|² vs κ² {sigma_worst:.1e}"))
}

fn criterion_12() -> Outcome {
    let other = [0.6f64.cos(), 0.6f64.sin()];
    let mut worst_indep: f64 = 0.0;
    let mut worst_refl: f64 = 0.0;
    let mut count = 0;
    let mut check = |spec: &FrameSpec, j: usize| -> Result<(), String> {
        let a = polar_sample(spec, j, 256, 256, 1.0, None).map_err(|e| e.to_string())?;
        let b = polar_sample(spec, j, 256, 256, 1.0, Some(&other)).map_err(|e| e.to_string())?;
        ensure((a.max_abs() - 1.0).abs() < 1e-15, format!("max {} after rescale", a.max_abs()))?;
        let indep = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        worst_indep = worst_indep.max(indep);
        worst_refl = worst_refl.max(a.reflection_defect());
        count += 1;
        Ok(())
    };
    for cutoff in [4u32, 9] {
        let spec = wavelet_spec(4, cutoff, 7, Window::Kappa1).unwrap();
        for j in 5..=7 {
            check(&spec, j)?;
        }
    }
    let curv = curvelet_spec(4, 7).unwrap();
    for j in 5..=7 {
        check(&curv, j)?;
    }
    ensure(worst_indep < 1e-10, format!("η'' dependence {worst_indep:e}"))?;
    ensure(worst_refl < 1e-10, format!("reflection defect {worst_refl:e}"))?;
    Ok(format!(
        "{count} grids 256×256: η'' dependence {worst_indep:.1e}, reflection defect {worst_refl:.1e}"
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("special functions", criterion_1),
        ("addition theorem", criterion_2),
        ("quadrature exactness", criterion_3),
        ("frame and dual", criterion_4),
        ("Parseval bridge", criterion_5),
        ("reconstruction", criterion_6),
        ("approximation flatness", criterion_7),
        ("centre of mass cross-check", criterion_8),
        ("localization scaling", criterion_9),
        ("autocorrelation", criterion_10),
        ("curvelet consistency", criterion_11),
        ("figure grids", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|a| a == &id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id:>2}] {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id:>2}] {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
