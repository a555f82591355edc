//! Structure checks (steerability, subgroup invariance), localization
//! functionals (centre of mass, spatial and momentum variance, uncertainty
//! product, decay audits) and autocorrelation on `SO(d-1)`.

use crate::constructions::zeta;
use crate::error::{Error, Result};
use crate::frames::{FrameSpec, Signal};
use crate::harmonics::{CoeffTable, Expansion, Rotation, Workspace};
use crate::quadrature::{sphere_rule, SphereRule};
use crate::specfun::q_coupling;
use num_complex::Complex64;
use rayon::prelude::*;

fn supported(table: &CoeffTable) -> impl Iterator<Item = (u32, &crate::harmonics::MultiIndex, Complex64)> + '_ {
    table.iter().filter(|(_, _, c)| c.norm_sqr() > 0.0)
}

/// Largest `|k_1|` over all nonzero coefficients: the smallest `K` for which the
/// spec is `K`-steerable.
pub fn steerable_order(spec: &FrameSpec) -> u32 {
    spec.scales()
        .iter()
        .flat_map(|s| supported(&s.coeffs).map(|(_, k, _)| k.first().unsigned_abs()))
        .max()
        .unwrap_or(0)
}

/// Largest `m ∈ {2, …, d-1}` with `k_{d-m} = 0` on the whole support, i.e. the
/// largest `SO(m)` (acting on the first `m` coordinates) leaving every scale
/// invariant.
pub fn invariance_order(spec: &FrameSpec) -> Option<usize> {
    let d = spec.dim();
    (2..d).rev().find(|&m| {
        spec.scales()
            .iter()
            .all(|s| supported(&s.coeffs).all(|(_, k, _)| k.as_slice()[d - m - 1] == 0))
    })
}

/// `ξ_0^d ‖f‖²` and `ξ_0^d` from adjacent-degree couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Xi0d {
    pub times_norm_sq: f64,
    pub value: f64,
}

/// The `d`-th component of the centre of mass, computed from the coefficients
/// alone.
pub fn xi0_d_spectral(f: &Signal) -> Result<Xi0d> {
    let d = f.dim();
    let norm_sq = f.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Degenerate("zero signal has no centre of mass".into()));
    }
    let t = f.coeffs();
    let mut acc = 0.0;
    for (n, k, c) in t.iter() {
        let k1 = k.first() as i64;
        let up = t.get(n as i64 + 1, k);
        if up.norm_sqr() > 0.0 {
            acc += (c * up.conj()).re * q_coupling(d, k1, n)?;
        }
        if n > 0 {
            let down = t.get(n as i64 - 1, k);
            if down.norm_sqr() > 0.0 {
                acc += (c * down.conj()).re * q_coupling(d, k1, n - 1)?;
            }
        }
    }
    Ok(Xi0d {
        times_norm_sq: acc,
        value: acc / norm_sq,
    })
}

/// `ξ_0(f) = ∫ x |f(x)|² dω / ‖f‖²` by quadrature with a rule exact on
/// `Π_{2N_f+1}`.
pub fn xi0_numeric(f: &Signal, rule: &SphereRule) -> Result<Vec<f64>> {
    let need = 2 * f.degree() + 1;
    if rule.exact_degree() < need {
        return Err(Error::Exactness {
            have: rule.exact_degree(),
            need,
        });
    }
    xi0_with_rule(f, rule)
}

fn xi0_with_rule(f: &Signal, rule: &SphereRule) -> Result<Vec<f64>> {
    let d = f.dim();
    if rule.dim() != d {
        return Err(Error::Parameter("rule and signal dimensions differ".into()));
    }
    let norm_sq = f.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Degenerate("zero signal has no centre of mass".into()));
    }
    let e = Expansion::new(f.coeffs());
    let sum = rule
        .nodes_flat()
        .par_chunks(d)
        .zip(rule.weights().par_iter())
        .fold(
            || (Workspace::default(), vec![0.0; d]),
            |(mut ws, mut acc), (x, w)| {
                let v = w * e.eval_with(x, &mut ws).norm_sqr();
                for (a, xi) in acc.iter_mut().zip(x) {
                    *a += v * xi;
                }
                (ws, acc)
            },
        )
        .map(|(_, acc)| acc)
        .reduce(
            || vec![0.0; d],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(sum.into_iter().map(|v| v / norm_sq).collect())
}

/// `ξ_0(f)` with an automatically chosen exact rule. When no coefficient
/// carries an azimuthal index, `|f|²` does not depend on `θ_1` and the
/// azimuthal factor of the rule shrinks to three points.
pub fn xi0_vector(f: &Signal) -> Result<Vec<f64>> {
    let d = f.dim();
    let n = f.degree() + 1;
    let axial = f.coeffs().iter().all(|(_, k, _)| k.last() == 0);
    let rule = if axial {
        crate::quadrature::axial_sphere_rule(d, n)?
    } else {
        sphere_rule(d, n)?
    };
    xi0_with_rule(f, &rule)
}

/// Spatial variance from the full centre of mass and its upper bound from the
/// `d`-th component only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarSpace {
    pub exact: f64,
    pub upper: f64,
}

fn variance_from(s: f64) -> Result<f64> {
    if s == 0.0 {
        return Err(Error::Degenerate("centre of mass vanishes; variance undefined".into()));
    }
    Ok((1.0 - s) / s)
}

pub fn var_space(f: &Signal) -> Result<VarSpace> {
    let xi = xi0_vector(f)?;
    let norm_sq: f64 = xi.iter().map(|v| v * v).sum();
    let xd = xi0_d_spectral(f)?.value;
    Ok(VarSpace {
        exact: variance_from(norm_sq)?,
        upper: variance_from(xd * xd)?,
    })
}

/// `Σ n(n+d-2) |f(n,k)|² / ‖f‖²`
pub fn var_momentum(f: &Signal) -> Result<f64> {
    let norm_sq = f.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Degenerate("zero signal has no momentum variance".into()));
    }
    let d = f.dim() as f64;
    let acc: f64 = f
        .coeffs()
        .iter()
        .map(|(n, _, c)| {
            let n = n as f64;
            n * (n + d - 2.0) * c.norm_sqr()
        })
        .sum();
    Ok(acc / norm_sq)
}

/// `Var_S · Var_M`, bounded below by `(d-1)²/4`.
pub fn uncertainty_product(f: &Signal) -> Result<f64> {
    Ok(var_space(f)?.exact * var_momentum(f)?)
}

/// Lower bound `(d-1)²/4` of the uncertainty product.
pub fn uncertainty_bound(d: usize) -> f64 {
    let m = d as f64 - 1.0;
    m * m / 4.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleLocalization {
    pub j: usize,
    pub bandwidth: u32,
    pub norm_sq: f64,
    pub xi0_d: f64,
    pub xi0_vec: Vec<f64>,
    pub var_space: f64,
    pub var_space_upper: f64,
    pub var_momentum: f64,
    pub uncertainty_product: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationReport {
    pub d: usize,
    pub scales: Vec<ScaleLocalization>,
}

/// Scale `j` of a spec as a signal of degree `N_j`.
pub fn scale_signal(spec: &FrameSpec, j: usize) -> Result<Signal> {
    let s = spec
        .scales()
        .get(j)
        .ok_or_else(|| Error::Parameter(format!("scale {j} out of range")))?;
    Signal::new(s.coeffs.clone(), s.bandwidth)
}

/// Localization functionals of the stored (unrotated) tables. All quantities
/// except the components of `ξ_0` are rotation invariant.
pub fn localization_report(spec: &FrameSpec, scales: &[usize]) -> Result<LocalizationReport> {
    let rows = scales
        .iter()
        .map(|&j| {
            let f = scale_signal(spec, j)?;
            let xi = xi0_vector(&f)?;
            let xd = xi0_d_spectral(&f)?.value;
            let s: f64 = xi.iter().map(|v| v * v).sum();
            let vs = variance_from(s)?;
            let vm = var_momentum(&f)?;
            Ok(ScaleLocalization {
                j,
                bandwidth: f.degree(),
                norm_sq: f.norm_sq(),
                xi0_d: xd,
                xi0_vec: xi,
                var_space: vs,
                var_space_upper: variance_from(xd * xd)?,
                var_momentum: vm,
                uncertainty_product: vs * vm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalizationReport {
        d: spec.dim(),
        scales: rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleAudit {
    pub j: usize,
    pub bandwidth: u32,
    pub norm_sq: f64,
    /// `‖Ψ^j‖² / N_j^{d-1}`
    pub c1_ratio: f64,
    /// Smallest and largest degree carrying a nonzero coefficient.
    pub support: Option<(u32, u32)>,
    /// `M_j / N_j` with `M_j` the lower end of the support.
    pub c2_ratio: Option<f64>,
    /// `max |½(Ψ(n+1,k) + Ψ(n-1,k)) − Ψ(n,k)| · N_j^{-(d-6)/2}`
    pub c3_constant: f64,
    /// `max |½(Ψ(n+1,k) + Ψ(n-1,k)) − Ψ(n,k)| / (N_j^{-2} |Ψ(n,k)|)` over nonzero `Ψ(n,k)`
    pub c4_constant: f64,
    /// `max |Ψ(n,k)| / N_j^{(d-2)/2}`
    pub amplitude_constant: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub d: usize,
    pub scales: Vec<ScaleAudit>,
}

/// Reports the implied constants of the decay and smoothness conditions used
/// for optimal localization. No pass/fail verdict: the constants are unspecified.
pub fn audit_conditions(spec: &FrameSpec) -> AuditReport {
    let d = spec.dim();
    let df = d as f64;
    let scales = spec
        .scales()
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let t = &s.coeffs;
            let nj = s.bandwidth.max(1) as f64;
            let degrees = t.support_degrees();
            let support = degrees.first().map(|lo| (*lo, *degrees.last().unwrap()));
            let mut candidates = std::collections::BTreeSet::new();
            for (n, k, _) in supported(t) {
                for m in [n as i64 - 1, n as i64, n as i64 + 1] {
                    if m >= 0 && k.is_valid(d, m as u32) {
                        candidates.insert((m as u32, k.clone()));
                    }
                }
            }
            let mut c3: f64 = 0.0;
            let mut c4: f64 = 0.0;
            for (n, k) in &candidates {
                let n = *n as i64;
                let mid = t.get(n, k);
                let second = 0.5 * (t.get(n + 1, k) + t.get(n - 1, k)) - mid;
                c3 = c3.max(second.norm());
                if mid.norm() > 0.0 {
                    c4 = c4.max(second.norm() * nj * nj / mid.norm());
                }
            }
            let amp = supported(t).map(|(_, _, c)| c.norm()).fold(0.0, f64::max);
            let norm_sq = t.norm_sq();
            ScaleAudit {
                j,
                bandwidth: s.bandwidth,
                norm_sq,
                c1_ratio: norm_sq / nj.powf(df - 1.0),
                support,
                c2_ratio: support.map(|(lo, _)| lo as f64 / nj),
                c3_constant: c3 * nj.powf(-(df - 6.0) / 2.0),
                c4_constant: c4,
                amplitude_constant: amp / nj.powf((df - 2.0) / 2.0),
            }
        })
        .collect();
    AuditReport { d, scales }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub steerable_k: u32,
    pub invariant_m: Option<usize>,
    pub support: Vec<Option<(u32, u32)>>,
}

pub fn structure_report(spec: &FrameSpec) -> StructureReport {
    StructureReport {
        steerable_k: steerable_order(spec),
        invariant_m: invariance_order(spec),
        support: spec
            .scales()
            .iter()
            .map(|s| {
                let degrees = s.coeffs.support_degrees();
                degrees.first().map(|lo| (*lo, *degrees.last().unwrap()))
            })
            .collect(),
    }
}

/// `⟨T(h)Ψ^j, Ψ^j⟩ = ∫ Ψ^j(h^{-1}η) conj(Ψ^j(η)) dω(η)` by quadrature.
pub fn autocorrelation(spec: &FrameSpec, j: usize, h: &Rotation, rule: &SphereRule) -> Result<Complex64> {
    let f = scale_signal(spec, j)?;
    let d = spec.dim();
    if h.dim() != d || rule.dim() != d {
        return Err(Error::Parameter("dimension mismatch".into()));
    }
    let need = 2 * f.degree();
    if rule.exact_degree() < need {
        return Err(Error::Exactness {
            have: rule.exact_degree(),
            need,
        });
    }
    let e = Expansion::new(f.coeffs());
    Ok(rule
        .nodes_flat()
        .par_chunks(d)
        .zip(rule.weights().par_iter())
        .map_init(
            || (Workspace::default(), vec![0.0; d]),
            |(ws, y), (x, w)| {
                h.apply_inverse(x, y);
                w * e.eval_with(y, ws) * e.eval_with(x, ws).conj()
            },
        )
        .sum())
}

/// Checks that scale `j` factors as `κ(n) ζ_k^{d,n}` with cutoff `K`, and
/// returns `κ(n)²` per degree.
fn factorized_window(spec: &FrameSpec, j: usize, k_cut: u32) -> Result<Vec<(u32, f64)>> {
    let d = spec.dim();
    let s = spec
        .scales()
        .get(j)
        .ok_or_else(|| Error::Parameter(format!("scale {j} out of range")))?;
    let mut out = Vec::new();
    for n in s.coeffs.support_degrees() {
        let energy = s.coeffs.degree_energy(n);
        let kappa = energy.sqrt();
        for (k, c) in s.coeffs.degree(n) {
            let want = kappa * zeta(d, n, k, k_cut)?;
            let got = if kappa > 0.0 { c } else { Complex64::new(0.0, 0.0) };
            // the window may carry either sign; compare against both
            let err = (got - want).norm().min((got + want).norm());
            if err > 1e-10 * kappa.max(1.0) {
                return Err(Error::Shape(format!(
                    "scale {j} is not of the form κ(n)ζ_k at degree {n}"
                )));
            }
        }
        out.push((n, energy));
    }
    Ok(out)
}

/// Closed form `Σ_n |κ(n)|² s^{min(K,n)}` of the autocorrelation of a
/// `κ ζ`-shaped wavelet, where `s = ⟨e^{d-1}, h e^{d-1}⟩`.
pub fn autocorrelation_closed(spec: &FrameSpec, j: usize, s: f64) -> Result<f64> {
    let k_cut = spec
        .metadata()
        .steerable_k
        .unwrap_or_else(|| steerable_order(spec));
    let window = factorized_window(spec, j, k_cut)?;
    Ok(window
        .into_iter()
        .map(|(n, e)| e * s.powi(n.min(k_cut) as i32))
        .sum())
}
