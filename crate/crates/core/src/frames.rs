//! Frame-generating sequences stored as harmonic coefficient tables, their
//! spectral profile, frame bounds and duals, and discrete analysis/synthesis
//! over rotation grids.

use crate::diagnostics::{invariance_order, steerable_order};
use crate::error::{Error, Result};
use crate::harmonics::{dim_f64, index_set, CoeffTable, Expansion, Rotation, Workspace};
use crate::quadrature::{rotation_rule, sphere_rule, RotationRule, SphereRule, Variant};
use num_complex::Complex64;
use rayon::prelude::*;

/// One scale `Ψ^j`: a bandwidth and the coefficients `Ψ^j(n, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scale {
    pub bandwidth: u32,
    pub coeffs: CoeffTable,
}

/// Optional structural tags. They describe the frame elements as used, that is
/// after `base_rotation` has been applied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata {
    pub steerable_k: Option<u32>,
    pub invariant_m: Option<usize>,
    /// Rotation `b` applied to every scale: the elements are `T(g b) Ψ^j`.
    pub base_rotation: Option<Rotation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    d: usize,
    scales: Vec<Scale>,
    metadata: Metadata,
}

impl FrameSpec {
    pub fn new(d: usize, scales: Vec<Scale>, metadata: Metadata) -> Result<Self> {
        if d < 3 {
            return Err(Error::Parameter(format!("dimension d = {d} < 3")));
        }
        let mut prev = 0;
        for (j, s) in scales.iter().enumerate() {
            if s.coeffs.dim() != d {
                return Err(Error::Parameter(format!(
                    "scale {j} has dimension {}, expected {d}",
                    s.coeffs.dim()
                )));
            }
            if let Some(top) = s.coeffs.max_degree() {
                if top > s.bandwidth {
                    return Err(Error::Parameter(format!(
                        "scale {j} has a coefficient at degree {top} above its bandwidth {}",
                        s.bandwidth
                    )));
                }
            }
            if s.bandwidth < prev {
                return Err(Error::Parameter(format!("bandwidths decrease at scale {j}")));
            }
            prev = s.bandwidth;
        }
        if let Some(b) = &metadata.base_rotation {
            if b.dim() != d {
                return Err(Error::Parameter("base rotation has the wrong dimension".into()));
            }
        }
        Ok(FrameSpec { d, scales, metadata })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn scales(&self) -> &[Scale] {
        &self.scales
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn max_bandwidth(&self) -> u32 {
        self.scales.last().map_or(0, |s| s.bandwidth)
    }

    /// Same spec with every coefficient of degree `n` passed through `f(n, c)`.
    pub fn map_coeffs(&self, mut f: impl FnMut(u32, Complex64) -> Complex64) -> FrameSpec {
        FrameSpec {
            d: self.d,
            scales: self
                .scales
                .iter()
                .map(|s| Scale {
                    bandwidth: s.bandwidth,
                    coeffs: s.coeffs.map_by_degree(&mut f),
                })
                .collect(),
            metadata: self.metadata.clone(),
        }
    }

    /// The cheapest grid variant that is exact for scale `j`, as implied by the
    /// metadata tags.
    pub fn grid_variant(&self, j: usize) -> Variant {
        let d = self.d;
        let n = self.scales[j].bandwidth;
        let m = self.metadata.invariant_m;
        match (self.metadata.steerable_k, m) {
            (_, Some(m)) if m >= d - 1 => Variant::Zonal,
            (Some(k), Some(m)) if m >= d - 2 => Variant::SteerableSoD2(k.min(n)),
            (Some(k), _) => Variant::Steerable(k.min(n)),
            (None, Some(m)) if m >= d - 2 => Variant::SoD2Invariant,
            _ => Variant::General,
        }
    }

    /// Checks the structural tags against the coefficient tables. Only
    /// possible without a base rotation, since the tags describe rotated
    /// elements.
    pub fn validate_metadata(&self) -> Result<()> {
        if self.metadata.base_rotation.is_some() {
            return Ok(());
        }
        if let Some(k) = self.metadata.steerable_k {
            let have = steerable_order(self);
            if have > k {
                return Err(Error::Parameter(format!(
                    "tagged {k}-steerable but coefficients reach |k_1| = {have}"
                )));
            }
        }
        if let Some(m) = self.metadata.invariant_m {
            match invariance_order(self) {
                Some(have) if have >= m => {}
                other => {
                    return Err(Error::Parameter(format!(
                        "tagged SO({m})-invariant but coefficients give {other:?}"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// `σ_n` for `n = 0, …, n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProfile {
    pub sigma: Vec<f64>,
}

impl SpectralProfile {
    /// Degrees where `σ_n = 0`.
    pub fn zeros(&self) -> Vec<u32> {
        self.sigma
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == 0.0)
            .map(|(n, _)| n as u32)
            .collect()
    }
}

/// A bandlimited function given by its harmonic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    degree: u32,
    coeffs: CoeffTable,
}

impl Signal {
    pub fn new(coeffs: CoeffTable, degree: u32) -> Result<Self> {
        if let Some(top) = coeffs.max_degree() {
            if top > degree {
                return Err(Error::Parameter(format!(
                    "signal has a coefficient at degree {top} above its declared degree {degree}"
                )));
            }
        }
        Ok(Signal { degree, coeffs })
    }

    pub fn zero(d: usize, degree: u32) -> Self {
        Signal {
            degree,
            coeffs: CoeffTable::new(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &CoeffTable {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.norm_sq()
    }

    /// `‖self - other‖ / ‖other‖`, or the absolute distance when `other = 0`.
    pub fn relative_error(&self, reference: &Signal) -> f64 {
        let dist = self.coeffs.distance(&reference.coeffs);
        let norm = reference.norm_sq().sqrt();
        if norm > 0.0 {
            dist / norm
        } else {
            dist
        }
    }
}

fn degree_sums(spec: &FrameSpec, n_max: u32) -> Vec<f64> {
    let mut acc = vec![0.0; n_max as usize + 1];
    for s in &spec.scales {
        for (n, _, c) in s.coeffs.iter() {
            if n <= n_max {
                acc[n as usize] += c.norm_sqr();
            }
        }
    }
    acc
}

/// `σ_n = (dim H_n^d)^{-1} Σ_j Σ_k |Ψ^j(n,k)|²`. The base rotation does not
/// enter since degree-wise energy is rotation invariant.
pub fn sigma_profile(spec: &FrameSpec, n_max: u32) -> SpectralProfile {
    let sums = degree_sums(spec, n_max);
    SpectralProfile {
        sigma: sums
            .into_iter()
            .enumerate()
            .map(|(n, s)| s / dim_f64(spec.d, n as u32))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameBounds {
    pub c1: f64,
    pub c2: f64,
    /// `C1 > 0`: the frame inequality holds on polynomials of degree `≤ n_max`.
    /// Nothing is claimed beyond that range.
    pub is_frame_on_range: bool,
    pub n_max: u32,
}

pub fn frame_bounds(spec: &FrameSpec, n_max: u32) -> FrameBounds {
    let p = sigma_profile(spec, n_max);
    let c1 = p.sigma.iter().copied().fold(f64::INFINITY, f64::min);
    let c2 = p.sigma.iter().copied().fold(0.0, f64::max);
    FrameBounds {
        c1,
        c2,
        is_frame_on_range: c1 > 0.0,
        n_max,
    }
}

/// `(dim H_n^d)^{-1} Σ_{j ≤ last} Σ_k conj(A^j(n,k)) B^j(n,k)` for all `n ≤ n_max`.
fn cross_profile(a: &FrameSpec, b: &FrameSpec, last: Option<usize>, n_max: u32) -> Result<Vec<Complex64>> {
    if a.d != b.d {
        return Err(Error::Parameter(format!(
            "specs have dimensions {} and {}",
            a.d, b.d
        )));
    }
    let scales = a.scales.len().max(b.scales.len());
    let upto = last.map_or(scales, |j| (j + 1).min(scales));
    let mut acc = vec![Complex64::new(0.0, 0.0); n_max as usize + 1];
    for j in 0..upto {
        let (Some(sa), Some(sb)) = (a.scales.get(j), b.scales.get(j)) else {
            continue;
        };
        for (n, k, ca) in sa.coeffs.iter() {
            if n <= n_max {
                acc[n as usize] += ca.conj() * sb.coeffs.get(n as i64, k);
            }
        }
    }
    for (n, v) in acc.iter_mut().enumerate() {
        *v /= dim_f64(a.d, n as u32);
    }
    Ok(acc)
}

/// Per-degree residuals `|Σ … − 1|` of the duality condition.
pub fn dual_residuals(a: &FrameSpec, b: &FrameSpec, n_max: u32) -> Result<Vec<f64>> {
    Ok(cross_profile(a, b, None, n_max)?
        .into_iter()
        .map(|v| (v - 1.0).norm())
        .collect())
}

/// Whether `a` and `b` generate dual frames, checked on degrees `≤ n_max`.
pub fn check_dual(a: &FrameSpec, b: &FrameSpec, n_max: u32, tol: f64) -> Result<bool> {
    Ok(dual_residuals(a, b, n_max)?.iter().all(|r| *r <= tol))
}

/// Rescales degree `n` by `σ_n^{-1}`. Fails when a degree carrying table
/// entries has `σ_n = 0`.
pub fn canonical_dual(spec: &FrameSpec) -> Result<FrameSpec> {
    let p = sigma_profile(spec, spec.max_bandwidth());
    for s in &spec.scales {
        for (n, _, _) in s.coeffs.iter() {
            if p.sigma[n as usize] == 0.0 {
                return Err(Error::NotAFrame { n });
            }
        }
    }
    Ok(spec.map_coeffs(|n, c| c / p.sigma[n as usize]))
}

/// `σ_J(n)` of the approximation operator built from scales `0..=J`.
pub fn sigma_j(a: &FrameSpec, b: &FrameSpec, j: usize, n: u32) -> Result<Complex64> {
    Ok(cross_profile(a, b, Some(j), n)?[n as usize])
}

/// `Λ_J f`: multiplies `f̂(n, ℓ)` by `σ_J(n)` and truncates to `n ≤ N_J`.
pub fn apply_lambda_j(a: &FrameSpec, b: &FrameSpec, j: usize, f: &Signal) -> Result<Signal> {
    let bandwidth = a
        .scales
        .get(j)
        .ok_or_else(|| Error::Parameter(format!("scale {j} out of range")))?
        .bandwidth;
    let top = bandwidth.min(f.degree);
    let profile = cross_profile(a, b, Some(j), top)?;
    let mut out = CoeffTable::new(f.dim());
    for (n, k, c) in f.coeffs.iter() {
        if n <= top {
            out.insert(n, k.clone(), c * profile[n as usize])?;
        }
    }
    Signal::new(out, top)
}

/// A spec together with one rotation grid per scale.
#[derive(Clone, Debug)]
pub struct FrameSystem {
    pub spec: FrameSpec,
    pub grids: Vec<RotationRule>,
}

impl FrameSystem {
    /// Builds grids of class `N_j` using the variant implied by the metadata.
    pub fn new(spec: FrameSpec, max_nodes: u64) -> Result<Self> {
        spec.validate_metadata()?;
        let variants: Vec<Variant> = (0..spec.scales.len()).map(|j| spec.grid_variant(j)).collect();
        Self::with_variants(spec, &variants, max_nodes)
    }

    pub fn with_variants(spec: FrameSpec, variants: &[Variant], max_nodes: u64) -> Result<Self> {
        if variants.len() != spec.scales.len() {
            return Err(Error::Shape("one grid variant per scale is required".into()));
        }
        let grids = spec
            .scales
            .iter()
            .zip(variants)
            .map(|(s, v)| rotation_rule(spec.d, s.bandwidth, *v, max_nodes))
            .collect::<Result<Vec<_>>>()?;
        Self::with_grids(spec, grids)
    }

    pub fn with_grids(spec: FrameSpec, grids: Vec<RotationRule>) -> Result<Self> {
        if grids.len() != spec.scales.len() {
            return Err(Error::Shape("one grid per scale is required".into()));
        }
        for (j, (s, g)) in spec.scales.iter().zip(&grids).enumerate() {
            if g.class_degree < s.bandwidth {
                return Err(Error::Exactness {
                    have: g.class_degree,
                    need: s.bandwidth,
                });
            }
            if !g.is_empty() && g.dim() != spec.d {
                return Err(Error::Parameter(format!("grid {j} has the wrong dimension")));
            }
        }
        Ok(FrameSystem { spec, grids })
    }

    /// Rotations as they act on the stored tables: `g_r b`.
    fn effective_rotations(&self, j: usize) -> Vec<Rotation> {
        match &self.spec.metadata.base_rotation {
            Some(b) => self.grids[j].rotations.iter().map(|g| g.compose(b)).collect(),
            None => self.grids[j].rotations.clone(),
        }
    }

    pub fn total_rotations(&self) -> usize {
        self.grids.iter().map(|g| g.len()).sum()
    }
}

fn rule_for_degree(d: usize, degree: u32) -> Result<SphereRule> {
    sphere_rule(d, degree.div_ceil(2))
}

/// `c_{j,r} = √μ_{j,r} ⟨f, T(g_{j,r}) Ψ^j⟩` for every rotation of scale `j`.
pub fn analysis(system: &FrameSystem, f: &Signal, j: usize) -> Result<Vec<Complex64>> {
    let spec = &system.spec;
    if f.dim() != spec.d {
        return Err(Error::Parameter("signal and frame dimensions differ".into()));
    }
    let scale = spec
        .scales
        .get(j)
        .ok_or_else(|| Error::Parameter(format!("scale {j} out of range")))?;
    let grid = &system.grids[j];
    if scale.coeffs.is_empty() || f.coeffs.is_empty() {
        return Ok(vec![Complex64::new(0.0, 0.0); grid.len()]);
    }
    let rule = rule_for_degree(spec.d, scale.bandwidth + f.degree)?;
    let fe = Expansion::new(&f.coeffs);
    let weighted: Vec<Complex64> = rule
        .nodes_flat()
        .par_chunks(spec.d)
        .zip(rule.weights().par_iter())
        .map_init(Workspace::default, |ws, (x, w)| w * fe.eval_with(x, ws))
        .collect();
    let psi = Expansion::new(&scale.coeffs);
    let rotations = system.effective_rotations(j);
    let d = spec.d;
    Ok(rotations
        .par_iter()
        .zip(grid.weights.par_iter())
        .map_init(
            || (Workspace::default(), vec![0.0; d]),
            |(ws, y), (g, mu)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, fw) in rule.nodes_flat().chunks(d).zip(&weighted) {
                    g.apply_inverse(x, y);
                    acc += fw * psi.eval_with(y, ws).conj();
                }
                mu.sqrt() * acc
            },
        )
        .collect())
}

/// Analysis coefficients for all scales.
pub fn analysis_all(system: &FrameSystem, f: &Signal) -> Result<Vec<Vec<Complex64>>> {
    (0..system.spec.scales.len()).map(|j| analysis(system, f, j)).collect()
}

/// Projects a function given at the nodes of `rule` onto harmonics of degree
/// `≤ n_out`. Exact when the function times any such harmonic is integrated
/// exactly.
fn project(d: usize, rule: &SphereRule, values: &[Complex64], n_out: u32) -> Result<CoeffTable> {
    let mut basis = CoeffTable::new(d);
    for n in 0..=n_out {
        for k in index_set(d, n) {
            basis.insert(n, k, Complex64::new(1.0, 0.0))?;
        }
    }
    let e = Expansion::new(&basis);
    let count = basis.len();
    let sums = rule
        .nodes_flat()
        .par_chunks(d)
        .zip(rule.weights().par_iter().zip(values.par_iter()))
        .fold(
            || (Workspace::default(), vec![Complex64::new(0.0, 0.0); count], vec![Complex64::new(0.0, 0.0); count]),
            |(mut ws, mut vals, mut acc), (x, (w, v))| {
                e.eval_terms(x, &mut ws, &mut vals);
                let wv = w * v;
                for (a, y) in acc.iter_mut().zip(&vals) {
                    *a += wv * y.conj();
                }
                (ws, vals, acc)
            },
        )
        .map(|(_, _, acc)| acc)
        .reduce(
            || vec![Complex64::new(0.0, 0.0); count],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let mut out = CoeffTable::new(d);
    for ((n, k, _), c) in basis.iter().zip(sums) {
        out.insert(n, k.clone(), c)?;
    }
    Ok(out)
}

/// `Σ_{j,r} √μ_{j,r} c_{j,r} T(g_{j,r}) Ψ̃^j`, projected onto degrees `≤ n_out`.
/// With `dual = canonical_dual(spec)` this inverts [`analysis_all`].
pub fn synthesis(
    system: &FrameSystem,
    dual: &FrameSpec,
    coeffs: &[Vec<Complex64>],
    n_out: u32,
) -> Result<Signal> {
    let spec = &system.spec;
    let d = spec.d;
    if dual.d != d || dual.scales.len() != spec.scales.len() {
        return Err(Error::Parameter("dual spec does not match the frame system".into()));
    }
    if coeffs.len() != spec.scales.len() {
        return Err(Error::Shape(format!(
            "{} coefficient blocks for {} scales",
            coeffs.len(),
            spec.scales.len()
        )));
    }
    for (j, (c, g)) in coeffs.iter().zip(&system.grids).enumerate() {
        if c.len() != g.len() {
            return Err(Error::Shape(format!(
                "scale {j}: {} coefficients for {} rotations",
                c.len(),
                g.len()
            )));
        }
    }
    let top = dual.max_bandwidth().max(spec.max_bandwidth());
    let rule = sphere_rule(d, top.max(n_out))?;
    let mut values = vec![Complex64::new(0.0, 0.0); rule.len()];
    for (j, scale) in dual.scales.iter().enumerate() {
        if scale.coeffs.is_empty() || coeffs[j].iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        let psi = Expansion::new(&scale.coeffs);
        let rotations = system.effective_rotations(j);
        let amps: Vec<Complex64> = coeffs[j]
            .iter()
            .zip(&system.grids[j].weights)
            .map(|(c, mu)| c * mu.sqrt())
            .collect();
        let contrib: Vec<Complex64> = rule
            .nodes_flat()
            .par_chunks(d)
            .map_init(
                || (Workspace::default(), vec![0.0; d]),
                |(ws, y), x| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (g, a) in rotations.iter().zip(&amps) {
                        if a.norm_sqr() == 0.0 {
                            continue;
                        }
                        g.apply_inverse(x, y);
                        acc += a * psi.eval_with(y, ws);
                    }
                    acc
                },
            )
            .collect();
        values.iter_mut().zip(contrib).for_each(|(v, c)| *v += c);
    }
    Signal::new(project(d, &rule, &values, n_out)?, n_out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsevalReport {
    pub discrete_sum: f64,
    pub spectral_sum: f64,
    pub rel_gap: f64,
}

/// Compares `Σ_{j,r} μ |⟨f, T(g)Ψ^j⟩|²` with `Σ_n σ_n Σ_ℓ |f̂(n,ℓ)|²`.
pub fn parseval_check(system: &FrameSystem, f: &Signal) -> Result<ParsevalReport> {
    let coeffs = analysis_all(system, f)?;
    let discrete_sum: f64 = coeffs.iter().flatten().map(|c| c.norm_sqr()).sum();
    let profile = sigma_profile(&system.spec, f.degree);
    let spectral_sum: f64 = (0..=f.degree)
        .map(|n| profile.sigma[n as usize] * f.coeffs.degree_energy(n))
        .sum();
    let scale = discrete_sum.abs().max(spectral_sum.abs());
    let rel_gap = if scale > 0.0 {
        (discrete_sum - spectral_sum).abs() / scale
    } else {
        0.0
    };
    Ok(ParsevalReport {
        discrete_sum,
        spectral_sum,
        rel_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::MultiIndex;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    /// Scale 0 is the constant, scale 1 spreads unit energy per degree 1..=2.
    fn toy_parseval(d: usize) -> FrameSpec {
        let mut c0 = CoeffTable::new(d);
        c0.insert(0, MultiIndex::zero(d), one()).unwrap();
        let mut c1 = CoeffTable::new(d);
        for n in 1..=2 {
            let amp = dim_f64(d, n).sqrt();
            c1.insert(n, MultiIndex::zero(d), Complex64::new(amp, 0.0)).unwrap();
        }
        FrameSpec::new(
            d,
            vec![
                Scale { bandwidth: 1, coeffs: c0 },
                Scale { bandwidth: 2, coeffs: c1 },
            ],
            Metadata {
                invariant_m: Some(d - 1),
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn profile_and_bounds() {
        let s = toy_parseval(4);
        let p = sigma_profile(&s, 2);
        for v in &p.sigma {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let b = frame_bounds(&s, 2);
        assert!(b.is_frame_on_range && (b.c1 - 1.0).abs() < 1e-14 && (b.c2 - 1.0).abs() < 1e-14);
        let b = frame_bounds(&s, 3);
        assert!(!b.is_frame_on_range);
        assert_eq!(sigma_profile(&s, 3).zeros(), vec![3]);
    }

    #[test]
    fn duals() {
        let s = toy_parseval(3);
        assert!(check_dual(&s, &s, 2, 1e-12).unwrap());
        let same = canonical_dual(&s).unwrap();
        for (a, b) in same.scales().iter().zip(s.scales()) {
            assert!(a.coeffs.distance(&b.coeffs) < 1e-14);
        }
        let doubled = s.map_coeffs(|_, c| 2.0 * c);
        assert!(!check_dual(&s, &doubled, 2, 1e-12).unwrap());
        let dual = canonical_dual(&doubled).unwrap();
        assert!(check_dual(&doubled, &dual, 2, 1e-12).unwrap());
        assert!(check_dual(&s, &toy_parseval(4), 2, 1e-12).is_err());
    }

    #[test]
    fn not_a_frame() {
        let mut c = CoeffTable::new(3);
        c.insert(1, MultiIndex::new(vec![0]), Complex64::new(0.0, 0.0)).unwrap();
        let s = FrameSpec::new(3, vec![Scale { bandwidth: 1, coeffs: c }], Metadata::default()).unwrap();
        assert!(matches!(canonical_dual(&s), Err(Error::NotAFrame { n: 1 })));
    }

    #[test]
    fn spec_validation() {
        let mut c = CoeffTable::new(3);
        c.insert(3, MultiIndex::new(vec![0]), one()).unwrap();
        assert!(FrameSpec::new(3, vec![Scale { bandwidth: 2, coeffs: c }], Metadata::default()).is_err());
    }

    #[test]
    fn parseval_toy_frame() {
        for d in [3usize, 4] {
            let sys = FrameSystem::new(toy_parseval(d), 1_000_000).unwrap();
            let mut f = CoeffTable::new(d);
            f.insert(0, MultiIndex::zero(d), Complex64::new(0.3, 0.1)).unwrap();
            let k = index_set(d, 2)[1].clone();
            f.insert(2, k, Complex64::new(-0.2, 0.7)).unwrap();
            let f = Signal::new(f, 2).unwrap();
            let r = parseval_check(&sys, &f).unwrap();
            assert!(r.rel_gap < 1e-12, "{r:?}");
            assert!((r.spectral_sum - f.norm_sq()).abs() < 1e-14);
            let back = synthesis(&sys, &sys.spec, &analysis_all(&sys, &f).unwrap(), 2).unwrap();
            assert!(back.relative_error(&f) < 1e-12);
        }
    }

    #[test]
    fn zero_signal() {
        let sys = FrameSystem::new(toy_parseval(3), 1_000_000).unwrap();
        let f = Signal::zero(3, 2);
        let r = parseval_check(&sys, &f).unwrap();
        assert_eq!((r.discrete_sum, r.spectral_sum, r.rel_gap), (0.0, 0.0, 0.0));
        let coeffs = analysis_all(&sys, &f).unwrap();
        let back = synthesis(&sys, &sys.spec, &coeffs, 2).unwrap();
        assert_eq!(back.norm_sq(), 0.0);
    }

    #[test]
    fn lambda_truncates() {
        let s = toy_parseval(3);
        let mut f = CoeffTable::new(3);
        f.insert(2, MultiIndex::new(vec![1]), one()).unwrap();
        let f = Signal::new(f, 2).unwrap();
        let out = apply_lambda_j(&s, &s, 0, &f).unwrap();
        assert_eq!(out.norm_sq(), 0.0);
        let out = apply_lambda_j(&s, &s, 1, &f).unwrap();
        assert!((out.norm_sq() - 1.0).abs() < 1e-14);
        assert!((sigma_j(&s, &s, 0, 0).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(sigma_j(&s, &s, 0, 1).unwrap(), Complex64::new(0.0, 0.0));
    }
}
