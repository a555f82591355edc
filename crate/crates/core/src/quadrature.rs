//! Gauss–Jacobi rules, exact product rules on spheres, the rotation sections
//! `g_η` and `h_η'`, and product quadrature grids on `SO(d)`.

use crate::error::{Error, Result};
use crate::harmonics::{to_spherical, Rotation, SphericalPoint};
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Default upper bound on the number of rotations in a grid.
pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

/// A one-dimensional rule: nodes, positive weights and the highest degree it
/// integrates exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exact_degree: u32,
}

impl Rule1D {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Gauss rule with `m` nodes for the weight `(1-t²)^α` on `[-1, 1]`, via the
/// eigen-decomposition of the Jacobi matrix.
pub fn gauss_symmetric_jacobi(m: usize, alpha: f64) -> Result<Rule1D> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::Parameter(format!("Jacobi exponent must exceed -1, got {alpha}")));
    }
    if m == 0 {
        return Err(Error::Parameter("a Gauss rule needs at least one node".into()));
    }
    let mu0 = (0.5 * PI.ln() + libm::lgamma(alpha + 1.0) - libm::lgamma(alpha + 1.5)).exp();
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let denom = (2.0 * kf + 2.0 * alpha + 1.0) * (2.0 * kf + 2.0 * alpha - 1.0);
        // Chebyshev first kind: the k = 1 coefficient is a removable 0/0
        let beta = if denom == 0.0 {
            0.5
        } else {
            kf * (kf + 2.0 * alpha) / denom
        };
        let b = beta.sqrt();
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // enforce the exact symmetry of the weight
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let j = m - 1 - i;
        nodes[i] = 0.5 * (pairs[i].0 - pairs[j].0);
        weights[i] = 0.5 * (pairs[i].1 + pairs[j].1);
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(Rule1D {
        nodes,
        weights,
        exact_degree: (2 * m - 1) as u32,
    })
}

/// Equispaced rule on `[0, 2π)` with `M` points, exact for trigonometric
/// polynomials of degree below `M`.
pub fn circle_rule(m: usize) -> Rule1D {
    let m = m.max(1);
    let step = 2.0 * PI / m as f64;
    Rule1D {
        nodes: (0..m).map(|r| r as f64 * step).collect(),
        weights: vec![step; m],
        exact_degree: (m - 1) as u32,
    }
}

/// Quadrature on `S^{d-1}` with respect to the normalized surface measure.
/// Nodes are stored as flat Cartesian coordinates with stride `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule {
    d: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exact_degree: u32,
}

impl SphereRule {
    /// Assembles a rule from raw parts, checking shape, positivity and that the
    /// nodes lie on the sphere.
    pub fn from_parts(d: usize, nodes: Vec<f64>, weights: Vec<f64>, exact_degree: u32) -> Result<Self> {
        if d < 2 || nodes.len() != d * weights.len() {
            return Err(Error::Shape(format!(
                "{} coordinates do not match {} weights in dimension {d}",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_nan() || **w <= 0.0) {
            return Err(Error::Domain(format!("non-positive weight {w}")));
        }
        for x in nodes.chunks(d) {
            to_spherical(x)?;
        }
        Ok(SphereRule {
            d,
            nodes,
            weights,
            exact_degree,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn exact_degree(&self) -> u32 {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Flat Cartesian coordinates, stride `d`.
    pub fn nodes_flat(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes.chunks(self.d).zip(self.weights.iter().copied())
    }

    pub fn spherical_nodes(&self) -> Vec<SphericalPoint> {
        self.nodes
            .chunks(self.d)
            .map(|x| to_spherical(x).expect("rule nodes lie on the sphere"))
            .collect()
    }
}

/// Number of nodes of `sphere_rule(d, n)`.
pub fn sphere_rule_size(d: usize, n: u32) -> u64 {
    let per = n as u64 + 1;
    (2 * n as u64 + 1).saturating_mul(per.saturating_pow(d.saturating_sub(2) as u32))
}

/// Product rule on `S^{d-1}` exact on polynomials of degree `≤ 2N`: a
/// `(2N+1)`-point circle rule in `θ_1` times `(N+1)`-point Gauss rules in
/// `cos θ_{ℓ+1}` for the weights `sin^{ℓ-1}`, `ℓ = 1, …, d-2`.
pub fn sphere_rule(d: usize, n: u32) -> Result<SphereRule> {
    product_rule(d, n, 2 * n as usize + 1)
}

/// Like [`sphere_rule`] but with only three azimuthal points. Exact for
/// integrands of polar degree `≤ 2N` that are trigonometric of degree `≤ 2` in
/// `θ_1`, such as `x |f|²` for `f` without azimuthal dependence.
pub fn axial_sphere_rule(d: usize, n: u32) -> Result<SphereRule> {
    product_rule(d, n, 3)
}

fn product_rule(d: usize, n: u32, azimuthal: usize) -> Result<SphereRule> {
    if d < 2 {
        return Err(Error::Parameter(format!("sphere rules need d >= 2, got {d}")));
    }
    let circle = circle_rule(azimuthal);
    // points on the circle as (x_1, x_2) = (sin θ_1, cos θ_1)
    let mut pts: Vec<Vec<f64>> = circle.nodes.iter().map(|t| vec![t.sin(), t.cos()]).collect();
    let mut wts: Vec<f64> = circle.weights.clone();
    for l in 1..=d - 2 {
        let g = gauss_symmetric_jacobi(n as usize + 1, (l as f64 - 1.0) / 2.0)?;
        let mut next_pts = Vec::with_capacity(pts.len() * g.nodes.len());
        let mut next_wts = Vec::with_capacity(pts.len() * g.nodes.len());
        for (t, gw) in g.nodes.iter().zip(&g.weights) {
            let s = (1.0 - t * t).max(0.0).sqrt();
            for (p, w) in pts.iter().zip(&wts) {
                let mut q: Vec<f64> = p.iter().map(|v| v * s).collect();
                q.push(*t);
                next_pts.push(q);
                next_wts.push(w * gw);
            }
        }
        pts = next_pts;
        wts = next_wts;
    }
    let total: f64 = wts.iter().sum();
    Ok(SphereRule {
        d,
        nodes: pts.into_iter().flatten().collect(),
        weights: wts.into_iter().map(|w| w / total).collect(),
        exact_degree: 2 * n,
    })
}

/// The section `g_η` with `g_η e^d = η`, the Givens chain
/// `G_{1,2}(θ_1) ⋯ G_{d-1,d}(θ_{d-1})` built from the spherical angles of `η`.
pub fn section_rotation(eta: &[f64]) -> Result<Rotation> {
    let d = eta.len();
    let p = to_spherical(eta)?;
    let mut g = Rotation::identity(d);
    for i in 0..d - 1 {
        let angle = p.theta[i];
        if angle != 0.0 {
            g = g.compose(&Rotation::givens(d, i, angle));
        }
    }
    Ok(g)
}

/// `h_η' ∈ SO(d-1) ⊂ SO(d)` with `h_η' e^{d-1} = (η', 0)` and `h_η' e^d = e^d`.
pub fn embed_subsphere_rotation(eta_prime: &[f64]) -> Result<Rotation> {
    Ok(section_rotation(eta_prime)?.embed())
}

/// Which structure of the frame elements a rotation grid exploits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Recursive product over `S^{d-1} × S^{d-2} × ⋯ × SO(2)`.
    General,
    /// `K`-steerable elements: the inner `SO(d-1)` rule only needs class `K`.
    Steerable(u32),
    /// Zonal elements: one rotation per sphere node.
    Zonal,
    /// `SO(d-2)`-invariant elements: sphere nodes times subsphere nodes.
    SoD2Invariant,
    /// Both: the subsphere rule only needs exactness `2K`.
    SteerableSoD2(u32),
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::General => "general",
            Variant::Steerable(_) => "steerable",
            Variant::Zonal => "zonal",
            Variant::SoD2Invariant => "so_d2_invariant",
            Variant::SteerableSoD2(_) => "steerable_so_d2",
        }
    }

    pub fn steer_order(&self) -> Option<u32> {
        match self {
            Variant::Steerable(k) | Variant::SteerableSoD2(k) => Some(*k),
            _ => None,
        }
    }

    /// Parses a variant name; steerable kinds need `k`.
    pub fn parse(name: &str, k: Option<u32>) -> Result<Variant> {
        let need_k = || {
            k.ok_or_else(|| Error::Parameter(format!("variant {name} needs a steerability order K")))
        };
        Ok(match name {
            "general" => Variant::General,
            "steerable" => Variant::Steerable(need_k()?),
            "zonal" => Variant::Zonal,
            "so_d2_invariant" => Variant::SoD2Invariant,
            "steerable_so_d2" => Variant::SteerableSoD2(need_k()?),
            _ => return Err(Error::Parameter(format!("unknown grid variant {name}"))),
        })
    }
}

/// Weighted rotations approximating the normalized Haar measure on `SO(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationRule {
    pub rotations: Vec<Rotation>,
    pub weights: Vec<f64>,
    pub class_degree: u32,
    pub variant: Variant,
}

impl RotationRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rotations.first().map_or(0, |g| g.dim())
    }
}

fn general_size(d: usize, n: u32) -> u64 {
    if d == 2 {
        2 * n as u64 + 1
    } else {
        sphere_rule_size(d, n).saturating_mul(general_size(d - 1, n))
    }
}

/// Number of rotations `rotation_rule` would produce.
pub fn rotation_rule_size(d: usize, n: u32, variant: Variant) -> u64 {
    let outer = sphere_rule_size(d, n);
    match variant {
        Variant::General => general_size(d, n),
        Variant::Steerable(k) => outer.saturating_mul(general_size(d - 1, k)),
        Variant::Zonal => outer,
        Variant::SoD2Invariant => outer.saturating_mul(sphere_rule_size(d - 1, n)),
        Variant::SteerableSoD2(k) => outer.saturating_mul(sphere_rule_size(d - 1, k)),
    }
}

fn general_parts(d: usize, n: u32) -> Result<(Vec<Rotation>, Vec<f64>)> {
    if d == 2 {
        let c = circle_rule(2 * n as usize + 1);
        let total: f64 = c.weights.iter().sum();
        return Ok((
            c.nodes.iter().map(|a| Rotation::givens(2, 0, *a)).collect(),
            c.weights.iter().map(|w| w / total).collect(),
        ));
    }
    let inner = general_parts(d - 1, n)?;
    let inner: Vec<(Rotation, f64)> = inner.0.into_iter().map(|h| h.embed()).zip(inner.1).collect();
    compose_with_sections(d, n, &inner)
}

fn compose_with_sections(d: usize, n: u32, inner: &[(Rotation, f64)]) -> Result<(Vec<Rotation>, Vec<f64>)> {
    let outer = sphere_rule(d, n)?;
    let mut rots = Vec::with_capacity(outer.len() * inner.len());
    let mut wts = Vec::with_capacity(outer.len() * inner.len());
    for (eta, w) in outer.iter() {
        let g = section_rotation(eta)?;
        for (h, v) in inner {
            rots.push(g.compose(h));
            wts.push(w * v);
        }
    }
    Ok((rots, wts))
}

fn subsphere_parts(d: usize, n: u32) -> Result<Vec<(Rotation, f64)>> {
    let rule = sphere_rule(d - 1, n)?;
    rule.iter()
        .map(|(x, w)| Ok((embed_subsphere_rotation(x)?, w)))
        .collect()
}

/// Builds a rotation grid of class `n`. Fails with a capacity error when the
/// grid would exceed `max_nodes` rotations.
pub fn rotation_rule(d: usize, n: u32, variant: Variant, max_nodes: u64) -> Result<RotationRule> {
    if d < 3 {
        return Err(Error::Parameter(format!("rotation grids need d >= 3, got {d}")));
    }
    let size = rotation_rule_size(d, n, variant);
    if size > max_nodes {
        return Err(Error::Capacity {
            nodes: size,
            cap: max_nodes,
        });
    }
    let (rotations, weights) = match variant {
        Variant::General => general_parts(d, n)?,
        Variant::Steerable(k) => {
            let (hs, ws) = general_parts(d - 1, k)?;
            let inner: Vec<_> = hs.into_iter().map(|h| h.embed()).zip(ws).collect();
            compose_with_sections(d, n, &inner)?
        }
        Variant::Zonal => compose_with_sections(d, n, &[(Rotation::identity(d), 1.0)])?,
        Variant::SoD2Invariant => compose_with_sections(d, n, &subsphere_parts(d, n)?)?,
        Variant::SteerableSoD2(k) => compose_with_sections(d, n, &subsphere_parts(d, k)?)?,
    };
    Ok(RotationRule {
        rotations,
        weights,
        class_degree: n,
        variant,
    })
}
