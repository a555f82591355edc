//! Spherical harmonics on `S^{d-1}` in the explicit Gegenbauer-product basis:
//! index sets, coordinates, point evaluation, the addition kernel and a
//! quadrature-based matrix-function oracle.

mod expansion;
mod rotation;

pub use expansion::{eval_expansion, Expansion, Workspace};
pub use rotation::Rotation;

use crate::error::{Error, Result};
use crate::quadrature::SphereRule;
use crate::specfun::{gegenbauer, log_norm_a};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Tolerance for accepting a Cartesian point as lying on the sphere.
pub const ON_SPHERE_TOL: f64 = 1e-8;

/// The tuple `k = (k_1, …, k_{d-2})` labelling a harmonic inside its degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(entries: Vec<i32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d - 2])
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k_1`
    pub fn first(&self) -> i32 {
        self.0[0]
    }

    /// `k_{d-2}`, the azimuthal index.
    pub fn last(&self) -> i32 {
        *self.0.last().expect("empty multi-index")
    }

    /// Same index with `k_{d-2}` negated; indexes the conjugate harmonic.
    pub fn conjugate(&self) -> Self {
        let mut v = self.0.clone();
        if let Some(l) = v.last_mut() {
            *l = -*l;
        }
        MultiIndex(v)
    }

    pub fn is_valid(&self, d: usize, n: u32) -> bool {
        if d < 3 || self.0.len() != d - 2 {
            return false;
        }
        let mut upper = n as i64;
        let last = self.0.len() - 1;
        for (i, &k) in self.0.iter().enumerate() {
            let k = k as i64;
            if i < last {
                if k < 0 || k > upper {
                    return false;
                }
                upper = k;
            } else if k.abs() > upper {
                return false;
            }
        }
        true
    }

    pub fn check(&self, d: usize, n: u32) -> Result<()> {
        if self.is_valid(d, n) {
            Ok(())
        } else {
            Err(Error::Index {
                d,
                n,
                index: self.0.clone(),
            })
        }
    }
}

impl From<Vec<i32>> for MultiIndex {
    fn from(v: Vec<i32>) -> Self {
        MultiIndex(v)
    }
}

fn binomial_u128(top: u64, k: u64) -> u128 {
    let k = k.min(top - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (top as u128 - k as u128 + i) / i;
    }
    acc
}

/// `dim H_n^d = (2n+d-2)(n+d-3)! / ((d-2)! n!)`, exactly.
pub fn dim_harmonic(d: usize, n: u32) -> Result<u64> {
    if d < 3 {
        return Err(Error::Parameter(format!("dimension d = {d} < 3")));
    }
    let n = n as u64;
    let d = d as u64;
    // (n+d-3)!/((d-2)! n!) = binom(n+d-3, n) / (d-2)
    let num = (2 * n + d - 2) as u128 * binomial_u128(n + d - 3, n);
    Ok((num / (d - 2) as u128) as u64)
}

/// `dim H_n^d` as a float, for use in weights.
pub(crate) fn dim_f64(d: usize, n: u32) -> f64 {
    dim_harmonic(d, n).expect("d >= 3 checked by caller") as f64
}

/// Lexicographically ordered enumeration of `I_n^d`.
pub fn index_set(d: usize, n: u32) -> Vec<MultiIndex> {
    assert!(d >= 3, "index_set needs d >= 3");
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d - 2);
    fill_indices(d - 2, n as i32, &mut cur, &mut out);
    out
}

fn fill_indices(slots: usize, upper: i32, cur: &mut Vec<i32>, out: &mut Vec<MultiIndex>) {
    if cur.len() + 1 == slots {
        for k in -upper..=upper {
            cur.push(k);
            out.push(MultiIndex(cur.clone()));
            cur.pop();
        }
        return;
    }
    for k in 0..=upper {
        cur.push(k);
        fill_indices(slots, k, cur, out);
        cur.pop();
    }
}

/// Angles `(θ_1, …, θ_{d-1})` with `θ_1 ∈ [0, 2π)` and the rest in `[0, π]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalPoint {
    pub theta: Vec<f64>,
}

impl SphericalPoint {
    pub fn new(theta: Vec<f64>) -> Self {
        SphericalPoint { theta }
    }

    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }
}

/// Converts a unit vector to spherical angles. Angles left undetermined at a
/// coordinate singularity are set to zero.
pub fn to_spherical(x: &[f64]) -> Result<SphericalPoint> {
    let d = x.len();
    if d < 2 {
        return Err(Error::Parameter("points need at least two coordinates".into()));
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > ON_SPHERE_TOL {
        return Err(Error::Domain(format!("point has norm {norm}, not on the sphere")));
    }
    let mut theta = vec![0.0; d - 1];
    // r[l] = |(x_1, …, x_l)|
    let mut partial = 0.0;
    let mut r = vec![0.0; d + 1];
    for l in 1..=d {
        partial += x[l - 1] * x[l - 1];
        r[l] = partial.sqrt();
    }
    for l in 2..d {
        theta[l - 1] = r[l].atan2(x[l]);
    }
    if r[2] > 0.0 {
        let mut t1 = x[0].atan2(x[1]);
        if t1 < 0.0 {
            t1 += 2.0 * PI;
        }
        if t1 >= 2.0 * PI {
            t1 = 0.0;
        }
        theta[0] = t1;
    }
    Ok(SphericalPoint { theta })
}

pub fn to_cartesian(p: &SphericalPoint) -> Vec<f64> {
    let d = p.dim();
    let mut x = vec![0.0; d];
    // running product of sines from θ_{d-1} downwards
    let mut s = 1.0;
    for l in (2..d).rev() {
        let th = p.theta[l - 1];
        x[l] = s * th.cos();
        s *= th.sin();
    }
    let t1 = p.theta[0];
    x[0] = s * t1.sin();
    x[1] = s * t1.cos();
    x
}

/// The north pole `e^d`.
pub fn north_pole(d: usize) -> Vec<f64> {
    let mut e = vec![0.0; d];
    e[d - 1] = 1.0;
    e
}

/// Evaluates the basis harmonic `Y_k^{d,n}` at spherical coordinates `p`.
pub fn eval_harmonic(d: usize, n: u32, k: &MultiIndex, p: &SphericalPoint) -> Result<Complex64> {
    k.check(d, n)?;
    if p.dim() != d {
        return Err(Error::Parameter(format!(
            "point has dimension {}, expected {d}",
            p.dim()
        )));
    }
    let ks = k.as_slice();
    let mut value = log_norm_a(d, n, k)?.exp();
    for j in 0..d - 2 {
        let kj = if j == 0 { n as i32 } else { ks[j - 1] };
        let a = ks[j].unsigned_abs();
        let lambda = (d - j - 2) as f64 / 2.0 + a as f64;
        let th = p.theta[d - j - 2];
        value *= gegenbauer(lambda, (kj - a as i32) as u32, th.cos())? * th.sin().powi(a as i32);
    }
    let phase = k.last() as f64 * p.theta[0];
    Ok(Complex64::from_polar(value, phase))
}

/// `((2n+d-2)/(d-2)) · C_n^{(d-2)/2}(s)`, which equals `Σ_k conj(Y_k(ν)) Y_k(η)`
/// for `s = ⟨ν, η⟩`.
pub fn addition_kernel(d: usize, n: u32, s: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::Parameter(format!("dimension d = {d} < 3")));
    }
    let df = d as f64;
    Ok((2.0 * n as f64 + df - 2.0) / (df - 2.0) * gegenbauer((df - 2.0) / 2.0, n, s)?)
}

/// `t_{k,m}^{d,n}(g) = ⟨T(g) Y_m, Y_k⟩` by quadrature. Test oracle; `rule` must
/// be exact on `Π_{2n}`.
pub fn matrix_function_numeric(
    d: usize,
    n: u32,
    k: &MultiIndex,
    m: &MultiIndex,
    g: &Rotation,
    rule: &SphereRule,
) -> Result<Complex64> {
    k.check(d, n)?;
    m.check(d, n)?;
    if rule.dim() != d || g.dim() != d {
        return Err(Error::Parameter("dimension mismatch between rule, rotation and d".into()));
    }
    if rule.exact_degree() < 2 * n {
        return Err(Error::Exactness {
            have: rule.exact_degree(),
            need: 2 * n,
        });
    }
    let mut ym = CoeffTable::new(d);
    ym.insert(n, m.clone(), Complex64::new(1.0, 0.0))?;
    let mut yk = CoeffTable::new(d);
    yk.insert(n, k.clone(), Complex64::new(1.0, 0.0))?;
    let (em, ek) = (Expansion::new(&ym), Expansion::new(&yk));
    let mut ws = Workspace::default();
    let mut rotated = vec![0.0; d];
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.iter() {
        g.apply_inverse(x, &mut rotated);
        acc += w * em.eval_with(&rotated, &mut ws) * ek.eval_with(x, &mut ws).conj();
    }
    Ok(acc)
}

/// Sparse table of harmonic coefficients keyed by `(n, k)`; iteration follows
/// increasing degree and then index-set order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    d: usize,
    entries: BTreeMap<(u32, MultiIndex), Complex64>,
}

impl CoeffTable {
    pub fn new(d: usize) -> Self {
        CoeffTable {
            d,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Inserts (or overwrites) a coefficient after validating the index.
    pub fn insert(&mut self, n: u32, k: MultiIndex, c: Complex64) -> Result<()> {
        k.check(self.d, n)?;
        self.entries.insert((n, k), c);
        Ok(())
    }

    /// Adds to an existing coefficient.
    pub fn add(&mut self, n: u32, k: MultiIndex, c: Complex64) -> Result<()> {
        k.check(self.d, n)?;
        *self.entries.entry((n, k)).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    /// Coefficient at `(n, k)`, zero when absent, `n < 0` or `k ∉ I_n^d`.
    pub fn get(&self, n: i64, k: &MultiIndex) -> Complex64 {
        if n < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.entries
            .get(&(n as u32, k.clone()))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &MultiIndex, Complex64)> + '_ {
        self.entries.iter().map(|((n, k), c)| (*n, k, *c))
    }

    /// Entries of a single degree, in index-set order.
    pub fn degree(&self, n: u32) -> impl Iterator<Item = (&MultiIndex, Complex64)> + '_ {
        self.entries
            .range((n, MultiIndex(vec![]))..(n + 1, MultiIndex(vec![])))
            .map(|((_, k), c)| (k, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Highest degree carrying an entry.
    pub fn max_degree(&self) -> Option<u32> {
        self.entries.keys().next_back().map(|(n, _)| *n)
    }

    /// Degrees carrying a nonzero coefficient, ascending.
    pub fn support_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .entries
            .iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|((n, _), _)| *n)
            .collect();
        v.dedup();
        v
    }

    /// `Σ_k |c(n,k)|²` for one degree.
    pub fn degree_energy(&self, n: u32) -> f64 {
        self.degree(n).map(|(_, c)| c.norm_sqr()).sum()
    }

    /// `Σ |c|²`, the squared L² norm of the expansion.
    pub fn norm_sq(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).sum()
    }

    /// Applies `f(n, c)` to every coefficient.
    pub fn map_by_degree(&self, mut f: impl FnMut(u32, Complex64) -> Complex64) -> CoeffTable {
        CoeffTable {
            d: self.d,
            entries: self
                .entries
                .iter()
                .map(|((n, k), c)| ((*n, k.clone()), f(*n, *c)))
                .collect(),
        }
    }

    /// Drops explicit zeros.
    pub fn pruned(mut self) -> CoeffTable {
        self.entries.retain(|_, c| c.norm_sqr() > 0.0);
        self
    }

    /// `‖self - other‖₂` over the union of supports.
    pub fn distance(&self, other: &CoeffTable) -> f64 {
        let mut acc = 0.0;
        for ((n, k), c) in &self.entries {
            acc += (c - other.get(*n as i64, k)).norm_sqr();
        }
        for ((n, k), c) in &other.entries {
            if !self.entries.contains_key(&(*n, k.clone())) {
                acc += c.norm_sqr();
            }
        }
        acc.sqrt()
    }
}
