//! Generators for the example frames: the `C²` window `φ` and its dyadic
//! differences, directionality components, steerable wavelets, zonal
//! needlets, curvelets, and polar-grid sampling for pictures.

use crate::error::{Error, Result};
use crate::frames::{FrameSpec, Metadata, Scale};
use crate::harmonics::{dim_f64, CoeffTable, Expansion, MultiIndex, Rotation, Workspace};
use crate::specfun::{ln_factorial, ln_gamma_half, log_norm_a};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};
use std::fmt::Write as _;

/// `1` on `[0, 1/2)`, `16(1-t)³(12t²-9t+2)` on `[1/2, 1]`, `0` beyond.
pub fn phi(t: f64) -> f64 {
    if t < 0.5 {
        1.0
    } else if t <= 1.0 {
        let u = 1.0 - t;
        16.0 * u * u * u * (12.0 * t * t - 9.0 * t + 2.0)
    } else {
        0.0
    }
}

/// `κ(t) = √(φ²(t/2) − φ²(t))`, supported on `[1/2, 2]`.
pub fn kappa(t: f64) -> f64 {
    let (a, b) = (phi(t / 2.0), phi(t));
    // φ is non-increasing, so only rounding can make this negative
    (a * a - b * b).max(0.0).sqrt()
}

/// Dyadic window `2^{j(d-2)/2} κ(n / 2^{j-1})`.
pub fn kappa1(d: usize, j: u32, n: u32) -> f64 {
    let scale = (j as f64 * (d as f64 - 2.0) / 2.0).exp2();
    scale * kappa(n as f64 / (j as f64 - 1.0).exp2())
}

/// Sine window `2^{j(d-2)/2} sin(π(n+1-2^{j-2}) / (3·2^{j-2}+2))` on
/// `2^{j-2} ≤ n ≤ 2^j`.
pub fn kappa2(d: usize, j: u32, n: u32) -> f64 {
    let lo = (j as f64 - 2.0).exp2();
    let hi = (j as f64).exp2();
    let nf = n as f64;
    if nf < lo || nf > hi {
        return 0.0;
    }
    let scale = (j as f64 * (d as f64 - 2.0) / 2.0).exp2();
    scale * (PI * (nf + 1.0 - lo) / (3.0 * lo + 2.0)).sin()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    /// Smooth dyadic window built from `φ`.
    Kappa1,
    /// Sine window.
    Kappa2,
}

impl Window {
    pub fn value(self, d: usize, j: u32, n: u32) -> f64 {
        match self {
            Window::Kappa1 => kappa1(d, j, n),
            Window::Kappa2 => kappa2(d, j, n),
        }
    }

    /// The window without the `2^{j(d-2)/2}` amplitude factor.
    pub fn unit_value(self, d: usize, j: u32, n: u32) -> f64 {
        self.value(d, j, n) / (j as f64 * (d as f64 - 2.0) / 2.0).exp2()
    }

    pub fn name(self) -> &'static str {
        match self {
            Window::Kappa1 => "kappa1",
            Window::Kappa2 => "kappa2",
        }
    }

    pub fn parse(s: &str) -> Result<Window> {
        match s {
            "kappa1" => Ok(Window::Kappa1),
            "kappa2" => Ok(Window::Kappa2),
            _ => Err(Error::Parameter(format!("unknown window {s}"))),
        }
    }
}

/// Directionality component `ζ_k^{d,n}` with steerability cutoff `K`, for `d ≥ 4`.
/// Supported on `k = (k_1, 0, …, 0)` with `k_1 ≤ min(K, n)` of the same parity
/// as `min(K, n)`; the squares sum to one over `I_n^d`.
pub fn zeta(d: usize, n: u32, k: &MultiIndex, cutoff: u32) -> Result<f64> {
    if d < 4 {
        return Err(Error::Unsupported(
            "directionality components for d = 3 must be supplied as a table".into(),
        ));
    }
    k.check(d, n)?;
    if k.as_slice()[1] != 0 {
        return Ok(0.0);
    }
    let k1 = k.first() as u32;
    let kn = cutoff.min(n);
    if k1 > kn || (kn - k1) % 2 == 1 {
        return Ok(0.0);
    }
    let twice_lambda = (d - 3) as u32;
    let lambda = twice_lambda as f64 / 2.0;
    let log_sq = ln_gamma_half(twice_lambda) + ln_factorial(kn) + (k1 as f64 + lambda).ln()
        + ln_gamma_half(2 * (d as u32 + k1 - 3))
        - ln_gamma_half(2 * twice_lambda)
        - kn as f64 * LN_2
        - ln_factorial((kn - k1) / 2)
        - ln_gamma_half(twice_lambda + kn + k1 + 2)
        - ln_factorial(k1);
    let sign = if (k1 / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (0.5 * log_sq).exp())
}

/// Indices `(k_1, 0, …, 0)` carrying a nonzero `ζ` at degree `n`.
pub fn zeta_support(d: usize, n: u32, cutoff: u32) -> Vec<MultiIndex> {
    let kn = cutoff.min(n);
    (0..=kn)
        .filter(|k1| (kn - k1).is_multiple_of(2))
        .map(|k1| {
            let mut v = vec![0; d - 2];
            v[0] = k1 as i32;
            MultiIndex::new(v)
        })
        .collect()
}

fn constant_scale(d: usize) -> Scale {
    let mut c = CoeffTable::new(d);
    c.insert(0, MultiIndex::zero(d), Complex64::new(1.0, 0.0))
        .expect("zero index is valid");
    Scale {
        bandwidth: 1,
        coeffs: c,
    }
}

/// `Ψ^0 ≡ 1` and `Ψ^j(n,k) = κ_{i,j}(n) ζ_k^{d,n}` for `j = 1, …, J`, with
/// bandwidths `N_j = 2^j`. `K`-steerable and `SO(d-2)`-invariant.
pub fn wavelet_spec(d: usize, cutoff: u32, levels: u32, window: Window) -> Result<FrameSpec> {
    if d < 4 {
        return Err(Error::Unsupported(
            "wavelets need directionality components, which are only generated for d >= 4".into(),
        ));
    }
    let mut scales = vec![constant_scale(d)];
    for j in 1..=levels {
        let top = 1u32 << j;
        let mut c = CoeffTable::new(d);
        for n in 0..=top {
            let w = window.value(d, j, n);
            if w == 0.0 {
                continue;
            }
            for k in zeta_support(d, n, cutoff) {
                let z = zeta(d, n, &k, cutoff)?;
                c.insert(n, k, Complex64::new(w * z, 0.0))?;
            }
        }
        scales.push(Scale {
            bandwidth: top,
            coeffs: c,
        });
    }
    FrameSpec::new(
        d,
        scales,
        Metadata {
            steerable_k: Some(cutoff),
            invariant_m: Some(d - 2),
            base_rotation: None,
        },
    )
}

/// Zonal frame: `Ψ^0 ≡ 1`, `Ψ^j(n, 0) = w_j(n) √dim H_n^d` with the window
/// taken without its amplitude factor. With `κ_1` this is a Parseval frame up
/// to degree `2^{J-1}`.
pub fn zonal_spec(d: usize, levels: u32, window: Window) -> Result<FrameSpec> {
    let mut scales = vec![constant_scale(d)];
    for j in 1..=levels {
        let top = 1u32 << j;
        let mut c = CoeffTable::new(d);
        for n in 0..=top {
            let w = window.unit_value(d, j, n);
            if w != 0.0 {
                c.insert(n, MultiIndex::zero(d), Complex64::new(w * dim_f64(d, n).sqrt(), 0.0))?;
            }
        }
        scales.push(Scale {
            bandwidth: top,
            coeffs: c,
        });
    }
    FrameSpec::new(
        d,
        scales,
        Metadata {
            steerable_k: Some(0),
            invariant_m: Some(d - 1),
            base_rotation: None,
        },
    )
}

/// Rotation with `e^1 ↦ e^{d-1}`, `e^2 ↦ e^d` and `e^i ↦ e^{i-2}` otherwise.
pub fn make_g0(d: usize) -> Rotation {
    let mut m = vec![0.0; d * d];
    // column c holds the image of e^{c+1}
    m[(d - 2) * d] = 1.0;
    m[(d - 1) * d + 1] = 1.0;
    for c in 2..d {
        m[(c - 2) * d + c] = 1.0;
    }
    let mut g = Rotation::from_raw(d, m.clone());
    if g.determinant() < 0.0 && d > 2 {
        for r in 0..d {
            m[r * d + 2] = -m[r * d + 2];
        }
        g = Rotation::from_raw(d, m);
    }
    g
}

fn top_index(d: usize, n: u32, sign: i32) -> MultiIndex {
    let mut v = vec![n as i32; d - 2];
    v[d - 3] = sign * n as i32;
    MultiIndex::new(v)
}

/// Curvelets: `Ψ^0 ≡ 1` and `Ψ^j(n,k) = κ_{1,j}(n) δ_{|k_{d-2}|, n} / √2`, stored
/// before rotation, with `g_0` as base rotation.
pub fn curvelet_spec(d: usize, levels: u32) -> Result<FrameSpec> {
    if d < 3 {
        return Err(Error::Parameter(format!("dimension d = {d} < 3")));
    }
    let mut scales = vec![constant_scale(d)];
    for j in 1..=levels {
        let top = 1u32 << j;
        let mut c = CoeffTable::new(d);
        for n in 1..=top {
            let w = kappa1(d, j, n);
            if w == 0.0 {
                continue;
            }
            for sign in [-1, 1] {
                c.insert(n, top_index(d, n, sign), Complex64::new(w * FRAC_1_SQRT_2, 0.0))?;
            }
        }
        scales.push(Scale {
            bandwidth: top,
            coeffs: c,
        });
    }
    FrameSpec::new(
        d,
        scales,
        Metadata {
            steerable_k: None,
            invariant_m: Some(d - 2),
            base_rotation: Some(make_g0(d)),
        },
    )
}

/// `√2 Σ_n κ_{1,j}(n) A^n_{(n,…,n)} Re{(x_d + i x_{d-1})^n}`, the rotated curvelet
/// at a Cartesian point.
pub fn curvelet_eval_closed(d: usize, j: u32, x: &[f64]) -> Result<f64> {
    if x.len() != d {
        return Err(Error::Parameter("point has the wrong dimension".into()));
    }
    let z = Complex64::new(x[d - 1], x[d - 2]);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut acc = 0.0;
    for n in 1..=(1u32 << j) {
        zn *= z;
        let w = kappa1(d, j, n);
        if w != 0.0 {
            let a = log_norm_a(d, n, &top_index(d, n, 1))?.exp();
            acc += w * a * zn.re;
        }
    }
    Ok(SQRT_2 * acc)
}

/// Samples of a frame element on a polar grid around the north pole,
/// rescaled to maximal absolute value one.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarGrid {
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    /// Row-major, one row per `t`.
    pub values: Vec<f64>,
    /// The maximal absolute value before rescaling.
    pub rescale: f64,
}

impl PolarGrid {
    pub fn get(&self, it: usize, ip: usize) -> f64 {
        self.values[it * self.phi.len() + ip]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest deviation from `ψ(t, φ) = ψ(t, 2π − φ)`.
    pub fn reflection_defect(&self) -> f64 {
        let np = self.phi.len();
        let mut worst: f64 = 0.0;
        for it in 0..self.t.len() {
            for ip in 0..np {
                let mirror = (np - ip) % np;
                worst = worst.max((self.get(it, ip) - self.get(it, mirror)).abs());
            }
        }
        worst
    }

    /// CSV with a header row of `φ` values; each row starts with its `t`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t\\phi");
        for p in &self.phi {
            write!(s, ",{p}").unwrap();
        }
        s.push('\n');
        for (it, t) in self.t.iter().enumerate() {
            write!(s, "{t}").unwrap();
            for ip in 0..self.phi.len() {
                write!(s, ",{}", self.get(it, ip)).unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Binary 8-bit PGM (P5); `[-1, 1]` maps affinely onto `[0, 255]`, rounding
    /// half away from zero. Rows are `t`, columns are `φ`.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.phi.len(), self.t.len()).into_bytes();
        out.extend(self.values.iter().map(|v| {
            let g = ((v.clamp(-1.0, 1.0) + 1.0) * 127.5).round();
            g as u8
        }));
        out
    }
}

/// Samples scale `j` (with the base rotation applied) at
/// `cos t e^d + sin t (cos φ e^{d-1} + sin φ v)`, where `v` carries `η''` in the
/// first `d-2` coordinates. `t_i = t_max i / (n_t - 1)`, `φ_k = 2πk / n_φ`.
pub fn polar_sample(
    spec: &FrameSpec,
    j: usize,
    n_t: usize,
    n_phi: usize,
    t_max: f64,
    eta_pp: Option<&[f64]>,
) -> Result<PolarGrid> {
    let d = spec.dim();
    let scale = spec
        .scales()
        .get(j)
        .ok_or_else(|| Error::Parameter(format!("scale {j} out of range")))?;
    if n_t < 2 || n_phi < 1 {
        return Err(Error::Parameter("polar grids need at least 2 radii and 1 angle".into()));
    }
    let v: Vec<f64> = match eta_pp {
        Some(e) => {
            if e.len() != d - 2 {
                return Err(Error::Parameter(format!(
                    "η'' needs {} coordinates, got {}",
                    d - 2,
                    e.len()
                )));
            }
            let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > crate::harmonics::ON_SPHERE_TOL {
                return Err(Error::Domain(format!("η'' has norm {norm}")));
            }
            e.to_vec()
        }
        None => {
            let mut e = vec![0.0; d - 2];
            e[0] = 1.0;
            e
        }
    };
    let t: Vec<f64> = (0..n_t).map(|i| t_max * i as f64 / (n_t - 1) as f64).collect();
    let phis: Vec<f64> = (0..n_phi).map(|k| 2.0 * PI * k as f64 / n_phi as f64).collect();
    let e = Expansion::new(&scale.coeffs);
    let base = spec.metadata().base_rotation.clone();
    let rows: Vec<Vec<f64>> = t
        .par_iter()
        .map_init(
            || (Workspace::default(), vec![0.0; d], vec![0.0; d]),
            |(ws, x, y), &tt| {
                let (st, ct) = tt.sin_cos();
                phis.iter()
                    .map(|&p| {
                        let (sp, cp) = p.sin_cos();
                        for i in 0..d - 2 {
                            x[i] = st * sp * v[i];
                        }
                        x[d - 2] = st * cp;
                        x[d - 1] = ct;
                        let val = match &base {
                            Some(b) => {
                                b.apply_inverse(x, y);
                                e.eval_with(y, ws)
                            }
                            None => e.eval_with(x, ws),
                        };
                        val.re
                    })
                    .collect()
            },
        )
        .collect();
    let mut values: Vec<f64> = rows.into_iter().flatten().collect();
    let rescale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if rescale == 0.0 {
        return Err(Error::Degenerate("frame element vanishes on the whole grid".into()));
    }
    values.iter_mut().for_each(|v| *v /= rescale);
    Ok(PolarGrid {
        t,
        phi: phis,
        values,
        rescale,
    })
}
