//! Scalar special functions: Gegenbauer polynomials, the log-domain
//! normalization constants of the explicit harmonic basis, and the
//! adjacent-degree coupling coefficients used for the centre of mass.

use crate::error::{Error, Result};
use crate::harmonics::MultiIndex;
use std::f64::consts::{LN_2, PI};

/// Evaluates the Gegenbauer polynomial `C_n^λ(t)` by forward recurrence.
pub fn gegenbauer(lambda: f64, n: u32, t: f64) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Parameter(format!(
            "Gegenbauer index must be positive, got {lambda}"
        )));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * lambda * t;
    for m in 2..=n {
        let m = m as f64;
        let next = (2.0 * (m + lambda - 1.0) * t * cur - (m + 2.0 * lambda - 2.0) * prev) / m;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Fills `out[m] = C_m^λ(t)` for `m = 0..out.len()`. No parameter checks.
#[inline]
pub(crate) fn gegenbauer_sequence(lambda: f64, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 2.0 * lambda * t;
    for m in 2..out.len() {
        let mf = m as f64;
        out[m] = (2.0 * (mf + lambda - 1.0) * t * out[m - 1]
            - (mf + 2.0 * lambda - 2.0) * out[m - 2])
            / mf;
    }
}

/// `ln Γ(twice / 2)` for positive integer `twice`, i.e. for integer and
/// half-integer arguments. Summed from exact logarithms rather than a series.
pub fn ln_gamma_half(twice: u32) -> f64 {
    assert!(twice >= 1, "ln_gamma_half needs a positive argument");
    if twice.is_multiple_of(2) {
        // Γ(m) = (m-1)!
        let m = twice / 2;
        (1..m).map(|i| (i as f64).ln()).sum()
    } else {
        // Γ(m + 1/2) = √π · Π_{i=1}^{m} (i - 1/2)
        let m = (twice - 1) / 2;
        0.5 * PI.ln() + (1..=m).map(|i| (i as f64 - 0.5).ln()).sum::<f64>()
    }
}

/// `ln m!`
pub fn ln_factorial(m: u32) -> f64 {
    ln_gamma_half(2 * m + 2)
}

/// Logarithm of the positive normalization constant `A_k^n` of the explicit
/// orthonormal basis, accumulated entirely as log-Gamma differences.
pub fn log_norm_a(d: usize, n: u32, k: &MultiIndex) -> Result<f64> {
    k.check(d, n)?;
    if n == 0 {
        // degree 0 is the constant harmonic Y ≡ 1
        return Ok(0.0);
    }
    let di = d as i64;
    let mut two_log = ((di - 4) * (di - 2)) as f64 * LN_2 - ln_gamma_half(d as u32);
    let ks = k.as_slice();
    for j in 0..d - 2 {
        let kj = if j == 0 { n as i64 } else { ks[j - 1] as i64 };
        let a = (ks[j] as i64).abs();
        let ji = j as i64;
        let deg = (kj - a) as u32;
        two_log += (2 * a - ji) as f64 * LN_2;
        two_log += ln_factorial(deg);
        two_log += ((2 * kj + di - ji - 2) as f64).ln();
        two_log += 2.0 * ln_gamma_half((di - ji - 2 + 2 * a) as u32);
        two_log -= 0.5 * PI.ln();
        two_log -= ln_gamma_half((2 * (kj + a + di - ji - 2)) as u32);
    }
    Ok(0.5 * two_log)
}

/// The quadratic `q_d(k1) = |k1|² + |k1|(d-3) - (d-2)(1-d/4)`.
pub fn q_poly(d: usize, k1: i64) -> f64 {
    let a = k1.unsigned_abs() as f64;
    let df = d as f64;
    a * a + a * (df - 3.0) - (df - 2.0) * (1.0 - df / 4.0)
}

/// Coupling between degrees `n` and `n+1` of the `x_d` multiplication operator,
/// `Q_d^{k1}(n) = ½ √(1 - q_d(k1) / (n² + n(d-1) + d(d-2)/4))`.
pub fn q_coupling(d: usize, k1: i64, n: u32) -> Result<f64> {
    if d < 3 {
        return Err(Error::Parameter(format!("dimension d = {d} < 3")));
    }
    let df = d as f64;
    let nf = n as f64;
    let denom = nf * nf + nf * (df - 1.0) + df * (df - 2.0) / 4.0;
    let radicand = 1.0 - q_poly(d, k1) / denom;
    if radicand < 0.0 {
        return Err(Error::Domain(format!(
            "negative radicand {radicand} for k1 = {k1}, n = {n}, d = {d}"
        )));
    }
    Ok(0.5 * radicand.sqrt())
}
