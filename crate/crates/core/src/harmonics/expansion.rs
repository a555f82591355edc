use super::{to_cartesian, CoeffTable, SphericalPoint};
use crate::specfun::{gegenbauer_sequence, log_norm_a};
use num_complex::Complex64;
use rayon::prelude::*;

/// Precompiled evaluator for `Σ c(n,k) Y_k^{d,n}`.
///
/// Terms are factored per angle: the Gegenbauer factor at level `j` depends
/// only on `(k_j, |k_{j+1}|)`, so each distinct Gegenbauer index is run through
/// a single recurrence per point and shared by every term that needs it.
#[derive(Clone, Debug)]
pub struct Expansion {
    d: usize,
    levels: Vec<Level>,
    coefs: Vec<Complex64>,
    slots: Vec<u32>,
    azimuth: Vec<i32>,
    max_azimuth: usize,
    buffer_len: usize,
}

#[derive(Clone, Debug)]
struct Level {
    lambda_base: f64,
    // (|k_{j+1}|, offset into the level buffer, number of degrees)
    groups: Vec<(u32, usize, usize)>,
    start: usize,
}

/// Scratch space reused across evaluations.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    values: Vec<f64>,
    partial: Vec<f64>,
    powers: Vec<Complex64>,
}

impl Expansion {
    pub fn new(table: &CoeffTable) -> Self {
        let d = table.dim();
        let nl = d - 2;
        // per level: max degree needed for each |k_{j+1}|
        let mut need: Vec<Vec<i64>> = vec![Vec::new(); nl];
        let mut max_azimuth = 0usize;
        for (n, k, _) in table.iter() {
            let ks = k.as_slice();
            for j in 0..nl {
                let kj = if j == 0 { n as i64 } else { ks[j - 1] as i64 };
                let a = ks[j].unsigned_abs() as usize;
                let deg = kj - a as i64;
                if need[j].len() <= a {
                    need[j].resize(a + 1, -1);
                }
                need[j][a] = need[j][a].max(deg);
            }
            max_azimuth = max_azimuth.max(k.last().unsigned_abs() as usize);
        }
        let mut levels = Vec::with_capacity(nl);
        let mut start = 0usize;
        let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(nl);
        for (j, degs) in need.iter().enumerate() {
            let mut groups = Vec::new();
            let mut off = Vec::with_capacity(degs.len());
            let mut local = 0usize;
            for (a, &deg) in degs.iter().enumerate() {
                off.push(local);
                if deg >= 0 {
                    groups.push((a as u32, local, deg as usize + 1));
                    local += deg as usize + 1;
                }
            }
            levels.push(Level {
                lambda_base: (d - j - 2) as f64 / 2.0,
                groups,
                start,
            });
            offsets.push(off);
            start += local;
        }
        let mut coefs = Vec::with_capacity(table.len());
        let mut slots = Vec::with_capacity(table.len() * nl);
        let mut azimuth = Vec::with_capacity(table.len());
        for (n, k, c) in table.iter() {
            let a_norm = log_norm_a(d, n, k).expect("table indices are validated").exp();
            coefs.push(c * a_norm);
            let ks = k.as_slice();
            for j in 0..nl {
                let kj = if j == 0 { n as i64 } else { ks[j - 1] as i64 };
                let a = ks[j].unsigned_abs() as usize;
                let deg = (kj - a as i64) as usize;
                slots.push((levels[j].start + offsets[j][a] + deg) as u32);
            }
            azimuth.push(k.last());
        }
        Expansion {
            d,
            levels,
            coefs,
            slots,
            azimuth,
            max_azimuth,
            buffer_len: start,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_terms(&self) -> usize {
        self.coefs.len()
    }

    /// Evaluates at a Cartesian point. The point is only required to be
    /// nonzero; angles are read off ratios of partial norms.
    pub fn eval_with(&self, x: &[f64], ws: &mut Workspace) -> Complex64 {
        if self.coefs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        self.prepare(x, ws);
        let nl = self.levels.len();
        let mut sum = Complex64::new(0.0, 0.0);
        for (t, coef) in self.coefs.iter().enumerate() {
            let mut real = 1.0;
            for &slot in &self.slots[t * nl..(t + 1) * nl] {
                real *= ws.values[slot as usize];
            }
            sum += coef * self.phase(ws, t) * real;
        }
        sum
    }

    #[inline]
    fn phase(&self, ws: &Workspace, t: usize) -> Complex64 {
        let az = self.azimuth[t];
        if az >= 0 {
            ws.powers[az as usize]
        } else {
            ws.powers[(-az) as usize].conj()
        }
    }

    fn prepare(&self, x: &[f64], ws: &mut Workspace) {
        let d = self.d;
        ws.values.resize(self.buffer_len, 0.0);
        ws.partial.resize(d + 1, 0.0);
        let mut acc = 0.0;
        ws.partial[0] = 0.0;
        for l in 1..=d {
            acc += x[l - 1] * x[l - 1];
            ws.partial[l] = acc;
        }
        for (j, level) in self.levels.iter().enumerate() {
            let l = d - j - 1;
            let outer = ws.partial[l + 1];
            let (c, s) = if outer > 0.0 {
                let r = outer.sqrt();
                (x[l] / r, ws.partial[l].sqrt() / r)
            } else {
                (1.0, 0.0)
            };
            for &(a, off, len) in &level.groups {
                let buf = &mut ws.values[level.start + off..level.start + off + len];
                gegenbauer_sequence(level.lambda_base + a as f64, c, buf);
                if a > 0 {
                    let sp = s.powi(a as i32);
                    buf.iter_mut().for_each(|v| *v *= sp);
                }
            }
        }
        let e1 = if ws.partial[2] > 0.0 {
            let r = ws.partial[2].sqrt();
            Complex64::new(x[1] / r, x[0] / r)
        } else {
            Complex64::new(1.0, 0.0)
        };
        ws.powers.resize(self.max_azimuth + 1, Complex64::new(1.0, 0.0));
        ws.powers[0] = Complex64::new(1.0, 0.0);
        for m in 1..=self.max_azimuth {
            ws.powers[m] = ws.powers[m - 1] * e1;
        }
    }

    /// Writes each term `c·Y_k^{d,n}(x)` separately into `out`, in table order.
    /// With unit coefficients this evaluates a whole basis at once.
    pub fn eval_terms(&self, x: &[f64], ws: &mut Workspace, out: &mut [Complex64]) {
        if self.coefs.is_empty() {
            return;
        }
        self.prepare(x, ws);
        let nl = self.levels.len();
        for (t, (coef, o)) in self.coefs.iter().zip(out.iter_mut()).enumerate() {
            let mut real = 1.0;
            for &slot in &self.slots[t * nl..(t + 1) * nl] {
                real *= ws.values[slot as usize];
            }
            *o = coef * self.phase(ws, t) * real;
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.eval_with(x, &mut Workspace::default())
    }

    /// Evaluates at points stored flat with stride `d`, in parallel.
    pub fn eval_many(&self, points: &[f64]) -> Vec<Complex64> {
        points
            .par_chunks(self.d)
            .map_init(Workspace::default, |ws, x| self.eval_with(x, ws))
            .collect()
    }
}

/// `Σ c(n,k) Y_k^{d,n}(p)` at each spherical point.
pub fn eval_expansion(table: &CoeffTable, points: &[SphericalPoint]) -> Vec<Complex64> {
    let e = Expansion::new(table);
    let flat: Vec<f64> = points.iter().flat_map(to_cartesian).collect();
    e.eval_many(&flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::tests::random_point;
    use crate::harmonics::{eval_harmonic, index_set, to_spherical, MultiIndex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_term_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 3..6 {
            for n in 0..6 {
                for k in index_set(d, n) {
                    let mut t = CoeffTable::new(d);
                    t.insert(n, k.clone(), Complex64::new(1.0, 0.0)).unwrap();
                    let x = random_point(d, &mut rng);
                    let p = to_spherical(&x).unwrap();
                    let direct = eval_harmonic(d, n, &k, &p).unwrap();
                    let fast = eval_expansion(&t, &[p])[0];
                    assert!((direct - fast).norm() < 1e-12 * direct.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn random_table_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in [3usize, 4, 5] {
            let mut t = CoeffTable::new(d);
            let mut entries = Vec::new();
            while entries.len() < 10 {
                let n = rng.gen_range(0..7u32);
                let set = index_set(d, n);
                let k = set[rng.gen_range(0..set.len())].clone();
                if t.get(n as i64, &k) != Complex64::new(0.0, 0.0) {
                    continue;
                }
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                t.insert(n, k.clone(), c).unwrap();
                entries.push((n, k, c));
            }
            let pts: Vec<_> = (0..5)
                .map(|_| to_spherical(&random_point(d, &mut rng)).unwrap())
                .collect();
            let fast = eval_expansion(&t, &pts);
            for (p, f) in pts.iter().zip(fast) {
                let naive: Complex64 = entries
                    .iter()
                    .map(|(n, k, c)| c * eval_harmonic(d, *n, k, p).unwrap())
                    .sum();
                assert!((naive - f).norm() < 1e-13 * naive.norm().max(1.0));
            }
        }
    }

    #[test]
    fn empty_table_is_zero() {
        let t = CoeffTable::new(4);
        let p = SphericalPoint::new(vec![0.3, 1.0, 2.0]);
        assert_eq!(eval_expansion(&t, &[p])[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pole_evaluation() {
        // only k = 0 survives at e^d
        let d = 4;
        let mut t = CoeffTable::new(d);
        for k in index_set(d, 3) {
            t.insert(3, k, Complex64::new(1.0, 0.0)).unwrap();
        }
        let v = Expansion::new(&t).eval(&[0.0, 0.0, 0.0, 1.0]);
        let p = SphericalPoint::new(vec![0.0, 0.0, 0.0]);
        let want = eval_harmonic(d, 3, &MultiIndex::zero(d), &p).unwrap();
        assert!((v - want).norm() < 1e-12);
        assert!((want.re - 4.0).abs() < 1e-12); // √dim H_3^4 = 4
    }
}
