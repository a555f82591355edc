use crate::error::{Error, Result};

/// A `d × d` rotation matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    dim: usize,
    data: Vec<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Rotation { dim, data }
    }

    /// Builds a rotation from row-major entries, checking orthogonality and
    /// orientation to `tol`.
    pub fn from_row_major(dim: usize, data: Vec<f64>, tol: f64) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Parameter(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let r = Rotation { dim, data };
        let (orth, det) = (r.orthogonality_defect(), r.determinant());
        if orth > tol || (det - 1.0).abs() > tol {
            return Err(Error::Domain(format!(
                "matrix is not a rotation: orthogonality defect {orth:e}, determinant {det}"
            )));
        }
        Ok(r)
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Rotation { dim, data }
    }

    /// Planar rotation by `angle` in the coordinate plane `(i, i+1)` (0-based),
    /// mapping `e_{i+1} ↦ cos·e_{i+1} + sin·e_i`.
    pub fn givens(dim: usize, i: usize, angle: f64) -> Self {
        let mut r = Rotation::identity(dim);
        let (s, c) = angle.sin_cos();
        r.data[i * dim + i] = c;
        r.data[i * dim + i + 1] = s;
        r.data[(i + 1) * dim + i] = -s;
        r.data[(i + 1) * dim + i + 1] = c;
        r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    /// `g x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let row = &self.data[i * d..(i + 1) * d];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `g⁻¹ x = gᵀ x`
    pub fn apply_inverse(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        out[..d].fill(0.0);
        for (i, &xi) in x.iter().enumerate().take(d) {
            let row = &self.data[i * d..(i + 1) * d];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * xi;
            }
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        assert_eq!(self.dim, other.dim, "rotation dimensions differ");
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Rotation { dim: d, data }
    }

    pub fn transpose(&self) -> Rotation {
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j];
            }
        }
        Rotation { dim: d, data }
    }

    /// Embeds a rotation of dimension `dim - 1` as the upper-left block of a
    /// `dim`-dimensional one, fixing the last basis vector.
    pub fn embed(&self) -> Rotation {
        let d = self.dim;
        let mut r = Rotation::identity(d + 1);
        for i in 0..d {
            for j in 0..d {
                r.data[i * (d + 1) + j] = self.data[i * d + j];
            }
        }
        r
    }

    /// `max |g gᵀ - I|`
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| self.get(i, k) * self.get(j, k)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> f64 {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&x, &y| a[x * d + col].abs().total_cmp(&a[y * d + col].abs()))
                .unwrap();
            if a[pivot * d + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..d {
                    a.swap(col * d + j, pivot * d + j);
                }
                det = -det;
            }
            let p = a[col * d + col];
            det *= p;
            for row in col + 1..d {
                let f = a[row * d + col] / p;
                for j in col..d {
                    a[row * d + j] -= f * a[col * d + j];
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn givens_maps_next_axis() {
        let g = Rotation::givens(4, 1, 0.7);
        let mut out = [0.0; 4];
        g.apply(&[0.0, 0.0, 1.0, 0.0], &mut out);
        assert!((out[1] - 0.7f64.sin()).abs() < 1e-15);
        assert!((out[2] - 0.7f64.cos()).abs() < 1e-15);
        assert!((g.determinant() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_undoes_apply() {
        let g = Rotation::givens(3, 0, 0.3).compose(&Rotation::givens(3, 1, 1.1));
        let x = [0.2, -0.5, 0.8];
        let mut y = [0.0; 3];
        let mut z = [0.0; 3];
        g.apply(&x, &mut y);
        g.apply_inverse(&y, &mut z);
        for i in 0..3 {
            assert!((z[i] - x[i]).abs() < 1e-15);
        }
        assert!(g.orthogonality_defect() < 1e-15);
    }

    #[test]
    fn rejects_reflections() {
        let data = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0];
        assert!(Rotation::from_row_major(3, data, 1e-12).is_err());
    }
}
