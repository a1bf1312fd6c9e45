//! Small dense complex linear algebra: 2×2 matrices, LU determinants and a
//! one-sided Jacobi SVD. Everything here is sized for vertex matrices
//! (≤ 128×128 at desk scale), so simplicity beats asymptotics.

use num_complex::Complex64;

pub type C64 = Complex64;

/// 2×2 complex matrix, row major: [[a, b], [c, d]].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Inverse assuming det = 1; exact for transfer matrices.
    pub fn inverse_unimodular(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn frobenius(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Frobenius distance to the identity.
    pub fn identity_defect(&self) -> f64 {
        let one = C64::new(1.0, 0.0);
        ((self.a - one).norm_sqr()
            + self.b.norm_sqr()
            + self.c.norm_sqr()
            + (self.d - one).norm_sqr())
        .sqrt()
    }
}

/// Dense square complex matrix, row major.
#[derive(Clone, Debug)]
pub struct CMat {
    n: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.n)
    }

    /// self - z·I
    pub fn sub_scaled_identity(&self, z: C64) -> CMat {
        let mut m = self.clone();
        for i in 0..self.n {
            let v = m.get(i, i) - z;
            m.set(i, i, v);
        }
        m
    }

    /// ‖self·self* − I‖_F, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(i, k) * self.get(j, k).conj();
                }
                if i == j {
                    acc -= C64::new(1.0, 0.0);
                }
                sum += acc.norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn frobenius_distance_to_identity(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let mut v = self.get(i, j);
                if i == j {
                    v -= C64::new(1.0, 0.0);
                }
                sum += v.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// Determinant via LU with partial pivoting. Destroys nothing; works on a copy.
    pub fn det_lu(&self) -> C64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            // pivot: largest modulus in this column at or below the diagonal
            let mut piv = col;
            let mut best = a[col * n + col].norm_sqr();
            for r in (col + 1)..n {
                let m = a[r * n + col].norm_sqr();
                if m > best {
                    best = m;
                    piv = r;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in (col + 1)..n {
                let f = a[r * n + col] / d;
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for j in (col + 1)..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }
}

/// Result of a one-sided Jacobi SVD: singular values descending, with the
/// right singular vectors as columns of `v` in matching order.
pub struct Svd {
    pub sigma: Vec<f64>,
    pub v: CMat,
}

/// One-sided Jacobi SVD of a square complex matrix. Columns are rotated
/// until pairwise orthogonal (off-diagonal Gram entries below `tol`
/// relative); the column norms are then the singular values.
pub fn svd_one_sided_jacobi(m: &CMat, tol: f64) -> Svd {
    let n = m.dim();
    // column-major working copies
    let mut a: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();

    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut converged = true;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = C64::new(0.0, 0.0);
                for (up, uq) in a[p].iter().zip(a[q].iter()) {
                    app += up.norm_sqr();
                    aqq += uq.norm_sqr();
                    apq += up.conj() * uq;
                }
                let scale = (app * aqq).sqrt();
                if scale == 0.0 || apq.norm() <= tol * scale {
                    continue;
                }
                converged = false;
                // phase-align column q so the Gram off-diagonal becomes real
                let phase = apq / apq.norm();
                let g = apq.norm();
                let zeta = (aqq - app) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..n {
                    let up = a[p][i];
                    let uq = phase.conj() * a[q][i];
                    a[p][i] = cs * up - sn * uq;
                    a[q][i] = sn * up + cs * uq;
                    let vp = v[p][i];
                    let vq = phase.conj() * v[q][i];
                    v[p][i] = cs * vp - sn * vq;
                    v[q][i] = sn * vp + cs * vq;
                }
            }
        }
        if converged {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| a[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut vm = CMat::zeros(n);
    let mut sigma = Vec::with_capacity(n);
    for (col, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        for (i, &val) in v[j].iter().enumerate() {
            vm.set(i, col, val);
        }
    }
    Svd { sigma, v: vm }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn mat2_mul_det() {
        let m = Mat2::new(c(1.0, 0.0), c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.0));
        let id = m.mul(&m.inverse_unimodular());
        // inverse_unimodular is exact only for det 1; here det = 3 - (2+i)(-i) = 3 - (1 - 2i)... just check det algebra
        assert!((m.det() - (c(1.0, 0.0) * c(3.0, 0.0) - c(2.0, 1.0) * c(0.0, -1.0))).norm() < 1e-15);
        let _ = id;
    }

    #[test]
    fn lu_det_matches_2x2() {
        let mut m = CMat::zeros(2);
        m.set(0, 0, c(1.0, 2.0));
        m.set(0, 1, c(-0.5, 0.3));
        m.set(1, 0, c(2.0, -1.0));
        m.set(1, 1, c(0.7, 0.7));
        let direct = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
        assert!((m.det_lu() - direct).norm() < 1e-14);
    }

    #[test]
    fn jacobi_svd_diagonal() {
        let mut m = CMat::zeros(3);
        m.set(0, 0, c(3.0, 0.0));
        m.set(1, 1, c(0.0, -2.0));
        m.set(2, 2, c(1e-9, 0.0));
        let svd = svd_one_sided_jacobi(&m, 1e-12);
        assert!((svd.sigma[0] - 3.0).abs() < 1e-12);
        assert!((svd.sigma[1] - 2.0).abs() < 1e-12);
        assert!((svd.sigma[2] - 1e-9).abs() < 1e-15);
    }

    #[test]
    fn jacobi_svd_null_vector() {
        // rank-1 matrix: second singular value 0, null direction recovered
        let mut m = CMat::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(2.0, 0.0));
        m.set(1, 0, c(0.5, 0.0));
        m.set(1, 1, c(1.0, 0.0));
        let svd = svd_one_sided_jacobi(&m, 1e-14);
        assert!(svd.sigma[1] < 1e-12);
        let x = [svd.v.get(0, 1), svd.v.get(1, 1)];
        let r0 = m.get(0, 0) * x[0] + m.get(0, 1) * x[1];
        let r1 = m.get(1, 0) * x[0] + m.get(1, 1) * x[1];
        assert!(r0.norm() < 1e-12 && r1.norm() < 1e-12);
    }

    #[test]
    fn unitarity_defect_of_identity() {
        assert!(CMat::identity(5).unitarity_defect() < 1e-15);
    }
}
