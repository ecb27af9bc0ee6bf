//! Dense complex linear algebra sized for this crate's workloads.
//!
//! Matrices here are a few dozen rows at most, so the solvers favor
//! robustness over speed: a cyclic Jacobi iteration for Hermitian
//! eigenproblems and a Hessenberg + shifted-QR iteration for general
//! complex spectra.

use num_complex::Complex;

use crate::error::FrameError;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Inner product ⟨x, y⟩ = Σ x_k · conj(y_k), linear in the first argument.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Entrywise Frobenius norm sqrt(Σ |a_ij|²).
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max_ij |a_ij − b_ij|.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max_ij |a_ij − δ_ij|; the duality and unitarity residual.
    pub fn residual_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((self.get(i, j) - target).norm());
            }
        }
        worst
    }

    /// max_ij |a_ij − conj(a_ji)| over a square matrix.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<CMatrix, FrameError> {
        if !self.is_square() {
            return Err(FrameError::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a.get(r, col).norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pivot_mag < 1e-300 {
                return Err(FrameError::NumericalInconsistency(
                    "matrix is singular to working precision".into(),
                ));
            }
            if pivot_row != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(pivot_row, j));
                    a.set(col, j, y);
                    a.set(pivot_row, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(pivot_row, j));
                    inv.set(col, j, y);
                    inv.set(pivot_row, j, x);
                }
            }
            let piv = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / piv);
                inv.set(col, j, inv.get(col, j) / piv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - factor * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - factor * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }
}

impl std::fmt::Display for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let entries: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.9e}{:+.9e}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", entries.join(", "))?;
        }
        Ok(())
    }
}

/// Square matrix validated (or forced) to be Hermitian, with spectral helpers.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Wraps `mat` after checking Hermitian symmetry entrywise within `tol`.
    pub fn new(mat: CMatrix, tol: f64) -> Result<Self, FrameError> {
        if !mat.is_square() {
            return Err(FrameError::ShapeMismatch("Hermitian matrix must be square".into()));
        }
        let resid = mat.hermitian_residual();
        if resid > tol {
            return Err(FrameError::NumericalInconsistency(format!(
                "Hermitian symmetry violated: residual {resid:.3e} > {tol:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Wraps (M + M*)/2, discarding any anti-Hermitian part.
    pub fn symmetrized(mat: &CMatrix) -> Self {
        let herm = mat.add(&mat.adjoint()).scale(C64::new(0.5, 0.0));
        Self { mat: herm }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, FrameError> {
        Ok(self.eigen()?.0)
    }

    /// Full spectral decomposition: ascending eigenvalues and a unitary
    /// matrix whose columns are the matching eigenvectors.
    pub fn eigen(&self) -> Result<(Vec<f64>, CMatrix), FrameError> {
        jacobi_hermitian_eigen(&self.mat)
    }

    /// V f(Λ) V*, the spectral function calculus.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Result<CMatrix, FrameError> {
        let (vals, vecs) = self.eigen()?;
        let n = self.dim();
        let mut scaled = vecs.clone();
        for (j, lambda) in vals.iter().enumerate() {
            let fx = f(*lambda);
            for i in 0..n {
                scaled.set(i, j, scaled.get(i, j) * fx);
            }
        }
        Ok(scaled.mul(&vecs.adjoint()))
    }
}

/// Cyclic Jacobi iteration for a Hermitian matrix; returns ascending
/// eigenvalues and the accumulated unitary of eigenvectors.
fn jacobi_hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix), FrameError> {
    let n = a.rows();
    let mut h = a.clone();
    let mut v = CMatrix::identity(n);
    if n <= 1 {
        let vals = (0..n).map(|i| h.get(i, i).re).collect();
        return Ok((vals, v));
    }
    let scale = h.frobenius().max(1e-300);
    let target = scale * 1e-15;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let off: f64 = {
            let mut acc = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    acc += h.get(i, j).norm_sqr();
                }
            }
            acc.sqrt()
        };
        if off <= target {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| h.get(i, i).re.total_cmp(&h.get(j, j).re));
            let vals: Vec<f64> = order.iter().map(|&i| h.get(i, i).re).collect();
            let vecs = CMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = h.get(p, q);
                let beta = apq.norm();
                if beta <= target / (n * n) as f64 {
                    continue;
                }
                let phase = apq / beta;
                let app = h.get(p, p).re;
                let aqq = h.get(q, q).re;
                let tau = (aqq - app) / (2.0 * beta);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // unitary U: column block [[c, s], [-s*conj(phase), c*conj(phase)]]
                let u_qp = -s * phase.conj();
                let u_qq = c * phase.conj();
                // right multiply H and V by U on columns p,q
                for r in 0..n {
                    let hp = h.get(r, p);
                    let hq = h.get(r, q);
                    h.set(r, p, hp * c + hq * u_qp);
                    h.set(r, q, hp * s + hq * u_qq);
                    let vp = v.get(r, p);
                    let vq = v.get(r, q);
                    v.set(r, p, vp * c + vq * u_qp);
                    v.set(r, q, vp * s + vq * u_qq);
                }
                // left multiply H by U* on rows p,q
                for cidx in 0..n {
                    let hp = h.get(p, cidx);
                    let hq = h.get(q, cidx);
                    h.set(p, cidx, hp * c + hq * u_qp.conj());
                    h.set(q, cidx, hp * s + hq * u_qq.conj());
                }
                // clean rounding drift: exact zeros off the pivot, real diagonal
                h.set(p, q, C64::new(0.0, 0.0));
                h.set(q, p, C64::new(0.0, 0.0));
                h.set(p, p, C64::new(h.get(p, p).re, 0.0));
                h.set(q, q, C64::new(h.get(q, q).re, 0.0));
            }
        }
    }
    Err(FrameError::NonConvergence(format!(
        "Jacobi iteration exceeded {max_sweeps} sweeps on\n{a}"
    )))
}

/// Eigenvalues of the 2×2 matrix [[a, b], [c, d]].
fn eigen_2x2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let det = a * d - b * c;
    let mut disc = (tr * tr - 4.0 * det).sqrt();
    // avoid cancellation: align the root with the trace
    if (tr.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let l1 = (tr + disc) * 0.5;
    if l1.norm() > 0.0 {
        (l1, det / l1)
    } else {
        (l1, (tr - disc) * 0.5)
    }
}

/// Eigenvalues of a general square complex matrix via Hessenberg reduction
/// followed by shifted QR with deflation. `max_iters` caps the total number
/// of QR steps; exceeding it reports non-convergence with a matrix dump.
pub fn general_eigenvalues(a: &CMatrix, max_iters: usize) -> Result<Vec<C64>, FrameError> {
    if !a.is_square() {
        return Err(FrameError::ShapeMismatch("eigenvalues of a non-square matrix".into()));
    }
    let n = a.rows();
    match n {
        0 => return Ok(vec![]),
        1 => return Ok(vec![a.get(0, 0)]),
        2 => {
            let (l1, l2) = eigen_2x2(a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
            return Ok(vec![l1, l2]);
        }
        _ => {}
    }

    let mut h = hessenberg(a);
    let zero = C64::new(0.0, 0.0);
    let mut hi = n - 1;
    let mut total_iters = 0usize;
    let mut since_deflation = 0usize;
    loop {
        // locate the active block [lo, hi] by scanning for negligible subdiagonals
        let mut lo = hi;
        while lo > 0 {
            let s = h.get(lo - 1, lo - 1).norm() + h.get(lo, lo).norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h.get(lo, lo - 1).norm() <= f64::EPSILON * s {
                h.set(lo, lo - 1, zero);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            since_deflation = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eigen_2x2(
                h.get(lo, lo),
                h.get(lo, hi),
                h.get(hi, lo),
                h.get(hi, hi),
            );
            h.set(lo, lo, l1);
            h.set(hi, hi, l2);
            h.set(hi, lo, zero);
            since_deflation = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        total_iters += 1;
        since_deflation += 1;
        if total_iters > max_iters {
            return Err(FrameError::NonConvergence(format!(
                "QR iteration exceeded {max_iters} steps on\n{a}"
            )));
        }
        let mu = if since_deflation % 12 == 0 {
            // exceptional shift to break rare cycling
            h.get(hi, hi) + C64::new(0.75 * h.get(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok((0..n).map(|i| h.get(i, i)).collect())
}

/// Householder reduction to upper Hessenberg form.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<C64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        let xnorm = vec_norm(&v);
        if xnorm <= 1e-300 {
            continue;
        }
        let x0 = v[0];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * xnorm
        } else {
            C64::new(-xnorm, 0.0)
        };
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // left: rows k+1.. of every column
        for j in 0..n {
            let w: C64 = v
                .iter()
                .enumerate()
                .map(|(l, vl)| vl.conj() * h.get(k + 1 + l, j))
                .sum();
            let w = w * beta;
            for (l, vl) in v.iter().enumerate() {
                let cur = h.get(k + 1 + l, j);
                h.set(k + 1 + l, j, cur - w * vl);
            }
        }
        // right: columns k+1.. of every row
        for i in 0..n {
            let w: C64 = v
                .iter()
                .enumerate()
                .map(|(l, vl)| h.get(i, k + 1 + l) * vl)
                .sum();
            let w = w * beta;
            for (l, vl) in v.iter().enumerate() {
                let cur = h.get(i, k + 1 + l);
                h.set(i, k + 1 + l, cur - w * vl.conj());
            }
        }
        for i in k + 2..n {
            h.set(i, k, C64::new(0.0, 0.0));
        }
    }
    h
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> C64 {
    let a = h.get(hi - 1, hi - 1);
    let b = h.get(hi - 1, hi);
    let c = h.get(hi, hi - 1);
    let d = h.get(hi, hi);
    let (l1, l2) = eigen_2x2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the Hessenberg block [lo, hi].
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: C64) {
    for i in lo..=hi {
        let v = h.get(i, i) - mu;
        h.set(i, i, v);
    }
    let mut rotations: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h.get(k, k);
        let y = h.get(k + 1, k);
        let (c, s) = givens(x, y);
        rotations.push((c, s));
        for col in k..=hi {
            let hk = h.get(k, col);
            let hk1 = h.get(k + 1, col);
            h.set(k, col, hk * c + hk1 * s);
            h.set(k + 1, col, -hk * s.conj() + hk1 * c);
        }
    }
    for (idx, (c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        for row in lo..=(k + 1) {
            let hk = h.get(row, k);
            let hk1 = h.get(row, k + 1);
            h.set(row, k, hk * *c + hk1 * s.conj());
            h.set(row, k + 1, -hk * *s + hk1 * *c);
        }
    }
    for i in lo..=hi {
        let v = h.get(i, i) + mu;
        h.set(i, i, v);
    }
}

/// Givens pair (c real, s complex) with [[c, s], [-conj(s), c]]·(x, y)ᵀ = (r, 0)ᵀ.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r <= 1e-300 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let xm = x.norm();
    if xm <= 1e-300 {
        return (0.0, y.conj() / y.norm());
    }
    let c = xm / r;
    let s = (x / xm) * y.conj() / r;
    (c, s)
}
