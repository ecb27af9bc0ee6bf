//! Frames over complex n-space, their operators, duals, and structural
//! predicates.
//!
//! A frame is an ordered spanning family {f_i} of N ≥ n vectors. The three
//! associated operators are the analysis operator Θ (N×n), its adjoint the
//! synthesis operator (n×N, columns f_i), and the frame operator S = Θ*Θ.
//! The inner-product convention is ⟨x, y⟩ = Σ x_k · conj(y_k), linear in the
//! first argument.

use crate::error::FrameError;
use crate::linalg::{inner, vec_norm, CMatrix, HermitianMatrix, C64};
use crate::DEFAULT_TOL;

/// Ordered finite frame: N vectors spanning complex n-space.
///
/// Value-semantic and immutable after construction. The spectral data of the
/// frame operator is computed at construction time, so degenerate inputs are
/// rejected immediately and the optimal bounds come for free afterwards.
#[derive(Debug, Clone)]
pub struct Frame {
    dim: usize,
    vectors: Vec<Vec<C64>>,
    tol: f64,
    s_vals: Vec<f64>,
    s_vecs: CMatrix,
}

impl Frame {
    /// Builds a frame with the default singular-value tolerance.
    pub fn new(dim: usize, vectors: Vec<Vec<C64>>) -> Result<Self, FrameError> {
        Self::with_tolerance(dim, vectors, DEFAULT_TOL)
    }

    /// Builds a frame, rejecting inputs whose synthesis matrix has smallest
    /// singular value at or below `tol`.
    pub fn with_tolerance(dim: usize, vectors: Vec<Vec<C64>>, tol: f64) -> Result<Self, FrameError> {
        let frame = Self::validated_shape(dim, vectors, tol)?;
        let sigma_min = frame.s_vals[0].max(0.0).sqrt();
        if sigma_min <= tol {
            return Err(FrameError::NotAFrame { sigma_min, tol });
        }
        Ok(frame)
    }

    /// Builds a frame from vectors that are known to span by construction
    /// (canonical duals, invertible images). Shape and finiteness are still
    /// checked; the singular-value gate is skipped because an absolute gate
    /// would wrongly reject validly scaled results.
    pub(crate) fn from_trusted(dim: usize, vectors: Vec<Vec<C64>>, tol: f64) -> Self {
        Self::validated_shape(dim, vectors, tol)
            .expect("trusted construction produced malformed vectors")
    }

    fn validated_shape(dim: usize, vectors: Vec<Vec<C64>>, tol: f64) -> Result<Self, FrameError> {
        if dim == 0 {
            return Err(FrameError::InvalidParameter("dimension must be at least 1".into()));
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(FrameError::DimensionMismatch {
                    index: index + 1,
                    found: v.len(),
                    expected: dim,
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(FrameError::NonFinite { index: index + 1 });
            }
        }
        if vectors.len() < dim {
            return Err(FrameError::TooFewVectors { count: vectors.len(), dim });
        }
        let op = frame_operator_of(dim, &vectors);
        let (s_vals, s_vecs) = op.eigen()?;
        Ok(Self { dim, vectors, tol, s_vals, s_vecs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frame vectors N.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= n >= 1 by construction
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The i-th frame vector, 0-based.
    pub fn vector(&self, i: usize) -> &[C64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| vec_norm(v)).collect()
    }

    /// Synthesis matrix, n×N with f_i as columns.
    pub fn synthesis(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.len(), |i, j| self.vectors[j][i])
    }

    /// Analysis matrix Θ, N×n with conj(f_i) as rows: (Θf)_i = ⟨f, f_i⟩.
    pub fn analysis(&self) -> CMatrix {
        self.synthesis().adjoint()
    }

    /// Frame operator S = Θ*Θ = Σ f_i ⟨·, f_i⟩; Hermitian positive definite.
    pub fn frame_operator(&self) -> HermitianMatrix {
        frame_operator_of(self.dim, &self.vectors)
    }

    /// Optimal frame bounds (A, B): the extreme eigenvalues of S.
    pub fn frame_bounds(&self) -> (f64, f64) {
        (self.s_vals[0], self.s_vals[self.dim - 1])
    }

    /// Canonical dual {S⁻¹ f_i}.
    pub fn canonical_dual(&self) -> Frame {
        self.apply_spectral(|x| 1.0 / x)
    }

    /// {S^(-1/2) f_i}: the Parseval frame canonically associated with F.
    pub fn inv_sqrt_frame(&self) -> Frame {
        self.apply_spectral(|x| 1.0 / x.sqrt())
    }

    fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Frame {
        // clamp at tol² (the eigenvalue scale of the σ validity gate) so
        // rounding noise near zero cannot blow up the spectral function
        let clamp = self.tol * self.tol;
        let n = self.dim;
        let mut scaled = self.s_vecs.clone();
        for (j, lambda) in self.s_vals.iter().enumerate() {
            let fx = f(lambda.max(clamp));
            for i in 0..n {
                scaled.set(i, j, scaled.get(i, j) * fx);
            }
        }
        let op = scaled.mul(&self.s_vecs.adjoint());
        let vectors = self.vectors.iter().map(|v| op.mul_vec(v)).collect();
        Frame::from_trusted(self.dim, vectors, self.tol)
    }

    /// Image {T f_i} under an arbitrary n×n operator. The result is only
    /// guaranteed to be a frame when T is invertible.
    pub fn map(&self, op: &CMatrix) -> Result<Frame, FrameError> {
        if op.rows() != self.dim || op.cols() != self.dim {
            return Err(FrameError::ShapeMismatch(format!(
                "operator is {}x{}, frame dimension is {}",
                op.rows(),
                op.cols(),
                self.dim
            )));
        }
        let vectors = self.vectors.iter().map(|v| op.mul_vec(v)).collect();
        Ok(Frame::from_trusted(self.dim, vectors, self.tol))
    }

    /// Structural classification: bounds, tightness, equal norms, angles.
    pub fn classify(&self, tol: f64) -> FrameProperties {
        let (a, b) = self.frame_bounds();
        let is_tight = (b - a).abs() <= tol;
        let is_parseval = is_tight && (a - 1.0).abs() <= tol && (b - 1.0).abs() <= tol;

        let norms = self.norms();
        let (nmin, nmax) = norms
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let is_equal_norm = nmax - nmin <= tol;
        let common_norm = is_equal_norm.then(|| norms.iter().sum::<f64>() / norms.len() as f64);

        let mut angles = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                angles.push(inner(&self.vectors[i], &self.vectors[j]).norm());
            }
        }
        let (is_equiangular, common_angle) = if !is_equal_norm {
            (false, None)
        } else if angles.is_empty() {
            (true, None)
        } else {
            let (amin, amax) = angles
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            let eq = amax - amin <= tol;
            (eq, eq.then(|| angles.iter().sum::<f64>() / angles.len() as f64))
        };

        FrameProperties {
            lower_bound: a,
            upper_bound: b,
            is_tight,
            is_parseval,
            is_equal_norm,
            is_equiangular,
            common_norm,
            common_angle,
        }
    }
}

fn frame_operator_of(dim: usize, vectors: &[Vec<C64>]) -> HermitianMatrix {
    let mut s = CMatrix::zeros(dim, dim);
    for v in vectors {
        for r in 0..dim {
            for c in 0..dim {
                let cur = s.get(r, c);
                s.set(r, c, cur + v[r] * v[c].conj());
            }
        }
    }
    // exactly Hermitian up to rounding; symmetrize to kill the drift
    HermitianMatrix::symmetrized(&s)
}

/// Structural flags of a single frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameProperties {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_equal_norm: bool,
    pub is_equiangular: bool,
    pub common_norm: Option<f64>,
    pub common_angle: Option<f64>,
}

impl FrameProperties {
    /// Short flag list, e.g. "tight parseval equal-norm equiangular".
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if self.is_tight {
            parts.push("tight");
        }
        if self.is_parseval {
            parts.push("parseval");
        }
        if self.is_equal_norm {
            parts.push("equal-norm");
        }
        if self.is_equiangular {
            parts.push("equiangular");
        }
        if parts.is_empty() {
            parts.push("generic");
        }
        parts.join(" ")
    }
}

/// A frame together with a verified dual and cached Gram data.
///
/// Duality means Θ_G*Θ_F = I, i.e. f = Σ ⟨f, f_i⟩ g_i for every f. The
/// cross-Gram caches ⟨f_i, g_j⟩; the two self-Grams are kept alongside since
/// every erasure measure reads them.
#[derive(Debug, Clone)]
pub struct DualPair {
    f: Frame,
    g: Frame,
    cross_gram: CMatrix,
    gram_f: CMatrix,
    gram_g: CMatrix,
    tol: f64,
}

impl DualPair {
    /// Verifies (F, G) as a dual pair within `tol` and caches Gram data.
    pub fn new(f: Frame, g: Frame, tol: f64) -> Result<Self, FrameError> {
        if f.dim() != g.dim() {
            return Err(FrameError::ShapeMismatch(format!(
                "frame dimensions differ: {} vs {}",
                f.dim(),
                g.dim()
            )));
        }
        if f.len() != g.len() {
            return Err(FrameError::ShapeMismatch(format!(
                "frame lengths differ: {} vs {}",
                f.len(),
                g.len()
            )));
        }
        let n = f.dim();
        let count = f.len();
        // Θ_G* Θ_F as an operator: Σ g_i ⟨·, f_i⟩
        let mut recon = CMatrix::zeros(n, n);
        for i in 0..count {
            let (gi, fi) = (g.vector(i), f.vector(i));
            for r in 0..n {
                for c in 0..n {
                    let cur = recon.get(r, c);
                    recon.set(r, c, cur + gi[r] * fi[c].conj());
                }
            }
        }
        let residual = recon.residual_from_identity();
        if residual > tol {
            return Err(FrameError::DualityViolation { residual, tol });
        }
        let trace_dev = (recon.trace() - C64::new(n as f64, 0.0)).norm();
        if trace_dev > n as f64 * tol {
            return Err(FrameError::NumericalInconsistency(format!(
                "trace identity violated: |Σ⟨g_i,f_i⟩ − n| = {trace_dev:.3e}"
            )));
        }
        let cross_gram = CMatrix::from_fn(count, count, |i, j| inner(f.vector(i), g.vector(j)));
        let gram_f = CMatrix::from_fn(count, count, |i, j| inner(f.vector(i), f.vector(j)));
        let gram_g = CMatrix::from_fn(count, count, |i, j| inner(g.vector(i), g.vector(j)));
        Ok(Self { f, g, cross_gram, gram_f, gram_g, tol })
    }

    /// (F, S⁻¹F): a frame with its canonical dual.
    pub fn canonical(f: Frame, tol: f64) -> Result<Self, FrameError> {
        let g = f.canonical_dual();
        Self::new(f, g, tol)
    }

    pub fn f(&self) -> &Frame {
        &self.f
    }

    pub fn g(&self) -> &Frame {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// Number of vectors N in each frame.
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Cross-Gram with entries ⟨f_i, g_j⟩ (0-based indexing).
    pub fn cross_gram(&self) -> &CMatrix {
        &self.cross_gram
    }

    /// Gram of F: entries ⟨f_i, f_j⟩.
    pub fn gram_f(&self) -> &CMatrix {
        &self.gram_f
    }

    /// Gram of G: entries ⟨g_i, g_j⟩.
    pub fn gram_g(&self) -> &CMatrix {
        &self.gram_g
    }

    /// 1-uniformity and 2-uniformity flags with the shared constants.
    ///
    /// 1-uniform: every ⟨f_i, g_i⟩ equals n/N (the only value the trace
    /// identity permits). 2-uniform: additionally all off-diagonal products
    /// ⟨f_i, g_j⟩⟨f_j, g_i⟩ share one complex value.
    pub fn classify(&self, tol: f64) -> PairUniformity {
        let n = self.dim() as f64;
        let count = self.len();
        let target = n / count as f64;
        let mut diag_dev = 0.0f64;
        for i in 0..count {
            diag_dev = diag_dev.max((self.cross_gram.get(i, i) - C64::new(target, 0.0)).norm());
        }
        let one_uniform = diag_dev <= tol;

        let mut products = Vec::new();
        for i in 0..count {
            for j in (i + 1)..count {
                products.push(self.cross_gram.get(i, j) * self.cross_gram.get(j, i));
            }
        }
        let (two_uniform, offdiag) = if !one_uniform {
            (false, None)
        } else if products.is_empty() {
            (true, None)
        } else {
            let mean = products.iter().sum::<C64>() / products.len() as f64;
            let dev = products.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
            let flag = dev <= tol;
            (flag, flag.then_some(mean))
        };

        PairUniformity {
            one_uniform,
            two_uniform,
            diagonal_constant: one_uniform.then_some(target),
            offdiagonal_constant: offdiag,
        }
    }
}

/// Result of [`DualPair::classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairUniformity {
    pub one_uniform: bool,
    pub two_uniform: bool,
    /// The 1-uniform constant c' = n/N, when 1-uniform.
    pub diagonal_constant: Option<f64>,
    /// The shared off-diagonal product c'', when 2-uniform and N > 1.
    pub offdiagonal_constant: Option<C64>,
}
