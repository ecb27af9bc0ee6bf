//! Erasure sets, the reconstruction error operator, and the three worst-case
//! error measures.
//!
//! Losing the coefficients indexed by Λ during transmission leaves the
//! reconstruction defect E_Λ f = Σ_{i∈Λ} ⟨f, f_i⟩ g_i. Its nonzero spectrum
//! is carried by the reduced m×m matrix M with M[a][b] = ⟨g_{i_b}, f_{i_a}⟩,
//! which is what the Frobenius and spectral measures work on; the numerical
//! radius is not spectral, so it always evaluates the full n×n operator.

use crate::error::FrameError;
use crate::frame::DualPair;
use crate::linalg::{general_eigenvalues, CMatrix, HermitianMatrix, C64};
use crate::optimality::theoretical_optimum;

/// Default bound on C(N, m) before worst-case enumeration refuses to run.
pub const DEFAULT_ENUM_CAP: u128 = 2_000_000;

/// Absolute tolerance for collecting tied argmax erasure sets.
pub const ARGMAX_TOL: f64 = 1e-9;

/// C(n, k), saturating at u128::MAX.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = match acc.checked_mul((n - k + i) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Sorted index subset Λ ⊆ {1..N}; indices are 1-based as in the reports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasureSet {
    indices: Vec<usize>,
    total: usize,
}

impl ErasureSet {
    pub fn new(indices: Vec<usize>, total: usize) -> Result<Self, FrameError> {
        if indices.is_empty() || indices.len() > total {
            return Err(FrameError::InvalidErasure(format!(
                "need 1 <= m <= N, got m = {}, N = {}",
                indices.len(),
                total
            )));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(FrameError::InvalidErasure(
                    "indices must be strictly increasing".into(),
                ));
            }
        }
        if indices[0] < 1 || *indices.last().unwrap() > total {
            return Err(FrameError::InvalidErasure(format!(
                "indices must lie in 1..={total}"
            )));
        }
        Ok(Self { indices, total })
    }

    /// 1-based erased indices, strictly increasing.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of erased coefficients m.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// 0-based positions for matrix indexing.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|&i| i - 1)
    }
}

impl std::fmt::Display for ErasureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Lexicographic stream of all C(N, m) erasure sets.
pub fn enumerate_erasures(total: usize, m: usize) -> Result<ErasureEnumerator, FrameError> {
    if m == 0 || m > total {
        return Err(FrameError::InvalidErasure(format!(
            "need 1 <= m <= N, got m = {m}, N = {total}"
        )));
    }
    Ok(ErasureEnumerator { next: Some((1..=m).collect()), total, m })
}

pub struct ErasureEnumerator {
    next: Option<Vec<usize>>,
    total: usize,
    m: usize,
}

impl Iterator for ErasureEnumerator {
    type Item = ErasureSet;

    fn next(&mut self) -> Option<ErasureSet> {
        let current = self.next.take()?;
        let out = ErasureSet { indices: current.clone(), total: self.total };
        // advance: rightmost index that can still move up
        let mut idx = current;
        let m = self.m;
        let mut k = m;
        loop {
            if k == 0 {
                return Some(out); // exhausted
            }
            k -= 1;
            if idx[k] < self.total - (m - 1 - k) {
                idx[k] += 1;
                for j in k + 1..m {
                    idx[j] = idx[j - 1] + 1;
                }
                self.next = Some(idx);
                return Some(out);
            }
        }
    }
}

/// One of the three error measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Frobenius,
    Spectral,
    Numerical,
}

impl MeasureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasureKind::Frobenius => "frobenius",
            MeasureKind::Spectral => "spectral",
            MeasureKind::Numerical => "numerical",
        }
    }
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, FrameError> {
        match s {
            "frobenius" => Ok(MeasureKind::Frobenius),
            "spectral" => Ok(MeasureKind::Spectral),
            "numerical" => Ok(MeasureKind::Numerical),
            other => Err(FrameError::InvalidParameter(format!("unknown measure '{other}'"))),
        }
    }
}

/// Square root branch with nonnegative real part; on the branch cut
/// (negative real axis, where the real part is zero) the root with
/// nonnegative imaginary part is returned, making outputs deterministic.
pub fn complex_sqrt_branch(z: C64) -> C64 {
    let w = z.sqrt();
    if w.re == 0.0 {
        C64::new(0.0, w.im.abs())
    } else {
        w
    }
}

/// The error operator E_Λ of a dual pair, held in reduced m×m form.
pub struct ErrorOperator<'a> {
    pair: &'a DualPair,
    set: ErasureSet,
    reduced: CMatrix,
}

impl<'a> ErrorOperator<'a> {
    pub fn new(pair: &'a DualPair, set: ErasureSet) -> Result<Self, FrameError> {
        if set.total() != pair.len() {
            return Err(FrameError::InvalidErasure(format!(
                "erasure set is over {} indices, pair has {}",
                set.total(),
                pair.len()
            )));
        }
        let positions: Vec<usize> = set.positions().collect();
        let cg = pair.cross_gram();
        // M[a][b] = ⟨g_{i_b}, f_{i_a}⟩ = conj(⟨f_{i_a}, g_{i_b}⟩)
        let reduced = CMatrix::from_fn(positions.len(), positions.len(), |a, b| {
            cg.get(positions[a], positions[b]).conj()
        });
        Ok(Self { pair, set, reduced })
    }

    pub fn erasure(&self) -> &ErasureSet {
        &self.set
    }

    pub fn pair(&self) -> &DualPair {
        self.pair
    }

    /// Reduced m×m carrier of the nonzero spectrum.
    pub fn reduced(&self) -> &CMatrix {
        &self.reduced
    }

    /// Materializes the full n×n operator Σ_{i∈Λ} g_i ⟨·, f_i⟩.
    pub fn full(&self) -> CMatrix {
        let n = self.pair.dim();
        let mut out = CMatrix::zeros(n, n);
        for p in self.set.positions() {
            let gi = self.pair.g().vector(p);
            let fi = self.pair.f().vector(p);
            for r in 0..n {
                for c in 0..n {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + gi[r] * fi[c].conj());
                }
            }
        }
        out
    }

    /// ‖E_Λ‖_F via the Gram closed form
    /// sqrt(Σ_{j,k∈Λ} ⟨g_{i_j}, g_{i_k}⟩⟨f_{i_k}, f_{i_j}⟩).
    pub fn frobenius_norm(&self) -> Result<f64, FrameError> {
        let positions: Vec<usize> = self.set.positions().collect();
        let gf = self.pair.gram_f();
        let gg = self.pair.gram_g();
        let mut sum = C64::new(0.0, 0.0);
        for &j in &positions {
            for &k in &positions {
                sum += gg.get(j, k) * gf.get(k, j);
            }
        }
        let tol = self.pair.tolerance();
        if sum.re < -tol || sum.im.abs() > tol {
            return Err(FrameError::NumericalInconsistency(format!(
                "Frobenius square came out as {sum} for Λ = {}",
                self.set
            )));
        }
        Ok(sum.re.max(0.0).sqrt())
    }

    /// ρ(E_Λ): the largest eigenvalue modulus of the reduced matrix.
    pub fn spectral_radius(&self) -> Result<f64, FrameError> {
        let m = self.set.len();
        if m == 1 {
            return Ok(self.reduced.get(0, 0).norm());
        }
        let eigs = general_eigenvalues(&self.reduced, 200 * m)?;
        Ok(eigs.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// ω(E_Λ) = sup |⟨E_Λ f, f⟩| over unit vectors.
    ///
    /// For one erasure E_Λ has rank one and ω = (|tr E| + ‖E‖)/2 in closed
    /// form; otherwise the θ-sweep runs on the full operator (the numerical
    /// radius of the reduced matrix would be a different quantity).
    pub fn numerical_radius(&self) -> Result<f64, FrameError> {
        if self.set.len() == 1 {
            let p = self.set.positions().next().unwrap();
            let trace = self.pair.cross_gram().get(p, p).norm();
            let f_norm = self.pair.gram_f().get(p, p).re.max(0.0).sqrt();
            let g_norm = self.pair.gram_g().get(p, p).re.max(0.0).sqrt();
            return Ok(0.5 * (trace + f_norm * g_norm));
        }
        numerical_radius_sweep(&self.full())
    }

    pub fn measure(&self, kind: MeasureKind) -> Result<f64, FrameError> {
        match kind {
            MeasureKind::Frobenius => self.frobenius_norm(),
            MeasureKind::Spectral => self.spectral_radius(),
            MeasureKind::Numerical => self.numerical_radius(),
        }
    }
}

/// Numerical radius of a square matrix: max over θ of the top eigenvalue of
/// the Hermitian part of e^{iθ}M, located on a 1024-point grid and sharpened
/// by golden-section refinement around the best grid point.
pub fn numerical_radius_sweep(mat: &CMatrix) -> Result<f64, FrameError> {
    if !mat.is_square() {
        return Err(FrameError::ShapeMismatch("numerical radius of a non-square matrix".into()));
    }
    let adj = mat.adjoint();
    let top = |theta: f64| -> Result<f64, FrameError> {
        let phase = C64::from_polar(1.0, theta);
        let h = mat.scale(phase * 0.5).add(&adj.scale(phase.conj() * 0.5));
        let vals = HermitianMatrix::symmetrized(&h).eigenvalues()?;
        Ok(vals[vals.len() - 1])
    };

    const GRID: usize = 1024;
    let step = std::f64::consts::TAU / GRID as f64;
    let mut values = [0.0f64; GRID];
    for (k, slot) in values.iter_mut().enumerate() {
        *slot = top(k as f64 * step)?;
    }
    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // refine the strongest grid peaks (cyclic local maxima) by golden
    // section to bracket width 1e-12; several peaks can compete, so the
    // single best grid point is not enough
    let mut peaks: Vec<(f64, usize)> = (0..GRID)
        .filter(|&k| {
            let prev = values[(k + GRID - 1) % GRID];
            let next = values[(k + 1) % GRID];
            values[k] >= prev && values[k] >= next
        })
        .map(|k| (values[k], k))
        .collect();
    peaks.sort_by(|x, y| y.0.total_cmp(&x.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for &(_, k) in peaks.iter().take(4) {
        let center = k as f64 * step;
        let (mut a, mut b) = (center - step, center + step);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let mut fc = top(c)?;
        let mut fd = top(d)?;
        while b - a > 1e-12 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = top(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = top(d)?;
            }
        }
        best = best.max(fc).max(fd);
    }
    Ok(best)
}

/// Worst-case report for one measure at one erasure length.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub measure: MeasureKind,
    pub m: usize,
    pub worst_value: f64,
    /// Every Λ attaining the maximum within [`ARGMAX_TOL`], lexicographic.
    pub argmax_sets: Vec<ErasureSet>,
    /// All per-Λ values in enumeration order, when requested.
    pub per_set_values: Option<Vec<(ErasureSet, f64)>>,
    /// Closed-form optimum over all dual pairs, when the theory defines one.
    pub theoretical_optimum: Option<f64>,
}

/// Exact maximum of `kind` over all C(N, m) erasure sets, with the default
/// enumeration cap.
pub fn worst_case(
    pair: &DualPair,
    m: usize,
    kind: MeasureKind,
    keep_all: bool,
) -> Result<MeasureReport, FrameError> {
    worst_case_with_cap(pair, m, kind, keep_all, DEFAULT_ENUM_CAP)
}

/// Exact maximum of `kind` over all C(N, m) erasure sets; refuses when the
/// enumeration would exceed `cap`.
pub fn worst_case_with_cap(
    pair: &DualPair,
    m: usize,
    kind: MeasureKind,
    keep_all: bool,
    cap: u128,
) -> Result<MeasureReport, FrameError> {
    let total = pair.len();
    if m == 0 || m > total {
        return Err(FrameError::InvalidErasure(format!(
            "need 1 <= m <= N, got m = {m}, N = {total}"
        )));
    }
    let count = binomial(total, m);
    if count > cap {
        return Err(FrameError::EnumerationCapExceeded { count, cap });
    }

    let mut worst = f64::NEG_INFINITY;
    let mut candidates: Vec<(ErasureSet, f64)> = Vec::new();
    let mut all: Vec<(ErasureSet, f64)> = Vec::new();
    for set in enumerate_erasures(total, m)? {
        let op = ErrorOperator::new(pair, set.clone())?;
        let value = op.measure(kind)?;
        if value > worst {
            worst = value;
        }
        if value >= worst - ARGMAX_TOL {
            candidates.push((set.clone(), value));
        }
        if keep_all {
            all.push((set, value));
        }
    }
    let argmax_sets = candidates
        .into_iter()
        .filter(|(_, v)| *v >= worst - ARGMAX_TOL)
        .map(|(s, _)| s)
        .collect();

    let theoretical = theoretical_optimum(kind, total, pair.dim(), m).ok().flatten();

    Ok(MeasureReport {
        measure: kind,
        m,
        worst_value: worst,
        argmax_sets,
        per_set_values: keep_all.then_some(all),
        theoretical_optimum: theoretical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use proptest::prelude::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn three_vector_pair() -> DualPair {
        let f = Frame::new(
            2,
            vec![
                vec![re(1.0), re(0.0)],
                vec![re(0.0), re(1.0)],
                vec![re(1.0), re(1.0)],
            ],
        )
        .unwrap();
        DualPair::canonical(f, 1e-9).unwrap()
    }

    fn onb_pair(n: usize) -> DualPair {
        let vectors = (0..n)
            .map(|i| (0..n).map(|j| re(if i == j { 1.0 } else { 0.0 })).collect())
            .collect();
        DualPair::canonical(Frame::new(n, vectors).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn enumeration_matches_examples() {
        let sets: Vec<_> = enumerate_erasures(3, 1).unwrap().collect();
        assert_eq!(sets.len(), 3);
        assert_eq!(sets[0].indices(), &[1]);
        assert_eq!(sets[2].indices(), &[3]);

        let sets: Vec<_> = enumerate_erasures(4, 2).unwrap().collect();
        assert_eq!(sets.len(), 6);
        assert_eq!(sets[0].indices(), &[1, 2]);
        assert_eq!(sets[5].indices(), &[3, 4]);

        assert_eq!(enumerate_erasures(10, 3).unwrap().count(), 120);
        assert!(enumerate_erasures(3, 4).is_err());
        assert!(enumerate_erasures(3, 0).is_err());
    }

    proptest! {
        #[test]
        fn enumeration_is_lexicographic_and_complete(total in 1usize..9, m in 1usize..9) {
            prop_assume!(m <= total);
            let sets: Vec<_> = enumerate_erasures(total, m).unwrap().collect();
            prop_assert_eq!(sets.len() as u128, binomial(total, m));
            for s in &sets {
                for w in s.indices().windows(2) {
                    prop_assert!(w[0] < w[1]);
                }
            }
            for w in sets.windows(2) {
                prop_assert!(w[0].indices() < w[1].indices());
            }
        }

        #[test]
        fn sqrt_branch_squares_back(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            let z = C64::new(re, im);
            let w = complex_sqrt_branch(z);
            prop_assert!(w.re >= 0.0);
            prop_assert!((w * w - z).norm() < 1e-9 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn sqrt_branch_examples() {
        assert!((complex_sqrt_branch(re(4.0)) - re(2.0)).norm() < 1e-15);
        assert!((complex_sqrt_branch(re(-1.0)) - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((complex_sqrt_branch(C64::new(0.0, 2.0)) - C64::new(1.0, 1.0)).norm() < 1e-15);
        // both signed zeros on the cut resolve to the +i side
        assert!(complex_sqrt_branch(C64::new(-4.0, -0.0)).im > 0.0);
    }

    #[test]
    fn one_erasure_reduced_entry() {
        let pair = three_vector_pair();
        let set = ErasureSet::new(vec![3], 3).unwrap();
        let op = ErrorOperator::new(&pair, set).unwrap();
        assert!((op.reduced().get(0, 0) - re(2.0 / 3.0)).norm() < 1e-12);
    }

    #[test]
    fn full_erasure_reduced_is_conjugate_cross_gram() {
        let pair = three_vector_pair();
        let set = ErasureSet::new(vec![1, 2, 3], 3).unwrap();
        let op = ErrorOperator::new(&pair, set).unwrap();
        assert!((op.reduced().trace() - re(2.0)).norm() < 1e-12);
        // with every coefficient erased the full operator is the identity
        assert!(op.full().residual_from_identity() < 1e-12);
    }

    #[test]
    fn frobenius_on_onb_projection() {
        let pair = onb_pair(4);
        for m in 1..=3 {
            let set = ErasureSet::new((1..=m).collect(), 4).unwrap();
            let op = ErrorOperator::new(&pair, set).unwrap();
            let v = op.frobenius_norm().unwrap();
            assert!((v - (m as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn frobenius_closed_form_matches_full_materialization() {
        let pair = three_vector_pair();
        for set in enumerate_erasures(3, 2).unwrap() {
            let op = ErrorOperator::new(&pair, set).unwrap();
            let closed = op.frobenius_norm().unwrap();
            let direct = op.full().frobenius();
            assert!((closed - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_radius_of_onb_projection_is_one() {
        let pair = onb_pair(3);
        for set in enumerate_erasures(3, 2).unwrap() {
            let op = ErrorOperator::new(&pair, set).unwrap();
            assert!((op.spectral_radius().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn numerical_radius_single_erasure_examples() {
        let pair = onb_pair(2);
        let op = ErrorOperator::new(&pair, ErasureSet::new(vec![1], 2).unwrap()).unwrap();
        assert!((op.numerical_radius().unwrap() - 1.0).abs() < 1e-12);

        let pair = three_vector_pair();
        let report = worst_case(&pair, 1, MeasureKind::Numerical, true).unwrap();
        let expect = (2.0 + 5f64.sqrt()) / 6.0;
        assert!((report.worst_value - expect).abs() < 1e-12);
        let argmax: Vec<_> = report.argmax_sets.iter().map(|s| s.indices()[0]).collect();
        assert_eq!(argmax, vec![1, 2]);
    }

    #[test]
    fn sweep_equals_spectral_radius_for_hermitian_input() {
        let mut h = CMatrix::zeros(3, 3);
        h.set(0, 0, re(2.0));
        h.set(0, 1, C64::new(0.0, 1.0));
        h.set(1, 0, C64::new(0.0, -1.0));
        h.set(1, 1, re(-3.0));
        h.set(2, 2, re(0.5));
        let omega = numerical_radius_sweep(&h).unwrap();
        let rho = general_eigenvalues(&h, 600)
            .unwrap()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!((omega - rho).abs() < 1e-9, "omega {omega} vs rho {rho}");
    }

    #[test]
    fn worst_case_one_erasure_frobenius_is_norm_product() {
        let pair = three_vector_pair();
        let report = worst_case(&pair, 1, MeasureKind::Frobenius, false).unwrap();
        assert!((report.worst_value - 5f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((report.theoretical_optimum.unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn worst_case_respects_enumeration_cap() {
        let pair = onb_pair(6);
        match worst_case_with_cap(&pair, 3, MeasureKind::Frobenius, false, 10) {
            Err(FrameError::EnumerationCapExceeded { count, cap }) => {
                assert_eq!(count, 20);
                assert_eq!(cap, 10);
            }
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }
}
