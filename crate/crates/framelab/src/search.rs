//! Derivative-free minimax search over the duals of a fixed frame.
//!
//! The objective V ↦ worst_case(F, G(V)) is a max of eigenvalue functions
//! and therefore nonsmooth, so the optimizer is a coordinate pattern search
//! over the 2nN real coordinates of the parameter block V, with shrinking
//! steps and multiple restarts. Restart 0 always starts from V = 0 (the
//! canonical dual), so the search never returns anything worse than it.

use crate::constructions::{dual_parameterization, DualParameterization, SplitMix64};
use crate::erasure::{worst_case_with_cap, MeasureKind, DEFAULT_ENUM_CAP};
use crate::error::FrameError;
use crate::frame::{DualPair, Frame};
use crate::linalg::{CMatrix, C64};

/// Scale of the Gaussian initializations used by restarts 1, 2, ….
const RESTART_SCALE: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub measure: MeasureKind,
    pub m: usize,
    /// Pattern-search sweeps allowed per restart.
    pub max_iters: usize,
    pub restarts: usize,
    pub step_init: f64,
    pub step_min: f64,
    pub seed: u64,
    /// Optional certificate floor; the gap to it is reported when set.
    pub lower_bound: Option<f64>,
    /// Enumeration cap handed through to the worst-case evaluation.
    pub enum_cap: u128,
}

impl SearchConfig {
    pub fn new(measure: MeasureKind, m: usize) -> Self {
        Self {
            measure,
            m,
            max_iters: 400,
            restarts: 8,
            step_init: 0.5,
            step_min: 1e-7,
            seed: 0,
            lower_bound: None,
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }

    fn validate(&self) -> Result<(), FrameError> {
        if self.m == 0 {
            return Err(FrameError::InvalidParameter("erasure length m must be >= 1".into()));
        }
        if self.max_iters == 0 {
            return Err(FrameError::InvalidParameter("max_iters must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(FrameError::InvalidParameter("restarts must be >= 1".into()));
        }
        if !(self.step_min > 0.0 && self.step_min < self.step_init) {
            return Err(FrameError::InvalidParameter(
                "need 0 < step_min < step_init".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_dual: Frame,
    /// Worst-case value of `best_dual`, recomputed from scratch.
    pub best_value: f64,
    /// The parameter block V producing `best_dual`.
    pub best_parameters: CMatrix,
    /// (iteration, best value so far) at every improvement; non-increasing.
    pub trace: Vec<(usize, f64)>,
    /// best_value − lower_bound, when a bound was supplied.
    pub gap_to_bound: Option<f64>,
    /// True when every restart shrank its step below step_min before
    /// exhausting max_iters.
    pub converged: bool,
}

/// Worst-case value of the dual G(V) under the configured measure.
pub fn objective(frame: &Frame, v: &CMatrix, cfg: &SearchConfig) -> Result<f64, FrameError> {
    let param = dual_parameterization(frame)?;
    objective_on(&param, v, cfg)
}

fn objective_on(
    param: &DualParameterization,
    v: &CMatrix,
    cfg: &SearchConfig,
) -> Result<f64, FrameError> {
    let pair = param.dual_from_parameters(v)?;
    Ok(worst_case_with_cap(&pair, cfg.m, cfg.measure, false, cfg.enum_cap)?.worst_value)
}

/// Minimizes the worst-case error over the duals of `frame`.
///
/// Deterministic for a fixed config (including the seed); ties between
/// restarts resolve to the earliest restart.
pub fn search(frame: &Frame, cfg: &SearchConfig) -> Result<SearchResult, FrameError> {
    cfg.validate()?;
    let param = dual_parameterization(frame)?;
    let dim = frame.dim();
    let count = frame.len();
    let coords = 2 * dim * count;

    let zero_v = CMatrix::zeros(dim, count);
    let mut best_v = zero_v.clone();
    let mut best = objective_on(&param, &zero_v, cfg)?;
    let mut trace = vec![(0usize, best)];
    let mut iteration = 0usize;

    if param.rank() == 0 {
        // N = n: the canonical dual is the only dual
        return finalize(&param, best_v, trace, cfg, true);
    }

    let mut rng = SplitMix64::new(cfg.seed);
    let mut all_converged = true;
    for restart in 0..cfg.restarts {
        let mut v = if restart == 0 {
            zero_v.clone()
        } else {
            CMatrix::from_fn(dim, count, |_, _| rng.next_complex_normal() * RESTART_SCALE)
        };
        let mut value = objective_on(&param, &v, cfg)?;
        if value < best {
            best = value;
            best_v = v.clone();
            trace.push((iteration, best));
        }

        let mut step = cfg.step_init;
        let mut local_converged = false;
        for _sweep in 0..cfg.max_iters {
            iteration += 1;
            let mut improved = false;
            for coord in 0..coords {
                let entry = coord / 2;
                let (r, c) = (entry / count, entry % count);
                for dir in [1.0, -1.0] {
                    let delta = if coord % 2 == 0 {
                        C64::new(dir * step, 0.0)
                    } else {
                        C64::new(0.0, dir * step)
                    };
                    let mut probe = v.clone();
                    probe.set(r, c, probe.get(r, c) + delta);
                    let pv = objective_on(&param, &probe, cfg)?;
                    if pv < value {
                        v = probe;
                        value = pv;
                        improved = true;
                        break;
                    }
                }
            }
            if value < best {
                best = value;
                best_v = v.clone();
                trace.push((iteration, best));
            }
            if !improved {
                step *= 0.5;
                if step < cfg.step_min {
                    local_converged = true;
                    break;
                }
            }
        }
        all_converged &= local_converged;
    }

    finalize(&param, best_v, trace, cfg, all_converged)
}

fn finalize(
    param: &DualParameterization,
    best_v: CMatrix,
    trace: Vec<(usize, f64)>,
    cfg: &SearchConfig,
    converged: bool,
) -> Result<SearchResult, FrameError> {
    let pair: DualPair = param.dual_from_parameters(&best_v)?;
    let best_value =
        worst_case_with_cap(&pair, cfg.m, cfg.measure, false, cfg.enum_cap)?.worst_value;
    Ok(SearchResult {
        best_dual: pair.g().clone(),
        best_value,
        best_parameters: best_v,
        trace,
        gap_to_bound: cfg.lower_bound.map(|b| best_value - b),
        converged,
    })
}
