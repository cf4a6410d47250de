//! Derivative-free minimization (Nelder–Mead) with deterministic multistart,
//! and the QAOA objective built on top of it.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamiltonian::IsingHamiltonian;
use crate::simulator::{
    AnsatzParams, DiagonalOperator, ExpectationMode, LightconeEvaluator, QaoaAnsatz,
    DEFAULT_QUBIT_CAP,
};

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;
const INITIAL_STEP: f64 = 0.1;

/// Where the local searches start.
#[derive(Debug, Clone, PartialEq)]
pub enum Multistart {
    /// The QAOA grid: for one layer the outer product of
    /// `β ∈ {kπ/16}` and `γ ∈ {kπ/8}`, `k = 1..=7`; for more layers the same
    /// 49 points used as constant schedules. Ordered by distance to the box
    /// centre `(π/4, π/2)`, nearest first.
    QaoaDefault,
    /// Outer product of per-dimension value lists.
    Grid(Vec<Vec<f64>>),
    /// Explicit start points.
    Points(Vec<Vec<f64>>),
    /// `count` points drawn uniformly from `[low, high)^d` with the config seed.
    Random { count: usize, low: f64, high: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Evaluation budget per start.
    pub max_evals: usize,
    /// Stop when every simplex vertex lies within this (max-norm) distance of
    /// the best vertex.
    pub x_tol: f64,
    /// Stop when the spread of simplex values drops to this.
    pub f_tol: f64,
    pub multistart: Multistart,
    pub seed: u64,
    /// Run starts on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_evals: 400,
            x_tol: 1e-8,
            f_tol: 1e-10,
            multistart: Multistart::QaoaDefault,
            seed: 0,
            parallel: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::InvalidArgument("max_evals must be >= 1".into()));
        }
        if !(self.x_tol > 0.0 && self.f_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be > 0".into()));
        }
        Ok(())
    }

    /// Start points for a problem of dimension `dim` (`2p` for QAOA).
    pub fn starts(&self, dim: usize) -> Result<Vec<Vec<f64>>> {
        let starts = match &self.multistart {
            Multistart::QaoaDefault => {
                if dim == 0 || !dim.is_multiple_of(2) {
                    return Err(Error::InvalidArgument(format!(
                        "the QAOA grid needs an even dimension, got {dim}"
                    )));
                }
                qaoa_default_starts(dim / 2)
            }
            Multistart::Grid(axes) => {
                if axes.len() != dim || axes.iter().any(Vec::is_empty) {
                    return Err(Error::InvalidArgument(format!(
                        "grid has {} axes for a {dim}-dimensional problem",
                        axes.len()
                    )));
                }
                axes.iter().fold(vec![Vec::new()], |acc, axis| {
                    acc.iter()
                        .flat_map(|prefix| {
                            axis.iter().map(move |&x| {
                                let mut p = prefix.clone();
                                p.push(x);
                                p
                            })
                        })
                        .collect()
                })
            }
            Multistart::Points(points) => points.clone(),
            Multistart::Random { count, low, high } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..*count)
                    .map(|_| (0..dim).map(|_| rng.random_range(*low..*high)).collect())
                    .collect()
            }
        };
        if starts.is_empty() || starts.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidArgument(format!(
                "start points must be non-empty and {dim}-dimensional"
            )));
        }
        Ok(starts)
    }
}

fn qaoa_default_starts(layers: usize) -> Vec<Vec<f64>> {
    let centre = (PI / 4.0, PI / 2.0);
    let mut pairs: Vec<(f64, f64)> = (1..=7)
        .flat_map(|kb| (1..=7).map(move |kg| (kb as f64 * PI / 16.0, kg as f64 * PI / 8.0)))
        .collect();
    pairs.sort_by(|a, b| {
        let da = (a.0 - centre.0).powi(2) + (a.1 - centre.1).powi(2);
        let db = (b.0 - centre.0).powi(2) + (b.1 - centre.1).powi(2);
        da.total_cmp(&db)
            .then(a.0.total_cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
    });
    pairs
        .into_iter()
        .map(|(b, g)| {
            let mut theta = vec![b; layers];
            theta.extend(std::iter::repeat_n(g, layers));
            theta
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub evaluation: usize,
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    /// Every improvement of the incumbent, in evaluation order.
    pub trace: Vec<TracePoint>,
    /// Seconds spent inside the optimization (objective calls included).
    pub wall_time: f64,
}

struct Counted<F> {
    f: F,
    evals: usize,
    budget: usize,
    trace: Vec<TracePoint>,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn exhausted(&self) -> bool {
        self.evals >= self.budget
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let value = (self.f)(x);
        self.evals += 1;
        if !value.is_finite() {
            return Err(Error::NonFinite {
                value,
                params: x.to_vec(),
            });
        }
        if self.trace.last().is_none_or(|t| value < t.value) {
            self.trace.push(TracePoint {
                evaluation: self.evals,
                params: x.to_vec(),
                value,
            });
        }
        Ok(value)
    }
}

/// Nelder–Mead from `x0` with reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5 and an initial simplex of `x0` plus 0.1 along each axis.
pub fn nelder_mead<F>(f: F, x0: &[f64], cfg: &OptimizerConfig) -> Result<OptResult>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let d = x0.len();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "cannot optimize over zero dimensions".into(),
        ));
    }
    let started = Instant::now();
    let mut obj = Counted {
        f,
        evals: 0,
        budget: cfg.max_evals,
        trace: Vec::new(),
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), obj.eval(x0)?));
    for i in 0..d {
        if obj.exhausted() {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += INITIAL_STEP;
        let fx = obj.eval(&x)?;
        simplex.push((x, fx));
    }

    if simplex.len() == d + 1 {
        run_simplex(&mut obj, &mut simplex, cfg)?;
    }

    let best = obj.trace.last().expect("at least one evaluation");
    Ok(OptResult {
        best_params: best.params.clone(),
        best_value: best.value,
        evaluations: obj.evals,
        trace: obj.trace,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

fn run_simplex<F: FnMut(&[f64]) -> f64>(
    obj: &mut Counted<F>,
    simplex: &mut [(Vec<f64>, f64)],
    cfg: &OptimizerConfig,
) -> Result<()> {
    let d = simplex.len() - 1;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        if obj.exhausted() || worst - best <= cfg.f_tol {
            return Ok(());
        }
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter <= cfg.x_tol {
            return Ok(());
        }

        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / d as f64;
            }
        }
        let towards = |coef: f64, target: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(target)
                .map(|(c, t)| c + coef * (t - c))
                .collect()
        };

        let reflected = towards(-REFLECTION, &simplex[d].0);
        let fr = obj.eval(&reflected)?;
        if fr < best {
            if obj.exhausted() {
                simplex[d] = (reflected, fr);
                continue;
            }
            let expanded = towards(EXPANSION, &reflected);
            let fe = obj.eval(&expanded)?;
            simplex[d] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
            continue;
        }
        if obj.exhausted() {
            continue;
        }
        let (contracted, accept_below) = if fr < worst {
            (towards(CONTRACTION, &reflected), fr)
        } else {
            (towards(CONTRACTION, &simplex[d].0), worst)
        };
        let fc = obj.eval(&contracted)?;
        if fc <= accept_below {
            simplex[d] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex[1..].iter_mut() {
            if obj.exhausted() {
                break;
            }
            let x: Vec<f64> = anchor
                .iter()
                .zip(&vertex.0)
                .map(|(a, v)| a + SHRINK * (v - a))
                .collect();
            let fx = obj.eval(&x)?;
            *vertex = (x, fx);
        }
    }
}

/// Runs [`nelder_mead`] from every configured start and keeps the lowest
/// value; ties go to the lexicographically smallest parameter vector.
pub fn minimize_multistart<F>(f: F, dim: usize, cfg: &OptimizerConfig) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let starts = cfg.starts(dim)?;
    let started = Instant::now();
    let runs: Vec<Result<OptResult>> = if cfg.parallel {
        starts
            .par_iter()
            .map(|x0| nelder_mead(&f, x0, cfg))
            .collect()
    } else {
        starts.iter().map(|x0| nelder_mead(&f, x0, cfg)).collect()
    };
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut evaluations = 0;
    let mut trace: Vec<TracePoint> = Vec::new();
    let mut best: Option<&OptResult> = None;
    for run in &runs {
        for t in &run.trace {
            if trace.last().is_none_or(|b| t.value < b.value) {
                trace.push(TracePoint {
                    evaluation: evaluations + t.evaluation,
                    ..t.clone()
                });
            }
        }
        evaluations += run.evaluations;
        best = match best {
            None => Some(run),
            Some(b) => {
                let better = run.best_value < b.best_value
                    || (run.best_value == b.best_value
                        && run.best_params.iter().partial_cmp(b.best_params.iter())
                            == Some(std::cmp::Ordering::Less));
                Some(if better { run } else { b })
            }
        };
    }
    let best = best.expect("at least one start");
    Ok(OptResult {
        best_params: best.best_params.clone(),
        best_value: best.best_value,
        evaluations,
        trace,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

/// How the QAOA objective evaluates `⟨H_measure⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvaluationMode {
    /// Full statevector, one pass per measured term.
    PerTerm,
    /// Full statevector, one pass against the measured diagonal.
    Fused,
    /// Only the causal cone of the measured terms is simulated.
    Lightcone,
}

impl std::str::FromStr for EvaluationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-term" | "per_term" => Ok(Self::PerTerm),
            "fused" => Ok(Self::Fused),
            "lightcone" => Ok(Self::Lightcone),
            other => Err(Error::InvalidArgument(format!(
                "unknown evaluation mode {other:?} (per-term, fused, lightcone)"
            ))),
        }
    }
}

impl std::fmt::Display for EvaluationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::PerTerm => "per-term",
            Self::Fused => "fused",
            Self::Lightcone => "lightcone",
        })
    }
}

/// `θ ↦ ⟨ψ(θ)|H_measure|ψ(θ)⟩` with `ψ` built from `H_ansatz`; `θ` uses the
/// flat `[β.., γ..]` layout.
pub struct QaoaObjective {
    layers: usize,
    kind: ObjectiveKind,
}

enum ObjectiveKind {
    PerTerm {
        ansatz: QaoaAnsatz,
        measure: IsingHamiltonian,
    },
    Fused {
        ansatz: QaoaAnsatz,
        measure: DiagonalOperator,
    },
    Lightcone(LightconeEvaluator),
}

impl QaoaObjective {
    pub fn new(
        h_ansatz: &IsingHamiltonian,
        h_measure: &IsingHamiltonian,
        layers: usize,
        mode: EvaluationMode,
    ) -> Result<Self> {
        Self::with_cap(h_ansatz, h_measure, layers, mode, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(
        h_ansatz: &IsingHamiltonian,
        h_measure: &IsingHamiltonian,
        layers: usize,
        mode: EvaluationMode,
        cap: usize,
    ) -> Result<Self> {
        if layers == 0 {
            return Err(Error::InvalidArgument("layers must be >= 1".into()));
        }
        if h_ansatz.n() != h_measure.n() {
            return Err(Error::Contract(format!(
                "ansatz on {} qubits, observable on {}",
                h_ansatz.n(),
                h_measure.n()
            )));
        }
        if h_ansatz.convention() != h_measure.convention() {
            return Err(Error::Contract(format!(
                "ansatz uses the {} convention, observable the {} one",
                h_ansatz.convention(),
                h_measure.convention()
            )));
        }
        let kind = match mode {
            EvaluationMode::PerTerm => ObjectiveKind::PerTerm {
                ansatz: QaoaAnsatz::with_cap(h_ansatz, cap)?,
                measure: h_measure.clone(),
            },
            EvaluationMode::Fused => ObjectiveKind::Fused {
                ansatz: QaoaAnsatz::with_cap(h_ansatz, cap)?,
                measure: DiagonalOperator::from_hamiltonian_with_cap(h_measure, cap)?,
            },
            EvaluationMode::Lightcone => ObjectiveKind::Lightcone(LightconeEvaluator::with_cap(
                h_ansatz, h_measure, layers, cap,
            )?),
        };
        Ok(Self { layers, kind })
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    /// Number of qubits actually simulated per evaluation.
    pub fn simulated_qubits(&self) -> usize {
        match &self.kind {
            ObjectiveKind::PerTerm { ansatz, .. } | ObjectiveKind::Fused { ansatz, .. } => {
                ansatz.n()
            }
            ObjectiveKind::Lightcone(ev) => ev.register().len(),
        }
    }

    pub fn expectation(&self, params: &AnsatzParams) -> Result<f64> {
        if params.layers() != self.layers {
            return Err(Error::InvalidArgument(format!(
                "objective has {} layers, parameters have {}",
                self.layers,
                params.layers()
            )));
        }
        match &self.kind {
            ObjectiveKind::PerTerm { ansatz, measure } => ansatz
                .state(params)?
                .expectation(measure, ExpectationMode::PerTerm),
            ObjectiveKind::Fused { ansatz, measure } => {
                Ok(ansatz.state(params)?.expectation_diagonal(measure))
            }
            ObjectiveKind::Lightcone(ev) => ev.expectation(params),
        }
    }
}

/// Maximizes the expected cut by minimizing `−⟨H_measure⟩` over `θ ∈ R^{2p}`.
///
/// `h_ansatz` must be the full Hamiltonian of `g`; `h_measure` the full or
/// reduced Hamiltonian of the same graph and convention. The returned
/// `best_value` is the minimized (negated) objective.
pub fn optimize_qaoa(
    g: &Graph,
    h_measure: &IsingHamiltonian,
    h_ansatz: &IsingHamiltonian,
    layers: usize,
    cfg: &OptimizerConfig,
    mode: EvaluationMode,
) -> Result<OptResult> {
    let couplings: Vec<_> = h_ansatz.quadratic().keys().copied().collect();
    if h_ansatz.n() != g.n() || couplings != g.edges() {
        return Err(Error::Contract(
            "the ansatz Hamiltonian must couple exactly the edges of the graph".into(),
        ));
    }
    let objective = QaoaObjective::new(h_ansatz, h_measure, layers, mode)?;
    minimize_multistart(
        |theta| {
            let params = AnsatzParams::from_flat(theta).expect("dimension is 2p");
            -objective
                .expectation(&params)
                .expect("objective was validated at construction")
        },
        2 * layers,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OptimizerConfig {
        OptimizerConfig {
            max_evals: 2000,
            x_tol: 1e-10,
            f_tol: 1e-14,
            ..Default::default()
        }
    }

    #[test]
    fn convex_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2);
        let r = nelder_mead(f, &[0.0, 0.0], &cfg()).unwrap();
        assert!(r.best_value <= 1e-10);
        assert!((r.best_params[0] - 1.0).abs() < 1e-5);
        assert!((r.best_params[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn constant_stops_on_spread() {
        let r = nelder_mead(|_| 3.0, &[0.5, 0.5, 0.5], &cfg()).unwrap();
        assert_eq!(r.evaluations, 4);
        assert_eq!(r.best_value, 3.0);
    }

    #[test]
    fn sine_minimum() {
        let r = nelder_mead(|x: &[f64]| x[0].sin(), &[1.0], &cfg()).unwrap();
        assert!((r.best_value + 1.0).abs() < 1e-6);
    }

    #[test]
    fn budget_is_respected() {
        let c = OptimizerConfig {
            max_evals: 17,
            ..cfg()
        };
        let r = nelder_mead(
            |x: &[f64]| x.iter().map(|v| v * v).sum(),
            &[3.0, -2.0, 1.0],
            &c,
        )
        .unwrap();
        assert_eq!(r.evaluations, 17);
        let one = OptimizerConfig {
            max_evals: 1,
            ..cfg()
        };
        let r = nelder_mead(|x: &[f64]| x[0] * x[0] + 2.0, &[1.0, 1.0], &one).unwrap();
        assert_eq!((r.evaluations, r.best_value), (1, 3.0));
    }

    #[test]
    fn non_finite_aborts() {
        let r = nelder_mead(
            |x: &[f64]| if x[0] > 0.05 { f64::NAN } else { x[0] },
            &[0.0],
            &cfg(),
        );
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            max_evals: 0,
            ..cfg()
        };
        assert!(nelder_mead(|_| 0.0, &[0.0], &bad).is_err());
        let bad = OptimizerConfig {
            x_tol: 0.0,
            ..cfg()
        };
        assert!(nelder_mead(|_| 0.0, &[0.0], &bad).is_err());
    }

    #[test]
    fn default_grid() {
        let starts = OptimizerConfig::default().starts(2).unwrap();
        assert_eq!(starts.len(), 49);
        assert_eq!(starts[0], vec![PI / 4.0, PI / 2.0]);
        let deep = OptimizerConfig::default().starts(4).unwrap();
        assert_eq!(deep[0], vec![PI / 4.0, PI / 4.0, PI / 2.0, PI / 2.0]);
        assert!(OptimizerConfig::default().starts(3).is_err());
    }

    #[test]
    fn grid_and_random_starts() {
        let c = OptimizerConfig {
            multistart: Multistart::Grid(vec![vec![0.0, 1.0], vec![2.0, 3.0, 4.0]]),
            ..cfg()
        };
        let s = c.starts(2).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s[1], vec![0.0, 3.0]);
        let r = OptimizerConfig {
            multistart: Multistart::Random {
                count: 5,
                low: -1.0,
                high: 1.0,
            },
            seed: 9,
            ..cfg()
        };
        assert_eq!(r.starts(3).unwrap(), r.starts(3).unwrap());
        assert_eq!(r.starts(3).unwrap().len(), 5);
    }

    #[test]
    fn multistart_parallel_matches_sequential() {
        let f = |x: &[f64]| (x[0] * 3.0).cos() + 0.1 * x[0] * x[0] + (x[1] - 0.3).powi(2);
        let mut c = OptimizerConfig {
            multistart: Multistart::Grid(vec![vec![-2.0, -1.0, 0.0, 1.0, 2.0], vec![0.0, 1.0]]),
            ..cfg()
        };
        let seq = minimize_multistart(f, 2, &c).unwrap();
        c.parallel = true;
        let par = minimize_multistart(f, 2, &c).unwrap();
        assert_eq!(seq.best_params, par.best_params);
        assert_eq!(seq.evaluations, par.evaluations);
        assert_eq!(seq.trace, par.trace);
        for w in seq.trace.windows(2) {
            assert!(w[1].value < w[0].value);
        }
        assert_eq!(seq.trace.last().unwrap().value, seq.best_value);
    }
}
