//! Threshold maximization as semidefinite programming.
//!
//! For a set of N observables on a configuration with Hilbert dimension d,
//! the decision variables are 2^N Hermitian effect blocks and the sharteness
//! scalar lambda. Constraints are completeness plus one marginal operator
//! identity per observable (the opposite-sign marginals follow from
//! completeness), each expanded over the Pauli word basis so all constraint
//! data is real. Two independent solution paths exist: the direct
//! affine-in-lambda maximization, and bisection over strictly-feasible
//! margin subproblems; they must agree and are tested against each other.

mod ipm;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jointmeas::{target_marginal, verify_povm, Configuration, Povm};
use crate::linalg::{
    pauli_word, pauli_words, C64, CMatrix, Operator, Sign, TOL_HERM,
};
use crate::observables::{theta_family, ObservableSet};

use ipm::{ConicProblem, IpmOptions, IpmStatus, Row};

/// Default solver tolerance; acceptance comparisons run at 1e-6 to absorb
/// conditioning.
pub const DEFAULT_TOL: f64 = 1e-8;

/// lambda within this distance of 1 is reported as exactly 1 with the
/// boundary flag set (the perfectly-measurable cases are exactly 1 by
/// certificate).
pub const BOUNDARY_MARGIN: f64 = 1e-7;

/// Largest supported identical-copy count; beyond this the block count and
/// dimensions outgrow desk scale.
pub const MAX_PARALLEL_COPIES: usize = 4;

/// Which outcome strings a constraint sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeSubset {
    /// All 2^N outcomes (completeness).
    All,
    /// Outcomes with a_r = +1 for the given observable index.
    PlusAt(usize),
}

impl OutcomeSubset {
    pub fn contains(&self, mask: usize) -> bool {
        match self {
            OutcomeSubset::All => true,
            OutcomeSubset::PlusAt(r) => (mask >> r) & 1 == 0,
        }
    }

    pub fn members(&self, n_outcomes: usize) -> Vec<usize> {
        (0..n_outcomes).filter(|m| self.contains(*m)).collect()
    }
}

/// One operator equality sum_{a in subset} Pi_a - lambda * M = C.
#[derive(Debug, Clone)]
pub struct OperatorConstraint {
    pub label: String,
    pub subset: OutcomeSubset,
    /// Coefficient of lambda (zero operator for completeness).
    pub lambda_coef: Operator,
    pub rhs: Operator,
}

/// Assembled threshold program: one Hermitian block per outcome string, the
/// sharpness scalar, completeness and marginal identities, objective
/// max lambda.
#[derive(Debug, Clone)]
pub struct SdpModel {
    obs: ObservableSet,
    config: Configuration,
    constraints: Vec<OperatorConstraint>,
}

impl SdpModel {
    pub fn observables(&self) -> &ObservableSet {
        &self.obs
    }

    pub fn configuration(&self) -> Configuration {
        self.config
    }

    pub fn constraints(&self) -> &[OperatorConstraint] {
        &self.constraints
    }

    pub fn n_outcomes(&self) -> usize {
        1 << self.obs.len()
    }

    pub fn block_dim(&self) -> usize {
        self.config.hilbert_dim()
    }
}

/// Builds the threshold maximization model for a supported configuration
/// (single, parallel with at most [`MAX_PARALLEL_COPIES`] copies, or the
/// antiparallel pair).
pub fn assemble_threshold_sdp(obs: &ObservableSet, config: Configuration) -> Result<SdpModel> {
    match config {
        Configuration::Single | Configuration::AntiParallel => {}
        Configuration::Parallel(k) if (1..=MAX_PARALLEL_COPIES).contains(&k) => {}
        Configuration::Parallel(k) => {
            return Err(Error::UnsupportedConfiguration(format!(
                "parallel copy count {k} outside supported range 1..={MAX_PARALLEL_COPIES}"
            )));
        }
    }
    let d = config.hilbert_dim();
    let mut constraints = Vec::with_capacity(obs.len() + 1);
    constraints.push(OperatorConstraint {
        label: "completeness".into(),
        subset: OutcomeSubset::All,
        lambda_coef: Operator::zeros(d),
        rhs: Operator::identity(d),
    });
    for (r, dir) in obs.directions().iter().enumerate() {
        let at_zero = target_marginal(config, dir, Sign::Plus, 0.0)?;
        let at_one = target_marginal(config, dir, Sign::Plus, 1.0)?;
        constraints.push(OperatorConstraint {
            label: format!("marginal r={r}"),
            subset: OutcomeSubset::PlusAt(r),
            lambda_coef: &at_one - &at_zero,
            rhs: at_zero,
        });
    }
    Ok(SdpModel { obs: obs.clone(), config, constraints })
}

/// Pauli-word dictionary scaled by 1/d, so row data lives on the scale of
/// Hilbert-Schmidt coefficients.
fn word_dictionary(n_qubits: usize) -> (Vec<String>, Vec<CMatrix>) {
    let words = pauli_words(n_qubits);
    let d = (1usize << n_qubits) as f64;
    let mats = words
        .iter()
        .map(|w| pauli_word(w).expect("valid word").matrix() * C64::new(1.0 / d, 0.0))
        .collect();
    (words, mats)
}

/// Tr[W op] for a dictionary word W (already carrying its 1/d scale).
fn row_coef(word: &CMatrix, op: &Operator) -> f64 {
    let m = op.matrix();
    let n = m.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += word[(i, j)] * m[(j, i)];
        }
    }
    acc.re
}

impl SdpModel {
    /// Conic form of the direct max-lambda program. Scalar 0 is lambda,
    /// scalar 1 the slack of lambda <= 1.
    fn to_conic(&self) -> ConicProblem {
        let n_qubits = self.config.copies();
        let d = self.block_dim();
        let n_outcomes = self.n_outcomes();
        let (_word_names, words) = word_dictionary(n_qubits);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for c in &self.constraints {
            let members = c.subset.members(n_outcomes);
            for (w_id, word) in words.iter().enumerate() {
                let lam = row_coef(word, &c.lambda_coef);
                let mut row = Row {
                    mat_terms: members.iter().map(|&a| (a, w_id)).collect(),
                    scalar_terms: Vec::new(),
                };
                if lam != 0.0 {
                    row.scalar_terms.push((0, -lam));
                }
                rows.push(row);
                rhs.push(row_coef(word, &c.rhs));
            }
        }
        // box: lambda + slack = 1
        rows.push(Row { mat_terms: vec![], scalar_terms: vec![(0, 1.0), (1, 1.0)] });
        rhs.push(1.0);
        ConicProblem {
            mat_dims: vec![d; n_outcomes],
            words,
            n_scalars: 2,
            objective_scalar: vec![-1.0, 0.0],
            rows,
            rhs,
        }
    }

    /// Conic form of the strict-feasibility margin subproblem at fixed
    /// lambda: maximize t with Pi_a - t I >= 0 (variables Y_a = Pi_a + (1-t) I
    /// after the shift t' = t + 1 that keeps the scalar in the cone).
    fn to_feasibility_conic(&self, lambda: f64) -> ConicProblem {
        let n_qubits = self.config.copies();
        let d = self.block_dim();
        let n_outcomes = self.n_outcomes();
        let (word_names, words) = word_dictionary(n_qubits);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for c in &self.constraints {
            let members = c.subset.members(n_outcomes);
            for ((w_id, word), w_name) in words.iter().enumerate().zip(word_names.iter()) {
                let target = row_coef(word, &c.rhs) + lambda * row_coef(word, &c.lambda_coef);
                let mut row = Row {
                    mat_terms: members.iter().map(|&a| (a, w_id)).collect(),
                    scalar_terms: Vec::new(),
                };
                let mut b = target;
                if w_name.chars().all(|ch| ch == 'I') {
                    // identity word picks up the t' shift of every member
                    row.scalar_terms.push((0, members.len() as f64));
                    b += members.len() as f64;
                }
                rows.push(row);
                rhs.push(b);
            }
        }
        ConicProblem {
            mat_dims: vec![d; n_outcomes],
            words,
            n_scalars: 1,
            objective_scalar: vec![-1.0],
            rows,
            rhs,
        }
    }
}

/// Terminal state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    NumericalFailure,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Optimal => write!(f, "optimal"),
            SolveStatus::Infeasible => write!(f, "infeasible"),
            SolveStatus::NumericalFailure => write!(f, "numerical-failure"),
        }
    }
}

/// Everything a solve reports back.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Optimal sharpness, clamped to [0, 1]; exactly 1.0 when the boundary
    /// flag is set.
    pub lambda_star: f64,
    /// True when the raw optimum came within [`BOUNDARY_MARGIN`] of 1.
    pub boundary: bool,
    /// Unclamped solver value.
    pub lambda_raw: f64,
    pub povm: Option<Povm>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub dual_gap: f64,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub diagnostic: Option<String>,
}

#[cfg(not(target_arch = "wasm32"))]
fn now() -> Option<std::time::Instant> {
    Some(std::time::Instant::now())
}

#[cfg(target_arch = "wasm32")]
fn now() -> Option<std::time::Instant> {
    None
}

fn elapsed_ms(start: &Option<std::time::Instant>) -> f64 {
    start.map(|s| s.elapsed().as_secs_f64() * 1e3).unwrap_or(0.0)
}

/// Residual of the trivial uniform point (all effects I / 2^N at lambda = 0)
/// against the model constraints. Valid models satisfy it exactly.
fn uniform_point_residual(model: &SdpModel) -> f64 {
    let d = model.block_dim();
    let n_outcomes = model.n_outcomes();
    let uniform = Operator::identity(d).scale(1.0 / n_outcomes as f64);
    let mut worst = 0.0f64;
    for c in &model.constraints {
        let members = c.subset.members(n_outcomes).len() as f64;
        let sum = uniform.scale(members);
        worst = worst.max(sum.distance(&c.rhs));
    }
    worst
}

fn extract_povm(model: &SdpModel, blocks: &[CMatrix]) -> Result<Povm> {
    let effects: Vec<Operator> = blocks
        .iter()
        .map(|m| Operator::from_matrix(m.clone()))
        .collect::<Result<_>>()?;
    Povm::new(model.obs.len(), model.config.copies(), effects)
}

/// Direct conic solve of the max-lambda program.
///
/// Returns lambda accurate to `tol`; the extracted POVM satisfies the
/// marginal identities at the reported sharpness to within 10 * tol.
pub fn solve(model: &SdpModel, tol: f64) -> Result<SolveReport> {
    let start = now();
    let trivial = uniform_point_residual(model);
    if trivial > 1e-9 {
        return Ok(SolveReport {
            status: SolveStatus::Infeasible,
            lambda_star: 0.0,
            boundary: false,
            lambda_raw: 0.0,
            povm: None,
            primal_residual: trivial,
            dual_residual: 0.0,
            dual_gap: 0.0,
            iterations: 0,
            wall_time_ms: elapsed_ms(&start),
            diagnostic: Some(format!(
                "uniform point violates the constraints by {trivial:.3e}; the model is malformed"
            )),
        });
    }
    let conic = model.to_conic();
    let opts = IpmOptions { tol: tol.clamp(1e-12, 1e-8), max_iter: 100 };
    let sol = ipm::solve(&conic, opts);
    let worst = sol.primal_residual.max(sol.dual_residual);
    let status = match sol.status {
        IpmStatus::Converged => SolveStatus::Optimal,
        _ if worst <= 100.0 * tol && sol.mu <= 100.0 * tol => SolveStatus::Optimal,
        _ => SolveStatus::NumericalFailure,
    };
    // primal value and dual bound bracket the optimum; their midpoint
    // halves the gap error
    let lambda_mid = 0.5 * (-sol.primal_obj - sol.dual_obj);
    let lambda_raw =
        if status == SolveStatus::Optimal && lambda_mid.is_finite() { lambda_mid } else { sol.scalars[0] };
    let boundary = status == SolveStatus::Optimal && lambda_raw >= 1.0 - BOUNDARY_MARGIN;
    let lambda_star = if boundary { 1.0 } else { lambda_raw.clamp(0.0, 1.0) };
    let povm = extract_povm(model, &sol.mat_blocks).ok();
    Ok(SolveReport {
        status,
        lambda_star,
        boundary,
        lambda_raw,
        povm,
        primal_residual: sol.primal_residual,
        dual_residual: sol.dual_residual,
        dual_gap: (sol.primal_obj - sol.dual_obj).abs(),
        iterations: sol.iterations,
        wall_time_ms: elapsed_ms(&start),
        diagnostic: match status {
            SolveStatus::NumericalFailure => Some(format!(
                "residuals {:.3e}/{:.3e} exceed 100 * tol after {} iterations",
                sol.primal_residual, sol.dual_residual, sol.iterations
            )),
            _ => None,
        },
    })
}

/// Positivity margin t at fixed lambda: the largest t with all effects
/// >= t I under the marginal constraints. Nonnegative iff lambda is
/// feasible; strictly positive below the threshold.
pub fn feasibility_margin(model: &SdpModel, lambda: f64, tol: f64) -> Result<f64> {
    let conic = model.to_feasibility_conic(lambda);
    let opts = IpmOptions { tol: (tol * 0.1).clamp(1e-12, 1e-10), max_iter: 100 };
    let sol = ipm::solve(&conic, opts);
    let worst = sol.primal_residual.max(sol.dual_residual);
    if sol.status != IpmStatus::Converged && worst > 100.0 * tol {
        return Err(Error::NumericalFailure(format!(
            "margin subproblem at lambda {lambda} stalled with residuals {worst:.3e}"
        )));
    }
    let mid = 0.5 * (-sol.primal_obj - sol.dual_obj);
    let t_shifted = if mid.is_finite() { mid } else { sol.scalars[0] };
    Ok(t_shifted - 1.0)
}

/// Result of the bisection fallback.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BisectionReport {
    pub lambda_star: f64,
    pub iterations: usize,
    pub bracket_width: f64,
}

/// Bisection on lambda over strict-feasibility subproblems; the mandatory
/// cross-validation path for [`solve`]. 40 iterations shrink the bracket
/// below 1e-12.
pub fn solve_bisection(model: &SdpModel, tol: f64, iterations: usize) -> Result<BisectionReport> {
    if feasibility_margin(model, 1.0, tol)? >= 0.0 {
        return Ok(BisectionReport { lambda_star: 1.0, iterations: 1, bracket_width: 0.0 });
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if feasibility_margin(model, mid, tol)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BisectionReport {
        lambda_star: 0.5 * (lo + hi),
        iterations,
        bracket_width: hi - lo,
    })
}

/// Optimal joint-measurability sharpness for the set on the configuration,
/// via the direct program (with the bisection path as fallback on numerical
/// failure). Clamped to [0, 1].
pub fn threshold(obs: &ObservableSet, config: Configuration, tol: f64) -> Result<f64> {
    let model = assemble_threshold_sdp(obs, config)?;
    let report = solve(&model, tol)?;
    match report.status {
        SolveStatus::Optimal => Ok(report.lambda_star),
        SolveStatus::Infeasible => Err(Error::NumericalFailure(
            report.diagnostic.unwrap_or_else(|| "infeasible model".into()),
        )),
        SolveStatus::NumericalFailure => {
            let bis = solve_bisection(&model, tol, 40)?;
            let lambda = if bis.lambda_star >= 1.0 - BOUNDARY_MARGIN { 1.0 } else { bis.lambda_star };
            Ok(lambda)
        }
    }
}

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian operator.
///
/// PSD-equivalent to its input with every eigenvalue doubled in
/// multiplicity; the standard reduction when a solver only offers real
/// cones (the built-in solver works on Hermitian cones directly, so this is
/// interop and cross-checking machinery).
pub fn hermitian_real_embedding(op: &Operator) -> Result<Operator> {
    if !op.is_hermitian(TOL_HERM) {
        return Err(Error::NotHermitian { residual: op.hermiticity_residual(), tol: TOL_HERM });
    }
    let d = op.dim();
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = op.get(i, j);
            m[(i, j)] = C64::new(z.re, 0.0);
            m[(i, j + d)] = C64::new(-z.im, 0.0);
            m[(i + d, j)] = C64::new(z.im, 0.0);
            m[(i + d, j + d)] = C64::new(z.re, 0.0);
        }
    }
    Operator::from_matrix(m)
}

/// Smallest copy count k <= k_max at which the set becomes perfectly
/// jointly measurable on [k]; k_max + 1 when none is found.
pub fn index_of_incompatibility(obs: &ObservableSet, k_max: usize, tol: f64) -> Result<usize> {
    if k_max < 1 {
        return Err(Error::EmptyInput("k_max must be >= 1".into()));
    }
    for k in 1..=k_max {
        let lambda = threshold(obs, Configuration::Parallel(k), tol)?;
        if lambda >= 1.0 - 10.0 * tol {
            return Ok(k);
        }
    }
    Ok(k_max + 1)
}

/// Per-point result in the angle sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepStatus {
    Optimal,
    Boundary,
    Failed,
}

impl std::fmt::Display for SweepStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepStatus::Optimal => write!(f, "optimal"),
            SweepStatus::Boundary => write!(f, "boundary"),
            SweepStatus::Failed => write!(f, "failed"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub lambda_parallel2: f64,
    pub lambda_antiparallel11: f64,
    pub status2: SweepStatus,
    pub status11: SweepStatus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub tol: f64,
    pub rows: Vec<SweepRow>,
}

/// Default sweep grid: 199 interior points j pi / 200.
pub fn default_theta_grid() -> Vec<f64> {
    (1..200).map(|j| std::f64::consts::PI * j as f64 / 200.0).collect()
}

/// Formats with 12 significant digits, plain decimal.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn sweep_point(theta: f64, tol: f64) -> SweepRow {
    let run = |config: Configuration| -> (f64, SweepStatus) {
        match theta_family(theta).and_then(|set| {
            let model = assemble_threshold_sdp(&set, config)?;
            solve(&model, tol)
        }) {
            Ok(report) if report.status == SolveStatus::Optimal => {
                let status =
                    if report.boundary { SweepStatus::Boundary } else { SweepStatus::Optimal };
                (report.lambda_star, status)
            }
            _ => (f64::NAN, SweepStatus::Failed),
        }
    };
    let (l2, s2) = run(Configuration::Parallel(2));
    let (l11, s11) = run(Configuration::AntiParallel);
    SweepRow { theta, lambda_parallel2: l2, lambda_antiparallel11: l11, status2: s2, status11: s11 }
}

/// Thresholds of the symmetric triple on both two-copy configurations over
/// a theta grid. Failed points are flagged in their status columns rather
/// than aborting the sweep.
pub fn sweep_theta(grid: &[f64], tol: f64) -> SweepTable {
    #[cfg(feature = "parallel")]
    let rows: Vec<SweepRow> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&theta| sweep_point(theta, tol)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<SweepRow> = grid.iter().map(|&theta| sweep_point(theta, tol)).collect();
    SweepTable { tol, rows }
}

impl SweepTable {
    /// CSV rendering, 12 significant digits, byte-stable for a fixed grid
    /// and tolerance.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,lambda_parallel2,lambda_antiparallel11,status2,status11\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                format_significant(r.theta, 12),
                format_significant(r.lambda_parallel2, 12),
                format_significant(r.lambda_antiparallel11, 12),
                r.status2,
                r.status11
            ));
        }
        out
    }
}

/// Maximal grid intervals on which the two configurations order the
/// thresholds differently relative to a reference angle. An isolated grid
/// point does not constitute an interval; at least two consecutive flagged
/// points are required.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReversalRegions {
    pub theta_ref: f64,
    pub lambda2_ref: f64,
    pub lambda11_ref: f64,
    /// Differences smaller than this count as ties and never flag.
    pub sign_tol: f64,
    /// Sign of the two comparisons differs (a tie on one side counts).
    pub intervals: Vec<[f64; 2]>,
    /// Both comparisons strict and opposite: the pointwise ordering
    /// reversal itself.
    pub strict_intervals: Vec<[f64; 2]>,
}

/// Scans the sweep for angles theta where sign(l2(theta) - l2(ref)) and
/// sign(l11(theta) - l11(ref)) differ, with differences below `sign_tol`
/// treated as ties. A tie on one side with a strict difference on the other
/// counts: the configurations then disagree about how theta compares to the
/// reference.
pub fn reversal_regions(table: &SweepTable, theta_ref: f64, tol: f64) -> Result<ReversalRegions> {
    let set = theta_family(theta_ref)?;
    let lambda2_ref = threshold(&set, Configuration::Parallel(2), tol)?;
    let lambda11_ref = threshold(&set, Configuration::AntiParallel, tol)?;
    let sign_tol = 1e-6f64.max(10.0 * tol);
    let sign = |d: f64| {
        if d > sign_tol {
            1i8
        } else if d < -sign_tol {
            -1i8
        } else {
            0i8
        }
    };
    let mut intervals: Vec<[f64; 2]> = Vec::new();
    let mut open: Option<[f64; 2]> = None;
    for row in &table.rows {
        let usable = row.status2 != SweepStatus::Failed && row.status11 != SweepStatus::Failed;
        let flagged = usable
            && sign(row.lambda_parallel2 - lambda2_ref)
                != sign(row.lambda_antiparallel11 - lambda11_ref);
        match (&mut open, flagged) {
            (None, true) => open = Some([row.theta, row.theta]),
            (Some(iv), true) => iv[1] = row.theta,
            (Some(iv), false) => {
                intervals.push(*iv);
                open = None;
            }
            (None, false) => {}
        }
    }
    if let Some(iv) = open {
        intervals.push(iv);
    }
    Ok(ReversalRegions { theta_ref, lambda2_ref, lambda11_ref, sign_tol, intervals })
}

/// Threshold comparison of one pair at one copy count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KComparison {
    pub k: usize,
    pub first: f64,
    pub second: f64,
    /// Strictly opposite ordering to the single-copy one.
    pub reversed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureEntry {
    pub first_label: String,
    pub second_label: String,
    pub single_copy_first: f64,
    pub single_copy_second: f64,
    pub per_k: Vec<KComparison>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureScanReport {
    pub tol: f64,
    pub entries: Vec<ConjectureEntry>,
    pub reversals: usize,
}

/// For each pair (O, O') with |O| <= |O'|, records the single-copy
/// threshold ordering and the [k] orderings for k <= k_max, flagging any
/// strict reversal. Ties within 2 tol never flag. Makes no claim beyond
/// the scanned instances.
pub fn conjecture_scan(
    pairs: &[(ObservableSet, ObservableSet)],
    k_max: usize,
    tol: f64,
) -> Result<ConjectureScanReport> {
    let margin = 2.0 * tol;
    let sign = |d: f64| {
        if d > margin {
            1i8
        } else if d < -margin {
            -1i8
        } else {
            0i8
        }
    };
    let mut entries = Vec::with_capacity(pairs.len());
    let mut reversals = 0usize;
    for (first, second) in pairs {
        if first.len() > second.len() {
            return Err(Error::InvalidSet(format!(
                "pair ({}, {}) must be ordered by size",
                first.label(),
                second.label()
            )));
        }
        let l1_first = threshold(first, Configuration::Single, tol)?;
        let l1_second = threshold(second, Configuration::Single, tol)?;
        let base_sign = sign(l1_first - l1_second);
        let mut per_k = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let lk_first = threshold(first, Configuration::Parallel(k), tol)?;
            let lk_second = threshold(second, Configuration::Parallel(k), tol)?;
            let k_sign = sign(lk_first - lk_second);
            let reversed = base_sign * k_sign == -1;
            if reversed {
                reversals += 1;
            }
            per_k.push(KComparison { k, first: lk_first, second: lk_second, reversed });
        }
        entries.push(ConjectureEntry {
            first_label: first.label().to_string(),
            second_label: second.label().to_string(),
            single_copy_first: l1_first,
            single_copy_second: l1_second,
            per_k,
        });
    }
    Ok(ConjectureScanReport { tol, entries, reversals })
}

/// Verifies the report invariant: an optimal solve's POVM must pass
/// verification at lambda_star with tolerance 10 * solver tolerance.
pub fn check_report_invariant(model: &SdpModel, report: &SolveReport, tol: f64) -> Result<()> {
    if report.status != SolveStatus::Optimal {
        return Ok(());
    }
    let povm = report
        .povm
        .as_ref()
        .ok_or_else(|| Error::NumericalFailure("optimal report lacks a povm".into()))?;
    let check = verify_povm(
        povm,
        model.configuration(),
        model.observables(),
        report.lambda_star,
        10.0 * tol,
    )?;
    if !check.pass {
        return Err(Error::NumericalFailure(format!(
            "extracted povm misses the marginal identities by {:.3e}",
            check.max_residual
        )));
    }
    Ok(())
}

/// Convenience map of named threshold values used for pretty-printing:
/// recognizable surds within 1e-9 of a computed threshold.
pub fn recognized_surd(lambda: f64) -> Option<&'static str> {
    let sq2 = std::f64::consts::SQRT_2;
    let sq3 = 3f64.sqrt();
    let table: [(f64, &'static str); 5] = [
        (sq3 / 2.0, "sqrt(3)/2"),
        (2.0 * sq2 / 3.0, "2*sqrt(2)/3"),
        (1.0 / sq3, "1/sqrt(3)"),
        (1.0 / sq2, "1/sqrt(2)"),
        (3.0 * (sq3 - sq2), "3/(sqrt(3)+sqrt(2))"),
    ];
    table.iter().find(|(v, _)| (lambda - v).abs() < 1e-9).map(|(_, s)| *s)
}

/// Serialization shim: BTreeMap keeps sweep JSON output deterministic.
pub fn sweep_summary_json(table: &SweepTable, regions: &ReversalRegions) -> serde_json::Value {
    let mut map = BTreeMap::new();
    map.insert("rows", serde_json::to_value(&table.rows).unwrap());
    map.insert("reversal_regions", serde_json::to_value(regions).unwrap());
    serde_json::to_value(map).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, Axis, BlochVector};
    use crate::observables::{mub, sytri, ObservableSet};
    use approx::assert_abs_diff_eq;

    fn orthogonal_pair() -> ObservableSet {
        ObservableSet::new("xz", vec![BlochVector::X, BlochVector::Z]).unwrap()
    }

    #[test]
    fn assemble_shapes_sytri_parallel2() {
        let model = assemble_threshold_sdp(&sytri(), Configuration::Parallel(2)).unwrap();
        assert_eq!(model.n_outcomes(), 8);
        assert_eq!(model.block_dim(), 4);
        assert_eq!(model.constraints().len(), 4);
        let conic = model.to_conic();
        assert_eq!(conic.mat_dims, vec![4; 8]);
        // 4 operator constraints * 16 words + the lambda box row
        assert_eq!(conic.rows.len(), 4 * 16 + 1);
    }

    #[test]
    fn assemble_rejects_unsupported() {
        let err = assemble_threshold_sdp(&mub(), Configuration::Parallel(5));
        assert!(matches!(err, Err(Error::UnsupportedConfiguration(_))));
    }

    #[test]
    fn antiparallel_lambda_coefficient_is_antisymmetric() {
        let model = assemble_threshold_sdp(&mub(), Configuration::AntiParallel).unwrap();
        // marginal for x direction: M = (sigma_x (x) I - I (x) sigma_x)/4
        let m = &model.constraints()[1].lambda_coef;
        let i2 = Operator::identity(2);
        let expect = (&crate::linalg::tensor(&pauli(Axis::X), &i2)
            - &crate::linalg::tensor(&i2, &pauli(Axis::X)))
            .scale(0.25);
        assert!(m.distance(&expect) < 1e-14);
    }

    #[test]
    fn single_observable_reaches_unit_sharpness() {
        let set = ObservableSet::new("z", vec![BlochVector::Z]).unwrap();
        let model = assemble_threshold_sdp(&set, Configuration::Single).unwrap();
        let report = solve(&model, DEFAULT_TOL).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!(report.boundary, "lambda_raw = {}", report.lambda_raw);
        assert_abs_diff_eq!(report.lambda_star, 1.0);
    }

    #[test]
    fn orthogonal_pair_single_copy_threshold() {
        let lambda = threshold(&orthogonal_pair(), Configuration::Single, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(lambda, 1.0 / 2f64.sqrt(), epsilon = 1e-6);
    }

    #[test]
    fn mub_single_copy_threshold() {
        let lambda = threshold(&mub(), Configuration::Single, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(lambda, 1.0 / 3f64.sqrt(), epsilon = 1e-6);
    }

    #[test]
    fn mub_two_copy_threshold() {
        let lambda = threshold(&mub(), Configuration::Parallel(2), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(lambda, 3f64.sqrt() / 2.0, epsilon = 1e-6);
    }

    #[test]
    fn report_invariant_holds_for_mub_parallel2() {
        let model = assemble_threshold_sdp(&mub(), Configuration::Parallel(2)).unwrap();
        let report = solve(&model, DEFAULT_TOL).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        check_report_invariant(&model, &report, DEFAULT_TOL).unwrap();
    }

    #[test]
    fn bisection_agrees_with_direct_path() {
        let model = assemble_threshold_sdp(&mub(), Configuration::Single).unwrap();
        let direct = solve(&model, DEFAULT_TOL).unwrap();
        let bis = solve_bisection(&model, DEFAULT_TOL, 40).unwrap();
        assert!(
            (direct.lambda_star - bis.lambda_star).abs() <= 2.0 * DEFAULT_TOL,
            "direct {} vs bisection {}",
            direct.lambda_star,
            bis.lambda_star
        );
        assert!(bis.bracket_width < 1e-11);
    }

    #[test]
    fn margin_positive_below_threshold_negative_above() {
        let model = assemble_threshold_sdp(&mub(), Configuration::Single).unwrap();
        let below = feasibility_margin(&model, 0.5, DEFAULT_TOL).unwrap();
        assert!(below > 1e-4, "margin {below}");
        let above = feasibility_margin(&model, 0.65, DEFAULT_TOL).unwrap();
        assert!(above < -1e-4, "margin {above}");
    }

    #[test]
    fn embedding_small_cases() {
        let e = hermitian_real_embedding(&Operator::identity(2)).unwrap();
        assert!(e.distance(&Operator::identity(4)) < 1e-15);

        let e = hermitian_real_embedding(&pauli(Axis::Y)).unwrap();
        assert!(e.is_hermitian(1e-14));
        let eigs = e.eigvalsh().unwrap();
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[2], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn embedding_preserves_min_eigenvalue() {
        let mut rng = crate::linalg::test_support::rng(73);
        for _ in 0..100 {
            let h = crate::linalg::test_support::random_hermitian(4, &mut rng);
            let emb = hermitian_real_embedding(&h).unwrap();
            let a = h.min_eigenvalue().unwrap();
            let b = emb.min_eigenvalue().unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn embedding_rejects_non_hermitian() {
        let m = Operator::from_rows(
            2,
            &[C64::new(0., 0.), C64::new(1., 0.), C64::new(0., 0.), C64::new(0., 0.)],
        )
        .unwrap();
        assert!(hermitian_real_embedding(&m).is_err());
    }

    #[test]
    fn index_single_observable_is_one() {
        let set = ObservableSet::new("z", vec![BlochVector::Z]).unwrap();
        assert_eq!(index_of_incompatibility(&set, 3, DEFAULT_TOL).unwrap(), 1);
    }

    #[test]
    fn conjecture_scan_identical_sets_no_reversal() {
        let report = conjecture_scan(&[(mub(), mub())], 1, DEFAULT_TOL).unwrap();
        assert_eq!(report.reversals, 0);
        assert!(!report.entries[0].per_k[0].reversed);
    }

    #[test]
    fn conjecture_scan_rejects_misordered_pair() {
        let err = conjecture_scan(&[(sytri(), orthogonal_pair())], 1, DEFAULT_TOL);
        assert!(matches!(err, Err(Error::InvalidSet(_))));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.9428090415820634, 12), "0.942809041582");
        assert_eq!(format_significant(1.0, 12), "1.00000000000");
        assert_eq!(format_significant(f64::NAN, 12), "nan");
        assert_eq!(format_significant(3.0377e-5, 12), "0.0000303770000000");
    }

    #[test]
    fn recognized_surds() {
        assert_eq!(recognized_surd(0.9428090415820634), Some("2*sqrt(2)/3"));
        assert_eq!(recognized_surd(0.5773502691896258), Some("1/sqrt(3)"));
        assert_eq!(recognized_surd(0.42), None);
    }
}
