//! Parent POVMs, marginal identities and certificate verification.
//!
//! A parent POVM for N spin observables is indexed by outcome sign strings
//! a in {+1,-1}^N. Joint measurability at sharpness lambda means its partial
//! outcome sums hit configuration-dependent marginal targets:
//!
//! - single copy: P_{a_r n_r}(lambda),
//! - k identical copies: the k-slot average
//!   (1/k) sum_j I .. P_{a_r n_r}(lambda) .. I,
//! - antiparallel pair: (P_{a_r n_r}(lambda) (x) I + I (x) P_{-a_r n_r}(lambda))/2.
//!
//! The module also carries the closed-form optimal POVMs for the triangle
//! and tetrahedron sets, which certify the thresholds the SDPs find.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    bloch_ket, flip_unitary, pair_bracket, pauli, symmetrize3, tensor, tensor_all, tensor_vec,
    unsharp_effect, Axis, BlochVector, Operator, Sign, C64,
};
use crate::observables::{sytet, sytri, t_axis, ObservableSet};

/// Probe arrangement the parent measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Configuration {
    /// One qubit per run.
    Single,
    /// k identical copies, rho^(x k).
    Parallel(usize),
    /// One copy alongside its spin-flipped partner. Only the (1,1) pair is
    /// operator-characterized, so no copy counts are carried here.
    AntiParallel,
}

impl Configuration {
    pub fn copies(&self) -> usize {
        match self {
            Configuration::Single => 1,
            Configuration::Parallel(k) => *k,
            Configuration::AntiParallel => 2,
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        1 << self.copies()
    }

    fn validate(&self) -> Result<()> {
        if let Configuration::Parallel(0) = self {
            return Err(Error::UnsupportedConfiguration("parallel copy count must be >= 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Configuration::Single => write!(f, "single"),
            Configuration::Parallel(k) => write!(f, "parallel:{k}"),
            Configuration::AntiParallel => write!(f, "antiparallel"),
        }
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cfg = match s {
            "single" => Configuration::Single,
            "antiparallel" => Configuration::AntiParallel,
            other => {
                let k = other
                    .strip_prefix("parallel:")
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::UnsupportedConfiguration(format!(
                            "cannot parse '{other}', expected single | parallel:k | antiparallel"
                        ))
                    })?;
                Configuration::Parallel(k)
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl TryFrom<String> for Configuration {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Configuration> for String {
    fn from(c: Configuration) -> String {
        c.to_string()
    }
}

/// Outcome sign string helpers. Outcomes are stored as bitmasks with bit r
/// set when a_r = -1, so mask 0 is the all-plus string.
pub fn sign_of(mask: usize, r: usize) -> Sign {
    if (mask >> r) & 1 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Renders e.g. mask 0b0110 over 4 observables as "+1-1-1+1".
pub fn format_outcome(mask: usize, n_observables: usize) -> String {
    (0..n_observables).map(|r| sign_of(mask, r).to_string()).collect()
}

/// Inverse of [`format_outcome`].
pub fn parse_outcome(s: &str, n_observables: usize) -> Result<usize> {
    let bytes: Vec<char> = s.chars().collect();
    if bytes.len() != 2 * n_observables {
        return Err(Error::Schema(format!(
            "outcome string '{s}' must have {n_observables} signs"
        )));
    }
    let mut mask = 0usize;
    for r in 0..n_observables {
        match (bytes[2 * r], bytes[2 * r + 1]) {
            ('+', '1') => {}
            ('-', '1') => mask |= 1 << r,
            _ => return Err(Error::Schema(format!("invalid outcome string '{s}'"))),
        }
    }
    Ok(mask)
}

/// Outcome-indexed family of effects on (C^2)^(x copies).
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    n_observables: usize,
    copies: usize,
    effects: Vec<Operator>,
}

impl Povm {
    /// Builds from a dense effect table of length 2^N. Shapes and
    /// Hermiticity are enforced here; positivity and completeness are the
    /// verifier's business.
    pub fn new(n_observables: usize, copies: usize, effects: Vec<Operator>) -> Result<Self> {
        if effects.len() != 1 << n_observables {
            return Err(Error::ShapeMismatch(format!(
                "expected {} effects for {n_observables} observables, got {}",
                1 << n_observables,
                effects.len()
            )));
        }
        let dim = 1 << copies;
        for (mask, e) in effects.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "effect {} has dim {}, expected {dim}",
                    format_outcome(mask, n_observables),
                    e.dim()
                )));
            }
            if !e.is_hermitian(1e-10) {
                return Err(Error::NotHermitian { residual: e.hermiticity_residual(), tol: 1e-10 });
            }
        }
        Ok(Povm { n_observables, copies, effects })
    }

    pub fn n_observables(&self) -> usize {
        self.n_observables
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn dim(&self) -> usize {
        1 << self.copies
    }

    pub fn n_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effect(&self, mask: usize) -> Result<&Operator> {
        self.effects.get(mask).ok_or(Error::IndexOutOfRange { index: mask, len: self.effects.len() })
    }

    pub fn effects(&self) -> &[Operator] {
        &self.effects
    }

    /// Sum of all effects; identity for a valid POVM.
    pub fn completeness_sum(&self) -> Operator {
        let mut sum = Operator::zeros(self.dim());
        for e in &self.effects {
            sum = &sum + e;
        }
        sum
    }

    /// Partial outcome sum over all strings whose r-th sign equals `a`.
    pub fn marginal(&self, r: usize, a: Sign) -> Result<Operator> {
        if r >= self.n_observables {
            return Err(Error::IndexOutOfRange { index: r, len: self.n_observables });
        }
        let mut sum = Operator::zeros(self.dim());
        for (mask, e) in self.effects.iter().enumerate() {
            if sign_of(mask, r) == a {
                sum = &sum + e;
            }
        }
        Ok(sum)
    }

    /// Largest positivity violation over effects: max(0, -min eigenvalue).
    pub fn positivity_violation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for e in &self.effects {
            if e.max_abs() == 0.0 {
                continue;
            }
            worst = worst.max(-e.min_eigenvalue()?).max(0.0);
        }
        Ok(worst)
    }

    /// Bloch vector of the first-slot reduction of each nonzero effect,
    /// v_axis = Tr[E (sigma_axis (x) I ..)] / Tr[E].
    pub fn reduced_first_slot_blochs(&self) -> Result<Vec<(usize, BlochVector)>> {
        let mut out = Vec::new();
        let rest_dim = self.dim() / 2;
        for (mask, e) in self.effects.iter().enumerate() {
            let tr = e.trace().re;
            if e.max_abs() == 0.0 {
                continue;
            }
            let mut v = [0.0; 3];
            for (k, axis) in Axis::ALL.iter().enumerate() {
                let probe = tensor(&pauli(*axis), &Operator::identity(rest_dim.max(2)));
                let probe = if rest_dim == 1 { pauli(*axis) } else { probe };
                v[k] = (&probe * e).trace().re / tr;
            }
            out.push((mask, BlochVector(v)));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PovmJson {
    n_observables: usize,
    copies: usize,
    effects: BTreeMap<String, Operator>,
}

impl Serialize for Povm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut effects = BTreeMap::new();
        for (mask, e) in self.effects.iter().enumerate() {
            if e.max_abs() > 0.0 {
                effects.insert(format_outcome(mask, self.n_observables), e.clone());
            }
        }
        PovmJson { n_observables: self.n_observables, copies: self.copies, effects }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PovmJson::deserialize(d)?;
        let mut effects = vec![Operator::zeros(1 << raw.copies); 1 << raw.n_observables];
        for (key, op) in raw.effects {
            let mask = parse_outcome(&key, raw.n_observables).map_err(serde::de::Error::custom)?;
            effects[mask] = op;
        }
        Povm::new(raw.n_observables, raw.copies, effects).map_err(serde::de::Error::custom)
    }
}

/// Marginal target operator for observable direction `n`, outcome `a` and
/// sharpness `lambda` on the given configuration.
pub fn target_marginal(
    config: Configuration,
    n: &BlochVector,
    a: Sign,
    lambda: f64,
) -> Result<Operator> {
    config.validate()?;
    let effect = unsharp_effect(n, a, lambda)?;
    match config {
        Configuration::Single => Ok(effect),
        Configuration::Parallel(k) => {
            let id = Operator::identity(2);
            let mut sum = Operator::zeros(1 << k);
            for slot in 0..k {
                let factors: Vec<&Operator> =
                    (0..k).map(|j| if j == slot { &effect } else { &id }).collect();
                sum = &sum + &tensor_all(&factors)?;
            }
            Ok(sum.scale(1.0 / k as f64))
        }
        Configuration::AntiParallel => {
            let id = Operator::identity(2);
            let flipped = unsharp_effect(&n.neg(), a, lambda)?;
            Ok((&tensor(&effect, &id) + &tensor(&id, &flipped)).scale(0.5))
        }
    }
}

/// Residual of one marginal identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintResidual {
    pub r: usize,
    pub a: Sign,
    pub residual: f64,
}

/// Outcome of verifying a POVM against the marginal identities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginalReport {
    pub lambda: f64,
    pub tolerance: f64,
    pub completeness_residual: f64,
    pub positivity_violation: f64,
    pub per_constraint: Vec<ConstraintResidual>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Checks positivity, completeness and every (r, a_r) marginal identity of
/// `povm` against the targets at sharpness `lambda`; passes iff the largest
/// residual (including any positivity violation) stays within `tol`.
pub fn verify_povm(
    povm: &Povm,
    config: Configuration,
    obs: &ObservableSet,
    lambda: f64,
    tol: f64,
) -> Result<MarginalReport> {
    config.validate()?;
    if povm.copies() != config.copies() {
        return Err(Error::ShapeMismatch(format!(
            "povm acts on {} copies but configuration {config} needs {}",
            povm.copies(),
            config.copies()
        )));
    }
    if povm.n_observables() != obs.len() {
        return Err(Error::ShapeMismatch(format!(
            "povm indexes {} observables but the set has {}",
            povm.n_observables(),
            obs.len()
        )));
    }
    let completeness_residual =
        povm.completeness_sum().distance(&Operator::identity(povm.dim()));
    let positivity_violation = povm.positivity_violation()?;

    let mut per_constraint = Vec::with_capacity(2 * obs.len());
    let mut max_residual = completeness_residual.max(positivity_violation);
    for (r, dir) in obs.directions().iter().enumerate() {
        for a in Sign::BOTH {
            let got = povm.marginal(r, a)?;
            let want = target_marginal(config, dir, a, lambda)?;
            let residual = got.distance(&want);
            max_residual = max_residual.max(residual);
            per_constraint.push(ConstraintResidual { r, a, residual });
        }
    }
    Ok(MarginalReport {
        lambda,
        tolerance: tol,
        completeness_residual,
        positivity_violation,
        per_constraint,
        max_residual,
        pass: max_residual <= tol,
    })
}

/// Max deviation between the POVM's outcome statistics and the target
/// observable statistics over the given probe states.
///
/// This checks the statistics-level condition directly (probability traces
/// against rho^(x k) or rho (x) rho-flipped), independent of the
/// operator-equality route used by [`verify_povm`].
pub fn statistics_check(
    povm: &Povm,
    config: Configuration,
    obs: &ObservableSet,
    lambda: f64,
    states: &[BlochVector],
) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::EmptyInput("statistics_check states".into()));
    }
    if povm.copies() != config.copies() || povm.n_observables() != obs.len() {
        return Err(Error::ShapeMismatch("povm does not match configuration/set".into()));
    }
    let mut worst = 0.0f64;
    for m in states {
        if m.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidState { norm: m.norm() });
        }
        let rho = crate::linalg::bloch_state(m)?;
        let probe = match config {
            Configuration::Single => rho.clone(),
            Configuration::Parallel(k) => {
                let refs: Vec<&Operator> = (0..k).map(|_| &rho).collect();
                tensor_all(&refs)?
            }
            Configuration::AntiParallel => {
                let flipped = crate::linalg::bloch_state(&m.neg())?;
                tensor(&rho, &flipped)
            }
        };
        for (r, dir) in obs.directions().iter().enumerate() {
            for a in Sign::BOTH {
                let p_got = (&povm.marginal(r, a)? * &probe).trace().re;
                let p_want = (&unsharp_effect(dir, a, lambda)? * &rho).trace().re;
                worst = worst.max((p_got - p_want).abs());
            }
        }
    }
    Ok(worst)
}

/// Which way the equatorial-plane conjugation is applied. The map is its own
/// inverse; the direction only documents intent at the call site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformDirection {
    ParallelToAntiparallel,
    AntiparallelToParallel,
}

/// Conjugates the second tensor slot of every effect by the pi-rotation
/// about `plane_normal`, turning a two-copy parallel parent POVM for an
/// equatorial set into an antiparallel one and vice versa.
pub fn prop2_transform(
    povm: &Povm,
    plane_normal: &BlochVector,
    _direction: TransformDirection,
) -> Result<Povm> {
    if povm.copies() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "prop2_transform needs a two-copy povm, got {} copies",
            povm.copies()
        )));
    }
    let u = tensor(&Operator::identity(2), &flip_unitary(plane_normal)?);
    let effects: Vec<Operator> =
        povm.effects().iter().map(|e| e.conjugate_by(&u)).collect::<Result<_>>()?;
    Povm::new(povm.n_observables(), povm.copies(), effects)
}

/// Sign string realized by a primitive outcome direction `v`: a_r is the
/// sign of n_r . v over the tetrahedron directions.
fn sytet_outcome_mask(v: &BlochVector) -> usize {
    let mut mask = 0usize;
    for (r, n) in sytet().directions().iter().enumerate() {
        if n.dot(v) < 0.0 {
            mask |= 1 << r;
        }
    }
    mask
}

/// The six primitive outcome directions +-x, +-y, +-z.
fn axis_outcomes() -> Vec<BlochVector> {
    let mut v = Vec::with_capacity(6);
    for axis in Axis::ALL {
        v.push(axis.unit());
        v.push(axis.unit().neg());
    }
    v
}

/// Single-qubit parent POVM for the tetrahedron set: effects P_{+-alpha}/3
/// on the six axis outcomes, relabeled to {+-1}^4 sign strings.
///
/// Certifies the single-copy threshold lambda = 1/sqrt(3). (The weight 1/3
/// is forced by completeness: six rank-1 effects on a qubit must have
/// average trace 1/3.)
pub fn build_sytet_single_povm() -> Povm {
    let mut effects = vec![Operator::zeros(2); 16];
    for v in axis_outcomes() {
        let p = crate::linalg::spin_projector(&v, Sign::Plus).expect("unit axis");
        effects[sytet_outcome_mask(&v)] = p.scale(1.0 / 3.0);
    }
    Povm::new(4, 1, effects).expect("shapes fixed")
}

/// Two-qubit antiparallel parent POVM for the tetrahedron set: the six
/// rank-1 effects (2/3)|xi_{+-alpha}><xi_{+-alpha}| with
/// |xi_v> = ((sqrt3+1)/(2 sqrt2)) |v,-v> + ((sqrt3-1)/(2 sqrt2)) |-v,v>,
/// relabeled to {+-1}^4 sign strings.
///
/// Certifies perfect joint measurability (lambda = 1) on the antiparallel
/// configuration.
pub fn build_sytet_antiparallel_povm() -> Povm {
    let sq2 = 2f64.sqrt();
    let sq3 = 3f64.sqrt();
    let c_major = C64::new((sq3 + 1.0) / (2.0 * sq2), 0.0);
    let c_minor = C64::new((sq3 - 1.0) / (2.0 * sq2), 0.0);
    let mut effects = vec![Operator::zeros(4); 16];
    for v in axis_outcomes() {
        let ket_v = bloch_ket(&v).expect("unit axis");
        let ket_flip = bloch_ket(&v.neg()).expect("unit axis");
        let xi = tensor_vec(&ket_v, &ket_flip) * c_major + tensor_vec(&ket_flip, &ket_v) * c_minor;
        effects[sytet_outcome_mask(&v)] = Operator::outer(&xi).scale(2.0 / 3.0);
    }
    Povm::new(4, 2, effects).expect("shapes fixed")
}

/// Three-copy parent POVM for the tetrahedron set, from its closed-form
/// coefficient table over the three-slot symmetrizer basis.
///
/// Certifies the three-copy threshold lambda = 3/(sqrt3 + sqrt2).
pub fn build_sytet_3copy_povm() -> Povm {
    let sq2 = 2f64.sqrt();
    let sq3 = 3f64.sqrt();
    let sq6 = 6f64.sqrt();
    let k = 1.0 / 576.0;
    let a = 6.0 * k * (2.0 * sq2 - 2.0 * sq3 + 1.0);
    let b1 = 9.0 * k * (10.0 * sq2 - 14.0 * sq3 - 4.0 * sq6 + 25.0);
    let c1 = 6.0 * k * (-22.0 * sq2 + 30.0 * sq3 + 8.0 * sq6 - 35.0);
    let b2 = 4.0 * k * (8.0 * sq3 - 4.0 * (3.0 * (sq3 + 2.0)).sqrt() + 3.0);
    let c2 = 8.0 * k * (6.0 * sq2 - 8.0 * sq3 - 10.0 * sq6 + 33.0);
    let b3 = 3.0 * k * (10.0 * sq2 - 2.0 * sq3 * (6.0 * sq2 + 7.0) + 41.0);
    let c3 = 2.0 * k * (22.0 * sq2 - 30.0 * sq3 - 40.0 * sq6 + 131.0);
    let b4 = 12.0 * k * (sq6 - 2.0);
    let c4 = 2.0 * k * (-22.0 * sq2 + 30.0 * sq3 + 16.0 * sq6 - 59.0);
    let b5 = 4.0 * k * (-8.0 * sq3 - 2.0 * (6.0 * (7.0 - 4.0 * sq3)).sqrt() + 15.0);
    let c5 = 2.0 * b5;
    let b6 = 12.0 * k * (-6.0 * sq2 + 8.0 * sq3 + 2.0 * sq6 - 9.0);
    let c6 = 2.0 * b6;

    let (i2, x, y, z) = (Operator::identity(2), pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z));
    // basis operators in table column order
    let basis: Vec<Operator> = vec![
        tensor_all(&[&i2, &i2, &i2]).unwrap(),
        symmetrize3(&x, &i2, &i2).unwrap(),
        symmetrize3(&y, &i2, &i2).unwrap(),
        symmetrize3(&z, &i2, &i2).unwrap(),
        symmetrize3(&i2, &x, &x).unwrap(),
        symmetrize3(&i2, &y, &y).unwrap(),
        symmetrize3(&i2, &z, &z).unwrap(),
        symmetrize3(&x, &y, &i2).unwrap(),
        symmetrize3(&y, &z, &i2).unwrap(),
        symmetrize3(&z, &x, &i2).unwrap(),
        symmetrize3(&x, &y, &y).unwrap(),
        symmetrize3(&y, &x, &x).unwrap(),
        symmetrize3(&y, &z, &z).unwrap(),
        symmetrize3(&z, &y, &y).unwrap(),
        symmetrize3(&z, &x, &x).unwrap(),
        symmetrize3(&x, &z, &z).unwrap(),
        tensor_all(&[&x, &x, &x]).unwrap(),
        tensor_all(&[&y, &y, &y]).unwrap(),
        tensor_all(&[&z, &z, &z]).unwrap(),
    ];

    // rows: (sign string a0 a1 a2 a3, 19 coefficients in column order)
    #[rustfmt::skip]
    let rows: [([i8; 4], [f64; 19]); 16] = [
        ([ 1, 1, 1, 1], [3.0*a, 0.0,0.0,0.0, -a,-a,-a, 0.0,0.0,0.0, 0.0,0.0,0.0,0.0,0.0,0.0, 0.0,0.0,0.0]),
        ([-1,-1,-1,-1], [3.0*a, 0.0,0.0,0.0, -a,-a,-a, 0.0,0.0,0.0, 0.0,0.0,0.0,0.0,0.0,0.0, 0.0,0.0,0.0]),
        ([ 1,-1,-1,-1], [b1,  b2, b2, b2, -b3,-b3,-b3,  b4, b4, b4,  b5, b5, b5, b5, b5, b5, -b6,-b6,-b6]),
        ([-1, 1, 1, 1], [b1, -b2,-b2,-b2, -b3,-b3,-b3,  b4, b4, b4, -b5,-b5,-b5,-b5,-b5,-b5,  b6, b6, b6]),
        ([-1, 1,-1,-1], [b1,  b2,-b2,-b2, -b3,-b3,-b3, -b4, b4,-b4,  b5,-b5,-b5,-b5,-b5, b5, -b6, b6, b6]),
        ([ 1,-1, 1, 1], [b1, -b2, b2, b2, -b3,-b3,-b3, -b4, b4,-b4, -b5, b5, b5, b5, b5,-b5,  b6,-b6,-b6]),
        ([-1,-1, 1,-1], [b1, -b2, b2,-b2, -b3,-b3,-b3, -b4,-b4, b4, -b5, b5, b5,-b5,-b5,-b5,  b6,-b6, b6]),
        ([ 1, 1,-1, 1], [b1,  b2,-b2, b2, -b3,-b3,-b3, -b4,-b4, b4,  b5,-b5,-b5, b5, b5, b5, -b6, b6,-b6]),
        ([-1,-1,-1, 1], [b1, -b2,-b2, b2, -b3,-b3,-b3,  b4,-b4,-b4, -b5,-b5,-b5, b5, b5,-b5,  b6, b6,-b6]),
        ([ 1, 1, 1,-1], [b1,  b2, b2,-b2, -b3,-b3,-b3,  b4,-b4,-b4,  b5, b5, b5,-b5,-b5, b5, -b6,-b6, b6]),
        ([-1,-1, 1, 1], [c1, -c2,0.0,0.0,  c3,-c4,-c4, 0.0,0.0,0.0,  c5,0.0,0.0,0.0,0.0, c5, -c6,0.0,0.0]),
        ([ 1, 1,-1,-1], [c1,  c2,0.0,0.0,  c3,-c4,-c4, 0.0,0.0,0.0, -c5,0.0,0.0,0.0,0.0,-c5,  c6,0.0,0.0]),
        ([-1, 1,-1, 1], [c1, 0.0,-c2,0.0, -c4, c3,-c4, 0.0,0.0,0.0, 0.0, c5, c5,0.0,0.0,0.0, 0.0,-c6,0.0]),
        ([ 1,-1, 1,-1], [c1, 0.0, c2,0.0, -c4, c3,-c4, 0.0,0.0,0.0, 0.0,-c5,-c5,0.0,0.0,0.0, 0.0, c6,0.0]),
        ([-1, 1, 1,-1], [c1, 0.0,0.0,-c2, -c4,-c4, c3, 0.0,0.0,0.0, 0.0,0.0,0.0, c5, c5,0.0, 0.0,0.0,-c6]),
        ([ 1,-1,-1, 1], [c1, 0.0,0.0, c2, -c4,-c4, c3, 0.0,0.0,0.0, 0.0,0.0,0.0,-c5,-c5,0.0, 0.0,0.0, c6]),
    ];

    let mut effects = vec![Operator::zeros(8); 16];
    for (signs, coefs) in rows {
        let mut mask = 0usize;
        for (r, s) in signs.iter().enumerate() {
            if *s < 0 {
                mask |= 1 << r;
            }
        }
        let mut op = Operator::zeros(8);
        for (c, b) in coefs.iter().zip(basis.iter()) {
            if *c != 0.0 {
                op = &op + &b.scale(*c);
            }
        }
        effects[mask] = op;
    }
    Povm::new(4, 3, effects).expect("shapes fixed")
}

/// Coefficient rows of the two-copy triangle POVM: for each sign string,
/// (identity, single-Pauli x/y/z, symmetric cross xy/yz/zx, squared x/y/z).
#[rustfmt::skip]
const SYTRI_ROWS: [([i8; 3], [f64; 10]); 8] = [
    ([ 1, 1, 1], [1.0,  0.0, 0.0, 0.0,  0.0, 0.0, 0.0, -9.0,-9.0,-9.0]),
    ([ 1, 1,-1], [5.0,  1.0, 1.0,-2.0,  2.0,-1.0,-1.0, -5.0,-5.0,19.0]),
    ([ 1,-1, 1], [5.0,  1.0,-2.0, 1.0, -1.0,-1.0, 2.0, -5.0,19.0,-5.0]),
    ([ 1,-1,-1], [5.0,  2.0,-1.0,-1.0, -1.0, 2.0,-1.0, 19.0,-5.0,-5.0]),
    ([-1, 1, 1], [5.0, -2.0, 1.0, 1.0, -1.0, 2.0,-1.0, 19.0,-5.0,-5.0]),
    ([-1, 1,-1], [5.0, -1.0, 2.0,-1.0, -1.0,-1.0, 2.0, -5.0,19.0,-5.0]),
    ([-1,-1, 1], [5.0, -1.0,-1.0, 2.0,  2.0,-1.0,-1.0, -5.0,-5.0,19.0]),
    ([-1,-1,-1], [1.0,  0.0, 0.0, 0.0,  0.0, 0.0, 0.0, -9.0,-9.0,-9.0]),
];

fn build_sytri_from_rows() -> Povm {
    let (i2, x, y, z) = (Operator::identity(2), pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z));
    let sq3 = 3f64.sqrt();
    let plus = |a: &Operator, b: &Operator| pair_bracket(a, b, Sign::Plus).unwrap();
    let mut effects = vec![Operator::zeros(4); 8];
    for (signs, c) in SYTRI_ROWS {
        let mut mask = 0usize;
        for (r, s) in signs.iter().enumerate() {
            if *s < 0 {
                mask |= 1 << r;
            }
        }
        let mut op = tensor(&i2, &i2).scale(c[0] / 4.0);
        let singles = &(&plus(&x, &i2).scale(c[1]) + &plus(&y, &i2).scale(c[2]))
            + &plus(&z, &i2).scale(c[3]);
        op = &op + &singles.scale(2.0 / (3.0 * sq3));
        let crosses = &(&plus(&x, &y).scale(c[4]) + &plus(&y, &z).scale(c[5]))
            + &plus(&z, &x).scale(c[6]);
        op = &op + &crosses.scale(2.0 / 9.0);
        let squares = &(&tensor(&x, &x).scale(c[7]) + &tensor(&y, &y).scale(c[8]))
            + &tensor(&z, &z).scale(c[9]);
        op = &op + &squares.scale(1.0 / 36.0);
        effects[mask] = op.scale(1.0 / 8.0);
    }
    Povm::new(3, 2, effects).expect("shapes fixed")
}

/// Two-copy parallel parent POVM for the triangle set, from its closed-form
/// coefficient table; certifies lambda = 2 sqrt(2) / 3.
pub fn build_sytri_parallel_povm() -> Povm {
    build_sytri_from_rows()
}

/// Antiparallel variant of the triangle POVM: the parallel effects with the
/// second slot conjugated by the pi rotation about the triangle plane normal
/// (1,1,1)/sqrt(3); certifies the same threshold 2 sqrt(2) / 3.
pub fn build_sytri_antiparallel_povm() -> Povm {
    prop2_transform(
        &build_sytri_parallel_povm(),
        &t_axis(),
        TransformDirection::ParallelToAntiparallel,
    )
    .expect("triangle povm is two-copy")
}

/// The named closed-form POVMs, with their set, configuration and certified
/// sharpness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinPovm {
    SytetSingle,
    SytriParallel,
    SytriAntiparallel,
    Sytet3Copy,
    SytetAntiparallel,
}

impl BuiltinPovm {
    pub const ALL: [BuiltinPovm; 5] = [
        BuiltinPovm::SytetSingle,
        BuiltinPovm::SytriParallel,
        BuiltinPovm::SytriAntiparallel,
        BuiltinPovm::Sytet3Copy,
        BuiltinPovm::SytetAntiparallel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinPovm::SytetSingle => "sytet-single",
            BuiltinPovm::SytriParallel => "sytri-parallel",
            BuiltinPovm::SytriAntiparallel => "sytri-antiparallel",
            BuiltinPovm::Sytet3Copy => "sytet-3copy",
            BuiltinPovm::SytetAntiparallel => "sytet-antiparallel",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::Schema(format!("unknown builtin povm '{name}'")))
    }

    pub fn build(&self) -> Povm {
        match self {
            BuiltinPovm::SytetSingle => build_sytet_single_povm(),
            BuiltinPovm::SytriParallel => build_sytri_parallel_povm(),
            BuiltinPovm::SytriAntiparallel => build_sytri_antiparallel_povm(),
            BuiltinPovm::Sytet3Copy => build_sytet_3copy_povm(),
            BuiltinPovm::SytetAntiparallel => build_sytet_antiparallel_povm(),
        }
    }

    pub fn observable_set(&self) -> ObservableSet {
        match self {
            BuiltinPovm::SytriParallel | BuiltinPovm::SytriAntiparallel => sytri(),
            _ => sytet(),
        }
    }

    pub fn configuration(&self) -> Configuration {
        match self {
            BuiltinPovm::SytetSingle => Configuration::Single,
            BuiltinPovm::SytriParallel => Configuration::Parallel(2),
            BuiltinPovm::SytriAntiparallel => Configuration::AntiParallel,
            BuiltinPovm::Sytet3Copy => Configuration::Parallel(3),
            BuiltinPovm::SytetAntiparallel => Configuration::AntiParallel,
        }
    }

    /// The sharpness this construction certifies.
    pub fn claimed_lambda(&self) -> f64 {
        match self {
            BuiltinPovm::SytetSingle => 1.0 / 3f64.sqrt(),
            BuiltinPovm::SytriParallel | BuiltinPovm::SytriAntiparallel => 2.0 * 2f64.sqrt() / 3.0,
            BuiltinPovm::Sytet3Copy => 3.0 / (3f64.sqrt() + 2f64.sqrt()),
            BuiltinPovm::SytetAntiparallel => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hs_decompose, sigma_dot, spin_projector, test_support};
    use crate::observables::mub;
    use approx::assert_abs_diff_eq;

    #[test]
    fn configuration_roundtrip_and_dims() {
        for (s, c, dim) in [
            ("single", Configuration::Single, 2),
            ("parallel:3", Configuration::Parallel(3), 8),
            ("antiparallel", Configuration::AntiParallel, 4),
        ] {
            let parsed: Configuration = s.parse().unwrap();
            assert_eq!(parsed, c);
            assert_eq!(parsed.hilbert_dim(), dim);
            assert_eq!(parsed.to_string(), s);
        }
        assert!("parallel:0".parse::<Configuration>().is_err());
        assert!("bogus".parse::<Configuration>().is_err());
    }

    #[test]
    fn outcome_string_roundtrip() {
        for mask in 0..16usize {
            let s = format_outcome(mask, 4);
            assert_eq!(parse_outcome(&s, 4).unwrap(), mask);
        }
        assert_eq!(format_outcome(0b0110, 4), "+1-1-1+1");
        assert!(parse_outcome("+1+1", 4).is_err());
    }

    #[test]
    fn marginal_single_pair_povm_is_effect() {
        let e_plus = unsharp_effect(&BlochVector::Z, Sign::Plus, 0.7).unwrap();
        let e_minus = unsharp_effect(&BlochVector::Z, Sign::Minus, 0.7).unwrap();
        let povm = Povm::new(1, 1, vec![e_plus.clone(), e_minus.clone()]).unwrap();
        assert!(povm.marginal(0, Sign::Plus).unwrap().distance(&e_plus) < 1e-15);
        assert!(povm.marginal(0, Sign::Minus).unwrap().distance(&e_minus) < 1e-15);
    }

    #[test]
    fn marginals_partition_completeness_sum() {
        let povm = build_sytri_parallel_povm();
        for r in 0..3 {
            let total = &povm.marginal(r, Sign::Plus).unwrap() + &povm.marginal(r, Sign::Minus).unwrap();
            assert!(total.distance(&povm.completeness_sum()) < 1e-14);
        }
        assert!(povm.marginal(3, Sign::Plus).is_err());
    }

    #[test]
    fn antiparallel_sytet_marginal_is_axis_effect_sum() {
        let povm = build_sytet_antiparallel_povm();
        // outcome strings realized by +x, +y, +z all have a_0 = +1
        let m = povm.marginal(0, Sign::Plus).unwrap();
        let mut expect = Operator::zeros(4);
        for axis in Axis::ALL {
            let v = axis.unit();
            expect = &expect + povm.effect(sytet_outcome_mask(&v)).unwrap();
        }
        assert!(m.distance(&expect) < 1e-14);
    }

    #[test]
    fn target_marginal_single_sharp_is_projector() {
        let t = target_marginal(Configuration::Single, &BlochVector::X, Sign::Minus, 1.0).unwrap();
        assert!(t.distance(&spin_projector(&BlochVector::X, Sign::Minus).unwrap()) < 1e-15);
    }

    #[test]
    fn target_marginal_three_copies_matches_symmetrizer_form() {
        let lambda = 3.0 / (3f64.sqrt() + 2f64.sqrt());
        for n in sytet().directions() {
            let t = target_marginal(Configuration::Parallel(3), n, Sign::Plus, lambda).unwrap();
            let s = symmetrize3(&sigma_dot(n), &Operator::identity(2), &Operator::identity(2)).unwrap();
            let expect = (&Operator::identity(8).scale(3.0) + &s.scale(lambda)).scale(1.0 / 6.0);
            assert!(t.distance(&expect) < 1e-14);
        }
    }

    #[test]
    fn target_marginal_antiparallel_tetrahedron_axis() {
        let n0 = sytet().directions()[0];
        let t = target_marginal(Configuration::AntiParallel, &n0, Sign::Plus, 1.0).unwrap();
        let i2 = Operator::identity(2);
        let mut expect = Operator::identity(4).scale(0.5);
        let coef = 3f64.sqrt() / 12.0;
        for axis in Axis::ALL {
            let s = pauli(axis);
            expect = &expect + &(&tensor(&s, &i2) - &tensor(&i2, &s)).scale(coef);
        }
        assert!(t.distance(&expect) < 1e-14);
    }

    #[test]
    fn verify_thm1_antiparallel_at_unit_sharpness() {
        let povm = build_sytet_antiparallel_povm();
        let report = verify_povm(&povm, Configuration::AntiParallel, &sytet(), 1.0, 1e-12).unwrap();
        assert!(report.pass, "max residual {}", report.max_residual);
        assert!(report.max_residual < 1e-12);
    }

    #[test]
    fn verify_sytri_table_at_optimum_and_fail_above() {
        let povm = build_sytri_parallel_povm();
        let lam = 2.0 * 2f64.sqrt() / 3.0;
        let ok = verify_povm(&povm, Configuration::Parallel(2), &sytri(), lam, 1e-12).unwrap();
        assert!(ok.pass, "max residual {}", ok.max_residual);

        let bad = verify_povm(&povm, Configuration::Parallel(2), &sytri(), 0.95, 1e-12).unwrap();
        assert!(!bad.pass);
        assert!(bad.max_residual > 1e-3);
    }

    #[test]
    fn verify_rejects_mismatched_shapes() {
        let povm = build_sytri_parallel_povm();
        assert!(verify_povm(&povm, Configuration::Single, &sytri(), 0.9, 1e-10).is_err());
        assert!(verify_povm(&povm, Configuration::Parallel(2), &sytet(), 0.9, 1e-10).is_err());
    }

    #[test]
    fn thm1_effects_rank_one_trace_two_thirds() {
        let povm = build_sytet_antiparallel_povm();
        let mut nonzero = 0;
        for e in povm.effects() {
            if e.max_abs() == 0.0 {
                continue;
            }
            nonzero += 1;
            assert_abs_diff_eq!(e.trace().re, 2.0 / 3.0, epsilon = 1e-14);
            let eigs = e.eigvalsh().unwrap();
            assert!(eigs[..3].iter().all(|v| v.abs() < 1e-12));
            assert_abs_diff_eq!(eigs[3], 2.0 / 3.0, epsilon = 1e-13);
        }
        assert_eq!(nonzero, 6);
        assert!(povm.completeness_sum().distance(&Operator::identity(4)) < 1e-12);
    }

    #[test]
    fn thm1_effect_matches_hilbert_schmidt_form() {
        let povm = build_sytet_antiparallel_povm();
        let i2 = Operator::identity(2);
        // (alpha, beta, gamma) cyclic; + sign for the +alpha outcome
        for (axis, beta, gamma) in
            [(Axis::X, Axis::Y, Axis::Z), (Axis::Y, Axis::Z, Axis::X), (Axis::Z, Axis::X, Axis::Y)]
        {
            for sign in Sign::BOTH {
                let v = axis.unit().scale(sign.value());
                let e = povm.effect(sytet_outcome_mask(&v)).unwrap();
                let s = pauli(axis);
                let expect = (&(&(&tensor(&i2, &i2).scale(2.0)
                    - &tensor(&s, &s).scale(2.0))
                    + &pair_bracket(&s, &i2, Sign::Minus).unwrap().scale(sign.value() * 3f64.sqrt()))
                    + &(&tensor(&pauli(beta), &pauli(beta)) + &tensor(&pauli(gamma), &pauli(gamma))))
                    .scale(1.0 / 12.0);
                assert!(e.distance(&expect) < 1e-13);
            }
        }
    }

    #[test]
    fn sytri_table_first_row_coefficients() {
        let povm = build_sytri_parallel_povm();
        let e = povm.effect(0).unwrap();
        let c = hs_decompose(e);
        // row (+1,+1,+1): only II, XX, YY, ZZ present
        assert_abs_diff_eq!(c.get("II"), (1.0 / 4.0) / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.get("XX"), -9.0 / 36.0 / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.get("YY"), -9.0 / 36.0 / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.get("ZZ"), -9.0 / 36.0 / 8.0, epsilon = 1e-14);
        for w in ["XI", "IX", "YI", "IY", "ZI", "IZ", "XY", "YX", "YZ", "ZY", "ZX", "XZ"] {
            assert_abs_diff_eq!(c.get(w), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn sytri_header_misreading_breaks_positivity() {
        // the same rows with the cross column YZ treated as YX stay complete
        // and keep the marginals, but produce an indefinite effect
        let (i2, x, y, z) =
            (Operator::identity(2), pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z));
        let sq3 = 3f64.sqrt();
        let plus = |a: &Operator, b: &Operator| pair_bracket(a, b, Sign::Plus).unwrap();
        let mut effects = vec![Operator::zeros(4); 8];
        for (signs, c) in SYTRI_ROWS {
            let mut mask = 0usize;
            for (r, s) in signs.iter().enumerate() {
                if *s < 0 {
                    mask |= 1 << r;
                }
            }
            let mut op = tensor(&i2, &i2).scale(c[0] / 4.0);
            op = &op
                + &(&(&plus(&x, &i2).scale(c[1]) + &plus(&y, &i2).scale(c[2]))
                    + &plus(&z, &i2).scale(c[3]))
                    .scale(2.0 / (3.0 * sq3));
            // misreading: second cross term as <Y,X>+ instead of <Y,Z>+
            op = &op
                + &(&(&plus(&x, &y).scale(c[4]) + &plus(&y, &x).scale(c[5]))
                    + &plus(&z, &x).scale(c[6]))
                    .scale(2.0 / 9.0);
            op = &op
                + &(&(&tensor(&x, &x).scale(c[7]) + &tensor(&y, &y).scale(c[8]))
                    + &tensor(&z, &z).scale(c[9]))
                    .scale(1.0 / 36.0);
            effects[mask] = op.scale(1.0 / 8.0);
        }
        let povm = Povm::new(3, 2, effects).unwrap();
        let lam = 2.0 * 2f64.sqrt() / 3.0;
        let report = verify_povm(&povm, Configuration::Parallel(2), &sytri(), lam, 1e-12).unwrap();
        assert!(!report.pass);
        assert!(report.positivity_violation > 1e-3);
    }

    #[test]
    fn sytri_antiparallel_passes_result2_marginals() {
        let povm = build_sytri_antiparallel_povm();
        let lam = 2.0 * 2f64.sqrt() / 3.0;
        let report = verify_povm(&povm, Configuration::AntiParallel, &sytri(), lam, 1e-12).unwrap();
        assert!(report.pass, "max residual {}", report.max_residual);
    }

    #[test]
    fn sytet_3copy_first_row_structure() {
        let povm = build_sytet_3copy_povm();
        let a = 6.0 / 576.0 * (2.0 * 2f64.sqrt() - 2.0 * 3f64.sqrt() + 1.0);
        let i2 = Operator::identity(2);
        let mut pair_terms = Operator::zeros(8);
        for axis in Axis::ALL {
            pair_terms = &pair_terms + &symmetrize3(&i2, &pauli(axis), &pauli(axis)).unwrap();
        }
        let expect = &Operator::identity(8).scale(3.0 * a) - &pair_terms.scale(a);
        assert!(povm.effect(0).unwrap().distance(&expect) < 1e-14);
    }

    #[test]
    fn sytet_3copy_passes_at_claimed_threshold() {
        let povm = build_sytet_3copy_povm();
        let lam = 3.0 / (3f64.sqrt() + 2f64.sqrt());
        let report = verify_povm(&povm, Configuration::Parallel(3), &sytet(), lam, 1e-12).unwrap();
        assert!(report.pass, "max residual {}", report.max_residual);
        assert!(report.positivity_violation < 1e-10);
    }

    #[test]
    fn sytet_single_passes_at_inverse_sqrt3() {
        let povm = build_sytet_single_povm();
        for e in povm.effects() {
            if e.max_abs() > 0.0 {
                assert_abs_diff_eq!(e.trace().re, 1.0 / 3.0, epsilon = 1e-14);
            }
        }
        assert!(povm.completeness_sum().distance(&Operator::identity(2)) < 1e-14);
        let report =
            verify_povm(&povm, Configuration::Single, &sytet(), 1.0 / 3f64.sqrt(), 1e-12).unwrap();
        assert!(report.pass, "max residual {}", report.max_residual);
    }

    #[test]
    fn all_builtins_positive_and_complete() {
        for b in BuiltinPovm::ALL {
            let povm = b.build();
            assert!(povm.positivity_violation().unwrap() < 1e-10, "{}", b.name());
            assert!(
                povm.completeness_sum().distance(&Operator::identity(povm.dim())) < 1e-10,
                "{}",
                b.name()
            );
            let report =
                verify_povm(&povm, b.configuration(), &b.observable_set(), b.claimed_lambda(), 1e-10)
                    .unwrap();
            assert!(report.pass, "{} residual {}", b.name(), report.max_residual);
        }
    }

    #[test]
    fn operator_verification_implies_statistics() {
        let mut rng = test_support::rng(67);
        let states: Vec<BlochVector> =
            (0..50).map(|_| crate::observables::random_direction(&mut rng)).collect();
        for b in BuiltinPovm::ALL {
            let dev = statistics_check(
                &b.build(),
                b.configuration(),
                &b.observable_set(),
                b.claimed_lambda(),
                &states,
            )
            .unwrap();
            assert!(dev < 1e-12, "{} deviation {dev}", b.name());
        }
    }

    #[test]
    fn statistics_thm1_haar_states() {
        let mut rng = test_support::rng(71);
        let states: Vec<BlochVector> =
            (0..500).map(|_| crate::observables::random_direction(&mut rng)).collect();
        let dev = statistics_check(
            &build_sytet_antiparallel_povm(),
            Configuration::AntiParallel,
            &sytet(),
            1.0,
            &states,
        )
        .unwrap();
        assert!(dev < 1e-12, "max deviation {dev}");
    }

    #[test]
    fn statistics_uniform_povm_at_zero_sharpness() {
        // effects I/2^N reproduce lambda = 0 targets exactly
        let n = 3;
        let effects = vec![Operator::identity(2).scale(1.0 / 8.0); 8];
        let povm = Povm::new(n, 1, effects).unwrap();
        let states = vec![BlochVector::Z, BlochVector::new(0.2, -0.3, 0.1)];
        let dev = statistics_check(&povm, Configuration::Single, &mub(), 0.0, &states).unwrap();
        assert_abs_diff_eq!(dev, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn statistics_table2_on_mixed_grid() {
        let mut states = Vec::new();
        for i in 0..5 {
            for j in 0..4 {
                let r = i as f64 / 5.0;
                let phi = j as f64;
                states.push(BlochVector::new(
                    r * phi.cos() * 0.8,
                    r * phi.sin() * 0.8,
                    (1.0 - r * r).sqrt() * 0.5,
                ));
            }
        }
        let dev = statistics_check(
            &build_sytet_3copy_povm(),
            Configuration::Parallel(3),
            &sytet(),
            3.0 / (3f64.sqrt() + 2f64.sqrt()),
            &states,
        )
        .unwrap();
        assert!(dev < 1e-10, "max deviation {dev}");
    }

    #[test]
    fn prop2_transform_is_involution_and_preserves_spectra() {
        let povm = build_sytri_parallel_povm();
        let once = prop2_transform(&povm, &t_axis(), TransformDirection::ParallelToAntiparallel)
            .unwrap();
        let twice = prop2_transform(&once, &t_axis(), TransformDirection::AntiparallelToParallel)
            .unwrap();
        for (a, b) in twice.effects().iter().zip(povm.effects()) {
            assert!(a.distance(b) < 1e-13);
        }
        for (a, b) in once.effects().iter().zip(povm.effects()) {
            let ea = a.eigvalsh().unwrap();
            let eb = b.eigvalsh().unwrap();
            for (x, y) in ea.iter().zip(eb.iter()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
        }
        assert!(once.completeness_sum().distance(&Operator::identity(4)) < 1e-12);
    }

    #[test]
    fn prop2_transform_of_antiparallel_passes_parallel_verify() {
        let anti = build_sytri_antiparallel_povm();
        let back = prop2_transform(&anti, &t_axis(), TransformDirection::AntiparallelToParallel)
            .unwrap();
        let lam = 2.0 * 2f64.sqrt() / 3.0;
        let report = verify_povm(&back, Configuration::Parallel(2), &sytri(), lam, 1e-12).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn prop2_transform_rejects_wrong_copies() {
        let povm = build_sytet_single_povm();
        assert!(prop2_transform(&povm, &t_axis(), TransformDirection::ParallelToAntiparallel)
            .is_err());
    }

    #[test]
    fn remark_octahedron_geometry() {
        let povm = build_sytet_antiparallel_povm();
        let blochs = povm.reduced_first_slot_blochs().unwrap();
        assert_eq!(blochs.len(), 6);
        let expect_len = 3f64.sqrt() / 2.0;
        for (_, v) in &blochs {
            assert_abs_diff_eq!(v.norm(), expect_len, epsilon = 1e-12);
        }
        for i in 0..6 {
            for j in (i + 1)..6 {
                let ang = blochs[i].1.angle_to(&blochs[j].1).to_degrees();
                assert!(
                    (ang - 90.0).abs() < 1e-9 || (ang - 180.0).abs() < 1e-9,
                    "angle {ang}"
                );
            }
        }
    }

    #[test]
    fn thm1_outcome_difference_has_only_antisymmetric_single_terms() {
        let povm = build_sytet_antiparallel_povm();
        let mut diff = Operator::zeros(4);
        for axis in Axis::ALL {
            let p = povm.effect(sytet_outcome_mask(&axis.unit())).unwrap();
            let m = povm.effect(sytet_outcome_mask(&axis.unit().neg())).unwrap();
            diff = &diff + &(p - m);
        }
        let c = hs_decompose(&diff);
        for (word, coef) in c.iter() {
            let weight = word.chars().filter(|ch| *ch != 'I').count();
            if weight != 1 {
                assert_abs_diff_eq!(*coef, 0.0, epsilon = 1e-13);
            }
        }
        for axis in ["X", "Y", "Z"] {
            let first = c.get(&format!("{axis}I"));
            let second = c.get(&format!("I{axis}"));
            assert_abs_diff_eq!(first, -second, epsilon = 1e-13);
            assert!(first.abs() > 1e-3);
        }
    }

    #[test]
    fn povm_json_roundtrip() {
        let povm = build_sytet_antiparallel_povm();
        let json = serde_json::to_string(&povm).unwrap();
        let back: Povm = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n_observables(), 4);
        assert_eq!(back.copies(), 2);
        for (a, b) in back.effects().iter().zip(povm.effects()) {
            assert!(a.distance(b) < 1e-15);
        }
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["effects"].as_object().unwrap().len(), 6);
    }
}
