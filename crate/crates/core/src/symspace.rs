//! Symmetric-subspace machinery: Dicke basis, symmetric projector,
//! Vandermonde determinants and tensor-power span ranks.
//!
//! The point of this module is the copy-counting obstruction: on k = N - 1
//! copies, the N-fold tensor powers of any N distinct qubit states span the
//! whole symmetric subspace Sym^k(C^2), so a parent POVM reproducing N sharp
//! spin observables would have to live on the orthogonal complement, which is
//! too small to sum to the identity.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bloch_ket, tensor_vec, C64, CVector, Operator};
use crate::observables::ObservableSet;

/// Relative singular-value cutoff for numerical rank.
pub const RANK_CUTOFF: f64 = 1e-10;

fn binomial(n: usize, r: usize) -> u64 {
    let r = r.min(n - r);
    let mut acc = 1u64;
    for k in 0..r {
        acc = acc * (n - k) as u64 / (k + 1) as u64;
    }
    acc
}

fn tensor_power(v: &CVector, n: usize) -> CVector {
    let mut out = v.clone();
    for _ in 1..n {
        out = tensor_vec(&out, v);
    }
    out
}

/// Normalized Dicke state of `n` qubits with `r` excitations: the equal
/// superposition of all computational strings of Hamming weight `r`.
pub fn dicke_state(n: usize, r: usize) -> Result<CVector> {
    if n == 0 {
        return Err(Error::EmptyInput("dicke_state needs n >= 1".into()));
    }
    if r > n {
        return Err(Error::IndexOutOfRange { index: r, len: n + 1 });
    }
    let dim = 1usize << n;
    let amp = 1.0 / (binomial(n, r) as f64).sqrt();
    let mut v = CVector::zeros(dim);
    for basis in 0..dim {
        if basis.count_ones() as usize == r {
            v[basis] = C64::new(amp, 0.0);
        }
    }
    Ok(v)
}

/// Orthonormal Dicke basis of Sym^n(C^2); n + 1 vectors.
#[derive(Debug, Clone)]
pub struct DickeBasis {
    n_qubits: usize,
    vectors: Vec<CVector>,
}

impl DickeBasis {
    pub fn new(n_qubits: usize) -> Result<Self> {
        let vectors: Vec<CVector> =
            (0..=n_qubits).map(|r| dicke_state(n_qubits, r)).collect::<Result<_>>()?;
        Ok(DickeBasis { n_qubits, vectors })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Projector onto the permutation-symmetric subspace of (C^2)^(x n);
/// rank n + 1.
pub fn symmetric_projector(n: usize) -> Result<Operator> {
    let basis = DickeBasis::new(n)?;
    let mut p = Operator::zeros(1 << n);
    for v in basis.vectors() {
        p = &p + &Operator::outer(v);
    }
    Ok(p)
}

/// Vandermonde determinant prod_{i<j} (z_j - z_i); nonzero iff all nodes are
/// distinct.
pub fn vandermonde_det(z: &[C64]) -> Result<C64> {
    if z.is_empty() {
        return Err(Error::EmptyInput("vandermonde nodes".into()));
    }
    let mut det = C64::new(1.0, 0.0);
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            det *= z[j] - z[i];
        }
    }
    Ok(det)
}

/// Numerical rank of the matrix whose columns are the n-fold tensor powers
/// |psi_i>^(x n).
///
/// Rank counts singular values above [`RANK_CUTOFF`] relative to the largest.
pub fn tensor_power_span_dim(states: &[CVector], n: usize) -> Result<usize> {
    if states.is_empty() {
        return Err(Error::EmptyInput("tensor_power_span_dim states".into()));
    }
    if n == 0 {
        return Err(Error::EmptyInput("tensor power n must be >= 1".into()));
    }
    for s in states {
        let norm: f64 = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState { norm });
        }
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, states.len());
    for (col, s) in states.iter().enumerate() {
        let tp = tensor_power(s, n);
        m.set_column(col, &tp);
    }
    let sv = m.svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > RANK_CUTOFF * max).count())
}

/// Dimensional accounting for the copy-counting obstruction on k = N - 1
/// copies of a distinct-direction set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthogonalityWitness {
    pub n_observables: usize,
    /// Copy number k = N - 1.
    pub copies: usize,
    /// dim Sym^k(C^2) = N.
    pub sym_dim: usize,
    /// Dimension left over for every effect: 2^(N-1) - N.
    pub complement_dim: usize,
    /// Computed span dimension per outcome sign pattern (2^N entries,
    /// pattern bit r set means a_r = -1).
    pub span_dims: Vec<usize>,
    /// Whether every pattern's span filled the symmetric subspace.
    pub all_spans_full: bool,
    /// complement_dim == 0: effects would vanish outright.
    pub impossibility_immediate: bool,
}

/// For each outcome pattern a, computes the span of the (N-1)-fold tensor
/// powers of the flipped eigenstates |psi_{-a_r n_r}> and compares it with
/// Sym^(N-1)(C^2).
///
/// A parent POVM measuring all N observables sharply on N - 1 copies would
/// need every effect supported on the orthogonal complement, of dimension
/// 2^(N-1) - N; the effects then cannot sum to the identity (for N = 2 the
/// complement is already empty).
pub fn prop1_orthogonality_witness(obs: &ObservableSet) -> Result<OrthogonalityWitness> {
    let n_obs = obs.len();
    if n_obs < 2 {
        return Err(Error::InvalidSet("need at least two observables".into()));
    }
    let copies = n_obs - 1;
    let sym_dim = n_obs;
    let full_dim = 1usize << copies;
    let complement_dim = full_dim - sym_dim;

    let mut span_dims = Vec::with_capacity(1 << n_obs);
    for pattern in 0..(1usize << n_obs) {
        let mut states = Vec::with_capacity(n_obs);
        for (r, dir) in obs.directions().iter().enumerate() {
            // a_r = +1 unless bit r of the pattern is set
            let a_r = if (pattern >> r) & 1 == 0 { 1.0 } else { -1.0 };
            let flipped = dir.scale(-a_r);
            states.push(bloch_ket(&flipped)?);
        }
        span_dims.push(tensor_power_span_dim(&states, copies)?);
    }
    let all_spans_full = span_dims.iter().all(|&d| d == sym_dim);
    Ok(OrthogonalityWitness {
        n_observables: n_obs,
        copies,
        sym_dim,
        complement_dim,
        span_dims,
        all_spans_full,
        impossibility_immediate: complement_dim == 0,
    })
}
