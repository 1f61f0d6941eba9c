//! Dense complex operator algebra on small multi-qubit spaces.
//!
//! Everything here is plain dense linear algebra over `Complex64`: Pauli
//! matrices, Bloch-vector states and effects, Kronecker products, the
//! Hilbert–Schmidt (Pauli word) basis, and Hermitian eigenvalue checks.
//! Dimensions in this crate never exceed 16x16, so no sparse machinery.
//!
//! All values are immutable after construction and every operation is a
//! pure function.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default tolerance for Hermiticity checks.
pub const TOL_HERM: f64 = 1e-12;
/// Default tolerance for positive semidefiniteness checks.
pub const TOL_PSD: f64 = 1e-9;

/// Measurement outcome sign, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: f64) -> Result<Sign> {
        if v == 1.0 {
            Ok(Sign::Plus)
        } else if v == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::Schema(format!("outcome sign must be +1 or -1, got {v}")))
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Real 3-vector in the Bloch ball / sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub const X: BlochVector = BlochVector([1.0, 0.0, 0.0]);
    pub const Y: BlochVector = BlochVector([0.0, 1.0, 0.0]);
    pub const Z: BlochVector = BlochVector([0.0, 0.0, 1.0]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &BlochVector) -> BlochVector {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        BlochVector([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> BlochVector {
        BlochVector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn neg(&self) -> BlochVector {
        self.scale(-1.0)
    }

    pub fn normalized(&self) -> Result<BlochVector> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::InvalidDirection { norm: n });
        }
        Ok(self.scale(1.0 / n))
    }

    /// Angle to another vector, in radians.
    pub fn angle_to(&self, other: &BlochVector) -> f64 {
        let c = (self.dot(other) / (self.norm() * other.norm())).clamp(-1.0, 1.0);
        c.acos()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    fn require_unit(&self) -> Result<()> {
        if self.is_unit(1e-12) {
            Ok(())
        } else {
            Err(Error::InvalidDirection { norm: self.norm() })
        }
    }
}

/// Dense complex operator on (C^2)^(⊗n).
///
/// Wraps a square `DMatrix<Complex64>` whose dimension is a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: CMatrix,
}

impl Operator {
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c {
            return Err(Error::ShapeMismatch(format!("operator must be square, got {r}x{c}")));
        }
        if !r.is_power_of_two() || r < 2 {
            return Err(Error::ShapeMismatch(format!(
                "operator dimension must be 2^n with n >= 1, got {r}"
            )));
        }
        Ok(Operator { mat })
    }

    /// Construct from a row-major slice of complex entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Operator::from_matrix(CMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { mat: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Operator { mat: CMatrix::identity(dim, dim) }
    }

    /// Rank-1 projector |v><v| from a (not necessarily normalized) vector.
    pub fn outer(v: &CVector) -> Self {
        Operator { mat: v * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn dagger(&self) -> Operator {
        Operator { mat: self.mat.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Scale by a real factor.
    pub fn scale(&self, s: f64) -> Operator {
        Operator { mat: &self.mat * C64::new(s, 0.0) }
    }

    /// Max-abs entry of A - A^dagger.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = &self.mat - self.mat.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    fn require_hermitian(&self, tol: f64) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian { residual, tol })
        }
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    ///
    /// Only the Hermitian eigensolver path exists; non-Hermitian input is a
    /// contract violation.
    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        self.require_hermitian(TOL_HERM)?;
        let mut vals: Vec<f64> = self
            .mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(vals)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigvalsh()?[0])
    }

    /// Positive-semidefiniteness check: true iff min eigenvalue >= -tol.
    pub fn psd_check(&self, tol: f64) -> Result<PsdCheck> {
        let min_eigenvalue = self.min_eigenvalue()?;
        Ok(PsdCheck { is_psd: min_eigenvalue >= -tol, min_eigenvalue })
    }

    /// Max absolute entry; used as the residual norm throughout.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-abs entry of the difference.
    pub fn distance(&self, other: &Operator) -> f64 {
        (&self.mat - &other.mat).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Conjugation U A U^dagger.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Operator> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: u.dim(), right: self.dim() });
        }
        Ok(Operator { mat: &u.mat * &self.mat * u.mat.adjoint() })
    }
}

/// Result of a PSD check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat - &rhs.mat }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat * &rhs.mat }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator { mat: &self.mat * rhs }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: -&self.mat }
    }
}

/// Hilbert-Schmidt inner product Tr[A^dagger B].
pub fn hs_inner(a: &Operator, b: &Operator) -> C64 {
    // Tr[A^H B] = sum conj(a_ij) b_ij
    a.mat.iter().zip(b.mat.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Serialized form: row-major `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
struct OperatorJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = self.mat[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorJson { dim, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OperatorJson::deserialize(d)?;
        if raw.entries.len() != raw.dim * raw.dim {
            return Err(serde::de::Error::custom(format!(
                "operator entries length {} does not match dim {}",
                raw.entries.len(),
                raw.dim
            )));
        }
        let entries: Vec<C64> = raw.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Operator::from_rows(raw.dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// Pauli axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn unit(self) -> BlochVector {
        match self {
            Axis::X => BlochVector::X,
            Axis::Y => BlochVector::Y,
            Axis::Z => BlochVector::Z,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

/// The 2x2 Pauli matrix along `axis`.
pub fn pauli(axis: Axis) -> Operator {
    let z = |re, im| C64::new(re, im);
    let entries = match axis {
        Axis::X => [z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)],
        Axis::Y => [z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)],
        Axis::Z => [z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
    };
    Operator::from_rows(2, &entries).expect("2x2")
}

/// n . sigma for an arbitrary real 3-vector n.
pub fn sigma_dot(n: &BlochVector) -> Operator {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(n.z(), 0.0);
    m[(0, 1)] = C64::new(n.x(), -n.y());
    m[(1, 0)] = C64::new(n.x(), n.y());
    m[(1, 1)] = C64::new(-n.z(), 0.0);
    Operator { mat: m }
}

/// Qubit density operator rho_m = (I + m.sigma)/2 for |m| <= 1.
pub fn bloch_state(m: &BlochVector) -> Result<Operator> {
    let norm = m.norm();
    if norm > 1.0 + 1e-12 {
        return Err(Error::InvalidState { norm });
    }
    Ok((&Operator::identity(2) + &sigma_dot(m)).scale(0.5))
}

/// Rank-1 eigenprojector P_{a n} = (I + a n.sigma)/2 of the spin observable
/// along unit direction `n`.
pub fn spin_projector(n: &BlochVector, a: Sign) -> Result<Operator> {
    n.require_unit()?;
    Ok((&Operator::identity(2) + &sigma_dot(n).scale(a.value())).scale(0.5))
}

/// Unsharp spin effect P_{a n}(lambda) = lambda P_{a n} + (1 - lambda) I/2.
///
/// Sharpness 1 is the projective measurement, 0 the uninformative one.
pub fn unsharp_effect(n: &BlochVector, a: Sign, lambda: f64) -> Result<Operator> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidSharpness { lambda });
    }
    let p = spin_projector(n, a)?;
    Ok(&p.scale(lambda) + &Operator::identity(2).scale(0.5 * (1.0 - lambda)))
}

/// Qubit ket |n> pointing along a unit Bloch direction:
/// (cos(theta/2), e^{i phi} sin(theta/2)).
pub fn bloch_ket(n: &BlochVector) -> Result<CVector> {
    n.require_unit()?;
    let theta = n.z().clamp(-1.0, 1.0).acos();
    let phi = n.y().atan2(n.x());
    let half = theta / 2.0;
    Ok(CVector::from_vec(vec![
        C64::new(half.cos(), 0.0),
        C64::new(phi.cos(), phi.sin()) * half.sin(),
    ]))
}

/// Kronecker product a (x) b.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator { mat: a.mat.kronecker(&b.mat) }
}

/// Kronecker product of two kets.
pub fn tensor_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Kronecker product of a slice of operators, left to right.
pub fn tensor_all(ops: &[&Operator]) -> Result<Operator> {
    let (first, rest) = ops.split_first().ok_or_else(|| Error::EmptyInput("tensor_all".into()))?;
    let mut out = (*first).clone();
    for op in rest {
        out = tensor(&out, op);
    }
    Ok(out)
}

/// A (x) B + sign B (x) A.
pub fn pair_bracket(a: &Operator, b: &Operator, sign: Sign) -> Result<Operator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(&tensor(a, b) + &tensor(b, a).scale(sign.value()))
}

/// Three-slot symmetrizer over distinct placements.
///
/// For three pairwise distinct arguments this is the sum over all six slot
/// permutations; when exactly two arguments coincide, the three distinct
/// placements; when all coincide, the single term A (x) A (x) A.
pub fn symmetrize3(a: &Operator, b: &Operator, c: &Operator) -> Result<Operator> {
    if a.dim() != 2 || b.dim() != 2 || c.dim() != 2 {
        return Err(Error::ShapeMismatch("symmetrize3 expects 2x2 arguments".into()));
    }
    let eq = |u: &Operator, v: &Operator| u.distance(v) <= 1e-12;
    let ab = eq(a, b);
    let bc = eq(b, c);
    let ac = eq(a, c);
    // placements(d, r): d in each slot, r in the rest
    let placements = |d: &Operator, r: &Operator| -> Operator {
        let t1 = tensor_all(&[d, r, r]).unwrap();
        let t2 = tensor_all(&[r, d, r]).unwrap();
        let t3 = tensor_all(&[r, r, d]).unwrap();
        &(&t1 + &t2) + &t3
    };
    let out = if ab && bc {
        tensor_all(&[a, a, a]).unwrap()
    } else if bc {
        placements(a, b)
    } else if ab {
        placements(c, a)
    } else if ac {
        placements(b, a)
    } else {
        let mut sum = Operator::zeros(8);
        for [p, q, r] in [[a, b, c], [b, c, a], [c, a, b], [a, c, b], [c, b, a], [b, a, c]] {
            sum = &sum + &tensor_all(&[p, q, r]).unwrap();
        }
        sum
    };
    Ok(out)
}

/// Pi-rotation unitary about a unit axis: U = n.sigma.
///
/// Hermitian and unitary; conjugation reflects Bloch vectors through the
/// axis, v -> 2 (n.v) n - v.
pub fn flip_unitary(axis: &BlochVector) -> Result<Operator> {
    axis.require_unit()?;
    Ok(sigma_dot(axis))
}

/// Real coefficients of an operator in the Pauli word basis.
///
/// Keyed by words over {I, X, Y, Z}; qubit 0 is the leftmost character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HsCoefficients {
    coeffs: BTreeMap<String, f64>,
}

impl HsCoefficients {
    pub fn get(&self, word: &str) -> f64 {
        self.coeffs.get(word).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.coeffs.iter()
    }

    pub fn n_qubits(&self) -> usize {
        self.coeffs.keys().next().map(|w| w.len()).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Operator for a Pauli word such as "XIZ".
pub fn pauli_word(word: &str) -> Result<Operator> {
    if word.is_empty() {
        return Err(Error::EmptyInput("pauli word".into()));
    }
    let singles: Vec<Operator> = word
        .chars()
        .map(|ch| match ch {
            'I' => Ok(Operator::identity(2)),
            'X' => Ok(pauli(Axis::X)),
            'Y' => Ok(pauli(Axis::Y)),
            'Z' => Ok(pauli(Axis::Z)),
            other => Err(Error::Schema(format!("invalid pauli letter '{other}'"))),
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&Operator> = singles.iter().collect();
    tensor_all(&refs)
}

/// All Pauli words on n qubits in lexicographic (I, X, Y, Z) order.
pub fn pauli_words(n_qubits: usize) -> Vec<String> {
    let letters = ['I', 'X', 'Y', 'Z'];
    let mut words = Vec::with_capacity(4usize.pow(n_qubits as u32));
    for idx in 0..4usize.pow(n_qubits as u32) {
        let mut word = String::with_capacity(n_qubits);
        let mut rem = idx;
        for q in (0..n_qubits).rev() {
            let digit = (rem / 4usize.pow(q as u32)) % 4;
            word.push(letters[digit]);
            rem %= 4usize.pow(q as u32);
        }
        words.push(word);
    }
    words
}

/// Coefficients c_w = Tr[op W] / 2^n over all Pauli words W.
///
/// Exact reconstruction through [`hs_compose`] is guaranteed for Hermitian
/// input, where every coefficient is real.
pub fn hs_decompose(op: &Operator) -> HsCoefficients {
    let n = op.n_qubits();
    let dim = op.dim() as f64;
    let mut coeffs = BTreeMap::new();
    for word in pauli_words(n) {
        let w = pauli_word(&word).expect("valid word");
        let c = (&w * op).trace().re / dim;
        coeffs.insert(word, c);
    }
    HsCoefficients { coeffs }
}

/// Rebuild the operator sum_w c_w W from Pauli coefficients.
pub fn hs_compose(coeffs: &HsCoefficients) -> Result<Operator> {
    if coeffs.is_empty() {
        return Err(Error::EmptyInput("hs coefficients".into()));
    }
    let n = coeffs.n_qubits();
    let mut out = Operator::zeros(1 << n);
    for (word, c) in coeffs.iter() {
        if word.len() != n {
            return Err(Error::Schema(format!("inconsistent word length in '{word}'")));
        }
        out = &out + &pauli_word(word)?.scale(*c);
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Uniform direction on the unit sphere.
    pub fn random_unit(rng: &mut ChaCha8Rng) -> BlochVector {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        BlochVector::new(r * phi.cos(), r * phi.sin(), z)
    }

    pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> Operator {
        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Operator::from_matrix(h).unwrap()
    }

    /// Unitary permuting qubits of (C^2)^(x n): qubit q of the input moves
    /// to slot perm[q].
    pub fn qubit_permutation(perm: &[usize]) -> Operator {
        let n = perm.len();
        let dim = 1usize << n;
        let mut m = CMatrix::zeros(dim, dim);
        for basis in 0..dim {
            let mut target = 0usize;
            for q in 0..n {
                // bit of qubit q: leftmost qubit is the highest bit
                let bit = (basis >> (n - 1 - q)) & 1;
                target |= bit << (n - 1 - perm[q]);
            }
            m[(target, basis)] = C64::new(1.0, 0.0);
        }
        Operator::from_matrix(m).unwrap()
    }
}
