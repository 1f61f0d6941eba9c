//! Spin-observable direction sets and their geometry.
//!
//! A set is an ordered list of distinct unit Bloch directions, one per spin
//! observable. Built-ins cover the equatorial equilateral triangle (SyTri),
//! the regular tetrahedron (SyTet), the three orthogonal axes (MUB), the
//! one-parameter symmetric triple interpolating between them, and unions of
//! rotated tetrahedra.

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::BlochVector;

/// Two directions closer than this angle (radians) count as the same
/// observable.
pub const DISTINCT_TOL_RAD: f64 = 1e-9;

/// Ordered set of distinct unit measurement directions.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "ObservableSetJson")]
pub struct ObservableSet {
    label: String,
    directions: Vec<BlochVector>,
}

#[derive(Serialize, Deserialize, Clone)]
struct ObservableSetJson {
    label: String,
    directions: Vec<[f64; 3]>,
}

impl From<ObservableSet> for ObservableSetJson {
    fn from(set: ObservableSet) -> Self {
        ObservableSetJson {
            label: set.label,
            directions: set.directions.iter().map(|d| d.0).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for ObservableSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ObservableSetJson::deserialize(d)?;
        let dirs: Vec<BlochVector> = raw.directions.into_iter().map(BlochVector).collect();
        ObservableSet::new(raw.label, dirs).map_err(serde::de::Error::custom)
    }
}

impl ObservableSet {
    /// Validates unit norms (1e-12) and pairwise distinctness
    /// ([`DISTINCT_TOL_RAD`]).
    pub fn new(label: impl Into<String>, directions: Vec<BlochVector>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::InvalidSet("no directions given".into()));
        }
        for d in &directions {
            if !d.is_unit(1e-12) {
                return Err(Error::InvalidSet(format!(
                    "direction {:?} has norm {}, expected unit",
                    d.0,
                    d.norm()
                )));
            }
        }
        for i in 0..directions.len() {
            for j in (i + 1)..directions.len() {
                if directions[i].angle_to(&directions[j]) < DISTINCT_TOL_RAD {
                    return Err(Error::InvalidSet(format!(
                        "directions {i} and {j} coincide within {DISTINCT_TOL_RAD} rad"
                    )));
                }
            }
        }
        Ok(ObservableSet { label: label.into(), directions })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[BlochVector] {
        &self.directions
    }

    pub fn direction(&self, r: usize) -> Result<&BlochVector> {
        self.directions.get(r).ok_or(Error::IndexOutOfRange { index: r, len: self.directions.len() })
    }

    /// Sorted list of all pairwise angles; equal spectra mean the sets agree
    /// up to a global rotation (and is what we use to compare them).
    pub fn angle_spectrum(&self) -> Vec<f64> {
        let mut angles = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                angles.push(self.directions[i].angle_to(&self.directions[j]));
            }
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles
    }

    /// If every direction lies in one plane through the origin, returns the
    /// unit normal of that plane (sign convention: last nonzero component
    /// positive). Any two directions are trivially coplanar.
    pub fn equatorial_normal(&self) -> Option<BlochVector> {
        let rows = self.len();
        let mut m = DMatrix::<f64>::zeros(rows, 3);
        for (i, d) in self.directions.iter().enumerate() {
            m[(i, 0)] = d.x();
            m[(i, 1)] = d.y();
            m[(i, 2)] = d.z();
        }
        let svd = m.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("svd vectors");
        // right singular vector of the smallest singular value
        let row = v_t.nrows() - 1;
        let mut u = BlochVector::new(v_t[(row, 0)], v_t[(row, 1)], v_t[(row, 2)]);
        if v_t.nrows() < 3 {
            // N = 2 with full rank 2: normal is the cross product
            u = self.directions[0].cross(&self.directions[1]).normalized().ok()?;
        }
        for k in (0..3).rev() {
            if u.0[k].abs() > 1e-12 {
                if u.0[k] < 0.0 {
                    u = u.neg();
                }
                break;
            }
        }
        let fits = self.directions.iter().all(|d| u.dot(d).abs() < 1e-9);
        fits.then_some(u)
    }
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// The reference axis (1,1,1)/sqrt(3) orthogonal to the SyTri plane.
pub fn t_axis() -> BlochVector {
    let s = 1.0 / sqrt3();
    BlochVector::new(s, s, s)
}

/// Equilateral triangle of three directions in the plane orthogonal to
/// (1,1,1)/sqrt(3).
pub fn sytri() -> ObservableSet {
    let s = 1.0 / 6f64.sqrt();
    ObservableSet::new(
        "sytri",
        vec![
            BlochVector::new(2.0 * s, -s, -s),
            BlochVector::new(-s, 2.0 * s, -s),
            BlochVector::new(-s, -s, 2.0 * s),
        ],
    )
    .expect("sytri directions are valid")
}

/// Four directions along the vertices of a regular tetrahedron.
pub fn sytet() -> ObservableSet {
    let s = 1.0 / sqrt3();
    ObservableSet::new(
        "sytet",
        vec![
            BlochVector::new(s, s, s),
            BlochVector::new(s, -s, -s),
            BlochVector::new(-s, s, -s),
            BlochVector::new(-s, -s, s),
        ],
    )
    .expect("sytet directions are valid")
}

/// Three mutually orthogonal axes x, y, z.
pub fn mub() -> ObservableSet {
    ObservableSet::new("mub", vec![BlochVector::X, BlochVector::Y, BlochVector::Z])
        .expect("mub directions are valid")
}

/// Symmetric triple at common axis angle `theta` to (1,1,1)/sqrt(3).
///
/// All three directions make the angle theta with the reference axis and
/// share the pairwise angle arccos((3 cos^2 theta - 1)/2). theta = pi/2
/// reproduces [`sytri`]; theta = arccos(1/sqrt(3)) reproduces [`mub`].
/// The endpoints 0 and pi collapse to a single direction and are rejected.
pub fn theta_family(theta: f64) -> Result<ObservableSet> {
    if !theta.is_finite() || theta <= 0.0 || theta >= std::f64::consts::PI {
        return Err(Error::InvalidSet(format!(
            "theta must lie strictly inside (0, pi), got {theta}"
        )));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let alpha = (sqrt3() * c + 6f64.sqrt() * s) / 3.0;
    let beta = (2.0 * sqrt3() * c - 6f64.sqrt() * s) / 6.0;
    ObservableSet::new(
        format!("theta:{theta:.12}"),
        vec![
            BlochVector::new(alpha, beta, beta),
            BlochVector::new(beta, alpha, beta),
            BlochVector::new(beta, beta, alpha),
        ],
    )
}

/// Union of `n` rotated copies of [`sytet`], 4n distinct directions.
///
/// The caller supplies one rotation per copy; colliding directions under
/// [`DISTINCT_TOL_RAD`] are rejected.
pub fn n_sytet(n: usize, rotations: &[Matrix3<f64>]) -> Result<ObservableSet> {
    if n == 0 {
        return Err(Error::InvalidSet("n must be at least 1".into()));
    }
    if rotations.len() != n {
        return Err(Error::InvalidSet(format!(
            "expected {n} rotations, got {}",
            rotations.len()
        )));
    }
    let base = sytet();
    let mut dirs = Vec::with_capacity(4 * n);
    for (k, rot) in rotations.iter().enumerate() {
        let orth = (rot * rot.transpose() - Matrix3::identity()).abs().max();
        if orth > 1e-9 || rot.determinant() < 0.0 {
            return Err(Error::InvalidSet(format!("matrix {k} is not a rotation")));
        }
        for d in base.directions() {
            let v = rot * Vector3::new(d.x(), d.y(), d.z());
            dirs.push(BlochVector::new(v.x, v.y, v.z).normalized()?);
        }
    }
    ObservableSet::new(format!("nsytet:{n}"), dirs)
}

/// Uniformly random unit direction.
pub fn random_direction<R: Rng>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    BlochVector::new(r * phi.cos(), r * phi.sin(), z)
}

/// Random set of `n` distinct directions (rejection-sampled against the
/// distinctness tolerance, which for random draws essentially never fires).
pub fn random_set<R: Rng>(label: impl Into<String>, n: usize, rng: &mut R) -> ObservableSet {
    let label = label.into();
    loop {
        let dirs: Vec<BlochVector> = (0..n).map(|_| random_direction(rng)).collect();
        if let Ok(set) = ObservableSet::new(label.clone(), dirs) {
            return set;
        }
    }
}

/// Random set of `n` distinct directions all lying in one random plane
/// through the origin.
pub fn random_equatorial_set<R: Rng>(
    label: impl Into<String>,
    n: usize,
    rng: &mut R,
) -> ObservableSet {
    let label = label.into();
    let normal = random_direction(rng);
    // orthonormal frame for the plane
    let seed = if normal.x().abs() < 0.9 { BlochVector::X } else { BlochVector::Y };
    let e1 = normal.cross(&seed).normalized().expect("frame");
    let e2 = normal.cross(&e1);
    loop {
        let dirs: Vec<BlochVector> = (0..n)
            .map(|_| {
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                BlochVector::new(
                    phi.cos() * e1.x() + phi.sin() * e2.x(),
                    phi.cos() * e1.y() + phi.sin() * e2.y(),
                    phi.cos() * e1.z() + phi.sin() * e2.z(),
                )
            })
            .collect();
        if let Ok(set) = ObservableSet::new(label.clone(), dirs) {
            return set;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_support;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sytri_pairwise_dots() {
        let set = sytri();
        assert_eq!(set.len(), 3);
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_abs_diff_eq!(
                    set.directions()[i].dot(&set.directions()[j]),
                    -0.5,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn sytri_orthogonal_to_t_axis() {
        for d in sytri().directions() {
            assert_abs_diff_eq!(d.dot(&t_axis()), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn sytet_pairwise_dots() {
        let set = sytet();
        assert_eq!(set.len(), 4);
        for i in 0..4 {
            assert_abs_diff_eq!(set.directions()[i].norm(), 1.0, epsilon = 1e-14);
            for j in (i + 1)..4 {
                assert_abs_diff_eq!(
                    set.directions()[i].dot(&set.directions()[j]),
                    -1.0 / 3.0,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn sytet_closed_under_double_sign_flips() {
        let set = sytet();
        let flips = [[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        for f in flips {
            for d in set.directions() {
                let flipped = BlochVector::new(d.x() * f[0], d.y() * f[1], d.z() * f[2]);
                let found = set
                    .directions()
                    .iter()
                    .any(|e| e.angle_to(&flipped) < 1e-12);
                assert!(found, "flip {f:?} left the set");
            }
        }
    }

    #[test]
    fn mub_pairwise_orthogonal() {
        let set = mub();
        assert_eq!(set.len(), 3);
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_abs_diff_eq!(set.directions()[i].dot(&set.directions()[j]), 0.0);
            }
        }
    }

    #[test]
    fn mub_matches_theta_family_by_angle_spectrum() {
        let theta = (1.0 / 3f64.sqrt()).acos();
        let fam = theta_family(theta).unwrap();
        let a = mub().angle_spectrum();
        let b = fam.angle_spectrum();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn theta_family_at_right_angle_is_sytri() {
        let fam = theta_family(std::f64::consts::FRAC_PI_2).unwrap();
        for (a, b) in fam.directions().iter().zip(sytri().directions()) {
            assert!(a.angle_to(b) < 1e-12);
        }
    }

    #[test]
    fn theta_family_axis_and_pairwise_angles() {
        let mut rng = test_support::rng(41);
        for _ in 0..50 {
            let theta: f64 = rand::Rng::gen_range(&mut rng, 0.01..std::f64::consts::PI - 0.01);
            let fam = theta_family(theta).unwrap();
            let expect_pair = (3.0 * theta.cos().powi(2) - 1.0) / 2.0;
            for (i, d) in fam.directions().iter().enumerate() {
                assert_abs_diff_eq!(d.dot(&t_axis()), theta.cos(), epsilon = 1e-12);
                for e in fam.directions().iter().skip(i + 1) {
                    assert_abs_diff_eq!(d.dot(e), expect_pair, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn theta_family_rejects_endpoints() {
        assert!(theta_family(0.0).is_err());
        assert!(theta_family(std::f64::consts::PI).is_err());
        assert!(theta_family(-0.3).is_err());
    }

    #[test]
    fn theta_family_unit_norm_on_grid() {
        for j in 1..1000 {
            let theta = std::f64::consts::PI * (j as f64) / 1000.0;
            for d in theta_family(theta).unwrap().directions() {
                assert!(d.is_unit(1e-12));
            }
        }
    }

    #[test]
    fn theta_family_spectrum_invariant_under_coordinate_cycle() {
        let fam = theta_family(0.7).unwrap();
        let cycled: Vec<BlochVector> = fam
            .directions()
            .iter()
            .map(|d| BlochVector::new(d.z(), d.x(), d.y()))
            .collect();
        let cycled = ObservableSet::new("cycled", cycled).unwrap();
        for (a, b) in fam.angle_spectrum().iter().zip(cycled.angle_spectrum()) {
            assert_abs_diff_eq!(a, &b, epsilon = 1e-12);
        }
    }

    #[test]
    fn n_sytet_identity_is_sytet() {
        let set = n_sytet(1, &[Matrix3::identity()]).unwrap();
        for (a, b) in set.directions().iter().zip(sytet().directions()) {
            assert!(a.angle_to(b) < 1e-12);
        }
    }

    #[test]
    fn n_sytet_rotated_copy_gives_eight_distinct() {
        let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::z_axis(), 30f64.to_radians())
            .into_inner();
        let set = n_sytet(2, &[Matrix3::identity(), rot]).unwrap();
        assert_eq!(set.len(), 8);
        for i in 0..8 {
            for j in (i + 1)..8 {
                assert!(set.directions()[i].angle_to(&set.directions()[j]) > 1e-6);
            }
        }
    }

    #[test]
    fn n_sytet_duplicate_rotations_rejected() {
        let err = n_sytet(2, &[Matrix3::identity(), Matrix3::identity()]);
        assert!(matches!(err, Err(Error::InvalidSet(_))));
    }

    #[test]
    fn equatorial_sytri_normal_is_t_axis() {
        let normal = sytri().equatorial_normal().expect("sytri is equatorial");
        assert!(normal.angle_to(&t_axis()) < 1e-9 || normal.angle_to(&t_axis().neg()) < 1e-9);
    }

    #[test]
    fn equatorial_mub_is_not() {
        assert!(mub().equatorial_normal().is_none());
    }

    #[test]
    fn equatorial_any_pair_is() {
        let mut rng = test_support::rng(43);
        for _ in 0..20 {
            let set = random_set("pair", 2, &mut rng);
            let normal = set.equatorial_normal().expect("two directions are coplanar");
            for d in set.directions() {
                assert!(normal.dot(d).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_equatorial_sets_are_planar() {
        let mut rng = test_support::rng(47);
        for n in 2..=4 {
            let set = random_equatorial_set("eq", n, &mut rng);
            assert!(set.equatorial_normal().is_some());
        }
    }

    #[test]
    fn duplicate_directions_rejected() {
        let err = ObservableSet::new("dup", vec![BlochVector::Z, BlochVector::Z]);
        assert!(matches!(err, Err(Error::InvalidSet(_))));
    }

    #[test]
    fn json_roundtrip() {
        let set = sytet();
        let json = serde_json::to_string(&set).unwrap();
        let back: ObservableSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);
        // schema shape: {label, directions: [[x,y,z], ...]}
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["label"], "sytet");
        assert_eq!(v["directions"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn antipodal_directions_are_distinct_observables() {
        // angle pi exceeds the distinctness tolerance: allowed as a set
        let set = ObservableSet::new("pm", vec![BlochVector::Z, BlochVector::Z.neg()]);
        assert!(set.is_ok());
    }
}
