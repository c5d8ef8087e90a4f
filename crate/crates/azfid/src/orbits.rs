//! Extrema of the fidelity over unitary orbits.
//!
//! The extreme values over `{U sigma U† : U unitary}` are classical fidelities
//! of the sorted spectra, attained when the rotated state commutes with `rho`
//! under an aligned or reversed pairing of eigenbases. Between the two
//! achieving unitaries, the fidelity along the interpolated one-parameter
//! subgroup is continuous, so every value in the closed interval is attained;
//! [`solve_orbit_target`] inverts that map numerically.

use crate::error::{Error, Result};
use crate::fidelity::{
    classical_fidelity, classical_renyi, OrbitEvaluator, ParamPoint, Region,
};
use crate::linalg::{exp_skew, unitary_log, CMatrix};
use crate::states::{DensityMatrix, UnitaryMatrix};

/// How the eigenbases of the two states are matched up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// i-th largest of sigma onto the i-th largest of rho.
    Aligned,
    /// i-th largest of sigma onto the i-th smallest of rho.
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

/// Which clause of the closed-form result produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitBranch {
    /// Maximum for alpha < 1 (any z > 0): aligned spectra.
    MaxAligned,
    /// Maximum for alpha > 1 (any z > 0): reversed spectra.
    MaxReversed,
    /// Minimum for alpha < 1, z < 1: reversed spectra.
    MinReversedSmallZ,
    /// Minimum for alpha > 1, z < 1: aligned spectra.
    MinAlignedSmallZ,
    /// Minimum on the convex-DPI region: aligned spectra.
    MinAlignedConvex,
}

impl OrbitBranch {
    pub fn pairing(&self) -> Pairing {
        match self {
            OrbitBranch::MaxAligned
            | OrbitBranch::MinAlignedSmallZ
            | OrbitBranch::MinAlignedConvex => Pairing::Aligned,
            OrbitBranch::MaxReversed | OrbitBranch::MinReversedSmallZ => Pairing::Reversed,
        }
    }
}

impl std::fmt::Display for OrbitBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OrbitBranch::MaxAligned => "max, alpha < 1, aligned spectra",
            OrbitBranch::MaxReversed => "max, alpha > 1, reversed spectra",
            OrbitBranch::MinReversedSmallZ => "min, alpha < 1, z < 1, reversed spectra",
            OrbitBranch::MinAlignedSmallZ => "min, alpha > 1, z < 1, aligned spectra",
            OrbitBranch::MinAlignedConvex => "min, convex-DPI region, aligned spectra",
        };
        write!(f, "{s}")
    }
}

/// A closed-form orbit extremum together with a unitary that attains it.
#[derive(Clone, Debug)]
pub struct OrbitExtremum {
    pub value: f64,
    pub achieving_unitary: UnitaryMatrix,
    pub kind: ExtremumKind,
    pub branch: OrbitBranch,
}

/// Classical fidelity of the sorted spectra under the given pairing.
pub fn classical_orbit_value(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    pairing: Pairing,
    alpha: f64,
) -> Result<f64> {
    let sigma_spectrum = match pairing {
        Pairing::Aligned => sigma.spectrum_desc(),
        Pairing::Reversed => sigma.spectrum_asc(),
    };
    classical_fidelity(rho.spectrum_desc(), sigma_spectrum, alpha)
}

/// Unitary mapping sigma's descending eigenbasis onto rho's, index by index
/// (`Aligned`) or index-reversed (`Reversed`). The rotated state commutes with
/// `rho` by construction.
pub fn achieving_unitary(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    pairing: Pairing,
) -> Result<UnitaryMatrix> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let d = rho.dim();
    let target = match pairing {
        Pairing::Aligned => rho.eigenbasis().clone(),
        Pairing::Reversed => {
            CMatrix::from_fn(d, d, |i, j| rho.eigenbasis()[(i, d - 1 - j)])
        }
    };
    UnitaryMatrix::new(target * sigma.eigenbasis().adjoint())
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    Ok(())
}

fn build_extremum(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &ParamPoint,
    kind: ExtremumKind,
    branch: OrbitBranch,
) -> Result<OrbitExtremum> {
    let pairing = branch.pairing();
    let value = classical_orbit_value(rho, sigma, pairing, p.alpha())?;
    let unitary = achieving_unitary(rho, sigma, pairing)?;
    debug_assert!(
        !value.is_finite() || {
            let eval = OrbitEvaluator::new(rho, sigma, p).expect("dims checked");
            (eval.fidelity(&unitary) - value).abs() < 1e-8
        },
        "achieving unitary misses the closed-form value"
    );
    Ok(OrbitExtremum {
        value,
        achieving_unitary: unitary,
        kind,
        branch,
    })
}

/// Maximum of `F(rho, U sigma U†)` over the unitary group, for any z > 0.
pub fn orbit_max(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &ParamPoint,
) -> Result<OrbitExtremum> {
    p.require_alpha_not_one()?;
    check_dims(rho, sigma)?;
    let branch = if p.alpha() < 1.0 {
        OrbitBranch::MaxAligned
    } else {
        OrbitBranch::MaxReversed
    };
    build_extremum(rho, sigma, p, ExtremumKind::Max, branch)
}

/// Minimum of `F(rho, U sigma U†)` where a closed form exists: `z` in (0, 1)
/// for either alpha branch, or the convex-DPI region. Elsewhere the extremum
/// is unknown and the call fails rather than estimating.
pub fn orbit_min(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &ParamPoint,
) -> Result<OrbitExtremum> {
    p.require_alpha_not_one()?;
    check_dims(rho, sigma)?;
    let branch = if p.z() < 1.0 {
        if p.alpha() < 1.0 {
            OrbitBranch::MinReversedSmallZ
        } else {
            OrbitBranch::MinAlignedSmallZ
        }
    } else if p.region() == Region::ConvexDpi {
        OrbitBranch::MinAlignedConvex
    } else {
        return Err(Error::UnsupportedRegion {
            alpha: p.alpha(),
            z: p.z(),
            required: "z in (0,1), or (alpha, z) in the convex-DPI region",
        });
    };
    build_extremum(rho, sigma, p, ExtremumKind::Min, branch)
}

/// Geodesic between the min- and max-achieving unitaries:
/// `U_t = exp((1-t) L0 + t L1)` with `L0`, `L1` the principal logarithms of
/// the endpoints.
#[derive(Clone, Debug)]
pub struct GeodesicPath {
    l0: CMatrix,
    l1: CMatrix,
}

impl GeodesicPath {
    pub fn new(min_unitary: &UnitaryMatrix, max_unitary: &UnitaryMatrix) -> Result<Self> {
        if min_unitary.dim() != max_unitary.dim() {
            return Err(Error::DimensionMismatch {
                left: min_unitary.dim(),
                right: max_unitary.dim(),
            });
        }
        Ok(Self {
            l0: unitary_log(min_unitary),
            l1: unitary_log(max_unitary),
        })
    }

    pub fn endpoints(&self) -> (&CMatrix, &CMatrix) {
        (&self.l0, &self.l1)
    }

    pub fn unitary_at(&self, t: f64) -> Result<UnitaryMatrix> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::parameter("t", format!("must be in [0,1], got {t}")));
        }
        let l = self.l0.scale(1.0 - t) + self.l1.scale(t);
        exp_skew(&l)
    }
}

/// Fidelity at the path point `U_t`.
pub fn orbit_path_value(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    path: &GeodesicPath,
    t: f64,
    p: &ParamPoint,
) -> Result<f64> {
    check_dims(rho, sigma)?;
    let u = path.unitary_at(t)?;
    let eval = OrbitEvaluator::new(rho, sigma, p)?;
    Ok(eval.fidelity(&u))
}

const GRID_POINTS: usize = 256;
const TARGET_TOL: f64 = 1e-6;

/// Finds `t` and `U_t` with `|F(rho, U_t sigma U_t†) - target| < 1e-6`.
///
/// The path value is continuous but need not be monotone, so the solver scans
/// a 256-point grid for the first sign-change bracket and bisects inside it.
pub fn solve_orbit_target(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    target: f64,
    p: &ParamPoint,
) -> Result<(f64, UnitaryMatrix)> {
    let covered =
        p.region() == Region::ConvexDpi || (p.alpha() < 1.0 && p.z() < 1.0);
    if !covered {
        return Err(Error::UnsupportedRegion {
            alpha: p.alpha(),
            z: p.z(),
            required: "alpha, z in (0,1), or (alpha, z) in the convex-DPI region",
        });
    }
    let lo = orbit_min(rho, sigma, p)?;
    let hi = orbit_max(rho, sigma, p)?;
    if target < lo.value - 1e-9 || target > hi.value + 1e-9 {
        return Err(Error::TargetOutOfRange {
            target,
            lo: lo.value,
            hi: hi.value,
        });
    }
    let target = target.clamp(lo.value, hi.value);

    let path = GeodesicPath::new(&lo.achieving_unitary, &hi.achieving_unitary)?;
    let eval = OrbitEvaluator::new(rho, sigma, p)?;
    let value_at = |t: f64| -> Result<(f64, UnitaryMatrix)> {
        let u = path.unitary_at(t)?;
        Ok((eval.fidelity(&u), u))
    };

    // grid scan for the first bracket
    let mut prev = value_at(0.0)?;
    let mut prev_t = 0.0;
    let mut bracket = None;
    for i in 1..=GRID_POINTS {
        let t = i as f64 / GRID_POINTS as f64;
        if (prev.0 - target).abs() < TARGET_TOL {
            return Ok((prev_t, prev.1));
        }
        let cur = value_at(t)?;
        if (prev.0 - target) * (cur.0 - target) <= 0.0 {
            bracket = Some((prev_t, t, prev.0));
            break;
        }
        prev = cur;
        prev_t = t;
    }
    if bracket.is_none() && (prev.0 - target).abs() < TARGET_TOL {
        return Ok((prev_t, prev.1));
    }
    let (mut a, mut b, mut fa) = bracket.ok_or_else(|| {
        Error::Validation("no bracket found on the orbit path; target unreachable".into())
    })?;

    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let (fm, um) = value_at(mid)?;
        if (fm - target).abs() < TARGET_TOL {
            return Ok((mid, um));
        }
        if (fa - target) * (fm - target) <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Err(Error::Validation(
        "bisection failed to reach the target tolerance".into(),
    ))
}

/// Orbit extrema of the Renyi relative entropy for full-rank sigma, on the
/// parameter sets where both entropy branches are covered.
pub fn orbit_renyi_extrema(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &ParamPoint,
) -> Result<(f64, f64)> {
    p.require_alpha_not_one()?;
    check_dims(rho, sigma)?;
    if !sigma.is_full_rank() {
        return Err(Error::Validation(
            "sigma must be full rank for orbit Renyi extrema".into(),
        ));
    }
    let alpha = p.alpha();
    let z = p.z();
    let max_covered = (alpha < 1.0 && z < 1.0) || alpha > 1.0;
    let min_covered = z < 1.0 || p.region() == Region::ConvexDpi;
    if !(max_covered && min_covered) {
        return Err(Error::UnsupportedRegion {
            alpha,
            z,
            required: "alpha, z in (0,1); or alpha > 1 with z in (0,1); or alpha > 1 in the convex-DPI region",
        });
    }
    let max = classical_renyi(rho.spectrum_desc(), sigma.spectrum_asc(), alpha)?;
    let min = classical_renyi(rho.spectrum_desc(), sigma.spectrum_desc(), alpha)?;
    Ok((max, min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator_norm;
    use crate::states::{haar_unitary, random_density, DensityMatrix};

    fn diag_state(probs: &[f64]) -> DensityMatrix {
        DensityMatrix::from_spectrum(probs, &UnitaryMatrix::identity(probs.len())).unwrap()
    }

    fn spectra_pair(seed: u64) -> (DensityMatrix, DensityMatrix) {
        let b1 = haar_unitary(2, seed);
        let b2 = haar_unitary(2, seed + 1);
        (
            DensityMatrix::from_spectrum(&[0.7, 0.3], &b1).unwrap(),
            DensityMatrix::from_spectrum(&[0.6, 0.4], &b2).unwrap(),
        )
    }

    #[test]
    fn self_orbit_max_is_one() {
        let rho = random_density(3, 3, 4).unwrap();
        let p = ParamPoint::new(0.5, 1.0).unwrap();
        let ext = orbit_max(&rho, &rho, &p).unwrap();
        assert!((ext.value - 1.0).abs() < 1e-10);
        let eval = OrbitEvaluator::new(&rho, &rho, &p).unwrap();
        assert!((eval.fidelity(&ext.achieving_unitary) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orbit_max_matches_scalar_formulas() {
        let (rho, sigma) = spectra_pair(100);

        let p = ParamPoint::new(0.5, 3.0).unwrap();
        let ext = orbit_max(&rho, &sigma, &p).unwrap();
        let expected = ((0.7f64 * 0.6).sqrt() + (0.3f64 * 0.4).sqrt()).powi(2);
        assert!((ext.value - expected).abs() < 1e-12);
        assert_eq!(ext.branch, OrbitBranch::MaxAligned);

        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let ext = orbit_max(&rho, &sigma, &p).unwrap();
        let expected = (0.49f64 / 0.4 + 0.09 / 0.6).sqrt();
        assert!((ext.value - expected).abs() < 1e-12);
        assert!((expected - 1.17260).abs() < 1e-5);
        assert_eq!(ext.branch, OrbitBranch::MaxReversed);

        // the achieving unitary attains the value
        let eval = OrbitEvaluator::new(&rho, &sigma, &p).unwrap();
        assert!((eval.fidelity(&ext.achieving_unitary) - ext.value).abs() < 1e-9);
    }

    #[test]
    fn orbit_min_matches_scalar_formulas() {
        let (rho, sigma) = spectra_pair(200);

        let p = ParamPoint::new(0.5, 0.5).unwrap();
        let ext = orbit_min(&rho, &sigma, &p).unwrap();
        let expected = ((0.7f64 * 0.4).sqrt() + (0.3f64 * 0.6).sqrt()).powi(2);
        assert!((ext.value - expected).abs() < 1e-12);
        assert!((expected - 0.90900).abs() < 1e-5);
        assert_eq!(ext.branch, OrbitBranch::MinReversedSmallZ);

        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let ext = orbit_min(&rho, &sigma, &p).unwrap();
        let expected = (0.49f64 / 0.6 + 0.09 / 0.4).sqrt();
        assert!((ext.value - expected).abs() < 1e-12);
        assert!((expected - 1.02063).abs() < 1e-5);
        assert_eq!(ext.branch, OrbitBranch::MinAlignedConvex);
    }

    #[test]
    fn orbit_min_self_aligned() {
        let rho = random_density(3, 3, 9).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let ext = orbit_min(&rho, &rho, &p).unwrap();
        let expected =
            classical_fidelity(rho.spectrum_desc(), rho.spectrum_desc(), 2.0).unwrap();
        assert!((ext.value - expected).abs() < 1e-12);
    }

    #[test]
    fn orbit_min_rejects_uncovered_region() {
        let (rho, sigma) = spectra_pair(300);
        let p = ParamPoint::new(0.5, 2.0).unwrap();
        assert!(matches!(
            orbit_min(&rho, &sigma, &p),
            Err(Error::UnsupportedRegion { .. })
        ));
        let p1 = ParamPoint::new(1.0, 0.5).unwrap();
        assert!(orbit_min(&rho, &sigma, &p1).is_err());
        assert!(orbit_max(&rho, &sigma, &p1).is_err());
    }

    #[test]
    fn achieving_unitary_diagonal_cases() {
        let rho = diag_state(&[0.7, 0.3]);
        let sigma = diag_state(&[0.6, 0.4]);
        let u = achieving_unitary(&rho, &sigma, Pairing::Aligned).unwrap();
        assert!((u.matrix() - CMatrix::identity(2, 2)).norm() < 1e-12);

        let u = achieving_unitary(&rho, &sigma, Pairing::Reversed).unwrap();
        let swap = CMatrix::from_fn(2, 2, |i, j| {
            num_complex::Complex64::new(if i + j == 1 { 1.0 } else { 0.0 }, 0.0)
        });
        assert!((u.matrix() - swap).norm() < 1e-12);
    }

    #[test]
    fn achieving_unitary_commutes() {
        let rho = random_density(4, 4, 41).unwrap();
        let sigma = random_density(4, 4, 42).unwrap();
        for pairing in [Pairing::Aligned, Pairing::Reversed] {
            let u = achieving_unitary(&rho, &sigma, pairing).unwrap();
            let rotated = u.conjugate(sigma.matrix());
            assert!(commutator_norm(rho.matrix(), &rotated) < 1e-9);
        }
    }

    #[test]
    fn degenerate_sigma_basis_is_immaterial() {
        let rho = random_density(3, 3, 55).unwrap();
        let probs = [0.5, 0.25, 0.25];
        let b = haar_unitary(3, 56);
        // second basis differs by a rotation inside the degenerate eigenspace
        let mut mix = CMatrix::identity(3, 3);
        let theta: f64 = 0.77;
        mix[(1, 1)] = num_complex::Complex64::new(theta.cos(), 0.0);
        mix[(1, 2)] = num_complex::Complex64::new(theta.sin(), 0.0);
        mix[(2, 1)] = num_complex::Complex64::new(-theta.sin(), 0.0);
        mix[(2, 2)] = num_complex::Complex64::new(theta.cos(), 0.0);
        let b2 = UnitaryMatrix::new(b.matrix() * mix).unwrap();

        let sigma1 = DensityMatrix::from_spectrum(&probs, &b).unwrap();
        let sigma2 = DensityMatrix::from_spectrum(&probs, &b2).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let e1 = orbit_max(&rho, &sigma1, &p).unwrap();
        let e2 = orbit_max(&rho, &sigma2, &p).unwrap();
        assert!((e1.value - e2.value).abs() < 1e-12);
        let eval = OrbitEvaluator::new(&rho, &sigma2, &p).unwrap();
        assert!((eval.fidelity(&e2.achieving_unitary) - e2.value).abs() < 1e-8);
    }

    #[test]
    fn path_endpoints_reproduce_extrema() {
        let rho = random_density(3, 3, 60).unwrap();
        let sigma = random_density(3, 3, 61).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let lo = orbit_min(&rho, &sigma, &p).unwrap();
        let hi = orbit_max(&rho, &sigma, &p).unwrap();
        let path = GeodesicPath::new(&lo.achieving_unitary, &hi.achieving_unitary).unwrap();

        let f0 = orbit_path_value(&rho, &sigma, &path, 0.0, &p).unwrap();
        let f1 = orbit_path_value(&rho, &sigma, &path, 1.0, &p).unwrap();
        assert!((f0 - lo.value).abs() < 1e-8);
        assert!((f1 - hi.value).abs() < 1e-8);

        assert!(orbit_path_value(&rho, &sigma, &path, 1.2, &p).is_err());
        assert!(orbit_path_value(&rho, &sigma, &path, -0.1, &p).is_err());
    }

    #[test]
    fn path_is_continuous_on_coarse_grid() {
        let rho = random_density(3, 3, 62).unwrap();
        let sigma = random_density(3, 3, 63).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let lo = orbit_min(&rho, &sigma, &p).unwrap();
        let hi = orbit_max(&rho, &sigma, &p).unwrap();
        let path = GeodesicPath::new(&lo.achieving_unitary, &hi.achieving_unitary).unwrap();
        let eval = OrbitEvaluator::new(&rho, &sigma, &p).unwrap();
        let mut prev = eval.fidelity(&path.unitary_at(0.0).unwrap());
        for i in 1..=100 {
            let t = i as f64 / 100.0;
            let cur = eval.fidelity(&path.unitary_at(t).unwrap());
            assert!((cur - prev).abs() < 0.05, "jump at t={t}");
            prev = cur;
        }
    }

    #[test]
    fn solve_target_hits_endpoints_and_midpoint() {
        let b1 = haar_unitary(2, 70);
        let b2 = haar_unitary(2, 71);
        let rho = DensityMatrix::from_spectrum(&[0.7, 0.3], &b1).unwrap();
        let sigma = DensityMatrix::from_spectrum(&[0.6, 0.4], &b2).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let lo = orbit_min(&rho, &sigma, &p).unwrap();
        let hi = orbit_max(&rho, &sigma, &p).unwrap();
        let eval = OrbitEvaluator::new(&rho, &sigma, &p).unwrap();

        let (t, u) = solve_orbit_target(&rho, &sigma, lo.value, &p).unwrap();
        assert!(t < 1e-6);
        assert!((eval.fidelity(&u) - lo.value).abs() < 1e-6);

        let (t, u) = solve_orbit_target(&rho, &sigma, hi.value, &p).unwrap();
        assert!(t > 1.0 - 1.0 / GRID_POINTS as f64 - 1e-9);
        assert!((eval.fidelity(&u) - hi.value).abs() < 1e-6);

        let mid = 0.5 * (lo.value + hi.value);
        let (_, u) = solve_orbit_target(&rho, &sigma, mid, &p).unwrap();
        assert!((eval.fidelity(&u) - mid).abs() < 1e-6);

        assert!(matches!(
            solve_orbit_target(&rho, &sigma, hi.value + 1e-3, &p),
            Err(Error::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn renyi_extrema_examples() {
        let (rho, sigma) = spectra_pair(400);

        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let (max, min) = orbit_renyi_extrema(&rho, &sigma, &p).unwrap();
        let fmax = orbit_max(&rho, &sigma, &p).unwrap().value;
        let fmin = orbit_min(&rho, &sigma, &p).unwrap().value;
        assert!((max - 2.0 * fmax.ln()).abs() < 1e-12);
        assert!((min - 2.0 * fmin.ln()).abs() < 1e-12);
        assert!((max - 0.3185).abs() < 1e-4);

        // alpha < 1: the log map has a negative factor, so min(S) comes from max(F)
        let p = ParamPoint::new(0.5, 0.5).unwrap();
        let (_, min) = orbit_renyi_extrema(&rho, &sigma, &p).unwrap();
        let fmax = orbit_max(&rho, &sigma, &p).unwrap().value;
        assert!((min - (-fmax.ln())).abs() < 1e-12);
        assert!((min - 0.01106).abs() < 1e-5);

        // self extrema: min is zero
        let full = random_density(3, 3, 80).unwrap();
        let (_, min) = orbit_renyi_extrema(&full, &full, &p).unwrap();
        assert!(min.abs() < 1e-10);
    }

    #[test]
    fn renyi_extrema_preconditions() {
        let rho = random_density(3, 3, 81).unwrap();
        let low_rank = random_density(3, 2, 82).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        assert!(orbit_renyi_extrema(&rho, &low_rank, &p).is_err());

        // alpha < 1 with z >= 1 is outside the stated sets
        let p = ParamPoint::new(0.5, 1.5).unwrap();
        assert!(matches!(
            orbit_renyi_extrema(&rho, &rho, &p),
            Err(Error::UnsupportedRegion { .. })
        ));
    }

    #[test]
    fn max_for_small_alpha_is_z_independent() {
        let (rho, sigma) = spectra_pair(500);
        let base = orbit_max(&rho, &sigma, &ParamPoint::new(0.5, 0.3).unwrap())
            .unwrap()
            .value;
        for &z in &[0.5, 1.0, 1.7, 3.0] {
            let v = orbit_max(&rho, &sigma, &ParamPoint::new(0.5, z).unwrap())
                .unwrap()
                .value;
            assert!((v - base).abs() < 1e-12);
        }
    }
}
