//! The two-parameter fidelity functional and its relatives.
//!
//! For states rho, sigma and parameters alpha, z > 0 the trace quantity is
//!
//! ```text
//! T = Tr[ (sigma^((1-alpha)/2z) rho^(alpha/z) sigma^((1-alpha)/2z))^z ]
//! ```
//!
//! and the fidelity is `F = T^(1/alpha)`. Matrix powers are support-restricted
//! (`0^p := 0`), so rank-deficient inputs stay finite; callers that require the
//! support condition for alpha > 1 use the strict entry point.


use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, trace_power_of_spectrum, CMatrix, HermitianMatrix, EIG_CLAMP,
};
use crate::states::{DensityMatrix, UnitaryMatrix};

/// Squared-overlap threshold for the support-inclusion test.
const SUPPORT_TOL: f64 = 1e-8;

/// Concavity/convexity classification of an `(alpha, z)` pair.
///
/// `Concave`: 0 < alpha < 1 and z >= max(alpha, 1 - alpha).
/// `ConvexDpi`: (1 < alpha <= 2 and alpha/2 <= z <= alpha) or
/// (2 <= alpha and alpha - 1 <= z <= alpha); the data-processing inequality
/// holds on this region. Boundaries are included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Region {
    Concave,
    ConvexDpi,
    Neither,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Concave => write!(f, "concave"),
            Region::ConvexDpi => write!(f, "convex-dpi"),
            Region::Neither => write!(f, "neither"),
        }
    }
}

/// Classifies `(alpha, z)`; boundary points belong to their region.
pub fn classify_region(alpha: f64, z: f64) -> Result<Region> {
    validate_params(alpha, z)?;
    if alpha < 1.0 && z >= alpha.max(1.0 - alpha) {
        return Ok(Region::Concave);
    }
    if alpha > 1.0 {
        let in_low = alpha <= 2.0 && z >= alpha / 2.0 && z <= alpha;
        let in_high = alpha >= 2.0 && z >= alpha - 1.0 && z <= alpha;
        if in_low || in_high {
            return Ok(Region::ConvexDpi);
        }
    }
    Ok(Region::Neither)
}

fn validate_params(alpha: f64, z: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::parameter("alpha", format!("must be > 0, got {alpha}")));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::parameter("z", format!("must be > 0, got {z}")));
    }
    Ok(())
}

/// An `(alpha, z)` pair with its region cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPoint {
    alpha: f64,
    z: f64,
    region: Region,
}

impl ParamPoint {
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        let region = classify_region(alpha, z)?;
        Ok(Self { alpha, z, region })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub(crate) fn require_alpha_not_one(&self) -> Result<()> {
        if self.alpha == 1.0 {
            return Err(Error::parameter("alpha", "must differ from 1".to_string()));
        }
        Ok(())
    }
}

/// Trace quantity T and fidelity F = T^(1/alpha).
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct FidelityValue {
    pub trace_quantity: f64,
    pub fidelity: f64,
}

impl FidelityValue {
    fn from_trace(t: f64, alpha: f64) -> Self {
        Self {
            trace_quantity: t,
            fidelity: t.powf(1.0 / alpha),
        }
    }
}

/// Whether every eigenvector of `rho` with eigenvalue above the kernel clamp
/// has squared overlap at least `1 - 1e-8` with the support of `sigma`.
pub fn support_contained(rho: &DensityMatrix, sigma: &DensityMatrix) -> bool {
    let proj = sigma.support_projector();
    let basis = rho.eigenbasis();
    for (i, &l) in rho.spectrum_desc().iter().enumerate() {
        if l <= EIG_CLAMP {
            continue;
        }
        let v = basis.column(i);
        let overlap = (v.adjoint() * &proj * v)[(0, 0)].re;
        if overlap < 1.0 - SUPPORT_TOL {
            return false;
        }
    }
    true
}

/// Support eigenvalues raised to `exponent`; the spectrum is descending, so
/// the support is the prefix above the kernel clamp.
fn support_powers(spectrum: &[f64], exponent: f64) -> Vec<f64> {
    spectrum
        .iter()
        .take_while(|&&l| l > EIG_CLAMP)
        .map(|&l| l.powf(exponent))
        .collect()
}

/// `sum_i s_i^(2z)` over singular values of the scaled overlap
/// `diag(row_scales) · overlap · diag(col_scales)`, dropping squared values
/// inside the kernel clamp.
///
/// The squared singular values of this half-product are exactly the spectrum
/// of the defining composition `sigma^a rho^b sigma^a`, but the half-product
/// never squares the condition number: the scales are exact scalar powers and
/// the overlap is a unitary submatrix, so kernel noise stays quadratically
/// below the clamp even for steep negative exponents.
fn scaled_overlap_trace(overlap: &CMatrix, row_scales: &[f64], col_scales: &[f64], z: f64) -> f64 {
    let core = CMatrix::from_fn(row_scales.len(), col_scales.len(), |i, j| {
        overlap[(i, j)] * (row_scales[i] * col_scales[j])
    });
    let singular = core.svd(false, false).singular_values;
    singular
        .iter()
        .map(|&s| {
            let sq = s * s;
            if sq <= EIG_CLAMP {
                0.0
            } else {
                sq.powf(z)
            }
        })
        .sum()
}

fn trace_quantity_restricted(rho: &DensityMatrix, sigma: &DensityMatrix, p: &ParamPoint) -> f64 {
    let sigma_scales = support_powers(sigma.spectrum_desc(), (1.0 - p.alpha) / (2.0 * p.z));
    let rho_scales = support_powers(rho.spectrum_desc(), p.alpha / (2.0 * p.z));
    let overlap = sigma.eigenbasis().columns(0, sigma_scales.len()).adjoint()
        * rho.eigenbasis().columns(0, rho_scales.len());
    let t = scaled_overlap_trace(&overlap, &sigma_scales, &rho_scales, p.z);
    debug_assert!(
        {
            // the mirrored composition of the definition
            let t2 = scaled_overlap_trace(&overlap.adjoint(), &rho_scales, &sigma_scales, p.z);
            (t - t2).abs() <= 1e-9 * (1.0 + t.abs().max(t2.abs()))
        },
        "the two symmetric compositions disagree"
    );
    t
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

/// Strict fidelity: for `alpha > 1` the support condition
/// `supp(rho) ⊆ supp(sigma)` is enforced and its violation is reported as
/// [`Error::Support`], distinct from any numeric failure.
pub fn alpha_z_fidelity(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &ParamPoint,
) -> Result<FidelityValue> {
    check_dims(rho, sigma)?;
    if p.alpha > 1.0 && !support_contained(rho, sigma) {
        return Err(Error::Support);
    }
    Ok(FidelityValue::from_trace(
        trace_quantity_restricted(rho, sigma, p),
        p.alpha,
    ))
}

/// Support-restricted fidelity: always finite; the flag is set when
/// `alpha > 1` and the support condition fails, in which case the value is the
/// kernel-convention (pseudo-inverse) quantity.
pub fn alpha_z_fidelity_restricted(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &ParamPoint,
) -> Result<(FidelityValue, bool)> {
    check_dims(rho, sigma)?;
    let warning = p.alpha > 1.0 && !support_contained(rho, sigma);
    Ok((
        FidelityValue::from_trace(trace_quantity_restricted(rho, sigma, p), p.alpha),
        warning,
    ))
}

/// Classical fidelity `(sum_i p_i^alpha q_i^(1-alpha))^(1/alpha)`.
///
/// Conventions: a term with `p_i = 0` is zero; `q_i = 0` with `p_i > 0` gives
/// zero for `alpha < 1` and propagates `+inf` for `alpha > 1` (a legal return).
pub fn classical_fidelity(p: &[f64], q: &[f64], alpha: f64) -> Result<f64> {
    validate_distribution(p, "p")?;
    validate_distribution(q, "q")?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::parameter("alpha", format!("must be > 0, got {alpha}")));
    }
    let mut sum = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let pi = pi.max(0.0);
        let qi = qi.max(0.0);
        if pi <= EIG_CLAMP {
            continue;
        }
        if qi <= EIG_CLAMP {
            if alpha > 1.0 {
                return Ok(f64::INFINITY);
            }
            if alpha == 1.0 {
                sum += pi;
            }
            continue;
        }
        sum += pi.powf(alpha) * qi.powf(1.0 - alpha);
    }
    Ok(sum.powf(1.0 / alpha))
}

fn validate_distribution(p: &[f64], name: &'static str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::parameter(name, "empty distribution".to_string()));
    }
    if let Some(&bad) = p.iter().find(|&&x| x < -EIG_CLAMP || !x.is_finite()) {
        return Err(Error::Validation(format!(
            "distribution {name} has invalid entry {bad}"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "distribution {name} sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Classical Renyi divergence `(alpha/(alpha-1)) ln F_alpha^C(p, q)`.
pub fn classical_renyi(p: &[f64], q: &[f64], alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(Error::parameter("alpha", "must differ from 1".to_string()));
    }
    let f = classical_fidelity(p, q, alpha)?;
    Ok(alpha / (alpha - 1.0) * f.ln())
}

/// Sandwiched Renyi relative entropy: `(alpha/(alpha-1)) ln F` when
/// `supp(rho) ⊆ supp(sigma)`, `+inf` otherwise. Natural logarithm; `alpha = 1`
/// is rejected rather than treated as a limit.
pub fn renyi_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, p: &ParamPoint) -> Result<f64> {
    p.require_alpha_not_one()?;
    check_dims(rho, sigma)?;
    if !support_contained(rho, sigma) {
        return Ok(f64::INFINITY);
    }
    let value = FidelityValue::from_trace(trace_quantity_restricted(rho, sigma, p), p.alpha);
    Ok(p.alpha / (p.alpha - 1.0) * value.fidelity.ln())
}

/// Uhlmann fidelity `(Tr[(sigma^(1/2) rho sigma^(1/2))^(1/2)])^2`, evaluated
/// step by step so it can cross-check the general functional at
/// `alpha = z = 1/2` without sharing its composition.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let sqrt_sigma = sigma.frac_power(0.5);
    let m = HermitianMatrix::symmetrize(&sqrt_sigma * rho.matrix() * &sqrt_sigma);
    let eig = eig_hermitian(&m);
    let root_sum: f64 = eig
        .eigenvalues()
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .sum();
    Ok(root_sum * root_sum)
}

/// Precomputed spectral data for evaluating `F(rho, U sigma U†)` over many
/// unitaries: rotating sigma only rotates its eigenbasis, so each evaluation
/// is two small products and one SVD of the rescaled overlap.
pub struct OrbitEvaluator {
    sigma_basis_adj: CMatrix,
    rho_basis: CMatrix,
    sigma_scales: Vec<f64>,
    rho_scales: Vec<f64>,
    alpha: f64,
    z: f64,
}

impl OrbitEvaluator {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix, p: &ParamPoint) -> Result<Self> {
        check_dims(rho, sigma)?;
        let sigma_scales = support_powers(sigma.spectrum_desc(), (1.0 - p.alpha()) / (2.0 * p.z()));
        let rho_scales = support_powers(rho.spectrum_desc(), p.alpha() / (2.0 * p.z()));
        Ok(Self {
            sigma_basis_adj: sigma.eigenbasis().columns(0, sigma_scales.len()).adjoint(),
            rho_basis: rho.eigenbasis().columns(0, rho_scales.len()).into_owned(),
            sigma_scales,
            rho_scales,
            alpha: p.alpha(),
            z: p.z(),
        })
    }

    /// `F(rho, U sigma U†)` under the support-restricted convention.
    pub fn fidelity(&self, u: &UnitaryMatrix) -> f64 {
        let overlap = &self.sigma_basis_adj * u.matrix().adjoint() * &self.rho_basis;
        let t = scaled_overlap_trace(&overlap, &self.sigma_scales, &self.rho_scales, self.z);
        t.powf(1.0 / self.alpha)
    }
}
