//! Fidelity between normalized subspace projectors, with dimension-count and
//! interlacing bounds.
//!
//! The exposed quantity is the trace functional `T` of the defining
//! composition applied to `P_m / m` and `P_n / n`; the fidelity itself is
//! `T^(1/alpha)` via the fidelity module. Projector powers are idempotent, so
//! commuting configurations are z-independent with closed form
//! `dim(S_m ∩ S_n) · m^(-alpha) · n^(alpha-1)`.

use crate::error::{Error, Result};
use crate::fidelity::{alpha_z_fidelity_restricted, ParamPoint};
use crate::linalg::{eig_hermitian, trace_power_of_spectrum, HermitianMatrix};
use crate::states::{subspace_state, DensityMatrix, SubspaceProjector};

/// Two projectors on a common space.
#[derive(Clone, Debug)]
pub struct SubspacePair {
    p_m: SubspaceProjector,
    p_n: SubspaceProjector,
}

impl SubspacePair {
    pub fn new(p_m: SubspaceProjector, p_n: SubspaceProjector) -> Result<Self> {
        if p_m.dim() != p_n.dim() {
            return Err(Error::DimensionMismatch {
                left: p_m.dim(),
                right: p_n.dim(),
            });
        }
        Ok(Self { p_m, p_n })
    }

    pub fn first(&self) -> &SubspaceProjector {
        &self.p_m
    }

    pub fn second(&self) -> &SubspaceProjector {
        &self.p_n
    }

    pub fn dim(&self) -> usize {
        self.p_m.dim()
    }
}

/// Trace quantity of a subspace pair; the warning flags the support-restricted
/// evaluation that occurs for `alpha > 1` when the first subspace is not
/// contained in the second.
#[derive(Clone, Copy, Debug)]
pub struct SubspaceFidelity {
    pub trace_quantity: f64,
    pub support_warning: bool,
}

/// `T(P_m/m, P_n/n)` through the general functional.
pub fn subspace_fidelity_trace(pair: &SubspacePair, p: &ParamPoint) -> Result<SubspaceFidelity> {
    let rho = subspace_state(pair.first());
    let sigma = subspace_state(pair.second());
    let (value, support_warning) = alpha_z_fidelity_restricted(&rho, &sigma, p)?;
    Ok(SubspaceFidelity {
        trace_quantity: value.trace_quantity,
        support_warning,
    })
}

/// Closed form for commuting subspace pairs:
/// `dim(S_m ∩ S_n) · m^(-alpha) · n^(alpha-1)`, independent of z.
pub fn commuting_subspace_formula(
    m: usize,
    n: usize,
    dim_intersection: usize,
    alpha: f64,
) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::parameter("m", "subspace ranks must be >= 1".to_string()));
    }
    if dim_intersection > m.min(n) {
        return Err(Error::parameter(
            "dim_intersection",
            format!("must be <= min(m, n) = {}", m.min(n)),
        ));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::parameter("alpha", format!("must be > 0, got {alpha}")));
    }
    let m = m as f64;
    let n = n as f64;
    Ok(dim_intersection as f64 * m.powf(-alpha) * n.powf(alpha - 1.0))
}

/// Range of the trace quantity over all m- and n-dimensional subspaces of a
/// d-dimensional space: the intersection dimension runs from
/// `max(m+n-d, 0)` to `min(m, n)`, both attained by commuting configurations.
pub fn subspace_bounds(m: usize, n: usize, d: usize, alpha: f64) -> Result<(f64, f64)> {
    if m == 0 || n == 0 || m > d || n > d {
        return Err(Error::parameter(
            "m",
            format!("ranks must satisfy 1 <= m, n <= d = {d}"),
        ));
    }
    let min_intersection = (m + n).saturating_sub(d);
    let lower = commuting_subspace_formula(m, n, min_intersection, alpha)?;
    let upper = commuting_subspace_formula(m, n, m.min(n), alpha)?;
    Ok((lower, upper))
}

/// Interlacing bounds on `T(rho, P/n)` over all rank-n projectors:
///
/// `n^(alpha-1) · sum_(bottom n) λ^alpha <= T <= n^(alpha-1) · sum_(top n) λ^alpha`,
///
/// attained by the bottom-n / top-n eigenprojectors of rho.
pub fn compression_bounds(rho: &DensityMatrix, n: usize, p: &ParamPoint) -> Result<(f64, f64)> {
    let d = rho.dim();
    if n == 0 || n > d {
        return Err(Error::parameter(
            "n",
            format!("must be in 1..={d}, got {n}"),
        ));
    }
    let alpha = p.alpha();
    let scale = (n as f64).powf(alpha - 1.0);
    let spectrum = rho.spectrum_desc();
    let top: f64 = spectrum[..n]
        .iter()
        .map(|&l| crate::linalg::clamped_power(l, alpha))
        .sum();
    let bottom: f64 = spectrum[d - n..]
        .iter()
        .map(|&l| crate::linalg::clamped_power(l, alpha))
        .sum();
    Ok((scale * bottom, scale * top))
}

/// Dimension of the intersection: the number of eigenvalues of
/// `P_m P_n P_m` within 1e-8 of one. Exact for commuting projectors; for
/// generic pairs eigenvalues strictly inside (0, 1) are principal-angle
/// overlaps and do not count.
pub fn intersection_dim(pair: &SubspacePair) -> usize {
    let product = HermitianMatrix::symmetrize(
        pair.first().matrix() * pair.second().matrix() * pair.first().matrix(),
    );
    let eig = eig_hermitian(&product);
    eig.eigenvalues()
        .iter()
        .filter(|&&l| (l - 1.0).abs() <= 1e-8)
        .count()
}

/// Eigenvalues (descending) of the compression `P rho^(alpha/z) P` restricted
/// to the range of `P`; exposed for interlacing diagnostics.
pub fn compression_spectrum(
    rho: &DensityMatrix,
    projector: &SubspaceProjector,
    p: &ParamPoint,
) -> Result<Vec<f64>> {
    if rho.dim() != projector.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: projector.dim(),
        });
    }
    let powered = rho.frac_power(p.alpha() / p.z());
    let compressed =
        HermitianMatrix::symmetrize(projector.matrix() * powered * projector.matrix());
    let eig = eig_hermitian(&compressed);
    Ok(eig.eigenvalues()[..projector.rank()].to_vec())
}

/// `T` evaluated on the projector directly:
/// `n^(alpha-1) Tr[(P rho^(alpha/z) P)^z]` (used to confirm attainment).
pub fn compression_trace(
    rho: &DensityMatrix,
    projector: &SubspaceProjector,
    p: &ParamPoint,
) -> Result<f64> {
    if rho.dim() != projector.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: projector.dim(),
        });
    }
    let powered = rho.frac_power(p.alpha() / p.z());
    let compressed =
        HermitianMatrix::symmetrize(projector.matrix() * powered * projector.matrix());
    let eig = eig_hermitian(&compressed);
    let n = projector.rank() as f64;
    Ok(n.powf(p.alpha() - 1.0) * trace_power_of_spectrum(eig.eigenvalues(), p.z()))
}

/// Projector onto the top-n (`top = true`) or bottom-n eigenvectors of rho.
pub fn eigen_subspace(rho: &DensityMatrix, n: usize, top: bool) -> Result<SubspaceProjector> {
    let d = rho.dim();
    if n == 0 || n > d {
        return Err(Error::parameter(
            "n",
            format!("must be in 1..={d}, got {n}"),
        ));
    }
    let start = if top { 0 } else { d - n };
    let cols = rho.eigenbasis().columns(start, n).into_owned();
    SubspaceProjector::from_orthonormal_columns(&cols)
}
