//! CPTP channels as Kraus families, plus the closed-form fidelity extrema
//! under channel evolutions: all channels, mixed-unitary channels, and the
//! pure-state boundary.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fidelity::{classical_fidelity, ParamPoint, Region};
use crate::linalg::{CMatrix, HermitianMatrix};
use crate::orbits::{classical_orbit_value, ExtremumKind, Pairing};
use crate::states::{haar_unitary_from, substream, DensityMatrix, UnitaryMatrix};

/// Tolerance for the trace-preservation and unitality sums.
pub const CHANNEL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelTag {
    Cptp,
    Unital,
    MixedUnitary,
    Pinching,
    Replacement,
}

impl std::fmt::Display for ChannelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ChannelTag::Cptp => "cptp",
            ChannelTag::Unital => "unital",
            ChannelTag::MixedUnitary => "mixed-unitary",
            ChannelTag::Pinching => "pinching",
            ChannelTag::Replacement => "replacement",
        };
        write!(f, "{s}")
    }
}

/// A CPTP map as a finite Kraus family, with structural class tags.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    tags: BTreeSet<ChannelTag>,
    dim: usize,
}

fn max_entry_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

impl KrausChannel {
    /// Builds a channel from raw Kraus operators, verifying trace preservation
    /// and deriving the cheap structural tags (CPTP, unital).
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Validation("empty Kraus family".into()));
        }
        let dim = kraus[0].nrows();
        for k in &kraus {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::Validation(
                    "Kraus operators must be square and share one dimension".into(),
                ));
            }
        }
        let mut tags = BTreeSet::new();
        tags.insert(ChannelTag::Cptp);
        let mut channel = Self { kraus, tags, dim };
        let tp = channel.trace_preservation_deviation();
        if tp > CHANNEL_TOL {
            return Err(Error::Validation(format!(
                "Kraus family is not trace preserving: deviation {tp:.3e}"
            )));
        }
        if channel.unitality_deviation() <= CHANNEL_TOL {
            channel.tags.insert(ChannelTag::Unital);
        }
        Ok(channel)
    }

    /// Max-entry deviation of `sum K† K` from the identity.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        max_entry_deviation(&acc, &CMatrix::identity(self.dim, self.dim))
    }

    /// Max-entry deviation of `sum K K†` from the identity.
    pub fn unitality_deviation(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc += k * k.adjoint();
        }
        max_entry_deviation(&acc, &CMatrix::identity(self.dim, self.dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_operators(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn tags(&self) -> &BTreeSet<ChannelTag> {
        &self.tags
    }

    pub fn is_unital(&self) -> bool {
        self.tags.contains(&ChannelTag::Unital)
    }

    pub(crate) fn insert_tag(&mut self, tag: ChannelTag) {
        self.tags.insert(tag);
    }

    /// `sum_i K_i m K_i†` on a raw operator.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc += k * m * k.adjoint();
        }
        acc
    }

    /// Applies the channel to a state; the output is validated as a state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: self.dim,
            });
        }
        let out = HermitianMatrix::symmetrize(self.apply_matrix(rho.matrix()));
        DensityMatrix::from_matrix(out)
    }

    /// Verifies that a claimed structural tag actually holds for this Kraus
    /// family, within [`CHANNEL_TOL`].
    pub fn verify_tag(&self, tag: ChannelTag) -> bool {
        match tag {
            ChannelTag::Cptp => self.trace_preservation_deviation() <= CHANNEL_TOL,
            ChannelTag::Unital => self.unitality_deviation() <= CHANNEL_TOL,
            ChannelTag::MixedUnitary => self.kraus.iter().all(|k| {
                // K = sqrt(p) U: K†K must be p·I with U = K / sqrt(p) unitary
                let gram = k.adjoint() * k;
                let p = gram.diagonal().iter().map(|c| c.re).sum::<f64>() / self.dim as f64;
                if p < 0.0 {
                    return false;
                }
                let scaled_eye = CMatrix::identity(self.dim, self.dim).scale(p);
                max_entry_deviation(&gram, &scaled_eye) <= CHANNEL_TOL
            }),
            ChannelTag::Pinching => {
                let mut sum = CMatrix::zeros(self.dim, self.dim);
                for k in &self.kraus {
                    let trace: f64 = k.diagonal().iter().map(|c| c.re).sum();
                    let herm = max_entry_deviation(k, &k.adjoint());
                    let idem = max_entry_deviation(&(k * k), k);
                    if herm > CHANNEL_TOL || idem > CHANNEL_TOL || (trace - 1.0).abs() > CHANNEL_TOL
                    {
                        return false;
                    }
                    sum += k;
                }
                max_entry_deviation(&sum, &CMatrix::identity(self.dim, self.dim)) <= CHANNEL_TOL
            }
            ChannelTag::Replacement => {
                // channel must send every basis matrix E_jk to delta_jk * tau
                let mut basis0 = CMatrix::zeros(self.dim, self.dim);
                basis0[(0, 0)] = Complex64::new(1.0, 0.0);
                let tau = self.apply_matrix(&basis0);
                for j in 0..self.dim {
                    for k in 0..self.dim {
                        let mut e = CMatrix::zeros(self.dim, self.dim);
                        e[(j, k)] = Complex64::new(1.0, 0.0);
                        let out = self.apply_matrix(&e);
                        let expected = if j == k {
                            tau.clone()
                        } else {
                            CMatrix::zeros(self.dim, self.dim)
                        };
                        if max_entry_deviation(&out, &expected) > 1e-8 {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// The identity channel.
    pub fn identity(dim: usize) -> Self {
        let mut ch = Self::new(vec![CMatrix::identity(dim, dim)]).expect("identity is CPTP");
        ch.insert_tag(ChannelTag::MixedUnitary);
        ch
    }
}

/// `sum_i p_i U_i (·) U_i†` with Kraus operators `sqrt(p_i) U_i`.
pub fn mixed_unitary(probs: &[f64], unitaries: &[UnitaryMatrix]) -> Result<KrausChannel> {
    if probs.len() != unitaries.len() || probs.is_empty() {
        return Err(Error::Validation(
            "probabilities and unitaries must be nonempty and equally long".into(),
        ));
    }
    if let Some(&p) = probs.iter().find(|&&p| p < 0.0) {
        return Err(Error::Validation(format!("negative probability {p}")));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "probabilities sum to {sum}, expected 1"
        )));
    }
    let dim = unitaries[0].dim();
    if unitaries.iter().any(|u| u.dim() != dim) {
        return Err(Error::Validation("unitaries differ in dimension".into()));
    }
    let kraus = probs
        .iter()
        .zip(unitaries)
        .map(|(&p, u)| u.matrix().scale(p.sqrt()))
        .collect();
    let mut ch = KrausChannel::new(kraus)?;
    ch.insert_tag(ChannelTag::MixedUnitary);
    Ok(ch)
}

/// Pinching onto the diagonal of the given orthonormal basis: Kraus operators
/// are the basis projectors `|b_i><b_i|`.
pub fn pinching(basis: &UnitaryMatrix) -> KrausChannel {
    let d = basis.dim();
    let kraus = (0..d)
        .map(|i| {
            let col = basis.matrix().column(i);
            &col * col.adjoint()
        })
        .collect();
    let mut ch = KrausChannel::new(kraus).expect("basis projectors are CPTP");
    ch.insert_tag(ChannelTag::Pinching);
    ch
}

/// The replacement channel `X -> Tr(X) tau`, with Kraus family
/// `sqrt(lambda_j) |v_j><e_i|` over tau's eigenpairs and the coordinate basis.
pub fn replacement(tau: &DensityMatrix) -> KrausChannel {
    let d = tau.dim();
    let mut kraus = Vec::new();
    for (j, &l) in tau.spectrum_desc().iter().enumerate() {
        if l <= crate::linalg::EIG_CLAMP {
            continue;
        }
        let v = tau.eigenbasis().column(j).into_owned().scale(l.sqrt());
        for i in 0..d {
            let mut k = CMatrix::zeros(d, d);
            for r in 0..d {
                k[(r, i)] = v[r];
            }
            kraus.push(k);
        }
    }
    let mut ch = KrausChannel::new(kraus).expect("replacement family is CPTP");
    ch.insert_tag(ChannelTag::Replacement);
    ch
}

/// Haar-random CPTP channel: a random isometry from d to d*k, partitioned
/// into k Kraus blocks.
pub fn random_cptp(dim: usize, kraus_count: usize, seed: u64) -> Result<KrausChannel> {
    random_cptp_from(dim, kraus_count, &mut substream(seed, 0))
}

pub fn random_cptp_from(
    dim: usize,
    kraus_count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<KrausChannel> {
    if kraus_count == 0 {
        return Err(Error::parameter("kraus_count", "must be >= 1".to_string()));
    }
    let big = haar_unitary_from(dim * kraus_count, rng);
    let isometry = big.matrix().columns(0, dim).into_owned();
    let kraus = (0..kraus_count)
        .map(|i| isometry.rows(i * dim, dim).into_owned())
        .collect();
    KrausChannel::new(kraus)
}

/// Random mixed-unitary channel with `k` Haar unitaries and flat-Dirichlet
/// weights.
pub fn random_mixed_unitary_from(
    dim: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<KrausChannel> {
    use rand::Rng;
    let mut weights: Vec<f64> = (0..k)
        .map(|_| -f64::ln(1.0 - rng.gen::<f64>()))
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let unitaries: Vec<UnitaryMatrix> = (0..k).map(|_| haar_unitary_from(dim, rng)).collect();
    mixed_unitary(&weights, &unitaries)
}

/// A fidelity extremum over a channel family, with the state that attains it
/// when one exists in closed form.
#[derive(Clone, Debug)]
pub struct PureStateExtremum {
    pub value: f64,
    pub kind: ExtremumKind,
    pub achiever: DensityMatrix,
}

/// Extremum of `F(rho, sigma)` over pure states `sigma`: the minimum
/// `lambda_min(rho)` on the concave region, the maximum `lambda_max(rho)` on
/// the convex-DPI region, attained at the corresponding eigenvector.
pub fn pure_state_extrema(rho: &DensityMatrix, p: &ParamPoint) -> Result<PureStateExtremum> {
    let d = rho.dim();
    match p.region() {
        Region::Concave => {
            let v = rho.eigenbasis().column(d - 1).into_owned();
            Ok(PureStateExtremum {
                value: rho.lambda_min(),
                kind: ExtremumKind::Min,
                achiever: DensityMatrix::pure(&v)?,
            })
        }
        Region::ConvexDpi => {
            let v = rho.eigenbasis().column(0).into_owned();
            Ok(PureStateExtremum {
                value: rho.lambda_max(),
                kind: ExtremumKind::Max,
                achiever: DensityMatrix::pure(&v)?,
            })
        }
        Region::Neither => Err(Error::UnsupportedRegion {
            alpha: p.alpha(),
            z: p.z(),
            required: "the concave region (min) or the convex-DPI region (max)",
        }),
    }
}

/// Channel family selector for [`channel_class_extrema`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelFamily {
    All,
    MixedUnitary,
}

#[derive(Clone, Copy, Debug)]
pub struct ChannelExtremum {
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Closed-form extremum of `F(rho, Phi(sigma))` over a channel family: the
/// minimum on the concave region, the maximum on the convex-DPI region.
///
/// `All` gives `lambda_min(rho)` / `lambda_max(rho)` (independent of sigma);
/// `MixedUnitary` gives the classical fidelity of the reversed spectra
/// pairing, matching the orbit closed forms at the unitary extreme points.
pub fn channel_class_extrema(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    family: ChannelFamily,
    p: &ParamPoint,
) -> Result<ChannelExtremum> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let kind = match p.region() {
        Region::Concave => ExtremumKind::Min,
        Region::ConvexDpi => ExtremumKind::Max,
        Region::Neither => {
            return Err(Error::UnsupportedRegion {
                alpha: p.alpha(),
                z: p.z(),
                required: "the concave region (min) or the convex-DPI region (max)",
            })
        }
    };
    let value = match family {
        ChannelFamily::All => match kind {
            ExtremumKind::Min => rho.lambda_min(),
            ExtremumKind::Max => rho.lambda_max(),
        },
        ChannelFamily::MixedUnitary => {
            classical_orbit_value(rho, sigma, Pairing::Reversed, p.alpha())?
        }
    };
    Ok(ChannelExtremum { value, kind })
}

/// Margins collected by [`unital_majorization_check`]: all must be
/// non-negative (within tolerance) for a unital channel.
#[derive(Clone, Debug)]
pub struct UnitalMajorizationReport {
    /// Partial-sum gaps `sum_{i<=k} λ↓(σ) - sum_{i<=k} λ↓(Φσ)`, k = 1..d.
    pub majorization_margins: Vec<f64>,
    /// Classical-fidelity inequality margin for the supplied rho and alpha,
    /// signed so that the asserted direction is positive.
    pub fidelity_margin: f64,
    pub worst_margin: f64,
}

/// Verifies `Phi(sigma) ≺ sigma` for a unital channel, and the up-down
/// classical fidelity comparison between sigma and its image.
pub fn unital_majorization_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    channel: &KrausChannel,
    alpha: f64,
) -> Result<UnitalMajorizationReport> {
    if !channel.is_unital() {
        return Err(Error::Validation(
            "majorization check requires a unital channel".into(),
        ));
    }
    if alpha == 1.0 || alpha <= 0.0 {
        return Err(Error::parameter(
            "alpha",
            "must be positive and differ from 1".to_string(),
        ));
    }
    let image = channel.apply(sigma)?;
    let mut majorization_margins = Vec::with_capacity(sigma.dim());
    let mut sum_sigma = 0.0;
    let mut sum_image = 0.0;
    for (a, b) in sigma.spectrum_desc().iter().zip(image.spectrum_desc()) {
        sum_sigma += a;
        sum_image += b;
        majorization_margins.push(sum_sigma - sum_image);
    }

    let up_rho = rho.spectrum_asc();
    let f_image = classical_fidelity(up_rho, image.spectrum_desc(), alpha)?;
    let f_sigma = classical_fidelity(up_rho, sigma.spectrum_desc(), alpha)?;
    let fidelity_margin = if alpha < 1.0 {
        f_image - f_sigma
    } else {
        f_sigma - f_image
    };

    let worst_margin = majorization_margins
        .iter()
        .copied()
        .fold(fidelity_margin, f64::min);
    Ok(UnitalMajorizationReport {
        majorization_margins,
        fidelity_margin,
        worst_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::{alpha_z_fidelity, alpha_z_fidelity_restricted};
    use crate::states::{haar_unitary, random_density};
    use std::f64::consts::TAU;

    #[test]
    fn identity_channel_fixes_states() {
        let ch = KrausChannel::identity(3);
        let rho = random_density(3, 3, 1).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).norm() < 1e-12);
        assert!(ch.is_unital());
    }

    #[test]
    fn replacement_outputs_tau() {
        let tau = random_density(3, 2, 2).unwrap();
        let ch = replacement(&tau);
        assert!(ch.verify_tag(ChannelTag::Replacement));
        for seed in 3..6 {
            let rho = random_density(3, 3, seed).unwrap();
            let out = ch.apply(&rho).unwrap();
            assert!((out.matrix() - tau.matrix()).norm() < 1e-12);
        }
        assert!(!ch.is_unital());

        let uniform = DensityMatrix::maximally_mixed(3);
        assert!(replacement(&uniform).is_unital());

        let pure_tau = random_density(3, 1, 7).unwrap();
        let out = replacement(&pure_tau)
            .apply(&random_density(3, 3, 8).unwrap())
            .unwrap();
        assert_eq!(out.rank(), 1);
    }

    #[test]
    fn replacement_with_own_state_gives_unit_fidelity() {
        let rho = random_density(3, 3, 9).unwrap();
        let sigma = random_density(3, 3, 10).unwrap();
        let ch = replacement(&rho);
        let out = ch.apply(&sigma).unwrap();
        for &(alpha, z) in &[(0.5, 0.5), (2.0, 1.5)] {
            let p = ParamPoint::new(alpha, z).unwrap();
            let f = alpha_z_fidelity(&rho, &out, &p).unwrap();
            assert!((f.fidelity - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pinching_projects_onto_diagonal() {
        let basis = haar_unitary(3, 11);
        let ch = pinching(&basis);
        assert!(ch.is_unital());
        assert!(ch.verify_tag(ChannelTag::Pinching));

        // diagonal (in that basis) operators are fixed
        let diag = HermitianMatrix::from_real_diagonal(&[0.5, 0.3, 0.2]);
        let rho_diag = DensityMatrix::from_matrix(HermitianMatrix::symmetrize(
            basis.conjugate(diag.matrix()),
        ))
        .unwrap();
        let out = ch.apply(&rho_diag).unwrap();
        assert!((out.matrix() - rho_diag.matrix()).norm() < 1e-10);

        // general action: keep the diagonal, kill the rest
        let rho = random_density(3, 3, 12).unwrap();
        let out = ch.apply(&rho).unwrap();
        let in_basis = basis.adjoint().conjugate(rho.matrix());
        let out_basis = basis.adjoint().conjugate(out.matrix());
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert!((out_basis[(i, j)] - in_basis[(i, j)]).norm() < 1e-10);
                } else {
                    assert!(out_basis[(i, j)].norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pinching_in_eigenbasis_commutes_with_state() {
        let rho = random_density(4, 4, 13).unwrap();
        let basis = UnitaryMatrix::new(rho.eigenbasis().clone()).unwrap();
        let ch = pinching(&basis);
        let fixed = ch.apply(&rho).unwrap();
        assert!((fixed.matrix() - rho.matrix()).norm() < 1e-10);

        let other = random_density(4, 4, 14).unwrap();
        let pinched = ch.apply(&other).unwrap();
        assert!(crate::linalg::commutator_norm(rho.matrix(), pinched.matrix()) < 1e-10);
    }

    #[test]
    fn mixed_unitary_tags_and_depolarizing() {
        let eye = UnitaryMatrix::identity(2);
        let flip = UnitaryMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        ))
        .unwrap();
        let ch = mixed_unitary(&[0.5, 0.5], &[eye.clone(), flip]).unwrap();
        assert!(ch.is_unital());
        assert!(ch.verify_tag(ChannelTag::MixedUnitary));
        let rho = random_density(2, 2, 15).unwrap();
        let out = ch.apply(&rho).unwrap();
        let trace: f64 = out.matrix().diagonal().iter().map(|c| c.re).sum();
        assert!((trace - 1.0).abs() < 1e-12);

        let single = mixed_unitary(&[1.0], &[eye]).unwrap();
        let out = single.apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).norm() < 1e-12);

        // uniform Heisenberg-Weyl mixture depolarizes completely
        let d = 3;
        let omega = Complex64::from_polar(1.0, TAU / d as f64);
        let shift = CMatrix::from_fn(d, d, |i, j| {
            if i == (j + 1) % d {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let phase = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                omega.powu(i as u32)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut unitaries = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let mut m = CMatrix::identity(d, d);
                for _ in 0..a {
                    m = &shift * m;
                }
                for _ in 0..b {
                    m = &phase * m;
                }
                unitaries.push(UnitaryMatrix::new(m).unwrap());
            }
        }
        let probs = vec![1.0 / (d * d) as f64; d * d];
        let dep = mixed_unitary(&probs, &unitaries).unwrap();
        let rho = random_density(d, d, 16).unwrap();
        let out = dep.apply(&rho).unwrap();
        let expected = CMatrix::identity(d, d).unscale(d as f64);
        assert!((out.matrix() - expected).norm() < 1e-10);
    }

    #[test]
    fn mixed_unitary_validation() {
        let eye = UnitaryMatrix::identity(2);
        assert!(mixed_unitary(&[0.5, 0.6], &[eye.clone(), eye.clone()]).is_err());
        assert!(mixed_unitary(&[-0.1, 1.1], &[eye.clone(), eye.clone()]).is_err());
        assert!(mixed_unitary(&[1.0], &[]).is_err());
    }

    #[test]
    fn random_cptp_structure() {
        let ch = random_cptp(3, 4, 17).unwrap();
        assert!(ch.trace_preservation_deviation() < 1e-9);
        assert_eq!(ch.kraus_operators().len(), 4);

        // k = 1 is a unitary channel
        let ch1 = random_cptp(3, 1, 18).unwrap();
        assert!(ch1.is_unital());
        assert!(ch1.verify_tag(ChannelTag::MixedUnitary));

        let rho = random_density(3, 3, 19).unwrap();
        let out = ch.apply(&rho).unwrap();
        let trace: f64 = out.matrix().diagonal().iter().map(|c| c.re).sum();
        assert!((trace - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dpi_margin_on_random_channels() {
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let rho = random_density(3, 3, 20).unwrap();
        let sigma = random_density(3, 3, 21).unwrap();
        let base = alpha_z_fidelity(&rho, &sigma, &p).unwrap().fidelity;
        for seed in 0..50 {
            let ch = random_cptp_from(3, 3, &mut substream(22, seed)).unwrap();
            let f = alpha_z_fidelity_restricted(
                &ch.apply(&rho).unwrap(),
                &ch.apply(&sigma).unwrap(),
                &p,
            )
            .unwrap()
            .0
            .fidelity;
            assert!(f <= base + 1e-9, "DPI violated: {f} > {base}");
        }
    }

    #[test]
    fn pure_state_extrema_cases() {
        let mixed = DensityMatrix::maximally_mixed(4);
        let p = ParamPoint::new(0.5, 0.5).unwrap();
        let ext = pure_state_extrema(&mixed, &p).unwrap();
        assert!((ext.value - 0.25).abs() < 1e-12);
        assert_eq!(ext.kind, ExtremumKind::Min);

        let rho = DensityMatrix::from_spectrum(&[0.7, 0.3], &haar_unitary(2, 23)).unwrap();
        let ext = pure_state_extrema(&rho, &p).unwrap();
        assert!((ext.value - 0.3).abs() < 1e-12);
        let f = alpha_z_fidelity(&rho, &ext.achiever, &p).unwrap().fidelity;
        assert!((f - 0.3).abs() < 1e-10);

        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let ext = pure_state_extrema(&rho, &p).unwrap();
        assert!((ext.value - 0.7).abs() < 1e-12);
        assert_eq!(ext.kind, ExtremumKind::Max);
        let (f, _) = alpha_z_fidelity_restricted(&rho, &ext.achiever, &p).unwrap();
        assert!((f.fidelity - 0.7).abs() < 1e-10);

        let p = ParamPoint::new(3.0, 1.0).unwrap();
        assert!(matches!(
            pure_state_extrema(&rho, &p),
            Err(Error::UnsupportedRegion { .. })
        ));
    }

    #[test]
    fn channel_class_extrema_values() {
        let rho = DensityMatrix::maximally_mixed(2);
        let sigma = random_density(2, 2, 24).unwrap();
        let p = ParamPoint::new(0.5, 0.5).unwrap();
        let ext = channel_class_extrema(&rho, &sigma, ChannelFamily::All, &p).unwrap();
        assert!((ext.value - 0.5).abs() < 1e-12);

        let rho = DensityMatrix::from_spectrum(&[0.7, 0.3], &haar_unitary(2, 25)).unwrap();
        let sigma = DensityMatrix::from_spectrum(&[0.6, 0.4], &haar_unitary(2, 26)).unwrap();
        let p = ParamPoint::new(2.0, 1.5).unwrap();
        let ext =
            channel_class_extrema(&rho, &sigma, ChannelFamily::MixedUnitary, &p).unwrap();
        let expected = (0.49f64 / 0.4 + 0.09 / 0.6).sqrt();
        assert!((ext.value - expected).abs() < 1e-12);
        assert_eq!(ext.kind, ExtremumKind::Max);

        let p = ParamPoint::new(0.5, 0.5).unwrap();
        let ext =
            channel_class_extrema(&rho, &sigma, ChannelFamily::MixedUnitary, &p).unwrap();
        let reversed = classical_orbit_value(&rho, &sigma, Pairing::Reversed, 0.5).unwrap();
        assert!((ext.value - reversed).abs() < 1e-12);
        assert_eq!(ext.kind, ExtremumKind::Min);
    }

    #[test]
    fn unital_majorization_margins() {
        let rho = random_density(3, 3, 27).unwrap();
        let sigma = random_density(3, 3, 28).unwrap();

        let eye = KrausChannel::identity(3);
        let report = unital_majorization_check(&rho, &sigma, &eye, 0.5).unwrap();
        assert!(report.worst_margin.abs() < 1e-10);

        let pinch = pinching(&haar_unitary(3, 29));
        let report = unital_majorization_check(&rho, &sigma, &pinch, 0.5).unwrap();
        assert!(report.worst_margin > -1e-9);
        // strict majorization for a non-diagonal sigma under pinching
        assert!(report.majorization_margins[0] > 1e-6);

        let report = unital_majorization_check(&rho, &sigma, &pinch, 2.0).unwrap();
        assert!(report.worst_margin > -1e-9);

        let tau = random_density(3, 3, 30).unwrap();
        let nonunital = replacement(&tau);
        assert!(unital_majorization_check(&rho, &sigma, &nonunital, 0.5).is_err());
        assert!(unital_majorization_check(&rho, &sigma, &eye, 1.0).is_err());
    }
}
