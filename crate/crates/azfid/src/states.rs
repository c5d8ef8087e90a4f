//! Density matrices, subspace projectors, and Haar-random sampling.
//!
//! All randomness flows through [`substream`]: a single 64-bit seed plus a
//! trial index deterministically select a ChaCha8 stream, so Monte-Carlo runs
//! are reproducible and trials can be distributed without sharing RNG state.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, CMatrix, CVector, EigenSystem, HermitianMatrix, EIG_CLAMP,
};

pub use crate::linalg::UnitaryMatrix;

/// Tolerance for the unit-trace check on density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Tolerance for the projector law `P^2 = P`.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Derives the RNG for trial `trial` of the stream seeded by `seed`.
///
/// ChaCha8 keyed by the seed with the trial index as the stream id: distinct
/// trials never overlap, and `(seed, trial)` fully determines every draw.
pub fn substream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One standard complex Gaussian entry, CN(0, 1).
fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians.
pub(crate) fn ginibre_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// A quantum state: PSD, unit trace, with its spectral decomposition cached at
/// construction (every closed-form formula downstream wants sorted eigenvalues).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum_desc: Vec<f64>,
    spectrum_asc: Vec<f64>,
    eigenbasis: CMatrix,
}

impl DensityMatrix {
    /// Validates PSD (eigenvalues >= -1e-10) and unit trace, then caches the
    /// spectrum and eigenbasis.
    pub fn from_matrix(matrix: HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(&matrix);
        Self::from_parts(matrix, eig)
    }

    fn from_parts(matrix: HermitianMatrix, eig: EigenSystem) -> Result<Self> {
        let min = eig.min_eigenvalue();
        if min < -EIG_CLAMP {
            return Err(Error::NotPositiveSemiDefinite {
                min_eigenvalue: min,
            });
        }
        let trace: f64 = eig.eigenvalues().iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace {trace} deviates from 1 beyond {TRACE_TOL:.1e}"
            )));
        }
        let spectrum_desc = eig.eigenvalues().to_vec();
        let mut spectrum_asc = spectrum_desc.clone();
        spectrum_asc.reverse();
        Ok(Self {
            matrix,
            spectrum_desc,
            spectrum_asc,
            eigenbasis: eig.eigenvectors().clone(),
        })
    }

    /// `basis · diag(probs) · basis†` from a classical distribution.
    pub fn from_spectrum(probs: &[f64], basis: &UnitaryMatrix) -> Result<Self> {
        if probs.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: probs.len(),
                right: basis.dim(),
            });
        }
        if let Some(p) = probs.iter().find(|&&p| p < 0.0) {
            return Err(Error::Validation(format!(
                "negative spectrum entry {p} in density construction"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "spectrum sums to {sum}, expected 1 within {TRACE_TOL:.1e}"
            )));
        }
        let diag = HermitianMatrix::from_real_diagonal(probs);
        let matrix = HermitianMatrix::symmetrize(basis.conjugate(diag.matrix()));
        Self::from_matrix(matrix)
    }

    /// The pure state `|v><v|` (v is normalized internally).
    pub fn pure(v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if norm < 1e-12 {
            return Err(Error::Validation("zero vector cannot be normalized".into()));
        }
        let v = v.unscale(norm);
        let matrix = HermitianMatrix::symmetrize(&v * v.adjoint());
        Self::from_matrix(matrix)
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let probs = vec![1.0 / dim as f64; dim];
        Self::from_spectrum(&probs, &UnitaryMatrix::identity(dim)).expect("uniform spectrum is valid")
    }

    /// `U ρ U†`. The spectrum is conjugation-invariant, so the caches carry
    /// over and only the eigenbasis rotates.
    pub fn conjugated(&self, u: &UnitaryMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: self.dim(),
            });
        }
        Ok(Self {
            matrix: HermitianMatrix::symmetrize(u.conjugate(self.matrix.matrix())),
            spectrum_desc: self.spectrum_desc.clone(),
            spectrum_asc: self.spectrum_asc.clone(),
            eigenbasis: u.matrix() * &self.eigenbasis,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn matrix(&self) -> &CMatrix {
        self.matrix.matrix()
    }

    /// Eigenvalues sorted descending.
    pub fn spectrum_desc(&self) -> &[f64] {
        &self.spectrum_desc
    }

    /// Eigenvalues sorted ascending.
    pub fn spectrum_asc(&self) -> &[f64] {
        &self.spectrum_asc
    }

    /// Eigenvector columns matching `spectrum_desc`.
    pub fn eigenbasis(&self) -> &CMatrix {
        &self.eigenbasis
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum_desc[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.spectrum_desc.last().expect("nonempty spectrum")
    }

    /// Number of eigenvalues above the kernel clamp.
    pub fn rank(&self) -> usize {
        self.spectrum_desc.iter().filter(|&&l| l > EIG_CLAMP).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    /// `ρ^p` on the support, from the cached decomposition.
    pub fn frac_power(&self, p: f64) -> CMatrix {
        let d = self.dim();
        let diag = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(crate::linalg::clamped_power(self.spectrum_desc[i], p), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.eigenbasis * diag * self.eigenbasis.adjoint()
    }

    /// Projector onto the support subspace.
    pub fn support_projector(&self) -> CMatrix {
        self.frac_power(0.0)
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the R-diagonal
/// phases absorbed into Q.
pub fn haar_unitary(dim: usize, seed: u64) -> UnitaryMatrix {
    haar_unitary_from(dim, &mut substream(seed, 0))
}

pub fn haar_unitary_from(dim: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let g = ginibre_matrix(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::from_matrix_unchecked(q)
}

/// Random state `G G† / Tr(G G†)` from a d x rank complex Gaussian `G`; the
/// result has the requested rank almost surely.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_from(dim, rank, &mut substream(seed, 0))
}

pub fn random_density_from(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::parameter(
            "rank",
            format!("must be in 1..={dim}, got {rank}"),
        ));
    }
    let g = ginibre_matrix(dim, rank, rng);
    let gram = &g * g.adjoint();
    let trace: f64 = gram.diagonal().iter().map(|c| c.re).sum();
    let matrix = HermitianMatrix::symmetrize(gram.unscale(trace.into()));
    DensityMatrix::from_matrix(matrix)
}

/// Orthogonal projector of known rank.
#[derive(Clone, Debug)]
pub struct SubspaceProjector {
    projector: HermitianMatrix,
    rank: usize,
}

impl SubspaceProjector {
    /// Validates `P² = P` within 1e-10 and an integer trace m >= 1.
    pub fn new(projector: HermitianMatrix) -> Result<Self> {
        let p = projector.matrix();
        let dev = (p * p - p).norm();
        if dev > PROJECTOR_TOL {
            return Err(Error::Validation(format!(
                "projector law violated: |P^2 - P| = {dev:.3e}"
            )));
        }
        let trace = projector.trace();
        let rank = trace.round();
        if (trace - rank).abs() > 1e-8 || rank < 1.0 {
            return Err(Error::Validation(format!(
                "projector trace {trace} is not a positive integer"
            )));
        }
        Ok(Self {
            projector,
            rank: rank as usize,
        })
    }

    /// Projector onto the span of the given coordinate axes.
    pub fn coordinate(dim: usize, axes: &[usize]) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Validation("empty axis set for projector".into()));
        }
        let mut diag = vec![0.0; dim];
        for &a in axes {
            if a >= dim {
                return Err(Error::parameter(
                    "axes",
                    format!("axis {a} out of range for dimension {dim}"),
                ));
            }
            diag[a] = 1.0;
        }
        let rank = diag.iter().filter(|&&x| x == 1.0).count();
        Ok(Self {
            projector: HermitianMatrix::from_real_diagonal(&diag),
            rank,
        })
    }

    /// `C C†` for orthonormal columns `C`.
    pub fn from_orthonormal_columns(columns: &CMatrix) -> Result<Self> {
        let p = HermitianMatrix::symmetrize(columns * columns.adjoint());
        Self::new(p)
    }

    /// Span of the first `rank` columns of a Haar unitary.
    pub fn random(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        if rank == 0 || rank > dim {
            return Err(Error::parameter(
                "rank",
                format!("must be in 1..={dim}, got {rank}"),
            ));
        }
        let u = haar_unitary_from(dim, rng);
        let cols = u.matrix().columns(0, rank).into_owned();
        Self::from_orthonormal_columns(&cols)
    }

    pub fn dim(&self) -> usize {
        self.projector.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.projector
    }

    pub fn matrix(&self) -> &CMatrix {
        self.projector.matrix()
    }
}

/// The normalized subspace state `P / m`.
pub fn subspace_state(projector: &SubspaceProjector) -> DensityMatrix {
    let m = projector.rank() as f64;
    let matrix = HermitianMatrix::symmetrize(projector.matrix().unscale(m.into()));
    DensityMatrix::from_matrix(matrix).expect("projector/m is a valid state")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_spectrum_pure_and_uniform() {
        let rho = DensityMatrix::from_spectrum(&[1.0, 0.0, 0.0], &UnitaryMatrix::identity(3)).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((rho.lambda_max() - 1.0).abs() < 1e-12);

        let basis = haar_unitary(3, 42);
        let mixed = DensityMatrix::from_spectrum(&[1.0 / 3.0; 3], &basis).unwrap();
        let expected = CMatrix::identity(3, 3).unscale(3.0.into());
        assert!((mixed.matrix() - expected).norm() < 1e-12);
    }

    #[test]
    fn from_spectrum_round_trips_through_eigensolver() {
        let basis = haar_unitary(2, 7);
        let rho = DensityMatrix::from_spectrum(&[0.7, 0.3], &basis).unwrap();
        assert!((rho.spectrum_desc()[0] - 0.7).abs() < 1e-12);
        assert!((rho.spectrum_desc()[1] - 0.3).abs() < 1e-12);
        assert!((rho.spectrum_asc()[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn from_spectrum_rejects_bad_input() {
        let eye = UnitaryMatrix::identity(2);
        assert!(DensityMatrix::from_spectrum(&[-0.1, 1.1], &eye).is_err());
        assert!(DensityMatrix::from_spectrum(&[0.7, 0.7], &eye).is_err());
        assert!(DensityMatrix::from_spectrum(&[0.5, 0.5, 0.0], &eye).is_err());
    }

    #[test]
    fn random_density_rank_and_determinism() {
        let rho = random_density(4, 4, 31).unwrap();
        assert!(rho.is_full_rank());
        assert!(rho.lambda_min() > 0.0);

        let again = random_density(4, 4, 31).unwrap();
        assert_eq!(rho.matrix(), again.matrix());

        let pure = random_density(4, 1, 8).unwrap();
        assert_eq!(pure.rank(), 1);
        let purity: f64 = pure.spectrum_desc().iter().map(|l| l * l).sum();
        assert!((purity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn haar_unitary_is_unitary_and_spectrum_preserving() {
        for trial in 0..20 {
            let u = haar_unitary(4, trial);
            let gram = u.matrix().adjoint() * u.matrix();
            assert!((gram - CMatrix::identity(4, 4)).norm() < 1e-10);
        }
        let rho = random_density(4, 3, 12).unwrap();
        let u = haar_unitary(4, 9);
        let rotated = rho.conjugated(&u).unwrap();
        let recomputed = DensityMatrix::from_matrix(rotated.hermitian().clone()).unwrap();
        for (a, b) in rho.spectrum_desc().iter().zip(recomputed.spectrum_desc()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn haar_unitary_dim_one() {
        let u = haar_unitary(1, 3);
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_first_moment() {
        // E|U_00|^2 = 1/d for Haar measure
        let d = 4;
        let trials = 10_000;
        let mut acc = 0.0;
        for t in 0..trials {
            let u = haar_unitary_from(d, &mut substream(2024, t));
            acc += u.matrix()[(0, 0)].norm_sqr();
        }
        let mean = acc / trials as f64;
        assert!((mean - 0.25).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn subspace_state_spectra() {
        let p = SubspaceProjector::coordinate(4, &[0, 1, 2, 3]).unwrap();
        let s = subspace_state(&p);
        assert!((s.lambda_max() - 0.25).abs() < 1e-12);

        let p1 = SubspaceProjector::coordinate(3, &[1]).unwrap();
        let s1 = subspace_state(&p1);
        assert_eq!(s1.rank(), 1);

        let p2 = SubspaceProjector::random(4, 2, &mut substream(5, 0)).unwrap();
        let s2 = subspace_state(&p2);
        assert!((s2.spectrum_desc()[0] - 0.5).abs() < 1e-10);
        assert!((s2.spectrum_desc()[1] - 0.5).abs() < 1e-10);
        assert!(s2.spectrum_desc()[2].abs() < 1e-10);
    }

    #[test]
    fn projector_validation() {
        let not_projector = HermitianMatrix::from_real_diagonal(&[0.5, 0.0]);
        assert!(SubspaceProjector::new(not_projector).is_err());
        let zero = HermitianMatrix::from_real_diagonal(&[0.0, 0.0]);
        assert!(SubspaceProjector::new(zero).is_err());
    }

    #[test]
    fn substream_trials_are_independent_and_reproducible() {
        let mut a = substream(1, 0);
        let mut b = substream(1, 1);
        let xa: f64 = a.gen();
        let xb: f64 = b.gen();
        assert_ne!(xa, xb);
        let mut a2 = substream(1, 0);
        let xa2: f64 = a2.gen();
        assert_eq!(xa, xa2);
    }
}
