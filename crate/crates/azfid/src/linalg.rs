//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream reduces to the eigendecomposition implemented here:
//! fractional matrix powers on the support, matrix exponentials of skew-Hermitian
//! generators, principal unitary logarithms, and trace powers. Dimensions are
//! small (d <= 64), so every matrix function goes through an explicit
//! eigendecomposition rather than iterative schemes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance for Hermitian / skew-Hermitian symmetry checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in [-EIG_CLAMP, EIG_CLAMP] are treated as exact zeros (kernel);
/// anything below -EIG_CLAMP rejects the matrix as not PSD.
pub const EIG_CLAMP: f64 = 1e-10;
/// Entrywise tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Eigenvalues of a unitary's Hermitian part closer than this are diagonalized
/// jointly with the anti-Hermitian part, so conjugate eigenphase pairs
/// (cos t equal, sin t opposite) are resolved stably.
const PHASE_CLUSTER_TOL: f64 = 1e-6;

/// Largest modulus of `m - m†`, entrywise.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    m.iter()
        .zip(adj.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Largest modulus of `m + m†`, entrywise.
pub fn skew_deviation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    m.iter()
        .zip(adj.iter())
        .map(|(a, b)| (a + b).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of the commutator [a, b].
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// A validated d x d complex Hermitian matrix.
///
/// Construction symmetrizes the entries, so `matrix()` satisfies
/// `m[i][j] == conj(m[j][i])` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry within [`HERMITIAN_TOL`] and symmetrizes.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Validation(format!(
                "expected square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let deviation = hermitian_deviation(&mat);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(Self::symmetrize(mat))
    }

    /// `(m + m†) / 2` without a symmetry check. Idempotent bit-for-bit.
    pub(crate) fn symmetrize(mat: CMatrix) -> Self {
        let sym = (&mat + mat.adjoint()).scale(0.5);
        Self { mat: sym }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self {
            mat: CMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    Complex64::new(diag[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|c| c.re).sum()
    }
}

/// A validated element of the unitary group U(d).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    mat: CMatrix,
}

impl UnitaryMatrix {
    /// Validates `U†U = I` within [`UNITARY_TOL`], entrywise.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Validation(format!(
                "expected square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let d = mat.nrows();
        let gram = mat.adjoint() * &mat;
        let eye = CMatrix::identity(d, d);
        let deviation = gram
            .iter()
            .zip(eye.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARY_TOL,
            });
        }
        Ok(Self { mat })
    }

    /// For products of already-validated unitaries.
    pub(crate) fn from_matrix_unchecked(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        Self {
            mat: &self.mat * &rhs.mat,
        }
    }

    /// `U m U†`.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        &self.mat * m * self.mat.adjoint()
    }
}

/// Spectral decomposition of a Hermitian matrix: descending real eigenvalues
/// and the matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl EigenSystem {
    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns orthonormal, ordered like `eigenvalues`, phase-normalized so the
    /// first component of significant modulus is real non-negative.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(λ)) V†` as a complex matrix.
    pub fn map_to_matrix(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.map_to_matrix_complex(|l| Complex64::new(f(l), 0.0))
    }

    pub fn map_to_matrix_complex(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let d = self.eigenvalues.len();
        let diag = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                f(self.eigenvalues[i])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.eigenvectors * diag * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_to_matrix(|l| l)
    }
}

fn phase_normalize_column(vecs: &mut CMatrix, col: usize) {
    let d = vecs.nrows();
    for i in 0..d {
        let c = vecs[(i, col)];
        if c.norm() > 1e-12 {
            let phase = c.conj() / c.norm();
            for r in 0..d {
                vecs[(r, col)] *= phase;
            }
            return;
        }
    }
}

fn lex_cmp_columns(vecs: &CMatrix, a: usize, b: usize) -> std::cmp::Ordering {
    let d = vecs.nrows();
    for i in 0..d {
        let (x, y) = (vecs[(i, a)], vecs[(i, b)]);
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Eigendecomposition with descending eigenvalues and deterministic ordering:
/// exact eigenvalue ties are broken by the lexicographic order of the
/// phase-normalized eigenvector columns.
pub fn eig_hermitian(h: &HermitianMatrix) -> EigenSystem {
    let d = h.dim();
    let se = h.matrix().clone().symmetric_eigen();
    let mut vecs = se.eigenvectors;
    for j in 0..d {
        phase_normalize_column(&mut vecs, j);
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .total_cmp(&se.eigenvalues[a])
            .then_with(|| lex_cmp_columns(&vecs, a, b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(d, d, |i, j| vecs[(i, order[j])]);
    EigenSystem {
        eigenvalues,
        eigenvectors,
    }
}

/// Support-restricted power map: eigenvalues within [`EIG_CLAMP`] of zero map
/// to zero for every exponent (including negative ones).
pub(crate) fn clamped_power(lambda: f64, p: f64) -> f64 {
    if lambda <= EIG_CLAMP {
        0.0
    } else {
        lambda.powf(p)
    }
}

fn require_psd(eig: &EigenSystem) -> Result<()> {
    let min = eig.min_eigenvalue();
    if min < -EIG_CLAMP {
        return Err(Error::NotPositiveSemiDefinite {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// `A^p` for PSD `A`, with the kernel convention `0^p := 0` for all real `p`
/// (negative exponents act as the pseudo-inverse power on the support).
pub fn frac_power(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(a);
    require_psd(&eig)?;
    Ok(HermitianMatrix::symmetrize(
        eig.map_to_matrix(|l| clamped_power(l, p)),
    ))
}

/// `Tr[A^z]` for PSD `A` and `z > 0`, with `0^z := 0`.
pub fn trace_power(a: &HermitianMatrix, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::parameter("z", format!("must be > 0, got {z}")));
    }
    let eig = eig_hermitian(a);
    require_psd(&eig)?;
    Ok(trace_power_of_spectrum(eig.eigenvalues(), z))
}

pub(crate) fn trace_power_of_spectrum(eigenvalues: &[f64], z: f64) -> f64 {
    eigenvalues.iter().map(|&l| clamped_power(l, z)).sum()
}

/// `exp(H)` for Hermitian `H`.
pub fn exp_hermitian(h: &HermitianMatrix) -> HermitianMatrix {
    let eig = eig_hermitian(h);
    HermitianMatrix::symmetrize(eig.map_to_matrix(f64::exp))
}

/// `exp(L)` for skew-Hermitian `L`, computed by eigendecomposing the Hermitian
/// matrix `iL`.
pub fn exp_skew(l: &CMatrix) -> Result<UnitaryMatrix> {
    if !l.is_square() {
        return Err(Error::Validation(format!(
            "expected square matrix, got {}x{}",
            l.nrows(),
            l.ncols()
        )));
    }
    let deviation = skew_deviation(l);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotSkewHermitian {
            deviation,
            tolerance: HERMITIAN_TOL,
        });
    }
    let h = HermitianMatrix::symmetrize(l * Complex64::new(0.0, 1.0));
    let eig = eig_hermitian(&h);
    // L = -iH, so exp(L) has eigenvalue exp(-i h_j) on H's eigenvectors.
    let u = eig.map_to_matrix_complex(|l| Complex64::from_polar(1.0, -l));
    UnitaryMatrix::new(u)
}

/// Principal logarithm of a unitary: skew-Hermitian `L` with eigenphases in
/// `(-pi, pi]` and `exp_skew(L) = U`.
///
/// A unitary is normal, so it is diagonalized by jointly diagonalizing its
/// commuting Hermitian and anti-Hermitian parts; eigenphases that land within
/// 1e-12 of the branch cut at `-pi` are fixed to `+pi`.
pub fn unitary_log(u: &UnitaryMatrix) -> CMatrix {
    let d = u.dim();
    let um = u.matrix();
    let herm = HermitianMatrix::symmetrize((um + um.adjoint()).scale(0.5));
    let skew_part = (um - um.adjoint()) * Complex64::new(0.0, -0.5);
    let kerm = HermitianMatrix::symmetrize(skew_part);

    let eh = eig_hermitian(&herm);
    let hvals = eh.eigenvalues();
    let mut basis = eh.eigenvectors().clone();

    // Refine each cluster of the Hermitian part against the anti-Hermitian part.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && hvals[end - 1] - hvals[end] < PHASE_CLUSTER_TOL {
            end += 1;
        }
        let width = end - start;
        if width > 1 {
            let w = basis.columns(start, width).into_owned();
            let compression = HermitianMatrix::symmetrize(w.adjoint() * kerm.matrix() * &w);
            let ek = eig_hermitian(&compression);
            let refined = &w * ek.eigenvectors();
            for (t, col) in refined.column_iter().enumerate() {
                basis.set_column(start + t, &col);
            }
        }
        start = end;
    }

    let mut phases = vec![0.0; d];
    for j in 0..d {
        let v = basis.column(j);
        let rayleigh = (v.adjoint() * um * v)[(0, 0)];
        let mut theta = rayleigh.arg();
        if theta <= -std::f64::consts::PI + 1e-12 {
            theta = std::f64::consts::PI;
        }
        phases[j] = theta;
    }

    let diag = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(0.0, phases[i])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let log = &basis * diag * basis.adjoint();
    // exact skew-symmetrization
    (&log - log.adjoint()).scale(0.5)
}
