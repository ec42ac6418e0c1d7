//! Phase-space algebra for multimode Gaussian states.
//!
//! Covariances follow `V_ij = ½⟨{x_i − ⟨x_i⟩, x_j − ⟨x_j⟩}⟩` with `q = a + a†`,
//! so the vacuum has `V = I` and physical states satisfy `V + iΩ ⪰ 0`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Largest tolerated `|V − Vᵀ|` entry.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Floor for the smallest eigenvalue of a Hermitian matrix that must be PSD.
pub const PSD_FLOOR: f64 = -1e-9;
/// Relative singular-value cutoff for pseudo-inverses.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Block-diagonal symplectic form `Ω = [[0, 1], [−1, 0]]^{⊕n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

pub fn symplectic_form(n_modes: usize) -> Result<SymplecticForm> {
    if n_modes == 0 {
        return Err(invalid("n_modes", "must be at least 1"));
    }
    Ok(SymplecticForm {
        n_modes,
        matrix: omega(n_modes),
    })
}

pub(crate) fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// Mean vector and covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state after checking shape, symmetry and `V + iΩ ⪰ 0`.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = cov.nrows();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(invalid("cov", format!("dimension {dim} is not a positive even number")));
        }
        if cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: cov.ncols(),
            });
        }
        if mean.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mean.len(),
            });
        }
        let asym = asymmetry(&cov);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let margin = physicality_margin(&cov);
        if margin < PSD_FLOOR {
            return Err(Error::NotPhysical(margin));
        }
        Ok(Self { mean, cov })
    }

    /// Zero-mean state with the given covariance.
    pub fn from_cov(cov: DMatrix<f64>) -> Result<Self> {
        let mean = DVector::zeros(cov.nrows());
        Self::new(mean, cov)
    }

    /// Skips validation; the covariance is symmetrized.
    pub(crate) fn new_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self {
            mean,
            cov: symmetrize(&cov),
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Single-mode thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(invalid("nbar", "must be non-negative"));
        }
        Ok(Self {
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (2.0 * nbar + 1.0),
        })
    }

    /// Two-mode squeezed vacuum `[[cosh2r I, sinh2r Z], [sinh2r Z, cosh2r I]]`.
    pub fn tmsv(r: f64) -> Self {
        Self {
            mean: DVector::zeros(4),
            cov: tmsv_cov(r),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn into_parts(self) -> (DVector<f64>, DMatrix<f64>) {
        (self.mean, self.cov)
    }

    /// Smallest eigenvalue of `V + iΩ`.
    pub fn physicality_margin(&self) -> f64 {
        physicality_margin(&self.cov)
    }

    pub fn is_physical(&self) -> bool {
        asymmetry(&self.cov) <= SYMMETRY_TOL && self.physicality_margin() >= PSD_FLOOR
    }
}

pub(crate) fn tmsv_cov(r: f64) -> DMatrix<f64> {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    )
}

/// Gaussian channel `x̄ → T x̄ + d`, `V → T V Tᵀ + N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannelSpec {
    pub t: DMatrix<f64>,
    pub n: DMatrix<f64>,
    pub d: DVector<f64>,
}

impl GaussianChannelSpec {
    /// Channel with zero displacement.
    pub fn new(t: DMatrix<f64>, n: DMatrix<f64>) -> Result<Self> {
        let dim = t.nrows();
        if t.ncols() != dim || n.nrows() != dim || n.ncols() != dim || !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: n.nrows(),
            });
        }
        Ok(Self {
            d: DVector::zeros(dim),
            t,
            n,
        })
    }

    pub fn with_displacement(mut self, d: DVector<f64>) -> Result<Self> {
        if d.len() != self.t.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.t.nrows(),
                got: d.len(),
            });
        }
        self.d = d;
        Ok(self)
    }

    pub fn identity(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        Self {
            t: DMatrix::identity(dim, dim),
            n: DMatrix::zeros(dim, dim),
            d: DVector::zeros(dim),
        }
    }

    /// Single-mode channel with `T = t·I₂`, `N = n·I₂`.
    pub fn isotropic(t: f64, n: f64) -> Self {
        Self {
            t: DMatrix::identity(2, 2) * t,
            n: DMatrix::identity(2, 2) * n,
            d: DVector::zeros(2),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.t.nrows() / 2
    }
}

pub fn apply_channel(state: &GaussianState, ch: &GaussianChannelSpec) -> Result<GaussianState> {
    let dim = state.cov.nrows();
    if ch.t.nrows() != dim || ch.t.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: ch.t.nrows(),
        });
    }
    let mean = &ch.t * &state.mean + &ch.d;
    let cov = &ch.t * &state.cov * ch.t.transpose() + &ch.n;
    Ok(GaussianState::new_unchecked(mean, cov))
}

/// Complete-positivity test `N + iΩ − iTΩTᵀ ⪰ 0`.
pub fn validate_channel(ch: &GaussianChannelSpec) -> bool {
    let dim = ch.t.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || ch.t.ncols() != dim || ch.n.shape() != (dim, dim) {
        return false;
    }
    if asymmetry(&ch.n) > SYMMETRY_TOL {
        return false;
    }
    let om = omega(dim / 2);
    let imag = &om - &ch.t * &om * ch.t.transpose();
    min_hermitian_eigenvalue(&ch.n, &imag) >= PSD_FLOOR
}

/// Product state with modes of `a` first, then `b`.
pub fn tensor(a: &GaussianState, b: &GaussianState) -> GaussianState {
    let mut mean = DVector::zeros(a.mean.len() + b.mean.len());
    mean.rows_mut(0, a.mean.len()).copy_from(&a.mean);
    mean.rows_mut(a.mean.len(), b.mean.len()).copy_from(&b.mean);
    GaussianState {
        mean,
        cov: direct_sum(&a.cov, &b.cov),
    }
}

/// Reduced state on the listed modes, in the listed order.
pub fn extract_modes(state: &GaussianState, indices: &[usize]) -> Result<GaussianState> {
    check_modes(indices, state.n_modes())?;
    let rows = quadrature_indices(indices);
    let mean = DVector::from_iterator(rows.len(), rows.iter().map(|&i| state.mean[i]));
    let cov = state.cov.select_rows(&rows).select_columns(&rows);
    Ok(GaussianState { mean, cov })
}

/// Outcome of a general-dyne measurement.
#[derive(Debug, Clone)]
pub struct DyneOutcome {
    /// Conditional state of the unmeasured modes (original order).
    pub state: GaussianState,
    /// Density of the observed outcome, normalized over `ℝ^{2m}`.
    pub density: f64,
}

/// Conditions the unmeasured modes on a general-dyne outcome.
///
/// The POVM seed has covariance `v_meas`, checked for physicality with a
/// floor that scales with its largest entry; the outcome `r` lives in the
/// phase space of the measured modes. The conditional covariance
/// `Γ_A − Γ_AB (Γ_B + V)⁻¹ Γ_ABᵀ` does not depend on `r`.
pub fn general_dyne_condition(
    state: &GaussianState,
    measured: &[usize],
    v_meas: &DMatrix<f64>,
    outcome: &DVector<f64>,
) -> Result<DyneOutcome> {
    let n = state.n_modes();
    check_modes(measured, n)?;
    if measured.len() >= n {
        return Err(invalid("measured", "at least one mode must remain unmeasured"));
    }
    let m = measured.len();
    if v_meas.shape() != (2 * m, 2 * m) {
        return Err(Error::DimensionMismatch {
            expected: 2 * m,
            got: v_meas.nrows(),
        });
    }
    if outcome.len() != 2 * m {
        return Err(Error::DimensionMismatch {
            expected: 2 * m,
            got: outcome.len(),
        });
    }
    let asym = asymmetry(v_meas);
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let margin = physicality_margin(v_meas);
    if margin < PSD_FLOOR * v_meas.amax().max(1.0) {
        return Err(Error::NotPhysical(margin));
    }

    let kept: Vec<usize> = (0..n).filter(|k| !measured.contains(k)).collect();
    let ka = quadrature_indices(&kept);
    let kb = quadrature_indices(measured);
    let gamma_a = state.cov.select_rows(&ka).select_columns(&ka);
    let gamma_b = state.cov.select_rows(&kb).select_columns(&kb);
    let gamma_ab = state.cov.select_rows(&ka).select_columns(&kb);
    let mean_a = DVector::from_iterator(ka.len(), ka.iter().map(|&i| state.mean[i]));
    let mean_b = DVector::from_iterator(kb.len(), kb.iter().map(|&i| state.mean[i]));

    let sigma = &gamma_b + v_meas;
    let inv = RobustInverse::new(&sigma);
    let gain = &gamma_ab * &inv.inverse;
    let cov = &gamma_a - &gain * gamma_ab.transpose();
    let shift = outcome - &mean_b;
    let mean = &mean_a + &gain * &shift;

    let quad = shift.dot(&(&inv.inverse * &shift));
    let norm = (2.0 * PI).powf(inv.rank as f64 / 2.0) * inv.pseudo_det.sqrt();
    let density = (-0.5 * quad).exp() / norm;

    Ok(DyneOutcome {
        state: GaussianState::new_unchecked(mean, cov),
        density,
    })
}

/// Result of an ideal homodyne measurement of commuting quadrature
/// combinations.
#[derive(Debug, Clone)]
pub struct HomodyneRecord {
    /// Conditional state of the kept modes, taken at the expected outcome.
    pub state: GaussianState,
    /// `∂(conditional mean)/∂(outcome)`.
    pub gain: DMatrix<f64>,
    /// Covariance of the measured quadrature combinations.
    pub outcome_cov: DMatrix<f64>,
}

/// Ideal homodyne measurement of `Dᵀx` where `directions = D` is `2n × k`.
///
/// The measured combinations must commute (`DᵀΩD = 0`) and have no
/// support on the kept modes. Singular `DᵀVD` is pseudo-inverted.
pub fn homodyne_condition(
    state: &GaussianState,
    directions: &DMatrix<f64>,
    kept: &[usize],
) -> Result<HomodyneRecord> {
    let n = state.n_modes();
    check_modes(kept, n)?;
    if directions.nrows() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: directions.nrows(),
        });
    }
    let comm = directions.transpose() * omega(n) * directions;
    if comm.amax() > 1e-12 {
        return Err(invalid("directions", "measured quadratures do not commute"));
    }
    let ka = quadrature_indices(kept);
    for &i in &ka {
        if directions.row(i).amax() > 0.0 {
            return Err(invalid("directions", "measurement touches a kept mode"));
        }
    }
    let gamma_a = state.cov.select_rows(&ka).select_columns(&ka);
    let cross = state.cov.select_rows(&ka) * directions;
    let outcome_cov = symmetrize(&(directions.transpose() * &state.cov * directions));
    let inv = RobustInverse::new(&outcome_cov);
    let gain = &cross * &inv.inverse;
    let cov = &gamma_a - &gain * cross.transpose();
    let mean = DVector::from_iterator(ka.len(), ka.iter().map(|&i| state.mean[i]));
    Ok(HomodyneRecord {
        state: GaussianState::new_unchecked(mean, cov),
        gain,
        outcome_cov,
    })
}

/// `r → ∞` limit of general-dyne conditioning with a TMSV(r) seed on a
/// pair of modes: an ideal measurement of `q_i − q_j` and `p_i + p_j`.
pub fn homodyne_epr_limit(state: &GaussianState, pair: (usize, usize)) -> Result<GaussianState> {
    let n = state.n_modes();
    if n < 3 {
        return Err(invalid("state", "EPR projection needs at least three modes"));
    }
    let (i, j) = pair;
    check_modes(&[i, j], n)?;
    let mut dirs = DMatrix::zeros(2 * n, 2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    dirs[(2 * i, 0)] = h;
    dirs[(2 * j, 0)] = -h;
    dirs[(2 * i + 1, 1)] = h;
    dirs[(2 * j + 1, 1)] = h;
    let kept: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
    Ok(homodyne_condition(state, &dirs, &kept)?.state)
}

/// Characteristic function `χ(ξ) = exp(−½ ξᵀ ΩVΩᵀ ξ − i (Ωx̄)ᵀ ξ)`.
pub fn characteristic_at(state: &GaussianState, xi: &DVector<f64>) -> Result<Complex64> {
    let dim = state.cov.nrows();
    if xi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: xi.len(),
        });
    }
    let om = omega(dim / 2);
    let quad = xi.dot(&(&om * &state.cov * om.transpose() * xi));
    let lin = (&om * &state.mean).dot(xi);
    Ok(Complex64::new(-0.5 * quad, -lin).exp())
}

/// Wigner function `exp(−½ (x−x̄)ᵀV⁻¹(x−x̄)) / ((2π)ⁿ √det V)`.
pub fn wigner_at(state: &GaussianState, x: &DVector<f64>) -> Result<f64> {
    let dim = state.cov.nrows();
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    let chol = state
        .cov
        .clone()
        .cholesky()
        .ok_or(Error::Singular("Wigner function needs a positive-definite covariance"))?;
    let dx = x - &state.mean;
    let quad = dx.dot(&chol.solve(&dx));
    let det = chol.determinant();
    let n = (dim / 2) as f64;
    Ok((-0.5 * quad).exp() / ((2.0 * PI).powf(n) * det.sqrt()))
}

/// Symplectic spectrum of a positive-definite covariance, ascending.
///
/// Computed from the singular values of `V^{1/2} Ω V^{1/2}`, which come in
/// equal pairs; each pair is averaged. Physicality is not required, so the
/// partially transposed covariance of an entangled state is accepted.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || cov.ncols() != dim {
        return Err(invalid("cov", "must be a square matrix of even size"));
    }
    let asym = asymmetry(cov);
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = SymmetricEigen::new(symmetrize(cov));
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::Singular("covariance is not positive definite"));
    }
    let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let k = &root * omega(dim / 2) * &root;
    let sq = SymmetricEigen::new(symmetrize(&(k.transpose() * &k)));
    let mut vals: Vec<f64> = sq.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Smallest eigenvalue of the Hermitian matrix `V + iΩ`.
pub fn physicality_margin(cov: &DMatrix<f64>) -> f64 {
    let n = cov.nrows() / 2;
    min_hermitian_eigenvalue(&symmetrize(cov), &omega(n))
}

/// Smallest eigenvalue of `A + iB` (A symmetric, B antisymmetric) via the
/// real embedding `[[A, −B], [B, A]]`, whose spectrum doubles that of `A + iB`.
pub(crate) fn min_hermitian_eigenvalue(re: &DMatrix<f64>, im: &DMatrix<f64>) -> f64 {
    let d = re.nrows();
    let mut big = DMatrix::zeros(2 * d, 2 * d);
    big.view_mut((0, 0), (d, d)).copy_from(re);
    big.view_mut((d, d), (d, d)).copy_from(re);
    big.view_mut((0, d), (d, d)).copy_from(&(-im));
    big.view_mut((d, 0), (d, d)).copy_from(im);
    SymmetricEigen::new(symmetrize(&big)).eigenvalues.min()
}

pub fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = DMatrix::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// Lifts a two-mode symplectic `s` (4×4) to act on modes `i`, `j` of `n`.
pub fn embed_two_mode(n_modes: usize, i: usize, j: usize, s: &DMatrix<f64>) -> DMatrix<f64> {
    let mut full = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
    for (a, &ra) in idx.iter().enumerate() {
        for (b, &cb) in idx.iter().enumerate() {
            full[(ra, cb)] = s[(a, b)];
        }
    }
    full
}

/// Lifts a single-mode symplectic `s` (2×2) to act on mode `i` of `n`.
pub fn embed_single_mode(n_modes: usize, i: usize, s: &DMatrix<f64>) -> DMatrix<f64> {
    let mut full = DMatrix::identity(2 * n_modes, 2 * n_modes);
    full.view_mut((2 * i, 2 * i), (2, 2)).copy_from(s);
    full
}

/// Beam splitter with transmissivity `cos²θ`, acting identically on q and p.
pub fn beam_splitter(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, s, //
            -s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    )
}

pub fn two_mode_squeezer(r: f64) -> DMatrix<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    )
}

pub fn single_mode_squeezer(r: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![(-r).exp(), r.exp()]))
}

pub fn rotation(phi: f64) -> DMatrix<f64> {
    let (s, c) = phi.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

pub(crate) fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

fn check_modes(indices: &[usize], n_modes: usize) -> Result<()> {
    for (k, &i) in indices.iter().enumerate() {
        if i >= n_modes {
            return Err(Error::ModeOutOfRange { index: i, n_modes });
        }
        if indices[..k].contains(&i) {
            return Err(Error::DuplicateMode(i));
        }
    }
    Ok(())
}

pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - m.transpose()).amax()
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Pseudo-inverse of a symmetric PSD matrix.
///
/// Eigenvalues at or below `PINV_CUTOFF` times the largest are discarded.
pub(crate) struct RobustInverse {
    pub inverse: DMatrix<f64>,
    pub rank: usize,
    /// Product of retained eigenvalues.
    pub pseudo_det: f64,
}

impl RobustInverse {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let dim = m.nrows();
        let eig = symmetrize(m).symmetric_eigen();
        let lmax = eig.eigenvalues.amax();
        let cutoff = PINV_CUTOFF * lmax;
        let mut inv = DMatrix::zeros(dim, dim);
        let mut rank = 0;
        let mut det = 1.0;
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            if l > cutoff {
                rank += 1;
                det *= l;
                let col = eig.eigenvectors.column(k);
                inv += col * col.transpose() / l;
            }
        }
        Self {
            inverse: inv,
            rank,
            pseudo_det: det,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(v))
    }

    #[test]
    fn omega_single_mode() {
        let om = symplectic_form(1).unwrap();
        assert_eq!(om.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert!(symplectic_form(0).is_err());
    }

    #[test]
    fn omega_is_direct_sum_and_orthogonal() {
        let o1 = omega(1);
        assert_eq!(omega(2), direct_sum(&o1, &o1));
        for n in 1..5 {
            let o = omega(n);
            assert_eq!(&o * o.transpose(), DMatrix::identity(2 * n, 2 * n));
            assert_eq!(&o * &o, -DMatrix::identity(2 * n, 2 * n));
        }
    }

    #[test]
    fn channel_examples() {
        let vac = GaussianState::vacuum(1);
        let out = apply_channel(&vac, &GaussianChannelSpec::identity(1)).unwrap();
        assert_eq!(out.cov(), vac.cov());

        let h = 0.5f64.sqrt();
        let loss = GaussianChannelSpec::isotropic(h, 0.5);
        let out = apply_channel(&vac, &loss).unwrap();
        assert_relative_eq!(out.cov().clone(), DMatrix::identity(2, 2), epsilon = 1e-15);

        let hot = GaussianState::from_cov(DMatrix::identity(2, 2) * 3.0).unwrap();
        let thermal_loss = GaussianChannelSpec::isotropic(h, 0.5 * 3.0);
        let out = apply_channel(&hot, &thermal_loss).unwrap();
        assert_relative_eq!(out.cov().clone(), DMatrix::identity(2, 2) * 3.0, epsilon = 1e-14);

        let two = GaussianState::vacuum(2);
        assert!(matches!(
            apply_channel(&two, &loss),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complete_positivity_examples() {
        assert!(validate_channel(&GaussianChannelSpec::identity(1)));
        let h = 0.5f64.sqrt();
        assert!(!validate_channel(&GaussianChannelSpec::isotropic(h, 0.0)));
        assert!(validate_channel(&GaussianChannelSpec::isotropic(h, 0.5)));
        // Quantum-limited amplifier with gain 2 needs N = I.
        assert!(validate_channel(&GaussianChannelSpec::isotropic(2f64.sqrt(), 1.0)));
        assert!(!validate_channel(&GaussianChannelSpec::isotropic(2f64.sqrt(), 0.99)));
    }

    #[test]
    fn tensor_and_extract() {
        let a = GaussianState::from_cov(DMatrix::identity(2, 2) * 2.0).unwrap();
        let b = GaussianState::from_cov(DMatrix::identity(2, 2) * 5.0).unwrap();
        let ab = tensor(&a, &b);
        assert_eq!(ab.cov(), &diag(&[2.0, 2.0, 5.0, 5.0]));
        assert_eq!(extract_modes(&ab, &[0]).unwrap(), a);
        assert_eq!(extract_modes(&ab, &[0, 1]).unwrap(), ab);
        assert_eq!(extract_modes(&ab, &[1, 0]).unwrap(), tensor(&b, &a));
        assert!(matches!(
            extract_modes(&ab, &[2]),
            Err(Error::ModeOutOfRange { index: 2, .. })
        ));
        assert!(matches!(extract_modes(&ab, &[1, 1]), Err(Error::DuplicateMode(1))));

        let vt = tensor(&GaussianState::vacuum(1), &GaussianState::thermal(1.0).unwrap());
        assert_eq!(extract_modes(&vt, &[0]).unwrap(), GaussianState::vacuum(1));
    }

    #[test]
    fn tmsv_marginal_is_thermal() {
        let r = 0.7;
        let s = GaussianState::tmsv(r);
        let m = extract_modes(&s, &[1]).unwrap();
        assert_relative_eq!(
            m.cov().clone(),
            DMatrix::identity(2, 2) * (2.0 * r).cosh(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            GaussianState::from_cov(DMatrix::identity(2, 2) * 0.5),
            Err(Error::NotPhysical(_))
        ));
        let mut asym = DMatrix::identity(2, 2);
        asym[(0, 1)] = 0.1;
        assert!(matches!(GaussianState::from_cov(asym), Err(Error::NotSymmetric(_))));
        assert!(GaussianState::from_cov(DMatrix::identity(3, 3)).is_err());
        assert!(GaussianState::tmsv(1.3).is_physical());
    }

    #[test]
    fn heterodyne_on_tmsv() {
        let r = 0.6;
        let state = GaussianState::tmsv(r);
        let out = general_dyne_condition(
            &state,
            &[1],
            &DMatrix::identity(2, 2),
            &DVector::zeros(2),
        )
        .unwrap();
        let c = (2.0 * r).cosh();
        let s = (2.0 * r).sinh();
        let expected = c - s * s / (c + 1.0);
        assert_relative_eq!(out.state.cov().clone(), DMatrix::identity(2, 2) * expected, epsilon = 1e-12);
        assert_eq!(out.state.mean(), &DVector::zeros(2));
    }

    #[test]
    fn dyne_rejects_unphysical_seed() {
        let state = GaussianState::tmsv(0.3);
        let err = general_dyne_condition(
            &state,
            &[1],
            &(DMatrix::identity(2, 2) * 0.2),
            &DVector::zeros(2),
        );
        assert!(matches!(err, Err(Error::NotPhysical(_))));
    }

    #[test]
    fn epr_limit_closed_form() {
        let (u, v, w) = (17.0, 9.0, 12.0);
        let mut oe = DMatrix::zeros(4, 4);
        oe.view_mut((0, 0), (2, 2)).copy_from(&(DMatrix::identity(2, 2) * u));
        oe.view_mut((2, 2), (2, 2)).copy_from(&(DMatrix::identity(2, 2) * v));
        let wz = diag(&[w, -w]);
        oe.view_mut((0, 2), (2, 2)).copy_from(&wz);
        oe.view_mut((2, 0), (2, 2)).copy_from(&wz);
        let one = GaussianState::from_cov(oe).unwrap();
        let both = tensor(&one, &one);
        // modes: o1, e1, o2, e2
        let mm = homodyne_epr_limit(&both, (0, 2)).unwrap();
        let d = v - w * w / (2.0 * u);
        let x = w * w / (2.0 * u);
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                d, 0.0, x, 0.0, //
                0.0, d, 0.0, -x, //
                x, 0.0, d, 0.0, //
                0.0, -x, 0.0, d,
            ],
        );
        assert_relative_eq!(mm.cov().clone(), expected, epsilon = 1e-12);
        assert_relative_eq!(d, 4.764705882352941, epsilon = 1e-12);
    }

    #[test]
    fn epr_limit_on_product_input() {
        let a = GaussianState::thermal(0.5).unwrap();
        let b = GaussianState::thermal(2.0).unwrap();
        let prod = tensor(&tensor(&a, &b), &tensor(&a, &b));
        let mm = homodyne_epr_limit(&prod, (0, 2)).unwrap();
        assert_relative_eq!(mm.cov().view((0, 2), (2, 2)).into_owned(), DMatrix::zeros(2, 2), epsilon = 1e-14);
        assert!(homodyne_epr_limit(&GaussianState::vacuum(2), (0, 1)).is_err());
    }

    #[test]
    fn wigner_and_characteristic_basics() {
        let vac = GaussianState::vacuum(1);
        let chi = characteristic_at(&vac, &DVector::zeros(2)).unwrap();
        assert_eq!(chi, Complex64::new(1.0, 0.0));
        let w = wigner_at(&vac, &DVector::zeros(2)).unwrap();
        assert_relative_eq!(w, 1.0 / (2.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn wigner_normalization_on_grid() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.6, 0.6, 1.5]);
        let state = GaussianState::new(DVector::from_vec(vec![0.3, -0.2]), cov.clone()).unwrap();
        let sx = cov[(0, 0)].sqrt();
        let sp = cov[(1, 1)].sqrt();
        let steps = 240;
        let (hx, hp) = (12.0 * sx / steps as f64, 12.0 * sp / steps as f64);
        let mut total = 0.0;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = DVector::from_vec(vec![
                    0.3 - 6.0 * sx + i as f64 * hx,
                    -0.2 - 6.0 * sp + j as f64 * hp,
                ]);
                total += wigner_at(&state, &x).unwrap() * hx * hp;
            }
        }
        assert!((total - 1.0).abs() < 1e-3, "integral {total}");
    }

    #[test]
    fn wigner_rejects_singular() {
        let state = GaussianState::new_unchecked(DVector::zeros(2), diag(&[1.0, 0.0]));
        assert!(matches!(
            wigner_at(&state, &DVector::zeros(2)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn symplectic_spectra() {
        let v = symplectic_eigenvalues(&DMatrix::identity(4, 4)).unwrap();
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(v[1], 1.0, epsilon = 1e-12);
        let t = symplectic_eigenvalues(GaussianState::thermal(1.0).unwrap().cov()).unwrap();
        assert_relative_eq!(t[0], 3.0, epsilon = 1e-12);
        let s = symplectic_eigenvalues(&tmsv_cov(0.9)).unwrap();
        assert_relative_eq!(s[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(s[1], 1.0, epsilon = 1e-9);
        let mut bad = DMatrix::identity(2, 2);
        bad[(1, 0)] = 0.5;
        assert!(symplectic_eigenvalues(&bad).is_err());
    }

    #[test]
    fn robust_inverse_falls_back_on_rank_deficiency() {
        let m = diag(&[2.0, 1e-20]);
        let inv = RobustInverse::new(&m);
        assert_eq!(inv.rank, 1);
        assert_relative_eq!(inv.inverse[(0, 0)], 0.5, epsilon = 1e-15);
        assert_eq!(inv.inverse[(1, 1)], 0.0);
    }
}
