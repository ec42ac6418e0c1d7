//! Frequency-domain model of a piezo-optomechanical transducer.
//!
//! Mode order inside the device is (optical, microwave, mechanical) for the
//! red-detuned pump and (optical†, mechanical, microwave) for the blue
//! one, matching the input-output port order used by each scattering
//! matrix:
//!
//! | pump | port 0 | port 1 | port 2 | port 3 | port 4 |
//! |------|--------|--------|--------|--------|--------|
//! | red  | a_c    | a_i    | c_c    | c_i    | b      |
//! | blue | a_c†   | a_i†   | b      | c_c    | c_i    |
//!
//! Both pumps are taken on resonance (ω_m = ω_e = |Δ_o|), so the frequency
//! argument `omega` is the detuning from the shared resonance. All rates
//! are angular and unit-agnostic.

use nalgebra::{DMatrix, Matrix3, SMatrix};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::gaussian::{physicality_margin, GaussianChannelSpec, PSD_FLOOR};

type C = Complex64;
pub type Matrix5c = SMatrix<C, 5, 5>;
pub type Matrix10 = SMatrix<f64, 10, 10>;
type Matrix10c = SMatrix<C, 10, 10>;

const I: C = C::new(0.0, 1.0);

/// Sideband on which the optical pump sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detuning {
    /// Beam-splitter coupling: direct conversion.
    Red,
    /// Two-mode-squeezing coupling: entangled-pair source.
    Blue,
}

/// Couplings, linewidths and bath occupation of one device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransducerParams {
    /// Pump-enhanced optomechanical coupling.
    pub g_om: f64,
    /// Piezomechanical coupling.
    pub g_em: f64,
    pub kappa_o_c: f64,
    pub kappa_o_i: f64,
    pub kappa_e_c: f64,
    pub kappa_e_i: f64,
    pub kappa_m: f64,
    /// Thermal occupation shared by the mechanical and microwave baths.
    pub n_th: f64,
    pub detuning: Detuning,
}

impl TransducerParams {
    pub fn kappa_o(&self) -> f64 {
        self.kappa_o_c + self.kappa_o_i
    }

    pub fn kappa_e(&self) -> f64 {
        self.kappa_e_c + self.kappa_e_i
    }

    pub fn zeta_o(&self) -> f64 {
        self.kappa_o_c / self.kappa_o()
    }

    pub fn zeta_e(&self) -> f64 {
        self.kappa_e_c / self.kappa_e()
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g_om", self.g_om),
            ("g_em", self.g_em),
            ("kappa_o_c", self.kappa_o_c),
            ("kappa_o_i", self.kappa_o_i),
            ("kappa_e_c", self.kappa_e_c),
            ("kappa_e_i", self.kappa_e_i),
            ("kappa_m", self.kappa_m),
            ("n_th", self.n_th),
        ];
        for (name, value) in fields {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(invalid(name, format!("must be finite and non-negative, got {value}")));
            }
        }
        if self.kappa_o() <= 0.0 {
            return Err(invalid("kappa_o", "total optical linewidth must be positive"));
        }
        if self.kappa_e() <= 0.0 {
            return Err(invalid("kappa_e", "total microwave linewidth must be positive"));
        }
        if self.kappa_m <= 0.0 {
            return Err(invalid("kappa_m", "must be positive"));
        }
        Ok(())
    }

    fn require(&self, detuning: Detuning) -> Result<()> {
        self.validate()?;
        if self.detuning != detuning {
            return Err(invalid(
                "detuning",
                format!("operation needs a {detuning:?}-detuned pump"),
            ));
        }
        Ok(())
    }
}

/// Device description in terms of cooperativities and extraction ratios.
///
/// This is how the figures are parameterized; [`DeviceSpec::params`]
/// back-solves the couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceSpec {
    pub c_om: f64,
    pub c_em: f64,
    pub zeta_o: f64,
    pub zeta_e: f64,
    pub n_th: f64,
    pub kappa_o: f64,
    pub kappa_e: f64,
    pub kappa_m: f64,
}

impl Default for DeviceSpec {
    fn default() -> Self {
        Self {
            c_om: 1.0,
            c_em: 1.0,
            zeta_o: 1.0,
            zeta_e: 1.0,
            n_th: 0.0,
            kappa_o: 1.0,
            kappa_e: 1.0,
            kappa_m: 1.0,
        }
    }
}

impl DeviceSpec {
    pub fn params(&self, detuning: Detuning) -> Result<TransducerParams> {
        for (name, z) in [("zeta_o", self.zeta_o), ("zeta_e", self.zeta_e)] {
            if !(0.0..=1.0).contains(&z) {
                return Err(invalid(name, format!("extraction ratio {z} outside [0, 1]")));
            }
        }
        for (name, c) in [("c_om", self.c_om), ("c_em", self.c_em)] {
            if !(c >= 0.0) {
                return Err(invalid(name, format!("cooperativity {c} must be non-negative")));
            }
        }
        let p = TransducerParams {
            g_om: 0.5 * (self.c_om * self.kappa_o * self.kappa_m).sqrt(),
            g_em: 0.5 * (self.c_em * self.kappa_e * self.kappa_m).sqrt(),
            kappa_o_c: self.zeta_o * self.kappa_o,
            kappa_o_i: (1.0 - self.zeta_o) * self.kappa_o,
            kappa_e_c: self.zeta_e * self.kappa_e,
            kappa_e_i: (1.0 - self.zeta_e) * self.kappa_e,
            kappa_m: self.kappa_m,
            n_th: self.n_th,
            detuning,
        };
        p.validate()?;
        Ok(p)
    }
}

/// `(C_om, C_em) = (4g_om²/(κ_o κ_m), 4g_em²/(κ_e κ_m))`.
pub fn cooperativities(p: &TransducerParams) -> (f64, f64) {
    (
        4.0 * p.g_om * p.g_om / (p.kappa_o() * p.kappa_m),
        4.0 * p.g_em * p.g_em / (p.kappa_e() * p.kappa_m),
    )
}

fn coupling_rows(p: &TransducerParams, blue: bool) -> SMatrix<C, 3, 5> {
    let r = |x: f64| C::new(x.sqrt(), 0.0);
    let z = C::new(0.0, 0.0);
    if blue {
        SMatrix::<C, 3, 5>::new(
            r(p.kappa_o_c), r(p.kappa_o_i), z, z, z, //
            z, z, r(p.kappa_m), z, z, //
            z, z, z, r(p.kappa_e_c), r(p.kappa_e_i),
        )
    } else {
        SMatrix::<C, 3, 5>::new(
            r(p.kappa_o_c), r(p.kappa_o_i), z, z, z, //
            z, z, r(p.kappa_e_c), r(p.kappa_e_i), z, //
            z, z, z, z, r(p.kappa_m),
        )
    }
}

fn drift_red(p: &TransducerParams) -> Matrix3<C> {
    let re = |x: f64| C::new(x, 0.0);
    let z = C::new(0.0, 0.0);
    Matrix3::new(
        re(-0.5 * p.kappa_o()), z, -I * p.g_om, //
        z, re(-0.5 * p.kappa_e()), -I * p.g_em, //
        -I * p.g_om, -I * p.g_em, re(-0.5 * p.kappa_m),
    )
}

fn drift_blue(p: &TransducerParams) -> Matrix3<C> {
    let re = |x: f64| C::new(x, 0.0);
    let z = C::new(0.0, 0.0);
    Matrix3::new(
        re(-0.5 * p.kappa_o()), -I * p.g_om, z, //
        I * p.g_om, re(-0.5 * p.kappa_m), I * p.g_em, //
        z, I * p.g_em, re(-0.5 * p.kappa_e()),
    )
}

fn scatter(drift: &Matrix3<C>, coupling: &SMatrix<C, 3, 5>, omega: f64) -> Result<Matrix5c> {
    let resolvent = (Matrix3::<C>::identity() * (-I * omega) - drift)
        .try_inverse()
        .ok_or(Error::Singular("(−iω − A) is not invertible"))?;
    Ok(coupling.transpose() * resolvent * coupling - Matrix5c::identity())
}

/// `S(ω) = Bᵀ(−iω − A)⁻¹B − I` for the red-detuned (beam-splitter) device.
pub fn scattering_red(p: &TransducerParams, omega: f64) -> Result<Matrix5c> {
    p.require(Detuning::Red)?;
    scatter(&drift_red(p), &coupling_rows(p, false), omega)
}

/// Conversion efficiency
/// `η(ω) = 4 C_om C_em ζ_o ζ_e / |C_om α + C_em β + αβγ|²`
/// with `α = 1 − 2iω/κ_e`, `β = 1 − 2iω/κ_o`, `γ = 1 − 2iω/κ_m`.
pub fn dqt_efficiency_bandwidth(p: &TransducerParams, omega: f64) -> Result<f64> {
    p.require(Detuning::Red)?;
    let (c_om, c_em) = cooperativities(p);
    let alpha = C::new(1.0, -2.0 * omega / p.kappa_e());
    let beta = C::new(1.0, -2.0 * omega / p.kappa_o());
    let gamma = C::new(1.0, -2.0 * omega / p.kappa_m);
    let denom = alpha * c_om + beta * c_em + alpha * beta * gamma;
    Ok(4.0 * c_om * c_em * p.zeta_o() * p.zeta_e() / denom.norm_sqr())
}

/// Thermal-loss description of direct microwave-to-optical conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct DqtChannel {
    pub eta: f64,
    /// Mean thermal photons of the effective environment.
    pub n_e: f64,
    /// `T = √η I₂`, `N = (1 − η)(2n_e + 1) I₂`.
    pub spec: GaussianChannelSpec,
}

pub fn dqt_channel(p: &TransducerParams, omega: f64) -> Result<DqtChannel> {
    let eta = dqt_efficiency_bandwidth(p, omega)?;
    if eta >= 1.0 {
        return Err(Error::Numerical(format!("conversion efficiency {eta} ≥ 1")));
    }
    let s = scattering_red(p, omega)?;
    let leak = s[(0, 3)].norm_sqr() + s[(0, 4)].norm_sqr();
    let n_e = leak * p.n_th / (1.0 - eta);
    Ok(DqtChannel {
        eta,
        n_e,
        spec: GaussianChannelSpec::isotropic(eta.sqrt(), (1.0 - eta) * (2.0 * n_e + 1.0)),
    })
}

/// Eigenvalue test on the blue drift matrix: every eigenvalue must have
/// real part below `−1e-9`. The red-detuned device is passive and always
/// stable.
pub fn stability_check(p: &TransducerParams) -> bool {
    if p.validate().is_err() {
        return false;
    }
    match p.detuning {
        Detuning::Red => true,
        Detuning::Blue => max_growth_rate(p) < -1e-9,
    }
}

/// Largest real part among the blue drift eigenvalues.
pub fn max_growth_rate(p: &TransducerParams) -> f64 {
    // diag(1, i, 1) conjugation maps the blue drift onto a real matrix.
    let real = Matrix3::new(
        -0.5 * p.kappa_o(), p.g_om, 0.0, //
        p.g_om, -0.5 * p.kappa_m, p.g_em, //
        0.0, -p.g_em, -0.5 * p.kappa_e(),
    );
    real.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn require_stable(p: &TransducerParams) -> Result<()> {
    p.require(Detuning::Blue)?;
    let growth = max_growth_rate(p);
    if growth < -1e-9 {
        Ok(())
    } else {
        Err(Error::Unstable(growth))
    }
}

/// `S̃(ω) = Nᵀ(−iω − M)⁻¹N − I` for the blue-detuned (down-conversion)
/// device, acting on `(a_c†, a_i†, b, c_c, c_i)`.
pub fn scattering_blue(p: &TransducerParams, omega: f64) -> Result<Matrix5c> {
    require_stable(p)?;
    scatter(&drift_blue(p), &coupling_rows(p, true), omega)
}

/// Real quadrature form of a blue scattering matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMap {
    /// Acts on `(q_0, p_0, …, q_4, p_4)` of the five ports.
    pub matrix: Matrix10,
    /// Largest imaginary entry discarded during the conversion.
    pub max_imag: f64,
}

const OPTICAL_PORTS: [bool; 5] = [true, true, false, false, false];

/// Converts `S̃` into a real map on port quadratures through
/// `(q, p)ᵀ = [[1, 1], [−i, i]] (a, a†)ᵀ`.
///
/// Rows of `S̃` for the optical ports describe `a†`, so the ladder-operator
/// matrix is assembled from `S̃` and its conjugate with those ports swapped
/// before conjugating by the quadrature relation.
pub fn quadrature_scattering(s: &Matrix5c) -> Result<QuadratureMap> {
    let slot = |port: usize, dagger: bool| 2 * port + usize::from(dagger);
    let mut ladder = Matrix10c::zeros();
    for i in 0..5 {
        for j in 0..5 {
            let (oi, oj) = (OPTICAL_PORTS[i], OPTICAL_PORTS[j]);
            ladder[(slot(i, oi), slot(j, oj))] = s[(i, j)];
            ladder[(slot(i, !oi), slot(j, !oj))] = s[(i, j)].conj();
        }
    }
    let mut to_quad = Matrix10c::zeros();
    let mut from_quad = Matrix10c::zeros();
    let one = C::new(1.0, 0.0);
    for k in 0..5 {
        let (q, p) = (2 * k, 2 * k + 1);
        to_quad[(q, q)] = one;
        to_quad[(q, p)] = one;
        to_quad[(p, q)] = -I;
        to_quad[(p, p)] = I;
        from_quad[(q, q)] = one * 0.5;
        from_quad[(q, p)] = I * 0.5;
        from_quad[(p, q)] = one * 0.5;
        from_quad[(p, p)] = -I * 0.5;
    }
    let quad = to_quad * ladder * from_quad;
    let max_imag = quad.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let scale = quad.iter().map(|z| z.re.abs()).fold(1.0, f64::max);
    if max_imag > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "quadrature scattering matrix has imaginary part {max_imag:e}"
        )));
    }
    Ok(QuadratureMap {
        matrix: quad.map(|z| z.re),
        max_imag,
    })
}

/// Input port covariance: vacuum on optical and microwave-coupling ports,
/// `2n_th + 1` on the mechanical and microwave-intrinsic ports.
pub fn input_covariance(p: &TransducerParams) -> Matrix10 {
    let hot = 2.0 * p.n_th + 1.0;
    let per_port = [1.0, 1.0, hot, 1.0, hot];
    let mut d = Matrix10::zeros();
    for (k, v) in per_port.iter().enumerate() {
        d[(2 * k, 2 * k)] = *v;
        d[(2 * k + 1, 2 * k + 1)] = *v;
    }
    d
}

/// 4×4 covariance of (optical coupling output, microwave coupling output)
/// at detuning `omega`, as produced by the scattering map.
pub fn output_mo_covariance_matrix(p: &TransducerParams, omega: f64) -> Result<DMatrix<f64>> {
    let s = scattering_blue(p, omega)?;
    let q = quadrature_scattering(&s)?.matrix;
    let full = q * input_covariance(p) * q.transpose();
    let idx = [0usize, 1, 6, 7];
    Ok(DMatrix::from_fn(4, 4, |i, j| full[(idx[i], idx[j])]))
}

/// Microwave-optical output state in standard form, numeric path.
pub fn output_mo_covariance(p: &TransducerParams, omega: f64) -> Result<TwoModeStandardForm> {
    TwoModeStandardForm::from_covariance(&output_mo_covariance_matrix(p, omega)?)
}

/// Resonant (`ω = 0`) closed form of the output state.
///
/// With `D = (1 − C_om + C_em)²` and `n = n_th`:
/// `u = 1 + 8C_om ζ_o [1 + n + C_em(1 + n − nζ_e)]/D`,
/// `v = 1 + 8ζ_e [C_em(C_om + n) + (1 − ζ_e)(C_om − 1)² n]/D`,
/// `w = 4√(C_om C_em ζ_o ζ_e) [1 + C_om + C_em + 2n C_om(1 − ζ_e) + 2nζ_e]/D`.
pub fn output_mo_closed_form(p: &TransducerParams) -> Result<TwoModeStandardForm> {
    require_stable(p)?;
    let (c_om, c_em) = cooperativities(p);
    let (zo, ze, n) = (p.zeta_o(), p.zeta_e(), p.n_th);
    let d = (1.0 - c_om + c_em).powi(2);
    let u = 1.0 + 8.0 * c_om * zo * (1.0 + n + c_em * (1.0 + n - n * ze)) / d;
    let v = 1.0 + 8.0 * ze * (c_em * (c_om + n) + (1.0 - ze) * (c_om - 1.0).powi(2) * n) / d;
    let w = 4.0 * (c_om * c_em * zo * ze).sqrt()
        * (1.0 + c_om + c_em + 2.0 * n * c_om * (1.0 - ze) + 2.0 * n * ze)
        / d;
    Ok(TwoModeStandardForm::new_unchecked(u, v, w))
}

/// Two-mode covariance `[[uI, wZ], [wZ, vI]]` with `w ≥ 0`.
///
/// The first mode is optical (or the first microwave mode after a swap),
/// the second microwave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeStandardForm {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl TwoModeStandardForm {
    /// Validated constructor; `w` may be negative (it is a local phase).
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self> {
        let form = Self { u, v, w };
        if !(u >= 1.0 - 1e-9) || !(v >= 1.0 - 1e-9) {
            return Err(invalid("form", format!("variances ({u}, {v}) below vacuum")));
        }
        let margin = physicality_margin(&form.covariance());
        if margin < PSD_FLOOR {
            return Err(Error::NotPhysical(margin));
        }
        Ok(form)
    }

    pub(crate) fn new_unchecked(u: f64, v: f64, w: f64) -> Self {
        Self { u, v, w }
    }

    /// Reads `u = √det V_A`, `v = √det V_B`, `w = √|det V_C|` from a 4×4
    /// covariance; local rotations bring any such state to this form.
    pub fn from_covariance(cov: &DMatrix<f64>) -> Result<Self> {
        if cov.shape() != (4, 4) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: cov.nrows(),
            });
        }
        let det2 = |r: usize, c: usize| cov[(r, c)] * cov[(r + 1, c + 1)] - cov[(r, c + 1)] * cov[(r + 1, c)];
        let u = det2(0, 0).max(0.0).sqrt();
        let v = det2(2, 2).max(0.0).sqrt();
        let w = det2(0, 2).abs().sqrt();
        Ok(Self { u, v, w })
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        let (u, v, w) = (self.u, self.v, self.w);
        DMatrix::from_row_slice(
            4,
            4,
            &[
                u, 0.0, w, 0.0, //
                0.0, u, 0.0, -w, //
                w, 0.0, v, 0.0, //
                0.0, -w, 0.0, v,
            ],
        )
    }

    pub fn is_physical(&self) -> bool {
        physicality_margin(&self.covariance()) >= PSD_FLOOR
    }

    /// Two-mode squeezed vacuum with squeezing `r`.
    pub fn tmsv(r: f64) -> Self {
        let c = (2.0 * r).cosh();
        Self::new_unchecked(c, c, (2.0 * r).sinh())
    }
}
