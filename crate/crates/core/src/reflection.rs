//! Fresnel reflection coefficients for s- and p-polarization, the transverse
//! decay constants with their branch rules, and the scaled form
//! R_s(w; K) that stays numerically stable when |eps| reaches 1e28.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::SPEED_OF_LIGHT_CM_S;

/// Complex square root on the Re >= 0 branch, tie-broken by Im >= 0.
///
/// This is the decaying-transmitted-wave branch: for evanescent waves the
/// result is real positive and the transmitted amplitude dies off into the
/// metal. The tie rule matters only on the negative real axis, where a signed
/// -0.0 imaginary part would otherwise flip the principal square root to the
/// lower half plane.
pub(crate) fn branch_sqrt(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.re == 0.0 && s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Wave numbers of a plane-wave component at frequency omega: the vacuum
/// decay constant q = (k_t^2 - k0^2)^{1/2} and its in-metal counterpart
/// q_eps = (k_t^2 - eps k0^2)^{1/2}, both on the Re >= 0 (tie Im >= 0)
/// branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    pub k0: f64,
    pub k_t: f64,
    pub q: Complex64,
    pub q_eps: Complex64,
}

impl WaveNumbers {
    pub fn new(omega: f64, k_t: f64, eps: Complex64) -> Self {
        let k0 = omega / SPEED_OF_LIGHT_CM_S;
        WaveNumbers {
            k0,
            k_t,
            q: transverse_q(k_t, k0, Complex64::new(1.0, 0.0)),
            q_eps: transverse_q(k_t, k0, eps),
        }
    }
}

/// (k_t^2 - eps k0^2)^{1/2} on the Re >= 0, tie Im >= 0 branch. Pass eps = 1
/// for the vacuum decay constant q.
pub fn transverse_q(k_t: f64, k0: f64, eps: Complex64) -> Complex64 {
    branch_sqrt(Complex64::new(k_t * k_t, 0.0) - eps * (k0 * k0))
}

fn check_eps(eps: Complex64) -> Result<()> {
    if eps.im < 0.0 {
        return Err(Error::UnphysicalEpsilon { im: eps.im });
    }
    Ok(())
}

/// s-polarization Fresnel coefficient R_s = (q - q_eps) / (q + q_eps).
pub fn r_s(omega: f64, k_t: f64, eps: Complex64) -> Result<Complex64> {
    crate::error::ensure_positive(omega, "frequency")?;
    check_eps(eps)?;
    let wn = WaveNumbers::new(omega, k_t, eps);
    Ok((wn.q - wn.q_eps) / (wn.q + wn.q_eps))
}

/// p-polarization Fresnel coefficient R_p = (eps q - q_eps) / (eps q + q_eps).
///
/// Provided for completeness and testing; the lateral dipole field above the
/// plate is carried by R_s alone.
pub fn r_p(omega: f64, k_t: f64, eps: Complex64) -> Result<Complex64> {
    crate::error::ensure_positive(omega, "frequency")?;
    check_eps(eps)?;
    let wn = WaveNumbers::new(omega, k_t, eps);
    Ok((eps * wn.q - wn.q_eps) / (eps * wn.q + wn.q_eps))
}

/// Scaled s-polarization coefficient
/// R_s = (w - sqrt(w^2 - K)) / (w + sqrt(w^2 - K)), w = h q dimensionless.
///
/// Algebraically identical to [`r_s`] with K = (eps - 1) (omega h / c)^2,
/// but K enters only under a square root, so permittivities of order 1e28
/// never appear as raw intermediates. This is the form the quadrature engine
/// evaluates.
pub fn r_s_scaled(w: f64, k: Complex64) -> Complex64 {
    let root = branch_sqrt(Complex64::new(w * w, 0.0) - k);
    (w - root) / (w + root)
}
