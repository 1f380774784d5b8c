//! Free-space fields of an oscillating point magnetic dipole, their 2D
//! plane-wave transforms, the coil magnetic moment, and the ideal-metal
//! closed form used as the engine's analytic anchor.
//!
//! The dipole moment points along z and all fields carry an implied
//! e^{-i omega t}. Gaussian units: cm, rad/s, Oe, erg/Oe.

use num_complex::Complex64;

use crate::error::{ensure_positive, Error, Result};
use crate::units::SPEED_OF_LIGHT_CM_S;

/// Dipole scenario: moment amplitude, height above the plate, oscillation
/// frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleConfig {
    /// Magnetic moment amplitude, erg/Oe.
    pub m0: f64,
    /// Height above the plate, cm.
    pub h: f64,
    /// Oscillation angular frequency, rad/s.
    pub omega: f64,
}

impl DipoleConfig {
    pub fn new(m0: f64, h: f64, omega: f64) -> Result<Self> {
        ensure_positive(m0, "magnetic moment")?;
        ensure_positive(h, "height")?;
        ensure_positive(omega, "frequency")?;
        Ok(Self { m0, h, omega })
    }

    /// Vacuum wave number omega/c, 1/cm.
    pub fn k0(&self) -> f64 {
        self.omega / SPEED_OF_LIGHT_CM_S
    }

    /// The near-zone treatment assumes k0 h << 1. Returns Some(k0 h) when
    /// the product exceeds 1e-3 so callers can warn.
    pub fn near_zone_violation(&self) -> Option<f64> {
        let k0h = self.k0() * self.h;
        (k0h > 1e-3).then_some(k0h)
    }
}

/// Complex magnetic field phasor amplitudes, Oe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldVector {
    pub hx: Complex64,
    pub hy: Complex64,
    pub hz: Complex64,
}

/// Current loop realizing the dipole: m0 = pi N I0 R^2 / c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoilSpec {
    /// Number of loops.
    pub turns: u32,
    /// Current amplitude, statA.
    pub current: f64,
    /// Loop radius, cm.
    pub radius: f64,
}

impl CoilSpec {
    pub fn new(turns: u32, current: f64, radius: f64) -> Result<Self> {
        if turns < 1 {
            return Err(Error::Domain("coil needs at least one loop".into()));
        }
        ensure_positive(current, "current")?;
        ensure_positive(radius, "radius")?;
        Ok(Self {
            turns,
            current,
            radius,
        })
    }
}

/// Magnetic moment of the coil, erg/Oe.
pub fn coil_moment(spec: &CoilSpec) -> f64 {
    std::f64::consts::PI * spec.turns as f64 * spec.current * spec.radius * spec.radius
        / SPEED_OF_LIGHT_CM_S
}

/// Decay constant for the plane-wave expansion of the outgoing free field:
/// real sqrt(k_t^2 - k0^2) above the light line, -i sqrt(k0^2 - k_t^2) below
/// it. The lower-half-plane sign below the light line is what makes
/// e^{-q|z|} an outgoing wave under the e^{-i omega t} convention; with it
/// the transform pair reproduces the e^{+i k0 r} phase of the free field
/// exactly.
pub(crate) fn radiating_q(k_t: f64, k0: f64) -> Complex64 {
    if k_t >= k0 {
        Complex64::new((k_t * k_t - k0 * k0).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -(k0 * k0 - k_t * k_t).sqrt())
    }
}

/// Free-space magnetic field of the dipole at `point` (cm), dipole at the
/// origin:
///
/// H_xa = -m0 (xa z / r^2) (k0^2/r + 3i k0/r^2 - 3/r^3) e^{i k0 r},
/// H_z  =  m0 [k0^2/r + i k0/r^2 - 1/r^3
///             - (z^2/r^2)(k0^2/r + 3i k0/r^2 - 3/r^3)] e^{i k0 r}.
pub fn h_free(omega: f64, m0: f64, point: [f64; 3]) -> Result<FieldVector> {
    let [x, y, z] = point;
    let r2 = x * x + y * y + z * z;
    if r2 == 0.0 {
        return Err(Error::Domain(
            "free dipole field is singular at the dipole point".into(),
        ));
    }
    let r = r2.sqrt();
    let k0 = omega / SPEED_OF_LIGHT_CM_S;
    let phase = Complex64::new(0.0, k0 * r).exp();

    // k0^2/r + 3i k0/r^2 - 3/r^3 and its z-component sibling
    let near3 = Complex64::new(k0 * k0 / r - 3.0 / (r2 * r), 3.0 * k0 / r2);
    let near1 = Complex64::new(k0 * k0 / r - 1.0 / (r2 * r), k0 / r2);

    let lateral = -m0 * z / r2 * near3 * phase;
    Ok(FieldVector {
        hx: x * lateral,
        hy: y * lateral,
        hz: m0 * (near1 - (z * z / r2) * near3) * phase,
    })
}

/// Free-space electric field of the dipole, statV/cm:
/// E = i m0 k0 (i k0/r^2 - 1/r^3) e^{i k0 r} (y, -x, 0).
///
/// E_z vanishes identically, and |E|/|H| ~ k0 r in the near zone.
pub fn e_free(omega: f64, m0: f64, point: [f64; 3]) -> Result<[Complex64; 3]> {
    let [x, y, z] = point;
    let r2 = x * x + y * y + z * z;
    if r2 == 0.0 {
        return Err(Error::Domain(
            "free dipole field is singular at the dipole point".into(),
        ));
    }
    let r = r2.sqrt();
    let k0 = omega / SPEED_OF_LIGHT_CM_S;
    let phase = Complex64::new(0.0, k0 * r).exp();
    let radial = Complex64::new(-1.0 / (r2 * r), k0 / r2);
    let scale = Complex64::new(0.0, m0 * k0) * radial * phase;
    Ok([y * scale, -x * scale, Complex64::new(0.0, 0.0)])
}

/// 2D plane-wave transform of the free field at height z:
///
/// H_xa(k_t, z) = -2 pi i m0 k_a sign(z) e^{-q |z|},
/// H_z(k_t, z)  =  2 pi m0 (k_t^2 / q) e^{-q |z|},
///
/// with q on the outgoing branch of [`radiating_q`].
pub fn h_fourier_free(omega: f64, m0: f64, k_t_vec: [f64; 2], z: f64) -> Result<[Complex64; 3]> {
    if z == 0.0 {
        return Err(Error::Domain(
            "transform is discontinuous across z = 0".into(),
        ));
    }
    let [kx, ky] = k_t_vec;
    let k_t = kx.hypot(ky);
    let k0 = omega / SPEED_OF_LIGHT_CM_S;
    let q = radiating_q(k_t, k0);
    if q.norm() == 0.0 && k_t != 0.0 {
        return Err(Error::Domain(
            "q = 0 on the light line: the 1/q pole of H_z is integrable but not pointwise evaluable".into(),
        ));
    }
    let damp = (-q * z.abs()).exp();
    let lateral = Complex64::new(0.0, -2.0 * std::f64::consts::PI * m0 * z.signum()) * damp;
    let hz = if k_t == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        2.0 * std::f64::consts::PI * m0 * (k_t * k_t) * damp / q
    };
    Ok([kx * lateral, ky * lateral, hz])
}

/// Lateral field over an ideal-metal plate at the dipole height, closed form:
/// 6 m0 x h / (x^2 + 4 h^2)^{5/2} = (m0/h^3) 6 xt / (4 + xt^2)^{5/2},
/// xt = x/h. This is the magnitude envelope of the image-dipole field; the
/// integral route with R_s = -1 returns its negative (the reflected lateral
/// field points along -x for x > 0).
pub fn h_x_ideal_closed(m0: f64, h: f64, x: f64) -> f64 {
    let xt = x / h;
    m0 / (h * h * h) * 6.0 * xt / (4.0 + xt * xt).powf(2.5)
}
