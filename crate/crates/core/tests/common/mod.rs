//! Shared test oracles, independent of the production quadrature engine.

use num_complex::Complex64;

use dipole_plate::h_fourier_free;
use dipole_plate::units::SPEED_OF_LIGHT_CM_S;

/// Numerical inversion of the 2D plane-wave transform at one point:
/// H(r) = (2 pi)^{-2} int d^2k e^{i k . r_t} H(k, z), evaluated in polar
/// coordinates with a trapezoid rule over the angle and composite Simpson
/// over the substituted radial variable. Truncated where e^{-q|z|} < 1e-12.
///
/// No Bessel functions and no Gauss-Kronrod machinery: this path shares
/// nothing with the production engine except `h_fourier_free` itself, which
/// is exactly what it is meant to test.
pub fn invert_h_fourier(omega: f64, m0: f64, point: [f64; 3]) -> [Complex64; 3] {
    let [x, y, z] = point;
    assert!(z != 0.0);
    let k0 = omega / SPEED_OF_LIGHT_CM_S;
    let r_t = x.hypot(y);
    let w_max = -(1e-12_f64.ln()) / z.abs();
    let k_max = k0.hypot(w_max);

    // enough angular nodes for the e^{i k r_t cos psi} bandwidth
    let n_ang = (((2.0 * k_max * r_t) as usize) + 48).next_multiple_of(2);
    let nodes: Vec<(f64, f64)> = (0..n_ang)
        .map(|j| {
            let psi = 2.0 * std::f64::consts::PI * j as f64 / n_ang as f64;
            psi.sin_cos()
        })
        .collect();

    // angular sweep of the transform times the plane-wave factor, already
    // multiplied by the polar k of "k dk"
    let ring = |k: f64| -> [Complex64; 3] {
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for &(s, c) in &nodes {
            let f = h_fourier_free(omega, m0, [k * c, k * s], z).unwrap();
            let phase = Complex64::new(0.0, k * (c * x + s * y)).exp();
            for i in 0..3 {
                acc[i] += f[i] * phase;
            }
        }
        let dpsi = 2.0 * std::f64::consts::PI / n_ang as f64;
        acc.map(|v| v * (k * dpsi))
    };

    // propagating band: k = k0 sin t removes the 1/q ring singularity of
    // the H_z integrand. The last sliver of t cannot be evaluated (the
    // reconstructed q loses all precision against the light line), so it is
    // closed with a rectangle: the integrand has a finite limit there.
    let band_integrand = |t: f64| {
        let (st, ct) = t.sin_cos();
        ring(k0 * st).map(|v| v * (k0 * ct))
    };
    let t_stop = std::f64::consts::FRAC_PI_2 - 1e-6;
    let mut band = simpson3(&band_integrand, 0.0, t_stop);
    let band_edge = band_integrand(t_stop);
    for i in 0..3 {
        band[i] += band_edge[i] * (std::f64::consts::FRAC_PI_2 - t_stop);
    }

    // evanescent band: k = sqrt(k0^2 + w^2), dk = (w/k) dw; same rectangle
    // closure on the light-line side
    let evan_integrand = |w: f64| {
        let k = k0.hypot(w);
        ring(k).map(|v| v * (w / k))
    };
    let w_start = 1e-5 * k0;
    let mut evan = simpson3(&evan_integrand, w_start, w_max);
    let evan_edge = evan_integrand(w_start);
    for i in 0..3 {
        evan[i] += evan_edge[i] * w_start;
    }

    let norm = 1.0 / (2.0 * std::f64::consts::PI).powi(2);
    [
        (band[0] + evan[0]) * norm,
        (band[1] + evan[1]) * norm,
        (band[2] + evan[2]) * norm,
    ]
}

/// Composite Simpson over a 3-vector of complex components, doubling the
/// panel count until the result stops moving.
fn simpson3<F>(f: &F, a: f64, b: f64) -> [Complex64; 3]
where
    F: Fn(f64) -> [Complex64; 3],
{
    let mut n = 512;
    let mut prev: Option<[Complex64; 3]> = None;
    loop {
        let cur = simpson3_fixed(&f, a, b, n);
        if let Some(p) = prev {
            let change: f64 = (0..3).map(|i| (cur[i] - p[i]).norm()).sum();
            let scale: f64 = (0..3).map(|i| cur[i].norm()).sum();
            if change <= 1e-9 * scale || n >= 8192 {
                return cur;
            }
        }
        prev = Some(cur);
        n *= 2;
    }
}

fn simpson3_fixed<F>(f: &F, a: f64, b: f64, n: usize) -> [Complex64; 3]
where
    F: Fn(f64) -> [Complex64; 3],
{
    let h = (b - a) / n as f64;
    let mut sum = f(a);
    let fb = f(b);
    for i in 0..3 {
        sum[i] += fb[i];
    }
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        let fj = f(a + j as f64 * h);
        for i in 0..3 {
            sum[i] += fj[i] * w;
        }
    }
    sum.map(|v| v * (h / 3.0))
}
