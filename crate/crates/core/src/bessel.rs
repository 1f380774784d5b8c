//! Double-precision Bessel functions J0, J1 and zeros of J1.
//!
//! The function values come from `libm`'s ports of the classic FreeBSD msun
//! routines (rational approximations below |x| = 2, phase/amplitude
//! asymptotics above). Zeros of J1 are computed on demand from the McMahon
//! asymptotic estimate refined by Newton iteration, so there is no table
//! limit.

/// J0(x). Panics on NaN input.
pub fn bessel_j0(x: f64) -> f64 {
    assert!(!x.is_nan(), "bessel_j0: NaN input");
    libm::j0(x)
}

/// J1(x). Panics on NaN input.
pub fn bessel_j1(x: f64) -> f64 {
    assert!(!x.is_nan(), "bessel_j1: NaN input");
    libm::j1(x)
}

/// First `n` positive zeros of J1, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselZeroTable {
    zeros: Vec<f64>,
}

impl BesselZeroTable {
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// The n-th positive zero of J1 (1-indexed).
pub fn j1_zero(n: usize) -> f64 {
    assert!(n >= 1, "j1_zero: n is 1-indexed");
    // McMahon expansion about beta = (n + 1/4) pi, mu = 4 nu^2 = 4:
    // j_{1,n} ~ beta - 3/(8 beta) - 36/(3 (8 beta)^3) * ...
    let beta = (n as f64 + 0.25) * std::f64::consts::PI;
    let mut x = beta - 3.0 / (8.0 * beta);
    // Newton on J1 with J1'(x) = J0(x) - J1(x)/x
    for _ in 0..30 {
        let f = libm::j1(x);
        let df = libm::j0(x) - f / x;
        let step = f / df;
        x -= step;
        if step.abs() <= 1e-15 * x {
            break;
        }
    }
    x
}

/// First `n` zeros of J1. `n = 0` yields an empty table.
pub fn j1_zeros(n: usize) -> BesselZeroTable {
    assert!(n <= 1_000_000, "j1_zeros: n exceeds the supported range");
    BesselZeroTable {
        zeros: (1..=n).map(j1_zero).collect(),
    }
}
