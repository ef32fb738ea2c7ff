use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::delta::DeltaTerm;
use crate::error::{check_finite, invalid, Result};

/// Translation-invariant convolution kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    kind: KernelKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// `(w²/π²) sinc²(w Re α) sinc²(w Im α)`: nonnegative and non-Gaussian.
    Sinc2 { width: f64 },
    /// `2/(π(1−s)) exp(−2|α|²/(1−s))`: `s = −1` gives Q, `s = 0` the Wigner function.
    GaussianS { order: f64 },
}

impl KernelSpec {
    pub fn sinc2(width: f64) -> Result<Self> {
        check_finite("w", &[width])?;
        if width <= 0.0 {
            return Err(invalid("w", format!("width must be positive, got {width}")));
        }
        Ok(Self {
            kind: KernelKind::Sinc2 { width },
        })
    }

    pub fn gaussian_s(order: f64) -> Result<Self> {
        check_finite("s", &[order])?;
        if order >= 1.0 {
            return Err(invalid("s", format!("order must be below 1, got {order}")));
        }
        Ok(Self {
            kind: KernelKind::GaussianS { order },
        })
    }

    pub fn husimi() -> Self {
        Self {
            kind: KernelKind::GaussianS { order: -1.0 },
        }
    }

    pub fn wigner() -> Self {
        Self {
            kind: KernelKind::GaussianS { order: 0.0 },
        }
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, KernelKind::GaussianS { .. })
    }

    /// Kernel value at the real displacement `(dx, dy)`.
    pub fn value(&self, dx: f64, dy: f64) -> f64 {
        match self.kind {
            KernelKind::Sinc2 { width } => {
                width * width / (PI * PI) * sinc2_real(width * dx) * sinc2_real(width * dy)
            }
            KernelKind::GaussianS { order } => {
                let spread = 1.0 - order;
                2.0 / (PI * spread) * (-2.0 * (dx * dx + dy * dy) / spread).exp()
            }
        }
    }

    /// `∫ K(x, y) e^{−i(kx·x + ky·y)} dx dy`.
    pub fn transform(&self, kx: f64, ky: f64) -> f64 {
        match self.kind {
            KernelKind::Sinc2 { width } => {
                let tri = |k: f64| (1.0 - k.abs() / (2.0 * width)).max(0.0);
                tri(kx) * tri(ky)
            }
            KernelKind::GaussianS { order } => (-(1.0 - order) * (kx * kx + ky * ky) / 8.0).exp(),
        }
    }
}

fn sinc2_real(x: f64) -> f64 {
    sinc2_complex(C64::new(x, 0.0)).re
}

const SERIES_RADIUS: f64 = 1e-3;

/// Taylor series of `sinc²(u) = (1 − cos 2u)/(2u²)`, six terms.
fn sinc2_series(u: C64) -> C64 {
    let u2 = u * u;
    let mut acc = C64::new(0.0, 0.0);
    let mut power = C64::new(1.0, 0.0);
    // coefficient of u^{2(k−1)} is (−1)^{k+1} 2^{2k−1}/(2k)!
    let mut fact = 2.0; // (2k)! for k = 1
    for k in 1..=6 {
        let coeff = (2.0f64).powi(2 * k - 1) / fact;
        let signed = if k % 2 == 1 { coeff } else { -coeff };
        acc += power * signed;
        power *= u2;
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    acc
}

/// `(sin u/u)²` for complex `u`.
///
/// For `u = x + iy` this is `[sin x cosh y + i cos x sinh y]²/(x + iy)²`.
pub fn sinc2_complex(u: C64) -> C64 {
    if u.norm() < SERIES_RADIUS {
        return sinc2_series(u);
    }
    let s = u.sin() / u;
    s * s
}

/// `ln sin u`, stable for large `|Im u|` where `sin u` itself overflows.
fn ln_sin(u: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    if u.im.abs() < 20.0 {
        u.sin().ln()
    } else if u.im > 0.0 {
        // sin u = (i/2) e^{−iu} (1 − e^{2iu})
        C64::new(0.5f64.ln(), PI / 2.0) - i * u + (C64::new(1.0, 0.0) - (2.0 * i * u).exp()).ln()
    } else {
        // sin u = (−i/2) e^{iu} (1 − e^{−2iu})
        C64::new(0.5f64.ln(), -PI / 2.0) + i * u + (C64::new(1.0, 0.0) - (-2.0 * i * u).exp()).ln()
    }
}

/// `ln sinc²(u)`, defined up to multiples of `2πi`.
pub(crate) fn ln_sinc2_complex(u: C64) -> C64 {
    if u.norm() < SERIES_RADIUS {
        return sinc2_series(u).ln();
    }
    2.0 * (ln_sin(u) - u.ln())
}

/// Squared separation above which the sinc² evaluation pairs the overlap with
/// the growing hyperbolic factors in log space.
const LOG_SPACE_SEPARATION: f64 = 100.0;

/// Kernel-regularized delta term at the phase-space point `alpha`.
pub fn regularized_delta(term: &DeltaTerm, kernel: &KernelSpec, alpha: C64) -> C64 {
    let dx = C64::new(alpha.re, 0.0) - term.support_re();
    let dy = C64::new(alpha.im, 0.0) - term.support_im();
    match kernel.kind {
        KernelKind::Sinc2 { width } => {
            let (ux, uy) = (dx * width, dy * width);
            if term.separation_sqr() > LOG_SPACE_SEPARATION {
                (term.log_prefactor()
                    + 2.0 * (width / PI).ln()
                    + ln_sinc2_complex(ux)
                    + ln_sinc2_complex(uy))
                .exp()
            } else {
                term.prefactor()
                    * (width * width / (PI * PI))
                    * sinc2_complex(ux)
                    * sinc2_complex(uy)
            }
        }
        KernelKind::GaussianS { order } => {
            let spread = 1.0 - order;
            let exponent = term.log_prefactor() - 2.0 * (dx * dx + dy * dy) / spread;
            exponent.exp() * (2.0 / (PI * spread))
        }
    }
}
