//! Jacobi elliptic functions.
//!
//! **Parameter convention.** Everything here takes the *parameter* `m` that
//! appears in `u = ∫₀^φ dθ / √(1 − m sin²θ)`, with `sn u = sin φ`. Libraries
//! that use the modulus `k` pass `m = k²`; no other convention is accepted.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::jets::{series, Jet};

/// Distance from 0 or 1 below which the trigonometric / hyperbolic closed
/// forms replace the AGM iteration.
pub const ENDPOINT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&m) {
            Ok(EllipticParameter(m))
        } else {
            Err(Error::EllipticParameter(m))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// `K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ)` via the arithmetic-geometric mean.
pub fn complete_k(m: EllipticParameter) -> Result<f64> {
    let m = m.value();
    if m >= 1.0 {
        return Err(Error::DivergentK);
    }
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt()))
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

/// `(sn, cn, dn)(z | m)`.
pub fn jacobi_eval(z: f64, m: EllipticParameter) -> JacobiTriple {
    let mv = m.value();
    if mv <= ENDPOINT_EPS {
        let (s, c) = z.sin_cos();
        return JacobiTriple {
            sn: s,
            cn: c,
            dn: 1.0,
        };
    }
    if mv >= 1.0 - ENDPOINT_EPS {
        let sech = 1.0 / z.cosh();
        return JacobiTriple {
            sn: z.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    // sn and cn have real period 4K
    let period = 4.0 * complete_k(m).expect("m < 1 here");
    let u = z - period * (z / period).round();

    // descending Landen sequence
    let mut a = [0.0f64; 32];
    let mut c = [0.0f64; 32];
    a[0] = 1.0;
    let mut b = (1.0 - mv).sqrt();
    c[0] = mv.sqrt();
    let mut n = 0;
    while c[n].abs() > 1e-16 && n < 31 {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = cn² + (1 − m) sn² is free of cancellation
    let dn = (cn * cn + (1.0 - mv) * sn * sn).sqrt();
    JacobiTriple { sn, cn, dn }
}

/// Jets of `sn`, `cn`, `dn` composed with the argument jet `z`.
///
/// The Taylor series at the expansion point are generated from the coupled
/// system `sn' = cn·dn`, `cn' = −sn·dn`, `dn' = −m·sn·cn`.
pub fn jacobi_jet(z: &Jet, m: EllipticParameter) -> (Jet, Jet, Jet) {
    let (s, c, d) = jacobi_series(z.value(), m);
    (z.compose(&s), z.compose(&c), z.compose(&d))
}

fn jacobi_series(
    z0: f64,
    m: EllipticParameter,
) -> (series::Series, series::Series, series::Series) {
    let mv = m.value();
    let v = jacobi_eval(z0, m);
    let mut s = [0.0; series::LEN];
    let mut c = [0.0; series::LEN];
    let mut d = [0.0; series::LEN];
    s[0] = v.sn;
    c[0] = v.cn;
    d[0] = v.dn;
    for n in 0..series::LEN - 1 {
        let (mut cd, mut sd, mut sc) = (0.0, 0.0, 0.0);
        for k in 0..=n {
            cd += c[k] * d[n - k];
            sd += s[k] * d[n - k];
            sc += s[k] * c[n - k];
        }
        let inv = 1.0 / (n + 1) as f64;
        s[n + 1] = cd * inv;
        c[n + 1] = -sd * inv;
        d[n + 1] = -mv * sc * inv;
    }
    (s, c, d)
}
