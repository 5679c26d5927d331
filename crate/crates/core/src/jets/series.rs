//! Univariate truncated power series used to build the Taylor coefficients of
//! the elementary functions before composing them onto a bivariate jet.

/// Highest total order a jet can carry (x-order plus t-order).
pub(crate) const LEN: usize = super::MAX_NX + super::MAX_NT + 1;

pub(crate) type Series = [f64; LEN];

/// `a / b`; caller guarantees `b[0] != 0`.
pub(crate) fn div(a: &Series, b: &Series) -> Series {
    let mut q = [0.0; LEN];
    for n in 0..LEN {
        let mut s = a[n];
        for k in 1..=n {
            s -= b[k] * q[n - k];
        }
        q[n] = s / b[0];
    }
    q
}

pub(crate) fn inv_factorials() -> Series {
    let mut out = [1.0; LEN];
    for n in 1..LEN {
        out[n] = out[n - 1] / n as f64;
    }
    out
}

/// Taylor coefficients of sin and cos at `x0`.
pub(crate) fn sin_cos(x0: f64) -> (Series, Series) {
    let (s0, c0) = x0.sin_cos();
    let f = inv_factorials();
    let mut sin = [0.0; LEN];
    let mut cos = [0.0; LEN];
    // derivatives cycle through sin, cos, -sin, -cos
    let ds = [s0, c0, -s0, -c0];
    let dc = [c0, -s0, -c0, s0];
    for n in 0..LEN {
        sin[n] = ds[n % 4] * f[n];
        cos[n] = dc[n % 4] * f[n];
    }
    (sin, cos)
}

pub(crate) fn sinh_cosh(x0: f64) -> (Series, Series) {
    let (s0, c0) = (x0.sinh(), x0.cosh());
    let f = inv_factorials();
    let mut sinh = [0.0; LEN];
    let mut cosh = [0.0; LEN];
    for n in 0..LEN {
        let (a, b) = if n % 2 == 0 { (s0, c0) } else { (c0, s0) };
        sinh[n] = a * f[n];
        cosh[n] = b * f[n];
    }
    (sinh, cosh)
}

pub(crate) fn exp(x0: f64) -> Series {
    let e = x0.exp();
    let mut out = inv_factorials();
    for v in out.iter_mut() {
        *v *= e;
    }
    out
}

/// tanh via its Riccati equation t' = 1 - t², which stays accurate for large
/// |x0| where the sinh/cosh quotient would overflow.
pub(crate) fn tanh(x0: f64) -> Series {
    let mut t = [0.0; LEN];
    t[0] = x0.tanh();
    for n in 0..LEN - 1 {
        let mut sq = 0.0;
        for k in 0..=n {
            sq += t[k] * t[n - k];
        }
        let rhs = if n == 0 { 1.0 - sq } else { -sq };
        t[n + 1] = rhs / (n + 1) as f64;
    }
    t
}

/// sech via s' = -s·t with t = tanh.
pub(crate) fn sech(x0: f64) -> Series {
    let t = tanh(x0);
    let mut s = [0.0; LEN];
    s[0] = 1.0 / x0.cosh();
    for n in 0..LEN - 1 {
        let mut acc = 0.0;
        for k in 0..=n {
            acc += s[k] * t[n - k];
        }
        s[n + 1] = -acc / (n + 1) as f64;
    }
    s
}

/// Coefficients of `(x0 + d)^p` in powers of `d`; requires `x0 > 0`.
pub(crate) fn powf(x0: f64, p: f64) -> Series {
    let mut out = [0.0; LEN];
    let mut binom = 1.0;
    for (n, v) in out.iter_mut().enumerate() {
        *v = binom * x0.powf(p - n as f64);
        binom *= (p - n as f64) / (n + 1) as f64;
    }
    out
}
