//! Truncated bivariate Taylor jets.
//!
//! A [`Jet`] stores the Taylor coefficients `c[i][j]` of a function of `(x, t)`
//! around an expansion point, for `i ≤ nx` and `j ≤ nt`. Arithmetic and the
//! elementary functions act on jets exactly through the declared orders, so
//! partial derivatives of a closed-form expression are obtained without any
//! truncation error: `∂^{i+j} f / ∂x^i ∂t^j = c[i][j] · i! · j!`.
//!
//! The tensor-product truncation (`i ≤ nx` and `j ≤ nt` independently) is
//! closed under multiplication, which is what makes the composition rules
//! below exact.

mod fd;
pub(crate) mod series;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{domain, Error, Result};

pub use fd::{fd_partial, stencil_weights, FdConfig, StencilSpec};

/// Largest supported x-order.
pub const MAX_NX: usize = 6;
/// Largest supported t-order.
pub const MAX_NT: usize = 2;

const ROWS: usize = MAX_NX + 1;
const COLS: usize = MAX_NT + 1;

/// Divisors smaller than this in magnitude are treated as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [[f64; COLS]; ROWS],
    nx: usize,
    nt: usize,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Seeds the coordinate jets `x` and `t` at `(x0, t0)`.
///
/// Orders above [`MAX_NX`] / [`MAX_NT`] are rejected rather than truncated.
pub fn jet_seed(x0: f64, t0: f64, nx: usize, nt: usize) -> Result<(Jet, Jet)> {
    if nx > MAX_NX || nt > MAX_NT {
        return Err(Error::OrderOutOfRange {
            x: nx,
            t: nt,
            nx: MAX_NX,
            nt: MAX_NT,
        });
    }
    let mut x = Jet::zero_with(nx, nt);
    x.c[0][0] = x0;
    if nx >= 1 {
        x.c[1][0] = 1.0;
    }
    let mut t = Jet::zero_with(nx, nt);
    t.c[0][0] = t0;
    if nt >= 1 {
        t.c[0][1] = 1.0;
    }
    Ok((x, t))
}

/// `∂^{i+k} f / ∂x^i ∂t^k` at the expansion point.
pub fn extract_partial(j: &Jet, i: usize, k: usize) -> Result<f64> {
    j.partial(i, k)
}

impl Jet {
    fn zero_with(nx: usize, nt: usize) -> Jet {
        Jet {
            c: [[0.0; COLS]; ROWS],
            nx,
            nt,
        }
    }

    /// A constant. Constants carry the maximal orders so they never lower the
    /// order of the jets they are combined with.
    pub fn constant(v: f64) -> Jet {
        let mut j = Jet::zero_with(MAX_NX, MAX_NT);
        j.c[0][0] = v;
        j
    }

    /// Univariate jet in one variable (stored along the x axis), used for
    /// profiles `h(z)`.
    pub fn variable(z0: f64, order: usize) -> Result<Jet> {
        jet_seed(z0, 0.0, order, 0).map(|(z, _)| z)
    }

    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.nx, self.nt)
    }

    /// Raw Taylor coefficient `c[i][k]`.
    pub fn coeff(&self, i: usize, k: usize) -> Result<f64> {
        self.check(i, k)?;
        Ok(self.c[i][k])
    }

    pub fn partial(&self, i: usize, k: usize) -> Result<f64> {
        self.check(i, k)?;
        Ok(self.c[i][k] * factorial(i) * factorial(k))
    }

    fn check(&self, i: usize, k: usize) -> Result<()> {
        if i > self.nx || k > self.nt {
            Err(Error::OrderOutOfRange {
                x: i,
                t: k,
                nx: self.nx,
                nt: self.nt,
            })
        } else {
            Ok(())
        }
    }

    /// The jet of `∂f/∂x`; its x-order drops by one.
    pub fn dx(&self) -> Result<Jet> {
        if self.nx == 0 {
            return Err(Error::OrderOutOfRange {
                x: 1,
                t: 0,
                nx: 0,
                nt: self.nt,
            });
        }
        let mut out = Jet::zero_with(self.nx - 1, self.nt);
        for i in 0..self.nx {
            for k in 0..=self.nt {
                out.c[i][k] = (i + 1) as f64 * self.c[i + 1][k];
            }
        }
        Ok(out)
    }

    /// The jet of `∂f/∂t`; its t-order drops by one.
    pub fn dt(&self) -> Result<Jet> {
        if self.nt == 0 {
            return Err(Error::OrderOutOfRange {
                x: 0,
                t: 1,
                nx: self.nx,
                nt: 0,
            });
        }
        let mut out = Jet::zero_with(self.nx, self.nt - 1);
        for i in 0..=self.nx {
            for k in 0..self.nt {
                out.c[i][k] = (k + 1) as f64 * self.c[i][k + 1];
            }
        }
        Ok(out)
    }

    /// Repeated x-derivative.
    pub fn dx_n(&self, n: usize) -> Result<Jet> {
        let mut j = *self;
        for _ in 0..n {
            j = j.dx()?;
        }
        Ok(j)
    }

    pub fn dt_n(&self, n: usize) -> Result<Jet> {
        let mut j = *self;
        for _ in 0..n {
            j = j.dt()?;
        }
        Ok(j)
    }

    /// Applies a univariate function given its Taylor coefficients `g[n]` at
    /// the current value: `g(c00 + d) = Σ g[n] dⁿ`.
    pub(crate) fn compose(&self, g: &series::Series) -> Jet {
        let mut delta = *self;
        delta.c[0][0] = 0.0;
        let mut out = Jet::zero_with(self.nx, self.nt);
        out.c[0][0] = g[0];
        let mut power = delta;
        for coeff in g.iter().skip(1).take(self.nx + self.nt) {
            out += power * *coeff;
            power = power * delta;
        }
        out
    }

    pub fn recip(&self) -> Result<Jet> {
        let a0 = self.value();
        if !(a0.abs() >= SINGULAR_THRESHOLD) {
            return domain(format!("division by a jet with value {a0:e}"));
        }
        let mut g = [0.0; series::LEN];
        let mut p = 1.0 / a0;
        for (n, v) in g.iter_mut().enumerate() {
            *v = if n % 2 == 0 { p } else { -p };
            p /= a0;
        }
        Ok(self.compose(&g))
    }

    pub fn div(&self, rhs: &Jet) -> Result<Jet> {
        Ok(*self * rhs.recip()?)
    }

    /// Integer power; negative exponents require a non-singular value.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut base = *self;
        let mut acc = Jet::constant(1.0);
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Real power. Integer-valued exponents defer to [`Jet::powi`] and accept
    /// any sign of the base; other exponents need a strictly positive value.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        if !p.is_finite() {
            return domain(format!("non-finite exponent {p}"));
        }
        if p == p.round() && p.abs() <= 64.0 {
            return self.powi(p as i32);
        }
        let a0 = self.value();
        if !(a0 > 0.0) {
            return domain(format!("fractional power {p} of non-positive value {a0:e}"));
        }
        Ok(self.compose(&series::powf(a0, p)))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let a0 = self.value();
        if !(a0 > 0.0) {
            return domain(format!("sqrt of non-positive value {a0:e}"));
        }
        Ok(self.compose(&series::powf(a0, 0.5)))
    }

    pub fn exp(&self) -> Jet {
        self.compose(&series::exp(self.value()))
    }

    pub fn sin(&self) -> Jet {
        self.compose(&series::sin_cos(self.value()).0)
    }

    pub fn cos(&self) -> Jet {
        self.compose(&series::sin_cos(self.value()).1)
    }

    pub fn tan(&self) -> Result<Jet> {
        let (s, c) = series::sin_cos(self.value());
        if c[0].abs() < SINGULAR_THRESHOLD {
            return domain("tan at a pole");
        }
        Ok(self.compose(&series::div(&s, &c)))
    }

    pub fn sinh(&self) -> Jet {
        self.compose(&series::sinh_cosh(self.value()).0)
    }

    pub fn cosh(&self) -> Jet {
        self.compose(&series::sinh_cosh(self.value()).1)
    }

    pub fn tanh(&self) -> Jet {
        self.compose(&series::tanh(self.value()))
    }

    pub fn sech(&self) -> Jet {
        self.compose(&series::sech(self.value()))
    }

    pub fn scale(&self, s: f64) -> Jet {
        *self * s
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let nx = self.nx.min(rhs.nx);
        let nt = self.nt.min(rhs.nt);
        let mut out = Jet::zero_with(nx, nt);
        for i in 0..=nx {
            for k in 0..=nt {
                out.c[i][k] = self.c[i][k] + rhs.c[i][k];
            }
        }
        out
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for row in self.c.iter_mut() {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let nx = self.nx.min(rhs.nx);
        let nt = self.nt.min(rhs.nt);
        let mut out = Jet::zero_with(nx, nt);
        for i in 0..=nx {
            for k in 0..=nt {
                let mut s = 0.0;
                for p in 0..=i {
                    for q in 0..=k {
                        s += self.c[p][q] * rhs.c[i - p][k - q];
                    }
                }
                out.c[i][k] = s;
            }
        }
        out
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0][0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0][0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for row in self.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= rhs;
            }
        }
        self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn seed_polynomial_mixed_partial() {
        let (x, t) = jet_seed(2.0, 3.0, 2, 1).unwrap();
        assert_eq!(x.coeff(0, 0).unwrap(), 2.0);
        assert_eq!(x.coeff(1, 0).unwrap(), 1.0);
        assert_eq!(x.coeff(2, 0).unwrap(), 0.0);
        let f = x * x * t;
        assert_eq!(extract_partial(&f, 2, 1).unwrap(), 2.0);
    }

    #[test]
    fn sech_squared_is_even_at_origin() {
        let (x, t) = jet_seed(0.0, 0.0, 4, 2).unwrap();
        let s = (x - t).sech();
        let f = s * s;
        assert_eq!(extract_partial(&f, 1, 0).unwrap(), 0.0);
    }

    #[test]
    fn exp_derivatives_equal_value() {
        let (x, _) = jet_seed(1.0, 0.0, 4, 0).unwrap();
        let e = x.exp();
        let c4 = e.coeff(4, 0).unwrap() * 24.0;
        assert!(close(c4, std::f64::consts::E, 1e-15));
    }

    #[test]
    fn constant_has_zero_derivative() {
        let c = Jet::constant(3.5);
        assert_eq!(extract_partial(&c, 1, 0).unwrap(), 0.0);
    }

    #[test]
    fn identity_derivative_is_one() {
        let (x, _) = jet_seed(0.3, 0.0, 6, 2).unwrap();
        assert_eq!(extract_partial(&x, 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn sech2_second_derivative_at_zero() {
        // (sech²)'' = 4 sech² − 6 sech⁴, which is −2 at the origin
        let (x, _) = jet_seed(0.0, 0.0, 6, 0).unwrap();
        let s = x.sech();
        let f = s * s;
        assert!(close(extract_partial(&f, 2, 0).unwrap(), -2.0, 1e-14));
    }

    #[test]
    fn out_of_range_orders_are_errors() {
        let (x, _) = jet_seed(0.0, 0.0, 2, 1).unwrap();
        assert!(matches!(
            extract_partial(&x, 3, 0),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(matches!(
            extract_partial(&x, 0, 2),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(jet_seed(0.0, 0.0, 7, 0).is_err());
        assert!(jet_seed(0.0, 0.0, 0, 3).is_err());
    }

    #[test]
    fn domain_errors() {
        let (x, _) = jet_seed(0.0, 0.0, 4, 0).unwrap();
        assert!(matches!(x.recip(), Err(Error::Domain(_))));
        assert!(matches!((x - 1.0).powf(0.5), Err(Error::Domain(_))));
        assert!(matches!((x - 1.0).sqrt(), Err(Error::Domain(_))));
        // integer exponents accept negative bases
        let cube = (x - 1.0).powf(3.0).unwrap();
        assert_eq!(cube.value(), -1.0);
        assert!(close(cube.partial(1, 0).unwrap(), 3.0, 1e-15));
    }

    #[test]
    fn division_and_fractional_power() {
        let (x, _) = jet_seed(2.0, 0.0, 6, 0).unwrap();
        let r = Jet::constant(1.0).div(&x).unwrap();
        // d^n/dx^n (1/x) = (-1)^n n! / x^{n+1}
        for n in 0..=6 {
            let expect =
                if n % 2 == 0 { 1.0 } else { -1.0 } * factorial(n) / 2f64.powi(n as i32 + 1);
            assert!(close(r.partial(n, 0).unwrap(), expect, 1e-14));
        }
        let p = x.powf(1.5).unwrap();
        // third derivative of x^1.5 = 1.5·0.5·(−0.5) x^{−1.5}
        let expect = 1.5 * 0.5 * -0.5 * 2f64.powf(-1.5);
        assert!(close(p.partial(3, 0).unwrap(), expect, 1e-14));
    }

    #[test]
    fn dx_dt_shift_coefficients() {
        let (x, t) = jet_seed(0.4, -0.2, 6, 2).unwrap();
        let f = (x * 2.0 - t).sin();
        let fxt = f.dx().unwrap().dt().unwrap();
        assert!(close(fxt.value(), f.partial(1, 1).unwrap(), 1e-15));
        let fxxxx = f.dx_n(4).unwrap();
        assert!(close(fxxxx.value(), f.partial(4, 0).unwrap(), 1e-14));
        assert_eq!(fxxxx.orders(), (2, 2));
    }

    #[test]
    fn trig_and_hyperbolic_identities() {
        let (x, t) = jet_seed(0.7, 0.1, 6, 2).unwrap();
        let z = x * 1.3 - t * 0.4;
        let one = z.sin() * z.sin() + z.cos() * z.cos();
        let hyp = z.cosh() * z.cosh() - z.sinh() * z.sinh();
        let th = z.tanh() * z.tanh() + z.sech() * z.sech();
        let tn = z.tan().unwrap() - z.sin().div(&z.cos()).unwrap();
        for i in 0..=6 {
            for k in 0..=2 {
                let e = if i == 0 && k == 0 { 1.0 } else { 0.0 };
                assert!(close(one.coeff(i, k).unwrap(), e, 1e-13));
                assert!(close(hyp.coeff(i, k).unwrap(), e, 1e-13));
                assert!(close(th.coeff(i, k).unwrap(), e, 1e-13));
                assert!(tn.coeff(i, k).unwrap().abs() < 1e-12);
            }
        }
    }
}

#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::fd::{fd_partial, FdConfig};
    use super::{jet_seed, Jet};

    #[derive(Clone, Debug)]
    enum Expr {
        X,
        T,
        Const(f64),
        Add(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Sin(Box<Expr>),
        Exp(Box<Expr>),
        Tanh(Box<Expr>),
        Cosh(Box<Expr>),
    }

    impl Expr {
        fn jet(&self, x: &Jet, t: &Jet) -> Jet {
            match self {
                Expr::X => *x,
                Expr::T => *t,
                Expr::Const(c) => Jet::constant(*c),
                Expr::Add(a, b) => a.jet(x, t) + b.jet(x, t),
                Expr::Mul(a, b) => a.jet(x, t) * b.jet(x, t),
                Expr::Sin(a) => a.jet(x, t).sin(),
                Expr::Exp(a) => (a.jet(x, t) * 0.5).exp(),
                Expr::Tanh(a) => a.jet(x, t).tanh(),
                Expr::Cosh(a) => (a.jet(x, t) * 0.5).cosh(),
            }
        }

        fn f64(&self, x: f64, t: f64) -> f64 {
            match self {
                Expr::X => x,
                Expr::T => t,
                Expr::Const(c) => *c,
                Expr::Add(a, b) => a.f64(x, t) + b.f64(x, t),
                Expr::Mul(a, b) => a.f64(x, t) * b.f64(x, t),
                Expr::Sin(a) => a.f64(x, t).sin(),
                Expr::Exp(a) => (0.5 * a.f64(x, t)).exp(),
                Expr::Tanh(a) => a.f64(x, t).tanh(),
                Expr::Cosh(a) => (0.5 * a.f64(x, t)).cosh(),
            }
        }
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::X),
            Just(Expr::T),
            (-1.5..1.5f64).prop_map(Expr::Const),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Sin(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Exp(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Tanh(Box::new(a))),
                inner.prop_map(|a| Expr::Cosh(Box::new(a))),
            ]
        })
    }

    fn max_rel(a: &Jet, b: &Jet) -> f64 {
        let (nx, nt) = a.orders();
        let mut worst: f64 = 0.0;
        for i in 0..=nx {
            for k in 0..=nt {
                let (p, q) = (a.coeff(i, k).unwrap(), b.coeff(i, k).unwrap());
                worst = worst.max((p - q).abs() / p.abs().max(q.abs()).max(1.0));
            }
        }
        worst
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn fd_error_shrinks_at_nominal_order(e in expr(), x0 in -1.0..1.0f64, t0 in -1.0..1.0f64) {
            let (xj, tj) = jet_seed(x0, t0, 6, 2).unwrap();
            let jet = e.jet(&xj, &tj);
            for (i, k) in [(1, 0), (0, 1), (2, 0), (1, 1)] {
                let exact = jet.partial(i, k).unwrap();
                let err = |h: f64| {
                    let cfg = FdConfig { step: Some(h), accuracy: 2 };
                    (0..5)
                        .map(|p| {
                            let dx = 0.1 * p as f64;
                            let (xs, ts) = jet_seed(x0 + dx, t0 - dx, 6, 2).unwrap();
                            let ex = e.jet(&xs, &ts).partial(i, k).unwrap();
                            (fd_partial(|x, t| e.f64(x, t), x0 + dx, t0 - dx, i, k, cfg).unwrap() - ex).abs()
                        })
                        .fold(0.0, f64::max)
                };
                let (e1, e2) = (err(0.08), err(0.04));
                // polynomial pieces of low degree are differenced exactly
                if e1 < 1e-9 * exact.abs().max(1.0) {
                    continue;
                }
                let order = (e1 / e2).log2();
                prop_assert!((order - 2.0).abs() < 0.3, "({i},{k}) order {order}, errors {e1:e} {e2:e}");
            }
        }

        #[test]
        fn jet_chain_rule(e in expr(), z0 in -1.0..1.0f64, lambda in 0.2..2.0f64, mu in 0.2..2.0f64) {
            let g = |z: &Jet| e.jet(z, &(*z * 0.3));
            let x0 = (z0 + lambda * 0.2) / mu;
            let (xj, tj) = jet_seed(x0, 0.2, 6, 2).unwrap();
            let two = g(&(xj * mu - tj * lambda));
            let one = g(&Jet::variable(z0, 6).unwrap());
            for i in 0..=4 {
                for k in 0..=2 {
                    let lhs = two.partial(i, k).unwrap();
                    let rhs = mu.powi(i as i32) * (-lambda).powi(k as i32) * one.dx_n(i + k).unwrap().value();
                    prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1.0),
                        "({i},{k}): {lhs} vs {rhs}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn jet_algebra_is_associative_and_distributive(
            a in expr(), b in expr(), c in expr(), x0 in -1.0..1.0f64, t0 in -1.0..1.0f64
        ) {
            let (x, t) = jet_seed(x0, t0, 6, 2).unwrap();
            let (a, b, c) = (a.jet(&x, &t), b.jet(&x, &t), c.jet(&x, &t));
            let scale = [a, b, c].iter().map(|j| j.value().abs()).fold(1.0, f64::max).powi(3);
            prop_assume!(scale < 1e6);
            prop_assert!(max_rel(&((a * b) * c), &(a * (b * c))) < 1e-12);
            prop_assert!(max_rel(&((a + b) + c), &(a + (b + c))) < 1e-12);
            prop_assert!(max_rel(&(a * (b + c)), &(a * b + a * c)) < 1e-12);
        }
    }
}
