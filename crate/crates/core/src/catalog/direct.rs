//! Power-of-Jacobi ansatz `h = α·H^β(z)` for the generalized equation.
//!
//! Substituting the ansatz into `h'''' + b·h'' + F(h) = 0` determines `F`
//! as a five-term sum
//! `F(h) = c₁h^{1+4/β} + c₂h^{1+2/β} + c₃h^{1−4/β} + c₄h^{1−2/β} + c₅h`.
//! Two coefficient sources are kept: the published tables, copied term for
//! term, and a set recomputed here from `(H')² = r + pH² + qH⁴`.

use serde::{Deserialize, Serialize};

use crate::elliptic::{jacobi_jet, EllipticParameter};
use crate::equations::{NonlinearitySpec, Profile, Term, TravelingWave, WaveFrame};
use crate::error::{Error, Result};
use crate::jets::{Jet, MAX_NX};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JacobiKind {
    Sn,
    Cn,
    Dn,
}

impl JacobiKind {
    pub const ALL: [JacobiKind; 3] = [JacobiKind::Sn, JacobiKind::Cn, JacobiKind::Dn];

    pub fn name(self) -> &'static str {
        match self {
            JacobiKind::Sn => "sn",
            JacobiKind::Cn => "cn",
            JacobiKind::Dn => "dn",
        }
    }
}

/// Coefficients of `(H')² = r + pH² + qH⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiOdeParams {
    pub r: f64,
    pub p: f64,
    pub q: f64,
}

pub fn jacobi_ode_params(kind: JacobiKind, m: EllipticParameter) -> JacobiOdeParams {
    let m = m.value();
    match kind {
        JacobiKind::Sn => JacobiOdeParams {
            r: 1.0,
            p: -(1.0 + m),
            q: m,
        },
        JacobiKind::Cn => JacobiOdeParams {
            r: 1.0 - m,
            p: 2.0 * m - 1.0,
            q: -m,
        },
        JacobiKind::Dn => JacobiOdeParams {
            r: m - 1.0,
            p: 2.0 - m,
            q: -1.0,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectAnsatz {
    pub kind: JacobiKind,
    pub alpha: f64,
    pub beta: f64,
    pub m: EllipticParameter,
}

impl DirectAnsatz {
    pub fn new(kind: JacobiKind, alpha: f64, beta: f64, m: f64) -> Result<Self> {
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power β must be nonzero, got {beta}"
            )));
        }
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "amplitude α must be nonzero, got {alpha}"
            )));
        }
        Ok(DirectAnsatz {
            kind,
            alpha,
            beta,
            m: EllipticParameter::new(m)?,
        })
    }

    /// Exponents of the five `F` slots in table order.
    pub fn exponents(&self) -> [f64; 5] {
        let b = self.beta;
        [
            1.0 + 4.0 / b,
            1.0 + 2.0 / b,
            1.0 - 4.0 / b,
            1.0 - 2.0 / b,
            1.0,
        ]
    }
}

/// Where the coefficients of `F` come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableSource {
    /// The published tables, verbatim.
    Tabulated,
    /// Recomputed from the Jacobi ODE.
    Recomputed,
}

/// Fifth primed coefficient convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FifthVariant {
    /// `−μ²λ²c₅ + μ²(λ² − μ²)`, as tabulated.
    Tabulated,
    /// `−μ²λ²c₅ + (λ² − μ²)/μ²`, from solving for `f`.
    Inverted,
}

impl FifthVariant {
    pub fn name(self) -> &'static str {
        match self {
            FifthVariant::Tabulated => "tabulated",
            FifthVariant::Inverted => "inverted",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub exponents: [f64; 5],
    /// `c₁..c₅` of `F`.
    pub unprimed: [f64; 5],
    /// `c'₁..c'₅` of `f`, empty until [`direct_f`] fills them.
    pub primed: Option<[f64; 5]>,
    pub variant: Option<FifthVariant>,
    pub source: TableSource,
}

impl CoefficientSet {
    /// `F(h)` as a nonlinearity.
    pub fn f_big(&self) -> NonlinearitySpec {
        NonlinearitySpec {
            terms: self.unprimed.iter().copied().zip(self.exponents).collect(),
        }
    }

    /// `f(h)` as a nonlinearity; errors if the primes are missing.
    pub fn f_small(&self) -> Result<NonlinearitySpec> {
        let p = self
            .primed
            .ok_or_else(|| Error::InvalidParameter("primed coefficients not computed".into()))?;
        Ok(NonlinearitySpec {
            terms: p.iter().copied().zip(self.exponents).collect(),
        })
    }
}

/// `α^e`, requiring `α > 0` unless `e` is an integer.
fn alpha_pow(alpha: f64, e: f64) -> Result<f64> {
    if alpha > 0.0 || e == e.round() {
        Ok(alpha.powf(e))
    } else {
        Err(Error::Domain(format!(
            "α^{e} needs α > 0 for a non-integer exponent (α = {alpha})"
        )))
    }
}

/// The five coefficients of `F` for `ansatz` and `b`.
pub fn direct_coefficients(
    ansatz: &DirectAnsatz,
    b: f64,
    source: TableSource,
) -> Result<CoefficientSet> {
    let be = ansatz.beta;
    let a4n = alpha_pow(ansatz.alpha, -4.0 / be)?;
    let a2n = alpha_pow(ansatz.alpha, -2.0 / be)?;
    let a4 = alpha_pow(ansatz.alpha, 4.0 / be)?;
    let a2 = alpha_pow(ansatz.alpha, 2.0 / be)?;
    let m = ansatz.m.value();
    let unprimed = match source {
        TableSource::Tabulated => match ansatz.kind {
            JacobiKind::Sn => sn_table(be, m, b, [a4n, a2n, a4, a2]),
            JacobiKind::Cn => cn_table(be, m, b, [a4n, a2n, a4, a2]),
            JacobiKind::Dn => {
                if m == 0.0 {
                    return Err(Error::Domain("dn table is singular at m = 0".into()));
                }
                dn_table(be, m, b, [a4n, a2n, a4, a2])
            }
        },
        TableSource::Recomputed => recomputed(
            jacobi_ode_params(ansatz.kind, ansatz.m),
            be,
            b,
            [a4n, a2n, a4, a2],
        ),
    };
    Ok(CoefficientSet {
        exponents: ansatz.exponents(),
        unprimed,
        primed: None,
        variant: None,
        source,
    })
}

fn sn_table(be: f64, m: f64, b: f64, [a4n, a2n, a4, a2]: [f64; 4]) -> [f64; 5] {
    let (b2, b3, b4) = (be * be, be.powi(3), be.powi(4));
    let (m2, m3, m4) = (m * m, m.powi(3), m.powi(4));
    let c1 = -a4n * (b4 * m4 + (6.0 * b3 + 8.0 * b2 + 4.0 * be) * m3 + (3.0 * b2 + 2.0 * be) * m2);
    let c2 = a2n
        * ((2.0 * b4 - 6.0 * b3 + 8.0 * b2 - 4.0 * be) * m4
            + (12.0 * b3 - 6.0 * b2 + 8.0 * be) * m3
            + (2.0 * b4 + (6.0 - b) * b2) * m2
            + (6.0 * b3 + 8.0 * b2 + (4.0 - b) * be) * m);
    let c3 = -a4 * b4 + 6.0 * a4 * b3 - 11.0 * a4 * b2 + 6.0 * a4 * be;
    let c4 = (2.0 * a2 * b4 - 12.0 * a2 * b3 + 22.0 * a2 * b2 - 12.0 * a2 * be) * m2
        + (a2 * b - 4.0 * a2 * be + 2.0 * a2 * b4 - 6.0 * a2 * b3 + (8.0 * a2 - a2 * b) * b2)
        + (6.0 * a2 * b3 - 14.0 * a2 * b2 + 8.0 * a2 * be) * m;
    let c5 = (-b4 + 6.0 * b3 - 11.0 * b2 + 6.0 * be) * m4
        + (-6.0 * b3 + 14.0 * b2 - 8.0 * be) * m3
        + (-4.0 * b4 + 12.0 * b3 + (b - 19.0) * b2 + (10.0 - b) * be) * m2
        + (-12.0 * b3 + 6.0 * b2 + (b - 8.0) * be) * m
        - b4
        + b * b2;
    [c1, c2, c3, c4, c5]
}

fn cn_table(be: f64, m: f64, b: f64, [a4n, a2n, a4, a2]: [f64; 4]) -> [f64; 5] {
    let (b2, b3) = (be * be, be.powi(3));
    let (m2, m3, m4) = (m * m, m.powi(3), m.powi(4));
    let c1 = a4n * be * m2 * (b3 * m2 + 6.0 * b2 * m + 8.0 * be * m + 4.0 * m + 3.0 * be + 2.0);
    let c2 = -a2n
        * be
        * m
        * (4.0 * b3 * m3 - 6.0 * b2 * m3 + 8.0 * be * m3 - 4.0 * m3
            + 18.0 * b2 * m2
            + b
            + 2.0 * be * m2
            + 12.0 * m2
            - 2.0 * b3 * m
            + b * be * m
            + 6.0 * be * m
            - 6.0 * b2
            - 8.0 * be
            - 4.0);
    let mm = (m - 1.0) * (m + 1.0);
    let c3 = a4 * (be - 3.0) * (be - 2.0) * (be - 1.0) * be * mm * mm;
    let c4 = -a2
        * (be - 1.0)
        * be
        * mm
        * (4.0 * b2 * m2 - 14.0 * be * m2 + 16.0 * m2 + 6.0 * be * m - 8.0 * m - 2.0 * b2
            + 4.0 * be
            + b
            - 4.0);
    let c5 = be
        * (6.0 * b3 * m4 - 18.0 * b2 * m4 + 27.0 * be * m4 - 14.0 * m4 + 18.0 * b2 * m3
            - 20.0 * be * m3
            + 16.0 * m3
            - 6.0 * b3 * m2
            + 12.0 * b2 * m2
            + 2.0 * b * be * m2
            - 13.0 * be * m2
            - b * m2
            + 6.0 * m2
            - 12.0 * b2 * m
            + 6.0 * be * m
            + b * m
            - 8.0 * m
            + b3
            - b * be);
    [c1, c2, c3, c4, c5]
}

fn dn_table(be: f64, m: f64, b: f64, [a4n, a2n, a4, a2]: [f64; 4]) -> [f64; 5] {
    let (b2, b3) = (be * be, be.powi(3));
    let (m2, m3, m4, m5, m6) = (m * m, m.powi(3), m.powi(4), m.powi(5), m.powi(6));
    let mi4 = 1.0 / m4;
    let c1 = -a4n
        * mi4
        * be
        * (8.0 * m3 + 28.0 * be * m2 - 12.0 * m2 + 12.0 * b2 * m - 28.0 * be * m + 16.0 * m + b3
            - 6.0 * b2
            + 11.0 * be
            - 6.0);
    let c2 = -a2n
        * mi4
        * be
        * (4.0 * m5 + 28.0 * be * m4 - 12.0 * m4 + 18.0 * b2 * m3 - 42.0 * be * m3 - 2.0 * b * m3
            + 16.0 * m3
            + 2.0 * b3 * m2
            - 12.0 * b2 * m2
            - b * be * m2
            - 34.0 * be * m2
            + b * m2
            + 12.0 * m2
            - 36.0 * b2 * m
            + 84.0 * be * m
            - 48.0 * m
            - 4.0 * b3
            + 24.0 * b2
            - 44.0 * be
            + 24.0);
    let mm = (m - 1.0) * (m + 1.0);
    let c3 = -a4 * mi4 * (be - 3.0) * (be - 2.0) * (be - 1.0) * be * mm * mm;
    let c4 = a2
        * mi4
        * (be - 1.0)
        * be
        * mm
        * (6.0 * be * m3 - 8.0 * m3 + 2.0 * b2 * m2 - 10.0 * be * m2 - b * m2 + 12.0 * m2
            - 12.0 * be * m
            + 16.0 * m
            - 4.0 * b2
            + 20.0 * be
            - 24.0);
    let c5 = -be
        * (3.0 * be * m6 - 2.0 * m6 + 6.0 * b2 * m5 - 14.0 * be * m5 - b * m5 + 8.0 * m5 + b3 * m4
            - 6.0 * b2 * m4
            - b * be * m4
            - 17.0 * be * m4
            + b * m4
            + 6.0 * m4
            - 36.0 * b2 * m3
            + 84.0 * be * m3
            + 2.0 * b * m3
            - 48.0 * m3
            - 6.0 * b3 * m2
            + 36.0 * b2 * m2
            + 2.0 * b * be * m2
            - 38.0 * be * m2
            - 2.0 * b * m2
            + 24.0 * m2
            + 36.0 * b2 * m
            - 84.0 * be * m
            + 48.0 * m
            + 6.0 * b3
            - 36.0 * b2
            + 66.0 * be
            - 36.0)
        * mi4;
    [c1, c2, c3, c4, c5]
}

// With H'' = pH + 2qH³, the operator D² sends H^γ to
// γ(γ−1)r·H^{γ−2} + γ²p·H^γ + γ(γ+1)q·H^{γ+2}; apply it twice to H^β.
fn recomputed(
    JacobiOdeParams { r, p, q }: JacobiOdeParams,
    be: f64,
    b: f64,
    [a4n, a2n, a4, a2]: [f64; 4],
) -> [f64; 5] {
    let b2 = be * be;
    let up4 = be * (be + 1.0) * (be + 2.0) * (be + 3.0) * q * q;
    let up2 = be * (be + 1.0) * p * q * (2.0 * b2 + 4.0 * be + 4.0);
    let dn4 = be * (be - 1.0) * (be - 2.0) * (be - 3.0) * r * r;
    let dn2 = be * (be - 1.0) * r * p * (2.0 * b2 - 4.0 * be + 4.0);
    let mid = be * (be - 1.0) * (be - 1.0) * (be - 2.0) * r * q
        + b2 * b2 * p * p
        + be * (be + 1.0) * (be + 1.0) * (be + 2.0) * r * q;
    let d_up = be * (be + 1.0) * q;
    let d_dn = be * (be - 1.0) * r;
    let d_mid = b2 * p;
    [
        -a4n * up4,
        -a2n * (up2 + b * d_up),
        -a4 * dn4,
        -a2 * (dn2 + b * d_dn),
        -(mid + b * d_mid),
    ]
}

/// Both fifth-coefficient conventions of `f(h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectF {
    pub tabulated: CoefficientSet,
    pub inverted: CoefficientSet,
}

impl DirectF {
    pub fn get(&self, v: FifthVariant) -> &CoefficientSet {
        match v {
            FifthVariant::Tabulated => &self.tabulated,
            FifthVariant::Inverted => &self.inverted,
        }
    }
}

/// `b = (μ²c − λ²)/(μ²λ²)`.
pub fn b_of(frame: &WaveFrame, c: f64) -> Result<f64> {
    let (l2, m2) = (frame.lambda.powi(2), frame.mu.powi(2));
    if l2 == 0.0 {
        return Err(Error::InvalidParameter("λ must be nonzero".into()));
    }
    Ok((m2 * c - l2) / (m2 * l2))
}

/// The nonlinearity `f` that the ansatz solves, in both conventions.
pub fn direct_f(
    ansatz: &DirectAnsatz,
    frame: &WaveFrame,
    c: f64,
    source: TableSource,
) -> Result<DirectF> {
    let b = b_of(frame, c)?;
    let base = direct_coefficients(ansatz, b, source)?;
    let (l2, m2) = (frame.lambda.powi(2), frame.mu.powi(2));
    let mut primed = base.unprimed.map(|ci| -m2 * l2 * ci);
    let fifth = primed[4];
    let mut tabulated = base.clone();
    primed[4] = fifth + m2 * (l2 - m2);
    tabulated.primed = Some(primed);
    tabulated.variant = Some(FifthVariant::Tabulated);
    let mut inverted = base;
    primed[4] = fifth + (l2 - m2) / m2;
    inverted.primed = Some(primed);
    inverted.variant = Some(FifthVariant::Inverted);
    Ok(DirectF {
        tabulated,
        inverted,
    })
}

/// `h(z) = α·H^β(z | m)`.
#[derive(Clone, Copy, Debug)]
pub struct DirectProfile(pub DirectAnsatz);

impl Profile for DirectProfile {
    fn eval(&self, z: &Jet) -> Result<Jet> {
        let a = self.0;
        let (s, c, d) = jacobi_jet(z, a.m);
        let h = match a.kind {
            JacobiKind::Sn => s,
            JacobiKind::Cn => c,
            JacobiKind::Dn => d,
        };
        Ok(h.powf(a.beta)? * a.alpha)
    }
}

/// `u(x, t) = α·H^β(μx − λt | m)`.
pub fn direct_solution(ansatz: DirectAnsatz, frame: WaveFrame) -> TravelingWave<DirectProfile> {
    TravelingWave {
        profile: DirectProfile(ansatz),
        frame,
    }
}

/// Terms of `h'''' + b·h'' + F(h)` at `z`.
pub fn ansatz_residual_terms(
    h: &dyn Profile,
    b: f64,
    coeffs: &CoefficientSet,
    z: f64,
) -> Result<Vec<Term>> {
    const NAMES: [&str; 5] = [
        "c1*h^(1+4/b)",
        "c2*h^(1+2/b)",
        "c3*h^(1-4/b)",
        "c4*h^(1-2/b)",
        "c5*h",
    ];
    let zj = Jet::variable(z, MAX_NX)?;
    let h = h.eval(&zj)?;
    let hv = h.value();
    let mut out = vec![
        Term {
            name: "h''''",
            value: h.dx_n(4)?.value(),
        },
        Term {
            name: "b*h''",
            value: b * h.dx_n(2)?.value(),
        },
    ];
    for (i, (&ci, &e)) in coeffs.unprimed.iter().zip(&coeffs.exponents).enumerate() {
        if ci == 0.0 {
            continue;
        }
        let v = Jet::constant(hv).powf(e)?.value();
        out.push(Term {
            name: NAMES[i],
            value: ci * v,
        });
    }
    Ok(out)
}

/// A z-interval where `H > 0` and `H` stays away from zero, used to sample
/// the ansatz without crossing singular or complex powers.
pub fn positive_interval(kind: JacobiKind, m: EllipticParameter) -> (f64, f64) {
    match crate::elliptic::complete_k(m) {
        Ok(k) => match kind {
            JacobiKind::Sn => (0.05 * 2.0 * k, 0.95 * 2.0 * k),
            JacobiKind::Cn => (-0.95 * k, 0.95 * k),
            JacobiKind::Dn => (-2.0 * k, 2.0 * k),
        },
        Err(_) => match kind {
            JacobiKind::Sn => (0.05, 8.0),
            JacobiKind::Cn | JacobiKind::Dn => (-8.0, 8.0),
        },
    }
}
