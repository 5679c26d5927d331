//! G'/G-expansion solutions of the quadratic generalized equation.
//!
//! `h = Σ₀⁴ aᵢ (G'/G)ⁱ` with `G'' + αG' + βG = 0`. The sign of `α² − 4β`
//! selects a hyperbolic, trigonometric or rational branch.

use serde::{Deserialize, Serialize};

use crate::equations::{
    reduce, NonlinearitySpec, PdeForm, Profile, ReducedOde, TravelingWave, WaveFrame,
};
use crate::error::{Error, Result};
use crate::jets::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Hyperbolic,
    Trigonometric,
    Rational,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Hyperbolic => "hyperbolic",
            Branch::Trigonometric => "trigonometric",
            Branch::Rational => "rational",
        }
    }

    /// Branch for a discriminant `α² − 4β`, with a relative zero band.
    pub fn classify(alpha: f64, beta: f64) -> Branch {
        let disc = alpha * alpha - 4.0 * beta;
        let scale = (alpha * alpha + 4.0 * beta.abs()).max(1.0);
        if disc.abs() <= 1e-12 * scale {
            Branch::Rational
        } else if disc > 0.0 {
            Branch::Hyperbolic
        } else {
            Branch::Trigonometric
        }
    }
}

/// The algebraic solution `a₀..a₄`, `β` and `B` for given `α`, frame and `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GgCoefficients {
    pub a: [f64; 5],
    pub beta_g: f64,
    pub b_const: f64,
}

pub fn gg_determine(alpha_g: f64, frame: &WaveFrame, c: f64) -> Result<GgCoefficients> {
    let (l, m) = (frame.lambda, frame.mu);
    if l == 0.0 || m == 0.0 {
        return Err(Error::InvalidParameter("λ and μ must be nonzero".into()));
    }
    let al = alpha_g;
    let (l2, m2) = (l * l, m * m);
    let (l4, m4) = (l2 * l2, m2 * m2);
    let (al2, al4) = (al * al, al.powi(4));
    let a0 = (3.0 * (5915.0 * al4 * l4 + 910.0 * c * al2 * l2 + 23.0 * c * c) * m4
        - (169.0 + 6.0 * (455.0 * al2 * l2 + 23.0 * c)) * m2 * l2
        + 238.0 * l4)
        / (338.0 * l2 * m2);
    let a1 = 420.0 / 13.0 * al * ((13.0 * al2 * l2 + c) * m2 - l2);
    let a2 = 420.0 / 13.0 * ((39.0 * al2 * l2 + c) * m2 - l2);
    let a3 = 1680.0 * al * l2 * m2;
    let a4 = 840.0 * l2 * m2;
    let beta_g = (13.0 * al2 * m2 * l2 - l2 + c * m2) / (52.0 * l2 * m2);
    let b_const = (-133.0 * l4 - (72.0 * c - 169.0) * m2 * l2 + 36.0 * c * c * m4)
        * (205.0 * l4 - (72.0 * c + 169.0) * m2 * l2 + 36.0 * c * c * m4)
        / (114244.0 * l4 * m2);
    Ok(GgCoefficients {
        a: [a0, a1, a2, a3, a4],
        beta_g,
        b_const,
    })
}

/// How the profile is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GgPath {
    /// Polynomial in the branch kernel `H₁`, `H₂` or `c₁/(c₁z + c₂)`.
    ClosedForm,
    /// `Σ aᵢ(G'/G)ⁱ` with `G` built from the linear ODE's general solution.
    Expansion,
}

/// Which trigonometric closed form to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigClosedForm {
    /// Derived from `G'/G = −α/2 − (√(4β − α²)/2)·H₂`.
    Derived,
    /// The published polynomial in `H₂`, which pairs the `H₂` and `H₂³`
    /// coefficients differently.
    Tabulated,
}

/// `h(z)` for arbitrary `a₀..a₄`, `α`, `β`, `c₁`, `c₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GgProfile {
    pub a: [f64; 5],
    pub alpha: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub branch: Branch,
    pub path: GgPath,
    pub trig_form: TrigClosedForm,
}

/// Builds the profile with the branch picked from `α² − 4β`.
pub fn gg_h(a: [f64; 5], alpha: f64, beta: f64, c1: f64, c2: f64) -> GgProfile {
    GgProfile {
        a,
        alpha,
        beta,
        c1,
        c2,
        branch: Branch::classify(alpha, beta),
        path: GgPath::ClosedForm,
        trig_form: TrigClosedForm::Derived,
    }
}

impl GgProfile {
    pub fn with_path(mut self, path: GgPath) -> Self {
        self.path = path;
        self
    }

    pub fn with_trig_form(mut self, form: TrigClosedForm) -> Self {
        self.trig_form = form;
        self
    }

    /// `a₄α⁴/16 − a₃α³/8 + a₂α²/4 − a₁α/2 + a₀`.
    pub fn constant_part(&self) -> f64 {
        let [a0, a1, a2, a3, a4] = self.a;
        let al = self.alpha;
        a4 * al.powi(4) / 16.0 - a3 * al.powi(3) / 8.0 + a2 * al * al / 4.0 - a1 * al / 2.0 + a0
    }

    fn shared_coefficients(&self) -> (f64, f64, f64, f64) {
        let [_, a1, a2, a3, a4] = self.a;
        let al = self.alpha;
        (
            -2.0 * a4 * al.powi(3) + 3.0 * a3 * al * al - 4.0 * a2 * al + 4.0 * a1,
            3.0 * a4 * al * al - 3.0 * a3 * al + 2.0 * a2,
            a3 - 2.0 * a4 * al,
            a4,
        )
    }

    fn closed_form(&self, z: &Jet) -> Result<Jet> {
        let (k1, k2, k3, k4) = self.shared_coefficients();
        let c0 = self.constant_part();
        let (c1, c2, al, be) = (self.c1, self.c2, self.alpha, self.beta);
        let poly = |h: Jet, co: [f64; 4]| {
            let h2 = h * h;
            h * co[0] + h2 * co[1] + h2 * h * co[2] + h2 * h2 * co[3] + c0
        };
        match self.branch {
            Branch::Hyperbolic => {
                let d = al * al - 4.0 * be;
                let s = d.sqrt();
                let w = *z * (s / 2.0);
                let (ch, sh) = (w.cosh(), w.sinh());
                let h1 = (ch * c2 + sh * c1).div(&(ch * c1 + sh * c2))?;
                Ok(poly(
                    h1,
                    [
                        s / 8.0 * k1,
                        d / 8.0 * k2,
                        d * s / 8.0 * k3,
                        d * d / 16.0 * k4,
                    ],
                ))
            }
            Branch::Trigonometric => {
                let d = 4.0 * be - al * al;
                let s = d.sqrt();
                let w = *z * (s / 2.0);
                let (co, si) = (w.cos(), w.sin());
                let h2 = (co * c2 + si * c1).div(&(co * c1 - si * c2))?;
                let co4 = match self.trig_form {
                    TrigClosedForm::Derived => [
                        -s / 8.0 * k1,
                        d / 8.0 * k2,
                        -d * s / 8.0 * k3,
                        d * d / 16.0 * k4,
                    ],
                    TrigClosedForm::Tabulated => {
                        let [_, _, _, a3, a4] = self.a;
                        [
                            (a3 + 2.0 * a4 * al) / 8.0 * d * s,
                            d / 8.0 * k2,
                            s / 8.0 * k1,
                            d * d / 16.0 * k4,
                        ]
                    }
                };
                Ok(poly(h2, co4))
            }
            Branch::Rational => {
                let r = Jet::constant(c1).div(&(*z * c1 + c2))?;
                Ok(poly(r, [k1 / 4.0, k2 / 2.0, k3, k4]))
            }
        }
    }

    /// `G` and `G'` from the general solution of the linear ODE, with the
    /// constants arranged so both paths share `c₁`, `c₂`.
    fn g_and_derivative(&self, z: &Jet) -> Result<(Jet, Jet)> {
        let (c1, c2, al, be) = (self.c1, self.c2, self.alpha, self.beta);
        // ch(αz/2) − sh(αz/2)
        let decay = (*z * (-al / 2.0)).exp();
        Ok(match self.branch {
            Branch::Hyperbolic => {
                let s = (al * al - 4.0 * be).sqrt();
                let (k1, k2) = (0.5 * (c1 + c2), 0.5 * (c1 - c2));
                let (r1, r2) = (al / 2.0 - s / 2.0, al / 2.0 + s / 2.0);
                let e1 = (*z * -r1).exp();
                let e2 = (*z * -r2).exp();
                (e1 * k1 + e2 * k2, e1 * (-r1 * k1) + e2 * (-r2 * k2))
            }
            Branch::Trigonometric => {
                let w = (4.0 * be - al * al).sqrt() / 2.0;
                let (k1, k2) = (c2, -c1);
                let arg = *z * w;
                let (co, si) = (arg.cos(), arg.sin());
                let osc = co * k2 + si * k1;
                let dosc = si * (-w * k2) + co * (w * k1);
                (osc * decay, (dosc - osc * (al / 2.0)) * decay)
            }
            Branch::Rational => {
                let lin = *z * c1 + c2;
                (lin * decay, (Jet::constant(c1) - lin * (al / 2.0)) * decay)
            }
        })
    }

    fn expansion(&self, z: &Jet) -> Result<Jet> {
        let (g, gp) = self.g_and_derivative(z)?;
        let phi = gp.div(&g)?;
        let mut acc = Jet::constant(self.a[4]);
        for i in (0..4).rev() {
            acc = acc * phi + self.a[i];
        }
        Ok(acc)
    }
}

impl Profile for GgProfile {
    fn eval(&self, z: &Jet) -> Result<Jet> {
        match self.path {
            GgPath::ClosedForm => self.closed_form(z),
            GgPath::Expansion => self.expansion(z),
        }
    }
}

/// A fully determined G'/G solution of the quadratic generalized equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GGSolution {
    pub a: [f64; 5],
    pub alpha_g: f64,
    pub beta_g: f64,
    pub b_const: f64,
    pub c1: f64,
    pub c2: f64,
    pub frame: WaveFrame,
    pub c: f64,
    pub branch: Branch,
}

impl GGSolution {
    pub fn new(alpha_g: f64, frame: WaveFrame, c: f64, c1: f64, c2: f64) -> Result<Self> {
        let co = gg_determine(alpha_g, &frame, c)?;
        if co.a[4] == 0.0 {
            return Err(Error::InvalidParameter("a₄ must be nonzero".into()));
        }
        Ok(GGSolution {
            a: co.a,
            alpha_g,
            beta_g: co.beta_g,
            b_const: co.b_const,
            c1,
            c2,
            frame,
            c,
            branch: Branch::classify(alpha_g, co.beta_g),
        })
    }

    pub fn profile(&self) -> GgProfile {
        gg_h(self.a, self.alpha_g, self.beta_g, self.c1, self.c2)
    }

    pub fn field(&self) -> TravelingWave<GgProfile> {
        TravelingWave {
            profile: self.profile(),
            frame: self.frame,
        }
    }

    /// The reduced ODE with `A = 0` and the determined `B`.
    pub fn ode(&self) -> Result<ReducedOde> {
        let form = PdeForm::Generalized {
            c: self.c,
            f: NonlinearitySpec::quadratic(),
        };
        reduce(&form, self.frame, 0.0, self.b_const)
    }
}

/// The three published closed forms, which take `α = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrintedKind {
    U1,
    U2,
    U3,
}

impl PrintedKind {
    pub fn name(self) -> &'static str {
        match self {
            PrintedKind::U1 => "u1",
            PrintedKind::U2 => "u2",
            PrintedKind::U3 => "u3",
        }
    }

    /// The form whose branch condition `(c, λ, μ)` satisfies.
    pub fn for_parameters(frame: &WaveFrame, c: f64) -> PrintedKind {
        match Branch::classify(0.0, gg_beta_at_zero_alpha(frame, c)) {
            Branch::Hyperbolic => PrintedKind::U1,
            Branch::Trigonometric => PrintedKind::U2,
            Branch::Rational => PrintedKind::U3,
        }
    }
}

fn gg_beta_at_zero_alpha(frame: &WaveFrame, c: f64) -> f64 {
    let (l2, m2) = (frame.lambda.powi(2), frame.mu.powi(2));
    (c * m2 - l2) / (52.0 * l2 * m2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrintedGg {
    pub kind: PrintedKind,
    pub frame: WaveFrame,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Checks the branch condition of a printed solution.
pub fn gg_solution(
    kind: PrintedKind,
    frame: WaveFrame,
    c: f64,
    c1: f64,
    c2: f64,
) -> Result<PrintedGg> {
    if frame.lambda == 0.0 {
        return Err(Error::InvalidParameter("λ must be nonzero".into()));
    }
    let want = PrintedKind::for_parameters(&frame, c);
    if want != kind {
        return Err(Error::Branch(format!(
            "{} does not apply for c={c}, λ={}, μ={}; the branch condition selects {}",
            kind.name(),
            frame.lambda,
            frame.mu,
            want.name()
        )));
    }
    Ok(PrintedGg {
        kind,
        frame,
        c,
        c1,
        c2,
    })
}

impl PrintedGg {
    pub fn field(&self) -> TravelingWave<PrintedGg> {
        TravelingWave {
            profile: *self,
            frame: self.frame,
        }
    }

    fn constant_part(&self) -> f64 {
        let (l2, m2, c) = (self.frame.lambda.powi(2), self.frame.mu.powi(2), self.c);
        69.0 * c * c * m2 / (338.0 * l2) - 69.0 * c / 169.0 + 119.0 * l2 / (169.0 * m2) - 0.5
    }
}

impl Profile for PrintedGg {
    fn eval(&self, z: &Jet) -> Result<Jet> {
        let (l2, m2, c) = (self.frame.lambda.powi(2), self.frame.mu.powi(2), self.c);
        let (c1, c2) = (self.c1, self.c2);
        let k = (c * m2 - l2).powi(2) / (l2 * m2);
        let c0 = self.constant_part();
        Ok(match self.kind {
            PrintedKind::U1 => {
                let w = 0.5 * ((-c / l2 + 1.0 / m2) / 13.0).sqrt();
                let arg = *z * w;
                let (ch, sh) = (arg.cosh(), arg.sinh());
                let f = (ch * c2 + sh * c1).div(&(ch * c1 + sh * c2))?;
                let f2 = f * f;
                f2 * f2 * (215040.0 / 169.0 * k) - f2 * (6720.0 / 169.0 * k) + c0
            }
            PrintedKind::U2 => {
                let w = (c / l2 - 1.0 / m2).sqrt() / (2.0 * 13f64.sqrt());
                let arg = *z * w;
                let (co, si) = (arg.cos(), arg.sin());
                let f = -(co * c2 + si * c1).div(&(si * c2 - co * c1))?;
                let f2 = f * f;
                f2 * f2 * (105.0 / 338.0 * k) + f2 * (105.0 / 169.0 * k) + c0
            }
            PrintedKind::U3 => {
                let den = *z * c1 + c2;
                let d2 = den * den;
                let first = Jet::constant(840.0 * l2 * m2 * c1.powi(4)).div(&(d2 * d2))?;
                let second = Jet::constant(420.0 * (l2 - c * m2) * c1 * c1 / 13.0).div(&d2)?;
                first - second + c0
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{ode_residual, Field};

    #[test]
    fn determine_structure() {
        for (l, m) in [(1.0, 1.0), (0.4, 1.7), (2.0, 0.3)] {
            let f = WaveFrame::new(l, m).unwrap();
            let co = gg_determine(0.7, &f, 1.3).unwrap();
            assert!((co.a[4] / (840.0 * l * l * m * m) - 1.0).abs() < 1e-15);
            assert_eq!(co.a[3] / co.a[4], 2.0 * 0.7);
            let z = gg_determine(0.0, &f, 1.3).unwrap();
            assert_eq!((z.a[1], z.a[3]), (0.0, 0.0));
        }
        let unit = gg_determine(0.0, &WaveFrame::new(1.0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(unit.beta_g, 0.0);
        assert!(gg_determine(0.1, &WaveFrame::new(0.0, 1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn rational_branch_with_zero_c1_is_constant() {
        let a = [0.3, -0.2, 0.5, 0.1, 0.7];
        let al = 0.8;
        let p = gg_h(a, al, al * al / 4.0, 0.0, 1.0);
        assert_eq!(p.branch, Branch::Rational);
        let expect = a[4] * al.powi(4) / 16.0 - a[3] * al.powi(3) / 8.0 + a[2] * al * al / 4.0
            - a[1] * al / 2.0
            + a[0];
        for z in [-2.0, 0.5, 3.0] {
            assert!((p.sample(z).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn hyperbolic_kernel_reduces_to_tanh() {
        let (al, be) = (0.6, -0.5);
        let p = gg_h([0.0, 1.0, 0.0, 0.0, 0.0], al, be, 1.0, 0.0);
        assert_eq!(p.branch, Branch::Hyperbolic);
        let s = (al * al - 4.0 * be).sqrt();
        for z in [-1.0, 0.2, 2.5] {
            // with a = e₁ the profile is −α/2 + (s/2)·H₁
            let h1 = (p.sample(z).unwrap() + al / 2.0) / (s / 2.0);
            assert!((h1 - (s * z / 2.0).tanh()).abs() < 1e-14);
        }
    }

    #[test]
    fn dual_paths_agree_per_branch() {
        let a = [0.4, -1.1, 0.9, 0.3, -0.6];
        for (al, be) in [(0.7, -0.3), (0.5, 0.9), (1.2, 0.36)] {
            let p = gg_h(a, al, be, 1.3, 0.4);
            let e = p.with_path(GgPath::Expansion);
            for z in [-2.1, -0.3, 0.6, 1.7] {
                let (x, y) = (p.sample(z).unwrap(), e.sample(z).unwrap());
                assert!(
                    (x - y).abs() < 1e-10 * (1.0 + x.abs()),
                    "{:?} z={z}: {x} vs {y}",
                    p.branch
                );
            }
        }
    }

    #[test]
    fn tabulated_trig_form_differs_from_expansion() {
        let a = [0.4, -1.1, 0.9, 0.3, -0.6];
        let p = gg_h(a, 0.5, 0.9, 1.3, 0.4).with_trig_form(TrigClosedForm::Tabulated);
        let e = p.with_path(GgPath::Expansion);
        assert!((p.sample(0.6).unwrap() - e.sample(0.6).unwrap()).abs() > 1e-3);
    }

    #[test]
    fn determined_solutions_solve_reduced_ode() {
        for (al, c, frame) in [
            (0.3, 0.5, WaveFrame::new(1.0, 1.0).unwrap()),
            (0.2, 2.0, WaveFrame::new(1.0, 1.0).unwrap()),
            (0.0, 1.0, WaveFrame::new(1.0, 1.0).unwrap()),
            (0.1, 1.4, WaveFrame::new(0.8, 1.2).unwrap()),
        ] {
            let sol = GGSolution::new(al, frame, c, 1.0, 0.3).unwrap();
            let ode = sol.ode().unwrap();
            let prof = sol.profile();
            for z in [-0.7, 0.1, 0.9] {
                let terms = ode.terms(&prof, z).unwrap();
                let scale = terms.iter().map(|t| t.value.abs()).fold(0.0, f64::max);
                let r = ode_residual(&ode, &prof, z).unwrap();
                assert!(r.abs() < 1e-10 * scale, "{:?}: {r} / {scale}", sol.branch);
            }
        }
    }

    #[test]
    fn printed_u3_at_unit_parameters() {
        let f = WaveFrame::new(1.0, 1.0).unwrap();
        let u = gg_solution(PrintedKind::U3, f, 1.0, 1.0, 0.0)
            .unwrap()
            .field();
        for (x, t) in [(2.0, 0.5), (-1.0, 1.0)] {
            let expect = 840.0 / f64::powi(x - t, 4);
            assert!((u.sample(x, t).unwrap() - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn branch_errors() {
        let f = WaveFrame::new(1.0, 1.0).unwrap();
        let e = gg_solution(PrintedKind::U1, f, 1.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::Branch(ref s) if s.contains("u3")));
        assert!(gg_solution(PrintedKind::U2, f, 0.5, 1.0, 0.0).is_err());
        assert!(gg_solution(PrintedKind::U1, f, 0.5, 1.0, 0.0).is_ok());
        assert!(gg_solution(PrintedKind::U2, f, 2.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn printed_u1_quartic_coefficient_is_off() {
        // at α = 0, the expansion gives a₄s⁴/16 for the H₁⁴ coefficient
        let f = WaveFrame::new(1.0, 1.0).unwrap();
        let sol = GGSolution::new(0.0, f, 0.5, 1.0, 0.0).unwrap();
        let printed = gg_solution(PrintedKind::U1, f, 0.5, 1.0, 0.0).unwrap();
        let z = 3.0;
        let a = sol.profile().sample(z).unwrap();
        let b = printed.sample(z).unwrap();
        assert!((a - b).abs() > 1.0);
    }
}
