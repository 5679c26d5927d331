//! Closed-form traveling-wave solutions and the equations they are claimed
//! to solve.

mod direct;
mod gg;

pub use direct::{
    ansatz_residual_terms, b_of, direct_coefficients, direct_f, direct_solution, jacobi_ode_params,
    positive_interval, CoefficientSet, DirectAnsatz, DirectF, DirectProfile, FifthVariant,
    JacobiKind, JacobiOdeParams, TableSource,
};
pub use gg::{
    gg_determine, gg_h, gg_solution, Branch, GGSolution, GgCoefficients, GgPath, GgProfile,
    PrintedGg, PrintedKind, TrigClosedForm,
};

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use crate::equations::{
    reduce, Field, NonlinearitySpec, PdeForm, Profile, ReducedOde, TravelingWave, WaveFrame,
};
use crate::error::{Error, Result};
use crate::jets::Jet;

/// Open interval of `z` on which a solution is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZDomain {
    pub lo: f64,
    pub hi: f64,
}

impl ZDomain {
    pub const ALL: ZDomain = ZDomain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, z: f64) -> bool {
        z > self.lo && z < self.hi
    }

    /// `(−half, half)` shrunk by `1e−3` of its width on each side.
    fn support_interior(half: f64) -> ZDomain {
        let margin = 1e-3 * 2.0 * half;
        ZDomain {
            lo: -half + margin,
            hi: half - margin,
        }
    }
}

/// What a solution is claimed to solve.
#[derive(Clone, Debug, PartialEq)]
pub enum Binding {
    Pde(PdeForm),
    Ode(ReducedOde),
}

/// A catalog solution with its parameters.
#[derive(Clone)]
pub struct NamedSolution {
    pub id: String,
    pub description: &'static str,
    pub profile: Arc<dyn Profile>,
    pub frame: WaveFrame,
    pub binding: Binding,
    pub domain: ZDomain,
    pub params: BTreeMap<String, f64>,
}

impl NamedSolution {
    pub fn field(&self) -> TravelingWave<Arc<dyn Profile>> {
        TravelingWave {
            profile: self.profile.clone(),
            frame: self.frame,
        }
    }

    /// Pointwise value; zero outside a compact support, error elsewhere
    /// outside the domain.
    pub fn sample(&self, x: f64, t: f64) -> Result<f64> {
        self.field().sample(x, t)
    }
}

/// Zero outside `|z| ≤ half`.
struct Compact<P> {
    inner: P,
    half: f64,
}

impl<P: Profile> Profile for Compact<P> {
    fn eval(&self, z: &Jet) -> Result<Jet> {
        if z.value().abs() <= self.half {
            self.inner.eval(z)
        } else {
            Ok(Jet::constant(0.0))
        }
    }
}

/// Catalog entry summary for listings.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub params: &'static [&'static str],
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        id: "compacton_sin2",
        description: "sn family at m=0: sin² compacton with two peaks",
        params: &["c"],
    },
    CatalogEntry {
        id: "kink",
        description: "sn family at m=1, β=1: (1/4)·tanh(x − t/2)",
        params: &["c"],
    },
    CatalogEntry {
        id: "antikink",
        description: "sn family at m=1, β=3: tanh³(x − t/2)",
        params: &["c"],
    },
    CatalogEntry {
        id: "compacton_cos2",
        description: "cn family at m=0: cos² compacton with one peak",
        params: &["c"],
    },
    CatalogEntry {
        id: "soliton_sech2",
        description: "dn family at m=1: sech²(x − t)",
        params: &["c"],
    },
    CatalogEntry {
        id: "assigned_soliton",
        description: "2k²·sech²(k(x − vt)), v² = 1 + 4k², for the assigned equation",
        params: &["k"],
    },
    CatalogEntry {
        id: "gg_u1",
        description: "G'/G hyperbolic solution, published form",
        params: &["c", "lambda", "mu", "c1", "c2"],
    },
    CatalogEntry {
        id: "gg_u2",
        description: "G'/G trigonometric solution, published form",
        params: &["c", "lambda", "mu", "c1", "c2"],
    },
    CatalogEntry {
        id: "gg_u3",
        description: "G'/G rational solution, published form",
        params: &["c", "lambda", "mu", "c1", "c2"],
    },
    CatalogEntry {
        id: "direct_sn",
        description: "α·sn^β(μx − λt | m) with the tabulated nonlinearity",
        params: &["alpha", "beta", "m", "lambda", "mu", "c"],
    },
    CatalogEntry {
        id: "direct_cn",
        description: "α·cn^β(μx − λt | m) with the tabulated nonlinearity",
        params: &["alpha", "beta", "m", "lambda", "mu", "c"],
    },
    CatalogEntry {
        id: "direct_dn",
        description: "α·dn^β(μx − λt | m) with the tabulated nonlinearity",
        params: &["alpha", "beta", "m", "lambda", "mu", "c"],
    },
];

fn entry(id: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(format!("solution '{id}'")))
}

/// Published nonlinearities of the named solutions.
pub fn published_f(id: &str, c: f64) -> Result<NonlinearitySpec> {
    let c2 = c * c;
    let terms = match id {
        "compacton_sin2" => {
            let g = 5.0 / 288.0 * (12.0 * c2 - 17.0);
            vec![(-2.0 * g, 1.0), (g, 0.0)]
        }
        "compacton_cos2" => {
            let g = 5.0 / 288.0 * (12.0 * c2 - 17.0);
            vec![(2.0 * g, 1.0), (-g, 0.0)]
        }
        "kink" => vec![
            (1536.0, 5.0),
            (32.0 * c - 168.0, 3.0),
            (15.0 / 4.0 - 2.0 * c, 1.0),
        ],
        "antikink" => vec![
            (90.0, 7.0 / 3.0),
            (3.0 * (4.0 * c2 - 69.0), 5.0 / 3.0),
            (1.5 * (4.0 * c2 - 21.0), 1.0 / 3.0),
            (-0.75 * (24.0 * c2 - 197.0), -1.0 / 3.0),
        ],
        "soliton_sech2" => vec![
            (120.0, 3.0),
            (-6.0 * (c2 + 19.0), 2.0),
            (4.0 * (c2 + 3.0), 1.0),
        ],
        other => {
            return Err(Error::UnknownId(format!(
                "no published nonlinearity for '{other}'"
            )))
        }
    };
    NonlinearitySpec::new(terms)
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Resolves a catalog id with optional parameter overrides. Missing `c`
/// defaults to 2.
pub fn lookup(id: &str, params: &BTreeMap<String, f64>) -> Result<NamedSolution> {
    let e = entry(id)?;
    for key in params.keys() {
        if !e.params.contains(&key.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "'{id}' takes no parameter '{key}' (accepted: {})",
                e.params.join(", ")
            )));
        }
    }
    let c = param(params, "c", 2.0);
    let mut used = BTreeMap::new();
    let mut record = |k: &str, v: f64| {
        used.insert(k.to_string(), v);
        v
    };
    let (profile, frame, binding, domain): (Arc<dyn Profile>, WaveFrame, Binding, ZDomain) =
        match id {
            "compacton_sin2" | "compacton_cos2" => {
                let c = record("c", c);
                let mu = (5.0f64 / 48.0).sqrt();
                let frame = WaveFrame::new(mu, mu)?;
                let (kind, half) = if id == "compacton_sin2" {
                    (JacobiKind::Sn, PI)
                } else {
                    (JacobiKind::Cn, FRAC_PI_2)
                };
                let inner = DirectProfile(DirectAnsatz::new(kind, 1.0, 2.0, 0.0)?);
                let form = PdeForm::Generalized {
                    c,
                    f: published_f(id, c)?,
                };
                (
                    Arc::new(Compact { inner, half }),
                    frame,
                    Binding::Pde(form),
                    ZDomain::support_interior(half),
                )
            }
            "kink" | "antikink" => {
                let c = record("c", c);
                let frame = WaveFrame::new(0.5, 1.0)?;
                let (alpha, beta, domain) = if id == "kink" {
                    (0.25, 1.0, ZDomain::ALL)
                } else {
                    (
                        1.0,
                        3.0,
                        ZDomain {
                            lo: 1e-2,
                            hi: f64::INFINITY,
                        },
                    )
                };
                let p = DirectProfile(DirectAnsatz::new(JacobiKind::Sn, alpha, beta, 1.0)?);
                let form = PdeForm::Generalized {
                    c,
                    f: published_f(id, c)?,
                };
                (Arc::new(p), frame, Binding::Pde(form), domain)
            }
            "soliton_sech2" => {
                let c = record("c", c);
                let frame = WaveFrame::new(1.0, 1.0)?;
                let p = DirectProfile(DirectAnsatz::new(JacobiKind::Dn, 1.0, 2.0, 1.0)?);
                let form = PdeForm::Generalized {
                    c,
                    f: published_f(id, c)?,
                };
                (Arc::new(p), frame, Binding::Pde(form), ZDomain::ALL)
            }
            "assigned_soliton" => {
                let k = record("k", param(params, "k", 0.25));
                if k == 0.0 || !k.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "soliton k must be nonzero, got {k}"
                    )));
                }
                let frame = WaveFrame::new((1.0 + 4.0 * k * k).sqrt(), 1.0)?;
                let p = AssignedSoliton { k };
                (
                    Arc::new(p),
                    frame,
                    Binding::Pde(PdeForm::Assigned),
                    ZDomain::ALL,
                )
            }
            "gg_u1" | "gg_u2" | "gg_u3" => {
                let (kind, dc, d1, d2) = match id {
                    "gg_u1" => (PrintedKind::U1, 0.5, 1.0, 0.5),
                    "gg_u2" => (PrintedKind::U2, 2.0, 1.0, 0.0),
                    _ => (PrintedKind::U3, 1.0, 1.0, 20.0),
                };
                let c = record("c", param(params, "c", dc));
                let lambda = record("lambda", param(params, "lambda", 1.0));
                let mu = record("mu", param(params, "mu", 1.0));
                let c1 = record("c1", param(params, "c1", d1));
                let c2 = record("c2", param(params, "c2", d2));
                let frame = WaveFrame::new(lambda, mu)?;
                let printed = gg_solution(kind, frame, c, c1, c2)?;
                let co = gg_determine(0.0, &frame, c)?;
                let form = PdeForm::Generalized {
                    c,
                    f: NonlinearitySpec::quadratic(),
                };
                let ode = reduce(&form, frame, 0.0, co.b_const)?;
                (Arc::new(printed), frame, Binding::Ode(ode), ZDomain::ALL)
            }
            _ => {
                let kind = match id {
                    "direct_sn" => JacobiKind::Sn,
                    "direct_cn" => JacobiKind::Cn,
                    _ => JacobiKind::Dn,
                };
                let alpha = record("alpha", param(params, "alpha", 1.0));
                let beta = record("beta", param(params, "beta", 2.0));
                let m = record("m", param(params, "m", 0.7));
                let lambda = record("lambda", param(params, "lambda", 0.6));
                let mu = record("mu", param(params, "mu", 0.8));
                let c = record("c", c);
                let ansatz = DirectAnsatz::new(kind, alpha, beta, m)?;
                let frame = WaveFrame::new(lambda, mu)?;
                let df = direct_f(&ansatz, &frame, c, TableSource::Tabulated)?;
                let form = PdeForm::Generalized {
                    c,
                    f: df.tabulated.f_small()?,
                };
                let (lo, hi) = positive_interval(kind, ansatz.m);
                (
                    Arc::new(DirectProfile(ansatz)),
                    frame,
                    Binding::Pde(form),
                    ZDomain { lo, hi },
                )
            }
        };
    Ok(NamedSolution {
        id: id.to_string(),
        description: e.description,
        profile,
        frame,
        binding,
        domain,
        params: used,
    })
}

/// Shorthand for [`lookup`] without overrides.
pub fn named_solution(id: &str) -> Result<NamedSolution> {
    lookup(id, &BTreeMap::new())
}

/// `h(z) = 2k²·sech²(kz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssignedSoliton {
    pub k: f64,
}

impl AssignedSoliton {
    pub fn amplitude(&self) -> f64 {
        2.0 * self.k * self.k
    }

    pub fn speed(&self) -> f64 {
        (1.0 + 4.0 * self.k * self.k).sqrt()
    }

    pub fn frame(&self) -> WaveFrame {
        WaveFrame {
            lambda: self.speed(),
            mu: 1.0,
        }
    }
}

impl Profile for AssignedSoliton {
    fn eval(&self, z: &Jet) -> Result<Jet> {
        let s = (*z * self.k).sech();
        Ok(s * s * self.amplitude())
    }
}

/// Recovers `(a, v)` for `u = a·sech²(k(x − vt))` by matching coefficients
/// in the reduced assigned ODE. The residual of a trial profile is
/// `c₂·S + c₄·S²` with `S = sech²(kz)`; `c₄/a` is linear in `a` and `c₂/a` is
/// linear in `v²`, so two trial values of each fix the roots.
pub fn fit_sech2_soliton(k: f64) -> Result<(f64, f64)> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("soliton width k = {k}")));
    }
    let coeffs = |a: f64, v2: f64| -> Result<(f64, f64)> {
        let frame = WaveFrame::new(v2.sqrt(), 1.0)?;
        let ode = reduce(&PdeForm::Assigned, frame, 0.0, 0.0)?;
        let h = AssignedSechTrial { k, a };
        let (z1, z2) = (0.3 / k, 1.1 / k);
        let (s1, s2) = ((k * z1).cosh().powi(-2), (k * z2).cosh().powi(-2));
        let (r1, r2) = (
            crate::equations::ode_residual(&ode, &h, z1)?,
            crate::equations::ode_residual(&ode, &h, z2)?,
        );
        // r = c2·s + c4·s²
        let det = s1 * s2 * s2 - s2 * s1 * s1;
        let c2 = (r1 * s2 * s2 - r2 * s1 * s1) / det;
        let c4 = (s1 * r2 - s2 * r1) / det;
        Ok((c2, c4))
    };
    let root = |g1: f64, g2: f64, x1: f64, x2: f64| x1 - g1 * (x2 - x1) / (g2 - g1);
    let (_, q1) = coeffs(1.0, 2.0)?;
    let (_, q2) = coeffs(2.0, 2.0)?;
    let a = root(q1, q2 / 2.0, 1.0, 2.0);
    let (p1, _) = coeffs(a, 1.5)?;
    let (p2, _) = coeffs(a, 2.5)?;
    let v2 = root(p1 / a, p2 / a, 1.5, 2.5);
    if !(v2 > 0.0) {
        return Err(Error::Domain(format!("no real speed for k = {k}")));
    }
    Ok((a, v2.sqrt()))
}

struct AssignedSechTrial {
    k: f64,
    a: f64,
}

impl Profile for AssignedSechTrial {
    fn eval(&self, z: &Jet) -> Result<Jet> {
        let s = (*z * self.k).sech();
        Ok(s * s * self.a)
    }
}
