//! Claim registry: every catalog solution bound to the equation it is said
//! to solve, measured on a grid, with deterministic reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    self, ansatz_residual_terms, b_of, direct_coefficients, direct_f, lookup, positive_interval,
    Binding, CoefficientSet, DirectAnsatz, DirectProfile, FifthVariant, GGSolution, GgProfile,
    JacobiKind, NamedSolution, TableSource, TrigClosedForm, ZDomain,
};
use crate::equations::{
    invariant_surface_terms, pde_terms, reduce, reduce_assigned_tabulated, Field, FnField,
    FnProfile, NonlinearitySpec, PdeForm, Profile, ReducedOde, Term, TravelingWave, WaveFrame,
};
use crate::error::Result;
use crate::jets::Jet;
use crate::TOOL_VERSION;

/// Whether a claim's truth is established independently of the source
/// formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Derived,
    Transcribed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "DOMAIN_ERROR")]
    DomainError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::DomainError => "DOMAIN_ERROR",
        }
    }
}

/// Sampling grids: `(x, t)` for PDE checks and `z` for ODE checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_min: -10.0,
            x_max: 10.0,
            nx: 41,
            t_min: 0.0,
            t_max: 5.0,
            nt: 41,
            z_min: -10.0,
            z_max: 10.0,
            nz: 201,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 {
        (hi - lo) / (n - 1) as f64
    } else {
        0.0
    };
    (0..n).map(move |i| {
        if i + 1 == n && n > 1 {
            hi
        } else {
            lo + step * i as f64
        }
    })
}

impl GridSpec {
    /// Inserts a midpoint between every pair of neighbours.
    pub fn refined(&self) -> GridSpec {
        let r = |n: usize| if n > 1 { 2 * n - 1 } else { n };
        GridSpec {
            nx: r(self.nx),
            nt: r(self.nt),
            nz: r(self.nz),
            ..*self
        }
    }

    fn xt_points(&self) -> Vec<(f64, f64)> {
        let ts: Vec<f64> = linspace(self.t_min, self.t_max, self.nt).collect();
        linspace(self.x_min, self.x_max, self.nx)
            .flat_map(|x| ts.iter().map(move |&t| (x, t)))
            .collect()
    }

    fn z_points(&self) -> Vec<f64> {
        linspace(self.z_min, self.z_max, self.nz).collect()
    }
}

/// What is evaluated at each grid point.
#[derive(Clone)]
pub enum Check {
    /// PDE left-hand side on the `(x, t)` grid.
    Pde {
        form: PdeForm,
        field: Arc<dyn Field>,
        /// Points whose `z` falls outside the domain are left out.
        restrict: Option<(WaveFrame, ZDomain)>,
    },
    /// Reduced ODE on the `z` grid.
    Ode {
        ode: ReducedOde,
        profile: Arc<dyn Profile>,
        domain: ZDomain,
    },
    /// `λu_x + μu_t` on the `(x, t)` grid.
    Invariant {
        field: Arc<dyn Field>,
        frame: WaveFrame,
    },
    /// PDE residual minus the second z-derivative of the reduced functional.
    Reduction {
        ode: ReducedOde,
        profile: Arc<dyn Profile>,
    },
    /// `h'''' + b·h'' + F(h)` on `nz` points of `[lo, hi]`.
    Ansatz {
        profile: Arc<dyn Profile>,
        b: f64,
        coeffs: CoefficientSet,
        lo: f64,
        hi: f64,
    },
}

impl Check {
    fn name(&self) -> &'static str {
        match self {
            Check::Pde { .. } => "pde",
            Check::Ode { .. } => "ode",
            Check::Invariant { .. } => "invariant",
            Check::Reduction { .. } => "reduction",
            Check::Ansatz { .. } => "ansatz",
        }
    }

    /// The same check with `ε·sin(x/2)` (or `ε·sin(z/2)`) added to the
    /// solution; `None` for the reduction identity, which holds for any
    /// profile.
    pub fn perturbed(&self, eps: f64) -> Option<Check> {
        let pf = |f: &Arc<dyn Field>| -> Arc<dyn Field> {
            let f = f.clone();
            Arc::new(FnField(move |x: &Jet, t: &Jet| {
                Ok(f.eval(x, t)? + (*x * 0.5).sin() * eps)
            }))
        };
        let pp = |p: &Arc<dyn Profile>| -> Arc<dyn Profile> {
            let p = p.clone();
            Arc::new(FnProfile(move |z: &Jet| {
                Ok(p.eval(z)? + (*z * 0.5).sin() * eps)
            }))
        };
        Some(match self {
            Check::Pde {
                form,
                field,
                restrict,
            } => Check::Pde {
                form: form.clone(),
                field: pf(field),
                restrict: *restrict,
            },
            Check::Ode {
                ode,
                profile,
                domain,
            } => Check::Ode {
                ode: ode.clone(),
                profile: pp(profile),
                domain: *domain,
            },
            Check::Invariant { field, frame } => Check::Invariant {
                field: pf(field),
                frame: *frame,
            },
            Check::Reduction { .. } => return None,
            Check::Ansatz {
                profile,
                b,
                coeffs,
                lo,
                hi,
            } => Check::Ansatz {
                profile: pp(profile),
                b: *b,
                coeffs: coeffs.clone(),
                lo: *lo,
                hi: *hi,
            },
        })
    }

    /// Terms at every sample point; `None` marks points outside the domain.
    fn evaluate(&self, grid: &GridSpec) -> Vec<Option<Result<Vec<Term>>>> {
        match self {
            Check::Pde {
                form,
                field,
                restrict,
            } => grid
                .xt_points()
                .into_iter()
                .map(|(x, t)| {
                    if let Some((fr, dom)) = restrict {
                        if !dom.contains(fr.z(x, t)) {
                            return None;
                        }
                    }
                    Some(pde_terms(form, field.as_ref(), x, t))
                })
                .collect(),
            Check::Ode {
                ode,
                profile,
                domain,
            } => grid
                .z_points()
                .into_iter()
                .map(|z| domain.contains(z).then(|| ode.terms(profile.as_ref(), z)))
                .collect(),
            Check::Invariant { field, frame } => grid
                .xt_points()
                .into_iter()
                .map(|(x, t)| Some(invariant_surface_terms(field.as_ref(), frame, x, t)))
                .collect(),
            Check::Reduction { ode, profile } => grid
                .xt_points()
                .into_iter()
                .map(|(x, t)| {
                    Some(
                        crate::equations::reduction_gap(ode, profile.as_ref(), x, t).map(
                            |(pde, d2)| {
                                vec![
                                    Term {
                                        name: "pde_residual",
                                        value: pde,
                                    },
                                    Term {
                                        name: "-d2/dz2(functional)",
                                        value: -d2,
                                    },
                                ]
                            },
                        ),
                    )
                })
                .collect(),
            Check::Ansatz {
                profile,
                b,
                coeffs,
                lo,
                hi,
            } => linspace(*lo, *hi, grid.nz)
                .map(|z| Some(ansatz_residual_terms(profile.as_ref(), *b, coeffs, z)))
                .collect(),
        }
    }
}

#[derive(Clone)]
pub struct Claim {
    pub id: String,
    /// Where the claimed formula comes from, in words.
    pub source: String,
    pub kind: ClaimKind,
    pub check: Check,
    pub tolerance: f64,
    pub variant: Option<FifthVariant>,
    /// Re-attempted when the primary check fails.
    pub alternate: Option<(FifthVariant, Check)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub source: String,
    pub kind: ClaimKind,
    pub check: &'static str,
    pub status: Status,
    pub sup_residual: f64,
    pub l2_residual: f64,
    /// `sup_residual` divided by the largest per-term sup.
    pub relative: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub points: usize,
    pub skipped: usize,
    pub breakdown: BTreeMap<String, f64>,
    pub variant: Option<&'static str>,
    pub alternate: Option<Box<ClaimResult>>,
}

/// Measures one check.
fn measure(
    claim: &Claim,
    check: &Check,
    variant: Option<FifthVariant>,
    grid: &GridSpec,
) -> ClaimResult {
    let samples = check.evaluate(grid);
    let mut sup: f64 = 0.0;
    let mut sq = 0.0;
    let mut points = 0usize;
    let mut failed = 0usize;
    let mut breakdown: BTreeMap<String, f64> = BTreeMap::new();
    for s in samples.into_iter().flatten() {
        match s {
            Ok(terms) => {
                let r: f64 = terms.iter().map(|t| t.value).sum();
                if !r.is_finite() {
                    failed += 1;
                    continue;
                }
                points += 1;
                sup = sup.max(r.abs());
                sq += r * r;
                for t in terms {
                    let e = breakdown.entry(t.name.to_string()).or_insert(0.0);
                    *e = e.max(t.value.abs());
                }
            }
            Err(_) => failed += 1,
        }
    }
    let scale = breakdown.values().copied().fold(0.0, f64::max);
    let relative = if sup == 0.0 { 0.0 } else { sup / scale };
    let total = points + failed;
    let status = if total == 0 || failed as f64 > 0.01 * total as f64 {
        Status::DomainError
    } else if relative < claim.tolerance {
        Status::Pass
    } else {
        Status::Fail
    };
    ClaimResult {
        id: claim.id.clone(),
        source: claim.source.clone(),
        kind: claim.kind,
        check: check.name(),
        status,
        sup_residual: sup,
        l2_residual: if points > 0 {
            (sq / points as f64).sqrt()
        } else {
            0.0
        },
        relative,
        scale,
        tolerance: claim.tolerance,
        points,
        skipped: failed,
        breakdown,
        variant: variant.map(|v| v.name()),
        alternate: None,
    }
}

pub fn run_claim(claim: &Claim, grid: &GridSpec) -> ClaimResult {
    let mut res = measure(claim, &claim.check, claim.variant, grid);
    if res.status != Status::Pass {
        if let Some((v, alt)) = &claim.alternate {
            res.alternate = Some(Box::new(measure(claim, alt, Some(*v), grid)));
        }
    }
    res
}

/// Absolute sup residual of the claim with an `ε`-perturbed solution.
pub fn perturbed_sup(claim: &Claim, eps: f64, grid: &GridSpec) -> Option<f64> {
    let check = claim.check.perturbed(eps)?;
    Some(measure(claim, &check, claim.variant, grid).sup_residual)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TolerancePolicy {
    pub derived: f64,
    pub transcribed: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            derived: 1e-8,
            transcribed: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool_version: &'static str,
    pub grid: GridSpec,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// `id,status,sup_residual,l2_residual` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,status,sup_residual,l2_residual\n");
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{},{},{:.16e},{:.16e}",
                c.id,
                c.status.as_str(),
                c.sup_residual,
                c.l2_residual
            );
        }
        out
    }

    /// True when every derived-truth claim passes.
    pub fn derived_all_pass(&self) -> bool {
        self.claims
            .iter()
            .filter(|c| c.kind == ClaimKind::Derived)
            .all(|c| c.status == Status::Pass)
    }

    pub fn get(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Every claim, with tolerances from `policy`, ordered by id.
pub fn registry(policy: TolerancePolicy) -> Vec<Claim> {
    let mut claims = build_registry(policy).expect("built-in claims are well-formed");
    claims.sort_by(|a, b| a.id.cmp(&b.id));
    claims
}

pub fn run_registry(policy: TolerancePolicy, grid: &GridSpec) -> VerificationReport {
    let claims = registry(policy);
    let results: Vec<ClaimResult> = claims.par_iter().map(|c| run_claim(c, grid)).collect();
    VerificationReport {
        tool_version: TOOL_VERSION,
        grid: *grid,
        claims: results,
    }
}

struct Builder {
    policy: TolerancePolicy,
    claims: Vec<Claim>,
}

impl Builder {
    fn push(&mut self, id: impl Into<String>, source: &str, kind: ClaimKind, check: Check) {
        self.push_variant(id, source, kind, check, None, None);
    }

    fn push_variant(
        &mut self,
        id: impl Into<String>,
        source: &str,
        kind: ClaimKind,
        check: Check,
        variant: Option<FifthVariant>,
        alternate: Option<(FifthVariant, Check)>,
    ) {
        let tolerance = match kind {
            ClaimKind::Derived => self.policy.derived,
            ClaimKind::Transcribed => self.policy.transcribed,
        };
        self.claims.push(Claim {
            id: id.into(),
            source: source.to_string(),
            kind,
            check,
            tolerance,
            variant,
            alternate,
        });
    }
}

fn named_check(s: &NamedSolution) -> Check {
    match &s.binding {
        Binding::Pde(form) => Check::Pde {
            form: form.clone(),
            field: Arc::new(s.field()),
            restrict: Some((s.frame, s.domain)),
        },
        Binding::Ode(ode) => Check::Ode {
            ode: ode.clone(),
            profile: s.profile.clone(),
            domain: s.domain,
        },
    }
}

const GENERAL_M: f64 = 0.7;
const GENERAL_LAMBDA: f64 = 0.6;
const GENERAL_MU: f64 = 0.8;
const GENERAL_C: f64 = 1.5;

fn build_registry(policy: TolerancePolicy) -> Result<Vec<Claim>> {
    use ClaimKind::{Derived, Transcribed};
    let mut b = Builder {
        policy,
        claims: Vec::new(),
    };

    b.push(
        "assigned_zero",
        "assigned equation: trivial solution",
        Derived,
        Check::Pde {
            form: PdeForm::Assigned,
            field: Arc::new(FnField(|_: &Jet, _: &Jet| Ok(Jet::constant(0.0)))),
            restrict: None,
        },
    );
    b.push(
        "assigned_constant",
        "assigned equation: constant solution",
        Derived,
        Check::Pde {
            form: PdeForm::Assigned,
            field: Arc::new(FnField(|_: &Jet, _: &Jet| Ok(Jet::constant(0.7)))),
            restrict: None,
        },
    );
    let sol = catalog::named_solution("assigned_soliton")?;
    b.push(
        "assigned_soliton",
        "assigned equation: sech² soliton from coefficient matching",
        Derived,
        named_check(&sol),
    );
    let ode = reduce(&PdeForm::Assigned, sol.frame, 0.0, 0.0)?;
    b.push(
        "assigned_soliton_ode",
        "assigned equation: reduced ODE with A = B = 0",
        Derived,
        Check::Ode {
            ode,
            profile: sol.profile.clone(),
            domain: ZDomain::ALL,
        },
    );
    b.push(
        "assigned_reduction_tabulated_sign",
        "assigned equation: reduced ODE with +μ⁴h'' as printed",
        Transcribed,
        Check::Ode {
            ode: reduce_assigned_tabulated(sol.frame, 0.0, 0.0),
            profile: sol.profile.clone(),
            domain: ZDomain::ALL,
        },
    );

    for id in ["assigned_soliton", "kink", "soliton_sech2", "gg_u1"] {
        let s = catalog::named_solution(id)?;
        b.push(
            format!("invariant_{id}"),
            "invariant surface condition of the traveling-wave symmetry",
            Derived,
            Check::Invariant {
                field: Arc::new(s.field()),
                frame: s.frame,
            },
        );
    }

    let gauss: Arc<dyn Profile> = Arc::new(FnProfile(|z: &Jet| Ok((*z * *z * -0.5).exp())));
    let frame = WaveFrame::new(GENERAL_LAMBDA, GENERAL_MU)?;
    let cubic = NonlinearitySpec::new(vec![(1.0, 2.0), (0.3, 3.0)])?;
    b.push(
        "reduction_consistency_gaussian",
        "traveling-wave reduction of the generalized equation",
        Derived,
        Check::Reduction {
            ode: reduce(
                &PdeForm::Generalized {
                    c: GENERAL_C,
                    f: cubic,
                },
                frame,
                0.2,
                -0.1,
            )?,
            profile: gauss,
        },
    );

    // direct method: the published tables, a recomputed set, and the PDE
    let bcoef = b_of(&frame, GENERAL_C)?;
    for kind in JacobiKind::ALL {
        let name = kind.name();
        let ansatz = DirectAnsatz::new(kind, 1.0, 2.0, GENERAL_M)?;
        let (lo, hi) = positive_interval(kind, ansatz.m);
        let profile: Arc<dyn Profile> = Arc::new(DirectProfile(ansatz));
        for (source, ckind, suffix) in [
            (TableSource::Tabulated, Transcribed, "tabulated"),
            (TableSource::Recomputed, Derived, "recomputed"),
        ] {
            b.push(
                format!("direct_{name}_{suffix}"),
                "direct method: F(h) coefficient table",
                ckind,
                Check::Ansatz {
                    profile: profile.clone(),
                    b: bcoef,
                    coeffs: direct_coefficients(&ansatz, bcoef, source)?,
                    lo,
                    hi,
                },
            );
        }
        for (source, suffix) in [
            (TableSource::Tabulated, ""),
            (TableSource::Recomputed, "_recomputed"),
        ] {
            let df = direct_f(&ansatz, &frame, GENERAL_C, source)?;
            let pde = |cs: &CoefficientSet| -> Result<Check> {
                Ok(Check::Pde {
                    form: PdeForm::Generalized {
                        c: GENERAL_C,
                        f: cs.f_small()?,
                    },
                    field: Arc::new(TravelingWave {
                        profile: DirectProfile(ansatz),
                        frame,
                    }),
                    restrict: Some((frame, ZDomain { lo, hi })),
                })
            };
            b.push_variant(
                format!("general_{name}{suffix}"),
                "direct method: u = α·H^β(μx − λt | m) with f(h) assembled from F(h)",
                Transcribed,
                pde(df.get(FifthVariant::Tabulated))?,
                Some(FifthVariant::Tabulated),
                Some((FifthVariant::Inverted, pde(df.get(FifthVariant::Inverted))?)),
            );
        }
    }

    let named_refs = [
        ("compacton_sin2", "direct method, sn family: sin² compacton"),
        ("kink", "direct method, sn family: kink"),
        ("antikink", "direct method, sn family: antikink"),
        ("compacton_cos2", "direct method, cn family: cos² compacton"),
        ("soliton_sech2", "direct method, dn family: sech² soliton"),
    ];
    for (id, r) in named_refs {
        for c in [1.0, 2.0] {
            let s = lookup(id, &BTreeMap::from([("c".to_string(), c)]))?;
            b.push(format!("{id}_c{c}"), r, Transcribed, named_check(&s));
        }
    }

    for (id, r) in [
        ("gg_u1", "G'/G expansion: hyperbolic solution u1"),
        ("gg_u2", "G'/G expansion: trigonometric solution u2"),
        ("gg_u3", "G'/G expansion: rational solution u3"),
    ] {
        let s = catalog::named_solution(id)?;
        b.push(id, r, Transcribed, named_check(&s));
    }

    let unit = WaveFrame::new(1.0, 1.0)?;
    for (id, alpha, c, c1, c2, r) in [
        (
            "gg_h1",
            0.3,
            0.5,
            1.0,
            0.5,
            "G'/G expansion: hyperbolic closed form with determined coefficients",
        ),
        (
            "gg_h2",
            0.2,
            2.0,
            1.0,
            0.0,
            "G'/G expansion: trigonometric closed form with determined coefficients",
        ),
        (
            "gg_h3",
            0.3,
            1.0,
            1.0,
            20.0,
            "G'/G expansion: rational closed form with determined coefficients",
        ),
    ] {
        let sol = GGSolution::new(alpha, unit, c, c1, c2)?;
        let ode = sol.ode()?;
        let prof: GgProfile = sol.profile();
        b.push(
            id,
            r,
            Transcribed,
            Check::Ode {
                ode: ode.clone(),
                profile: Arc::new(prof),
                domain: ZDomain::ALL,
            },
        );
        if id == "gg_h2" {
            b.push(
                "gg_h2_tabulated",
                "G'/G expansion: trigonometric closed form as printed",
                Transcribed,
                Check::Ode {
                    ode,
                    profile: Arc::new(prof.with_trig_form(TrigClosedForm::Tabulated)),
                    domain: ZDomain::ALL,
                },
            );
        }
    }

    Ok(b.claims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse() -> GridSpec {
        GridSpec {
            nx: 11,
            nt: 6,
            nz: 41,
            ..GridSpec::default()
        }
    }

    fn claim(id: &str) -> Claim {
        registry(TolerancePolicy::default())
            .into_iter()
            .find(|c| c.id == id)
            .unwrap()
    }

    #[test]
    fn zero_claim_is_exact() {
        let r = run_claim(&claim("assigned_zero"), &coarse());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.sup_residual, 0.0);
    }

    #[test]
    fn soliton_claim_passes() {
        let r = run_claim(&claim("assigned_soliton"), &GridSpec::default());
        assert_eq!(r.status, Status::Pass);
        assert!(r.sup_residual < 1e-9);
        assert_eq!(r.points, 41 * 41);
    }

    #[test]
    fn registry_ids_are_unique_and_sorted() {
        let reg = registry(TolerancePolicy::default());
        assert!(reg.len() >= 12);
        for w in reg.windows(2) {
            assert!(w[0].id < w[1].id);
        }
    }

    #[test]
    fn alternate_recorded_on_failure() {
        let r = run_claim(&claim("general_sn_recomputed"), &coarse());
        assert_eq!(r.status, Status::Fail);
        let alt = r.alternate.unwrap();
        assert_eq!(alt.variant, Some("inverted"));
        assert_eq!(alt.status, Status::Pass);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rep = VerificationReport {
            tool_version: TOOL_VERSION,
            grid: coarse(),
            claims: vec![run_claim(&claim("assigned_zero"), &coarse())],
        };
        let csv = rep.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("id,status,sup_residual,l2_residual"));
        assert_eq!(
            lines.next(),
            Some("assigned_zero,PASS,0.0000000000000000e0,0.0000000000000000e0")
        );
    }

    #[test]
    fn refined_grid_inserts_midpoints() {
        let g = GridSpec::default().refined();
        assert_eq!((g.nx, g.nt, g.nz), (81, 81, 401));
        let pts = g.z_points();
        assert_eq!(pts[0], -10.0);
        assert_eq!(pts[400], 10.0);
    }
}

#[cfg(test)]
mod registry_runs {
    use super::*;

    #[test]
    fn refining_never_breaks_a_derived_pass() {
        let policy = TolerancePolicy::default();
        let grid = GridSpec::default();
        let coarse = run_registry(policy, &grid);
        let fine = run_registry(policy, &grid.refined());
        for c in coarse
            .claims
            .iter()
            .filter(|c| c.kind == ClaimKind::Derived)
        {
            let f = fine.get(&c.id).unwrap();
            if c.status == Status::Pass {
                assert_eq!(
                    f.status,
                    Status::Pass,
                    "{} regressed: {:e}",
                    c.id,
                    f.relative
                );
            }
        }
    }

    #[test]
    fn report_json_is_stable_and_complete() {
        let grid = GridSpec::default();
        let a = run_registry(TolerancePolicy::default(), &grid);
        let b = run_registry(TolerancePolicy::default(), &grid);
        assert_eq!(a.to_json(), b.to_json());
        let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        let claims = v["claims"].as_array().unwrap();
        assert!(claims.len() >= 12);
        for c in claims {
            assert!(["PASS", "FAIL", "DOMAIN_ERROR"].contains(&c["status"].as_str().unwrap()));
            assert!(c["breakdown"].as_object().is_some_and(|m| !m.is_empty()));
        }
        assert!(a.derived_all_pass());
    }
}
