use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use bousq::catalog::{lookup, AssignedSoliton, ENTRIES};
use bousq::elliptic::{jacobi_eval, EllipticParameter};
use bousq::equations::Profile;
use bousq::simulate::{run, white_noise, Grid1D, RunStatus, SimConfig, Spectral};
use bousq::verify::{registry, run_registry, ClaimKind, GridSpec, TolerancePolicy};
use bousq::TOOL_VERSION;

use crate::args::{CatalogArgs, EllipticArgs, EvalArgs, SimulateArgs, VerifyArgs};
use crate::format::{color_enabled, num, parse_range, status_label};
use crate::{Outcome, UsageError};

fn required<T>(v: Option<T>, flag: &str) -> Result<T, UsageError> {
    v.ok_or_else(|| UsageError(format!("missing required --{flag}")))
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Timestamps and versions live here so the main outputs stay byte-stable.
fn write_meta(path: &Path, command: &str) -> Result<(), UsageError> {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "tool_version": TOOL_VERSION,
        "command": command,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "created_unix": secs,
    });
    std::fs::write(path, serde_json::to_string_pretty(&meta).unwrap() + "\n")?;
    Ok(())
}

fn emit(out: Option<&Path>, body: &str, command: &str) -> Result<(), UsageError> {
    match out {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
            write_meta(&meta_path(p), command)
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>, UsageError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| UsageError(format!("--param expects name=value, got '{item}'")))?;
        let v: f64 = v
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| UsageError(format!("--param {k}: '{v}' is not a finite number")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(UsageError(format!("--param {k} given twice")));
        }
    }
    Ok(out)
}

pub fn eval(a: EvalArgs) -> Result<Outcome, UsageError> {
    let id = required(a.solution, "solution")?;
    let xs = parse_range("x", &required(a.x, "x")?)?;
    let ts = parse_range("t", a.t.as_deref().unwrap_or("0"))?;
    let sol = lookup(&id, &parse_params(&a.param)?)?;
    let mut body = String::from("x,t,u\n");
    let mut failed = 0usize;
    for &t in &ts {
        for &x in &xs {
            let u = sol.sample(x, t).unwrap_or_else(|_| {
                failed += 1;
                f64::NAN
            });
            let _ = writeln!(body, "{},{},{}", num(x), num(t), num(u));
        }
    }
    if failed > 0 {
        eprintln!("warning: {failed} points outside the domain of '{id}' written as NaN");
    }
    emit(a.out.as_deref(), &body, "eval")?;
    Ok(Outcome::Ok)
}

pub fn verify(a: VerifyArgs) -> Result<Outcome, UsageError> {
    let grid = match a.grid.as_deref().unwrap_or("default") {
        "default" => GridSpec::default(),
        "refined" => GridSpec::default().refined(),
        other => {
            return Err(UsageError(format!(
                "--grid: expected default or refined, got '{other}'"
            )))
        }
    };
    let mut policy = TolerancePolicy::default();
    for (v, slot, flag) in [
        (a.derived_tol, &mut policy.derived, "derived-tol"),
        (
            a.transcribed_tol,
            &mut policy.transcribed,
            "transcribed-tol",
        ),
    ] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(UsageError(format!("--{flag} must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    let report = run_registry(policy, &grid);
    emit(a.out.as_deref(), &report.to_json(), "verify")?;
    let csv = a
        .csv
        .or_else(|| a.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(p) = csv {
        std::fs::write(&p, report.to_csv())
            .map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
    }
    let color = color_enabled();
    for c in &report.claims {
        let kind = match c.kind {
            ClaimKind::Derived => "derived",
            ClaimKind::Transcribed => "transcribed",
        };
        eprintln!(
            "{:<12} {:<11} {:<40} {:.3e}",
            status_label(c.status.as_str(), color),
            kind,
            c.id,
            c.relative
        );
    }
    Ok(if report.derived_all_pass() {
        Outcome::Ok
    } else {
        Outcome::DerivedFailure
    })
}

pub fn simulate(a: SimulateArgs) -> Result<Outcome, UsageError> {
    let grid = Grid1D::new(a.n.unwrap_or(256), a.length.unwrap_or(100.0))?;
    let sign = a.sign.unwrap_or(1.0);
    let mut cfg = SimConfig::new(sign, a.dt.unwrap_or(0.05), a.t_end.unwrap_or(10.0), &grid);
    if let Some(k) = a.k_cut.as_deref() {
        cfg.k_cut = if k == "nyquist" {
            grid.nyquist()
        } else {
            k.parse().map_err(|_| {
                UsageError(format!(
                    "--k-cut: expected a number or 'nyquist', got '{k}'"
                ))
            })?
        };
    }
    cfg.dealias = !a.no_dealias;
    cfg.nonlinear = !a.linear;
    cfg.blowup_threshold = a.blowup_threshold;
    if let Some(s) = a.stride {
        cfg.output_stride = s;
    }
    cfg.validate(&grid)?;

    let initial = a.initial.as_deref().unwrap_or("soliton");
    let x0 = a.x0.unwrap_or(grid.l / 4.0);
    let sp = Spectral::new(grid);
    let (mut u0, ut0) = match initial {
        "soliton" => {
            let s = AssignedSoliton {
                k: a.k.unwrap_or(0.25),
            };
            let u0 = grid.sample(|x| s.sample(x - x0).unwrap_or(0.0));
            let v = s.speed();
            let ut0 = sp.dx(&u0).into_iter().map(|d| -v * d).collect();
            (u0, ut0)
        }
        "gaussian" => {
            let (amp, k) = (a.amplitude.unwrap_or(0.1), a.k.unwrap_or(0.5));
            (
                grid.sample(|x| amp * (-(k * (x - x0)).powi(2)).exp()),
                vec![0.0; grid.n],
            )
        }
        "mode" => {
            let j = a.mode.unwrap_or(1);
            let amp = a.amplitude.unwrap_or(1.0);
            let k = 2.0 * std::f64::consts::PI * j as f64 / grid.l;
            (grid.sample(|x| amp * (k * x).cos()), vec![0.0; grid.n])
        }
        "noise" | "zero" => (vec![0.0; grid.n], vec![0.0; grid.n]),
        other => {
            return Err(UsageError(format!(
                "--initial: expected soliton, gaussian, mode, noise or zero, got '{other}'"
            )))
        }
    };
    let noise = a
        .noise
        .unwrap_or(if initial == "noise" { 1e-8 } else { 0.0 });
    if noise != 0.0 {
        for (u, w) in u0
            .iter_mut()
            .zip(white_noise(grid.n, noise, a.seed.unwrap_or(0)))
        {
            *u += w;
        }
    }
    let tr = run(&u0, &ut0, &cfg, &grid)?;

    let summary = json!({
        "status": tr.status.as_str(),
        "final_t": tr.final_t,
        "steps": tr.steps,
        "threshold": tr.threshold,
        "threads": 1,
        "config": {
            "initial": initial,
            "n": grid.n,
            "length": grid.l,
            "dt": cfg.dt,
            "t_end": cfg.t_end,
            "k_cut": cfg.k_cut,
            "dealias": cfg.dealias,
            "sign": cfg.fourth_order_sign,
            "blowup_threshold": cfg.blowup_threshold,
            "nonlinear": cfg.nonlinear,
            "stride": cfg.output_stride,
            "x0": x0,
            "noise": noise,
            "seed": a.seed.unwrap_or(0),
        },
    });
    let summary_text = serde_json::to_string_pretty(&summary).unwrap() + "\n";
    match a.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            let mut frames = String::from("t,x,u\n");
            let xs = grid.points();
            for f in &tr.frames {
                for (x, u) in xs.iter().zip(&f.u) {
                    let _ = writeln!(frames, "{},{},{}", num(f.t), num(*x), num(*u));
                }
            }
            let mut diag = String::from("t,mass,sup_norm,tail_energy\n");
            for d in &tr.diagnostics {
                let _ = writeln!(
                    diag,
                    "{},{},{},{}",
                    num(d.t),
                    num(d.mass),
                    num(d.sup_norm),
                    num(d.tail_energy)
                );
            }
            std::fs::write(dir.join("frames.csv"), frames)?;
            std::fs::write(dir.join("diagnostics.csv"), diag)?;
            std::fs::write(dir.join("summary.json"), &summary_text)?;
            write_meta(&dir.join("meta.json"), "simulate")?;
        }
        None => print!("{summary_text}"),
    }
    eprintln!(
        "{} at t = {} after {} steps",
        status_label(tr.status.as_str(), color_enabled()),
        tr.final_t,
        tr.steps
    );
    Ok(if tr.status == RunStatus::Blowup && a.fail_on_blowup {
        Outcome::Blowup
    } else {
        Outcome::Ok
    })
}

pub fn elliptic(a: EllipticArgs) -> Result<Outcome, UsageError> {
    let zs = parse_range("z", &required(a.z, "z")?)?;
    let ms = parse_range("m", &required(a.m, "m")?)?;
    let mut body = String::from("z,m,sn,cn,dn\n");
    for &m in &ms {
        let p = EllipticParameter::new(m)?;
        for &z in &zs {
            let j = jacobi_eval(z, p);
            let _ = writeln!(
                body,
                "{},{},{},{},{}",
                num(z),
                num(m),
                num(j.sn),
                num(j.cn),
                num(j.dn)
            );
        }
    }
    emit(a.out.as_deref(), &body, "elliptic")?;
    Ok(Outcome::Ok)
}

pub fn catalog(a: CatalogArgs) -> Result<Outcome, UsageError> {
    let claims = registry(TolerancePolicy::default());
    if a.json {
        let solutions: Vec<Value> = ENTRIES
            .iter()
            .map(|e| json!({"id": e.id, "description": e.description, "params": e.params}))
            .collect();
        let claims: Vec<Value> = claims
            .iter()
            .map(|c| json!({"id": c.id, "kind": c.kind, "source": c.source, "tolerance": c.tolerance}))
            .collect();
        let v = json!({"solutions": solutions, "claims": claims});
        print!("{}", serde_json::to_string_pretty(&v).unwrap() + "\n");
        return Ok(Outcome::Ok);
    }
    println!("solutions ({})", ENTRIES.len());
    for e in ENTRIES {
        let params = if e.params.is_empty() {
            String::from("-")
        } else {
            e.params.join(",")
        };
        println!("  {:<16} [{params}] {}", e.id, e.description);
    }
    println!("claims ({})", claims.len());
    for c in &claims {
        let kind = match c.kind {
            ClaimKind::Derived => "derived",
            ClaimKind::Transcribed => "transcribed",
        };
        println!("  {:<40} {:<11} {}", c.id, kind, c.source);
    }
    Ok(Outcome::Ok)
}
