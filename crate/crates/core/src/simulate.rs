//! Fourier pseudospectral solver for `u_tt = u_xx + s·u_xxxx + 3(u²)_xx` on
//! a periodic interval, stepped with classical RK4 on `(û, v̂)`, `v = u_t`.
//!
//! With `s = +1` (the assigned equation) every mode with `|k| > 1` grows
//! like `e^{σt}`, `σ² = k⁴ − k²`, so runs default to a hard cutoff at
//! `k = 1`. With `s = −1` the problem is well posed.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid1D {
    pub n: usize,
    pub l: f64,
}

impl Grid1D {
    pub fn new(n: usize, l: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two ≥ 16, got {n}"
            )));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!("domain length {l}")));
        }
        Ok(Grid1D { n, l })
    }

    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Signed mode index of FFT slot `i`, in `[−N/2, N/2)`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        2.0 * PI * self.mode(i) as f64 / self.l
    }

    /// `π·N/L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.l
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Modes with `|k| > k_cut` are zeroed.
    pub k_cut: f64,
    pub dealias: bool,
    /// `+1` for the assigned equation, `−1` for the well-posed variant.
    pub fourth_order_sign: f64,
    /// Sup-norm limit; `None` means 1e3 times the initial sup-norm.
    pub blowup_threshold: Option<f64>,
    /// Drops `3(u²)_xx` when false.
    pub nonlinear: bool,
    /// Steps between stored frames.
    pub output_stride: usize,
}

impl SimConfig {
    /// Defaults for the given sign: `k_cut = 1` for `s = +1`, no cutoff for
    /// `s = −1`, dealiasing on, frame every 10 steps.
    pub fn new(fourth_order_sign: f64, dt: f64, t_end: f64, grid: &Grid1D) -> Self {
        SimConfig {
            dt,
            t_end,
            k_cut: if fourth_order_sign > 0.0 {
                1.0
            } else {
                grid.nyquist()
            },
            dealias: true,
            fourth_order_sign,
            blowup_threshold: None,
            nonlinear: true,
            output_stride: 10,
        }
    }

    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        if !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0 and t_end ≥ 0 (dt={}, t_end={})",
                self.dt, self.t_end
            )));
        }
        if self.fourth_order_sign != 1.0 && self.fourth_order_sign != -1.0 {
            return Err(Error::InvalidParameter(format!(
                "fourth-order sign must be ±1, got {}",
                self.fourth_order_sign
            )));
        }
        if !(self.k_cut > 0.0) || self.k_cut > grid.nyquist() * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "k_cut must lie in (0, {}], got {}",
                grid.nyquist(),
                self.k_cut
            )));
        }
        if self.output_stride == 0 {
            return Err(Error::InvalidParameter("output stride must be ≥ 1".into()));
        }
        let w = max_frequency(self, grid);
        if self.dt > 0.5 / w {
            return Err(Error::Simulation(format!(
                "dt = {} exceeds the stability guideline 0.5/max|ω| = {}",
                self.dt,
                0.5 / w
            )));
        }
        Ok(())
    }
}

/// `max |ω(k)|` over retained modes, `ω² = |−k² + s·k⁴|`.
pub fn max_frequency(cfg: &SimConfig, grid: &Grid1D) -> f64 {
    (0..grid.n)
        .map(|i| grid.wavenumber(i))
        .filter(|k| k.abs() <= cfg.k_cut)
        .map(|k| (-k * k + cfg.fourth_order_sign * k.powi(4)).abs().sqrt())
        .fold(0.0, f64::max)
}

/// Spectral coefficients of `u` and `u_t` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub u_hat: Vec<Complex64>,
    pub v_hat: Vec<Complex64>,
    pub t: f64,
}

/// Forward and inverse transforms for one grid size.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid1D,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            grid,
            fwd: planner.plan_fft_forward(grid.n),
            inv: planner.plan_fft_inverse(grid.n),
            k: (0..grid.n).map(|i| grid.wavenumber(i)).collect(),
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn forward(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse transform, normalized, still complex.
    pub fn inverse(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let mut buf = u_hat.to_vec();
        self.inv.process(&mut buf);
        let s = 1.0 / self.grid.n as f64;
        for v in &mut buf {
            *v *= s;
        }
        buf
    }

    pub fn to_physical(&self, u_hat: &[Complex64]) -> Vec<f64> {
        self.inverse(u_hat).into_iter().map(|c| c.re).collect()
    }

    /// `∂ₓu` with the Nyquist mode dropped.
    pub fn dx(&self, u: &[f64]) -> Vec<f64> {
        let mut h = self.forward(u);
        let nyq = self.grid.n / 2;
        for (i, v) in h.iter_mut().enumerate() {
            *v = if i == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                *v * Complex64::new(0.0, self.k[i])
            };
        }
        self.to_physical(&h)
    }

    fn filter(&self, cfg: &SimConfig, h: &mut [Complex64]) {
        for (v, &k) in h.iter_mut().zip(&self.k) {
            if k.abs() > cfg.k_cut {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn dealias(&self, h: &mut [Complex64]) {
        let keep = self.grid.n as i64 / 3;
        for (i, v) in h.iter_mut().enumerate() {
            if self.grid.mode(i).abs() > keep {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Initial state from physical-space samples, filtered to `k_cut`.
    pub fn initial_state(&self, cfg: &SimConfig, u0: &[f64], ut0: &[f64]) -> Result<SimState> {
        if u0.len() != self.grid.n || ut0.len() != self.grid.n {
            return Err(Error::InvalidParameter(format!(
                "initial data must have {} samples",
                self.grid.n
            )));
        }
        if u0.iter().chain(ut0).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "initial data must be finite".into(),
            ));
        }
        let mut u_hat = self.forward(u0);
        let mut v_hat = self.forward(ut0);
        self.filter(cfg, &mut u_hat);
        self.filter(cfg, &mut v_hat);
        Ok(SimState {
            u_hat,
            v_hat,
            t: 0.0,
        })
    }
}

/// `(dû/dt, dv̂/dt)`, the latter filtered to `k_cut`.
pub fn spectral_rhs(
    sp: &Spectral,
    cfg: &SimConfig,
    u_hat: &[Complex64],
    v_hat: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let s = cfg.fourth_order_sign;
    let mut dv: Vec<Complex64> = u_hat
        .iter()
        .zip(&sp.k)
        .map(|(&u, &k)| u * (-k * k + s * k.powi(4)))
        .collect();
    if cfg.nonlinear {
        let mut uh = u_hat.to_vec();
        if cfg.dealias {
            sp.dealias(&mut uh);
        }
        let u = sp.to_physical(&uh);
        let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
        let mut sq_hat = sp.forward(&sq);
        if cfg.dealias {
            sp.dealias(&mut sq_hat);
        }
        for ((d, w), &k) in dv.iter_mut().zip(&sq_hat).zip(&sp.k) {
            *d -= *w * (3.0 * k * k);
        }
    }
    sp.filter(cfg, &mut dv);
    (v_hat.to_vec(), dv)
}

fn axpy(a: &[Complex64], h: f64, b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| *x + *y * h).collect()
}

pub fn step_rk4(sp: &Spectral, cfg: &SimConfig, state: &SimState) -> SimState {
    let dt = cfg.dt;
    let (u, v) = (&state.u_hat, &state.v_hat);
    let (k1u, k1v) = spectral_rhs(sp, cfg, u, v);
    let (k2u, k2v) = spectral_rhs(sp, cfg, &axpy(u, dt / 2.0, &k1u), &axpy(v, dt / 2.0, &k1v));
    let (k3u, k3v) = spectral_rhs(sp, cfg, &axpy(u, dt / 2.0, &k2u), &axpy(v, dt / 2.0, &k2v));
    let (k4u, k4v) = spectral_rhs(sp, cfg, &axpy(u, dt, &k3u), &axpy(v, dt, &k3v));
    let comb =
        |x: &[Complex64], a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]| {
            let mut out: Vec<Complex64> = (0..x.len())
                .map(|i| x[i] + (a[i] + (b[i] + c[i]) * 2.0 + d[i]) * (dt / 6.0))
                .collect();
            sp.filter(cfg, &mut out);
            out
        };
    SimState {
        u_hat: comb(u, &k1u, &k2u, &k3u, &k4u),
        v_hat: comb(v, &k1v, &k2v, &k3v, &k4v),
        t: state.t + dt,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RunStatus {
    #[serde(rename = "COMPLETED")]
    Completed,
    #[serde(rename = "BLOWUP")]
    Blowup,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Completed => "COMPLETED",
            RunStatus::Blowup => "BLOWUP",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub t: f64,
    /// `∫u dx`.
    pub mass: f64,
    pub sup_norm: f64,
    /// Mean-square content of modes with `|k| > k_cut/2`.
    pub tail_energy: f64,
    pub max_imag: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub t: f64,
    pub u: Vec<f64>,
    pub u_hat: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub status: RunStatus,
    pub final_t: f64,
    pub steps: usize,
    pub threshold: f64,
    pub frames: Vec<Frame>,
    pub diagnostics: Vec<Diagnostics>,
}

fn diagnose(
    sp: &Spectral,
    cfg: &SimConfig,
    t: f64,
    u_hat: &[Complex64],
) -> (Diagnostics, Vec<f64>) {
    let n = sp.grid.n as f64;
    let z = sp.inverse(u_hat);
    let u: Vec<f64> = z.iter().map(|c| c.re).collect();
    let max_imag = z.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let sup_norm = u.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let tail_energy = u_hat
        .iter()
        .zip(&sp.k)
        .filter(|(_, k)| k.abs() > cfg.k_cut / 2.0)
        .map(|(c, _)| c.norm_sqr())
        .sum::<f64>()
        / (n * n);
    (
        Diagnostics {
            t,
            mass: u_hat[0].re * sp.grid.l / n,
            sup_norm,
            tail_energy,
            max_imag,
        },
        u,
    )
}

/// Integrates from `(u0, ut0)` until `t_end` or until the sup-norm passes
/// the blow-up threshold. `t_end/dt` is rounded to a whole step count.
pub fn run(u0: &[f64], ut0: &[f64], cfg: &SimConfig, grid: &Grid1D) -> Result<Trajectory> {
    cfg.validate(grid)?;
    let sp = Spectral::new(*grid);
    let mut state = sp.initial_state(cfg, u0, ut0)?;
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let (d0, u) = diagnose(&sp, cfg, 0.0, &state.u_hat);
    let threshold = cfg.blowup_threshold.unwrap_or(1e3 * d0.sup_norm);
    let mut frames = vec![Frame {
        t: 0.0,
        u,
        u_hat: state.u_hat.clone(),
    }];
    let mut diagnostics = vec![d0];
    let mut status = RunStatus::Completed;
    let mut done = 0;
    for step in 1..=steps {
        state = step_rk4(&sp, cfg, &state);
        state.t = step as f64 * cfg.dt;
        done = step;
        let (d, u) = diagnose(&sp, cfg, state.t, &state.u_hat);
        let blew = !(d.sup_norm <= threshold) && d.sup_norm > 0.0;
        if step % cfg.output_stride == 0 || step == steps || blew {
            frames.push(Frame {
                t: state.t,
                u,
                u_hat: state.u_hat.clone(),
            });
            diagnostics.push(d);
        }
        if blew {
            status = RunStatus::Blowup;
            break;
        }
    }
    Ok(Trajectory {
        status,
        final_t: done as f64 * cfg.dt,
        steps: done,
        threshold,
        frames,
        diagnostics,
    })
}

/// Uniform white noise of amplitude `amp`, reproducible from `seed`.
pub fn white_noise(n: usize, amp: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| amp * (2.0 * rng.gen::<f64>() - 1.0))
        .collect()
}

/// Position of the maximum of a periodic sample, refined by a parabola
/// through the three largest neighbours.
pub fn peak_position(u: &[f64], grid: &Grid1D) -> f64 {
    let n = u.len();
    let (i, _) =
        u.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let (a, b, c) = (u[(i + n - 1) % n], u[i], u[(i + 1) % n]);
    let den = a - 2.0 * b + c;
    let off = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
    (grid.x(i) + off * grid.dx()).rem_euclid(grid.l)
}


#[cfg(test)]
mod convergence {
    use super::*;

    fn gaussian(grid: &Grid1D) -> Vec<f64> {
        let c = grid.l / 2.0;
        grid.sample(|x| 0.1 * (-(x - c).powi(2) / 4.0).exp())
    }

    fn final_u(n: usize, dt: f64) -> (Grid1D, Vec<f64>) {
        let grid = Grid1D::new(n, 40.0).unwrap();
        let mut cfg = SimConfig::new(-1.0, dt, 2.0, &grid);
        cfg.k_cut = grid.nyquist();
        cfg.dealias = false;
        let tr = run(&gaussian(&grid), &vec![0.0; n], &cfg, &grid).unwrap();
        assert_eq!(tr.status, RunStatus::Completed);
        (grid, tr.frames.last().unwrap().u.clone())
    }

    /// Difference between a run and the next finer one, on the coarse points.
    fn coarse_gap(n: usize, dt: f64) -> f64 {
        let (_, a) = final_u(n, dt);
        let (_, b) = final_u(2 * n, dt);
        a.iter()
            .enumerate()
            .map(|(i, v)| (v - b[2 * i]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn spatial_self_convergence_is_spectral() {
        let dt = 0.002;
        let e32 = coarse_gap(32, dt);
        let e64 = coarse_gap(64, dt);
        assert!(
            e32 / e64 > 100.0,
            "gap ratio {} ({e32:.3e} / {e64:.3e})",
            e32 / e64
        );
    }

    #[test]
    fn rk4_error_drops_sixteenfold() {
        let grid = Grid1D::new(32, 40.0).unwrap();
        let u0 = gaussian(&grid);
        let at = |dt: f64| {
            let mut cfg = SimConfig::new(-1.0, dt, 2.0, &grid);
            cfg.k_cut = grid.nyquist();
            run(&u0, &vec![0.0; grid.n], &cfg, &grid)
                .unwrap()
                .frames
                .last()
                .unwrap()
                .u
                .clone()
        };
        let (u1, u2, u4) = (at(0.02), at(0.01), at(0.005));
        let gap = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        };
        let ratio = gap(&u1, &u2) / gap(&u2, &u4);
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn fields_stay_real_and_mass_is_linear() {
        let grid = Grid1D::new(64, 8.0 * PI).unwrap();
        let u0: Vec<f64> = grid
            .sample(|x| 0.05 * (0.25 * x).cos() + 0.02)
            .iter()
            .zip(white_noise(grid.n, 1e-3, 4))
            .map(|(a, b)| a + b)
            .collect();
        let ut0 = vec![0.01; grid.n];
        let cfg = SimConfig::new(1.0, 0.05, 20.0, &grid);
        let tr = run(&u0, &ut0, &cfg, &grid).unwrap();
        assert_eq!(tr.status, RunStatus::Completed);
        for d in &tr.diagnostics {
            assert!(d.max_imag < 1e-12, "imag {}", d.max_imag);
        }
        for w in tr.diagnostics.windows(3) {
            assert!((w[2].mass - 2.0 * w[1].mass + w[0].mass).abs() < 1e-8);
        }
        assert!(tr.diagnostics.last().unwrap().mass > tr.diagnostics[0].mass);
    }

    #[test]
    fn cutoff_keeps_noisy_assigned_run_bounded() {
        let grid = Grid1D::new(32, 14.0 * PI).unwrap();
        let cfg = SimConfig::new(1.0, 0.01, 10.0, &grid);
        let u0 = white_noise(grid.n, 1e-8, 9);
        let tr = run(&u0, &vec![0.0; grid.n], &cfg, &grid).unwrap();
        assert_eq!(tr.status, RunStatus::Completed);
    }

    #[test]
    fn runs_are_bitwise_reproducible() {
        let grid = Grid1D::new(64, 30.0).unwrap();
        let cfg = SimConfig::new(-1.0, 0.01, 1.0, &grid);
        let u0 = gaussian(&grid);
        let a = run(&u0, &vec![0.0; grid.n], &cfg, &grid).unwrap();
        let b = run(&u0, &vec![0.0; grid.n], &cfg, &grid).unwrap();
        assert_eq!(a, b);
    }
}
