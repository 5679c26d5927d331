//! Central finite-difference stencils, kept as an oracle independent of the
//! jet arithmetic.

use crate::error::{Error, Result};

/// A one-dimensional central stencil.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilSpec {
    pub order: usize,
    pub step: f64,
    /// 2 or 4.
    pub accuracy: usize,
}

impl StencilSpec {
    pub fn new(order: usize, step: f64, accuracy: usize) -> Result<Self> {
        if accuracy != 2 && accuracy != 4 {
            return Err(Error::InvalidParameter(format!(
                "stencil accuracy must be 2 or 4, got {accuracy}"
            )));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidParameter(format!("stencil step {step}")));
        }
        Ok(StencilSpec {
            order,
            step,
            accuracy,
        })
    }

    /// Half width of the central stencil.
    pub fn half_width(&self) -> usize {
        if self.order == 0 {
            return 0;
        }
        self.order.div_ceil(2) + self.accuracy / 2 - 1
    }

    /// `(offset, weight)` pairs for unit spacing; divide by `step^order`.
    pub fn unit_weights(&self) -> Vec<(i64, f64)> {
        stencil_weights(self.order, self.half_width())
    }

    /// Applies the stencil to a one-dimensional sampler around `x0`.
    pub fn apply(&self, f: impl Fn(f64) -> f64, x0: f64) -> f64 {
        let scale = self.step.powi(self.order as i32);
        self.unit_weights()
            .into_iter()
            .map(|(o, w)| w * f(x0 + o as f64 * self.step))
            .sum::<f64>()
            / scale
    }
}

/// Fornberg's recursion for the weights of the `order`-th derivative on the
/// integer nodes `-half..=half`, evaluated at 0.
pub fn stencil_weights(order: usize, half: usize) -> Vec<(i64, f64)> {
    let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|k| k as f64).collect();
    let n = nodes.len();
    let m = order;
    // delta[k][j]: weight of node j for derivative k using the first nodes
    let mut delta = vec![vec![0.0; n]; m + 1];
    delta[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mn = m.min(i);
        let mut c2 = 1.0;
        let c4 = nodes[i];
        let c5 = nodes[i - 1];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                // new node, from the previous node's weights before they are updated
                for k in (1..=mn).rev() {
                    delta[k][i] = c1 * (k as f64 * delta[k - 1][i - 1] - c5 * delta[k][i - 1]) / c2;
                }
                delta[0][i] = -c1 * c5 * delta[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                delta[k][j] = (c4 * delta[k][j] - k as f64 * delta[k - 1][j]) / c3;
            }
            delta[0][j] = c4 * delta[0][j] / c3;
        }
        c1 = c2;
    }
    nodes
        .iter()
        .zip(delta[m].iter())
        .map(|(&x, &w)| (x as i64, w))
        .collect()
}

/// Step-size and accuracy choices for [`fd_partial`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    /// Overrides the order-dependent default step when set.
    pub step: Option<f64>,
    pub accuracy: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step: None,
            accuracy: 4,
        }
    }
}

impl FdConfig {
    /// Default steps: 1e-2 through total order 2, 5e-2 for orders 3 to 6.
    pub fn step_for(&self, total_order: usize) -> f64 {
        self.step
            .unwrap_or(if total_order <= 2 { 1e-2 } else { 5e-2 })
    }
}

/// Tensor-product central difference for `∂^{i+k} f / ∂x^i ∂t^k`.
pub fn fd_partial(
    field: impl Fn(f64, f64) -> f64,
    x0: f64,
    t0: f64,
    i: usize,
    k: usize,
    cfg: FdConfig,
) -> Result<f64> {
    if i + k > 6 {
        return Err(Error::InvalidParameter(format!(
            "finite-difference order {} exceeds 6",
            i + k
        )));
    }
    let h = cfg.step_for(i + k);
    let sx = StencilSpec::new(i, h, cfg.accuracy)?;
    let st = StencilSpec::new(k, h, cfg.accuracy)?;
    let wx = sx.unit_weights();
    let wt = st.unit_weights();
    let mut acc = 0.0;
    for &(ox, ax) in &wx {
        for &(ot, at) in &wt {
            acc += ax * at * field(x0 + ox as f64 * h, t0 + ot as f64 * h);
        }
    }
    Ok(acc / (h.powi(i as i32) * h.powi(k as i32)))
}
