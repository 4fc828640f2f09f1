//! Globally adaptive Gauss–Legendre integration.
//!
//! Each panel is integrated with a fixed 16-point rule, both whole and as two
//! halves; the difference is the panel's error estimate. The panel with the
//! largest estimate is bisected until the summed estimate falls below the
//! relative tolerance. This resolves the logarithmic pile-up of the Unruh
//! occupation near zero frequency without any special-casing.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Order of the fixed rule applied on every panel.
pub const RULE_ORDER: usize = 16;

/// Successive refinements must agree to this relative precision.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

const DEFAULT_MAX_PANELS: usize = 4096;

pub(crate) fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(RULE_ORDER).expect("order >= 2"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Absolute error estimate summed over panels.
    pub error: f64,
    pub panels: usize,
}

impl Estimate {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error
        } else {
            self.error / self.value.abs()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    left: f64,
    right: f64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, whole: f64) -> Self {
        let mid = 0.5 * (lo + hi);
        let left = rule().integrate(lo, mid, f);
        let right = rule().integrate(mid, hi, f);
        Panel {
            lo,
            hi,
            left,
            right,
            error: (left + right - whole).abs(),
        }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveGaussLegendre {
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveGaussLegendre {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

impl AdaptiveGaussLegendre {
    /// Integrates `f` over `[lo, hi]`, starting from `initial_panels` equal
    /// panels. `name` labels the convergence error.
    pub fn integrate<F>(
        &self,
        name: &'static str,
        f: F,
        lo: f64,
        hi: f64,
        initial_panels: usize,
    ) -> Result<Estimate>
    where
        F: Fn(f64) -> f64,
    {
        assert!(hi > lo, "empty integration window [{lo}, {hi}]");
        let n0 = initial_panels.max(1);
        let width = (hi - lo) / n0 as f64;
        let mut panels: Vec<Panel> = (0..n0)
            .map(|k| {
                let a = lo + width * k as f64;
                let b = if k + 1 == n0 { hi } else { a + width };
                let whole = rule().integrate(a, b, &f);
                Panel::new(&f, a, b, whole)
            })
            .collect();

        loop {
            let value: f64 = panels.iter().map(Panel::value).sum();
            let error: f64 = panels.iter().map(|p| p.error).sum();
            if error <= self.rel_tol * value.abs() || error < f64::MIN_POSITIVE {
                return Ok(Estimate {
                    value,
                    error,
                    panels: panels.len(),
                });
            }
            if panels.len() >= self.max_panels {
                return Err(Error::Convergence {
                    integral: name,
                    estimate: if value == 0.0 {
                        error
                    } else {
                        error / value.abs()
                    },
                    panels: panels.len(),
                });
            }
            let (worst, _) = panels
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
                .expect("at least one panel");
            let p = panels.swap_remove(worst);
            let mid = 0.5 * (p.lo + p.hi);
            if !(mid > p.lo && mid < p.hi) {
                // Panel width is at the floating-point floor.
                return Err(Error::Convergence {
                    integral: name,
                    estimate: error / value.abs().max(f64::MIN_POSITIVE),
                    panels: panels.len() + 1,
                });
            }
            panels.push(Panel::new(&f, p.lo, mid, p.left));
            panels.push(Panel::new(&f, mid, p.hi, p.right));
        }
    }
}

/// Composite fixed-order rule: `panels` equal panels of [`RULE_ORDER`] nodes.
pub fn composite_nodes(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let width = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * RULE_ORDER);
    for k in 0..panels {
        let a = lo + width * k as f64;
        let half = 0.5 * width;
        let centre = a + half;
        for &(x, w) in rule().as_node_weight_pairs() {
            out.push((centre + half * x, half * w));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}
