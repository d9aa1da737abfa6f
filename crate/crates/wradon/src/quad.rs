//! Oscillation-aware composite Gauss-Legendre quadrature.
//!
//! The integrands here have exactly known phase (`8^k r^2` inside shell k),
//! so each integration domain is split into segments carrying a bound on the
//! phase rate, and panel lengths are capped so the phase advances at most
//! `points_per_oscillation / gauss_order * pi` per panel. Every panel is
//! evaluated at the configured order and at half order; the absolute sum of
//! the differences is the reported error estimate.
//!
//! Panel sums are accumulated by fixed-order pairwise reduction, so results
//! are bit-identical regardless of thread count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::config::QuadratureConfig;
use crate::error::{Result, WradonError};
use crate::radial::{RadialProfile, ShellIndex};

/// Result of one quadrature: value, an honest error estimate, and the number
/// of integrand evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: u64,
}

impl Quadrature {
    pub const ZERO: Quadrature = Quadrature {
        value: 0.0,
        error_estimate: 0.0,
        evals: 0,
    };
}

/// One integration segment with a bound on |d(phase)/dx|.
/// `phase_rate == 0` marks a smooth segment.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub phase_rate: f64,
}

fn gauss_nodes(n: u32) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(compute_gauss_legendre(n as usize)))
        .clone()
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // recurrence for P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-shape pairwise summation; independent of chunking or thread count.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2..=8 => xs.iter().sum(),
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
}

fn plan_panels(segments: &[Segment], cfg: &QuadratureConfig) -> Vec<Panel> {
    let phase_cap = cfg.phase_per_panel();
    let mut panels = Vec::new();
    for seg in segments {
        let len = seg.b - seg.a;
        if len <= 0.0 {
            continue;
        }
        let n = if seg.phase_rate > 0.0 {
            let cap = phase_cap / seg.phase_rate;
            ((len / cap).ceil() as usize).max(1)
        } else {
            // smooth segment: a handful of panels suffices at order >= 8
            4
        };
        for i in 0..n {
            let a = seg.a + len * i as f64 / n as f64;
            let b = seg.a + len * (i + 1) as f64 / n as f64;
            panels.push(Panel { a, b });
        }
    }
    panels
}

fn panel_pair<F: Fn(f64) -> f64>(f: &F, p: &Panel, hi: &[(f64, f64)], lo: &[(f64, f64)]) -> (f64, f64) {
    let c = 0.5 * (p.a + p.b);
    let h = 0.5 * (p.b - p.a);
    let mut v_hi = 0.0;
    for &(x, w) in hi {
        v_hi += w * f(c + h * x);
    }
    let mut v_lo = 0.0;
    for &(x, w) in lo {
        v_lo += w * f(c + h * x);
    }
    (v_hi * h, (v_hi - v_lo).abs() * h)
}

/// Integrate `f` over the planned segments. Errors with `BudgetExceeded`
/// (carrying a down-sampled best estimate) if the plan needs more integrand
/// evaluations than `cfg.max_evals`.
pub fn integrate_segments<F>(f: F, segments: &[Segment], cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut panels = plan_panels(segments, cfg);
    if panels.is_empty() {
        return Ok(Quadrature::ZERO);
    }
    let order = cfg.gauss_order;
    let order_lo = (order / 2).max(1);
    let cost_per_panel = (order + order_lo) as u64;
    let needed = panels.len() as u64 * cost_per_panel;

    let mut budget_hit = None;
    if needed > cfg.max_evals {
        // degrade to the affordable panel count and report the attempt
        let keep = ((cfg.max_evals / cost_per_panel) as usize).max(1);
        let stride = (panels.len() + keep - 1) / keep;
        let mut reduced = Vec::with_capacity(keep);
        let mut i = 0;
        while i < panels.len() {
            let j = (i + stride).min(panels.len());
            reduced.push(Panel {
                a: panels[i].a,
                b: panels[j - 1].b,
            });
            i = j;
        }
        panels = reduced;
        budget_hit = Some(needed);
    }

    let hi_nw = gauss_nodes(order);
    let lo_nw = gauss_nodes(order_lo);
    let hi: Vec<(f64, f64)> = hi_nw.0.iter().copied().zip(hi_nw.1.iter().copied()).collect();
    let lo: Vec<(f64, f64)> = lo_nw.0.iter().copied().zip(lo_nw.1.iter().copied()).collect();

    let results: Vec<(f64, f64)> = if panels.len() >= 2048 {
        panels
            .par_iter()
            .map(|p| panel_pair(&f, p, &hi, &lo))
            .collect()
    } else {
        panels.iter().map(|p| panel_pair(&f, p, &hi, &lo)).collect()
    };

    let values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let errors: Vec<f64> = results.iter().map(|r| r.1).collect();
    let value = pairwise_sum(&values);
    let magnitude: f64 = values.iter().map(|v| v.abs()).sum();
    let error_estimate = pairwise_sum(&errors).max(magnitude * 1e-16);
    let evals = panels.len() as u64 * cost_per_panel;

    if let Some(needed) = budget_hit {
        return Err(WradonError::BudgetExceeded {
            needed,
            allowed: cfg.max_evals,
            estimate: value,
            error_estimate,
        });
    }
    Ok(Quadrature {
        value,
        error_estimate,
        evals,
    })
}

/// Segment plan for a radial integral over `[lo, hi]`, split at every shell
/// boundary of the profile plus any extra breakpoints (e.g. local-weight bump
/// edges). Shell segments carry the exact phase rate
/// `freq_scale * 2 * 8^k * r`.
pub fn plan_radial_segments(
    profile: &RadialProfile,
    lo: f64,
    hi: f64,
    freq_scale: f64,
    extra_breakpoints: &[f64],
) -> Vec<Segment> {
    if hi <= lo {
        return Vec::new();
    }
    let mut cuts = vec![lo, hi];
    for p in profile.shell_breakpoints() {
        if p > lo && p < hi {
            cuts.push(p);
        }
    }
    for &p in extra_breakpoints {
        if p > lo && p < hi {
            cuts.push(p);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut segments = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let rate = match profile.shell_of_radius(mid) {
            Some(k) => freq_scale * 2.0 * k.eight_pow() * b,
            None => 0.0,
        };
        segments.push(Segment {
            a,
            b,
            phase_rate: rate,
        });
    }
    segments
}

/// Plane integral of a radial integrand: `int_{P_s} g(|x|) dx
/// = 2 pi int_{|s|}^{1} g(r) r dr`, independent of the plane orientation.
///
/// The domain is truncated at r = 1 (the profile family is supported in the
/// closed unit ball). Returns 0 for `|s| >= 1`.
pub fn integrate_plane_radial<F>(
    profile: &RadialProfile,
    g: F,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_plane_radial_opts(profile, g, s, cfg, 1.0, &[])
}

/// [`integrate_plane_radial`] with an oscillation-frequency multiplier
/// (2 for squared shell integrands) and extra segment breakpoints.
pub fn integrate_plane_radial_opts<F>(
    profile: &RadialProfile,
    g: F,
    s: f64,
    cfg: &QuadratureConfig,
    freq_scale: f64,
    extra_breakpoints: &[f64],
) -> Result<Quadrature>
where
    F: Fn(f64) -> f64 + Sync,
{
    let lo = s.abs();
    if lo >= 1.0 {
        return Ok(Quadrature::ZERO);
    }
    let segments = plan_radial_segments(profile, lo, 1.0, freq_scale, extra_breakpoints);
    let two_pi = 2.0 * std::f64::consts::PI;
    let q = integrate_segments(|r| g(r) * r, &segments, cfg)?;
    Ok(Quadrature {
        value: two_pi * q.value,
        error_estimate: two_pi * q.error_estimate,
        evals: q.evals,
    })
}

/// u-window of shell k at offset s: `{u >= 1 : 2^k (1 - |s| sqrt(u)) in
/// [4/5, 6/5]}`, empty when the plane misses the shell.
pub fn lambda_window(k: ShellIndex, s: f64) -> Option<(f64, f64)> {
    let sa = s.abs();
    if sa <= 0.0 {
        return None;
    }
    let (r_in, r_out) = k.bounds();
    if sa >= r_out {
        return None;
    }
    let u_lo = (r_in.max(sa) / sa).powi(2).max(1.0);
    let u_hi = (r_out / sa).powi(2);
    if u_hi <= u_lo {
        return None;
    }
    Some((u_lo, u_hi))
}

/// Shell-k plane integral in the u-variable form:
/// `pi s^2 int_Lambda phi(2^k (1 - |s| sqrt(u))) cos(8^k s^2 u) du`.
///
/// Equal to the r-form plane integral of `f_k` by the change of variables
/// `u = r^2 / s^2`.
pub fn g_k_oscillatory(
    profile: &RadialProfile,
    k: ShellIndex,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let sa = s.abs();
    let Some((u_lo, u_hi)) = lambda_window(k, s) else {
        return Ok(Quadrature::ZERO);
    };
    let omega = k.eight_pow() * sa * sa; // exact phase rate in u
    let seg = Segment {
        a: u_lo,
        b: u_hi,
        phase_rate: omega,
    };
    let two_k = k.two_pow();
    let bump = profile.bump;
    let q = integrate_segments(
        |u| bump.eval(two_k * (1.0 - sa * u.sqrt())) * (omega * u).cos(),
        &[seg],
        cfg,
    )?;
    let pref = std::f64::consts::PI * sa * sa;
    Ok(Quadrature {
        value: pref * q.value,
        error_estimate: pref * q.error_estimate,
        evals: q.evals,
    })
}

/// r-form of the shell-k plane integral, for cross-checking the u-form.
pub fn g_k_radial(
    profile: &RadialProfile,
    k: ShellIndex,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    integrate_plane_radial(profile, |r| profile.f_k(k, r), s, cfg)
}
