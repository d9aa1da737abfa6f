//! The radial shell family: the profile `f`, its per-shell components
//! `f_k(r) = phi(2^k (1 - r)) cos(8^k r^2)`, and shell geometry.
//!
//! Shell k occupies the open radial interval
//! `(1 - (6/5) 2^-k, 1 - (4/5) 2^-k)`; the intervals are pairwise disjoint,
//! so at any radius at most one component is active and the series
//! `f = sum_k f_k / k!` reduces to a single term.

use serde::{Deserialize, Serialize};

use crate::bump::BumpSpec;

/// 1-based shell index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShellIndex(pub u32);

impl ShellIndex {
    pub fn new(k: u32) -> Self {
        assert!(k >= 1, "shell index must be >= 1");
        Self(k)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Open radial support `(1 - (6/5) 2^-k, 1 - (4/5) 2^-k)`.
    pub fn bounds(self) -> (f64, f64) {
        let p = 2f64.powi(-(self.0 as i32));
        (1.0 - 1.2 * p, 1.0 - 0.8 * p)
    }

    /// Radial interval on which the bump factor is exactly 1.
    pub fn plateau(self) -> (f64, f64) {
        let p = 2f64.powi(-(self.0 as i32));
        (1.0 - 1.1 * p, 1.0 - 0.9 * p)
    }

    /// 2^k as f64.
    pub fn two_pow(self) -> f64 {
        2f64.powi(self.0 as i32)
    }

    /// 8^k as f64.
    pub fn eight_pow(self) -> f64 {
        8f64.powi(self.0 as i32)
    }

    /// k! as f64 (exact for k <= 20, ample for any usable truncation).
    pub fn factorial(self) -> f64 {
        (1..=self.0 as u64).map(|v| v as f64).product()
    }
}

/// The truncated radial profile: bump shape plus series truncation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub bump: BumpSpec,
    pub k_max: u32,
}

impl RadialProfile {
    pub fn new(bump: BumpSpec, k_max: u32) -> Self {
        assert!(k_max >= 1);
        Self { bump, k_max }
    }

    /// Paper profile truncated at the given order.
    pub fn standard(k_max: u32) -> Self {
        Self::new(BumpSpec::phi_default(), k_max)
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.bump.eval(t)
    }

    pub fn phi_deriv_max(&self) -> f64 {
        self.bump.deriv_max()
    }

    /// Shell component `phi(2^k (1-r)) cos(8^k r^2)`, without the 1/k!
    /// series factor.
    pub fn f_k(&self, k: ShellIndex, r: f64) -> f64 {
        let t = k.two_pow() * (1.0 - r);
        let amp = self.bump.eval(t);
        if amp == 0.0 {
            return 0.0;
        }
        amp * (k.eight_pow() * r * r).cos()
    }

    /// The unique shell whose open support contains `r`, if any.
    ///
    /// The admissible k solves `4/5 < 2^k (1-r) < 6/5`; the interval of
    /// admissible real k has length log2(3/2) < 1 so at most one integer
    /// fits.
    pub fn shell_of_radius(&self, r: f64) -> Option<ShellIndex> {
        if r >= 1.0 || r <= 1.0 - 0.6 {
            return None;
        }
        let rho = 1.0 - r;
        // smallest k with 2^k rho > 4/5
        let k_lo = (0.8 / rho).log2().floor() as i64 + 1;
        for k in [k_lo - 1, k_lo, k_lo + 1] {
            if k < 1 || k > self.k_max as i64 {
                continue;
            }
            let t = 2f64.powi(k as i32) * rho;
            if t > 0.8 && t < 1.2 {
                return Some(ShellIndex(k as u32));
            }
        }
        None
    }

    /// The truncated series `f(r)`. Single-term by disjointness of shells.
    pub fn f(&self, r: f64) -> f64 {
        match self.shell_of_radius(r) {
            Some(k) => self.f_k(k, r) / k.factorial(),
            None => 0.0,
        }
    }

    /// Radii in `(lo, hi)` where `cos(8^k r^2)` is exactly at an extremum,
    /// i.e. `8^k r^2 = n pi`. Returns `(r, sign)` pairs with
    /// `sign = cos(n pi) = (-1)^n`.
    pub fn cos_extrema_in(&self, k: ShellIndex, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let w = k.eight_pow();
        let lo = lo.max(0.0);
        if hi <= lo {
            return Vec::new();
        }
        let n_lo = (w * lo * lo / std::f64::consts::PI).ceil() as i64;
        let n_hi = (w * hi * hi / std::f64::consts::PI).floor() as i64;
        (n_lo..=n_hi)
            .map(|n| {
                let r = (n as f64 * std::f64::consts::PI / w).sqrt();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                (r, sign)
            })
            .collect()
    }

    /// All shell boundary radii up to `k_max`, ascending. Used to partition
    /// quadrature domains.
    pub fn shell_breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(2 * self.k_max as usize);
        for k in 1..=self.k_max {
            let (a, b) = ShellIndex(k).bounds();
            pts.push(a);
            pts.push(b);
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile() -> RadialProfile {
        RadialProfile::standard(10)
    }

    /// Brute-force membership oracle over all k <= 60.
    fn shell_oracle(r: f64) -> Option<u32> {
        for k in 1..=60u32 {
            let p = 2f64.powi(-(k as i32));
            if r > 1.0 - 1.2 * p && r < 1.0 - 0.8 * p {
                return Some(k);
            }
        }
        None
    }

    #[test]
    fn shell_of_radius_examples() {
        let p = profile();
        // 2^3 (1 - 0.875) = 1.0 in (4/5, 6/5)
        assert_eq!(p.shell_of_radius(0.875), Some(ShellIndex(3)));
        assert_eq!(p.shell_of_radius(0.5), None);
    }

    #[test]
    fn shell_of_radius_matches_bruteforce() {
        let p = RadialProfile::standard(60);
        // deterministic pseudo-uniform sweep of 10^4 radii
        let mut x = 0.123456789f64;
        for _ in 0..10_000 {
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let r = x * 0.9999 + 1e-6;
            assert_eq!(
                p.shell_of_radius(r).map(|k| k.0),
                shell_oracle(r),
                "r = {r}"
            );
        }
    }

    #[test]
    fn f_k_examples() {
        let p = profile();
        // plateau value times cosine with exact rational argument 392
        let v = p.f_k(ShellIndex(3), 0.875);
        assert_eq!(v, (392.0f64).cos());
        // outside support: 2^3 * 0.16 = 1.28 > 6/5
        assert_eq!(p.f_k(ShellIndex(3), 0.84), 0.0);
    }

    #[test]
    fn f_examples() {
        let p = profile();
        assert_eq!(p.f(1.0), 0.0);
        assert_eq!(p.f(1.3), 0.0);
        assert_eq!(p.f(0.875), p.f_k(ShellIndex(3), 0.875) / 6.0);
    }

    #[test]
    fn per_shell_decomposition_oracle() {
        // sum of |f| over a grid equals the sum over shells computed
        // independently per shell
        let p = RadialProfile::standard(8);
        let n = 1_000_000usize;
        let mut total = 0.0;
        let mut by_shell = 0.0;
        for i in 0..n {
            let r = 0.3 + 0.7 * i as f64 / n as f64;
            total += p.f(r).abs();
            for k in 1..=8 {
                let k = ShellIndex(k);
                by_shell += (p.f_k(k, r) / k.factorial()).abs();
            }
        }
        assert_eq!(total, by_shell);
    }

    #[test]
    fn plateau_identity() {
        let p = profile();
        for k in 1..=8u32 {
            let k = ShellIndex(k);
            let (lo, hi) = k.plateau();
            let r = 0.5 * (lo + hi);
            assert_eq!(p.f(r), (k.eight_pow() * r * r).cos() / k.factorial());
        }
    }

    #[test]
    fn smoothness_proxy_at_shell_boundaries() {
        // first and second central differences converge with no jump across
        // every shell boundary
        let p = RadialProfile::standard(6);
        for k in 1..=6u32 {
            let (a, b) = ShellIndex(k).bounds();
            for r0 in [a, b] {
                let mut prev_d1 = f64::INFINITY;
                let mut prev_d2 = f64::INFINITY;
                for e in [1e-3, 1e-4, 1e-5] {
                    let d1 = (p.f(r0 + e) - p.f(r0 - e)) / (2.0 * e);
                    let d2 = (p.f(r0 + e) - 2.0 * p.f(r0) + p.f(r0 - e)) / (e * e);
                    prev_d1 = d1;
                    prev_d2 = d2;
                }
                // f and derivatives vanish to all orders at the boundary,
                // so the difference quotients must be tiny at small steps
                assert!(prev_d1.abs() < 1e-3, "k={k} r0={r0} d1={prev_d1}");
                assert!(prev_d2.abs() < 1.0, "k={k} r0={r0} d2={prev_d2}");
            }
        }
    }

    proptest! {
        #[test]
        fn f_k_bounded_by_one(k in 1u32..12, r in 0.0f64..1.5) {
            let p = profile();
            prop_assert!(p.f_k(ShellIndex(k), r).abs() <= 1.0);
        }

        #[test]
        fn disjoint_supports(k in 1u32..12, kp in 1u32..12, r in 0.0f64..1.5) {
            prop_assume!(k != kp);
            let p = profile();
            let prod = p.f_k(ShellIndex(k), r) * p.f_k(ShellIndex(kp), r);
            prop_assert_eq!(prod, 0.0);
        }

        #[test]
        fn f_bounded_by_shell_factorial(r in 0.0f64..1.5) {
            let p = profile();
            let v = p.f(r).abs();
            prop_assert!(v <= 1.0);
            if let Some(k) = p.shell_of_radius(r) {
                prop_assert!(v <= 1.0 / k.factorial() + f64::EPSILON);
            } else {
                prop_assert_eq!(v, 0.0);
            }
        }
    }
}
