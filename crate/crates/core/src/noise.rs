//! The noise operator `T_ρ`, noise stability, and the directed operator
//! `T^{p→q}` along the monotone coupling `D(p,q)`.
//!
//! The coupling `D(p,q)` is determined per coordinate by `x_i ≤ y_i` and
//! the two marginals: `Pr[x_i=1, y_i=1] = p`, `Pr[x_i=0, y_i=1] = q − p`,
//! `Pr[x_i=0, y_i=0] = 1 − q`. Conditioning gives the kernels used here:
//!
//! * `T^{p→q}` (given `y`): `y_i = 0 ⇒ x_i = 0`; `y_i = 1 ⇒ x_i = 1` w.p. `p/q`.
//! * `T^{q→p}` (given `x`): `x_i = 1 ⇒ y_i = 1`; `x_i = 0 ⇒ y_i = 1` w.p. `(q−p)/(1−p)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cube::{CubeFunction, SpectralForm};
use crate::error::{out_of_range, Error, Result};
use crate::influence::globalness;
use crate::scalar::{le_rel, Scalar};

/// Largest `n` for which the `O(4^n)` kernel enumeration is allowed.
pub const KERNEL_N_CAP: usize = 12;

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if rho >= T::zero() && rho <= T::one() {
        Ok(())
    } else {
        Err(out_of_range("rho", rho.as_f64(), "[0, 1]"))
    }
}

/// `T_ρ` on a spectrum: `f̂(S) ↦ ρ^{|S|} f̂(S)`.
pub fn noise_spectrum<T: Scalar>(spec: &SpectralForm<T>, rho: T) -> Result<SpectralForm<T>> {
    check_rho(rho)?;
    Ok(spec.scale_levels(|k| rho.powi(k as i32)))
}

/// `T_ρ f` via the spectral multiplier.
pub fn apply_noise<T: Scalar>(f: &CubeFunction<T>, rho: T) -> Result<CubeFunction<T>> {
    Ok(noise_spectrum(&f.forward(), rho)?.inverse())
}

/// `T_ρ f(x) = Σ_y Pr[N_ρ(x) = y] f(y)`, enumerating the full transition
/// kernel. Verification only; `n ≤ KERNEL_N_CAP`.
pub fn apply_noise_kernel<T: Scalar>(f: &CubeFunction<T>, rho: T) -> Result<CubeFunction<T>> {
    check_rho(rho)?;
    let n = f.n();
    if n > KERNEL_N_CAP {
        return Err(Error::DimensionCap {
            n,
            cap: KERNEL_N_CAP,
        });
    }
    let p = f.cube().p();
    let q = T::one() - p;
    // k[a][b] = Pr[y_i = b | x_i = a].
    let k = [
        [rho + (T::one() - rho) * q, (T::one() - rho) * p],
        [(T::one() - rho) * q, rho + (T::one() - rho) * p],
    ];
    let v = f.values();
    Ok(CubeFunction::from_fn(*f.cube(), |x| {
        (0..v.len())
            .map(|y| {
                let w: T = (0..n).map(|i| k[x >> i & 1][y >> i & 1]).product();
                w * v[y]
            })
            .sum()
    }))
}

/// `Stab_ρ(f) = ⟨f, T_ρ f⟩ = Σ_S ρ^{|S|} f̂(S)²`.
pub fn noise_stability<T: Scalar>(f: &CubeFunction<T>, rho: T) -> Result<T> {
    check_rho(rho)?;
    Ok(f.forward()
        .level_mass()
        .iter()
        .enumerate()
        .map(|(k, &w)| rho.powi(k as i32) * w)
        .sum())
}

/// Draws `count` pairs `(x, y)` with `x ∼ μ_p`, `y ∼ N_ρ(x)`.
pub fn sample_noisy_pairs(n: usize, p: f64, rho: f64, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut x = 0usize;
            let mut y = 0usize;
            for i in 0..n {
                let xi = rng.random_bool(p);
                let yi = if rng.random_bool(rho) { xi } else { rng.random_bool(p) };
                x |= (xi as usize) << i;
                y |= (yi as usize) << i;
            }
            (x, y)
        })
        .collect()
}

/// Monte Carlo estimate of `Stab_ρ(f)` from `count` seeded noisy pairs.
pub fn noise_stability_mc(f: &CubeFunction<f64>, rho: f64, count: usize, seed: u64) -> f64 {
    let pairs = sample_noisy_pairs(f.n(), f.cube().p(), rho, count, seed);
    pairs.iter().map(|&(x, y)| f.at(x) * f.at(y)).sum::<f64>() / count.max(1) as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct NoiseSensitivityReport<T> {
    pub rho: T,
    pub eps: T,
    /// `log(2/ε)/log(1/ρ)` and its ceiling, used as the restriction budget.
    pub r_exact: T,
    pub r: usize,
    pub delta: T,
    pub mu: T,
    pub global: bool,
    pub sparse: bool,
    pub hypotheses: bool,
    pub stab: T,
    pub bound: T,
    pub conclusion: bool,
}

/// Evaluates both sides of "`(r,δ)`-global with `μ_p(f) < δ` ⇒
/// `Stab_ρ(f) ≤ ε μ_p(f)`" on `f`.
pub fn noise_sensitivity_check<T: Scalar>(
    f: &CubeFunction<T>,
    rho: T,
    eps: T,
) -> Result<NoiseSensitivityReport<T>> {
    if !(rho > T::zero() && rho < T::one()) {
        return Err(out_of_range("rho", rho.as_f64(), "(0, 1)"));
    }
    if !(eps > T::zero()) {
        return Err(out_of_range("eps", eps.as_f64(), "eps > 0"));
    }
    let r_exact = (T::lit(2.0) / eps).ln() / rho.recip().ln();
    let r = r_exact.max(T::zero()).ceil().to_usize().unwrap_or(usize::MAX);
    let delta = T::lit(10.0).powf(-T::lit(3.0) * r_exact - T::one()) * eps.powi(3);
    let g = globalness(f, r.min(f.n()), delta)?;
    let mu = g.mu;
    let stab = noise_stability(f, rho)?;
    let bound = eps * mu;
    Ok(NoiseSensitivityReport {
        rho,
        eps,
        r_exact,
        r,
        delta,
        mu,
        global: g.is_global,
        sparse: mu < delta,
        hypotheses: g.is_global && mu < delta,
        stab,
        bound,
        conclusion: le_rel(stab, bound, T::check_tol()),
    })
}

/// `T^{p→q}` and its adjoint `T^{q→p}`, for `0 < p < q < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectedOperator<T> {
    pub p: T,
    pub q: T,
}

impl<T: Scalar> DirectedOperator<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        if !(p > T::zero() && q < T::one()) {
            return Err(out_of_range("p, q", p.as_f64(), "0 < p < q < 1"));
        }
        if !(p < q) {
            return Err(out_of_range("q", q.as_f64(), "q > p"));
        }
        Ok(Self { p, q })
    }

    /// `ρ = p(1−q) / (q(1−p))`.
    pub fn rho(&self) -> T {
        self.p * (T::one() - self.q) / (self.q * (T::one() - self.p))
    }

    fn expect_bias(f: &CubeFunction<T>, want: T) -> Result<()> {
        let got = f.cube().p();
        if (got - want).abs() > T::roundoff() * want.max(T::one()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// `T^{p→q} f` for `f` on `μ_p`; the result lives on `μ_q`.
    pub fn apply(&self, f: &CubeFunction<T>) -> Result<CubeFunction<T>> {
        Self::expect_bias(f, self.p)?;
        let keep = self.p / self.q;
        let mut a = f.values().to_vec();
        for i in 0..f.n() {
            let bit = 1usize << i;
            for m in 0..a.len() {
                if m & bit == 0 {
                    let (f0, f1) = (a[m], a[m | bit]);
                    a[m | bit] = keep * f1 + (T::one() - keep) * f0;
                }
            }
        }
        CubeFunction::new(f.cube().with_bias(self.q)?, a)
    }

    /// `T^{q→p} g` for `g` on `μ_q`; the result lives on `μ_p`.
    pub fn coapply(&self, g: &CubeFunction<T>) -> Result<CubeFunction<T>> {
        Self::expect_bias(g, self.q)?;
        let up = (self.q - self.p) / (T::one() - self.p);
        let mut a = g.values().to_vec();
        for i in 0..g.n() {
            let bit = 1usize << i;
            for m in 0..a.len() {
                if m & bit == 0 {
                    let (g0, g1) = (a[m], a[m | bit]);
                    a[m] = (T::one() - up) * g0 + up * g1;
                }
            }
        }
        CubeFunction::new(g.cube().with_bias(self.p)?, a)
    }

    /// Draws `count` coupled pairs `(x, y) ∼ D(p,q)` on `n` coordinates.
    pub fn sample_pairs(&self, n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
        let (p, q) = (self.p.as_f64(), self.q.as_f64());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut x = 0usize;
                let mut y = 0usize;
                for i in 0..n {
                    let u: f64 = rng.random();
                    if u < p {
                        x |= 1 << i;
                        y |= 1 << i;
                    } else if u < q {
                        y |= 1 << i;
                    }
                }
                (x, y)
            })
            .collect()
    }
}

/// `max_x |T^{q→p} T^{p→q} f(x) − T_ρ f(x)|` with `ρ = p(1−q)/(q(1−p))`.
pub fn calcrho_identity_check<T: Scalar>(f: &CubeFunction<T>, p: T, q: T) -> Result<T> {
    let op = DirectedOperator::new(p, q)?;
    let lhs = op.coapply(&op.apply(f)?)?;
    let rhs = apply_noise(&f.rebias(p)?, op.rho())?;
    lhs.max_abs_diff(&rhs)
}

/// `⟨f, g⟩` under the measure of `g`'s cube, for tables on cubes of equal `n`.
pub fn inner_on<T: Scalar>(f: &CubeFunction<T>, g: &CubeFunction<T>) -> Result<T> {
    if f.n() != g.n() {
        return Err(Error::SpaceMismatch);
    }
    let w = g.cube().weights();
    Ok(f.values()
        .iter()
        .zip(g.values())
        .zip(&w)
        .map(|((&a, &b), &w)| a * b * w)
        .sum())
}

/// Both sides of `μ_q(f) ≥ μ_p(f)² / Stab_ρ(f)` for Boolean `f` given on
/// any cube (the table is read under `p` and `q`).
#[derive(Clone, Debug, Serialize)]
pub struct DirectedThresholdReport<T> {
    pub p: T,
    pub q: T,
    pub rho: T,
    pub mu_p: T,
    pub mu_q: T,
    pub stab: T,
    pub rhs: T,
    /// `μ_q − μ_p²/Stab_ρ`.
    pub slack: T,
}

pub fn directed_threshold<T: Scalar>(f: &CubeFunction<T>, p: T, q: T) -> Result<DirectedThresholdReport<T>> {
    let op = DirectedOperator::new(p, q)?;
    let fp = f.rebias(p)?;
    let mu_p = fp.mu_measure();
    let mu_q = f.rebias(q)?.mu_measure();
    let stab = noise_stability(&fp, op.rho())?;
    let rhs = if stab > T::zero() {
        mu_p * mu_p / stab
    } else {
        T::zero()
    };
    Ok(DirectedThresholdReport {
        p,
        q,
        rho: op.rho(),
        mu_p,
        mu_q,
        stab,
        rhs,
        slack: mu_q - rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BiasedCube;
    use crate::generators::{random_function, Generator};

    fn gen(g: &str, n: usize, p: f64) -> CubeFunction<f64> {
        g.parse::<Generator>().unwrap().generate(BiasedCube::new(n, p).unwrap()).unwrap()
    }

    #[test]
    fn dictator_noise_closed_form() {
        for p in [0.1f64, 0.25, 0.5] {
            for rho in [0.0f64, 0.3, 1.0] {
                let d = gen("dictator", 3, p);
                let t = apply_noise(&d, rho).unwrap();
                let k = apply_noise_kernel(&d, rho).unwrap();
                for x in 0..8 {
                    let want = rho * (x & 1) as f64 + (1.0 - rho) * p;
                    assert!((t.at(x) - want).abs() < 1e-14);
                    assert!((k.at(x) - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn noise_endpoints_and_validation() {
        let f = random_function(BiasedCube::<f64>::new(5, 0.2).unwrap(), 4);
        assert!(apply_noise(&f, 1.0).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
        let mu = f.expectation();
        assert!(apply_noise(&f, 0.0).unwrap().values().iter().all(|&v| (v - mu).abs() < 1e-12));
        assert!(apply_noise(&f, 1.5).is_err());
        assert!(apply_noise(&f, -0.1).is_err());
    }

    #[test]
    fn stability_examples() {
        let d = gen("dictator", 2, 0.5);
        assert!((noise_stability(&d, 0.5).unwrap() - 0.375).abs() < 1e-15);
        let f = random_function(BiasedCube::<f64>::new(4, 0.3).unwrap(), 9);
        assert!((noise_stability(&f, 1.0).unwrap() - f.energy()).abs() < 1e-12);
        let sp = gen("signed_parity", 2, 0.5);
        for rho in [0.1f64, 0.6] {
            assert!((noise_stability(&sp, rho).unwrap() - rho * rho).abs() < 1e-14);
        }
        let t = apply_noise(&f, 0.4).unwrap();
        assert!((f.inner(&t).unwrap() - noise_stability(&f, 0.4).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn stability_monte_carlo_is_close() {
        let f = gen("majority", 5, 0.5);
        let exact = noise_stability(&f, 0.5).unwrap();
        let mc = noise_stability_mc(&f, 0.5, 200_000, 1);
        assert!((mc - exact).abs() < 0.01);
        assert_eq!(mc, noise_stability_mc(&f, 0.5, 200_000, 1));
    }

    #[test]
    fn sensitivity_examples() {
        let z = gen("constant:c=0", 4, 0.25);
        let r = noise_sensitivity_check(&z, 0.5, 0.25).unwrap();
        assert!(r.hypotheses && r.conclusion);
        let d = gen("dictator", 4, 0.25);
        let r = noise_sensitivity_check(&d, 0.5, 0.25).unwrap();
        assert!(!r.global && !r.hypotheses && !r.conclusion);
        assert_eq!(r.r, 3);
    }

    #[test]
    fn directed_examples() {
        let d = gen("dictator", 3, 0.2);
        let op = DirectedOperator::new(0.2, 0.5).unwrap();
        let t = op.apply(&d).unwrap();
        assert!((t.cube().p() - 0.5).abs() < 1e-15);
        for y in 0..8 {
            assert!((t.at(y) - 0.4 * (y & 1) as f64).abs() < 1e-15);
        }
        let c = gen("constant:c=2.5", 3, 0.2);
        assert!(op.apply(&c).unwrap().values().iter().all(|&v| (v - 2.5).abs() < 1e-15));
        for g in ["majority", "antitribes:s=1,w=3", "or", "and"] {
            let f = gen(g, 3, 0.2);
            let lhs = inner_on(&f, &op.apply(&f).unwrap()).unwrap();
            assert!((lhs - f.mu_measure()).abs() < 1e-14);
        }
        assert!(DirectedOperator::new(0.5, 0.5).is_err());
        assert!(DirectedOperator::new(0.6, 0.5).is_err());
        assert!(op.apply(&gen("dictator", 3, 0.3)).is_err());
    }

    #[test]
    fn calcrho_examples() {
        let op = DirectedOperator::<f64>::new(1.0 / 3.0, 2.0 / 3.0).unwrap();
        assert!((op.rho() - 0.25).abs() < 1e-15);
        let near = DirectedOperator::<f64>::new(0.3, 0.301).unwrap();
        assert!((near.rho() - 1.0).abs() < 1e-2);
        let c = CubeFunction::new(BiasedCube::general(4, 1.0 / 3.0).unwrap(), vec![1.5; 16]).unwrap();
        assert!(calcrho_identity_check(&c, 1.0 / 3.0, 2.0 / 3.0).unwrap() < 1e-15);
        let f = random_function(BiasedCube::general(6, 0.1).unwrap(), 2);
        assert!(calcrho_identity_check(&f, 0.1, 0.4).unwrap() < 1e-12);
    }

    #[test]
    fn coupling_samples_are_ordered() {
        let op = DirectedOperator::new(0.2, 0.6).unwrap();
        let pairs = op.sample_pairs(4, 1000, 3);
        assert!(pairs.iter().all(|&(x, y)| x & !y == 0));
    }

    #[test]
    fn prop_dictator_equality() {
        let d = gen("dictator", 2, 0.2);
        let r = directed_threshold(&d, 0.2, 0.4).unwrap();
        assert!((r.rho - 0.375).abs() < 1e-15);
        assert!((r.stab - 0.1).abs() < 1e-15);
        assert!(r.slack.abs() < 1e-14);
    }
}
