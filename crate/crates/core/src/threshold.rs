//! Threshold curves `p ↦ μ_p(f)`, critical probabilities, the
//! Margulis–Russo formula and the sharp-threshold theorems.

use num_traits::Num;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::CubeFunction;
use crate::error::{out_of_range, Error, Result};
use crate::influence::{globalness_from_table, total_influence};
use crate::noise::{directed_threshold, DirectedThresholdReport};
use crate::scalar::{le_rel, Scalar};
use crate::subset::Subset;

pub const BISECTION_TOL: f64 = 1e-10;
pub const BISECTION_MAX_ITER: usize = 200;
pub const DEFAULT_GRID: usize = 32;
/// Exponent in the `M`-global predicate `μ_p(f_{J→1}) ≤ μ_p(f)^{0.01}`.
pub const GLOBAL_EXPONENT: f64 = 0.01;

/// `a_k = Σ_{|x| = k} f(x)`, so that `μ_p(f) = Σ_k a_k p^k (1−p)^{n−k}`.
pub fn level_sums<N: Num + Clone>(values: &[N], n: usize) -> Vec<N> {
    let mut sums = vec![N::zero(); n + 1];
    for (x, v) in values.iter().enumerate() {
        let k = x.count_ones() as usize;
        sums[k] = sums[k].clone() + v.clone();
    }
    sums
}

/// `μ_p(f)` evaluated exactly in any numeric type, including rationals.
pub fn measure_exact<N: Num + Clone>(values: &[N], n: usize, p: N) -> Result<N> {
    if values.len() != 1usize << n {
        return Err(Error::LengthMismatch {
            expected: 1 << n,
            got: values.len(),
        });
    }
    Ok(eval_levels(&level_sums(values, n), p))
}

fn eval_levels<N: Num + Clone>(sums: &[N], p: N) -> N {
    let n = sums.len() - 1;
    let q = N::one() - p.clone();
    let mut out = N::zero();
    for (k, a) in sums.iter().enumerate() {
        let mut term = a.clone();
        for _ in 0..k {
            term = term * p.clone();
        }
        for _ in k..n {
            term = term * q.clone();
        }
        out = out + term;
    }
    out
}

/// `μ_p(f)` as a polynomial in `p ∈ [0, 1]`, independent of the bias the
/// table was built with.
#[derive(Clone, Debug)]
pub struct MeasurePolynomial<T> {
    sums: Vec<T>,
    monotone: bool,
}

impl<T: Scalar> MeasurePolynomial<T> {
    pub fn new(f: &CubeFunction<T>) -> Self {
        Self {
            sums: level_sums(f.values(), f.n()),
            monotone: f.is_monotone(),
        }
    }

    pub fn eval(&self, p: T) -> T {
        eval_levels(&self.sums, p)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// `p(t) = inf{p : μ_p(f) ≥ t}`, by bisection. For non-monotone `f`
    /// the first crossing on a fine grid is bracketed instead.
    pub fn p_of(&self, t: T) -> Option<T> {
        let (mut lo, mut hi) = (T::zero(), T::one());
        if self.eval(lo) >= t {
            return Some(lo);
        }
        if !self.monotone {
            let steps = 1024;
            let first = (1..=steps).find(|&i| self.eval(T::of_usize(i) / T::of_usize(steps)) >= t)?;
            lo = T::of_usize(first - 1) / T::of_usize(steps);
            hi = T::of_usize(first) / T::of_usize(steps);
        } else if self.eval(hi) < t {
            return None;
        }
        let tol = T::lit(BISECTION_TOL).max(T::roundoff());
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= tol {
                break;
            }
            let mid = (lo + hi) / T::lit(2.0);
            if self.eval(mid) >= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((lo + hi) / T::lit(2.0))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdProfile<T> {
    /// `(p, μ_p(f))` per grid point.
    pub curve: Vec<(T, T)>,
    /// `p(1/2)`, `None` if `μ_1(f) < 1/2`.
    pub p_c: Option<T>,
    pub monotone: bool,
    /// The sampled curve never decreases.
    pub nondecreasing: bool,
}

pub fn measure_curve<T: Scalar>(f: &CubeFunction<T>, grid: &[T]) -> Result<ThresholdProfile<T>> {
    if !f.is_boolean() {
        return Err(Error::NotBoolean);
    }
    for &p in grid {
        if !(p > T::zero() && p < T::one()) {
            return Err(out_of_range("p", p.as_f64(), "(0, 1)"));
        }
    }
    let poly = MeasurePolynomial::new(f);
    let curve: Vec<(T, T)> = grid.iter().map(|&p| (p, poly.eval(p))).collect();
    let mut sorted = curve.clone();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite grid"));
    let nondecreasing = sorted.windows(2).all(|w| w[1].1 >= w[0].1 - T::roundoff());
    Ok(ThresholdProfile {
        curve,
        p_c: poly.p_of(T::lit(0.5)),
        monotone: poly.is_monotone(),
        nondecreasing,
    })
}

/// `n` points evenly spaced in `(0, 1)`, endpoints excluded.
pub fn linear_grid<T: Scalar>(n: usize) -> Vec<T> {
    (1..=n).map(|i| T::of_usize(i) / T::of_usize(n + 1)).collect()
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * T::of_usize(i) / T::of_usize(n - 1)).exp())
                .collect()
        }
    }
}

/// `p(0.9)/p(0.1)`; finite for every non-constant monotone `f`.
pub fn bollobas_thomason_ratio<T: Scalar>(f: &CubeFunction<T>) -> Option<T> {
    let poly = MeasurePolynomial::new(f);
    let lo = poly.p_of(T::lit(0.1))?;
    let hi = poly.p_of(T::lit(0.9))?;
    (lo > T::zero()).then(|| hi / lo)
}

#[derive(Clone, Debug, Serialize)]
pub struct RussoReport<T> {
    pub p: T,
    pub h: T,
    /// `(μ_{p+h} − μ_{p−h}) / 2h`.
    pub finite_difference: T,
    /// `I_p[f]`.
    pub influence: T,
    pub deviation: T,
}

/// Margulis–Russo: `dμ_p/dp = I_p[f]` for monotone `f`.
pub fn russo_check<T: Scalar>(f: &CubeFunction<T>, p: T, h: T) -> Result<RussoReport<T>> {
    if !(h > T::zero() && p - h > T::zero() && p + h < T::one()) {
        return Err(out_of_range("p ± h", p.as_f64(), "(0, 1)"));
    }
    let poly = MeasurePolynomial::new(f);
    let finite_difference = (poly.eval(p + h) - poly.eval(p - h)) / (T::lit(2.0) * h);
    let influence = total_influence(&f.rebias(p)?);
    Ok(RussoReport {
        p,
        h,
        finite_difference,
        influence,
        deviation: (finite_difference - influence).abs(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GridProbe<T> {
    pub p: T,
    pub mu: T,
    /// Largest `μ_p(f_{J→1})` over `|J| ≤ M`.
    pub worst: T,
    pub witness: Subset,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MGlobalCertificate<T> {
    pub m: usize,
    pub interval: (T, T),
    pub grid: Vec<GridProbe<T>>,
    /// Worst `(p, J)` by `μ_p(f_{J→1}) − μ_p(f)^{0.01}`.
    pub worst: Option<(T, Subset)>,
    pub pass: bool,
}

/// `M`-globalness on a log-spaced grid over `interval ⊂ (0, 1/2]`, with
/// `0 ≤ 0` accepted when `μ_p(f) = 0`.
pub fn m_global_certify<T: Scalar>(
    f: &CubeFunction<T>,
    m: usize,
    interval: (T, T),
    grid_size: usize,
) -> Result<MGlobalCertificate<T>> {
    let (lo, hi) = interval;
    if !(lo > T::zero() && lo <= hi && hi <= T::lit(0.5)) {
        return Err(out_of_range("interval", lo.as_f64(), "0 < lo ≤ hi ≤ 1/2"));
    }
    if !f.is_boolean() {
        return Err(Error::NotBoolean);
    }
    let points = log_grid(lo, hi, grid_size.max(1));
    let exponent = T::lit(GLOBAL_EXPONENT);
    let grid: Vec<GridProbe<T>> = points
        .par_iter()
        .map(|&p| -> Result<GridProbe<T>> {
            let table = f.rebias(p)?.restricted_measures();
            let g = globalness_from_table(&table, f.n(), m, T::zero());
            let worst = g.mu + g.max_bump;
            let cap = g.mu.max(T::zero()).powf(exponent);
            Ok(GridProbe {
                p,
                mu: g.mu,
                worst,
                witness: g.argmax,
                pass: le_rel(worst, cap, T::roundoff()),
            })
        })
        .collect::<Result<_>>()?;
    let worst = grid
        .iter()
        .map(|g| (g.worst - g.mu.max(T::zero()).powf(exponent), g))
        .fold(None, |acc: Option<(T, &GridProbe<T>)>, (gap, g)| match acc {
            Some((best, _)) if best >= gap => acc,
            _ => Some((gap, g)),
        })
        .map(|(_, g)| (g.p, g.witness));
    Ok(MGlobalCertificate {
        m,
        interval,
        pass: grid.iter().all(|g| g.pass),
        grid,
        worst,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpThresholdReport<T> {
    pub p: T,
    pub q: T,
    pub m: usize,
    pub c_trial: T,
    pub mu_p: T,
    pub mu_q: T,
    pub p_c: Option<T>,
    pub certificate: MGlobalCertificate<T>,
    /// `q ≤ p_c`.
    pub below_critical: bool,
    /// `μ_p(f) ≥ e^{−M/C}`.
    pub dense_enough: bool,
    pub hypothesis: bool,
    /// `μ_p(f)^{(p/q)^{1/C}}`.
    pub rhs: T,
    pub holds: bool,
    /// Smallest `C` for which `μ_q ≥ μ_p^{(p/q)^{1/C}}` holds here.
    pub min_constant: T,
    /// `q ≤ M^C p`.
    pub ratio_holds: bool,
}

/// `μ_q(f) ≥ μ_p(f)^{(p/q)^{1/C}}` for `M`-global monotone `f` on `[p, q]`.
pub fn sharp_threshold_check<T: Scalar>(
    f: &CubeFunction<T>,
    p: T,
    q: T,
    m: usize,
    c_trial: T,
) -> Result<SharpThresholdReport<T>> {
    sharp_threshold_check_on(f, p, q, m, c_trial, DEFAULT_GRID)
}

pub fn sharp_threshold_check_on<T: Scalar>(
    f: &CubeFunction<T>,
    p: T,
    q: T,
    m: usize,
    c_trial: T,
    grid_size: usize,
) -> Result<SharpThresholdReport<T>> {
    if !(p > T::zero() && p < q && q <= T::lit(0.5)) {
        return Err(out_of_range("q", q.as_f64(), "0 < p < q ≤ 1/2"));
    }
    if !(c_trial > T::zero()) {
        return Err(out_of_range("C", c_trial.as_f64(), "C > 0"));
    }
    let certificate = m_global_certify(f, m, (p, q), grid_size)?;
    let poly = MeasurePolynomial::new(f);
    let (mu_p, mu_q) = (poly.eval(p), poly.eval(q));
    let p_c = poly.p_of(T::lit(0.5));
    let below_critical = p_c.is_some_and(|pc| q <= pc + T::roundoff());
    let dense_enough = mu_p >= (-T::of_usize(m) / c_trial).exp();
    let hypothesis = poly.is_monotone() && certificate.pass && below_critical && dense_enough;
    let exponent = (p / q).powf(c_trial.recip());
    let rhs = mu_p.max(T::zero()).powf(exponent);

    let min_constant = if mu_p <= T::zero() || mu_q >= T::one() - T::roundoff() {
        T::zero()
    } else if mu_q <= mu_p {
        T::infinity()
    } else {
        let l = mu_q.ln() / mu_p.ln();
        (p / q).ln() / l.ln()
    };

    Ok(SharpThresholdReport {
        p,
        q,
        m,
        c_trial,
        mu_p,
        mu_q,
        p_c,
        certificate,
        below_critical,
        dense_enough,
        hypothesis,
        rhs,
        holds: le_rel(rhs, mu_q, T::check_tol()),
        min_constant,
        ratio_holds: q <= T::of_usize(m).powf(c_trial) * p,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NoiseRouteReport<T> {
    pub prop: DirectedThresholdReport<T>,
    /// `μ_q ≥ μ_p²/Stab_ρ`, unconditional for monotone `f`.
    pub prop_holds: bool,
    /// `q/p − 1`.
    pub zeta: T,
    pub eps: T,
    pub c_trial: T,
    /// `C log(1/ε)`, rounded up for the restriction budget.
    pub r_exact: T,
    pub r: usize,
    /// `C^{−r}`.
    pub delta: T,
    pub global: bool,
    pub sparse: bool,
    pub hypothesis: bool,
    /// `μ_q ≥ μ_p/ε`.
    pub conclusion: bool,
}

/// The noise-sensitivity route: the directed-operator inequality and the
/// resulting `μ_q ≥ ε^{−1} μ_p` for sparse global monotone `f`.
pub fn noise_route_check<T: Scalar>(f: &CubeFunction<T>, p: T, q: T, eps: T, c_trial: T) -> Result<NoiseRouteReport<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(out_of_range("eps", eps.as_f64(), "(0, 1)"));
    }
    if !(c_trial > T::one()) {
        return Err(out_of_range("C", c_trial.as_f64(), "C > 1"));
    }
    if !f.is_boolean() {
        return Err(Error::NotBoolean);
    }
    let prop = directed_threshold(f, p, q)?;
    let r_exact = c_trial * eps.recip().ln();
    let r = r_exact.ceil().to_usize().unwrap_or(usize::MAX);
    let delta = c_trial.powf(-r_exact);
    let fp = f.rebias(p)?;
    let g = globalness_from_table(&fp.restricted_measures(), f.n(), r.min(f.n()), delta);
    let in_range = q < T::lit(0.5) && eps < T::lit(0.5);
    let sparse = le_rel(prop.mu_p, delta, T::roundoff());
    let hypothesis = f.is_monotone() && in_range && g.is_global && sparse;
    Ok(NoiseRouteReport {
        prop_holds: prop.slack >= -T::roundoff(),
        zeta: q / p - T::one(),
        eps,
        c_trial,
        r_exact,
        r,
        delta,
        global: g.is_global,
        sparse,
        hypothesis,
        conclusion: le_rel(prop.mu_p, eps * prop.mu_q, T::check_tol()),
        prop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BiasedCube;
    use crate::generators::{random_boolean, random_monotone, zoo, Generator};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn gen(g: &str, n: usize, p: f64) -> CubeFunction<f64> {
        g.parse::<Generator>().unwrap().generate(BiasedCube::new(n, p).unwrap()).unwrap()
    }

    #[test]
    fn critical_probabilities() {
        let grid = linear_grid::<f64>(9);
        let d = measure_curve(&gen("dictator", 3, 0.5), &grid).unwrap();
        assert!((d.p_c.unwrap() - 0.5).abs() < 1e-9);
        assert!(d.curve.iter().all(|&(p, m)| (p - m).abs() < 1e-14));
        assert!(d.monotone && d.nondecreasing);

        let a = measure_curve(&gen("and:k=2", 2, 0.5), &grid).unwrap();
        assert!((a.p_c.unwrap() - 0.5f64.sqrt()).abs() < 1e-9);

        let at = measure_curve(&gen("antitribes:s=2,w=2", 4, 0.5), &grid).unwrap();
        // (2p − p²)² = 1/2 ⇒ p = 1 − sqrt(1 − 2^{−1/2}).
        let root = 1.0 - (1.0 - 0.5f64.sqrt()).sqrt();
        assert!((root - 0.4588).abs() < 1e-4);
        assert!((at.p_c.unwrap() - root).abs() < 1e-9);

        let zero = measure_curve(&gen("constant:c=0", 2, 0.5), &grid).unwrap();
        assert!(zero.p_c.is_none());
        assert!(measure_curve(&gen("dictator", 2, 0.5), &[0.0]).is_err());
    }

    #[test]
    fn non_monotone_first_crossing() {
        let f = gen("parity:k=2", 2, 0.5);
        let poly = MeasurePolynomial::new(&f);
        assert!(!poly.is_monotone());
        // μ_p = 2p(1 − p) reaches 1/2 only at p = 1/2.
        assert!((poly.p_of(0.5).unwrap() - 0.5).abs() < 1e-6);
        assert!(poly.p_of(0.6).is_none());
    }

    #[test]
    fn exact_rational_measure() {
        let f = random_boolean(BiasedCube::<f64>::new(8, 0.5).unwrap(), 0.4, 3);
        let vals: Vec<BigRational> = f.values().iter().map(|&v| BigRational::from_integer(BigInt::from(v as i64))).collect();
        for (num, den) in [(1, 3), (1, 7), (2, 5)] {
            let p = BigRational::new(BigInt::from(num), BigInt::from(den));
            let exact = measure_exact(&vals, 8, p).unwrap();
            let approx = f.rebias(num as f64 / den as f64).unwrap().mu_measure();
            let exact_f = exact.numer().to_string().parse::<f64>().unwrap() / exact.denom().to_string().parse::<f64>().unwrap();
            assert!((exact_f - approx).abs() < 1e-12);
        }
        let and2: Vec<BigRational> = [0, 0, 0, 1].iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(measure_exact(&and2, 2, third).unwrap(), BigRational::new(BigInt::from(1), BigInt::from(9)));
        assert!(measure_exact(&and2, 3, BigRational::from_integer(BigInt::from(0))).is_err());
    }

    #[test]
    fn russo_examples() {
        for p in [0.2, 0.5, 0.7] {
            let r = russo_check(&gen("dictator", 3, 0.5), p, 1e-4).unwrap();
            assert!((r.finite_difference - 1.0).abs() < 1e-9 && (r.influence - 1.0).abs() < 1e-12);
        }
        let a = russo_check(&gen("and:k=2", 2, 0.5), 0.3, 1e-4).unwrap();
        assert!((a.finite_difference - 0.6).abs() < 1e-9 && (a.influence - 0.6).abs() < 1e-12);
        let m = russo_check(&gen("majority", 3, 0.5), 0.5, 1e-4).unwrap();
        assert!((m.influence - 1.5).abs() < 1e-12 && m.deviation < 1e-6);
        assert!(russo_check(&gen("dictator", 3, 0.5), 0.5, 0.6).is_err());
    }

    #[test]
    fn russo_zoo() {
        for g in zoo(10).into_iter().filter(Generator::is_monotone) {
            for p in [0.1, 0.3, 0.5] {
                let f = g.generate(BiasedCube::new(10, p).unwrap()).unwrap();
                assert!(russo_check(&f, p, 1e-4).unwrap().deviation <= 1e-6, "{g} p={p}");
            }
        }
    }

    #[test]
    fn curves_of_monotone_functions_increase() {
        for seed in 0..10 {
            let f = random_monotone(BiasedCube::<f64>::new(7, 0.5).unwrap(), 3, seed);
            let prof = measure_curve(&f, &linear_grid(40)).unwrap();
            assert!(prof.monotone && prof.nondecreasing);
            assert!(bollobas_thomason_ratio(&f).is_none_or(|r| r.is_finite()));
        }
    }

    #[test]
    fn m_global_examples() {
        let z = m_global_certify(&gen("constant:c=0", 4, 0.3), 2, (0.1, 0.3), 8).unwrap();
        assert!(z.pass);
        let d = m_global_certify(&gen("dictator", 4, 0.3), 1, (0.1, 0.3), 8).unwrap();
        assert!(!d.pass);
        assert_eq!(d.worst.unwrap().1, Subset::from_coords([1]));
        assert_eq!(d.grid.len(), 8);
        assert!((d.grid[0].p - 0.1).abs() < 1e-15 && (d.grid[7].p - 0.3).abs() < 1e-12);
        let at = gen("antitribes:s=3,w=3", 9, 0.2);
        let c = m_global_certify(&at, 1, (0.05, 0.2), 8).unwrap();
        for g in &c.grid {
            assert_eq!(g.pass, g.worst <= g.mu.powf(0.01) * (1.0 + 1e-12));
        }
        assert!(m_global_certify(&at, 1, (0.3, 0.6), 8).is_err());
    }

    #[test]
    fn sharp_threshold_examples() {
        let d = sharp_threshold_check(&gen("dictator", 4, 0.3), 0.1, 0.3, 1, 2.0).unwrap();
        assert!(!d.hypothesis && !d.certificate.pass);
        let one = sharp_threshold_check(&gen("constant", 4, 0.3), 0.1, 0.3, 1, 2.0).unwrap();
        assert!(one.holds && one.min_constant == 0.0);
        // s(1 − p)^w = 1 at w = 3, p ≈ 0.306 with s = 3.
        let at = gen("antitribes:s=3,w=3", 9, 0.3);
        let rep = sharp_threshold_check(&at, 0.2, 0.3, 1, 4.0).unwrap();
        assert!(rep.mu_q > rep.mu_p);
        let check = rep.mu_p.powf((rep.p / rep.q).powf(1.0 / rep.min_constant));
        assert!((check - rep.mu_q).abs() < 1e-10);
        assert_eq!(rep.holds, rep.c_trial >= rep.min_constant);
    }

    #[test]
    fn noise_route_examples() {
        let d = noise_route_check(&gen("dictator", 3, 0.2), 0.2, 0.4, 0.25, 2.0).unwrap();
        assert!((d.prop.rho - 0.375).abs() < 1e-15);
        assert!((d.prop.stab - 0.1).abs() < 1e-14);
        assert!(d.prop.slack.abs() < 1e-14 && d.prop_holds);
        assert!(!d.hypothesis);

        let c = noise_route_check(&gen("constant", 3, 0.2), 0.2, 0.4, 0.25, 2.0).unwrap();
        assert!(c.prop.slack.abs() < 1e-14);

        let at = noise_route_check(&gen("antitribes:s=2,w=3", 6, 0.2), 0.2, 0.4, 0.25, 2.0).unwrap();
        assert!(at.prop.slack > 1e-6);
        assert!((at.zeta - 1.0).abs() < 1e-15);
    }
}
