//! Invariance for low-degree multilinear polynomials with small generalised
//! influences: `E φ(f(X))` against `E φ(f(Y))` for two independent
//! ensembles of mean-zero, unit-variance coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::SpectralForm;
use crate::error::{Error, Result};
use crate::scalar::le_rel;
use crate::subset::Subset;

/// Exact enumeration is used up to this many support points.
pub const EXACT_SUPPORT_CAP: usize = 1 << 24;
pub const MC_BATCH: usize = 4096;
pub const MIN_SAMPLES: usize = 10_000;
/// Largest certificate `σ` for a standard Gaussian coordinate, `√π/(2√2)`.
pub const GAUSSIAN_SIGMA_MAX: f64 = 0.626_657_068_657_750_1;

/// `f = Σ_S f̂(S) v_S` in `n` variables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultilinearPoly {
    n: usize,
    terms: BTreeMap<usize, f64>,
}

impl MultilinearPoly {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Subset, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, c) in terms {
            if s.max_coord() > n {
                return Err(Error::CoordinateOutOfRange { coord: s.max_coord(), n });
            }
            if c != 0.0 {
                *map.entry(s.0).or_insert(0.0) += c;
            }
        }
        Ok(Self { n, terms: map })
    }

    /// The Fourier expansion of a cube function, read as a polynomial.
    pub fn from_spectrum(spec: &SpectralForm<f64>) -> Self {
        let terms = spec.coeffs().iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(m, &c)| (m, c)).collect();
        Self { n: spec.n(), terms }
    }

    /// Parses lines `mask value`; `#` starts a comment.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let bad = || Error::Parse(format!("line {}: expected `mask value`", no + 1));
            let mask: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let value: f64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            terms.push((Subset(mask), value));
        }
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (Subset(m), c))
    }

    pub fn coeff(&self, s: Subset) -> f64 {
        self.terms.get(&s.0).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// `W_S(f) = Σ_{J ⊇ S} f̂(J)²`.
    pub fn w(&self, s: Subset) -> f64 {
        self.terms().filter(|(j, _)| s.is_subset_of(*j)).map(|(_, c)| c * c).sum()
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.terms()
            .map(|(s, c)| c * s.coords().map(|i| v[i - 1]).product::<f64>())
            .sum()
    }
}

/// `I_S(f) = W_S(f) Π_{i∈S} σ_i^{−2}` for every `S` contained in some term,
/// which covers every `S` with nonzero influence.
pub fn poly_influences(f: &MultilinearPoly, sigmas: &[f64]) -> Result<Vec<(Subset, f64)>> {
    if sigmas.len() != f.n {
        return Err(Error::LengthMismatch {
            expected: f.n,
            got: sigmas.len(),
        });
    }
    let mut sets: Vec<usize> = f.terms.keys().flat_map(|&m| Subset(m).submasks().map(|s| s.0)).collect();
    sets.sort_unstable();
    sets.dedup();
    Ok(sets
        .into_iter()
        .map(|m| {
            let s = Subset(m);
            let scale: f64 = s.coords().map(|i| sigmas[i - 1].powi(-2)).product();
            (s, f.w(s) * scale)
        })
        .collect())
}

/// `max_{S ≠ ∅} I_S(f)`.
pub fn max_influence(f: &MultilinearPoly, sigmas: &[f64]) -> Result<f64> {
    Ok(poly_influences(f, sigmas)?
        .into_iter()
        .filter(|(s, _)| !s.is_empty())
        .map(|(_, v)| v)
        .fold(0.0, f64::max))
}

/// One coordinate's law.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Marginal {
    /// `(x − p)/σ` for `x ~ Bernoulli(p)`.
    PBiased { p: f64 },
    /// `±1` with equal probability.
    Uniform,
    /// Standard normal, with the third-moment certificate `σ`.
    Gaussian { sigma: f64 },
    Custom { values: Vec<f64>, probs: Vec<f64>, sigma: f64 },
}

impl Marginal {
    pub fn sigma(&self) -> f64 {
        match self {
            Marginal::PBiased { p } => (p * (1.0 - p)).sqrt(),
            Marginal::Uniform => 0.5,
            Marginal::Gaussian { sigma } | Marginal::Custom { sigma, .. } => *sigma,
        }
    }

    /// `(values, probabilities)` for discrete laws.
    pub fn atoms(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Marginal::PBiased { p } => {
                let s = self.sigma();
                Some((vec![-p / s, (1.0 - p) / s], vec![1.0 - p, *p]))
            }
            Marginal::Uniform => Some((vec![-1.0, 1.0], vec![0.5, 0.5])),
            Marginal::Gaussian { .. } => None,
            Marginal::Custom { values, probs, .. } => Some((values.clone(), probs.clone())),
        }
    }

    /// Mean 0, variance 1 and `‖X‖₃³ ≤ σ^{−1}`.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidEnsemble(msg));
        match self {
            Marginal::PBiased { p } if !(*p > 0.0 && *p < 1.0) => return fail(format!("p = {p} outside (0, 1)")),
            Marginal::Gaussian { sigma } if !(*sigma > 0.0 && *sigma <= GAUSSIAN_SIGMA_MAX) => {
                return fail(format!("gaussian σ = {sigma} must lie in (0, √π/(2√2)]"));
            }
            Marginal::Custom { values, probs, sigma } => {
                if values.len() != probs.len() || values.is_empty() {
                    return fail("custom law needs matching nonempty values and probabilities".into());
                }
                if probs.iter().any(|&q| !(q > 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return fail("custom probabilities must be positive and sum to 1".into());
                }
                if !(*sigma > 0.0) {
                    return fail(format!("σ = {sigma} must be positive"));
                }
                let m = |k: i32| values.iter().zip(probs).map(|(v, q)| q * v.abs().powi(k)).sum::<f64>();
                let mean: f64 = values.iter().zip(probs).map(|(v, q)| q * v).sum();
                if mean.abs() > 1e-9 || (m(2) - 1.0).abs() > 1e-9 {
                    return fail(format!("custom law has mean {mean} and variance {}", m(2)));
                }
                if m(3) > sigma.recip() * (1.0 + 1e-12) {
                    return fail(format!("E|X|³ = {} exceeds 1/σ = {}", m(3), sigma.recip()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Marginal::Gaussian { .. } => rng.sample(StandardNormal),
            Marginal::Uniform => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Marginal::PBiased { p } => {
                let s = self.sigma();
                if rng.random::<f64>() < *p {
                    (1.0 - p) / s
                } else {
                    -p / s
                }
            }
            Marginal::Custom { values, probs, .. } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (v, q) in values.iter().zip(probs) {
                    acc += q;
                    if u < acc {
                        return *v;
                    }
                }
                *values.last().expect("validated nonempty")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ensemble {
    marginals: Vec<Marginal>,
}

impl Ensemble {
    pub fn new(marginals: Vec<Marginal>) -> Result<Self> {
        for m in &marginals {
            m.validate()?;
        }
        Ok(Self { marginals })
    }

    pub fn p_biased(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![Marginal::PBiased { p }; n])
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            marginals: vec![Marginal::Uniform; n],
        }
    }

    pub fn gaussian(n: usize) -> Self {
        Self {
            marginals: vec![Marginal::Gaussian { sigma: GAUSSIAN_SIGMA_MAX }; n],
        }
    }

    /// `Z^{:t} = (Y_1, …, Y_t, X_{t+1}, …, X_n)`.
    pub fn hybrid(x: &Ensemble, y: &Ensemble, t: usize) -> Result<Self> {
        check_n(x.n(), y.n())?;
        let marginals = (0..x.n())
            .map(|i| if i < t { y.marginals[i].clone() } else { x.marginals[i].clone() })
            .collect();
        Ok(Self { marginals })
    }

    /// `pbiased:p=…`, `uniform` or `gaussian[:sigma=…]`, repeated `n` times.
    pub fn parse(n: usize, spec: &str) -> Result<Self> {
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let param = |key: &str| -> Result<Option<f64>> {
            for part in rest.split(',').filter(|s| !s.is_empty()) {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
                if k.trim() != key {
                    return Err(Error::Parse(format!("unknown parameter {k:?} for {head}")));
                }
                return v.parse().map(Some).map_err(|_| Error::Parse(format!("bad number {v:?}")));
            }
            Ok(None)
        };
        let m = match head {
            "pbiased" | "p_biased" => Marginal::PBiased {
                p: param("p")?.ok_or_else(|| Error::Parse("pbiased needs p=…".into()))?,
            },
            "uniform" => {
                param("")?;
                Marginal::Uniform
            }
            "gaussian" => Marginal::Gaussian {
                sigma: param("sigma")?.unwrap_or(GAUSSIAN_SIGMA_MAX),
            },
            _ => return Err(Error::Parse(format!("unknown ensemble {head:?}"))),
        };
        Self::new(vec![m; n])
    }

    pub fn n(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginals(&self) -> &[Marginal] {
        &self.marginals
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.marginals.iter().map(Marginal::sigma).collect()
    }

    /// Number of support points, `None` if some coordinate is continuous or
    /// the product overflows.
    pub fn support_size(&self) -> Option<usize> {
        self.marginals
            .iter()
            .try_fold(1usize, |acc, m| acc.checked_mul(m.atoms()?.0.len()))
    }

    /// `E[g(X)]` by enumerating the support.
    pub fn expect_exact(&self, g: impl Fn(&[f64]) -> f64 + Sync) -> Option<f64> {
        let size = self.support_size().filter(|&s| s <= EXACT_SUPPORT_CAP)?;
        let atoms: Vec<(Vec<f64>, Vec<f64>)> = self.marginals.iter().map(|m| m.atoms().expect("discrete")).collect();
        let partial: Vec<f64> = (0..size)
            .into_par_iter()
            .chunks(MC_BATCH)
            .map(|chunk| {
                let mut v = vec![0.0; atoms.len()];
                chunk
                    .into_iter()
                    .map(|mut x| {
                        let mut w = 1.0;
                        for (slot, (vals, probs)) in v.iter_mut().zip(&atoms) {
                            let d = x % vals.len();
                            x /= vals.len();
                            *slot = vals[d];
                            w *= probs[d];
                        }
                        w * g(&v)
                    })
                    .sum::<f64>()
            })
            .collect();
        Some(partial.iter().sum())
    }

    fn sample_into(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for (slot, m) in out.iter_mut().zip(&self.marginals) {
            *slot = m.sample(rng);
        }
    }
}

fn check_n(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected: a, got: b })
    }
}

/// A smooth `φ` with a certified bound on `‖φ‴‖_∞`.
#[derive(Clone)]
pub enum TestFunction {
    /// `1/(1 + e^{−a x})`, `‖φ‴‖_∞ = a³/8`.
    Sigmoid { a: f64 },
    /// Quintic smoothstep `6t⁵ − 15t⁴ + 10t³` of `t = (x − c)/w` clamped to
    /// `[0, 1]`, `‖φ‴‖_∞ = 60/w³`.
    Smoothstep { center: f64, width: f64 },
    /// Caller-supplied `φ` and certificate, taken on trust.
    Custom {
        name: String,
        phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        third: f64,
        oscillation: Option<f64>,
    },
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Sigmoid { a } => 1.0 / (1.0 + (-a * x).exp()),
            TestFunction::Smoothstep { center, width } => {
                let t = ((x - center) / width).clamp(0.0, 1.0);
                t * t * t * (t * (6.0 * t - 15.0) + 10.0)
            }
            TestFunction::Custom { phi, .. } => phi(x),
        }
    }

    pub fn third_derivative_bound(&self) -> f64 {
        match self {
            TestFunction::Sigmoid { a } => a.abs().powi(3) / 8.0,
            TestFunction::Smoothstep { width, .. } => 60.0 / width.powi(3),
            TestFunction::Custom { third, .. } => *third,
        }
    }

    /// `sup φ − inf φ`, when known.
    pub fn oscillation(&self) -> Option<f64> {
        match self {
            TestFunction::Sigmoid { .. } | TestFunction::Smoothstep { .. } => Some(1.0),
            TestFunction::Custom { oscillation, .. } => *oscillation,
        }
    }

    pub fn name(&self) -> String {
        match self {
            TestFunction::Sigmoid { a } => format!("sigmoid:a={a}"),
            TestFunction::Smoothstep { center, width } => format!("smoothstep:c={center},w={width}"),
            TestFunction::Custom { name, .. } => name.clone(),
        }
    }

    /// `sigmoid[:a=…]` or `smoothstep[:c=…,w=…]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut kv = BTreeMap::new();
        for part in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            let v: f64 = v.parse().map_err(|_| Error::Parse(format!("bad number {v:?}")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let mut take = |k: &str, d: f64| kv.remove(k).unwrap_or(d);
        let out = match head {
            "sigmoid" => TestFunction::Sigmoid { a: take("a", 1.0) },
            "smoothstep" => TestFunction::Smoothstep {
                center: take("c", -0.5),
                width: take("w", 1.0),
            },
            _ => return Err(Error::Parse(format!("unknown test function {head:?}"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::Parse(format!("unknown parameter {k:?} for {head}")));
        }
        match out {
            TestFunction::Smoothstep { width, .. } if !(width > 0.0) => Err(Error::Parse("width must be positive".into())),
            _ => Ok(out),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffEstimate {
    pub ex: f64,
    pub ey: f64,
    /// `E φ(f(X)) − E φ(f(Y))`.
    pub estimate: f64,
    /// Standard error; zero in exact mode.
    pub mc_error: f64,
    pub exact: bool,
    pub samples: usize,
}

/// `E φ(f(X)) − E φ(f(Y))`, exactly when both ensembles have at most
/// [`EXACT_SUPPORT_CAP`] support points and by seeded Monte Carlo otherwise.
pub fn hybrid_distribution_diff(
    f: &MultilinearPoly,
    x: &Ensemble,
    y: &Ensemble,
    phi: &TestFunction,
    samples: usize,
    seed: u64,
) -> Result<DiffEstimate> {
    check_n(f.n, x.n())?;
    check_n(f.n, y.n())?;
    let g = |v: &[f64]| phi.eval(f.eval(v));
    if let (Some(ex), Some(ey)) = (x.expect_exact(g), y.expect_exact(g)) {
        return Ok(DiffEstimate {
            ex,
            ey,
            estimate: ex - ey,
            mc_error: 0.0,
            exact: true,
            samples: 0,
        });
    }
    if samples < MIN_SAMPLES {
        return Err(crate::error::out_of_range("samples", samples as f64, format!("at least {MIN_SAMPLES}")));
    }
    Ok(monte_carlo(f, x, y, phi, samples, seed))
}

/// Batch `b` draws `X` and `Y` from two copies of the ChaCha8 stream
/// `(seed, b)`, so identical ensembles give identical samples. Batch sums
/// are merged in index order.
fn monte_carlo(f: &MultilinearPoly, x: &Ensemble, y: &Ensemble, phi: &TestFunction, samples: usize, seed: u64) -> DiffEstimate {
    let batches = samples.div_ceil(MC_BATCH);
    let sums: Vec<[f64; 4]> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = MC_BATCH.min(samples - b * MC_BATCH);
            let mut rx = ChaCha8Rng::seed_from_u64(seed);
            rx.set_stream(b as u64);
            let mut ry = rx.clone();
            let (mut vx, mut vy) = (vec![0.0; f.n], vec![0.0; f.n]);
            let mut acc = [0.0; 4];
            for _ in 0..count {
                x.sample_into(&mut rx, &mut vx);
                y.sample_into(&mut ry, &mut vy);
                let (a, c) = (phi.eval(f.eval(&vx)), phi.eval(f.eval(&vy)));
                acc[0] += a;
                acc[1] += c;
                acc[2] += a - c;
                acc[3] += (a - c) * (a - c);
            }
            acc
        })
        .collect();
    let mut tot = [0.0; 4];
    for s in &sums {
        for (t, v) in tot.iter_mut().zip(s) {
            *t += v;
        }
    }
    let m = samples as f64;
    let mean = tot[2] / m;
    let var = ((tot[3] / m - mean * mean) * m / (m - 1.0)).max(0.0);
    DiffEstimate {
        ex: tot[0] / m,
        ey: tot[1] / m,
        estimate: mean,
        mc_error: (var / m).sqrt(),
        exact: false,
        samples,
    }
}

/// `E φ(f(Z^{:t}))` for `t = 0, …, n`, exactly.
pub fn hybrid_chain(f: &MultilinearPoly, x: &Ensemble, y: &Ensemble, phi: &TestFunction) -> Result<Vec<f64>> {
    check_n(f.n, x.n())?;
    check_n(f.n, y.n())?;
    (0..=f.n)
        .map(|t| {
            Ensemble::hybrid(x, y, t)?
                .expect_exact(|v| phi.eval(f.eval(v)))
                .ok_or_else(|| Error::InvalidEnsemble("hybrid chain needs discrete ensembles within the exact cap".into()))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub d: usize,
    pub w_empty: f64,
    /// `max_{S≠∅} I_S(f)` with `σ_i = min(σ_i^X, σ_i^Y)`.
    pub eps: f64,
    pub third: f64,
    pub lhs: f64,
    pub mc_error: f64,
    pub exact: bool,
    /// `2^{5d} ‖φ‴‖ W_∅ √ε`.
    pub rhs_5d: f64,
    /// `2^{12d} ‖φ‴‖ W_∅ √ε`.
    pub rhs_12d: f64,
    pub holds_5d: bool,
    pub holds_12d: bool,
    /// `rhs_12d − lhs`.
    pub margin: f64,
    /// The `2^{12d}` bound is at least `sup φ − inf φ`.
    pub vacuous: bool,
    pub pass: bool,
}

/// `|E φ(f(X)) − E φ(f(Y))| ≤ C_d ‖φ‴‖_∞ W_∅(f) √ε`, with both constants
/// `2^{5d}` and `2^{12d}` evaluated and only `2^{12d}` asserted. In Monte
/// Carlo mode the comparison uses `lhs − 3·mc_error`.
pub fn invariance_bound_check(
    f: &MultilinearPoly,
    x: &Ensemble,
    y: &Ensemble,
    phi: &TestFunction,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let diff = hybrid_distribution_diff(f, x, y, phi, samples, seed)?;
    let sigmas: Vec<f64> = x.sigmas().iter().zip(y.sigmas()).map(|(a, b)| a.min(b)).collect();
    let eps = max_influence(f, &sigmas)?;
    let d = f.degree();
    let w_empty = f.w(Subset::EMPTY);
    let third = phi.third_derivative_bound();
    let base = third * w_empty * eps.sqrt();
    let rhs_5d = 2f64.powi(5 * d as i32) * base;
    let rhs_12d = 2f64.powi(12 * d as i32) * base;
    let lhs = diff.estimate.abs();
    let effective = if diff.exact { lhs } else { lhs - 3.0 * diff.mc_error };
    let holds_5d = le_rel(effective, rhs_5d, 1e-10);
    let holds_12d = le_rel(effective, rhs_12d, 1e-10);
    Ok(InvarianceReport {
        d,
        w_empty,
        eps,
        third,
        lhs,
        mc_error: diff.mc_error,
        exact: diff.exact,
        rhs_5d,
        rhs_12d,
        holds_5d,
        holds_12d,
        margin: rhs_12d - lhs,
        vacuous: phi.oscillation().is_some_and(|o| rhs_12d >= o),
        pass: holds_12d,
    })
}

/// `Σ_{i<n} v_i v_{i+1} / √(n − 1)`.
pub fn path_poly(n: usize) -> Result<MultilinearPoly> {
    let c = ((n.max(2) - 1) as f64).sqrt().recip();
    MultilinearPoly::new(n, (1..n).map(|i| (Subset::from_coords([i, i + 1]), c)))
}

/// `Σ_i v_i / √n`.
pub fn linear_poly(n: usize) -> Result<MultilinearPoly> {
    let c = (n.max(1) as f64).sqrt().recip();
    MultilinearPoly::new(n, (1..=n).map(|i| (Subset::from_coords([i]), c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dictator_influence_at_quarter() {
        let f = MultilinearPoly::new(1, [(Subset::from_coords([1]), 1.0)]).unwrap();
        let x = Ensemble::p_biased(1, 0.25).unwrap();
        let inf = poly_influences(&f, &x.sigmas()).unwrap();
        let i1 = inf.iter().find(|(s, _)| s.0 == 1).unwrap().1;
        assert!(close(i1, 16.0 / 3.0, 1e-12));
    }

    #[test]
    fn constant_has_no_influence() {
        let f = MultilinearPoly::new(3, [(Subset::EMPTY, 2.5)]).unwrap();
        assert_eq!(max_influence(&f, &[0.5; 3]).unwrap(), 0.0);
    }

    #[test]
    fn path_influences_unit_sigma() {
        let f = MultilinearPoly::parse(3, "3 1\n6 1 # v2 v3\n").unwrap();
        let inf = poly_influences(&f, &[1.0; 3]).unwrap();
        let get = |m: usize| inf.iter().find(|(s, _)| s.0 == m).unwrap().1;
        assert_eq!(get(0b010), 2.0);
        assert_eq!(get(0b011), 1.0);
        assert_eq!(get(0b001), 1.0);
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(MultilinearPoly::parse(2, "1").is_err());
        assert!(MultilinearPoly::parse(2, "8 1.0").is_err());
        assert!(MultilinearPoly::parse(2, "1 x").is_err());
    }

    #[test]
    fn identical_ensembles_give_zero() {
        let f = path_poly(8).unwrap();
        let x = Ensemble::p_biased(8, 0.3).unwrap();
        let phi = TestFunction::Sigmoid { a: 2.0 };
        let d = hybrid_distribution_diff(&f, &x, &x, &phi, 0, 1).unwrap();
        assert!(d.exact && d.estimate.abs() <= 1e-14);
        let g = Ensemble::gaussian(8);
        let d = hybrid_distribution_diff(&f, &g, &g, &phi, MIN_SAMPLES, 7).unwrap();
        assert!(!d.exact);
        assert_eq!(d.estimate, 0.0);
    }

    #[test]
    fn constant_polynomial_gives_zero() {
        let f = MultilinearPoly::new(4, [(Subset::EMPTY, 0.3)]).unwrap();
        let phi = TestFunction::Sigmoid { a: 1.0 };
        let d = hybrid_distribution_diff(&f, &Ensemble::p_biased(4, 0.1).unwrap(), &Ensemble::uniform(4), &phi, 0, 0).unwrap();
        assert!(close(d.ex, phi.eval(0.3), 1e-14));
        assert!(d.estimate.abs() <= 1e-14);
    }

    #[test]
    fn second_moment_equals_w_empty() {
        let f = MultilinearPoly::parse(4, "0 0.5\n1 0.3\n6 -1.2\n15 0.7").unwrap();
        for x in [Ensemble::p_biased(4, 0.2).unwrap(), Ensemble::uniform(4)] {
            let m2 = x.expect_exact(|v| f.eval(v).powi(2)).unwrap();
            assert!(close(m2, f.w(Subset::EMPTY), 1e-12));
        }
    }

    #[test]
    fn telescoping_dominates() {
        let f = path_poly(6).unwrap();
        let x = Ensemble::p_biased(6, 0.2).unwrap();
        let y = Ensemble::uniform(6);
        let phi = TestFunction::Smoothstep { center: -0.5, width: 1.0 };
        let chain = hybrid_chain(&f, &x, &y, &phi).unwrap();
        let steps: f64 = chain.windows(2).map(|w| (w[0] - w[1]).abs()).sum();
        let total = (chain[0] - chain[6]).abs();
        assert!(steps + 1e-15 >= total);
        let d = hybrid_distribution_diff(&f, &x, &y, &phi, 0, 0).unwrap();
        assert!(close(d.estimate.abs(), total, 1e-12));
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let f = linear_poly(20).unwrap();
        let x = Ensemble::gaussian(20);
        let y = Ensemble::p_biased(20, 0.3).unwrap();
        let phi = TestFunction::Sigmoid { a: 1.0 };
        let a = hybrid_distribution_diff(&f, &x, &y, &phi, 20_000, 42).unwrap();
        let b = hybrid_distribution_diff(&f, &x, &y, &phi, 20_000, 42).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.mc_error.to_bits(), b.mc_error.to_bits());
        assert!(a.mc_error > 0.0);
        assert!(hybrid_distribution_diff(&f, &x, &y, &phi, 100, 42).is_err());
    }

    #[test]
    fn degree_one_biased_vs_uniform() {
        let f = linear_poly(10).unwrap();
        let x = Ensemble::p_biased(10, 0.3).unwrap();
        let y = Ensemble::uniform(10);
        let r = invariance_bound_check(&f, &x, &y, &TestFunction::Sigmoid { a: 1.0 }, 0, 0).unwrap();
        assert!(r.exact && r.pass && r.holds_5d);
        assert!(close(r.eps, 0.1 / 0.21, 1e-12));
    }

    #[test]
    fn dictator_is_vacuous() {
        let f = MultilinearPoly::new(5, [(Subset::from_coords([1]), 1.0)]).unwrap();
        let r = invariance_bound_check(
            &f,
            &Ensemble::p_biased(5, 0.05).unwrap(),
            &Ensemble::uniform(5),
            &TestFunction::Sigmoid { a: 1.0 },
            0,
            0,
        )
        .unwrap();
        assert!(r.pass && r.vacuous);
    }

    #[test]
    fn path_polynomial_at_quarter() {
        let f = path_poly(12).unwrap();
        let r = invariance_bound_check(
            &f,
            &Ensemble::p_biased(12, 0.25).unwrap(),
            &Ensemble::uniform(12),
            &TestFunction::Sigmoid { a: 1.0 },
            0,
            0,
        )
        .unwrap();
        assert!(r.exact && r.pass && r.margin > 0.0);
        assert_eq!(r.d, 2);
    }

    #[test]
    fn ensemble_validation() {
        assert!(Ensemble::new(vec![Marginal::Gaussian { sigma: 0.7 }]).is_err());
        let ok = Marginal::Custom {
            values: vec![-1.0, 1.0],
            probs: vec![0.5, 0.5],
            sigma: 0.5,
        };
        assert!(ok.validate().is_ok());
        let biased_mean = Marginal::Custom {
            values: vec![0.0, 1.0],
            probs: vec![0.5, 0.5],
            sigma: 0.5,
        };
        assert!(biased_mean.validate().is_err());
        assert_eq!(Ensemble::parse(3, "pbiased:p=0.2").unwrap(), Ensemble::p_biased(3, 0.2).unwrap());
        assert!(Ensemble::parse(3, "uniform:q=1").is_err());
        assert!(Ensemble::parse(3, "gaussian").unwrap().support_size().is_none());
        assert!(TestFunction::parse("smoothstep:w=0").is_err());
        assert!(close(TestFunction::parse("sigmoid:a=2").unwrap().third_derivative_bound(), 1.0, 0.0));
    }

    #[test]
    fn p_biased_marginal_has_bounded_third_moment() {
        for p in [0.01, 0.1, 0.3, 0.5] {
            let m = Marginal::PBiased { p };
            let (v, q) = m.atoms().unwrap();
            let m3: f64 = v.iter().zip(&q).map(|(a, b)| b * a.abs().powi(3)).sum();
            assert!(m3 <= 1.0 / m.sigma() + 1e-12);
        }
    }
}
