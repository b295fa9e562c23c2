//! Spectral concentration of sparse global functions, the edge-isoperimetric
//! stability theorems, and the tribes-based sharpness examples.
//!
//! The stability theorems only assert the existence of absolute constants.
//! Every search here takes a trial constant and also reports the smallest
//! constant that the instance at hand actually needs.

use serde::Serialize;

use crate::cube::{BiasedCube, CubeFunction, SpectralForm};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::hyper::BoundCheck;
use crate::influence::{globalness_from_table, influences_of_spectrum, total_influence};
use crate::scalar::{le_rel, Scalar};
use crate::subset::Subset;

/// `μ_p(f)` window used for "bounded away from 0 and 1".
pub const BALANCE_WINDOW: (f64, f64) = (0.1, 0.9);

/// `f^{≤r}`.
pub fn truncate<T: Scalar>(spec: &SpectralForm<T>, r: usize) -> SpectralForm<T> {
    spec.truncate(r)
}

/// `‖f^{≤r}‖₂²`.
pub fn low_degree_mass<T: Scalar>(f: &CubeFunction<T>, r: usize) -> T {
    f.forward().truncate(r).mass()
}

fn require_boolean<T: Scalar>(f: &CubeFunction<T>) -> Result<()> {
    if f.is_boolean() {
        Ok(())
    } else {
        Err(Error::NotBoolean)
    }
}

fn is_ternary<T: Scalar>(f: &CubeFunction<T>) -> bool {
    f.values()
        .iter()
        .all(|&v| v == T::zero() || v == T::one() || v == -T::one())
}

fn pow_usize<T: Scalar>(base: f64, r: usize) -> T {
    T::lit(base).powi(r as i32)
}

/// `‖f^{≤r}‖₂² ≤ 3^r μ_{1/2}(f)^{1.5}` on the uniform cube.
pub fn warmup_check<T: Scalar>(f: &CubeFunction<T>, r: usize) -> Result<BoundCheck<T>> {
    let p = f.cube().p();
    if (p - T::lit(0.5)).abs() > T::roundoff() {
        return Err(Error::InvalidBias(p.as_f64(), "{1/2}"));
    }
    require_boolean(f)?;
    let lhs = low_degree_mass(f, r);
    let rhs = pow_usize::<T>(3.0, r) * f.expectation().powf(T::lit(1.5));
    Ok(BoundCheck::new(lhs, rhs))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport<T> {
    pub r: usize,
    pub low_mass: T,
    pub energy: T,
    pub mu: T,
    /// Globalness parameter `δ` for the `10^r` form.
    pub delta: T,
    /// `f` is `(r, δ)`-global, `μ_p(f) ≤ δ` and `r ≥ 1`.
    pub hypothesis: bool,
    /// `10^r δ^{1/3} μ_p(f)`.
    pub bound: T,
    /// `None` when the hypothesis is unmet.
    pub pass: Option<bool>,
    /// `max_{|S| ≤ r} I_S(f^{≤r})`, including `S = ∅`.
    pub influence_delta: T,
    /// `5^r δ^{1/3} E[f²]` with the witnessed influence `δ`.
    pub influence_bound: T,
    pub influence_pass: Option<bool>,
}

impl<T: Scalar> ConcentrationReport<T> {
    pub fn margin(&self) -> T {
        self.bound - self.low_mass
    }
}

/// Low-degree concentration of a Boolean function in both the
/// generalised-influence form (`5^r`) and the globalness form (`10^r`).
/// Without `delta` the smallest admissible globalness parameter is used.
pub fn concentration_check<T: Scalar>(f: &CubeFunction<T>, r: usize, delta: Option<T>) -> Result<ConcentrationReport<T>> {
    require_boolean(f)?;
    let spec = f.forward();
    let low = spec.truncate(r);
    let low_mass = low.mass();
    let mu = f.expectation();
    let energy = f.energy();

    let influence_delta = influences_of_spectrum(&low)
        .iter()
        .enumerate()
        .filter(|(m, _)| m.count_ones() as usize <= r)
        .map(|(_, &v)| v)
        .fold(T::zero(), T::max);
    let influence_bound = pow_usize::<T>(5.0, r) * influence_delta.cbrt() * energy;

    let table = f.restricted_measures();
    let witnessed = globalness_from_table(&table, f.n(), r, T::zero()).max_bump.max(T::zero());
    let delta = delta.unwrap_or(witnessed.max(mu));
    let global = globalness_from_table(&table, f.n(), r, delta).is_global;
    let hypothesis = r >= 1 && global && le_rel(mu, delta, T::roundoff());
    let bound = pow_usize::<T>(10.0, r) * delta.max(T::zero()).cbrt() * mu;

    Ok(ConcentrationReport {
        r,
        low_mass,
        energy,
        mu,
        delta,
        hypothesis,
        bound,
        pass: hypothesis.then(|| le_rel(low_mass, bound, T::check_tol())),
        influence_delta,
        influence_bound,
        influence_pass: (r >= 1).then(|| le_rel(low_mass, influence_bound, T::check_tol())),
    })
}

/// `‖f^{≤r}‖₂² ≤ μ_p(f)² + 5^{r−1} δ^{1/3} σ² I[f]` for `{−1,0,1}`-valued
/// `f`, where `δ` bounds `I_S(f^{≤r})` over nonempty `|S| ≤ r`. Without
/// `delta` the witnessed maximum is used.
pub fn normtruncate_check<T: Scalar>(f: &CubeFunction<T>, r: usize, delta: Option<T>) -> Result<BoundCheck<T>> {
    if !is_ternary(f) {
        return Err(Error::NotBoolean);
    }
    let spec = f.forward();
    let low = spec.truncate(r);
    let seen = influences_of_spectrum(&low)
        .iter()
        .enumerate()
        .filter(|(m, _)| *m != 0 && m.count_ones() as usize <= r)
        .map(|(_, &v)| v)
        .fold(T::zero(), T::max);
    let delta = delta.unwrap_or(seen);
    if !le_rel(seen, delta, T::roundoff()) {
        return Err(Error::DeltaTooSmall {
            delta: delta.as_f64(),
            witnessed: seen.as_f64(),
        });
    }
    let s2 = spec.cube().sigma().powi(2);
    let head = spec.coeff(Subset::EMPTY).powi(2);
    let scale = T::lit(5.0).powi(r as i32 - 1);
    let rhs = head + scale * delta.cbrt() * s2 * total_influence(f);
    Ok(BoundCheck::new(low.mass(), rhs))
}

/// Result of a restriction or generalised-influence search.
#[derive(Clone, Debug, Serialize)]
pub struct IsoperimetryWitness<T> {
    pub k: T,
    /// Largest set size the search was allowed.
    pub size_bound: usize,
    pub set: Subset,
    /// `μ_p(f_{J→1})`, `μ_p(f_{J→1}) − μ_p(f)` or `I_S(f)`, by theorem.
    pub boost: T,
    pub threshold: T,
    pub hypothesis: bool,
    pub pass: bool,
    /// Smallest `C` with a set of size `≤ C·K` whose boost is
    /// `≥ base^{−C·K}`; infinite if no set has positive boost.
    pub min_constant: T,
}

/// Per size `k`, the best value over masks with `|S| = k`, lowest mask on ties.
fn best_by_size<T: Scalar>(vals: &[T], n: usize, skip_empty: bool) -> Vec<Option<(Subset, T)>> {
    let mut best: Vec<Option<(Subset, T)>> = vec![None; n + 1];
    for (m, &v) in vals.iter().enumerate() {
        if skip_empty && m == 0 {
            continue;
        }
        let slot = &mut best[m.count_ones() as usize];
        match slot {
            Some((_, b)) if *b >= v => {}
            _ => *slot = Some((Subset(m), v)),
        }
    }
    best
}

/// Best entry over sizes `≤ bound`; among entries within roundoff of the
/// maximum, the smallest set wins.
fn best_up_to<T: Scalar>(by_size: &[Option<(Subset, T)>], bound: usize) -> Option<(Subset, T)> {
    let entries = || by_size.iter().take(bound + 1).flatten();
    let top = entries().map(|&(_, v)| v).fold(None, |m: Option<T>, v| Some(m.map_or(v, |m| m.max(v))))?;
    let tol = T::roundoff() * top.abs().max(T::one());
    entries().find(|&&(_, v)| v >= top - tol).copied()
}

fn min_constant<T: Scalar>(by_size: &[Option<(Subset, T)>], k: T, base: T) -> T {
    let ln = base.ln();
    let mut running = T::zero();
    let mut best = T::infinity();
    for (size, entry) in by_size.iter().enumerate() {
        if let Some((_, v)) = entry {
            running = running.max(*v);
        }
        if running > T::zero() {
            let c = (T::of_usize(size) / k).max(-running.ln() / (k * ln));
            best = best.min(c);
        }
    }
    best
}

fn size_cap<T: Scalar>(x: T, n: usize, ceil: bool) -> usize {
    let x = if ceil { x.ceil() } else { (x + T::roundoff()).floor() };
    x.max(T::zero()).to_usize().unwrap_or(usize::MAX).min(n)
}

/// Exhaustive search for `J` with `|J| ≤ C·K` maximising `μ_p(f_{J→1})`,
/// testing `μ_p(f_{J→1}) ≥ e^{−C·K}` under `K ≥ 1`, `pI[f] < Kμ_p(f)`.
pub fn kahn_kalai_variant_search<T: Scalar>(f: &CubeFunction<T>, k: T, c_trial: T) -> Result<IsoperimetryWitness<T>> {
    require_boolean(f)?;
    if !(k > T::zero()) || !(c_trial > T::zero()) {
        return Err(crate::error::out_of_range("K·C", (k * c_trial).as_f64(), "K > 0 and C > 0"));
    }
    let n = f.n();
    let p = f.cube().p();
    let mu = f.expectation();
    let hypothesis = k >= T::one() && p * total_influence(f) < k * mu;
    let table = f.restricted_measures();
    let by_size = best_by_size(&table, n, false);
    let size_bound = size_cap(c_trial * k, n, false);
    let (set, boost) = best_up_to(&by_size, size_bound).expect("∅ is always scanned");
    let threshold = (-c_trial * k).exp();
    Ok(IsoperimetryWitness {
        k,
        size_bound,
        set,
        boost,
        threshold,
        hypothesis,
        pass: le_rel(threshold, boost, T::roundoff()),
        min_constant: min_constant(&by_size, k, T::E()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BourgainReport<T> {
    pub mu: T,
    /// `p·I[f] ≤ K μ_p(f)(1 − μ_p(f))`.
    pub hypothesis: bool,
    /// `μ_p(f)` inside the balance window.
    pub balanced: bool,
    /// Largest `I_S(f)` over nonempty `|S| ≤ ⌈2K⌉` against `5^{−8K}`.
    pub influence: IsoperimetryWitness<T>,
    /// For monotone `f`: largest `μ_p(f_{J→1}) − μ_p(f)` over the same
    /// sizes, against `8^{−r} 5^{−8K}`, the bump forced by the influence
    /// conclusion.
    pub restriction: Option<IsoperimetryWitness<T>>,
}

/// Generalised-influence witness for `pI[f] ≤ Kμ(1−μ)`, and for monotone
/// `f` the matching restriction bump.
pub fn bourgain_witness_search<T: Scalar>(f: &CubeFunction<T>, k: T) -> Result<BourgainReport<T>> {
    bourgain_witness_search_in(f, k, (T::lit(BALANCE_WINDOW.0), T::lit(BALANCE_WINDOW.1)))
}

pub fn bourgain_witness_search_in<T: Scalar>(f: &CubeFunction<T>, k: T, window: (T, T)) -> Result<BourgainReport<T>> {
    require_boolean(f)?;
    if !(k > T::zero()) {
        return Err(crate::error::out_of_range("K", k.as_f64(), "K > 0"));
    }
    let n = f.n();
    let p = f.cube().p();
    let mu = f.expectation();
    let hypothesis = le_rel(p * total_influence(f), k * mu * (T::one() - mu), T::roundoff());
    let size_bound = size_cap(T::lit(2.0) * k, n, true);
    let five = T::lit(5.0);
    let threshold = five.powf(-T::lit(8.0) * k);

    let spec = f.forward();
    let infl = influences_of_spectrum(&spec);
    let by_size = best_by_size(&infl, n, true);
    let (set, boost) = best_up_to(&by_size, size_bound).unwrap_or((Subset::EMPTY, T::zero()));
    let influence = IsoperimetryWitness {
        k,
        size_bound,
        set,
        boost,
        threshold,
        hypothesis,
        pass: !hypothesis || le_rel(threshold, boost, T::roundoff()),
        min_constant: min_constant(&by_size, k, five),
    };

    let restriction = f.is_monotone().then(|| {
        let bumps: Vec<T> = f.restricted_measures().iter().map(|&v| v - mu).collect();
        let by_size = best_by_size(&bumps, n, false);
        let (set, boost) = best_up_to(&by_size, size_bound).expect("∅ is always scanned");
        let threshold = threshold / T::lit(8.0).powi(size_bound as i32);
        IsoperimetryWitness {
            k,
            size_bound,
            set,
            boost,
            threshold,
            hypothesis,
            pass: !hypothesis || le_rel(threshold, boost, T::roundoff()),
            min_constant: min_constant(&by_size, k, T::E()),
        }
    });

    Ok(BourgainReport {
        mu,
        hypothesis,
        balanced: mu >= window.0 && mu <= window.1,
        influence,
        restriction,
    })
}

/// The two tribes-based sharpness constructions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "example", rename_all = "snake_case")]
pub enum SharpnessExample {
    /// Anti-tribes with `s` clauses of width `w`.
    Eg1 { s: usize, w: usize },
    /// Anti-tribes times an AND of `t` further coordinates.
    Eg2 { s: usize, w: usize, t: usize },
}

impl SharpnessExample {
    pub fn generator(&self) -> Generator {
        match *self {
            SharpnessExample::Eg1 { s, w } => Generator::Antitribes { s, w },
            SharpnessExample::Eg2 { s, w, t } => Generator::AntitribesPinned { s, w, t },
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            SharpnessExample::Eg1 { s, w } => s * w,
            SharpnessExample::Eg2 { s, w, t } => s * w + t,
        }
    }

    pub fn mu_closed(&self, p: f64) -> f64 {
        match *self {
            SharpnessExample::Eg1 { s, w } => clause(w, p).powi(s as i32),
            SharpnessExample::Eg2 { s, w, t } => p.powi(t as i32) * clause(w, p).powi(s as i32),
        }
    }

    /// `d/dp μ_p(f)`, which equals `I[f]` for monotone `f`.
    pub fn influence_closed(&self, p: f64) -> f64 {
        let tribes = |s: usize, w: usize| {
            (s * w) as f64 * (1.0 - p).powi(w as i32 - 1) * clause(w, p).powi(s as i32 - 1)
        };
        match *self {
            SharpnessExample::Eg1 { s, w } => tribes(s, w),
            SharpnessExample::Eg2 { s, w, t } => {
                let head = if t == 0 {
                    0.0
                } else {
                    t as f64 * p.powi(t as i32 - 1) * clause(w, p).powi(s as i32)
                };
                head + p.powi(t as i32) * tribes(s, w)
            }
        }
    }

    /// `(1 − p)p I[f]` for eg1 and `s(1 − p)^w` for eg2.
    pub fn k(&self, p: f64) -> f64 {
        match *self {
            SharpnessExample::Eg1 { .. } => (1.0 - p) * p * self.influence_closed(p),
            SharpnessExample::Eg2 { s, w, .. } => s as f64 * (1.0 - p).powi(w as i32),
        }
    }
}

fn clause(w: usize, p: f64) -> f64 {
    1.0 - (1.0 - p).powi(w as i32)
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessRow {
    /// `|J|`.
    pub size: usize,
    /// `max_{|J| = size} μ_p(f_{J→1})` by enumeration.
    pub best: f64,
    pub witness: Subset,
    /// Closed form of the same maximum.
    pub closed: f64,
    /// eg1: `2^{t/s} μ_p(f)`; eg2: `(1 − K/s)^{s−u}`.
    pub bound: f64,
    /// eg1: `(1 − 1/s)^{s−t}`; eg2: `e^{−K(1−u/s)}`.
    pub secondary: f64,
    /// eg2 only: `u > s/2`, where the `e^{−K/2}` cap is not claimed.
    pub exempt: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessTable {
    #[serde(flatten)]
    pub example: SharpnessExample,
    pub p: f64,
    pub n: usize,
    pub mu_closed: f64,
    pub mu_enum: f64,
    pub influence_closed: f64,
    pub influence_enum: f64,
    /// Central difference of the closed-form `μ_p` at step `1e−4`.
    pub influence_fd: f64,
    pub k: f64,
    pub rows: Vec<SharpnessRow>,
}

impl SharpnessTable {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

const FD_STEP: f64 = 1e-4;

pub fn sharpness_table(example: SharpnessExample, p: f64, cap: usize) -> Result<SharpnessTable> {
    let n = example.n();
    let cube = BiasedCube::<f64>::general_with_cap(n, p, cap)?;
    let f = example.generator().generate(cube)?;
    let table = f.restricted_measures();
    let by_size = best_by_size(&table, n, false);
    let mu = example.mu_closed(p);
    let k = example.k(p);

    let rows = match example {
        SharpnessExample::Eg1 { s, w } => (0..=s.min(n))
            .map(|t| {
                let (witness, best) = by_size[t].expect("size within n");
                let bound = 2f64.powf(t as f64 / s as f64) * mu;
                SharpnessRow {
                    size: t,
                    best,
                    witness,
                    closed: clause(w, p).powi((s - t) as i32),
                    bound,
                    secondary: (1.0 - 1.0 / s as f64).powi((s - t) as i32),
                    exempt: false,
                    holds: le_rel(best, bound, 1e-12),
                }
            })
            .collect(),
        SharpnessExample::Eg2 { s, w, t } => (0..=(t + s).min(n))
            .map(|size| {
                let (witness, best) = by_size[size].expect("size within n");
                let u = size.saturating_sub(t);
                let bound = (1.0 - k / s as f64).powi((s - u) as i32);
                let secondary = (-k * (1.0 - u as f64 / s as f64)).exp();
                let exempt = 2 * u > s;
                let closed = (size.saturating_sub(s * w)..=size.min(t))
                    .map(|fixed| {
                        let hit = (size - fixed).min(s);
                        p.powi((t - fixed) as i32) * clause(w, p).powi((s - hit) as i32)
                    })
                    .fold(0.0, f64::max);
                let capped = exempt || le_rel(best, (-k / 2.0).exp(), 1e-12);
                SharpnessRow {
                    size,
                    best,
                    witness,
                    closed,
                    bound,
                    secondary,
                    exempt,
                    holds: le_rel(best, bound, 1e-12) && le_rel(bound, secondary, 1e-12) && capped,
                }
            })
            .collect(),
    };

    Ok(SharpnessTable {
        example,
        p,
        n,
        mu_closed: mu,
        mu_enum: f.expectation(),
        influence_closed: example.influence_closed(p),
        influence_enum: total_influence(&f),
        influence_fd: (example.mu_closed(p + FD_STEP) - example.mu_closed(p - FD_STEP)) / (2.0 * FD_STEP),
        k,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_boolean, zoo};
    use crate::influence::all_influences;

    fn gen(g: &str, n: usize, p: f64) -> CubeFunction<f64> {
        g.parse::<Generator>().unwrap().generate(BiasedCube::new(n, p).unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn truncate_examples() {
        let a = gen("and:k=2", 2, 0.25);
        let spec = a.forward();
        assert_eq!(truncate(&spec, 2), spec);
        let t0 = truncate(&spec, 0).inverse();
        assert!(t0.values().iter().all(|&v| close(v, 1.0 / 16.0, 1e-14)));
        let t1 = truncate(&spec, 1);
        assert!(close(t1.mass(), 7.0 / 256.0, 1e-14));
        assert_eq!(t1.coeff(Subset(3)), 0.0);
        assert_eq!(truncate(&t1, 1), t1);
    }

    #[test]
    fn truncate_is_orthogonal_projection() {
        for seed in 0..20 {
            let f: CubeFunction<f64> = random_boolean(BiasedCube::new(7, 0.3).unwrap(), 0.4, seed);
            let spec = f.forward();
            for r in 0..=7 {
                let low = spec.truncate(r);
                let rest = spec.coeffs().iter().zip(low.coeffs()).map(|(a, b): (&f64, &f64)| (a - b).powi(2)).sum::<f64>();
                assert!(close(f.energy(), low.mass() + rest, 1e-12));
            }
        }
    }

    #[test]
    fn warmup_examples() {
        let one = gen("constant", 4, 0.5);
        let c = warmup_check(&one, 0).unwrap();
        assert!(c.holds && c.margin.abs() < 1e-12);
        let d = warmup_check(&gen("dictator", 4, 0.5), 1).unwrap();
        assert!(close(d.lhs, 0.5, 1e-12));
        assert!(close(d.rhs, 3.0 * 0.5f64.powf(1.5), 1e-12) && d.holds);
        assert!(matches!(warmup_check(&gen("dictator", 4, 0.25), 1), Err(Error::InvalidBias(..))));
        assert!(matches!(warmup_check(&CubeFunction::constant(BiasedCube::uniform(2).unwrap(), 0.5), 1), Err(Error::NotBoolean)));
    }

    #[test]
    fn warmup_sweep() {
        for seed in 0..60 {
            let n = 4 + (seed as usize % 7);
            let f: CubeFunction<f64> = random_boolean(BiasedCube::uniform(n).unwrap(), 0.05 + 0.15 * (seed % 5) as f64, seed);
            for r in 0..=4 {
                assert!(warmup_check(&f, r).unwrap().holds, "seed {seed} r {r}");
            }
        }
    }

    #[test]
    fn concentration_examples() {
        let zero = gen("constant:c=0", 5, 0.3);
        let z = concentration_check(&zero, 2, None).unwrap();
        assert_eq!(z.low_mass, 0.0);
        assert_eq!(z.pass, Some(true));
        assert_eq!(z.influence_pass, Some(true));

        let at = gen("antitribes:s=2,w=6", 12, 0.15);
        let rep = concentration_check(&at, 2, None).unwrap();
        assert!(rep.hypothesis);
        assert_eq!(rep.pass, Some(true));
        assert!(rep.margin() > 0.0);
        assert_eq!(rep.influence_pass, Some(true));
        assert!(rep.low_mass >= 0.0 && rep.low_mass <= rep.energy + 1e-12);

        let d = concentration_check(&gen("dictator", 6, 0.2), 1, Some(0.01)).unwrap();
        assert!(!d.hypothesis);
        assert_eq!(d.pass, None);

        let r0 = concentration_check(&at, 0, None).unwrap();
        assert!(!r0.hypothesis && r0.influence_pass.is_none());
    }

    #[test]
    fn concentration_zoo() {
        for p in [0.1f64, 0.25, 0.5] {
            for g in zoo(10) {
                let f = g.generate(BiasedCube::new(10, p).unwrap()).unwrap();
                if !f.is_boolean() {
                    continue;
                }
                for r in 1..=3 {
                    let rep = concentration_check(&f, r, None).unwrap();
                    assert_ne!(rep.pass, Some(false), "{g} p={p} r={r}");
                    assert_eq!(rep.influence_pass, Some(true), "{g} p={p} r={r}");
                }
            }
        }
    }

    #[test]
    fn normtruncate_examples() {
        let c = normtruncate_check(&gen("constant", 5, 0.3), 2, None).unwrap();
        assert!(c.margin.abs() < 1e-14 && c.holds);
        for seed in 0..40 {
            let n = 3 + seed as usize % 8;
            let f: CubeFunction<f64> = random_boolean(BiasedCube::new(n, 0.35).unwrap(), 0.5, seed);
            for r in 0..=3 {
                assert!(normtruncate_check(&f, r, None).unwrap().holds, "seed {seed} r {r}");
            }
        }
        let t = gen("tribes:s=3,w=3", 9, 0.3);
        for r in 1..=3 {
            assert!(normtruncate_check(&t, r, None).unwrap().margin > 0.0);
        }
        assert!(matches!(normtruncate_check(&t, 2, Some(0.0)), Err(Error::DeltaTooSmall { .. })));
        let real = CubeFunction::constant(BiasedCube::uniform(2).unwrap(), 0.5);
        assert!(matches!(normtruncate_check(&real, 1, None), Err(Error::NotBoolean)));
    }

    #[test]
    fn kahn_kalai_examples() {
        for t in 1..=4 {
            let p = 0.3;
            let f = gen(&format!("and:k={t}"), 6, p);
            let pi = p * total_influence(&f);
            assert!(close(pi, t as f64 * f.expectation(), 1e-12));
            let w = kahn_kalai_variant_search(&f, t as f64 + 1.0, 2.0).unwrap();
            assert!(w.hypothesis && w.pass);
            assert_eq!(w.set, Subset::prefix(t));
            assert!(close(w.boost, 1.0, 1e-12));
        }
        let one = gen("constant", 5, 0.2);
        let w = kahn_kalai_variant_search(&one, 1.0, 3.0).unwrap();
        assert!(w.hypothesis && w.pass && w.set.is_empty() && close(w.boost, 1.0, 1e-12));
        assert!(w.min_constant.abs() < 1e-12);
    }

    #[test]
    fn kahn_kalai_zoo() {
        for p in [0.05f64, 0.2, 0.5] {
            for g in zoo(10) {
                let f = g.generate(BiasedCube::new(10, p).unwrap()).unwrap();
                if !f.is_boolean() || f.expectation() == 0.0 {
                    continue;
                }
                let k = (p * total_influence(&f) / f.expectation() * (1.0 + 1e-9) + 1e-9).max(1.0);
                let w = kahn_kalai_variant_search(&f, k, 10.0).unwrap();
                assert!(w.hypothesis && w.pass, "{g} p={p}");
                assert!(w.set.len() <= w.size_bound && w.min_constant <= 10.0);
            }
        }
    }

    #[test]
    fn bourgain_examples() {
        let m = gen("majority", 5, 0.5);
        let mu = m.expectation();
        let k = 0.5 * total_influence(&m) / (mu * (1.0 - mu));
        let rep = bourgain_witness_search(&m, k).unwrap();
        assert!(rep.hypothesis && rep.balanced && rep.influence.pass);
        let single = all_influences(&m)[1];
        assert!(single >= rep.influence.threshold);
        assert!(rep.restriction.as_ref().unwrap().pass);

        let d = bourgain_witness_search(&gen("dictator", 4, 0.3), 1.0).unwrap();
        assert_eq!(d.influence.set, Subset::from_coords([1]));
        assert!(close(d.influence.boost, 1.0, 1e-12));

        let at = gen("antitribes:s=3,w=2", 6, 0.5);
        let mu = at.expectation();
        let k = 0.5 * total_influence(&at) / (mu * (1.0 - mu));
        let rep = bourgain_witness_search(&at, k).unwrap();
        assert!(rep.hypothesis && rep.influence.pass);
        assert!(rep.influence.set.len() <= rep.influence.size_bound);
    }

    #[test]
    fn bourgain_forms_co_occur_on_monotone() {
        for p in [0.1f64, 0.3, 0.5] {
            for g in zoo(9).into_iter().filter(Generator::is_monotone) {
                let f = g.generate(BiasedCube::new(9, p).unwrap()).unwrap();
                let mu = f.expectation();
                if mu <= 0.0 || mu >= 1.0 {
                    continue;
                }
                let k = p * total_influence(&f) / (mu * (1.0 - mu));
                let rep = bourgain_witness_search(&f, k).unwrap();
                let res = rep.restriction.unwrap();
                let r = res.size_bound as i32;
                assert!(res.boost * 8f64.powi(r) >= rep.influence.boost * (1.0 - 1e-12), "{g} p={p}");
                assert_eq!(rep.influence.pass, res.pass, "{g} p={p}");
            }
        }
    }

    #[test]
    fn sharpness_eg1() {
        let tab = sharpness_table(SharpnessExample::Eg1 { s: 3, w: 2 }, 0.5, 24).unwrap();
        assert!(close(tab.mu_closed, 27.0 / 64.0, 1e-15));
        assert!((tab.mu_enum - tab.mu_closed).abs() <= 1e-12);
        assert!((tab.influence_enum - tab.influence_closed).abs() <= 1e-12);
        for row in &tab.rows {
            assert!((row.best - row.closed).abs() <= 1e-12);
        }
        assert!(close(tab.rows[3].best, 1.0, 1e-15));
        assert!(close(tab.rows[1].best, 0.5625, 1e-15));
        assert!(matches!(
            sharpness_table(SharpnessExample::Eg1 { s: 5, w: 5 }, 0.5, 20),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn sharpness_eg2() {
        let tab = sharpness_table(SharpnessExample::Eg2 { s: 4, w: 2, t: 2 }, 0.4, 24).unwrap();
        assert!((tab.influence_fd - tab.influence_closed).abs() <= 1e-6);
        assert!((tab.influence_enum - tab.influence_closed).abs() <= 1e-12);
        assert!((tab.mu_enum - tab.mu_closed).abs() <= 1e-12);

        let big = sharpness_table(SharpnessExample::Eg2 { s: 6, w: 3, t: 1 }, 0.3, 24).unwrap();
        assert_eq!(big.n, 19);
        for row in &big.rows {
            assert!((row.best - row.closed).abs() <= 1e-12, "size {}", row.size);
        }
        assert!(big.all_hold());
    }
}
