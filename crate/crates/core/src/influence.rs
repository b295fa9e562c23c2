//! Derivatives, generalised influences, Laplacians, and globalness.

use serde::Serialize;

use crate::cube::{CubeFunction, SpectralForm};
use crate::error::{Error, Result};
use crate::scalar::{le_rel, Scalar};
use crate::subset::{masks_up_to, Subset};

/// Default size cap for materialised influence tables.
pub const DEFAULT_R_MAX: usize = 4;

fn check_coords<T: Scalar>(f: &CubeFunction<T>, s: Subset) -> Result<()> {
    if s.max_coord() > f.n() {
        return Err(Error::CoordinateOutOfRange {
            coord: s.max_coord(),
            n: f.n(),
        });
    }
    Ok(())
}

/// Replaces each pair along the coordinates of `s` by `scale·(f₁ − f₀)` on
/// both halves, so the result no longer depends on those coordinates.
fn difference<T: Scalar>(f: &CubeFunction<T>, s: Subset, scale: T) -> Result<CubeFunction<T>> {
    check_coords(f, s)?;
    let mut a = f.values().to_vec();
    for c in s.coords() {
        let bit = 1usize << (c - 1);
        for m in 0..a.len() {
            if m & bit == 0 {
                let d = scale * (a[m | bit] - a[m]);
                a[m] = d;
                a[m | bit] = d;
            }
        }
    }
    CubeFunction::new(*f.cube(), a)
}

/// `D_S f = σ^{|S|} Σ_{x∈{0,1}^S} (−1)^{|S|−|x|} f_{S→x}`, returned on the
/// full cube (constant along `S`).
pub fn derivative<T: Scalar>(f: &CubeFunction<T>, s: Subset) -> Result<CubeFunction<T>> {
    difference(f, s, f.cube().sigma())
}

/// `D_S f` computed from the spectrum: `Σ_{T⊇S} f̂(T) χ_{T∖S}`.
pub fn derivative_spectral<T: Scalar>(spec: &SpectralForm<T>, s: Subset) -> Result<SpectralForm<T>> {
    if s.max_coord() > spec.n() {
        return Err(Error::CoordinateOutOfRange {
            coord: s.max_coord(),
            n: spec.n(),
        });
    }
    let mut out = vec![T::zero(); spec.coeffs().len()];
    for (m, &c) in spec.coeffs().iter().enumerate() {
        if m & s.0 == s.0 {
            out[m & !s.0] += c;
        }
    }
    SpectralForm::new(*spec.cube(), out)
}

/// `I_S(f) = σ^{−2|S|} Σ_{E⊇S} f̂(E)²`.
pub fn gen_influence<T: Scalar>(f: &CubeFunction<T>, s: Subset) -> Result<T> {
    check_coords(f, s)?;
    let spec = f.forward();
    let sum: T = spec
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(m, _)| m & s.0 == s.0)
        .map(|(_, &c)| c * c)
        .sum();
    Ok(sum / spec.cube().sigma().powi(2 * s.len() as i32))
}

/// `I_S(f) = E[(Σ_{x∈{0,1}^S} (−1)^{|S|−|x|} f_{S→x})²]`, straight from the
/// definition.
pub fn gen_influence_direct<T: Scalar>(f: &CubeFunction<T>, s: Subset) -> Result<T> {
    Ok(difference(f, s, T::one())?.energy())
}

/// `I_S(f)` for every `S`, indexed by mask.
pub fn all_influences<T: Scalar>(f: &CubeFunction<T>) -> Vec<T> {
    influences_of_spectrum(&f.forward())
}

pub fn influences_of_spectrum<T: Scalar>(spec: &SpectralForm<T>) -> Vec<T> {
    let s2 = spec.cube().sigma().powi(2);
    let mut w = spec.superset_mass();
    let mut inv = vec![T::one(); spec.n() + 1];
    for k in 1..inv.len() {
        inv[k] = inv[k - 1] / s2;
    }
    for (m, v) in w.iter_mut().enumerate() {
        *v *= inv[m.count_ones() as usize];
    }
    w
}

/// Generalised influences for every `|S| ≤ r_max`.
#[derive(Clone, Debug, Serialize)]
pub struct GeneralizedInfluenceTable<T> {
    pub n: usize,
    pub p: T,
    pub r_max: usize,
    /// `(S, I_S(f))` in increasing mask order.
    pub entries: Vec<(Subset, T)>,
}

impl<T: Scalar> GeneralizedInfluenceTable<T> {
    pub fn new(f: &CubeFunction<T>, r_max: usize) -> Self {
        Self::from_spectrum(&f.forward(), r_max)
    }

    pub fn from_spectrum(spec: &SpectralForm<T>, r_max: usize) -> Self {
        let all = influences_of_spectrum(spec);
        let r_max = r_max.min(spec.n());
        let entries = masks_up_to(spec.n(), r_max).map(|s| (s, all[s.0])).collect();
        Self {
            n: spec.n(),
            p: spec.cube().p(),
            r_max,
            entries,
        }
    }

    /// The opt-in full table over all `2^n` subsets.
    pub fn full(f: &CubeFunction<T>) -> Self {
        Self::new(f, f.n())
    }

    pub fn get(&self, s: Subset) -> Option<T> {
        self.entries.iter().find(|(m, _)| *m == s).map(|&(_, v)| v)
    }

    /// Largest entry over nonempty `S`, with its set.
    pub fn max_nonempty(&self) -> Option<(Subset, T)> {
        argmax(self.entries.iter().copied().filter(|(s, _)| !s.is_empty()))
    }
}

fn argmax<T: Scalar>(it: impl Iterator<Item = (Subset, T)>) -> Option<(Subset, T)> {
    it.fold(None, |best, (s, v)| match best {
        Some((_, b)) if b >= v => best,
        _ => Some((s, v)),
    })
}

/// `I[f] = σ^{−2} Σ_S |S| f̂(S)²`.
pub fn total_influence<T: Scalar>(f: &CubeFunction<T>) -> T {
    let spec = f.forward();
    let s2 = spec.cube().sigma().powi(2);
    spec.level_mass()
        .iter()
        .enumerate()
        .map(|(k, &w)| T::of_usize(k) * w)
        .sum::<T>()
        / s2
}

/// `Σ_i ‖f_{i→1} − f_{i→0}‖₂²`.
pub fn total_influence_direct<T: Scalar>(f: &CubeFunction<T>) -> T {
    (1..=f.n())
        .map(|i| gen_influence_direct(f, Subset::from_coords([i])).expect("coordinate in range"))
        .sum()
}

/// `Σ_i Pr[f(x ⊕ e_i) ≠ f(x)]`.
pub fn flip_influence<T: Scalar>(f: &CubeFunction<T>) -> T {
    let w = f.cube().weights();
    let v = f.values();
    (0..f.n())
        .map(|i| {
            let bit = 1usize << i;
            (0..v.len())
                .filter(|&m| v[m] != v[m ^ bit])
                .map(|m| w[m])
                .sum::<T>()
        })
        .sum()
}

/// `L_S f = Σ_{E⊇S} f̂(E) χ_E`, the composition of `f ↦ f − E_i f`, `i ∈ S`.
pub fn laplacian<T: Scalar>(f: &CubeFunction<T>, s: Subset) -> Result<CubeFunction<T>> {
    check_coords(f, s)?;
    let p = f.cube().p();
    let mut a = f.values().to_vec();
    for c in s.coords() {
        let bit = 1usize << (c - 1);
        for m in 0..a.len() {
            if m & bit == 0 {
                let (f0, f1) = (a[m], a[m | bit]);
                let e = (T::one() - p) * f0 + p * f1;
                a[m] = f0 - e;
                a[m | bit] = f1 - e;
            }
        }
    }
    CubeFunction::new(*f.cube(), a)
}

pub fn laplacian_spectral<T: Scalar>(spec: &SpectralForm<T>, s: Subset) -> SpectralForm<T> {
    spec.scale_by(|e| if s.is_subset_of(e) { T::one() } else { T::zero() })
}

/// `β = max_{|S| ≤ r_max} I_S(f) / E[f²]` and the set attaining it.
pub fn beta_small_check<T: Scalar>(f: &CubeFunction<T>, r_max: usize) -> Result<(T, Subset)> {
    let e2 = f.energy();
    if e2 <= T::zero() {
        return Err(Error::ZeroFunction);
    }
    let table = GeneralizedInfluenceTable::new(f, r_max);
    let (s, v) = argmax(table.entries.iter().copied()).expect("∅ is always present");
    Ok((v / e2, s))
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalnessReport<T> {
    pub r: usize,
    pub delta: T,
    pub is_global: bool,
    pub mu: T,
    /// Largest `μ_p(f_{J→1}) − μ_p(f)` over `|J| ≤ r`, and the `J` attaining it.
    pub max_bump: T,
    pub argmax: Subset,
    /// `(J, μ_p(f_{J→1}))` when not global.
    pub witness: Option<(Subset, T)>,
}

fn require_boolean<T: Scalar>(f: &CubeFunction<T>) -> Result<()> {
    if f.is_boolean() {
        Ok(())
    } else {
        Err(Error::NotBoolean)
    }
}

/// Exhaustive `(r, δ)`-globalness test over every `|J| ≤ r`.
pub fn globalness<T: Scalar>(f: &CubeFunction<T>, r: usize, delta: T) -> Result<GlobalnessReport<T>> {
    require_boolean(f)?;
    let table = f.restricted_measures();
    Ok(globalness_from_table(&table, f.n(), r, delta))
}

pub(crate) fn globalness_from_table<T: Scalar>(
    table: &[T],
    n: usize,
    r: usize,
    delta: T,
) -> GlobalnessReport<T> {
    let mu = table[0];
    let (mut argmax, mut best) = (Subset::EMPTY, table[0]);
    for m in masks_up_to(n, r.min(n)).map(|s| s.0) {
        if table[m] > best {
            best = table[m];
            argmax = Subset(m);
        }
    }
    let max_bump = best - mu;
    let is_global = le_rel(best, mu + delta, T::roundoff());
    GlobalnessReport {
        r,
        delta,
        is_global,
        mu,
        max_bump,
        argmax,
        witness: (!is_global).then_some((argmax, best)),
    }
}

/// Smallest `δ` for which `f` is `(r, δ)`-global.
pub fn witnessed_delta<T: Scalar>(f: &CubeFunction<T>, r: usize) -> Result<T> {
    Ok(globalness(f, r, T::zero())?.max_bump.max(T::zero()))
}

/// Outcome of one equivalence lemma on one function.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck<T> {
    pub name: &'static str,
    pub hypothesis: bool,
    pub delta: T,
    /// Smallest value of `bound − observed` across the lemma's conclusions;
    /// `None` when the hypothesis fails.
    pub margin: Option<T>,
    pub holds: Option<bool>,
}

impl<T: Scalar> LemmaCheck<T> {
    fn vacuous(name: &'static str, delta: T) -> Self {
        Self {
            name,
            hypothesis: false,
            delta,
            margin: None,
            holds: None,
        }
    }

    fn from_pairs(name: &'static str, delta: T, pairs: impl IntoIterator<Item = (T, T)>) -> Self {
        let mut margin: Option<T> = None;
        let mut holds = true;
        for (observed, bound) in pairs {
            holds &= le_rel(observed, bound, T::check_tol());
            let m = bound - observed;
            margin = Some(margin.map_or(m, |x: T| x.min(m)));
        }
        Self {
            name,
            hypothesis: true,
            delta,
            margin: Some(margin.unwrap_or(T::infinity())),
            holds: Some(holds),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport<T> {
    pub r: usize,
    pub mu: T,
    pub monotone: bool,
    pub checks: Vec<LemmaCheck<T>>,
}

impl<T: Scalar> EquivalenceReport<T> {
    /// False only if some lemma whose hypothesis held has a failed conclusion.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds != Some(false))
    }

    pub fn get(&self, name: &str) -> Option<&LemmaCheck<T>> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs the four globalness equivalences on a Boolean `f`.
///
/// With `delta = None` each lemma uses the smallest `δ` that satisfies its
/// hypothesis (the witnessed value); otherwise the given `δ` is tested.
///
/// * `sparse`: `μ ≤ δ`, `(r,δ)`-global ⇒ `I_S(f^{≤r}) ≤ I_S(f) ≤ 8^r δ` for `|S| ≤ r`.
/// * `monotone`: monotone, `(r,δ)`-global ⇒ `I_S(f) ≤ 8^{|S|} δ` for nonempty `|S| ≤ r`.
/// * `restrict`: the three statements about `f_{i→1}` and `f_{i→0}`.
/// * `converse`: `I_S(f) ≤ δ` for nonempty `|S| ≤ r` ⇒ `(r, 4^r δ)`-global.
pub fn equivalence_suite<T: Scalar>(
    f: &CubeFunction<T>,
    r: usize,
    delta: Option<T>,
) -> Result<EquivalenceReport<T>> {
    require_boolean(f)?;
    let n = f.n();
    let p = f.cube().p();
    let r_eff = r.min(n);
    let spec = f.forward();
    let infl = influences_of_spectrum(&spec);
    let infl_trunc = influences_of_spectrum(&spec.truncate(r));
    let table = f.restricted_measures();
    let mu = table[0];
    let bump = globalness_from_table(&table, n, r, T::zero()).max_bump.max(T::zero());
    let small: Vec<usize> = masks_up_to(n, r_eff).map(|s| s.0).collect();
    let monotone = f.is_monotone();
    let eight = T::lit(8.0);
    let mut checks = Vec::new();

    let is_global = |d: T| le_rel(bump, d, T::roundoff());

    // Sparse.
    let d = delta.unwrap_or(bump.max(mu));
    checks.push(if le_rel(mu, d, T::roundoff()) && is_global(d) {
        let bound = eight.powi(r as i32) * d;
        LemmaCheck::from_pairs(
            "sparse",
            d,
            small
                .iter()
                .flat_map(|&m| [(infl_trunc[m], infl[m]), (infl[m], bound)]),
        )
    } else {
        LemmaCheck::vacuous("sparse", d)
    });

    // Monotone, and the restriction lemma it rests on.
    let d = delta.unwrap_or(bump);
    let mono_ok = monotone && p <= T::lit(0.5) && is_global(d);
    checks.push(if mono_ok {
        LemmaCheck::from_pairs(
            "monotone",
            d,
            small
                .iter()
                .filter(|&&m| m != 0)
                .map(|&m| (infl[m], eight.powi(m.count_ones() as i32) * d)),
        )
    } else {
        LemmaCheck::vacuous("monotone", d)
    });
    checks.push(if mono_ok {
        let mut pairs = Vec::new();
        for i in 1..=n {
            let bit = 1usize << (i - 1);
            let one = f.restrict(Subset(bit), Subset(bit))?;
            let zero = f.restrict(Subset(bit), Subset::EMPTY)?;
            let mu1 = table[bit];
            let mu0 = zero.mu_measure();
            // (2) μ(f_{i→0}) ≥ μ − pδ/(1−p).
            pairs.push((mu, mu0 + p * d / (T::one() - p)));
            if r >= 1 {
                // (1) f_{i→1} is (r−1, δ)-global; (3) f_{i→0} is (r−1, δ/(1−p))-global.
                let b1 = globalness(&one, r - 1, d)?.max_bump;
                let b0 = globalness(&zero, r - 1, d)?.max_bump;
                pairs.push((mu1 + b1, mu1 + d));
                pairs.push((mu0 + b0, mu0 + d / (T::one() - p)));
            }
        }
        LemmaCheck::from_pairs("restrict", d, pairs)
    } else {
        LemmaCheck::vacuous("restrict", d)
    });

    // Converse.
    let witnessed = small
        .iter()
        .filter(|&&m| m != 0)
        .map(|&m| infl[m])
        .fold(T::zero(), T::max);
    let d = delta.unwrap_or(witnessed);
    checks.push(if r > 0 && le_rel(witnessed, d, T::roundoff()) {
        LemmaCheck::from_pairs(
            "converse",
            d,
            [(bump, T::lit(4.0).powi(r as i32) * d)],
        )
    } else if r == 0 {
        LemmaCheck::from_pairs("converse", d, [(bump, d)])
    } else {
        LemmaCheck::vacuous("converse", d)
    });

    Ok(EquivalenceReport {
        r,
        mu,
        monotone,
        checks,
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

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn derivative_examples() {
        let s = (3f64).sqrt() / 4.0;
        let d = gen("dictator", 2, 0.25);
        assert!(derivative(&d, Subset::from_coords([1])).unwrap().values().iter().all(|&v| close(v, s)));
        assert!(derivative(&d, Subset::from_coords([2])).unwrap().is_zero());
        let a = gen("and", 2, 0.25);
        let dd = derivative(&a, Subset(3)).unwrap();
        assert!(dd.values().iter().all(|&v| close(v, 3.0 / 16.0)));
        assert_eq!(derivative(&a, Subset::EMPTY).unwrap(), a);
    }

    #[test]
    fn influence_examples() {
        for p in [0.1, 0.25, 0.5] {
            let a = gen("and", 2, p);
            assert!(close(gen_influence(&a, Subset(3)).unwrap(), 1.0));
            assert!(close(gen_influence_direct(&a, Subset(3)).unwrap(), 1.0));
            let d = gen("dictator", 2, p);
            assert!(close(gen_influence(&d, Subset(1)).unwrap(), 1.0));
            assert!(close(gen_influence(&d, Subset(2)).unwrap(), 0.0));
        }
    }

    #[test]
    fn total_influence_examples() {
        assert!(close(total_influence(&gen("dictator", 3, 0.25)), 1.0));
        let par = gen("parity", 3, 0.5);
        assert!(close(total_influence(&par), 3.0));
        assert!(close(flip_influence(&par), 3.0));
        assert!(close(total_influence(&gen("constant", 3, 0.25)), 0.0));
    }

    #[test]
    fn beta_examples() {
        let (b, s) = beta_small_check(&gen("dictator", 2, 0.25), 1).unwrap();
        assert!(close(b, 4.0));
        assert_eq!(s, Subset(1));
        let (b, _) = beta_small_check(&gen("constant", 3, 0.25), 3).unwrap();
        assert!(close(b, 1.0));
        let a = gen("and", 2, 0.1);
        let norm = a.energy().sqrt();
        let f = a.map(|v| v / norm);
        let (b, s) = beta_small_check(&f, 2).unwrap();
        assert!((b - 100.0).abs() < 1e-9);
        assert_eq!(s, Subset(3));
        let zero = gen("constant:c=0", 2, 0.3);
        assert!(matches!(beta_small_check(&zero, 2), Err(Error::ZeroFunction)));
    }

    #[test]
    fn globalness_examples() {
        let at = gen("antitribes:s=4,w=2", 8, 0.5);
        let g = globalness(&at, 1, 0.3).unwrap();
        assert!(g.is_global);
        assert!((g.max_bump - at.mu_measure() / 3.0).abs() < 1e-12);
        let d = gen("dictator", 3, 0.25);
        let g = globalness(&d, 1, 0.5).unwrap();
        assert!(!g.is_global);
        let (j, m) = g.witness.unwrap();
        assert_eq!(j, Subset(1));
        assert!(close(m, 1.0));
        assert!(close(g.max_bump, 0.75));
        for delta in [0.0, 0.1] {
            assert!(globalness(&d, 0, delta).unwrap().is_global);
        }
        assert!(matches!(
            globalness(&random_function(BiasedCube::new(2, 0.5).unwrap(), 1), 1, 0.1),
            Err(Error::NotBoolean)
        ));
    }

    #[test]
    fn equivalence_examples() {
        let at = gen("antitribes:s=3,w=3", 9, 0.3);
        let rep = equivalence_suite(&at, 2, None).unwrap();
        assert!(rep.monotone);
        let mono = rep.get("monotone").unwrap();
        assert!(mono.hypothesis);
        assert_eq!(mono.holds, Some(true));
        assert_eq!(rep.get("restrict").unwrap().holds, Some(true));
        assert!(rep.all_hold());

        let d = gen("dictator", 3, 0.25);
        let conv = equivalence_suite(&d, 1, Some(0.5)).unwrap();
        assert!(!conv.get("converse").unwrap().hypothesis);

        let z = gen("constant:c=0", 3, 0.25);
        let rep = equivalence_suite(&z, 2, None).unwrap();
        assert!(rep.checks.iter().all(|c| c.hypothesis && c.holds == Some(true)));
        assert!(close(rep.get("sparse").unwrap().delta, 0.0));
    }

    #[test]
    fn laplacian_routes_agree() {
        let c = BiasedCube::new(5, 0.2).unwrap();
        let f = random_function(c, 3);
        let spec = f.forward();
        for s in [Subset(0), Subset(1), Subset(6), Subset(0b10101)] {
            let a = laplacian(&f, s).unwrap();
            let b = laplacian_spectral(&spec, s).inverse();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
            let d = derivative(&f, s).unwrap();
            let e = derivative_spectral(&spec, s).unwrap().inverse();
            assert!(d.max_abs_diff(&e).unwrap() < 1e-12);
        }
    }
}
