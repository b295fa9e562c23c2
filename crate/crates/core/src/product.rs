//! Finite product spaces `Π_t (Ω_t, ν_t)`: Efron–Stein decomposition,
//! Laplacians, the product noise operator and the hypercontractive
//! inequality for even `q`.
//!
//! A point is a digit vector `ω` with `ω_t ∈ {0, …, |Ω_t| − 1}`, stored at
//! mixed-radix index `Σ_t ω_t · Π_{u<t} |Ω_u|`. On an all-binary space with
//! `ν_t = (1 − p, p)` this is exactly the cube indexing.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{BiasedCube, CubeFunction};
use crate::error::{out_of_range, Error, Result};
use crate::scalar::{le_rel, Scalar};
use crate::subset::Subset;

/// Largest `2^n · |Ω|` table an Efron–Stein decomposition may allocate.
pub const ES_CELL_CAP: usize = 1 << 26;
/// Largest `|Ω|` for the explicit noise kernel.
pub const KERNEL_POINT_CAP: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Factor<T> {
    pub probs: Vec<T>,
}

impl<T: Scalar> Factor<T> {
    pub fn arity(&self) -> usize {
        self.probs.len()
    }

    /// `p_t`, the smallest atom.
    pub fn p(&self) -> T {
        self.probs.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn sigma(&self) -> T {
        let p = self.p();
        (p * (T::one() - p)).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductSpace<T> {
    factors: Vec<Factor<T>>,
    strides: Vec<usize>,
    size: usize,
}

impl<T: Scalar> ProductSpace<T> {
    pub fn new(factors: Vec<Vec<T>>) -> Result<Self> {
        Self::with_cap(factors, crate::cube::DEFAULT_N_CAP)
    }

    /// `cap` bounds `log₂ |Ω|`.
    pub fn with_cap(factors: Vec<Vec<T>>, cap: usize) -> Result<Self> {
        let mut strides = Vec::with_capacity(factors.len());
        let mut size = 1usize;
        for (t, probs) in factors.iter().enumerate() {
            if probs.len() < 2 {
                return Err(Error::InvalidSpace(format!(
                    "factor {} has {} atom(s); drop trivial factors",
                    t + 1,
                    probs.len()
                )));
            }
            if probs.iter().any(|&x| !(x > T::zero())) {
                return Err(Error::InvalidSpace(format!("factor {} has a non-positive atom", t + 1)));
            }
            let total: T = probs.iter().copied().sum();
            if (total - T::one()).abs() > T::roundoff() * T::of_usize(probs.len()) * T::lit(10.0) {
                return Err(Error::InvalidSpace(format!("factor {} sums to {}", t + 1, total)));
            }
            let p = probs.iter().copied().fold(T::infinity(), T::min);
            if p >= T::lit(0.5) {
                return Err(Error::InvalidSpace(format!(
                    "factor {} has smallest atom {} ≥ 1/2; merge or reweight its atoms so that p_t < 1/2",
                    t + 1,
                    p
                )));
            }
            strides.push(size);
            size = size
                .checked_mul(probs.len())
                .filter(|&s| s <= 1usize << cap.min(usize::BITS as usize - 1))
                .ok_or(Error::DimensionCap {
                    n: factors.len(),
                    cap,
                })?;
        }
        Ok(Self {
            factors: factors.into_iter().map(|probs| Factor { probs }).collect(),
            strides,
            size,
        })
    }

    /// `{0,1}^n` with `ν_t = (1 − p, p)`.
    pub fn binary(n: usize, p: T) -> Result<Self> {
        Self::new(vec![vec![T::one() - p, p]; n])
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn arities(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::arity).collect()
    }

    /// `p = min_t p_t`.
    pub fn p(&self) -> T {
        self.factors.iter().map(Factor::p).fold(T::infinity(), T::min)
    }

    /// `σ_S = Π_{t∈S} σ_t`.
    pub fn sigma_s(&self, s: Subset) -> T {
        s.coords().map(|c| self.factors[c - 1].sigma()).product()
    }

    pub fn digit(&self, index: usize, t: usize) -> usize {
        index / self.strides[t] % self.factors[t].arity()
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.n()).map(|t| self.digit(index, t)).collect()
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn weights(&self) -> Vec<T> {
        let mut w = vec![T::one(); self.size];
        for (x, v) in w.iter_mut().enumerate() {
            for (t, f) in self.factors.iter().enumerate() {
                *v *= f.probs[self.digit(x, t)];
            }
        }
        w
    }

    /// `E_t g`: average out coordinate `t` (0-based).
    fn average_out(&self, g: &[T], t: usize) -> Vec<T> {
        let stride = self.strides[t];
        let probs = &self.factors[t].probs;
        let mut out = vec![T::zero(); g.len()];
        for (x, o) in out.iter_mut().enumerate() {
            let base = x - self.digit(x, t) * stride;
            *o = probs.iter().enumerate().map(|(a, &w)| w * g[base + a * stride]).sum();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductFunction<T> {
    space: ProductSpace<T>,
    values: Vec<T>,
}

impl<T: Scalar> ProductFunction<T> {
    pub fn new(space: ProductSpace<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                got: values.len(),
            });
        }
        Ok(Self { space, values })
    }

    /// Builds the table from each point's digit vector.
    pub fn from_fn(space: ProductSpace<T>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let values = (0..space.size()).map(|x| f(&space.digits(x))).collect();
        Self { space, values }
    }

    pub fn constant(space: ProductSpace<T>, c: T) -> Self {
        let values = vec![c; space.size()];
        Self { space, values }
    }

    /// The same table read on the binary product space with bias `p`.
    pub fn from_cube(f: &CubeFunction<T>) -> Result<Self> {
        Self::new(ProductSpace::binary(f.n(), f.cube().p())?, f.values().to_vec())
    }

    pub fn to_cube(&self) -> Result<CubeFunction<T>> {
        if self.space.arities().iter().any(|&a| a != 2) {
            return Err(Error::InvalidSpace("not an all-binary space".into()));
        }
        let p = self.space.factors[0].probs[1];
        if self.space.factors.iter().any(|f| (f.probs[1] - p).abs() > T::roundoff()) {
            return Err(Error::InvalidSpace("factors carry different biases".into()));
        }
        CubeFunction::new(BiasedCube::general_with_cap(self.space.n(), p, usize::BITS as usize - 1)?, self.values.clone())
    }

    pub fn space(&self) -> &ProductSpace<T> {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn expectation(&self) -> T {
        self.space.weights().iter().zip(&self.values).map(|(&w, &v)| w * v).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(inner_with(&self.space.weights(), &self.values, &other.values))
    }

    pub fn energy(&self) -> T {
        inner_with(&self.space.weights(), &self.values, &self.values)
    }

    /// `E[f^q]` for integer `q`.
    pub fn moment(&self, q: u32) -> T {
        let w = self.space.weights();
        w.iter().zip(&self.values).map(|(&w, &v)| w * v.powi(q as i32)).sum()
    }

    /// `E_J f`, averaging out the coordinates in `J`.
    pub fn average_over(&self, j: Subset) -> Self {
        let mut g = self.values.clone();
        for c in j.coords() {
            g = self.space.average_out(&g, c - 1);
        }
        Self {
            space: self.space.clone(),
            values: g,
        }
    }

    /// `max |f − E_{S̄} f|`: zero exactly when `f` depends only on `S`.
    pub fn dependence_defect(&self, s: Subset) -> T {
        let full = Subset((1 << self.space.n()) - 1);
        let avg = self.average_over(full.minus(s));
        max_abs_diff(&self.values, &avg.values)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(max_abs_diff(&self.values, &other.values))
    }
}

fn inner_with<T: Scalar>(w: &[T], a: &[T], b: &[T]) -> T {
    w.iter().zip(a).zip(b).map(|((&w, &x), &y)| w * x * y).sum()
}

fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max)
}

/// `f = Σ_S f^{=S}`, one dense table per `S ⊆ [n]`, indexed by mask.
#[derive(Clone, Debug, Serialize)]
pub struct ESDecomposition<T> {
    space: ProductSpace<T>,
    components: Vec<Vec<T>>,
}

/// Maximum deviations of the four Efron–Stein identities.
#[derive(Clone, Debug, Serialize)]
pub struct ESInvariants<T> {
    /// `max |f − Σ_S f^{=S}|`.
    pub reconstruction: T,
    /// `max_S max |f^{=S} − E_{S̄} f^{=S}|`.
    pub locality: T,
    /// `max_{S≠S′} |⟨f^{=S}, f^{=S′}⟩|`.
    pub orthogonality: T,
    /// `|E[f²] − Σ_S ‖f^{=S}‖²|`.
    pub parseval: T,
}

impl<T: Scalar> ESInvariants<T> {
    pub fn max(&self) -> T {
        self.reconstruction.max(self.locality).max(self.orthogonality).max(self.parseval)
    }
}

/// Conditional averages `f^{⊂J} = E_{J̄} f` for every `J`, then
/// inclusion–exclusion `f^{=S} = Σ_{J⊆S} (−1)^{|S∖J|} f^{⊂J}`.
pub fn es_decompose<T: Scalar>(f: &ProductFunction<T>) -> Result<ESDecomposition<T>> {
    let space = &f.space;
    let n = space.n();
    let cells = (1usize << n).checked_mul(space.size()).unwrap_or(usize::MAX);
    if cells > ES_CELL_CAP {
        return Err(Error::DimensionCap {
            n,
            cap: ES_CELL_CAP.trailing_zeros() as usize,
        });
    }
    let full = (1usize << n) - 1;
    let mut comps: Vec<Vec<T>> = vec![Vec::new(); 1 << n];
    comps[full] = f.values.clone();
    for level in (0..n).rev() {
        let masks: Vec<usize> = (0..=full).filter(|m| m.count_ones() as usize == level).collect();
        let next: Vec<(usize, Vec<T>)> = masks
            .par_iter()
            .map(|&m| {
                let t = (!m & full).trailing_zeros() as usize;
                (m, space.average_out(&comps[m | 1 << t], t))
            })
            .collect();
        for (m, v) in next {
            comps[m] = v;
        }
    }
    for bit in 0..n {
        let b = 1usize << bit;
        for m in (0..=full).filter(|m| m & b != 0) {
            let (lo, hi) = comps.split_at_mut(m);
            for (x, y) in hi[0].iter_mut().zip(&lo[m ^ b]) {
                *x -= *y;
            }
        }
    }
    Ok(ESDecomposition {
        space: space.clone(),
        components: comps,
    })
}

impl<T: Scalar> ESDecomposition<T> {
    pub fn space(&self) -> &ProductSpace<T> {
        &self.space
    }

    pub fn component(&self, s: Subset) -> ProductFunction<T> {
        ProductFunction {
            space: self.space.clone(),
            values: self.components[s.0].clone(),
        }
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    pub fn reconstruct(&self) -> ProductFunction<T> {
        let mut values = vec![T::zero(); self.space.size()];
        for c in &self.components {
            for (v, &x) in values.iter_mut().zip(c) {
                *v += x;
            }
        }
        ProductFunction {
            space: self.space.clone(),
            values,
        }
    }

    /// `‖f^{=S}‖₂²` per mask.
    pub fn norms2(&self) -> Vec<T> {
        let w = self.space.weights();
        self.components.iter().map(|c| inner_with(&w, c, c)).collect()
    }

    /// `Σ_S c(S) f^{=S}`.
    pub fn combine(&self, c: impl Fn(Subset) -> T) -> ProductFunction<T> {
        let mut values = vec![T::zero(); self.space.size()];
        for (m, comp) in self.components.iter().enumerate() {
            let k = c(Subset(m));
            if k == T::zero() {
                continue;
            }
            for (v, &x) in values.iter_mut().zip(comp) {
                *v += k * x;
            }
        }
        ProductFunction {
            space: self.space.clone(),
            values,
        }
    }

    pub fn invariants(&self, f: &ProductFunction<T>) -> ESInvariants<T> {
        let w = self.space.weights();
        let norms = self.norms2();
        let full = Subset(self.components.len() - 1);
        let locality = (0..self.components.len())
            .map(|m| self.component(Subset(m)).average_over(full.minus(Subset(m))))
            .zip(&self.components)
            .map(|(avg, c)| max_abs_diff(&avg.values, c))
            .fold(T::zero(), T::max);
        let mut orthogonality = T::zero();
        for a in 0..self.components.len() {
            for b in a + 1..self.components.len() {
                orthogonality = orthogonality.max(inner_with(&w, &self.components[a], &self.components[b]).abs());
            }
        }
        ESInvariants {
            reconstruction: max_abs_diff(&self.reconstruct().values, &f.values),
            locality,
            orthogonality,
            parseval: (f.energy() - norms.iter().copied().sum::<T>()).abs(),
        }
    }
}

/// `L_S f` by composing `L_t = I − E_t` over `t ∈ S`.
pub fn laplacian<T: Scalar>(f: &ProductFunction<T>, s: Subset) -> Result<ProductFunction<T>> {
    check_subset(f.space.n(), s)?;
    let mut g = f.values.clone();
    for c in s.coords() {
        let avg = f.space.average_out(&g, c - 1);
        for (v, a) in g.iter_mut().zip(avg) {
            *v -= a;
        }
    }
    Ok(ProductFunction {
        space: f.space.clone(),
        values: g,
    })
}

/// `L_S f = Σ_{E ⊇ S} f^{=E}`.
pub fn laplacian_spectral<T: Scalar>(es: &ESDecomposition<T>, s: Subset) -> ProductFunction<T> {
    es.combine(|e| if s.is_subset_of(e) { T::one() } else { T::zero() })
}

/// `‖L_S f‖₂²` for every `S`, by superset sums of the component norms.
pub fn laplacian_norms2<T: Scalar>(es: &ESDecomposition<T>) -> Vec<T> {
    let mut a = es.norms2();
    crate::subset::superset_zeta(&mut a);
    a
}

/// `I_S(f) = ‖L_S f‖₂² Π_{i∈S} σ_i^{−2}`.
pub fn product_influence<T: Scalar>(f: &ProductFunction<T>, s: Subset) -> Result<T> {
    Ok(laplacian(f, s)?.energy() / f.space.sigma_s(s).powi(2))
}

fn check_subset(n: usize, s: Subset) -> Result<()> {
    if s.max_coord() > n {
        Err(Error::CoordinateOutOfRange { coord: s.max_coord(), n })
    } else {
        Ok(())
    }
}

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if rho >= T::zero() && rho <= T::one() {
        Ok(())
    } else {
        Err(out_of_range("rho", rho.as_f64(), "[0, 1]"))
    }
}

/// `T_ρ f = Σ_S ρ^{|S|} f^{=S}`.
pub fn product_noise<T: Scalar>(es: &ESDecomposition<T>, rho: T) -> Result<ProductFunction<T>> {
    check_rho(rho)?;
    Ok(es.combine(|s| rho.powi(s.len() as i32)))
}

/// `T_ρ f` from the resampling kernel
/// `K(x, y) = Π_t (ρ·1[x_t = y_t] + (1 − ρ) ν_t(y_t))`, `O(|Ω|²)`.
pub fn product_noise_kernel<T: Scalar>(f: &ProductFunction<T>, rho: T) -> Result<ProductFunction<T>> {
    check_rho(rho)?;
    let space = &f.space;
    if space.size() > KERNEL_POINT_CAP {
        return Err(Error::DimensionCap {
            n: space.n(),
            cap: KERNEL_POINT_CAP.trailing_zeros() as usize,
        });
    }
    let digits: Vec<Vec<usize>> = (0..space.size()).map(|x| space.digits(x)).collect();
    let values = digits
        .par_iter()
        .map(|dx| {
            digits
                .iter()
                .zip(&f.values)
                .map(|(dy, &v)| {
                    let k: T = space
                        .factors
                        .iter()
                        .zip(dx.iter().zip(dy))
                        .map(|(fac, (&a, &b))| {
                            let stay = if a == b { rho } else { T::zero() };
                            stay + (T::one() - rho) * fac.probs[b]
                        })
                        .product();
                    k * v
                })
                .sum()
        })
        .collect();
    Ok(ProductFunction {
        space: space.clone(),
        values,
    })
}

/// `ρ ≤ 1/(8 q^{1.5})`.
pub fn es_rho_cap<T: Scalar>(q: u32) -> T {
    (T::lit(8.0) * T::of_usize(q as usize).powf(T::lit(1.5))).recip()
}

#[derive(Clone, Debug, Serialize)]
pub struct EsHyperReport<T> {
    pub q: u32,
    pub rho: T,
    /// `‖T_ρ f‖_q^q`.
    pub lhs: T,
    /// `Σ_S σ_S^{2−q} ‖L_S f‖₂^q`.
    pub rhs: T,
    pub margin: T,
    pub holds: bool,
}

/// `‖T_ρ f‖_q^q ≤ Σ_S σ_S^{2−q} ‖L_S f‖₂^q` for even `q > 2`.
pub fn es_hyper_check<T: Scalar>(f: &ProductFunction<T>, q: u32, rho: T) -> Result<EsHyperReport<T>> {
    if q < 4 || q % 2 != 0 {
        return Err(out_of_range("q", q as f64, "an even integer > 2"));
    }
    let cap = es_rho_cap::<T>(q);
    if !(rho >= T::zero() && rho <= cap * (T::one() + T::roundoff())) {
        return Err(out_of_range("rho", rho.as_f64(), format!("[0, 1/(8q^1.5)] = [0, {}]", cap.as_f64())));
    }
    let es = es_decompose(f)?;
    let lhs = product_noise(&es, rho)?.moment(q);
    let half = T::of_usize(q as usize) / T::lit(2.0);
    let rhs = laplacian_norms2(&es)
        .iter()
        .enumerate()
        .map(|(m, &l2)| f.space.sigma_s(Subset(m)).powi(2 - q as i32) * l2.max(T::zero()).powf(half))
        .sum();
    Ok(EsHyperReport {
        q,
        rho,
        lhs,
        rhs,
        margin: rhs - lhs,
        holds: le_rel(lhs, rhs, T::check_tol()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderReport<T> {
    /// `|E[Π f_i]|`.
    pub lhs: T,
    /// `Π ‖f_i‖₂ · Π_{j≥3} σ_{T_j}^{2−j}`.
    pub rhs: T,
    /// `T_j`, the coordinates covered exactly `j` times, for `j = 0..=q`.
    pub coverage: Vec<Subset>,
    /// Some coordinate is covered exactly once.
    pub single_coverage: bool,
    pub holds: bool,
}

fn coverage(n: usize, sets: &[Subset]) -> Vec<Subset> {
    let mut out = vec![Subset::EMPTY; sets.len() + 1];
    for c in 1..=n {
        let k = sets.iter().filter(|s| s.contains(c)).count();
        out[k] = out[k].union(Subset::from_coords([c]));
    }
    out
}

/// `|E[Π f_i]| ≤ Π ‖f_i‖₂ Π_{j=3}^q σ_{T_j}^{2−j}` where `f_i` depends only
/// on `S_i`.
pub fn holder_term_check<T: Scalar>(fs: &[ProductFunction<T>], sets: &[Subset]) -> Result<HolderReport<T>> {
    if fs.len() != sets.len() || fs.is_empty() {
        return Err(Error::LengthMismatch {
            expected: sets.len(),
            got: fs.len(),
        });
    }
    let space = &fs[0].space;
    let scale = fs.iter().map(|f| f.values.iter().fold(T::one(), |m, v| m.max(v.abs()))).fold(T::one(), T::max);
    for (i, (f, &s)) in fs.iter().zip(sets).enumerate() {
        if &f.space != space {
            return Err(Error::SpaceMismatch);
        }
        check_subset(space.n(), s)?;
        if f.dependence_defect(s) > T::roundoff() * scale * T::lit(100.0) {
            return Err(Error::Dependence { index: i + 1 });
        }
    }
    let w = space.weights();
    let lhs = w
        .iter()
        .enumerate()
        .map(|(x, &w)| w * fs.iter().map(|f| f.values[x]).product::<T>())
        .sum::<T>()
        .abs();
    let cover = coverage(space.n(), sets);
    let mut rhs: T = fs.iter().map(|f| f.energy().sqrt()).product();
    for (j, t) in cover.iter().enumerate().skip(3) {
        rhs *= space.sigma_s(*t).powi(2 - j as i32);
    }
    Ok(HolderReport {
        lhs,
        rhs,
        single_coverage: !cover.get(1).copied().unwrap_or(Subset::EMPTY).is_empty(),
        coverage: cover,
        holds: le_rel(lhs, rhs, T::check_tol()),
    })
}

/// `E[Π_i g^{=S_i}]`, which vanishes when some coordinate lies in exactly
/// one `S_i`.
pub fn es_product_term<T: Scalar>(es: &ESDecomposition<T>, sets: &[Subset]) -> T {
    let w = es.space.weights();
    w.iter()
        .enumerate()
        .map(|(x, &w)| w * sets.iter().map(|s| es.components[s.0][x]).product::<T>())
        .sum()
}

/// `‖f‖_q^q ≤ ‖f‖₂^q σ^{2−q}` on a single factor.
pub fn single_factor_moment_check<T: Scalar>(f: &ProductFunction<T>, q: u32) -> Result<(T, T)> {
    if f.space.n() != 1 {
        return Err(Error::InvalidSpace("expected a single factor".into()));
    }
    let lhs = f.values.iter().zip(&f.space.weights()).map(|(&v, &w)| w * v.abs().powi(q as i32)).sum();
    let rhs = f.energy().sqrt().powi(q as i32) * f.space.factors[0].sigma().powi(2 - q as i32);
    Ok((lhs, rhs))
}

/// Parses `n`, then per factor `arity p_1 … p_arity`, then the value table
/// in mixed-radix order. Tokens are whitespace separated; `#` starts a comment.
pub fn parse_product(text: &str, cap: usize) -> Result<ProductFunction<f64>> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let mut next = |what: &str| -> Result<&str> { tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}"))) };
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}"))) };
    let n: usize = next("n")?.parse().map_err(|_| Error::Parse("bad n".into()))?;
    let mut factors = Vec::with_capacity(n);
    for t in 0..n {
        let arity: usize = next("arity")?
            .parse()
            .map_err(|_| Error::Parse(format!("bad arity for factor {}", t + 1)))?;
        let probs = (0..arity).map(|_| num(next("probability")?)).collect::<Result<Vec<_>>>()?;
        factors.push(probs);
    }
    let space = ProductSpace::with_cap(factors, cap)?;
    let values = (0..space.size()).map(|_| num(next("value")?)).collect::<Result<Vec<_>>>()?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("trailing token {extra:?}")));
    }
    ProductFunction::new(space, values)
}

pub fn format_product(f: &ProductFunction<f64>) -> String {
    let mut out = format!("{}\n", f.space.n());
    for fac in &f.space.factors {
        let _ = write!(out, "{}", fac.arity());
        for p in &fac.probs {
            let _ = write!(out, " {p}");
        }
        out.push('\n');
    }
    for v in &f.values {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn read_product(path: impl AsRef<Path>, cap: usize) -> Result<ProductFunction<f64>> {
    parse_product(&std::fs::read_to_string(path)?, cap)
}

pub fn write_product(path: impl AsRef<Path>, f: &ProductFunction<f64>) -> Result<()> {
    Ok(std::fs::write(path, format_product(f))?)
}

/// A seeded random space with arities in `2..=max_arity` and every atom
/// at least `min_atom`.
pub fn random_space(n: usize, max_arity: usize, min_atom: f64, seed: u64) -> Result<ProductSpace<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let factors = (0..n)
        .map(|_| {
            let arity = rng.random_range(2..=max_arity.max(2));
            let slack = 1.0 - min_atom * arity as f64;
            if slack < 0.0 {
                return Err(out_of_range("min_atom", min_atom, "min_atom · arity ≤ 1"));
            }
            let raw: Vec<f64> = (0..arity).map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let mut probs: Vec<f64> = raw.iter().map(|r| min_atom + slack * r / total).collect();
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= sum);
            if arity == 2 && probs[0] == probs[1] {
                probs[0] += 1e-6;
                probs[1] -= 1e-6;
            }
            Ok(probs)
        })
        .collect::<Result<Vec<_>>>()?;
    ProductSpace::new(factors)
}

pub fn random_product_function(space: ProductSpace<f64>, seed: u64) -> ProductFunction<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let values = (0..space.size()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    ProductFunction { space, values }
}
