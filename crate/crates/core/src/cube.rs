//! The p-biased cube, dense function tables, and the biased Walsh transform.

use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::scalar::{sigma_of, Scalar};
use crate::subset::{superset_zeta, Subset};

/// Default cap on the cube dimension. Every quantity in the crate is a
/// full-spectrum functional over a `2^n` table.
pub const DEFAULT_N_CAP: usize = 24;

/// `{0,1}^n` with the product measure `μ_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BiasedCube<T> {
    n: usize,
    p: T,
    sigma: T,
}

impl<T: Scalar> BiasedCube<T> {
    /// Cube with `p ∈ (0, 1/2]` and `n ≤ DEFAULT_N_CAP`.
    pub fn new(n: usize, p: T) -> Result<Self> {
        Self::with_cap(n, p, DEFAULT_N_CAP)
    }

    pub fn with_cap(n: usize, p: T, cap: usize) -> Result<Self> {
        if !(p > T::zero() && p <= T::lit(0.5)) {
            return Err(Error::InvalidBias(p.as_f64(), "(0, 1/2]"));
        }
        Self::build(n, p, cap)
    }

    /// Cube with any `p ∈ (0, 1)`. Used for the target space of the directed
    /// operator, for dual functions, and for measure curves that cross `1/2`.
    pub fn general(n: usize, p: T) -> Result<Self> {
        Self::general_with_cap(n, p, DEFAULT_N_CAP)
    }

    pub fn general_with_cap(n: usize, p: T, cap: usize) -> Result<Self> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::InvalidBias(p.as_f64(), "(0, 1)"));
        }
        Self::build(n, p, cap)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(n, T::lit(0.5))
    }

    fn build(n: usize, p: T, cap: usize) -> Result<Self> {
        if n > cap || n >= usize::BITS as usize - 1 {
            return Err(Error::DimensionCap { n, cap });
        }
        Ok(Self {
            n,
            p,
            sigma: sigma_of(p),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> T {
        self.p
    }

    #[inline]
    pub fn sigma(&self) -> T {
        self.sigma
    }

    #[inline]
    pub fn size(&self) -> usize {
        1 << self.n
    }

    /// Same bias, different dimension (no cap check beyond the word size).
    pub fn with_dim(&self, n: usize) -> Self {
        Self { n, ..*self }
    }

    /// Same dimension, different bias in `(0, 1)`.
    pub fn with_bias(&self, p: T) -> Result<Self> {
        Self::general_with_cap(self.n, p, usize::BITS as usize - 2)
    }

    pub fn biases(&self) -> Vec<T> {
        vec![self.p; self.n]
    }

    /// `μ_p({x})` for every point, in table order.
    pub fn weights(&self) -> Vec<T> {
        product_weights(&self.biases())
    }
}

/// Product weights `Π_i p_i^{x_i}(1−p_i)^{1−x_i}` for per-coordinate biases.
pub fn product_weights<T: Scalar>(biases: &[T]) -> Vec<T> {
    let mut w = vec![T::one(); 1 << biases.len()];
    for (i, &p) in biases.iter().enumerate() {
        let bit = 1usize << i;
        let q = T::one() - p;
        for m in 0..w.len() {
            if m & bit == 0 {
                let base = w[m];
                w[m] = base * q;
                w[m | bit] = base * p;
            }
        }
    }
    w
}

/// Expectation of a table under the product measure with the given biases.
pub fn expectation_with<T: Scalar>(values: &[T], biases: &[T]) -> T {
    let w = product_weights(biases);
    values.iter().zip(&w).map(|(&v, &w)| v * w).sum()
}

/// Forward biased Walsh transform with per-coordinate biases, in place.
/// Pair `(f₀, f₁)` along coordinate `i` becomes `((1−p)f₀ + p f₁, σ(f₁ − f₀))`.
pub fn forward_in_place<T: Scalar>(a: &mut [T], biases: &[T]) {
    debug_assert_eq!(a.len(), 1 << biases.len());
    for (i, &p) in biases.iter().enumerate() {
        let bit = 1usize << i;
        let q = T::one() - p;
        let s = sigma_of(p);
        for m in 0..a.len() {
            if m & bit == 0 {
                let (f0, f1) = (a[m], a[m | bit]);
                a[m] = q * f0 + p * f1;
                a[m | bit] = s * (f1 - f0);
            }
        }
    }
}

/// Pointwise evaluation of `Σ_S c_S Π_{i∈S} χ_i` with per-coordinate biases,
/// in place. `χ_i(0) = −p/σ`, `χ_i(1) = (1−p)/σ`.
pub fn inverse_in_place<T: Scalar>(a: &mut [T], biases: &[T]) {
    debug_assert_eq!(a.len(), 1 << biases.len());
    for (i, &p) in biases.iter().enumerate() {
        let bit = 1usize << i;
        let s = sigma_of(p);
        let lo = -p / s;
        let hi = (T::one() - p) / s;
        for m in 0..a.len() {
            if m & bit == 0 {
                let (c0, c1) = (a[m], a[m | bit]);
                a[m] = c0 + c1 * lo;
                a[m | bit] = c0 + c1 * hi;
            }
        }
    }
}

/// Dense real-valued function on a biased cube. Bit `i` of the table index
/// is coordinate `x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubeFunction<T> {
    cube: BiasedCube<T>,
    values: Vec<T>,
}

impl<T: Scalar> CubeFunction<T> {
    pub fn new(cube: BiasedCube<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != cube.size() {
            return Err(Error::LengthMismatch {
                expected: cube.size(),
                got: values.len(),
            });
        }
        Ok(Self { cube, values })
    }

    pub fn from_fn(cube: BiasedCube<T>, f: impl FnMut(usize) -> T) -> Self {
        let values = (0..cube.size()).map(f).collect();
        Self { cube, values }
    }

    pub fn constant(cube: BiasedCube<T>, c: T) -> Self {
        Self {
            cube,
            values: vec![c; cube.size()],
        }
    }

    /// Boolean indicator of a predicate on the point index.
    pub fn indicator(cube: BiasedCube<T>, mut pred: impl FnMut(usize) -> bool) -> Self {
        Self::from_fn(cube, |x| if pred(x) { T::one() } else { T::zero() })
    }

    #[inline]
    pub fn cube(&self) -> &BiasedCube<T> {
        &self.cube
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.cube.n
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn at(&self, x: usize) -> T {
        self.values[x]
    }

    /// Same table read under another bias `q ∈ (0, 1)`.
    pub fn rebias(&self, q: T) -> Result<Self> {
        Ok(Self {
            cube: self.cube.with_bias(q)?,
            values: self.values.clone(),
        })
    }

    pub fn map(&self, mut g: impl FnMut(T) -> T) -> Self {
        Self {
            cube: self.cube,
            values: self.values.iter().map(|&v| g(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, mut g: impl FnMut(T, T) -> T) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            cube: self.cube,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| g(a, b))
                .collect(),
        })
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.cube.n != other.cube.n || self.cube.p != other.cube.p {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// `f − E[f]`.
    pub fn centered(&self) -> Self {
        let mu = self.expectation();
        self.map(|v| v - mu)
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|&v| v == T::zero() || v == T::one())
    }

    pub fn is_signed_boolean(&self) -> bool {
        self.values
            .iter()
            .all(|&v| v == T::zero() || v == T::one() || v == -T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == T::zero())
    }

    /// `f(x) ≤ f(y)` whenever `x ≤ y` coordinatewise.
    pub fn is_monotone(&self) -> bool {
        (0..self.n()).all(|i| {
            let bit = 1usize << i;
            (0..self.values.len())
                .filter(|m| m & bit == 0)
                .all(|m| self.values[m] <= self.values[m | bit])
        })
    }

    /// `E_{μ_p}[f] = Σ_x f(x) p^{|x|}(1−p)^{n−|x|}`; `μ_p(f)` for Boolean `f`.
    pub fn expectation(&self) -> T {
        expectation_with(&self.values, &self.cube.biases())
    }

    /// Alias of [`Self::expectation`] under the name used for Boolean functions.
    pub fn mu_measure(&self) -> T {
        self.expectation()
    }

    /// `(E|f|^r)^{1/r}` for `r ≥ 1`.
    pub fn lr_norm(&self, r: T) -> Result<T> {
        if !(r >= T::one()) {
            return Err(out_of_range("r", r.as_f64(), "r ≥ 1"));
        }
        let m = self.map(|v| v.abs().powf(r)).expectation();
        Ok(m.powf(r.recip()))
    }

    /// `E[f²]`.
    pub fn energy(&self) -> T {
        self.map(|v| v * v).expectation()
    }

    /// `E[f^k]` for an integer power (exact polynomial moment).
    pub fn moment(&self, k: i32) -> T {
        self.map(|v| v.powi(k)).expectation()
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        Ok(self.zip_with(other, |a, b| a * b)?.expectation())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    /// p-biased Fourier coefficients, `O(n·2^n)`.
    pub fn forward(&self) -> SpectralForm<T> {
        let mut coeffs = self.values.clone();
        forward_in_place(&mut coeffs, &self.cube.biases());
        SpectralForm {
            cube: self.cube,
            coeffs,
        }
    }

    /// `f_{S→x}` on the remaining `n − |S|` coordinates, same bias. `values`
    /// is a mask over the full cube and must be a subset of `fixed`.
    pub fn restrict(&self, fixed: Subset, values: Subset) -> Result<Self> {
        let n = self.n();
        if fixed.max_coord() > n {
            return Err(Error::CoordinateOutOfRange {
                coord: fixed.max_coord(),
                n,
            });
        }
        if !values.is_subset_of(fixed) {
            return Err(Error::AssignmentDomain);
        }
        let free: Vec<usize> = (0..n).filter(|i| fixed.0 >> i & 1 == 0).collect();
        let cube = self.cube.with_dim(free.len());
        let out = (0..cube.size())
            .map(|y| {
                let x = free
                    .iter()
                    .enumerate()
                    .fold(values.0, |acc, (j, &i)| acc | ((y >> j & 1) << i));
                self.values[x]
            })
            .collect();
        Ok(Self { cube, values: out })
    }

    /// Restriction from explicit `(coordinate, bit)` pairs; coordinates are
    /// 1-based and must be distinct.
    pub fn restrict_pairs(&self, assignment: &[(usize, bool)]) -> Result<Self> {
        let mut fixed = 0usize;
        let mut ones = 0usize;
        for &(c, b) in assignment {
            if c == 0 || c > self.n() {
                return Err(Error::CoordinateOutOfRange { coord: c, n: self.n() });
            }
            let bit = 1 << (c - 1);
            if fixed & bit != 0 {
                return Err(Error::AssignmentDomain);
            }
            fixed |= bit;
            if b {
                ones |= bit;
            }
        }
        self.restrict(Subset(fixed), Subset(ones))
    }

    /// `μ_p(f_{J→1})` for every `J ⊆ [n]`, indexed by mask, `O(n·2^n)`:
    /// superset sums of `f·μ_p` divided by `p^{|J|}`.
    pub fn restricted_measures(&self) -> Vec<T> {
        let w = self.cube.weights();
        let mut a: Vec<T> = self.values.iter().zip(&w).map(|(&v, &w)| v * w).collect();
        superset_zeta(&mut a);
        let p = self.cube.p;
        for (m, v) in a.iter_mut().enumerate() {
            *v = *v / p.powi(m.count_ones() as i32);
        }
        a
    }

    /// `f*(x) = 1 − f(1 − x)`, living on the cube with bias `1 − p`.
    pub fn dual(&self) -> Result<Self> {
        let full = self.cube.size() - 1;
        Ok(Self {
            cube: self.cube.with_bias(T::one() - self.cube.p)?,
            values: (0..=full).map(|x| T::one() - self.values[full ^ x]).collect(),
        })
    }
}

/// The `2^n` p-biased Fourier coefficients, indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralForm<T> {
    cube: BiasedCube<T>,
    coeffs: Vec<T>,
}

impl<T: Scalar> SpectralForm<T> {
    pub fn new(cube: BiasedCube<T>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != cube.size() {
            return Err(Error::LengthMismatch {
                expected: cube.size(),
                got: coeffs.len(),
            });
        }
        Ok(Self { cube, coeffs })
    }

    pub fn from_terms(cube: BiasedCube<T>, terms: &[(Subset, T)]) -> Result<Self> {
        let mut coeffs = vec![T::zero(); cube.size()];
        for &(s, c) in terms {
            if s.max_coord() > cube.n {
                return Err(Error::CoordinateOutOfRange {
                    coord: s.max_coord(),
                    n: cube.n,
                });
            }
            coeffs[s.0] += c;
        }
        Ok(Self { cube, coeffs })
    }

    #[inline]
    pub fn cube(&self) -> &BiasedCube<T> {
        &self.cube
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.cube.n
    }

    #[inline]
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, s: Subset) -> T {
        self.coeffs[s.0]
    }

    pub fn inverse(&self) -> CubeFunction<T> {
        let mut values = self.coeffs.clone();
        inverse_in_place(&mut values, &self.cube.biases());
        CubeFunction {
            cube: self.cube,
            values,
        }
    }

    /// `Σ_S f̂(S)²`.
    pub fn mass(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    /// Plancherel pairing `Σ_S f̂(S)ĝ(S)`.
    pub fn dot(&self, other: &Self) -> T {
        self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a * b).sum()
    }

    /// Largest `|S|` with `|f̂(S)| > tol`; 0 for the zero spectrum.
    pub fn degree(&self, tol: T) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .map(|(m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `f^{≤r}`: coefficients with `|S| > r` set to zero.
    pub fn truncate(&self, r: usize) -> Self {
        self.scale_levels(|k| if k <= r { T::one() } else { T::zero() })
    }

    /// Multiplies each coefficient by `factor(|S|)`.
    pub fn scale_levels(&self, factor: impl Fn(usize) -> T) -> Self {
        let table: Vec<T> = (0..=self.n()).map(&factor).collect();
        Self {
            cube: self.cube,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, &c)| c * table[m.count_ones() as usize])
                .collect(),
        }
    }

    /// Multiplies each coefficient by `factor(S)`.
    pub fn scale_by(&self, factor: impl Fn(Subset) -> T) -> Self {
        Self {
            cube: self.cube,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, &c)| c * factor(Subset(m)))
                .collect(),
        }
    }

    /// `Σ_{E ⊇ S} f̂(E)²` for every `S`, via one superset-zeta pass.
    pub fn superset_mass(&self) -> Vec<T> {
        let mut a: Vec<T> = self.coeffs.iter().map(|&c| c * c).collect();
        superset_zeta(&mut a);
        a
    }

    /// Mass on each level `|S| = k`, for `k = 0..=n`.
    pub fn level_mass(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.n() + 1];
        for (m, &c) in self.coeffs.iter().enumerate() {
            out[m.count_ones() as usize] += c * c;
        }
        out
    }
}
