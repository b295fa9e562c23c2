//! Hypercontractivity for functions with small generalised influences:
//! hybrids between the p-biased and uniform cubes, the replacement step,
//! and the 4-norm and q-norm bound checkers.

use serde::Serialize;

use crate::cube::{expectation_with, inverse_in_place, CubeFunction, SpectralForm};
use crate::error::{out_of_range, Error, Result};
use crate::influence::{derivative_spectral, influences_of_spectrum};
use crate::scalar::{le_rel, sigma_of, Scalar};
use crate::subset::Subset;

/// `λ = E[χ_i⁴] = σ^{−2}((1−p)³ + p³)`.
pub fn lambda_of<T: Scalar>(p: T) -> T {
    let q = T::one() - p;
    (q * q * q + p * p * p) / (p * q)
}

/// Biases of the mixed space behind `f_t`: `1/2` on coordinates `1..=t`,
/// `p` on the rest.
pub fn hybrid_biases<T: Scalar>(n: usize, p: T, t: usize) -> Vec<T> {
    (0..n).map(|i| if i < t { T::lit(0.5) } else { p }).collect()
}

/// A table on `{0,1}^n` with a product measure given per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedFunction<T> {
    pub biases: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> MixedFunction<T> {
    /// Evaluates `Σ_S a_S Π_{i∈S} χ_i^{p_i}` pointwise.
    pub fn from_coeffs(coeffs: &[T], biases: Vec<T>) -> Result<Self> {
        if coeffs.len() != 1 << biases.len() {
            return Err(Error::LengthMismatch {
                expected: 1 << biases.len(),
                got: coeffs.len(),
            });
        }
        let mut values = coeffs.to_vec();
        inverse_in_place(&mut values, &biases);
        Ok(Self { biases, values })
    }

    pub fn moment(&self, k: i32) -> T {
        let v: Vec<T> = self.values.iter().map(|v| v.powi(k)).collect();
        expectation_with(&v, &self.biases)
    }

    pub fn norm(&self, r: T) -> T {
        let v: Vec<T> = self.values.iter().map(|v| v.abs().powf(r)).collect();
        expectation_with(&v, &self.biases).powf(r.recip())
    }
}

/// Coefficients scaled by `ρ′^{|S∩[t]|} ρ^{|S∖[t]|}`.
fn mixed_multiplier<T: Scalar>(coeffs: &[T], t: usize, rho_u: T, rho_p: T) -> Vec<T> {
    let head = (1usize << t) - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(m, &c)| {
            c * rho_u.powi((m & head).count_ones() as i32) * rho_p.powi((m & !head).count_ones() as i32)
        })
        .collect()
}

fn check_t(t: usize, n: usize) -> Result<()> {
    if t > n {
        return Err(out_of_range("t", t as f64, format!("0 ≤ t ≤ {n}")));
    }
    Ok(())
}

fn check_unit<T: Scalar>(name: &'static str, rho: T) -> Result<()> {
    if rho >= T::zero() && rho <= T::one() {
        Ok(())
    } else {
        Err(out_of_range(name, rho.as_f64(), "[0, 1]"))
    }
}

/// `f_t`: the coefficients of `spec` read with uniform characters on the
/// first `t` coordinates and p-biased ones on the rest.
pub fn hybrid_eval<T: Scalar>(spec: &SpectralForm<T>, t: usize) -> Result<MixedFunction<T>> {
    check_t(t, spec.n())?;
    MixedFunction::from_coeffs(spec.coeffs(), hybrid_biases(spec.n(), spec.cube().p(), t))
}

/// `T^t_{ρ′,ρ} f_t`.
pub fn mixed_noise<T: Scalar>(spec: &SpectralForm<T>, t: usize, rho_u: T, rho_p: T) -> Result<MixedFunction<T>> {
    check_t(t, spec.n())?;
    check_unit("rho_u", rho_u)?;
    check_unit("rho_p", rho_p)?;
    MixedFunction::from_coeffs(
        &mixed_multiplier(spec.coeffs(), t, rho_u, rho_p),
        hybrid_biases(spec.n(), spec.cube().p(), t),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplacementStep<T> {
    pub t: usize,
    /// `E[(T^{t−1} f_{t−1})⁴]`.
    pub lhs: T,
    /// `E[(T^t f_t)⁴]`.
    pub head: T,
    /// `E[(T^t (D_t f)_t)⁴]`.
    pub tail: T,
    /// `head + 3λρ⁴ tail`.
    pub rhs: T,
    pub slack: T,
}

/// Both sides of the replacement step at `t` with operators `T_{2ρ,ρ}`.
pub fn replacement_step_check<T: Scalar>(spec: &SpectralForm<T>, t: usize, rho: T) -> Result<ReplacementStep<T>> {
    if t == 0 || t > spec.n() {
        return Err(out_of_range("t", t as f64, format!("1 ≤ t ≤ {}", spec.n())));
    }
    let two = T::lit(2.0) * rho;
    check_unit("2·rho", two)?;
    let lhs = mixed_noise(spec, t - 1, two, rho)?.moment(4);
    let head = mixed_noise(spec, t, two, rho)?.moment(4);
    let g = derivative_spectral(spec, Subset::from_coords([t]))?;
    let tail = mixed_noise(&g, t, two, rho)?.moment(4);
    let k = T::lit(3.0) * lambda_of(spec.cube().p()) * rho.powi(4);
    let rhs = head + k * tail;
    Ok(ReplacementStep {
        t,
        lhs,
        head,
        tail,
        rhs,
        slack: rhs - lhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InductionReport<T> {
    pub i: usize,
    /// `‖T^i f_i‖₄⁴`.
    pub lhs: T,
    /// The bound unrolled one replacement step at a time.
    pub recursive: T,
    /// `Σ_{S ⊂ [n]∖[i]} (3λρ⁴)^{|S|} ‖T^n (D_S f)_n‖₄⁴`.
    pub closed: T,
}

/// Compares `‖T^i f_i‖₄⁴` with the sum over `S ⊂ [n]∖[i]`, computed both by
/// recursion on the replacement step and directly. `O(n·4^n)`.
pub fn induction_check<T: Scalar>(spec: &SpectralForm<T>, i: usize, rho: T) -> Result<InductionReport<T>> {
    let n = spec.n();
    check_t(i, n)?;
    let two = T::lit(2.0) * rho;
    check_unit("2·rho", two)?;
    let k = T::lit(3.0) * lambda_of(spec.cube().p()) * rho.powi(4);
    let end = |s: &SpectralForm<T>| -> Result<T> { Ok(mixed_noise(s, n, two, rho)?.moment(4)) };

    fn rec<T: Scalar>(
        s: &SpectralForm<T>,
        i: usize,
        k: T,
        end: &dyn Fn(&SpectralForm<T>) -> Result<T>,
    ) -> Result<T> {
        if i == s.n() {
            return end(s);
        }
        let d = derivative_spectral(s, Subset::from_coords([i + 1]))?;
        Ok(rec(s, i + 1, k, end)? + k * rec(&d, i + 1, k, end)?)
    }

    let recursive = rec(spec, i, k, &end)?;
    let head = (1usize << i) - 1;
    let mut closed = T::zero();
    for m in (0..1usize << n).filter(|m| m & head == 0) {
        let d = derivative_spectral(spec, Subset(m))?;
        closed += k.powi(m.count_ones() as i32) * end(&d)?;
    }
    Ok(InductionReport {
        i,
        lhs: mixed_noise(spec, i, two, rho)?.moment(4),
        recursive,
        closed,
    })
}

/// `lhs ≤ middle ≤ rhs` with the slack of the outer inequality.
#[derive(Clone, Debug, Serialize)]
pub struct ChainBound<T> {
    pub lhs: T,
    pub middle: T,
    pub rhs: T,
    pub margin: T,
    pub holds: bool,
}

/// `‖T_ρ f‖₄⁴ ≤ Σ_S (3λρ⁴)^{|S|} ‖D_S f‖₂⁴ ≤ Σ_S (3σ²ρ⁴)^{|S|} I_S(f)²`,
/// for `ρ ≤ 1/√12`.
pub fn hypref_bound_check<T: Scalar>(f: &CubeFunction<T>, rho: T) -> Result<ChainBound<T>> {
    let cap = T::one() / T::lit(12.0).sqrt();
    if !(rho >= T::zero() && rho <= cap) {
        return Err(out_of_range("rho", rho.as_f64(), "0 ≤ rho ≤ 1/√12"));
    }
    let spec = f.forward();
    let p = spec.cube().p();
    let s2 = spec.cube().sigma().powi(2);
    let lhs = spec.scale_levels(|k| rho.powi(k as i32)).inverse().moment(4);
    let dmass = spec.superset_mass();
    let infl = influences_of_spectrum(&spec);
    let k_mid = T::lit(3.0) * lambda_of(p) * rho.powi(4);
    let k_out = T::lit(3.0) * s2 * rho.powi(4);
    let mut middle = T::zero();
    let mut rhs = T::zero();
    for m in 0..dmass.len() {
        let k = m.count_ones() as i32;
        middle += k_mid.powi(k) * dmass[m] * dmass[m];
        rhs += k_out.powi(k) * infl[m] * infl[m];
    }
    let tol = T::check_tol();
    Ok(ChainBound {
        lhs,
        middle,
        rhs,
        margin: rhs - lhs,
        holds: le_rel(lhs, middle, tol) && le_rel(middle, rhs, tol),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperReport<T> {
    /// `‖T_{1/5} f‖₄`.
    pub lhs13: T,
    /// `β = max_S I_S(f)/E[f²]`.
    pub beta: T,
    pub rhs13: T,
    /// `‖T_{1/√24} f‖₄`.
    pub lhs35: T,
    /// `β′ = max_S λ^{|S|}‖D_S f‖₂²/E[f²]`; never larger than `β`.
    pub beta_lambda: T,
    pub rhs35: T,
    pub holds13: bool,
    pub holds35: bool,
}

impl<T: Scalar> HyperReport<T> {
    pub fn margin13(&self) -> T {
        self.rhs13 - self.lhs13
    }

    pub fn margin35(&self) -> T {
        self.rhs35 - self.lhs35
    }
}

/// `‖T_{1/5} f‖₄ ≤ β^{1/4}‖f‖₂` and `‖T_{1/√24} f‖₄ ≤ β′^{1/4}‖f‖₂`, with
/// both constants taken as exact maxima over all `S`.
pub fn hyper_check<T: Scalar>(f: &CubeFunction<T>) -> Result<HyperReport<T>> {
    let e2 = f.energy();
    if e2 <= T::zero() {
        return Err(Error::ZeroFunction);
    }
    let spec = f.forward();
    let lam = lambda_of(spec.cube().p());
    let infl = influences_of_spectrum(&spec);
    let dmass = spec.superset_mass();
    let beta = infl.iter().copied().fold(T::zero(), T::max) / e2;
    let beta_lambda = dmass
        .iter()
        .enumerate()
        .map(|(m, &d)| lam.powi(m.count_ones() as i32) * d)
        .fold(T::zero(), T::max)
        / e2;
    let norm2 = e2.sqrt();
    let quart = T::lit(0.25);
    let fourth = |rho: T| spec.scale_levels(|k| rho.powi(k as i32)).inverse().moment(4).powf(quart);
    let lhs13 = fourth(T::lit(0.2));
    let lhs35 = fourth(T::one() / T::lit(24.0).sqrt());
    let rhs13 = beta.powf(quart) * norm2;
    let rhs35 = beta_lambda.powf(quart) * norm2;
    let tol = T::check_tol();
    Ok(HyperReport {
        lhs13,
        beta,
        rhs13,
        lhs35,
        beta_lambda,
        rhs35,
        holds13: le_rel(lhs13, rhs13, tol),
        holds35: le_rel(lhs35, rhs35, tol),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub margin: T,
    pub holds: bool,
}

impl<T: Scalar> BoundCheck<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        Self {
            lhs,
            rhs,
            margin: rhs - lhs,
            holds: le_rel(lhs, rhs, T::check_tol()),
        }
    }
}

fn degree_tol<T: Scalar>(spec: &SpectralForm<T>) -> T {
    let scale = spec.coeffs().iter().fold(T::one(), |m, c| m.max(c.abs()));
    T::roundoff() * scale
}

/// `max_{|S| ≤ r} I_S(f)`, including `S = ∅`.
fn witnessed_low<T: Scalar>(spec: &SpectralForm<T>, r: usize) -> T {
    influences_of_spectrum(spec)
        .iter()
        .enumerate()
        .filter(|(m, _)| m.count_ones() as usize <= r)
        .map(|(_, &v)| v)
        .fold(T::zero(), T::max)
}

fn practice_inputs<T: Scalar>(f: &CubeFunction<T>, r: usize, delta: Option<T>) -> Result<(SpectralForm<T>, T)> {
    let spec = f.forward();
    let deg = spec.degree(degree_tol(&spec));
    if deg > r {
        return Err(Error::DegreeViolation { degree: deg, cap: r });
    }
    let seen = witnessed_low(&spec, r);
    let delta = delta.unwrap_or(seen);
    if !le_rel(seen, delta, T::roundoff()) {
        return Err(Error::DeltaTooSmall {
            delta: delta.as_f64(),
            witnessed: seen.as_f64(),
        });
    }
    Ok((spec, delta))
}

/// `‖f‖₄ ≤ 5^{3r/4} δ^{1/4} ‖f‖₂^{1/2}` for `f` of degree `≤ r` with
/// `I_S(f) ≤ δ` whenever `|S| ≤ r`. `delta = None` uses the witnessed maximum.
pub fn practice_bound_check<T: Scalar>(f: &CubeFunction<T>, r: usize, delta: Option<T>) -> Result<BoundCheck<T>> {
    let (_, delta) = practice_inputs(f, r, delta)?;
    let lhs = f.moment(4).powf(T::lit(0.25));
    let rhs = T::lit(5.0).powf(T::lit(0.75) * T::of_usize(r)) * delta.powf(T::lit(0.25)) * f.energy().sqrt().sqrt();
    Ok(BoundCheck::new(lhs, rhs))
}

/// `‖f‖₄ ≤ √3^r ‖f‖₂` for `f` of degree `≤ r` on the uniform cube.
pub fn bonami_check<T: Scalar>(f: &CubeFunction<T>, r: usize) -> Result<BoundCheck<T>> {
    let spec = f.forward();
    let deg = spec.degree(degree_tol(&spec));
    if deg > r {
        return Err(Error::DegreeViolation { degree: deg, cap: r });
    }
    let lhs = f.moment(4).powf(T::lit(0.25));
    let rhs = T::lit(3.0).sqrt().powi(r as i32) * f.energy().sqrt();
    Ok(BoundCheck::new(lhs, rhs))
}

/// Per-coordinate constants `σ_i` with `E|Z_i|^q ≤ σ_i^{2−q}`. The exact
/// checkers realise `Z_i` as the p-biased character with `σ(p_i) = σ_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEnvelope<T> {
    pub sigmas: Vec<T>,
    biases: Vec<T>,
}

impl<T: Scalar> MomentEnvelope<T> {
    /// Solves `p_i(1−p_i) = σ_i²` for `p_i ≤ 1/2`.
    pub fn new(sigmas: Vec<T>) -> Result<Self> {
        for &s in &sigmas {
            if !(s > T::zero() && s <= T::lit(0.5)) {
                return Err(out_of_range("sigma_i", s.as_f64(), "(0, 1/2]"));
            }
        }
        let four = T::lit(4.0);
        let biases = sigmas
            .iter()
            .map(|&s| (T::one() - (T::one() - four * s * s).max(T::zero()).sqrt()) / T::lit(2.0))
            .collect();
        Ok(Self { sigmas, biases })
    }

    pub fn from_biases(biases: &[T]) -> Result<Self> {
        for &p in biases {
            if !(p > T::zero() && p <= T::lit(0.5)) {
                return Err(Error::InvalidBias(p.as_f64(), "(0, 1/2]"));
            }
        }
        Ok(Self {
            sigmas: biases.iter().map(|&p| sigma_of(p)).collect(),
            biases: biases.to_vec(),
        })
    }

    pub fn uniform_bias(n: usize, p: T) -> Result<Self> {
        Self::from_biases(&vec![p; n])
    }

    pub fn biases(&self) -> Vec<T> {
        self.biases.clone()
    }

    /// `σ_S = Π_{i∈S} σ_i`.
    pub fn sigma_s(&self, s: Subset) -> T {
        s.coords().map(|c| self.sigmas[c - 1]).product()
    }
}

fn check_even_q(q: u32) -> Result<()> {
    if q < 4 || q % 2 == 1 {
        return Err(out_of_range("q", q as f64, "an even integer ≥ 4"));
    }
    Ok(())
}

/// `(2q)^{−1.5}`.
pub fn qnorm_rho_cap<T: Scalar>(q: u32) -> T {
    T::lit(2.0 * q as f64).powf(T::lit(-1.5))
}

#[derive(Clone, Debug, Serialize)]
pub struct QNormReport<T> {
    pub q: u32,
    pub rho: T,
    /// `‖T_ρ f‖_q^q`.
    pub lhs: T,
    /// `Σ_S σ_S^{2−q} ‖D_S f‖₂^q`.
    pub rhs: T,
    pub margin: T,
    pub holds: bool,
    /// `β = max_S I_S(f)/‖f‖₂²` with `I_S = ‖D_S f‖₂²/σ_S²`.
    pub beta: T,
    /// `‖T_ρ f‖_q` against `β^{(q−2)/(2q)} ‖f‖₂`.
    pub norm_lhs: T,
    pub norm_rhs: T,
    pub norm_holds: bool,
}

/// The q-norm bound for `f = Σ_S a_S Π_{i∈S} Z_i`, where `coeffs[S] = a_S`
/// and `Z_i` are characters with the envelope's biases. `q` must be even so
/// that both sides are exact polynomial moments.
pub fn qnorm_bound_check<T: Scalar>(
    coeffs: &[T],
    q: u32,
    rho: T,
    envelope: &MomentEnvelope<T>,
) -> Result<QNormReport<T>> {
    check_even_q(q)?;
    let cap = qnorm_rho_cap::<T>(q);
    if !(rho >= T::zero() && rho <= cap) {
        return Err(out_of_range("rho", rho.as_f64(), "0 ≤ rho ≤ (2q)^{-1.5}"));
    }
    let biases = envelope.biases();
    let n = biases.len();
    if coeffs.len() != 1 << n {
        return Err(Error::LengthMismatch {
            expected: 1 << n,
            got: coeffs.len(),
        });
    }
    let noisy: Vec<T> = coeffs
        .iter()
        .enumerate()
        .map(|(m, &c)| c * rho.powi(m.count_ones() as i32))
        .collect();
    let tf = MixedFunction::from_coeffs(&noisy, biases)?;
    let lhs = tf.moment(q as i32);
    let mut dmass: Vec<T> = coeffs.iter().map(|&c| c * c).collect();
    crate::subset::superset_zeta(&mut dmass);
    let qq = T::of_usize(q as usize);
    let half_q = qq / T::lit(2.0);
    let mut rhs = T::zero();
    let mut beta = T::zero();
    for (m, &d) in dmass.iter().enumerate() {
        let ss = envelope.sigma_s(Subset(m));
        rhs += ss.powf(T::lit(2.0) - qq) * d.powf(half_q);
        beta = beta.max(d / (ss * ss));
    }
    let e2 = dmass[0];
    let norm_lhs = lhs.powf(qq.recip());
    let (norm_rhs, beta) = if e2 > T::zero() {
        let b = beta / e2;
        (b.powf((qq - T::lit(2.0)) / (T::lit(2.0) * qq)) * e2.sqrt(), b)
    } else {
        (T::zero(), T::zero())
    };
    let tol = T::check_tol();
    Ok(QNormReport {
        q,
        rho,
        lhs,
        rhs,
        margin: rhs - lhs,
        holds: le_rel(lhs, rhs, tol),
        beta,
        norm_lhs,
        norm_rhs,
        norm_holds: le_rel(norm_lhs, norm_rhs, tol),
    })
}

/// `qnorm_bound_check` for a function on a biased cube, with `Z_i = χ_i`.
pub fn qnorm_cube_check<T: Scalar>(f: &CubeFunction<T>, q: u32, rho: T) -> Result<QNormReport<T>> {
    let env = MomentEnvelope::uniform_bias(f.n(), f.cube().p())?;
    qnorm_bound_check(f.forward().coeffs(), q, rho, &env)
}

/// `‖f‖_q ≤ (2q)^{1.5r} δ^{(q−2)/(2q)} ‖f‖₂^{2/q}` for `I_S(f) ≤ δ`, `|S| ≤ r`.
pub fn practice_q_check<T: Scalar>(f: &CubeFunction<T>, q: u32, r: usize, delta: Option<T>) -> Result<BoundCheck<T>> {
    check_even_q(q)?;
    let (_, delta) = practice_inputs(f, r, delta)?;
    let qq = T::of_usize(q as usize);
    let lhs = f.moment(q as i32).powf(qq.recip());
    let rhs = (T::lit(2.0) * qq).powf(T::lit(1.5) * T::of_usize(r))
        * delta.powf((qq - T::lit(2.0)) / (T::lit(2.0) * qq))
        * f.energy().sqrt().powf(T::lit(2.0) / qq);
    Ok(BoundCheck::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BiasedCube;
    use crate::generators::{character, random_function, Generator};
    use crate::noise::apply_noise;

    fn cube(n: usize, p: f64) -> BiasedCube<f64> {
        BiasedCube::new(n, p).unwrap()
    }

    fn gen(g: &str, n: usize, p: f64) -> CubeFunction<f64> {
        g.parse::<Generator>().unwrap().generate(cube(n, p)).unwrap()
    }

    #[test]
    fn lambda_values() {
        assert!((lambda_of(0.5f64) - 1.0).abs() < 1e-15);
        assert!((lambda_of(0.25f64) - 7.0 / 3.0).abs() < 1e-14);
        for p in [0.01f64, 0.1, 0.3, 0.5] {
            assert!(lambda_of(p) <= 1.0 / (p * (1.0 - p)) + 1e-12);
            let chi = character(cube(1, p), Subset(1)).unwrap();
            assert!((chi.moment(4) - lambda_of(p)).abs() < 1e-12 * lambda_of(p));
        }
    }

    #[test]
    fn hybrid_boundaries() {
        let f = random_function(cube(5, 0.2), 8);
        let spec = f.forward();
        let t0 = mixed_noise(&spec, 0, 0.7, 0.3).unwrap();
        let direct = apply_noise(&f, 0.3).unwrap();
        let diff = t0.values.iter().zip(direct.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-12);
        let tn = mixed_noise(&spec, 5, 0.7, 0.3).unwrap();
        let uni = SpectralForm::new(cube(5, 0.5), spec.coeffs().to_vec()).unwrap();
        let direct = apply_noise(&uni.inverse(), 0.7).unwrap();
        let diff = tn.values.iter().zip(direct.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-12);
        let e = f.energy();
        for t in 0..=5 {
            assert!((hybrid_eval(&spec, t).unwrap().moment(2) - e).abs() < 1e-12);
        }
        assert!(hybrid_eval(&spec, 6).is_err());
    }

    #[test]
    fn replacement_examples() {
        let spec = random_function(cube(6, 0.2), 1).forward();
        for t in 1..=6 {
            assert!(replacement_step_check(&spec, t, 0.2).unwrap().slack >= -1e-12);
        }
        // Coordinate 3 absent: both sides coincide.
        let g = SpectralForm::new(*spec.cube(), spec.coeffs().iter().enumerate().map(|(m, &c)| if m & 4 != 0 { 0.0 } else { c }).collect()).unwrap();
        let r = replacement_step_check(&g, 3, 0.2).unwrap();
        assert!(r.slack.abs() < 1e-14 && r.tail.abs() < 1e-14);
        // One coordinate, f = a·χ₁: slack = 16ρ⁴a⁴ + 2λρ⁴a⁴.
        let (a, rho, p) = (1.3f64, 0.2f64, 0.1f64);
        let one = SpectralForm::from_terms(cube(1, p), &[(Subset(1), a)]).unwrap();
        let r = replacement_step_check(&one, 1, rho).unwrap();
        let want = (16.0 + 2.0 * lambda_of(p)) * rho.powi(4) * a.powi(4);
        assert!((r.slack - want).abs() < 1e-14);
    }

    #[test]
    fn induction_sums_agree() {
        let spec = random_function(cube(5, 0.15), 2).forward();
        for i in [0, 2, 5] {
            let r = induction_check(&spec, i, 0.25).unwrap();
            assert!((r.recursive - r.closed).abs() <= 1e-9 * r.closed.abs().max(1.0));
            assert!(r.lhs <= r.closed + 1e-12);
        }
    }

    #[test]
    fn hypref_examples() {
        let c = gen("constant:c=1.7", 3, 0.2);
        let r = hypref_bound_check(&c, 0.25).unwrap();
        assert!((r.lhs - 1.7f64.powi(4)).abs() < 1e-12 && (r.rhs - r.lhs).abs() < 1e-12);
        let r = hypref_bound_check(&gen("dictator", 3, 0.1), 0.25).unwrap();
        assert!(r.holds && r.margin > 0.0);
        assert!(hypref_bound_check(&c, 0.3).is_err());
    }

    #[test]
    fn hyper_examples() {
        let r = hyper_check(&gen("constant:c=2", 3, 0.3)).unwrap();
        assert!((r.beta - 1.0).abs() < 1e-12 && (r.lhs13 - r.rhs13).abs() < 1e-12);
        let chi = character(cube(2, 0.25), Subset(1)).unwrap();
        let r = hyper_check(&chi).unwrap();
        assert!((r.beta - 16.0 / 3.0).abs() < 1e-12);
        assert!((r.lhs13 - (7.0f64 / 3.0).powf(0.25) / 5.0).abs() < 1e-12);
        assert!(r.holds13 && r.holds35 && r.beta_lambda <= r.beta);
        let at = gen("antitribes:s=2,w=2", 4, 0.3).centered();
        let r = hyper_check(&at).unwrap();
        assert!(r.holds13 && r.holds35);
        assert!(hyper_check(&gen("constant:c=0", 2, 0.3)).is_err());
    }

    #[test]
    fn practice_examples() {
        let c = gen("constant:c=3", 3, 0.3);
        let r = practice_bound_check(&c, 0, Some(9.0)).unwrap();
        assert!(r.holds && r.margin.abs() < 1e-12);
        let t = SpectralForm::new(cube(6, 0.3), gen("tribes:s=2,w=3", 6, 0.3).forward().truncate(2).coeffs().to_vec()).unwrap().inverse();
        assert!(practice_bound_check(&t, 2, None).unwrap().holds);
        assert!(matches!(practice_bound_check(&gen("and", 3, 0.3), 1, None), Err(Error::DegreeViolation { .. })));
        assert!(matches!(practice_bound_check(&c, 0, Some(1.0)), Err(Error::DeltaTooSmall { .. })));
        // f = σ²χ₁₂: ‖f‖₄ = σ²λ^{1/2}, δ = max(I_∅, I_1, I_12) = σ⁴·max(1, σ⁻², σ⁻⁴) = 1.
        let p = 0.25f64;
        let s2 = p * (1.0 - p);
        let top = SpectralForm::from_terms(cube(2, p), &[(Subset(3), s2)]).unwrap().inverse();
        let r = practice_bound_check(&top, 2, None).unwrap();
        assert!((r.lhs - s2 * lambda_of(p).sqrt()).abs() < 1e-12);
        assert!((r.rhs - 5f64.powf(1.5) * s2.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qnorm_examples() {
        let f = random_function(cube(6, 0.2), 5);
        let rho = qnorm_rho_cap::<f64>(4);
        let a = qnorm_cube_check(&f, 4, rho).unwrap();
        let b = hypref_bound_check(&f, rho).unwrap();
        assert!(a.holds && b.holds);
        assert!((a.lhs - b.lhs).abs() < 1e-12);
        let c = gen("constant:c=1.5", 3, 0.2);
        let r = qnorm_cube_check(&c, 6, 0.01).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12);
        assert!(qnorm_cube_check(&f, 5, 0.01).is_err());
        assert!(qnorm_cube_check(&f, 6, 0.1).is_err());
    }

    #[test]
    fn envelope_biases_invert_sigma() {
        let env = MomentEnvelope::new(vec![0.3f64, 0.4, 0.5]).unwrap();
        for (p, s) in env.biases().iter().zip(&env.sigmas) {
            assert!((sigma_of(*p) - s).abs() < 1e-7);
        }
        assert!(MomentEnvelope::new(vec![0.6f64]).is_err());
    }

    #[test]
    fn bonami_on_uniform_cube() {
        for seed in 0..5 {
            let g = crate::generators::random_low_degree(cube(8, 0.5), 2, seed);
            assert!(bonami_check(&g, 2).unwrap().holds);
        }
    }
}
