//! Named Boolean functions and seeded random functions.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cube::{BiasedCube, CubeFunction, SpectralForm};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subset::Subset;

/// A named function family with its parameters. Tribes occupy consecutive
/// blocks of `w` coordinates starting at coordinate 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Dictator { i: usize },
    /// AND of the first `k` coordinates (`k = None` means all).
    And { k: Option<usize> },
    Or { k: Option<usize> },
    /// `x₁ ⊕ … ⊕ x_k` with values in `{0,1}`.
    Parity { k: Option<usize> },
    /// `(−1)^{x₁+…+x_k}`.
    SignedParity { k: Option<usize> },
    /// `1[|x| > n/2]`.
    Majority,
    /// OR of `s` ANDs of width `w`.
    Tribes { s: usize, w: usize },
    /// AND of `s` ORs of width `w`.
    Antitribes { s: usize, w: usize },
    /// Anti-tribes times the AND of the next `t` coordinates.
    AntitribesPinned { s: usize, w: usize, t: usize },
    /// `1[|x| ≥ t]` with `t` chosen so that `μ_p` is closest to `alpha`.
    HammingBall { alpha: f64 },
    Constant { c: f64 },
}

impl Generator {
    /// Number of coordinates the family actually reads.
    pub fn support(&self, n: usize) -> usize {
        match *self {
            Generator::Dictator { i } => i,
            Generator::And { k } | Generator::Or { k } => k.unwrap_or(n),
            Generator::Parity { k } | Generator::SignedParity { k } => k.unwrap_or(n),
            Generator::Tribes { s, w } | Generator::Antitribes { s, w } => s * w,
            Generator::AntitribesPinned { s, w, t } => s * w + t,
            _ => n,
        }
    }

    pub fn is_monotone(&self) -> bool {
        !matches!(
            self,
            Generator::Parity { .. } | Generator::SignedParity { .. } | Generator::Constant { .. }
        )
    }

    pub fn generate<T: Scalar>(&self, cube: BiasedCube<T>) -> Result<CubeFunction<T>> {
        let n = cube.n();
        let need = self.support(n);
        if need > n {
            return Err(Error::DimensionCap { n: need, cap: n });
        }
        let low = |k: usize| (1usize << k) - 1;
        Ok(match *self {
            Generator::Dictator { i } => {
                if i == 0 {
                    return Err(Error::CoordinateOutOfRange { coord: 0, n });
                }
                CubeFunction::indicator(cube, |x| x >> (i - 1) & 1 == 1)
            }
            Generator::And { .. } => {
                let m = low(need);
                CubeFunction::indicator(cube, |x| x & m == m)
            }
            Generator::Or { .. } => {
                let m = low(need);
                CubeFunction::indicator(cube, |x| x & m != 0)
            }
            Generator::Parity { .. } => {
                let m = low(need);
                CubeFunction::indicator(cube, |x| (x & m).count_ones() % 2 == 1)
            }
            Generator::SignedParity { .. } => {
                let m = low(need);
                CubeFunction::from_fn(cube, |x| {
                    if (x & m).count_ones() % 2 == 1 {
                        -T::one()
                    } else {
                        T::one()
                    }
                })
            }
            Generator::Majority => CubeFunction::indicator(cube, |x| 2 * x.count_ones() as usize > n),
            Generator::Tribes { s, w } => {
                CubeFunction::indicator(cube, |x| (0..s).any(|j| block(x, j, w) == low(w)))
            }
            Generator::Antitribes { s, w } => {
                CubeFunction::indicator(cube, |x| (0..s).all(|j| block(x, j, w) != 0))
            }
            Generator::AntitribesPinned { s, w, t } => {
                let pin = low(t) << (s * w);
                CubeFunction::indicator(cube, |x| {
                    x & pin == pin && (0..s).all(|j| block(x, j, w) != 0)
                })
            }
            Generator::HammingBall { alpha } => {
                let t = hamming_threshold(n, cube.p().as_f64(), alpha);
                CubeFunction::indicator(cube, |x| x.count_ones() as usize >= t)
            }
            Generator::Constant { c } => CubeFunction::constant(cube, T::lit(c)),
        })
    }
}

fn block(x: usize, j: usize, w: usize) -> usize {
    (x >> (j * w)) & ((1usize << w) - 1)
}

/// `μ_p(|x| ≥ t)` on `n` coordinates.
pub fn hamming_ball_measure(n: usize, p: f64, t: usize) -> f64 {
    (t..=n).map(|k| binomial(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Threshold `t ∈ 0..=n+1` minimising `|μ_p(|x| ≥ t) − alpha|`; ties go to
/// the smaller `t`.
pub fn hamming_threshold(n: usize, p: f64, alpha: f64) -> usize {
    let mut best = (0, f64::INFINITY);
    for t in 0..=n + 1 {
        let d = (hamming_ball_measure(n, p, t) - alpha).abs();
        if d < best.1 {
            best = (t, d);
        }
    }
    best.0
}

/// `μ_p` of the anti-tribes function: `(1 − (1−p)^w)^s`.
pub fn antitribes_measure(s: usize, w: usize, p: f64) -> f64 {
    (1.0 - (1.0 - p).powi(w as i32)).powi(s as i32)
}

/// `μ_p` of the tribes function: `1 − (1 − p^w)^s`.
pub fn tribes_measure(s: usize, w: usize, p: f64) -> f64 {
    1.0 - (1.0 - p.powi(w as i32)).powi(s as i32)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |name: &str, k: Option<usize>| match k {
            Some(k) => format!("{name}:k={k}"),
            None => name.to_string(),
        };
        match *self {
            Generator::Dictator { i } => write!(f, "dictator:i={i}"),
            Generator::And { k } => f.write_str(&opt("and", k)),
            Generator::Or { k } => f.write_str(&opt("or", k)),
            Generator::Parity { k } => f.write_str(&opt("parity", k)),
            Generator::SignedParity { k } => f.write_str(&opt("signed_parity", k)),
            Generator::Majority => f.write_str("majority"),
            Generator::Tribes { s, w } => write!(f, "tribes:s={s},w={w}"),
            Generator::Antitribes { s, w } => write!(f, "antitribes:s={s},w={w}"),
            Generator::AntitribesPinned { s, w, t } => {
                write!(f, "antitribes_pinned:s={s},w={w},t={t}")
            }
            Generator::HammingBall { alpha } => write!(f, "hamming_ball:alpha={alpha}"),
            Generator::Constant { c } => write!(f, "constant:c={c}"),
        }
    }
}

/// Parses `kind[:key=value,...]`, e.g. `antitribes:s=2,w=3`.
impl FromStr for Generator {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params = Vec::new();
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            params.push((k.trim(), v.trim()));
        }
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let int = |key: &str| -> Result<usize> {
            get(key)
                .ok_or_else(|| Error::Parse(format!("`{kind}` needs `{key}`")))?
                .parse()
                .map_err(|_| Error::Parse(format!("`{key}` must be a non-negative integer")))
        };
        let opt_int = |key: &str| -> Result<Option<usize>> {
            get(key).map(|_| int(key)).transpose()
        };
        let real = |key: &str| -> Result<f64> {
            get(key)
                .ok_or_else(|| Error::Parse(format!("`{kind}` needs `{key}`")))?
                .parse()
                .map_err(|_| Error::Parse(format!("`{key}` must be a number")))
        };
        let known: &[&str] = match kind.trim() {
            "dictator" => &["i"],
            "and" | "or" | "parity" | "signed_parity" => &["k"],
            "majority" => &[],
            "tribes" | "antitribes" => &["s", "w"],
            "antitribes_pinned" => &["s", "w", "t"],
            "hamming_ball" => &["alpha"],
            "constant" => &["c"],
            other => return Err(Error::Parse(format!("unknown generator `{other}`"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !known.contains(k)) {
            return Err(Error::Parse(format!("`{kind}` has no parameter `{k}`")));
        }
        Ok(match kind.trim() {
            "dictator" => Generator::Dictator {
                i: opt_int("i")?.unwrap_or(1),
            },
            "and" => Generator::And { k: opt_int("k")? },
            "or" => Generator::Or { k: opt_int("k")? },
            "parity" => Generator::Parity { k: opt_int("k")? },
            "signed_parity" => Generator::SignedParity { k: opt_int("k")? },
            "majority" => Generator::Majority,
            "tribes" => Generator::Tribes {
                s: int("s")?,
                w: int("w")?,
            },
            "antitribes" => Generator::Antitribes {
                s: int("s")?,
                w: int("w")?,
            },
            "antitribes_pinned" => Generator::AntitribesPinned {
                s: int("s")?,
                w: int("w")?,
                t: int("t")?,
            },
            "hamming_ball" => Generator::HammingBall { alpha: real("alpha")? },
            _ => Generator::Constant {
                c: get("c").map(|_| real("c")).transpose()?.unwrap_or(1.0),
            },
        })
    }
}

/// The generator zoo used by sweeps: every family that fits in `n`.
pub fn zoo(n: usize) -> Vec<Generator> {
    let mut out = vec![
        Generator::Dictator { i: 1 },
        Generator::And { k: Some(n.min(2)) },
        Generator::And { k: None },
        Generator::Or { k: None },
        Generator::Parity { k: None },
        Generator::Majority,
        Generator::HammingBall { alpha: 0.5 },
    ];
    for (s, w) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        if s * w <= n {
            out.push(Generator::Tribes { s, w });
            out.push(Generator::Antitribes { s, w });
        }
        if s * w + 2 <= n {
            out.push(Generator::AntitribesPinned { s, w, t: 2 });
        }
    }
    out.retain(|g| g.support(n) <= n && n > 0);
    out
}

/// `χ_S` as a table.
pub fn character<T: Scalar>(cube: BiasedCube<T>, s: Subset) -> Result<CubeFunction<T>> {
    Ok(SpectralForm::from_terms(cube, &[(s, T::one())])?.inverse())
}

/// Values i.i.d. uniform in `[−1, 1]`.
pub fn random_function<T: Scalar>(cube: BiasedCube<T>, seed: u64) -> CubeFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CubeFunction::from_fn(cube, |_| T::lit(rng.random_range(-1.0..=1.0)))
}

/// Boolean function whose points are 1 independently with probability `density`.
pub fn random_boolean<T: Scalar>(cube: BiasedCube<T>, density: f64, seed: u64) -> CubeFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CubeFunction::indicator(cube, |_| rng.random_bool(density.clamp(0.0, 1.0)))
}

/// Random monotone Boolean function: the up-closure of a few random points.
pub fn random_monotone<T: Scalar>(cube: BiasedCube<T>, generators: usize, seed: u64) -> CubeFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = cube.size();
    let mins: Vec<usize> = (0..generators).map(|_| rng.random_range(0..size)).collect();
    CubeFunction::indicator(cube, |x| mins.iter().any(|&m| x & m == m))
}

/// Random polynomial of degree at most `r`: coefficients uniform in `[−1,1]`
/// on every `|S| ≤ r`.
pub fn random_low_degree<T: Scalar>(cube: BiasedCube<T>, r: usize, seed: u64) -> CubeFunction<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..cube.size())
        .map(|m: usize| {
            let c: f64 = rng.random_range(-1.0..=1.0);
            if m.count_ones() as usize <= r {
                T::lit(c)
            } else {
                T::zero()
            }
        })
        .collect();
    SpectralForm::new(cube, coeffs)
        .expect("length matches cube")
        .inverse()
}
