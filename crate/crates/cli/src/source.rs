use pcube::generators::zoo;
use pcube::io::read_truth_table;
use pcube::{BiasedCube, Function, Generator, DEFAULT_N_CAP};

use crate::args::SourceArgs;
use crate::CliError;

pub const NCAP_VAR: &str = "PCUBE_NCAP";

/// Dimension cap, overridable through `PCUBE_NCAP`.
pub fn n_cap() -> Result<usize, CliError> {
    match std::env::var(NCAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{NCAP_VAR}={v:?} is not a dimension"))),
        Err(_) => Ok(DEFAULT_N_CAP),
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub f: Function,
}

/// How the bias list is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bias {
    /// Biases in `(0, 1/2]`, the cube the checkers are stated on.
    Standard,
    /// Any bias in `(0, 1)`.
    General,
}

fn make_cube(n: usize, p: f64, bias: Bias, cap: usize) -> Result<BiasedCube<f64>, CliError> {
    Ok(match bias {
        Bias::Standard => BiasedCube::with_cap(n, p, cap)?,
        Bias::General => BiasedCube::general_with_cap(n, p, cap)?,
    })
}

/// Expands `zoo:n=N`.
fn parse_sweep(spec: &str) -> Result<(Vec<Generator>, usize), CliError> {
    let bad = || CliError::Config(format!("bad sweep {spec:?}; expected zoo:n=N"));
    let n = spec
        .strip_prefix("zoo:n=")
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    Ok((zoo(n), n))
}

/// One instance per (function, bias), in command-line order.
pub fn load(src: &SourceArgs, bias: Bias) -> Result<Vec<Instance>, CliError> {
    let cap = n_cap()?;
    let sources = [!src.fns.is_empty(), src.sweep.is_some(), src.table.is_some()];
    match sources.iter().filter(|&&b| b).count() {
        0 => return Err(CliError::Config("a function source is required: --fn, --sweep or --table".into())),
        1 => {}
        _ => return Err(CliError::Config("give only one of --fn, --sweep or --table".into())),
    }
    if let Some(path) = &src.table {
        let base: Function = read_truth_table(path, cap)?;
        let name = path.display().to_string();
        if src.p.is_empty() {
            make_cube(base.n(), base.cube().p(), bias, cap)?;
            return Ok(vec![Instance {
                name: format!("{name}@p={}", base.cube().p()),
                f: base,
            }]);
        }
        return src
            .p
            .iter()
            .map(|&p| {
                make_cube(base.n(), p, bias, cap)?;
                Ok(Instance {
                    name: format!("{name}@p={p}"),
                    f: base.rebias(p)?,
                })
            })
            .collect();
    }
    let (gens, fixed_n) = match &src.sweep {
        Some(spec) => {
            let (gens, n) = parse_sweep(spec)?;
            (gens, Some(n))
        }
        None => (
            src.fns.iter().map(|s| s.parse()).collect::<pcube::Result<Vec<Generator>>>()?,
            src.n,
        ),
    };
    let ps = if src.p.is_empty() { vec![0.5] } else { src.p.clone() };
    let mut out = Vec::new();
    for g in &gens {
        let n = match fixed_n {
            Some(n) => n,
            None => match g.support(0) {
                0 if !matches!(g, Generator::Constant { .. }) => {
                    return Err(CliError::Config(format!("{g} needs --n")));
                }
                k => k,
            },
        };
        for &p in &ps {
            let f = g.generate(make_cube(n, p, bias, cap)?)?;
            out.push(Instance {
                name: format!("{g}@n={n},p={p}"),
                f,
            });
        }
    }
    Ok(out)
}
