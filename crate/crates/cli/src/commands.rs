use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use pcube::generators::zoo;
use pcube::hyper::{
    bonami_check, hyper_check, hypref_bound_check, practice_bound_check, qnorm_cube_check, qnorm_rho_cap,
    replacement_step_check,
};
use pcube::influence::{beta_small_check, equivalence_suite, total_influence, GeneralizedInfluenceTable};
use pcube::invariance::{invariance_bound_check, Ensemble, MultilinearPoly, TestFunction};
use pcube::noise::{directed_threshold, noise_sensitivity_check, noise_stability};
use pcube::product::{
    es_decompose, es_hyper_check, es_rho_cap, holder_term_check, random_product_function, random_space,
    read_product, single_factor_moment_check, ProductFunction,
};
use pcube::stability::{
    bourgain_witness_search, concentration_check, kahn_kalai_variant_search, normtruncate_check, sharpness_table,
    warmup_check, IsoperimetryWitness, SharpnessExample,
};
use pcube::threshold::{
    linear_grid, m_global_certify, measure_curve, noise_route_check, russo_check, sharp_threshold_check_on,
    GLOBAL_EXPONENT,
};
use pcube::{Function, Subset};

use crate::args::*;
use crate::registry::{ids_for, lookup};
use crate::report::{num, Report, Table, VerdictRow};
use crate::source::{load, n_cap, Bias, Instance};
use crate::CliError;

type Res<T> = Result<T, CliError>;

pub fn dispatch(command: Command) -> Res<(Report, Option<Format>)> {
    match command {
        Command::Transform(a) => Ok((transform(&a)?, a.out.format)),
        Command::Influences(a) => Ok((influences(&a)?, a.out.format)),
        Command::Stability(a) => Ok((stability(&a)?, a.out.format)),
        Command::CheckHyper(a) => Ok((check_hyper(&a)?, a.out.format)),
        Command::Isoperimetry(a) => Ok((isoperimetry(&a)?, a.out.format)),
        Command::Threshold(a) => Ok((threshold(&a)?, a.out.format)),
        Command::Product(a) => Ok((product(&a)?, a.out.format)),
        Command::Invariance(a) => Ok((invariance(&a)?, a.out.format)),
        Command::Zoo(a) => Ok((zoo_report(&a)?, a.out.format)),
    }
}

fn theorem_id<'a>(command: &str, id: &'a str) -> Res<&'a str> {
    match lookup(command, id) {
        Some(_) => Ok(id),
        None => Err(CliError::Config(format!(
            "unknown theorem {id:?} for {command}; expected one of {}",
            ids_for(command).join(", ")
        ))),
    }
}

/// Runs `check` on every instance in parallel, keeping input order.
fn sweep<F>(instances: &[Instance], timing: bool, check: F) -> Res<Vec<VerdictRow>>
where
    F: Fn(&Instance) -> Res<Vec<VerdictRow>> + Sync,
{
    let groups = instances
        .par_iter()
        .map(|inst| timed(timing, || check(inst)))
        .collect::<Res<Vec<_>>>()?;
    Ok(groups.into_iter().flatten().collect())
}

fn timed(timing: bool, run: impl FnOnce() -> Res<Vec<VerdictRow>>) -> Res<Vec<VerdictRow>> {
    let start = Instant::now();
    let mut rows = run()?;
    if timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut rows {
            r.runtime_ms = Some(ms);
        }
    }
    Ok(rows)
}

fn subset_json(s: Subset) -> Value {
    json!(s.coords().collect::<Vec<_>>())
}

fn at_bias(f: &Function, p: f64) -> Res<Function> {
    Ok(f.rebias(p)?)
}

fn transform(a: &TransformArgs) -> Res<Report> {
    let instances = load(&a.source, Bias::General)?;
    let mut table = Table::new(&["instance", "mask", "S", "coeff"]);
    let mut data = Vec::new();
    for inst in &instances {
        let spec = inst.f.forward();
        let back = spec.inverse();
        let mut coeffs = Vec::new();
        for (m, &c) in spec.coeffs().iter().enumerate() {
            if c.abs() > a.min_abs {
                let s = Subset(m);
                table.push(vec![inst.name.clone(), m.to_string(), s.to_string(), num(c)]);
                coeffs.push(json!({ "mask": m, "S": subset_json(s), "coeff": c }));
            }
        }
        let energy = inst.f.energy();
        let mass = spec.mass();
        data.push(json!({
            "instance": inst.name,
            "n": inst.f.n(),
            "p": inst.f.cube().p(),
            "coefficients": coeffs,
            "parseval": { "energy": energy, "mass": mass, "error": (energy - mass).abs() },
            "round_trip_error": back.max_abs_diff(&inst.f)?,
        }));
    }
    Ok(Report::data("transform", Value::Array(data), table, Format::Json))
}

fn influences(a: &InfluencesArgs) -> Res<Report> {
    let instances = load(&a.source, Bias::Standard)?;
    if let Some(r) = a.equivalence {
        let rows = sweep(&instances, a.out.timing, |inst| {
            let report = equivalence_suite(&inst.f, r, a.delta)?;
            Ok(report
                .checks
                .iter()
                .map(|c| {
                    let margin = c.margin.unwrap_or(0.0);
                    let mut row = VerdictRow::with_margin(&inst.name, "equivalence", 0.0, margin, margin, a.out.tol)
                        .param("r", r)
                        .param("lemma", c.name)
                        .param("delta", c.delta)
                        .asserted(c.hypothesis);
                    row.pass = c.holds.unwrap_or(true);
                    row
                })
                .collect())
        })?;
        return Ok(Report::verdicts("influences", rows));
    }
    let mut table = Table::new(&["instance", "mask", "S", "I_S"]);
    let mut data = Vec::new();
    for inst in &instances {
        let t = GeneralizedInfluenceTable::new(&inst.f, a.r_max);
        let entries: Vec<Value> = t
            .entries
            .iter()
            .map(|&(s, v)| {
                table.push(vec![inst.name.clone(), s.0.to_string(), s.to_string(), num(v)]);
                json!({ "mask": s.0, "S": subset_json(s), "I_S": v })
            })
            .collect();
        let (beta, argmax) = beta_small_check(&inst.f, a.r_max)?;
        data.push(json!({
            "instance": inst.name,
            "r_max": a.r_max,
            "influences": entries,
            "beta": beta,
            "beta_argmax": subset_json(argmax),
            "total_influence": total_influence(&inst.f),
        }));
    }
    Ok(Report::data("influences", Value::Array(data), table, Format::Json))
}

fn stability(a: &StabilityArgs) -> Res<Report> {
    let instances = load(&a.source, Bias::Standard)?;
    let Some(check) = &a.check else {
        let rhos = if a.rho.is_empty() {
            (0..=10).map(|i| i as f64 / 10.0).collect()
        } else {
            a.rho.clone()
        };
        let mut table = Table::new(&["instance", "rho", "stab"]);
        let mut data = Vec::new();
        for inst in &instances {
            let curve = rhos
                .par_iter()
                .map(|&rho| Ok((rho, noise_stability(&inst.f, rho)?)))
                .collect::<Res<Vec<_>>>()?;
            for &(rho, s) in &curve {
                table.push(vec![inst.name.clone(), num(rho), num(s)]);
            }
            data.push(json!({
                "instance": inst.name,
                "curve": curve.iter().map(|&(rho, stab)| json!({ "rho": rho, "stab": stab })).collect::<Vec<_>>(),
            }));
        }
        return Ok(Report::data("stability", Value::Array(data), table, Format::Csv));
    };
    let id = theorem_id("stability", check)?;
    let tol = a.out.tol;
    let rows = sweep(&instances, a.out.timing, |inst| {
        let name = inst.name.as_str();
        let mut rows = Vec::new();
        match id {
            "noise-sensitivity" => {
                let rhos = if a.rho.is_empty() { vec![0.5] } else { a.rho.clone() };
                for &rho in &rhos {
                    let r = noise_sensitivity_check(&inst.f, rho, a.eps)?;
                    rows.push(
                        VerdictRow::bound(name, id, r.stab, r.bound, tol)
                            .param("rho", rho)
                            .param("eps", a.eps)
                            .extra("r", r.r)
                            .extra("delta", r.delta)
                            .extra("mu", r.mu)
                            .extra("global", r.global)
                            .extra("sparse", r.sparse)
                            .asserted(r.hypotheses),
                    );
                }
            }
            _ => {
                for &r in &a.r {
                    let row = match id {
                        "warmup" => {
                            let b = warmup_check(&inst.f, r)?;
                            VerdictRow::bound(name, id, b.lhs, b.rhs, tol)
                        }
                        "normsense" => {
                            let c = concentration_check(&inst.f, r, a.delta)?;
                            VerdictRow::bound(name, id, c.low_mass, c.bound, tol)
                                .param("delta", c.delta)
                                .extra("mu", c.mu)
                                .asserted(c.hypothesis)
                        }
                        "normsense0" => {
                            let c = concentration_check(&inst.f, r, None)?;
                            VerdictRow::bound(name, id, c.low_mass, c.influence_bound, tol)
                                .param("delta", c.influence_delta)
                                .extra("energy", c.energy)
                                .asserted(r >= 1)
                        }
                        _ => {
                            let b = normtruncate_check(&inst.f, r, a.delta)?;
                            VerdictRow::bound(name, id, b.lhs, b.rhs, tol)
                        }
                    };
                    rows.push(row.param("r", r));
                }
            }
        }
        Ok(rows)
    })?;
    Ok(Report::verdicts("stability", rows))
}

fn check_hyper(a: &HyperArgs) -> Res<Report> {
    let id = theorem_id("check-hyper", &a.theorem)?;
    let instances = load(&a.source, Bias::Standard)?;
    let tol = a.out.tol;
    let rows = sweep(&instances, a.out.timing, |inst| {
        let name = inst.name.as_str();
        let f = &inst.f;
        let mut rows = Vec::new();
        match id {
            "13" => {
                let h = hyper_check(f)?;
                rows.push(VerdictRow::bound(name, id, h.lhs13, h.rhs13, tol).param("rho", 0.2).extra("beta", h.beta));
            }
            "35" => {
                let h = hyper_check(f)?;
                rows.push(
                    VerdictRow::bound(name, id, h.lhs35, h.rhs35, tol)
                        .param("rho", 1.0 / 24f64.sqrt())
                        .extra("beta_lambda", h.beta_lambda),
                );
            }
            "34" => {
                let rho = a.rho.unwrap_or(0.25);
                let c = hypref_bound_check(f, rho)?;
                rows.push(VerdictRow::bound(name, id, c.lhs, c.rhs, tol).param("rho", rho).extra("middle", c.middle));
            }
            "qnorm" => {
                let rho = a.rho.unwrap_or_else(|| qnorm_rho_cap(a.q));
                let c = qnorm_cube_check(f, a.q, rho)?;
                rows.push(
                    VerdictRow::bound(name, id, c.lhs, c.rhs, tol)
                        .param("q", a.q)
                        .param("rho", rho)
                        .extra("beta", c.beta)
                        .extra("norm_lhs", c.norm_lhs)
                        .extra("norm_rhs", c.norm_rhs),
                );
            }
            "practice" | "bonami" => {
                if id == "bonami" && (f.cube().p() - 0.5).abs() > 1e-15 {
                    return Err(CliError::Config(format!("bonami needs p = 0.5, got {}", f.cube().p())));
                }
                let spec = f.forward();
                for &r in &a.r {
                    let low = spec.truncate(r).inverse();
                    let b = if id == "bonami" {
                        bonami_check(&low, r)?
                    } else {
                        practice_bound_check(&low, r, a.delta)?
                    };
                    rows.push(VerdictRow::bound(name, id, b.lhs, b.rhs, tol).param("r", r));
                }
            }
            _ => {
                let rho = a.rho.unwrap_or(0.2);
                let spec = f.forward();
                let steps: Vec<usize> = match a.t {
                    Some(t) => vec![t],
                    None => (1..=f.n()).collect(),
                };
                for t in steps {
                    let s = replacement_step_check(&spec, t, rho)?;
                    rows.push(
                        VerdictRow::with_margin(name, id, s.lhs, s.rhs, s.slack, tol)
                            .param("t", t)
                            .param("rho", rho)
                            .extra("head", s.head)
                            .extra("tail", s.tail),
                    );
                }
            }
        }
        Ok(rows)
    })?;
    Ok(Report::verdicts("check-hyper", rows))
}

fn witness_row(name: &str, id: &str, kind: &str, w: &IsoperimetryWitness<f64>, asserted: bool, tol: f64) -> VerdictRow {
    VerdictRow::bound(name, id, w.threshold, w.boost, tol)
        .param("K", w.k)
        .param("witness", kind)
        .extra("set", subset_json(w.set))
        .extra("size_bound", w.size_bound)
        .extra("min_constant", w.min_constant)
        .asserted(asserted && w.hypothesis)
}

fn isoperimetry(a: &IsoperimetryArgs) -> Res<Report> {
    let id = theorem_id("isoperimetry", &a.theorem)?;
    let tol = a.out.tol;
    if id == "eg1" || id == "eg2" {
        let (Some(s), Some(w)) = (a.s, a.w) else {
            return Err(CliError::Config(format!("{id} needs --s and --w")));
        };
        let example = if id == "eg1" {
            SharpnessExample::Eg1 { s, w }
        } else {
            let Some(t) = a.t else {
                return Err(CliError::Config("eg2 needs --t".into()));
            };
            SharpnessExample::Eg2 { s, w, t }
        };
        let ps = if a.source.p.is_empty() { vec![0.5] } else { a.source.p.clone() };
        let cap = n_cap()?;
        let tables = ps
            .par_iter()
            .map(|&p| Ok(sharpness_table(example, p, cap)?))
            .collect::<Res<Vec<_>>>()?;
        let mut rows = Vec::new();
        for t in &tables {
            let name = format!("{}@p={}", example.generator(), t.p);
            for r in &t.rows {
                let mut row = VerdictRow::bound(&name, id, r.best, r.bound, tol)
                    .param("size", r.size)
                    .extra("witness", subset_json(r.witness))
                    .extra("closed", r.closed)
                    .extra("secondary", r.secondary)
                    .extra("K", t.k)
                    .extra("mu", t.mu_enum)
                    .asserted(!r.exempt);
                row.pass = r.holds;
                rows.push(row);
            }
        }
        return Ok(Report::verdicts("isoperimetry", rows));
    }

    let instances = load(&a.source, Bias::Standard)?;
    let mut table = Table::new(&["instance", "K", "|J|", "bump", "threshold", "min_constant", "pass"]);
    let mut rows = Vec::new();
    for inst in &instances {
        let witnesses: Vec<(&str, IsoperimetryWitness<f64>, bool)> = if id == "kahn-kalai" {
            let Some(k) = a.k else {
                return Err(CliError::Config("kahn-kalai needs --k".into()));
            };
            vec![("restriction", kahn_kalai_variant_search(&inst.f, k, a.c)?, true)]
        } else {
            let k = match a.k {
                Some(k) => k,
                None => {
                    let mu = inst.f.expectation();
                    if mu <= 0.0 || mu >= 1.0 {
                        return Err(CliError::Config(format!("{}: μ = {mu}, give --k", inst.name)));
                    }
                    inst.f.cube().p() * total_influence(&inst.f) / (mu * (1.0 - mu))
                }
            };
            let b = bourgain_witness_search(&inst.f, k)?;
            let mut out = vec![("influence", b.influence, b.balanced)];
            if let Some(r) = b.restriction {
                out.push(("restriction", r, b.balanced));
            }
            out
        };
        let start = Instant::now();
        for (kind, w, asserted) in &witnesses {
            let mut row = witness_row(&inst.name, id, kind, w, *asserted, tol);
            if a.out.timing {
                row.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            table.push(vec![
                inst.name.clone(),
                num(w.k),
                w.set.len().to_string(),
                num(w.boost),
                num(w.threshold),
                num(w.min_constant),
                row.pass.to_string(),
            ]);
            rows.push(row);
        }
    }
    let mut report = Report::verdicts("isoperimetry", rows);
    report.table = Some(table);
    Ok(report)
}

fn threshold(a: &ThresholdArgs) -> Res<Report> {
    let instances = load(&a.source, Bias::General)?;
    let tol = a.out.tol;
    let Some(theorem) = &a.theorem else {
        let grid: Vec<f64> = linear_grid(a.grid);
        let mut table = Table::new(&["instance", "p", "mu", "influence"]);
        let mut data = Vec::new();
        for inst in &instances {
            let profile = measure_curve(&inst.f, &grid)?;
            let infl = grid
                .par_iter()
                .map(|&p| Ok(total_influence(&at_bias(&inst.f, p)?)))
                .collect::<Res<Vec<_>>>()?;
            let mut points = Vec::new();
            for (&(p, mu), &i) in profile.curve.iter().zip(&infl) {
                table.push(vec![inst.name.clone(), num(p), num(mu), num(i)]);
                points.push(json!({ "p": p, "mu": mu, "influence": i }));
            }
            data.push(json!({
                "instance": inst.name,
                "curve": points,
                "p_c": profile.p_c,
                "monotone": profile.monotone,
                "nondecreasing": profile.nondecreasing,
            }));
        }
        return Ok(Report::data("threshold", Value::Array(data), table, Format::Csv));
    };
    let id = theorem_id("threshold", theorem)?;
    let needs_q = matches!(id, "sharp" | "noise-route" | "directed");
    if needs_q && a.q.is_empty() {
        return Err(CliError::Config(format!("{id} needs --q")));
    }
    let rows = sweep(&instances, a.out.timing, |inst| {
        let name = inst.name.as_str();
        let f = &inst.f;
        let p = f.cube().p();
        let monotone = f.is_monotone();
        let mut rows = Vec::new();
        match id {
            "russo" => {
                let r = russo_check(f, p, a.h)?;
                rows.push(
                    VerdictRow::bound(name, id, r.deviation, a.atol, tol)
                        .param("h", a.h)
                        .extra("finite_difference", r.finite_difference)
                        .extra("influence", r.influence)
                        .asserted(monotone),
                );
            }
            "m-global" => {
                let interval = match a.interval.as_deref() {
                    Some(&[lo, hi]) => (lo, hi),
                    Some(_) => return Err(CliError::Config("--interval takes lo,hi".into())),
                    None => (p.min(0.5), 0.5),
                };
                let cert = m_global_certify(f, a.m, interval, a.grid_size)?;
                for probe in &cert.grid {
                    let mut row = VerdictRow::bound(name, id, probe.worst, probe.mu.powf(GLOBAL_EXPONENT), tol)
                        .param("m", a.m)
                        .param("p", probe.p)
                        .extra("witness", subset_json(probe.witness));
                    row.pass = probe.pass;
                    rows.push(row);
                }
            }
            _ => {
                for &q in &a.q {
                    match id {
                        "sharp" => {
                            let r = sharp_threshold_check_on(f, p, q, a.m, a.c, a.grid_size)?;
                            rows.push(
                                VerdictRow::bound(name, id, r.rhs, r.mu_q, tol)
                                    .param("q", q)
                                    .param("m", a.m)
                                    .param("c", a.c)
                                    .extra("mu_p", r.mu_p)
                                    .extra("p_c", r.p_c)
                                    .extra("min_constant", r.min_constant)
                                    .extra("m_global", r.certificate.pass)
                                    .asserted(r.hypothesis),
                            );
                        }
                        "noise-route" => {
                            let r = noise_route_check(f, p, q, a.eps, a.c)?;
                            rows.push(
                                VerdictRow::with_margin(name, id, r.prop.rhs, r.prop.mu_q, r.prop.slack, tol)
                                    .param("q", q)
                                    .param("step", "directed")
                                    .asserted(monotone),
                            );
                            rows.push(
                                VerdictRow::bound(name, id, r.prop.mu_p / a.eps, r.prop.mu_q, tol)
                                    .param("q", q)
                                    .param("step", "conclusion")
                                    .param("eps", a.eps)
                                    .param("c", a.c)
                                    .extra("r", r.r)
                                    .extra("delta", r.delta)
                                    .extra("global", r.global)
                                    .extra("sparse", r.sparse)
                                    .asserted(r.hypothesis),
                            );
                        }
                        _ => {
                            let r = directed_threshold(f, p, q)?;
                            rows.push(
                                VerdictRow::with_margin(name, id, r.rhs, r.mu_q, r.slack, tol)
                                    .param("q", q)
                                    .extra("rho", r.rho)
                                    .extra("stab", r.stab)
                                    .extra("mu_p", r.mu_p)
                                    .asserted(monotone),
                            );
                        }
                    }
                }
            }
        }
        Ok(rows)
    })?;
    Ok(Report::verdicts("threshold", rows))
}

fn product(a: &ProductArgs) -> Res<Report> {
    let cap = n_cap()?;
    let (name, f): (String, ProductFunction<f64>) = match (&a.file, &a.random) {
        (Some(path), None) => (path.display().to_string(), read_product(path, cap)?),
        (None, Some(v)) => {
            let &[n, arity, seed] = v.as_slice() else {
                return Err(CliError::Config("--random takes n,max_arity,seed".into()));
            };
            let (n, arity) = (n as usize, arity as usize);
            if n > cap {
                return Err(pcube::Error::DimensionCap { n, cap }.into());
            }
            let space = random_space(n, arity, 0.02, seed)?;
            (format!("random:n={n},arity={arity},seed={seed}"), random_product_function(space, seed))
        }
        _ => return Err(CliError::Config("give exactly one of --file or --random".into())),
    };
    let tol = a.out.tol;
    let Some(theorem) = &a.theorem else {
        let es = es_decompose(&f)?;
        let mut table = Table::new(&["instance", "mask", "S", "norm2"]);
        let mut comps = Vec::new();
        for (m, &v) in es.norms2().iter().enumerate() {
            table.push(vec![name.clone(), m.to_string(), Subset(m).to_string(), num(v)]);
            comps.push(json!({ "mask": m, "S": subset_json(Subset(m)), "norm2": v }));
        }
        let data = json!({
            "instance": name,
            "arities": f.space().arities(),
            "expectation": f.expectation(),
            "energy": f.energy(),
            "components": comps,
        });
        return Ok(Report::data("product", data, table, Format::Json));
    };
    let id = theorem_id("product", theorem)?;
    let rows = timed(a.out.timing, || {
        let mut rows = Vec::new();
        match id {
            "es-invariants" => {
                let inv = es_decompose(&f)?.invariants(&f);
                for (key, v) in [
                    ("reconstruction", inv.reconstruction),
                    ("locality", inv.locality),
                    ("orthogonality", inv.orthogonality),
                    ("parseval", inv.parseval),
                ] {
                    rows.push(VerdictRow::bound(&name, id, v, a.atol, tol).param("identity", key));
                }
            }
            "es-hyper" => {
                let rho = a.rho.unwrap_or_else(|| es_rho_cap(a.q));
                let r = es_hyper_check(&f, a.q, rho)?;
                rows.push(VerdictRow::bound(&name, id, r.lhs, r.rhs, tol).param("q", a.q).param("rho", rho));
            }
            "holder" => {
                if a.sets.is_empty() {
                    return Err(CliError::Config("holder needs --sets".into()));
                }
                let full = Subset((1 << f.space().n()) - 1);
                let sets: Vec<Subset> = a.sets.iter().map(|&m| Subset(m)).collect();
                if let Some(s) = sets.iter().find(|s| !s.is_subset_of(full)) {
                    return Err(CliError::Config(format!("set {s} is outside the space")));
                }
                let fs: Vec<_> = sets.iter().map(|&s| f.average_over(full.minus(s))).collect();
                let r = holder_term_check(&fs, &sets)?;
                rows.push(
                    VerdictRow::bound(&name, id, r.lhs, r.rhs, tol)
                        .param("sets", a.sets.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
                        .extra("single_coverage", r.single_coverage),
                );
            }
            _ => {
                let (lhs, rhs) = single_factor_moment_check(&f, a.q)?;
                rows.push(VerdictRow::bound(&name, id, lhs, rhs, tol).param("q", a.q));
            }
        }
        Ok(rows)
    })?;
    Ok(Report::verdicts("product", rows))
}

fn invariance(a: &InvarianceArgs) -> Res<Report> {
    let text = std::fs::read_to_string(&a.poly).map_err(|e| CliError::Config(format!("{}: {e}", a.poly.display())))?;
    let wide = MultilinearPoly::parse(usize::BITS as usize - 1, &text)?;
    let n = a
        .n
        .unwrap_or_else(|| wide.terms().map(|(s, _)| s.max_coord()).max().unwrap_or(0));
    let cap = n_cap()?;
    if n > cap {
        return Err(pcube::Error::DimensionCap { n, cap }.into());
    }
    let f = MultilinearPoly::new(n, wide.terms())?;
    let x = Ensemble::parse(n, &a.x)?;
    let y = Ensemble::parse(n, &a.y)?;
    let phi = TestFunction::parse(&a.phi)?;
    let name = a.poly.display().to_string();
    let rows = timed(a.out.timing, || {
        let r = invariance_bound_check(&f, &x, &y, &phi, a.samples, a.seed)?;
        let effective = if r.exact { r.lhs } else { r.lhs - 3.0 * r.mc_error };
        let mut row = VerdictRow::with_margin(&name, "invariance", r.lhs, r.rhs_12d, r.rhs_12d - effective, a.out.tol)
            .param("x", a.x.as_str())
            .param("y", a.y.as_str())
            .param("phi", phi.name())
            .param("n", n)
            .extra("d", r.d)
            .extra("w_empty", r.w_empty)
            .extra("eps", r.eps)
            .extra("third_derivative", r.third)
            .extra("rhs_5d", r.rhs_5d)
            .extra("holds_5d", r.holds_5d)
            .extra("exact", r.exact)
            .extra("mc_error", r.mc_error)
            .extra("vacuous", r.vacuous);
        if !r.exact {
            row = row.param("samples", a.samples).param("seed", a.seed);
        }
        Ok(vec![row])
    })?;
    Ok(Report::verdicts("invariance", rows))
}

fn zoo_report(a: &ZooArgs) -> Res<Report> {
    let cap = n_cap()?;
    let cube = pcube::Cube::with_cap(a.n, 0.5, cap)?;
    let mut table = Table::new(&["spec", "support", "monotone", "mu_half"]);
    let mut data = Vec::new();
    for g in zoo(a.n) {
        let f = g.generate(cube.clone())?;
        let mu = f.expectation();
        table.push(vec![g.to_string(), g.support(a.n).to_string(), g.is_monotone().to_string(), num(mu)]);
        data.push(json!({
            "spec": g.to_string(),
            "support": g.support(a.n),
            "monotone": g.is_monotone(),
            "mu_half": mu,
        }));
    }
    Ok(Report::data("zoo", Value::Array(data), table, Format::Json))
}
