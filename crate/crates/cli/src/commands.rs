//! Verb implementations. Each returns the process exit code on success.

use std::io::{Read, Write};

use serde_json::{json, Map, Value};

use bimono::convolution::{convolve, grid_convolve};
use bimono::cumulants::{CumulantTable, MomentCumulantPlan, PhiT};
use bimono::distributions::{GridDistribution, WordDistribution};
use bimono::io::{
    cumulants_from_json, cumulants_json, distribution_from_json, distribution_json, document,
    matrix_from_json, matrix_json, measure_from_json, rational_json,
    series1_json, series2_json, spaces_from_json, text_table, type2_word_from_json, vector_json,
    word_table, Distribution, SCHEMA,
};
use bimono::limits::{limit_convergence_check, limit_pipeline, LimitSpec};
use bimono::partitions::{
    enumerate_bm_bounded, enumerate_bnc_bounded, pi_chi_omega, ChiWord, OmegaWord,
};
use bimono::positivity::{det_exact, moment_matrix, psd_check, RationalMatrix};
use bimono::rational::{format_rational, parse_rational, Q};
use bimono::reproduce::all_fixtures;
use bimono::series::{
    cauchy_from_grid, evolve_joint, f_transform, generating_functions, grid_cumulants,
    left_marginal, right_marginal,
};
use bimono::type2::type2_moment;
use bimono::{Error, Result};

use crate::{Cli, Format, JobConfig, LimitKind, Verb};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn read_json(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| invalid(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| invalid(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("parsing {path}: {e}")))
}

fn emit(job: &JobConfig, json: &Value, table: impl FnOnce() -> String) -> Result<()> {
    let text = match job.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => table(),
    };
    write_out(job, &text)
}

fn write_out(job: &JobConfig, text: &str) -> Result<()> {
    match &job.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| invalid(format!("writing {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| invalid(format!("writing stdout: {e}")))
        }
    }
}

/// Why a verb did not complete.
pub enum Failure {
    /// Flags that clap cannot check on its own.
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn rational_arg(name: &str, v: &Option<String>) -> std::result::Result<Q, Failure> {
    match v {
        Some(s) => Ok(parse_rational(s)?),
        None => Err(Failure::Usage(format!("--{name} is required for this limit"))),
    }
}

pub fn execute(cli: &Cli) -> std::result::Result<u8, Failure> {
    let job = &cli.job;
    let order = job.order as usize;
    match &cli.verb {
        Verb::Partitions { chi, bm, omega } => partitions(job, chi, *bm, omega.as_deref())?,
        Verb::MomentsToCumulants { input } => moments_to_cumulants(job, &read_json(input)?, order)?,
        Verb::CumulantsToMoments { input, time } => {
            cumulants_to_moments(job, &read_json(input)?, &parse_rational(time)?, order)?
        }
        Verb::Convolve { input } => {
            if input.iter().filter(|p| *p == "-").count() > 1 {
                return Err(Failure::Usage("at most one input may be stdin".into()));
            }
            let a = distribution_from_json(&read_json(&input[0])?)?;
            let b = distribution_from_json(&read_json(&input[1])?)?;
            let c = match (a, b) {
                (Distribution::Word(a), Distribution::Word(b)) => {
                    Distribution::Word(convolve(&a, &b)?)
                }
                (Distribution::Grid(a), Distribution::Grid(b)) => {
                    Distribution::Grid(grid_convolve(&a, &b)?)
                }
                _ => return Err(invalid("cannot convolve a word table with a grid").into()),
            };
            emit(job, &distribution_json(&c), || distribution_table(&c))?;
        }
        Verb::Transform { input, time } => {
            transform(job, &read_json(input)?, &parse_rational(time)?, order)?
        }
        Verb::Type2 { spaces, word } => {
            let spaces = spaces_from_json(&read_json(spaces)?)?;
            let word = type2_word_from_json(&read_json(word)?)?;
            let value = type2_moment(&spaces, &word)?;
            emit(
                job,
                &document("type2-moment", json!({ "value": rational_json(&value) })),
                || format!("{}\n", format_rational(&value)),
            )?;
        }
        Verb::PsdCheck { input, size } => {
            let v = read_json(input)?;
            let x = if v.get("moments").is_some() {
                match distribution_from_json(&v)? {
                    Distribution::Grid(g) => moment_matrix(&g, *size)?,
                    Distribution::Word(_) => {
                        return Err(invalid("moment matrices need grid moments").into())
                    }
                }
            } else {
                RationalMatrix::new(matrix_from_json(v.get("matrix").unwrap_or(&v))?)?
            };
            let (json, table) = psd_report(&x)?;
            emit(job, &document("psd-check", json), || table)?;
        }
        Verb::Limit {
            kind,
            alpha,
            beta,
            gamma,
            lambda,
            tau,
            size,
            check,
        } => {
            let spec = match kind {
                LimitKind::Clt => LimitSpec::Clt {
                    alpha: rational_arg("alpha", alpha)?,
                    beta: rational_arg("beta", beta)?,
                    gamma: gamma.as_deref().map(parse_rational).transpose()?.unwrap_or_default(),
                },
                LimitKind::Poisson => LimitSpec::Poisson {
                    lambda: rational_arg("lambda", lambda)?,
                    alpha: rational_arg("alpha", alpha)?,
                    beta: rational_arg("beta", beta)?,
                },
                LimitKind::Compound => LimitSpec::Compound {
                    lambda: match lambda {
                        Some(s) => parse_rational(s)?,
                        None => Q::from_integer(1.into()),
                    },
                    nu: measure_from_json(&read_json(tau.as_deref().ok_or_else(|| {
                        Failure::Usage("--tau is required for a compound limit".into())
                    })?)?)?,
                },
            };
            limit(job, &spec, order, *size, *check)?
        }
        Verb::ReproducePaper => return Ok(reproduce(job)?),
    }
    Ok(0)
}

fn blocks_text(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| {
            let inner: Vec<String> = b.iter().map(|p| p.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|p| p + 1).collect())
        .collect()
}

/// One JSON object per line, each tagged with the schema.
fn json_line(fields: Value) -> String {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    if let Value::Object(f) = fields {
        m.extend(f);
    }
    format!("{}\n", Value::Object(m))
}

fn partitions(job: &JobConfig, chi: &str, bm: bool, omega: Option<&str>) -> Result<()> {
    let chi = ChiWord::parse(chi)?;
    let bound = job.bound as usize;
    if let Some(omega) = omega {
        let blocks = one_based(&pi_chi_omega(&chi, &OmegaWord::parse(omega)?)?);
        return emit(
            job,
            &document(
                "pi-chi-omega",
                json!({ "chi": chi.to_string(), "omega": omega, "blocks": blocks }),
            ),
            || format!("{}\n", blocks_text(&blocks)),
        );
    }
    let text: String = if bm {
        let all = enumerate_bm_bounded(&chi, bound)?;
        match job.format {
            Format::Json => all
                .iter()
                .map(|p| json_line(serde_json::to_value(p).expect("serializable")))
                .collect(),
            Format::Table => all
                .iter()
                .map(|p| {
                    let ranks: Vec<String> = p.rank.iter().map(|r| r.to_string()).collect();
                    format!(
                        "{}  rank {}\n",
                        blocks_text(&one_based(p.partition.blocks())),
                        ranks.join(" ")
                    )
                })
                .collect(),
        }
    } else {
        let all = enumerate_bnc_bounded(&chi, bound)?;
        match job.format {
            Format::Json => all
                .iter()
                .map(|p| json_line(serde_json::to_value(p).expect("serializable")))
                .collect(),
            Format::Table => all
                .iter()
                .map(|p| format!("{}\n", blocks_text(&one_based(p.blocks()))))
                .collect(),
        }
    };
    write_out(job, &text)
}

fn distribution_table(d: &Distribution) -> String {
    match d {
        Distribution::Word(w) => word_table(
            &w.iter()
                .map(|(k, v)| (bimono::partitions::word_to_string(&k), v.clone()))
                .collect(),
        ),
        Distribution::Grid(g) => text_table(g.rows()),
    }
}

fn cumulant_table_text(k: &CumulantTable, max_len: usize) -> Result<String> {
    Ok(match k.grid_order() {
        Some(o) => text_table(&k.grid_rows(o)?),
        None => word_table(&k.to_map(max_len)),
    })
}

fn moments_to_cumulants(job: &JobConfig, v: &Value, order: usize) -> Result<()> {
    let (k, max_len) = match distribution_from_json(v)? {
        Distribution::Word(d) => {
            let plan = MomentCumulantPlan::new(d.max_len())?;
            (plan.cumulants(&d)?, d.max_len())
        }
        Distribution::Grid(g) => {
            let g = g.truncate(order.min(g.order()))?;
            (grid_cumulants(&g)?, 0)
        }
    };
    emit(job, &cumulants_json(&k, max_len)?, || {
        cumulant_table_text(&k, max_len).unwrap_or_default()
    })
}

fn cumulants_to_moments(job: &JobConfig, v: &Value, t: &Q, order: usize) -> Result<()> {
    let k = cumulants_from_json(v)?;
    let d = match (k.grid_order(), k.max_len()) {
        (Some(o), _) => {
            let evo = evolve_joint(&generating_functions(&k, o.min(order))?)?;
            Distribution::Grid(evo.moments_at(t)?)
        }
        (None, Some(max_len)) => {
            let one = Q::from_integer(1.into());
            if *t == one {
                Distribution::Word(MomentCumulantPlan::new(max_len)?.moments(&k)?)
            } else {
                let mut phi = PhiT::new(&k);
                Distribution::Word(WordDistribution::try_from_fn(max_len, |w| {
                    Ok(phi.eval(w)?.eval(t))
                })?)
            }
        }
        (None, None) => unreachable!("a table is either per word or a grid"),
    };
    emit(job, &distribution_json(&d), || distribution_table(&d))
}

fn transform(job: &JobConfig, v: &Value, t: &Q, order: usize) -> Result<()> {
    let is_cumulants = v.get("cumulants").is_some()
        || v.get("kind").and_then(Value::as_str).is_some_and(|k| k.ends_with("cumulants"));
    if is_cumulants {
        let k = cumulants_from_json(v)?;
        let o = k
            .grid_order()
            .ok_or_else(|| invalid("transform needs grid cumulants"))?
            .min(order);
        let gf = generating_functions(&k, o)?;
        let evo = evolve_joint(&gf)?;
        let g = evo.cauchy().eval_time(t);
        let json = document(
            "evolution",
            json!({
                "time": rational_json(t),
                "order": o,
                "a_tilde": series2_json(&gf.atilde),
                "cauchy": series2_json(&g),
                "marginal_left": series1_json(&evo.g1.eval_time(t)),
                "marginal_right": series1_json(&evo.g2.eval_time(t)),
            }),
        );
        return emit(job, &json, || {
            format!(
                "a_tilde (coefficient of u^m v^n)\n{}\ncauchy at t = {} (coefficient of u^m v^n)\n{}",
                text_table(gf.atilde.rows()),
                format_rational(t),
                text_table(g.rows())
            )
        });
    }
    let g: GridDistribution = match distribution_from_json(v)? {
        Distribution::Grid(g) => g.truncate(order.min(g.order()))?,
        Distribution::Word(_) => return Err(invalid("transform needs grid moments")),
    };
    let cauchy = cauchy_from_grid(&g);
    let s1 = f_transform(&left_marginal(&cauchy))?;
    let s2 = f_transform(&right_marginal(&cauchy))?;
    let json = document(
        "transform",
        json!({
            "order": g.order(),
            "cauchy": series2_json(&cauchy),
            "reciprocal_form": "F(z) = z*S(1/z), coefficients of S",
            "reciprocal_left": series1_json(&s1),
            "reciprocal_right": series1_json(&s2),
        }),
    );
    emit(job, &json, || {
        let row = |s: &bimono::series::TruncatedSeries1<Q>| {
            s.coeffs().iter().map(format_rational).collect::<Vec<_>>().join("  ")
        };
        format!(
            "cauchy (coefficient of u^m v^n)\n{}\nS_left   {}\nS_right  {}\n",
            text_table(cauchy.rows()),
            row(&s1),
            row(&s2)
        )
    })
}

fn psd_report(x: &RationalMatrix) -> Result<(Value, String)> {
    let det = det_exact(x);
    let verdict = psd_check(x)?;
    let witness_value = verdict
        .witness
        .as_ref()
        .map(|w| x.quadratic_form(w))
        .transpose()?;
    let json = json!({
        "dimension": x.dim(),
        "psd": verdict.is_psd,
        "determinant": rational_json(&det),
        "witness": verdict.witness.as_deref().map(vector_json),
        "witness_value": witness_value.as_ref().map(rational_json),
        "certificate": verdict.certificate.as_ref().map(|c| serde_json::to_value(c).expect("serializable")),
    });
    let mut table = format!(
        "psd          {}\ndeterminant  {}\n",
        verdict.is_psd,
        format_rational(&det)
    );
    if let (Some(w), Some(val)) = (&verdict.witness, &witness_value) {
        let w: Vec<String> = w.iter().map(format_rational).collect();
        table.push_str(&format!(
            "witness      {}\n<Xv, v>      {}\n",
            w.join(" "),
            format_rational(val)
        ));
    }
    Ok((json, table))
}

fn limit(
    job: &JobConfig,
    spec: &LimitSpec,
    order: usize,
    size: usize,
    check: Option<usize>,
) -> Result<()> {
    let p = limit_pipeline(spec, order, size)?;
    let mut fields = json!({
        "limit": spec.kind(),
        "order": order,
        "cumulants": matrix_json(&p.cumulants),
        "moments": matrix_json(p.moments.rows()),
    });
    let mut table = format!(
        "cumulants K_mn\n{}\nmoments M_mn at t = 1\n{}",
        text_table(&p.cumulants),
        text_table(p.moments.rows())
    );
    if let Some(ok) = spec.correlation_admissible() {
        fields["correlation_admissible"] = json!(ok);
    }
    if let Some(x) = &p.matrix {
        let (report, text) = psd_report(x)?;
        fields["moment_matrix"] = json!({ "size": size, "matrix": matrix_json(x.rows()) });
        if let Value::Object(r) = report {
            fields.as_object_mut().expect("object").extend(r);
        }
        table.push_str(&text);
    }
    if let Some(n) = check {
        let r = limit_convergence_check(spec, n, order)?;
        fields["convergence"] = json!({
            "n": r.n,
            "extensive": r.extensive,
            "scaling_exact": r.scaling_exact,
            "deviation": if spec.kind() == "clt" { "squared" } else { "signed" },
            "max_abs_deviation": rational_json(&r.max_abs_deviation),
            "entries": r.entries.iter().map(|e| json!({
                "m": e.m,
                "n": e.n,
                "sum_cumulant": rational_json(&e.sum_cumulant),
                "limit": rational_json(&e.limit),
                "deviation": rational_json(&e.deviation),
            })).collect::<Vec<_>>(),
        });
        table.push_str(&format!(
            "N = {n}: extensive {}, max |deviation| {}\n",
            r.extensive,
            format_rational(&r.max_abs_deviation)
        ));
    }
    emit(job, &document("limit", fields), || table)
}

fn reproduce(job: &JobConfig) -> Result<u8> {
    let fixtures = all_fixtures()?;
    let passed = fixtures.iter().all(|f| f.passed);
    let json = document(
        "reproduction",
        json!({
            "passed": passed,
            "fixtures": fixtures.iter().map(|f| json!({
                "name": f.name,
                "passed": f.passed,
                "details": f.details,
            })).collect::<Vec<_>>(),
        }),
    );
    emit(job, &json, || {
        let mut s = String::new();
        for f in &fixtures {
            let status = if f.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status}  {}\n", f.name));
            if let Some(d) = f.details.get("determinant").and_then(Value::as_str) {
                s.push_str(&format!("      determinant {d}\n"));
            }
            if let Some(b) = f.details.get("blocks") {
                s.push_str(&format!("      blocks {b}\n"));
            }
        }
        s
    })?;
    Ok(if passed { 0 } else { 1 })
}
