//! Reference fixtures with known exact values, recomputed from scratch.

use serde_json::{json, Value};

use crate::convolution::grid_convolve;
use crate::distributions::{grid_from_measure, Atom, AtomicPlanarMeasure, GridDistribution};
use crate::error::Result;
use crate::io::{matrix_json, rational_json, vector_json};
use crate::limits::{limit_pipeline, LimitSpec};
use crate::partitions::{pi_chi_omega, ChiWord, OmegaWord};
use crate::positivity::{det_exact, moment_matrix, psd_check, RationalMatrix};
use crate::rational::{parse_rational, q, qi, Q};

pub const WORKED_CHI: &str = "LRLRLRLLRRLR";
pub const WORKED_OMEGA: &str = "1,1,1,1,2,1,2,1,2,2,1,1";
/// 1-based blocks of π_{χ,ω} for the pair above.
pub const WORKED_BLOCKS: [&[usize]; 5] = [&[1, 3], &[2, 4, 6], &[5, 7], &[8, 11, 12], &[9, 10]];

/// Moment matrix (n = 1) of the self-convolution of `½(δ_(0,1) + δ_(1,0))`.
pub const X1: [[&str; 4]; 4] = [
    ["1", "1", "1", "1/2"],
    ["1", "3/2", "1/2", "5/8"],
    ["1", "1/2", "3/2", "5/8"],
    ["1/2", "5/8", "5/8", "3/4"],
];

/// `(m, n, M_{m,n})` at `t = 1` for the compound Poisson law with jump
/// measure [`tau`].
pub const COMPOUND_MOMENTS: [(usize, usize, &str); 9] = [
    (0, 0, "1"),
    (1, 0, "15"),
    (0, 1, "15"),
    (2, 0, "270"),
    (1, 1, "210"),
    (0, 2, "270"),
    (2, 1, "7455/2"),
    (1, 2, "7455/2"),
    (2, 2, "131715/2"),
];

/// Mass 15 at each of `(1,1)`, `(−1,1)`, `(1,−1)`, so that
/// `K_{m,n} = 15(−1)ᵐ + 15(−1)ⁿ + 15`.
pub fn tau() -> AtomicPlanarMeasure {
    AtomicPlanarMeasure::new(vec![
        Atom { s: qi(1), t: qi(1), w: qi(15) },
        Atom { s: qi(-1), t: qi(1), w: qi(15) },
        Atom { s: qi(1), t: qi(-1), w: qi(15) },
    ])
    .expect("valid atoms")
}

/// `½(δ_(0,1) + δ_(1,0))` as a grid of the given order.
pub fn half_axis_pair(order: usize) -> GridDistribution {
    grid_from_measure(
        &AtomicPlanarMeasure::from_weighted_points([
            (qi(0), qi(1), q(1, 2)),
            (qi(1), qi(0), q(1, 2)),
        ]),
        order,
    )
}

pub fn x1_expected() -> RationalMatrix {
    RationalMatrix::from_fn(4, |i, j| parse_rational(X1[i][j]).expect("fixture"))
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub passed: bool,
    pub details: Value,
}

fn blocks_json(blocks: &[Vec<usize>]) -> Value {
    json!(blocks)
}

pub fn worked_partition() -> Result<Fixture> {
    let chi = ChiWord::parse(WORKED_CHI)?;
    let omega = OmegaWord::parse(WORKED_OMEGA)?;
    let mut got: Vec<Vec<usize>> = pi_chi_omega(&chi, &omega)?
        .into_iter()
        .map(|b| b.into_iter().map(|p| p + 1).collect())
        .collect();
    got.sort();
    let mut want: Vec<Vec<usize>> = WORKED_BLOCKS.iter().map(|b| b.to_vec()).collect();
    want.sort();
    Ok(Fixture {
        name: "pi-chi-omega",
        passed: got == want,
        details: json!({
            "chi": WORKED_CHI,
            "omega": WORKED_OMEGA,
            "blocks": blocks_json(&got),
        }),
    })
}

pub fn x1_counterexample() -> Result<Fixture> {
    let g = half_axis_pair(2);
    let conv = grid_convolve(&g, &g)?;
    let x = moment_matrix(&conv, 1)?;
    let det = det_exact(&x);
    let verdict = psd_check(&x)?;
    let witness_value = match &verdict.witness {
        Some(v) => Some(x.quadratic_form(v)?),
        None => None,
    };
    let passed = x == x1_expected()
        && det == q(-1, 32)
        && !verdict.is_psd
        && witness_value.as_ref().is_some_and(|w| *w < qi(0));
    Ok(Fixture {
        name: "x1-counterexample",
        passed,
        details: json!({
            "matrix": matrix_json(x.rows()),
            "determinant": rational_json(&det),
            "psd": verdict.is_psd,
            "witness": verdict.witness.as_deref().map(vector_json),
            "witness_value": witness_value.as_ref().map(rational_json),
        }),
    })
}

pub fn compound_counterexample(order: usize) -> Result<Fixture> {
    let spec = LimitSpec::Compound { lambda: qi(1), nu: tau() };
    let p = limit_pipeline(&spec, order, 1)?;
    let cumulants_ok = (0..=order).all(|m| {
        (0..=order).all(|n| {
            m + n == 0 || {
                let sign = |k: usize| if k % 2 == 0 { 15 } else { -15 };
                p.cumulants[m][n] == qi(sign(m) + sign(n) + 15)
            }
        })
    });
    let moments_ok = COMPOUND_MOMENTS
        .iter()
        .all(|&(m, n, v)| *p.moments.get(m, n) == parse_rational(v).expect("fixture"));
    let x = p.matrix.expect("n = 1");
    let det = p.determinant.expect("n = 1");
    let verdict = p.verdict.expect("n = 1");
    let witness_value = match &verdict.witness {
        Some(v) => Some(x.quadratic_form(v)?),
        None => None,
    };
    let passed = cumulants_ok
        && moments_ok
        && det == qi(-857250)
        && !verdict.is_psd
        && witness_value.as_ref().is_some_and(|w| *w < qi(0));
    let low: Vec<Vec<Q>> = (0..=2)
        .map(|m| (0..=2).map(|n| p.moments.get(m, n).clone()).collect())
        .collect();
    Ok(Fixture {
        name: "compound-poisson-counterexample",
        passed,
        details: json!({
            "order": order,
            "moments": matrix_json(&low),
            "matrix": matrix_json(x.rows()),
            "determinant": rational_json(&det),
            "psd": verdict.is_psd,
            "witness": verdict.witness.as_deref().map(vector_json),
            "witness_value": witness_value.as_ref().map(rational_json),
        }),
    })
}

/// Every fixture, computed at the default series order of 8.
pub fn all_fixtures() -> Result<Vec<Fixture>> {
    Ok(vec![
        worked_partition()?,
        x1_counterexample()?,
        compound_counterexample(8)?,
    ])
}
