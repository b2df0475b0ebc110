//! Cross-checks against independent constructions.

mod common;

use bimono::convolution::{convolve, multi_family_moment, OrderedFamily};
use bimono::cumulants::dot_distribution;
use bimono::distributions::{Moments, WordDistribution};
use bimono::limits::{limit_cumulants, LimitSpec};
use bimono::partitions::{enumerate_bm, ChiWord, OmegaWord, Side};
use bimono::positivity::{det_exact, RationalMatrix};
use bimono::rational::{binomial, q, qi, Q};
use bimono::reproduce::tau;
use bimono::series::{
    compose_f, compound_poisson_generating, evolve_joint, f_transform, generating_functions,
    marginal_from_f, TruncatedSeries1,
};
use bimono::type2::{family_distribution, type2_moment, LocalOperator, PointedSpace};
use num_traits::{One, Zero};

use common::*;

/// Marginal Cauchy transform `Σ φ(xᵐ) u^{m+1}` of one face of a word table.
fn marginal(d: &WordDistribution, side: Side) -> TruncatedSeries1<Q> {
    let n = d.max_len();
    TruncatedSeries1::from_fn(n + 1, |i| {
        if i == 0 {
            Q::zero()
        } else {
            d.moment(&vec![side; i - 1]).unwrap()
        }
    })
}

#[test]
fn marginals_follow_reciprocal_composition() {
    // Each face of the convolution is the univariate monotone convolution:
    // F of the sum is F₁∘F₂.
    let mut r = rng(21);
    for _ in 0..10 {
        let d1 = random_words(&mut r, 5);
        let d2 = random_words(&mut r, 5);
        let sum = convolve(&d1, &d2).unwrap();
        for side in [Side::Left, Side::Right] {
            let f1 = f_transform(&marginal(&d1, side)).unwrap();
            let f2 = f_transform(&marginal(&d2, side)).unwrap();
            let want = marginal_from_f(&compose_f(&f1, &f2).unwrap()).unwrap();
            assert_eq!(want, marginal(&sum, side));
        }
    }
}

#[test]
fn dot_operation_is_repeated_self_convolution() {
    let mut r = rng(22);
    for _ in 0..5 {
        let d = random_words(&mut r, 4);
        let three = convolve(&convolve(&d, &d).unwrap(), &d).unwrap();
        assert_eq!(dot_distribution(&d, 3).unwrap(), three);
    }
}

fn cofactor_det(m: &[Vec<Q>]) -> Q {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = Q::zero();
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[test]
fn bareiss_matches_cofactor_expansion() {
    let mut r = rng(23);
    for dim in 1..=6 {
        for _ in 0..5 {
            let x = RationalMatrix::from_fn(dim, |_, _| small_q(&mut r));
            assert_eq!(det_exact(&x), cofactor_det(x.rows()));
        }
    }
    // A leading zero forces a row swap.
    let x = RationalMatrix::new(vec![
        vec![qi(0), qi(2), qi(1)],
        vec![qi(3), qi(0), qi(1)],
        vec![qi(1), qi(1), qi(0)],
    ])
    .unwrap();
    assert_eq!(det_exact(&x), cofactor_det(x.rows()));
}

#[test]
fn uncorrelated_clt_is_a_product_of_arcsine_laws() {
    // Arcsine law of variance α: M_{2k} = C(2k, k)·(α/2)^k, odd moments 0.
    let alpha = q(1, 3);
    let beta = qi(2);
    let arcsine = |var: &Q, m: usize| -> Q {
        if m % 2 == 1 {
            return Q::zero();
        }
        let k = m / 2;
        let half = var / qi(2);
        (0..k).fold(binomial(&qi(m as i64), k), |acc, _| acc * &half)
    };
    let spec = LimitSpec::Clt { alpha: alpha.clone(), beta: beta.clone(), gamma: qi(0) };
    let k = limit_cumulants(&spec, 6).unwrap();
    let g = evolve_joint(&generating_functions(&k, 6).unwrap())
        .unwrap()
        .moments_at(&Q::one())
        .unwrap();
    for m in 0..=6 {
        for n in 0..=6 {
            assert_eq!(*g.get(m, n), arcsine(&alpha, m) * arcsine(&beta, n), "({m},{n})");
        }
    }
}

#[test]
fn compound_generating_series_matches_cumulant_table() {
    let k = limit_cumulants(&LimitSpec::Compound { lambda: q(2, 3), nu: tau() }, 5).unwrap();
    let direct = compound_poisson_generating(&q(2, 3), &tau(), 5).unwrap();
    assert_eq!(generating_functions(&k, 5).unwrap().atilde, direct);
}

#[test]
fn small_bm_counts() {
    for w in ["L", "R"] {
        assert_eq!(enumerate_bm(&ChiWord::parse(w).unwrap()).unwrap().len(), 1);
    }
    for w in ["LL", "LR", "RL", "RR"] {
        assert_eq!(enumerate_bm(&ChiWord::parse(w).unwrap()).unwrap().len(), 3);
    }
    // Brute force for n = 3: every set partition with every block ranking,
    // filtered by the monotone rule in ≺_χ order (1, 3, 2 for LRL).
    let order = [0usize, 2, 1];
    let mut rank_of = [0usize; 3];
    for (i, &p) in order.iter().enumerate() {
        rank_of[p] = i;
    }
    let mut count = 0;
    for p in set_partitions(3) {
        let k = p.len();
        let nc = (0..k).all(|i| (0..k).all(|j| i == j || !crosses(&rank_of, &p[i], &p[j])));
        if !nc {
            continue;
        }
        for perm in permutations(k) {
            let ok = (0..k).all(|v| {
                (0..k).all(|w| {
                    let inside = v != w
                        && p[v].iter().all(|&x| {
                            p[w].iter().any(|&y| rank_of[y] < rank_of[x])
                                && p[w].iter().any(|&y| rank_of[y] > rank_of[x])
                        });
                    !inside || perm[v] > perm[w]
                })
            });
            if ok {
                count += 1;
            }
        }
    }
    assert_eq!(count, 12);
    assert_eq!(enumerate_bm(&ChiWord::parse("LRL").unwrap()).unwrap().len(), count);
}

fn op(family: usize, rows: [[i64; 2]; 2]) -> LocalOperator {
    LocalOperator::new(
        family,
        rows.iter().map(|row| row.iter().map(|&x| qi(x)).collect()).collect(),
    )
    .unwrap()
}

fn identity(family: usize) -> LocalOperator {
    op(family, [[1, 0], [0, 1]])
}

#[test]
fn right_type2_families_are_anti_monotone() {
    let spaces = vec![PointedSpace::new(2).unwrap(); 3];
    let rights = [op(0, [[1, 2], [-1, 3]]), op(1, [[-2, 1], [2, 1]]), op(2, [[3, 1], [1, -2]])];
    // Reversing the family order turns the right family into a monotone one.
    let reversed = OrderedFamily::new(
        (0..3)
            .rev()
            .map(|k| family_distribution(&identity(k), &rights[k], 5).unwrap())
            .collect(),
    )
    .unwrap();
    for len in 1..=5usize {
        for code in 0..3usize.pow(len as u32) {
            let labels: Vec<usize> = (0..len).map(|i| code / 3usize.pow(i as u32) % 3).collect();
            let word: Vec<(Side, LocalOperator)> =
                labels.iter().map(|&k| (Side::Right, rights[k].clone())).collect();
            let got = type2_moment(&spaces, &word).unwrap();
            let chi = ChiWord::new(vec![Side::Right; len]).unwrap();
            let omega = OmegaWord(labels.iter().map(|&k| 3 - k).collect());
            assert_eq!(got, multi_family_moment(&reversed, &chi, &omega).unwrap(), "{labels:?}");
        }
    }
}

#[test]
fn type2_differs_from_type1_on_abab() {
    let spaces = vec![PointedSpace::new(2).unwrap(); 2];
    let a_op = op(0, [[2, 3], [-1, 5]]);
    let b_op = op(1, [[-3, 1], [4, 2]]);
    let a = (Side::Left, a_op.clone());
    let b = (Side::Right, b_op.clone());
    let type2 = type2_moment(&spaces, &[a.clone(), b.clone(), a, b]).unwrap();
    let fam = OrderedFamily::new(vec![
        family_distribution(&a_op, &identity(0), 4).unwrap(),
        family_distribution(&identity(1), &b_op, 4).unwrap(),
    ])
    .unwrap();
    let type1 = multi_family_moment(
        &fam,
        &ChiWord::parse("LRLR").unwrap(),
        &OmegaWord(vec![1, 2, 1, 2]),
    )
    .unwrap();
    assert_ne!(type1, type2);
}

#[test]
fn type2_single_family_left_moments() {
    let spaces = vec![PointedSpace::new(2).unwrap()];
    let a = op(0, [[1, 2], [3, 4]]);
    let b = op(0, [[0, 1], [5, -1]]);
    let d = family_distribution(&a, &b, 4).unwrap();
    for len in 1..=4 {
        let w = vec![Side::Left; len];
        let word = vec![(Side::Left, a.clone()); len];
        assert_eq!(type2_moment(&spaces, &word).unwrap(), d.moment(&w).unwrap());
    }
}
