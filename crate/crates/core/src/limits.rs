//! Cumulant tables of the limit laws and finite-N checks of the limit
//! theorems.

use num_traits::{One, Signed, Zero};

use crate::convolution::grid_convolve_power;
use crate::cumulants::CumulantTable;
use crate::distributions::{grid_from_measure, AtomicPlanarMeasure, GridDistribution};
use crate::error::{Error, Result};
use crate::positivity::{det_exact, moment_matrix, psd_check, PsdVerdict, RationalMatrix};
use crate::rational::{qi, Q};
use crate::series::{evolve_joint, generating_functions, grid_cumulants};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitSpec {
    /// `K_{2,0} = α`, `K_{0,2} = β`, `K_{1,1} = γ`.
    Clt { alpha: Q, beta: Q, gamma: Q },
    /// `K_{m,n} = λ αᵐ βⁿ`.
    Poisson { lambda: Q, alpha: Q, beta: Q },
    /// `K_{m,n} = λ ∫ sᵐ tⁿ dν`.
    Compound { lambda: Q, nu: AtomicPlanarMeasure },
}

impl LimitSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LimitSpec::Clt { alpha, beta, .. } => {
                if !alpha.is_positive() || !beta.is_positive() {
                    return Err(Error::invalid("central limit needs α, β > 0"));
                }
            }
            LimitSpec::Poisson { lambda, .. } | LimitSpec::Compound { lambda, .. } => {
                if !lambda.is_positive() {
                    return Err(Error::invalid("Poisson limits need λ > 0"));
                }
            }
        }
        Ok(())
    }

    /// Whether `γ² ≤ αβ` for a central limit spec.
    pub fn correlation_admissible(&self) -> Option<bool> {
        match self {
            LimitSpec::Clt { alpha, beta, gamma } => Some(gamma * gamma <= alpha * beta),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LimitSpec::Clt { .. } => "clt",
            LimitSpec::Poisson { .. } => "poisson",
            LimitSpec::Compound { .. } => "compound",
        }
    }

    /// The jump measure `ν` of a Poisson-type spec.
    fn jump_measure(&self) -> Option<AtomicPlanarMeasure> {
        match self {
            LimitSpec::Poisson { alpha, beta, .. } => {
                Some(AtomicPlanarMeasure::point_mass(alpha.clone(), beta.clone()))
            }
            LimitSpec::Compound { nu, .. } => Some(nu.clone()),
            LimitSpec::Clt { .. } => None,
        }
    }
}

fn pow(x: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * x)
}

/// Grid cumulants of the limit law up to `order`.
pub fn limit_cumulants(spec: &LimitSpec, order: usize) -> Result<CumulantTable> {
    spec.validate()?;
    Ok(match spec {
        LimitSpec::Clt { alpha, beta, gamma } => {
            CumulantTable::grid_from_fn(order, |m, n| match (m, n) {
                (2, 0) => alpha.clone(),
                (0, 2) => beta.clone(),
                (1, 1) => gamma.clone(),
                _ => Q::zero(),
            })
        }
        LimitSpec::Poisson { lambda, alpha, beta } => {
            CumulantTable::grid_from_fn(order, |m, n| lambda * pow(alpha, m) * pow(beta, n))
        }
        LimitSpec::Compound { lambda, nu } => {
            CumulantTable::grid_from_fn(order, |m, n| lambda * nu.raw_moment(m, n))
        }
    })
}

/// Cumulants → moments (flow at t = 1) → moment matrix → verdict.
#[derive(Clone, Debug)]
pub struct LimitPipeline {
    pub cumulants: Vec<Vec<Q>>,
    pub moments: GridDistribution,
    pub matrix: Option<RationalMatrix>,
    pub determinant: Option<Q>,
    pub verdict: Option<PsdVerdict>,
}

/// Runs the pipeline with an `(n+1)² × (n+1)²` moment matrix; needs
/// `2n ≤ order`. `n = 0` skips the positivity step.
pub fn limit_pipeline(spec: &LimitSpec, order: usize, n: usize) -> Result<LimitPipeline> {
    if order == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let k = limit_cumulants(spec, order)?;
    let evo = evolve_joint(&generating_functions(&k, order)?)?;
    let moments = evo.moments_at(&Q::one())?;
    let (matrix, determinant, verdict) = if n >= 1 {
        let x = moment_matrix(&moments, n)?;
        let det = det_exact(&x);
        let verdict = psd_check(&x)?;
        (Some(x), Some(det), Some(verdict))
    } else {
        (None, None, None)
    };
    Ok(LimitPipeline {
        cumulants: k.grid_rows(order)?,
        moments,
        matrix,
        determinant,
        verdict,
    })
}

/// A centred pair with covariance entries `(α, β, γ)`, built from atoms at
/// `(±1, 0)`, `(0, ±1)`, `(±1, ±1)` and the origin. The weights are rational
/// but may be negative when `|γ| > min(α, β)` or `α + β − |γ| > 1`.
pub fn clt_generator(alpha: &Q, beta: &Q, gamma: &Q) -> AtomicPlanarMeasure {
    let half = Q::new(1.into(), 2.into());
    let g = gamma.abs();
    // Masses of each symmetric pair of atoms.
    let wc = (gamma + &g) * &half; // (1,1) and (−1,−1)
    let wd = (&g - gamma) * &half; // (1,−1) and (−1,1)
    let wa = alpha - &g; // (±1, 0)
    let wb = beta - &g; // (0, ±1)
    let w0 = Q::one() - (&wa + &wb + &wc + &wd);
    let p = |s: i64, t: i64, w: &Q| (qi(s), qi(t), w.clone() * &half);
    AtomicPlanarMeasure::from_weighted_points([
        p(1, 0, &wa),
        p(-1, 0, &wa),
        p(0, 1, &wb),
        p(0, -1, &wb),
        p(1, 1, &wc),
        p(-1, -1, &wc),
        p(1, -1, &wd),
        p(-1, 1, &wd),
        (qi(0), qi(0), w0),
    ])
}

/// `(1 − λ/N)·δ_(0,0) + (λ/N)·ν`, one row of the triangular array.
pub fn poisson_generator(lambda: &Q, nu: &AtomicPlanarMeasure, n: usize) -> AtomicPlanarMeasure {
    let p = lambda / qi(n as i64);
    let mut points: Vec<(Q, Q, Q)> = nu
        .atoms()
        .iter()
        .map(|a| (a.s.clone(), a.t.clone(), &a.w * &p / nu.total_mass()))
        .collect();
    points.push((Q::zero(), Q::zero(), Q::one() - &p));
    AtomicPlanarMeasure::from_weighted_points(points)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceEntry {
    pub m: usize,
    pub n: usize,
    /// `K_{m,n}` of the unnormalised N-fold sum.
    pub sum_cumulant: Q,
    pub limit: Q,
    /// For the central limit: the squared deviation of the normalised
    /// cumulant, `(N^{-(m+n)/2} K_{m,n}(sum) − K_lim)²`, which is rational.
    /// For Poisson limits: `K_{m,n}(sum) − K_lim`.
    pub deviation: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub kind: &'static str,
    pub n: usize,
    /// `K(N-fold sum) = N · K(generator)` on every entry.
    pub extensive: bool,
    /// Central limit only: every squared deviation with `m + n ≥ 3` equals
    /// `N^{-(m+n-2)} K_{m,n}(generator)²`.
    pub scaling_exact: Option<bool>,
    pub entries: Vec<ConvergenceEntry>,
    pub max_abs_deviation: Q,
}

/// Exact cumulants of the N-fold convolution of a generating pair against
/// the limit table. The central-limit generator is [`clt_generator`]; the
/// Poisson ones are [`poisson_generator`] with `ν` normalised to mass 1 and
/// `λ` multiplied by the mass of `ν`.
pub fn limit_convergence_check(spec: &LimitSpec, n: usize, order: usize) -> Result<ConvergenceReport> {
    spec.validate()?;
    if n == 0 || order == 0 {
        return Err(Error::invalid("N and order must be at least 1"));
    }
    let limit = limit_cumulants(spec, order)?;
    let generator = match spec {
        LimitSpec::Clt { alpha, beta, gamma } => clt_generator(alpha, beta, gamma),
        LimitSpec::Poisson { lambda, .. } | LimitSpec::Compound { lambda, .. } => {
            let nu = spec.jump_measure().expect("Poisson-type spec");
            poisson_generator(&(lambda * nu.total_mass()), &nu, n)
        }
    };
    let g = grid_from_measure(&generator, order);
    let k1 = grid_cumulants(&g)?;
    let kn = grid_cumulants(&grid_convolve_power(&g, n)?)?;
    let nq = qi(n as i64);
    let is_clt = matches!(spec, LimitSpec::Clt { .. });
    let mut extensive = true;
    let mut scaling_exact = true;
    let mut entries = Vec::new();
    let mut max_abs = Q::zero();
    for m in 0..=order {
        for j in 0..=order {
            if m + j == 0 {
                continue;
            }
            let one = k1.grid(m, j)?;
            let sum = kn.grid(m, j)?;
            let lim = limit.grid(m, j)?;
            extensive &= sum == &one * &nq;
            let deviation = if is_clt {
                // The limit vanishes off m + n = 2, so the squared deviation
                // there is N^{-(m+n)} K(sum)².
                let dev = if m + j == 2 {
                    let d = &sum / &nq - &lim;
                    &d * &d
                } else {
                    &sum * &sum / pow(&nq, m + j)
                };
                if m + j >= 3 {
                    scaling_exact &= dev == &one * &one / pow(&nq, m + j - 2);
                }
                dev
            } else {
                &sum - &lim
            };
            if deviation.abs() > max_abs {
                max_abs = deviation.abs();
            }
            entries.push(ConvergenceEntry {
                m,
                n: j,
                sum_cumulant: sum,
                limit: lim,
                deviation,
            });
        }
    }
    Ok(ConvergenceReport {
        kind: spec.kind(),
        n,
        extensive,
        scaling_exact: is_clt.then_some(scaling_exact),
        entries,
        max_abs_deviation: max_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Atom;
    use crate::rational::q;

    fn tau() -> AtomicPlanarMeasure {
        AtomicPlanarMeasure::new(vec![
            Atom { s: qi(1), t: qi(1), w: qi(15) },
            Atom { s: qi(-1), t: qi(1), w: qi(15) },
            Atom { s: qi(1), t: qi(-1), w: qi(15) },
        ])
        .unwrap()
    }

    #[test]
    fn limit_tables() {
        let clt = limit_cumulants(
            &LimitSpec::Clt { alpha: qi(1), beta: qi(1), gamma: q(1, 3) },
            4,
        )
        .unwrap();
        assert_eq!(clt.grid(2, 0).unwrap(), qi(1));
        assert_eq!(clt.grid(1, 1).unwrap(), q(1, 3));
        assert_eq!(clt.grid(2, 1).unwrap(), qi(0));
        let p = limit_cumulants(
            &LimitSpec::Poisson { lambda: qi(3), alpha: qi(2), beta: q(1, 2) },
            3,
        )
        .unwrap();
        assert_eq!(p.grid(2, 1).unwrap(), qi(3) * qi(4) * q(1, 2));
        let c = limit_cumulants(&LimitSpec::Compound { lambda: qi(1), nu: tau() }, 3).unwrap();
        assert_eq!(c.grid(2, 3).unwrap(), qi(15));
        assert_eq!(c.grid(1, 0).unwrap(), qi(15));
        assert!(limit_cumulants(
            &LimitSpec::Clt { alpha: qi(0), beta: qi(1), gamma: qi(0) },
            2
        )
        .is_err());
    }

    #[test]
    fn compound_pipeline() {
        let p = limit_pipeline(&LimitSpec::Compound { lambda: qi(1), nu: tau() }, 4, 1).unwrap();
        assert_eq!(*p.moments.get(2, 2), q(131715, 2));
        assert_eq!(p.determinant, Some(qi(-857250)));
        assert!(!p.verdict.unwrap().is_psd);
        assert!(limit_pipeline(&LimitSpec::Compound { lambda: qi(1), nu: tau() }, 3, 2).is_err());
    }

    #[test]
    fn generator_has_requested_covariance() {
        let g = grid_from_measure(&clt_generator(&q(1, 2), &q(1, 3), &q(-1, 5)), 2);
        assert_eq!(*g.get(1, 0), qi(0));
        assert_eq!(*g.get(0, 1), qi(0));
        assert_eq!(*g.get(2, 0), q(1, 2));
        assert_eq!(*g.get(0, 2), q(1, 3));
        assert_eq!(*g.get(1, 1), q(-1, 5));
        let p = poisson_generator(&qi(2), &AtomicPlanarMeasure::point_mass(qi(1), qi(3)), 10);
        assert_eq!(p.total_mass(), qi(1));
        assert_eq!(p.raw_moment(1, 1), q(3, 5));
    }

    #[test]
    fn clt_scaling_is_exact() {
        let spec = LimitSpec::Clt { alpha: q(1, 2), beta: q(1, 2), gamma: q(1, 4) };
        let r = limit_convergence_check(&spec, 3, 3).unwrap();
        assert!(r.extensive);
        assert_eq!(r.scaling_exact, Some(true));
        let e = r.entries.iter().find(|e| (e.m, e.n) == (1, 1)).unwrap();
        assert!(e.deviation.is_zero());
    }

    #[test]
    fn single_copy_reports_generator() {
        let spec = LimitSpec::Poisson { lambda: qi(1), alpha: qi(1), beta: qi(2) };
        let r = limit_convergence_check(&spec, 1, 2).unwrap();
        assert!(r.extensive);
        let g = grid_cumulants(&grid_from_measure(
            &poisson_generator(&qi(1), &AtomicPlanarMeasure::point_mass(qi(1), qi(2)), 1),
            2,
        ))
        .unwrap();
        for e in &r.entries {
            assert_eq!(e.sum_cumulant, g.grid(e.m, e.n).unwrap());
        }
    }
}
