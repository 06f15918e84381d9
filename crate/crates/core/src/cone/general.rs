//! Entropy-minimal decompositions over a designated pure set.
//!
//! The feasible decompositions of a target functional form a polytope, and
//! the Shannon entropy is strictly concave, so the infimum is attained at an
//! extreme point. Extreme points are basic feasible solutions of the
//! equality system, which are enumerated over all supports up to the rank of
//! the pure-state matrix.

use nalgebra::{DMatrix, DVector};

use crate::cone::closed_form::shannon_entropy;
use crate::cone::functional::{ConeSpec, StateFunctional, DISTINCT_TOL};
use crate::error::{Error, Result};

/// Per-component feasibility tolerance of the equality constraints.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Entropy window within which two optima count as tied.
const TIE_TOL: f64 = 1e-12;

/// Outcome classes of the general solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStatus {
    Ok,
    /// Target coincides with a pure element; entanglement is zero.
    TargetPure,
    /// Target admits no decomposition over the pure set.
    Infeasible,
    /// The two-reference path produced a negative weight ratio.
    NegativeAlpha,
}

/// Entropy-minimal decomposition report.
#[derive(Debug, Clone)]
pub struct EntanglementReport {
    /// Minimal Shannon entropy in nats; meaningful for `Ok` and
    /// `TargetPure`.
    pub entanglement: f64,
    /// Weights over the cone's pure set (full-length vector).
    pub weights: Vec<f64>,
    /// Indices with strictly positive weight.
    pub support: Vec<usize>,
    /// False when distinct supports tie at the optimum.
    pub unique: bool,
    /// Weight ratio of the two-reference path, when that path was used.
    pub alpha: Option<f64>,
    pub status: ReportStatus,
}

impl EntanglementReport {
    fn infeasible(m: usize) -> Self {
        Self {
            entanglement: 0.0,
            weights: vec![0.0; m],
            support: Vec::new(),
            unique: true,
            alpha: None,
            status: ReportStatus::Infeasible,
        }
    }
}

fn pure_matrix(cone: &ConeSpec) -> DMatrix<f64> {
    let d = cone.functional_dim();
    let m = cone.len();
    DMatrix::from_fn(d, m, |r, c| cone.pure()[c].value(r))
}

fn numerical_rank(svd: &nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>) -> usize {
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = smax * 1e-12 + 1e-14;
    svd.singular_values.iter().filter(|&&s| s > tol).count()
}

/// All index subsets of `{0..m}` with sizes `1..=kmax`, in lexicographic
/// order.
fn supports(m: usize, kmax: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if left == 0 {
            return;
        }
        for i in start..m {
            current.push(i);
            rec(i + 1, m, left - 1, current, out);
            current.pop();
        }
    }
    rec(0, m, kmax, &mut current, &mut out);
    out
}

/// Solve `inf S(p)` subject to `sum p_a lambda_a = target`, `p >= 0`.
pub fn entanglement_general(
    target: &StateFunctional,
    cone: &ConeSpec,
) -> Result<EntanglementReport> {
    let d = cone.functional_dim();
    let m = cone.len();
    if target.dim() != d {
        return Err(Error::DimensionMismatch {
            got: target.dim(),
            expected: d,
        });
    }

    // Exact hit on a pure element short-circuits the search.
    if let Some(hit) = cone
        .pure()
        .iter()
        .position(|p| p.max_distance(target) <= DISTINCT_TOL)
    {
        let mut weights = vec![0.0; m];
        weights[hit] = 1.0;
        return Ok(EntanglementReport {
            entanglement: 0.0,
            weights,
            support: vec![hit],
            unique: true,
            alpha: None,
            status: ReportStatus::TargetPure,
        });
    }

    let a = pure_matrix(cone);
    let b = DVector::from_column_slice(target.values());
    let svd = a.clone().svd(true, true);
    let rank = numerical_rank(&svd);

    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    let mut tied = false;

    for support in supports(m, rank.min(m)) {
        let cols = DMatrix::from_fn(d, support.len(), |r, c| a[(r, support[c])]);
        let sub_svd = cols.clone().svd(true, true);
        let Ok(x) = sub_svd.solve(&b, 1e-13) else {
            continue;
        };
        let residual = (&cols * &x - &b).amax();
        if residual > FEASIBILITY_TOL {
            continue;
        }
        if x.iter().any(|&p| p < -FEASIBILITY_TOL) {
            continue;
        }
        let clamped: Vec<f64> = x.iter().map(|&p| p.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > 1e-8 {
            continue;
        }
        let normalized: Vec<f64> = clamped.iter().map(|p| p / total).collect();
        let entropy = shannon_entropy(&normalized)?;

        match &best {
            Some((e, s, _)) => {
                if entropy < e - TIE_TOL {
                    best = Some((entropy, support, normalized));
                    tied = false;
                } else if (entropy - e).abs() <= TIE_TOL && &support != s {
                    // Same-entropy optimum on a different support. Supports
                    // arrive in lexicographic order, so the stored one wins
                    // the tie-break; but a superset describing the same
                    // weights is not a genuine tie.
                    let mut same_weights = true;
                    let mut full = vec![0.0; m];
                    for (k, &idx) in support.iter().enumerate() {
                        full[idx] = normalized[k];
                    }
                    let mut stored = vec![0.0; m];
                    for (k, &idx) in s.iter().enumerate() {
                        stored[idx] = best.as_ref().unwrap().2[k];
                    }
                    for i in 0..m {
                        if (full[i] - stored[i]).abs() > 1e-9 {
                            same_weights = false;
                            break;
                        }
                    }
                    if !same_weights {
                        tied = true;
                    }
                }
            }
            None => best = Some((entropy, support, normalized)),
        }
    }

    let Some((entropy, support, weights_on_support)) = best else {
        return Ok(EntanglementReport::infeasible(m));
    };

    let mut weights = vec![0.0; m];
    for (k, &idx) in support.iter().enumerate() {
        weights[idx] = weights_on_support[k];
    }
    let support: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter_map(|(i, &w)| (w > 0.0).then_some(i))
        .collect();

    Ok(EntanglementReport {
        entanglement: entropy,
        weights,
        support,
        unique: !tied,
        alpha: None,
        status: ReportStatus::Ok,
    })
}

/// True iff the functional coincides with a pure element or admits only the
/// trivial decomposition. Duplicate pure entries are removed first.
pub fn purity_check(functional: &StateFunctional, cone: &ConeSpec) -> Result<bool> {
    let dedup = ConeSpec::deduplicated(cone.pure().to_vec())?;
    if dedup
        .pure()
        .iter()
        .any(|p| p.max_distance(functional) <= DISTINCT_TOL)
    {
        let report = entanglement_general(functional, &dedup)?;
        return Ok(match report.status {
            ReportStatus::TargetPure => true,
            ReportStatus::Ok => report.entanglement < 1e-10,
            _ => true,
        });
    }
    let report = entanglement_general(functional, &dedup)?;
    Ok(matches!(report.status, ReportStatus::Ok) && report.entanglement < 1e-10)
}

/// Exhaustive entropy minimum over the feasible polytope on a grid of the
/// stated step. Independent check of the vertex principle: parameterizes the
/// affine solution set through the nullspace of the pure-state matrix and
/// scans it, never calling the vertex enumeration.
pub fn polytope_grid_entropy(
    target: &StateFunctional,
    cone: &ConeSpec,
    step: f64,
) -> Result<Option<f64>> {
    let m = cone.len();
    let a = pure_matrix(cone);
    let b = DVector::from_column_slice(target.values());

    let svd = a.clone().svd(true, true);
    let rank = numerical_rank(&svd);
    let p0 = svd
        .solve(&b, 1e-13)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    if (&a * &p0 - &b).amax() > FEASIBILITY_TOL {
        return Ok(None);
    }

    let free = m - rank;
    let feasible_entropy = |p: &[f64]| -> Option<f64> {
        if p.iter().any(|&x| x < -1e-9) {
            return None;
        }
        let clamped: Vec<f64> = p.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return None;
        }
        let normalized: Vec<f64> = clamped.iter().map(|x| x / total).collect();
        shannon_entropy(&normalized).ok()
    };

    if free == 0 {
        let p: Vec<f64> = p0.iter().copied().collect();
        return Ok(feasible_entropy(&p));
    }

    // Orthonormal nullspace basis from the Gram matrix of the pure set.
    let gram = a.transpose() * &a;
    let gram_eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| {
        gram_eig.eigenvalues[i]
            .partial_cmp(&gram_eig.eigenvalues[j])
            .unwrap()
    });
    let null: Vec<DVector<f64>> = order[..free]
        .iter()
        .map(|&i| gram_eig.eigenvectors.column(i).into_owned())
        .collect();

    // Weights live in the unit simplex, so the search box is bounded by the
    // distance from the particular solution to any simplex point.
    let radius = 1.0 + p0.norm();
    let steps = (2.0 * radius / step).ceil() as i64;

    let mut best: Option<f64> = None;
    let mut point = vec![0.0f64; m];
    match free {
        1 => {
            for i in -steps..=steps {
                let t = i as f64 * step;
                for (k, val) in point.iter_mut().enumerate() {
                    *val = p0[k] + t * null[0][k];
                }
                if let Some(e) = feasible_entropy(&point) {
                    best = Some(best.map_or(e, |b: f64| b.min(e)));
                }
            }
        }
        2 => {
            for i in -steps..=steps {
                let t0 = i as f64 * step;
                for j in -steps..=steps {
                    let t1 = j as f64 * step;
                    for (k, val) in point.iter_mut().enumerate() {
                        *val = p0[k] + t0 * null[0][k] + t1 * null[1][k];
                    }
                    if let Some(e) = feasible_entropy(&point) {
                        best = Some(best.map_or(e, |b: f64| b.min(e)));
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "grid oracle supports at most two free directions, got {free}"
            )));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::closed_form::{decompose_unique, e1_closed_form};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(values: Vec<f64>) -> StateFunctional {
        StateFunctional::new(values, "t").unwrap()
    }

    fn cone(pure: Vec<Vec<f64>>) -> ConeSpec {
        ConeSpec::new(
            pure.into_iter()
                .enumerate()
                .map(|(i, v)| StateFunctional::new(v, format!("p{i}")).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn pure_target_reports_zero() {
        let c = cone(vec![vec![1.0, 0.0], vec![1.0, 1.0]]);
        let r = entanglement_general(&f(vec![1.0, 1.0]), &c).unwrap();
        assert_eq!(r.status, ReportStatus::TargetPure);
        assert_eq!(r.entanglement, 0.0);
        assert_eq!(r.support, vec![1]);
        assert_eq!(r.weights, vec![0.0, 1.0]);
    }

    #[test]
    fn two_state_cone_matches_closed_form() {
        let c = cone(vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        let target = f(vec![1.0, 0.5]);
        let r = entanglement_general(&target, &c).unwrap();
        let d = decompose_unique(&target, &c.pure()[0], &c.pure()[1]).unwrap();
        let expected = e1_closed_form(d.alpha).unwrap();
        assert!((r.entanglement - expected).abs() < 1e-12);
        assert_eq!(r.status, ReportStatus::Ok);
    }

    #[test]
    fn three_element_vertex_example() {
        // Supports {0,1} and {0,2} are feasible; {0,2} wins with
        // p = (0.75, 0.25) and S = 0.5623351.
        let c = cone(vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]);
        let r = entanglement_general(&f(vec![1.0, 0.5]), &c).unwrap();
        assert_eq!(r.status, ReportStatus::Ok);
        assert!((r.entanglement - 0.562_335_144_618_808_3).abs() < 1e-12);
        assert_eq!(r.support, vec![0, 2]);
        assert!((r.weights[0] - 0.75).abs() < 1e-10);
        assert!((r.weights[2] - 0.25).abs() < 1e-10);
        assert!(r.unique);
    }

    #[test]
    fn infeasible_target_is_reported() {
        let c = cone(vec![vec![1.0, 0.0], vec![1.0, 1.0]]);
        let r = entanglement_general(&f(vec![1.0, 3.0]), &c).unwrap();
        assert_eq!(r.status, ReportStatus::Infeasible);
    }

    #[test]
    fn enlargement_never_increases_entanglement() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..30 {
            let base: Vec<Vec<f64>> = (0..3)
                .map(|_| vec![1.0, rng.random::<f64>() * 2.0 - 1.0])
                .collect();
            let mut distinct = base.clone();
            distinct.dedup_by(|a, b| (a[1] - b[1]).abs() < 1e-6);
            if distinct.len() < 3 {
                continue;
            }
            let small = cone(distinct.clone());
            // Mix a strictly interior target.
            let t = 0.3 * distinct[0][1] + 0.7 * distinct[1][1];
            let target = f(vec![1.0, t]);
            let r_small = entanglement_general(&target, &small).unwrap();
            let mut extended = distinct.clone();
            extended.push(vec![1.0, rng.random::<f64>() * 2.0 - 1.0]);
            let Ok(big) = ConeSpec::new(
                extended
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| StateFunctional::new(v, format!("q{i}")).unwrap())
                    .collect(),
            ) else {
                continue;
            };
            let r_big = entanglement_general(&target, &big).unwrap();
            if r_small.status == ReportStatus::Ok
                && (r_big.status == ReportStatus::Ok || r_big.status == ReportStatus::TargetPure)
            {
                assert!(r_big.entanglement <= r_small.entanglement + 1e-9);
            }
        }
    }

    #[test]
    fn grid_oracle_never_beats_vertex_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 8 {
            let m = rng.random_range(3..=4usize);
            let pure: Vec<Vec<f64>> = (0..m)
                .map(|_| vec![1.0, rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0])
                .collect();
            let Ok(c) = ConeSpec::new(
                pure.iter()
                    .enumerate()
                    .map(|(i, v)| StateFunctional::new(v.clone(), format!("p{i}")).unwrap())
                    .collect(),
            ) else {
                continue;
            };
            // Random convex mixture gives a feasible target.
            let mut w: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let mut tv = vec![0.0; 3];
            for (wi, p) in w.iter().zip(&pure) {
                for (t, v) in tv.iter_mut().zip(p) {
                    *t += wi * v;
                }
            }
            let target = f(tv);
            let report = entanglement_general(&target, &c).unwrap();
            if report.status != ReportStatus::Ok {
                continue;
            }
            let grid = polytope_grid_entropy(&target, &c, 1e-3).unwrap();
            let grid_min = grid.expect("feasible target must have feasible grid points");
            assert!(
                grid_min >= report.entanglement - 1e-6,
                "grid {grid_min} beat vertex {by}",
                by = report.entanglement
            );
            tested += 1;
        }
    }

    #[test]
    fn purity_check_cases() {
        let c = cone(vec![vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert!(purity_check(&f(vec![1.0, 0.0]), &c).unwrap());
        assert!(!purity_check(&f(vec![1.0, 0.5]), &c).unwrap());

        // Duplicated pure entries are deduplicated before the test.
        let dup = ConeSpec::deduplicated(vec![
            StateFunctional::new(vec![1.0, 0.0], "a").unwrap(),
            StateFunctional::new(vec![1.0, 0.0], "b").unwrap(),
            StateFunctional::new(vec![1.0, 1.0], "c").unwrap(),
        ])
        .unwrap();
        assert!(purity_check(&f(vec![1.0, 0.0]), &dup).unwrap());
    }
}
