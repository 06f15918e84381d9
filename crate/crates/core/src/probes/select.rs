//! Resolution of probe energies to eigenmode indices.

use crate::error::{Error, Result};
use crate::models::ModeBasis;
use crate::probes::ProbeSpec;

/// Index of the mode nearest to `energy` (absolute scale), unique within
/// `tol`. Two candidates inside the window are an error, as is a nearest
/// mode farther away than `tol`.
pub fn select_mode(basis: &ModeBasis, energy: f64, tol: f64) -> Result<usize> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "selection tolerance must be positive, got {tol}"
        )));
    }
    let candidates: Vec<usize> = basis
        .energies()
        .iter()
        .enumerate()
        .filter_map(|(k, &e)| ((e - energy).abs() <= tol).then_some(k))
        .collect();
    match candidates.len() {
        0 => {
            let (nearest, distance) = basis
                .energies()
                .iter()
                .enumerate()
                .map(|(k, &e)| (k, (e - energy).abs()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("mode basis is nonempty");
            Err(Error::NoModeAtEnergy {
                target: energy,
                nearest,
                distance,
                tol,
            })
        }
        1 => Ok(candidates[0]),
        _ => Err(Error::AmbiguousModeSelection {
            first: candidates[0],
            second: candidates[1],
            target: energy,
            tol,
        }),
    }
}

/// Resolve a probe to a mode index. Probe energies are relative to the
/// chemical potential. When several modes tie within the tolerance (as in
/// degenerate pairing blocks) the probe's site settles the tie, provided it
/// discriminates; otherwise the ambiguity error stands.
pub fn select_mode_for_probe(basis: &ModeBasis, probe: &ProbeSpec, tol: f64) -> Result<usize> {
    let target = basis.fermi_energy() + probe.energy;
    match select_mode(basis, target, tol) {
        Ok(k) => Ok(k),
        Err(Error::AmbiguousModeSelection { first, second, .. }) => {
            let candidates: Vec<usize> = basis
                .energies()
                .iter()
                .enumerate()
                .filter_map(|(k, &e)| ((e - target).abs() <= tol).then_some(k))
                .collect();
            let mut scored: Vec<(usize, f64)> = candidates
                .iter()
                .map(|&k| (k, basis.transform()[(probe.site, k)].norm()))
                .collect();
            scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            if scored[0].1 > scored[1].1 + 1e-9 {
                Ok(scored[0].0)
            } else {
                Err(Error::AmbiguousModeSelection {
                    first,
                    second,
                    target,
                    tol,
                })
            }
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelConfig;
    use crate::probes::ProbeSpec;

    #[test]
    fn bonding_mode_of_the_dimer() {
        let model = ModelConfig::FreeChain {
            sites: 2,
            hopping: 1.0,
        }
        .build()
        .unwrap();
        let k = select_mode(&model.mode_basis, -1.0, 0.1).unwrap();
        assert_eq!(k, 0);
    }

    #[test]
    fn midway_energy_with_wide_tolerance_is_ambiguous() {
        let model = ModelConfig::FreeChain {
            sites: 2,
            hopping: 1.0,
        }
        .build()
        .unwrap();
        assert!(matches!(
            select_mode(&model.mode_basis, 0.0, 10.0),
            Err(Error::AmbiguousModeSelection { .. })
        ));
    }

    #[test]
    fn far_energy_is_rejected() {
        let model = ModelConfig::FreeChain {
            sites: 2,
            hopping: 1.0,
        }
        .build()
        .unwrap();
        assert!(matches!(
            select_mode(&model.mode_basis, 5.0, 0.2),
            Err(Error::NoModeAtEnergy { .. })
        ));
    }

    #[test]
    fn matches_exhaustive_nearest_search() {
        let model = ModelConfig::FreeChain {
            sites: 8,
            hopping: 1.3,
        }
        .build()
        .unwrap();
        let energies = model.mode_basis.energies().to_vec();
        for &target in &[-2.5, -1.0, -0.2, 0.4, 1.9, 2.55] {
            // Linear-scan oracle.
            let nearest = (0..energies.len())
                .min_by(|&a, &b| {
                    (energies[a] - target)
                        .abs()
                        .partial_cmp(&(energies[b] - target).abs())
                        .unwrap()
                })
                .unwrap();
            let dist = (energies[nearest] - target).abs();
            let second = (0..energies.len())
                .filter(|&k| k != nearest)
                .map(|k| (energies[k] - target).abs())
                .fold(f64::INFINITY, f64::min);
            // Tolerance window tight enough to exclude the runner-up.
            let tol = 0.5 * (dist + second);
            if dist < tol {
                assert_eq!(select_mode(&model.mode_basis, target, tol).unwrap(), nearest);
            }
        }
    }

    #[test]
    fn degenerate_pair_resolved_by_site() {
        use crate::models::PairSpec;
        let model = ModelConfig::PairingToy {
            pairs: vec![PairSpec { xi: 0.3, delta: 1.0 }],
        }
        .build()
        .unwrap();
        // Both modes of the pair sit at xi = 0.3; the site settles it.
        let p0 = ProbeSpec::particle(0.3, 0.05, 0);
        let p1 = ProbeSpec::particle(0.3, 0.05, 1);
        let k0 = select_mode_for_probe(&model.mode_basis, &p0, 0.05).unwrap();
        let k1 = select_mode_for_probe(&model.mode_basis, &p1, 0.05).unwrap();
        assert_ne!(k0, k1);
        // Strict selection without site information stays an error.
        assert!(select_mode(&model.mode_basis, 0.3, 0.05).is_err());
    }
}
