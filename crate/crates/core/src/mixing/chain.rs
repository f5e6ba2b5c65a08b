//! Step-by-step values of the repeated Cauchy-Schwarz argument bounding the
//! fourth power of the mixing defect.
//!
//! For real `f1, f2, f3` with `||f_i||_inf <= 1` and `E f3 = 0`:
//!
//! * `c1 = Theta^4`
//! * `c2 = (E_x [(E_z f1(x z^-1) f3(x z))^2])^2`
//! * `c3 = E_{y,a} [(E_z f3(y z^2) f3(y z a^-1 z))^2]`
//! * `c4 = |E_{x,b,g} [Delta_b f3(x) (Delta_{g^-1 b g} f3 * mu_{g^-1 C(g^-1)})(x)]|`
//! * `split = Gamma + E_{b,g} |E_x Delta_b f3| |E_x Delta_{g^-1 b g} f3|`
//!
//! and `c1 <= c2 <= c3 = c4 <= split <= 2 / sqrt(D)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::chartab::CharacterTable;
use crate::classes::ConjugacyData;
use crate::error::{Error, Result};
use crate::fourier::{mean, sup_norm, GroupFunction};
use crate::group::GroupTable;
use crate::mixing::lemmas::PairEngine;
use crate::mixing::theta::theta_with_degree;
use crate::mixing::{MEAN_ZERO_TOL, SUP_SLACK};

pub const DEFAULT_CHAIN_MAX_ORDER: usize = 120;

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    /// Ordered `(label, value)` pairs: c1, c2, c3, c4, gamma, mean_term,
    /// split, bound.
    pub values: Vec<(String, f64)>,
    /// Ordered `(label, passed)` pairs for each link of the chain.
    pub checks: Vec<(String, bool)>,
    pub passed: bool,
}

impl ChainReport {
    pub fn value(&self, label: &str) -> Option<f64> {
        self.values.iter().find(|(l, _)| l == label).map(|&(_, v)| v)
    }

    /// Largest violation among the links (negative when all hold).
    pub fn worst_excess(&self) -> f64 {
        let v = |l| self.value(l).unwrap_or(f64::NAN);
        [
            v("c1") - v("c2"),
            v("c2") - v("c3"),
            (v("c3") - v("c4")).abs(),
            v("c4") - v("split"),
            v("split") - v("bound"),
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cs_chain_diagnostics(
    group: &GroupTable,
    f1: &GroupFunction,
    f2: &GroupFunction,
    f3: &GroupFunction,
    table: &CharacterTable,
    classes: &ConjugacyData,
    max_order: usize,
    tol: f64,
) -> Result<ChainReport> {
    let n = group.order();
    if n > max_order {
        return Err(Error::Precondition(format!(
            "chain diagnostics limited to order {max_order}, group has order {n}"
        )));
    }
    for (name, f) in [("f1", f1), ("f2", f2), ("f3", f3)] {
        f.check_same_group(group)?;
        if !f.is_real() {
            return Err(Error::Precondition(format!("{name} must be real-valued")));
        }
        if sup_norm(f) > 1.0 + SUP_SLACK {
            return Err(Error::Precondition(format!("{name} has sup norm above 1")));
        }
    }
    if mean(f3).norm() > MEAN_ZERO_TOL {
        return Err(Error::Precondition("f3 must have mean zero".into()));
    }
    let d = table.quasirandom_degree();
    let a: Vec<f64> = f1.values().iter().map(|z| z.re).collect();
    let c: Vec<f64> = f3.values().iter().map(|z| z.re).collect();
    let nf = n as f64;

    let theta = theta_with_degree(group, [f1, f2, f3], d)?.theta;
    let c1 = theta.powi(4);

    let inner2: f64 = (0..n)
        .map(|x| {
            let s: f64 = (0..n)
                .map(|z| a[group.mul(x, group.inv(z))] * c[group.mul(x, z)])
                .sum::<f64>()
                / nf;
            s * s
        })
        .sum::<f64>()
        / nf;
    let c2 = inner2 * inner2;

    let squares: Vec<usize> = (0..n).map(|z| group.mul(z, z)).collect();
    let c3 = (0..n)
        .into_par_iter()
        .map(|y| {
            let mut acc = 0.0;
            for ai in (0..n).map(|a| group.inv(a)) {
                let mut s = 0.0;
                for z in 0..n {
                    let yz = group.mul(y, z);
                    s += c[group.mul(y, squares[z])] * c[group.mul(group.mul(yz, ai), z)];
                }
                s /= nf;
                acc += s * s;
            }
            acc
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum::<f64>()
        / (nf * nf);

    #[derive(Default)]
    struct Sums {
        full: num_complex::Complex64,
        gamma: f64,
        mean_term: f64,
    }
    let engine = PairEngine::new(group, classes, f3, true);
    let per_g: Vec<Sums> = engine.for_all_pairs(|t, acc: &mut Sums| {
        acc.full += t.full;
        acc.gamma += t.centered().norm();
        acc.mean_term += t.mean_term();
    });
    let pairs = nf * nf;
    let c4 = (per_g.iter().map(|s| s.full).sum::<num_complex::Complex64>() / pairs).norm();
    let gamma = per_g.iter().map(|s| s.gamma).sum::<f64>() / pairs;
    let mean_term = per_g.iter().map(|s| s.mean_term).sum::<f64>() / pairs;
    let split = gamma + mean_term;
    let bound = 2.0 / (d as f64).sqrt();

    let checks = vec![
        ("c1 <= c2".to_string(), c1 <= c2 + tol),
        ("c2 <= c3".to_string(), c2 <= c3 + tol),
        ("c3 == c4".to_string(), (c3 - c4).abs() < tol),
        ("c4 <= split".to_string(), c4 <= split + tol),
        ("split <= 2/sqrt(D)".to_string(), split <= bound + tol),
    ];
    let passed = checks.iter().all(|(_, ok)| *ok);
    let values = [
        ("c1", c1),
        ("c2", c2),
        ("c3", c3),
        ("c4", c4),
        ("gamma", gamma),
        ("mean_term", mean_term),
        ("split", split),
        ("bound", bound),
    ]
    .into_iter()
    .map(|(l, v)| (l.to_string(), v))
    .collect();
    Ok(ChainReport {
        values,
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{compute_character_table, DEFAULT_TOL};
    use crate::classes::conjugacy_classes;
    use crate::group::{construct_group, parse_spec};
    use crate::mixing::{random_ensemble, EnsembleKind, EXACT_TOL};

    fn setup(s: &str) -> (GroupTable, ConjugacyData, CharacterTable) {
        let g = construct_group(&parse_spec(s).unwrap()).unwrap();
        let c = conjugacy_classes(&g);
        let t = compute_character_table(&g, &c, 1, DEFAULT_TOL).unwrap();
        (g, c, t)
    }

    /// c3 by literal enumeration of (y, a, z1, z2), as the quadruple
    /// expectation before the square is factored.
    fn c3_quadruple(g: &GroupTable, f3: &[f64]) -> f64 {
        let n = g.order();
        let term = |y: usize, a: usize, z: usize| {
            let b = g.conjugate(g.inv(a), z);
            let x = g.mul(y, g.mul(z, z));
            f3[x] * f3[g.mul(x, b)]
        };
        let mut total = 0.0;
        for y in 0..n {
            for a in 0..n {
                for z1 in 0..n {
                    for z2 in 0..n {
                        total += term(y, a, z1) * term(y, a, z2);
                    }
                }
            }
        }
        total / (n as f64).powi(4)
    }

    #[test]
    fn zero_f3_gives_zero_chain() {
        let (g, c, t) = setup("alt:5");
        let f = &random_ensemble(&g, EnsembleKind::Rademacher, 1, 1).unwrap()[0];
        let zero = GroupFunction::zero(&g);
        let r = cs_chain_diagnostics(&g, f, f, &zero, &t, &c, 120, EXACT_TOL).unwrap();
        assert!(r.passed);
        for label in ["c1", "c2", "c3", "c4", "split"] {
            assert_eq!(r.value(label).unwrap(), 0.0, "{label}");
        }
    }

    #[test]
    fn factored_c3_matches_quadruple_sum() {
        let (g, c, t) = setup("sym:3");
        let fs = random_ensemble(&g, EnsembleKind::Rademacher, 2, 2).unwrap();
        let f3 = &random_ensemble(&g, EnsembleKind::MeanZeroRademacher, 3, 1).unwrap()[0];
        let r = cs_chain_diagnostics(&g, &fs[0], &fs[1], f3, &t, &c, 120, EXACT_TOL).unwrap();
        let vals: Vec<f64> = f3.values().iter().map(|z| z.re).collect();
        assert!((r.value("c3").unwrap() - c3_quadruple(&g, &vals)).abs() < 1e-12);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn chain_on_alt5() {
        let (g, c, t) = setup("alt:5");
        let fs = random_ensemble(&g, EnsembleKind::Rademacher, 11, 2).unwrap();
        let f3 = &random_ensemble(&g, EnsembleKind::MeanZeroRademacher, 12, 1).unwrap()[0];
        let r = cs_chain_diagnostics(&g, &fs[0], &fs[1], f3, &t, &c, 120, EXACT_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.value("c3").unwrap() - r.value("c4").unwrap()).abs() < 1e-9);
        assert!(r.worst_excess() < 0.0 || r.worst_excess() < 1e-9);
    }

    #[test]
    fn real_phase_triple_on_z5() {
        let (g, c, t) = setup("cyclic:5");
        let phase = |k: f64| {
            let v: Vec<f64> = (0..5)
                .map(|x| (std::f64::consts::TAU * k * x as f64 / 5.0).cos())
                .collect();
            GroupFunction::from_real(&g, &v).unwrap()
        };
        let r = cs_chain_diagnostics(&g, &phase(1.0), &phase(-2.0), &phase(1.0), &t, &c, 120, EXACT_TOL)
            .unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.value("bound").unwrap(), 2.0);
    }

    #[test]
    fn preconditions() {
        let (g, c, t) = setup("alt:5");
        let complex = &random_ensemble(&g, EnsembleKind::MeanZeroUnimodular, 1, 1).unwrap()[0];
        let real = &random_ensemble(&g, EnsembleKind::MeanZeroRademacher, 1, 1).unwrap()[0];
        let one = GroupFunction::constant(&g, num_complex::Complex64::new(1.0, 0.0));
        assert!(cs_chain_diagnostics(&g, complex, real, real, &t, &c, 120, EXACT_TOL).is_err());
        assert!(cs_chain_diagnostics(&g, real, real, &one, &t, &c, 120, EXACT_TOL).is_err());
        assert!(cs_chain_diagnostics(&g, real, real, real, &t, &c, 50, EXACT_TOL).is_err());
    }
}
