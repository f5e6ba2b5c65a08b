use std::borrow::Cow;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chartab::CharacterTable;
use crate::classes::ConjugacyData;
use crate::error::{Error, Result};
use crate::fourier::{
    convolve, mean, mu_translated_class, norm2, spectral_profile_unchecked, sup_norm,
    GroupFunction,
};
use crate::group::GroupTable;
use crate::mixing::{mean_and_stderr, LemmaId, LemmaReport, MEAN_ZERO_TOL, SUP_SLACK};

/// Largest order for which the Gamma functional runs over all `(g, b)`.
pub const EXHAUSTIVE_GAMMA_MAX_ORDER: usize = 200;

fn rhs_inv_sqrt(table: &CharacterTable) -> f64 {
    1.0 / (table.quasirandom_degree() as f64).sqrt()
}

fn require_mean_zero(f: &GroupFunction, what: &str) -> Result<()> {
    let m = mean(f).norm();
    if m > MEAN_ZERO_TOL {
        return Err(Error::Precondition(format!("{what} has mean {m:.3e}, expected 0")));
    }
    Ok(())
}

fn require_bounded(f: &GroupFunction, what: &str) -> Result<()> {
    let s = sup_norm(f);
    if s > 1.0 + SUP_SLACK {
        return Err(Error::Precondition(format!("{what} has sup norm {s}, expected <= 1")));
    }
    Ok(())
}

/// `||f1 * f2||_2 <= ||f1||_2 ||f2||_2 / sqrt(D)` when either factor has mean
/// zero.
pub fn verify_bnp(
    group: &GroupTable,
    f1: &GroupFunction,
    f2: &GroupFunction,
    table: &CharacterTable,
    tol: f64,
) -> Result<LemmaReport> {
    if mean(f1).norm() > MEAN_ZERO_TOL && mean(f2).norm() > MEAN_ZERO_TOL {
        return Err(Error::Precondition("neither function has mean zero".into()));
    }
    let lhs = norm2(&convolve(group, f1, f2)?);
    let rhs = norm2(f1) * norm2(f2) * rhs_inv_sqrt(table);
    Ok(LemmaReport::exhaustive(LemmaId::Bnp, lhs, rhs, tol))
}

/// `E_b |E_x f(x) f(xb)| <= 1 / sqrt(D)` for mean-zero `f` with
/// `||f||_inf <= 1`.
pub fn verify_derivative_bound(
    group: &GroupTable,
    f: &GroupFunction,
    table: &CharacterTable,
    tol: f64,
) -> Result<LemmaReport> {
    f.check_same_group(group)?;
    require_mean_zero(f, "f")?;
    require_bounded(f, "f")?;
    let n = group.order();
    let v = f.values();
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|b| {
            let inner: Complex64 = (0..n).map(|x| v[x] * v[group.mul(x, b)]).sum();
            (inner / n as f64).norm()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(LemmaReport::exhaustive(
        LemmaId::Derivative,
        total / n as f64,
        rhs_inv_sqrt(table),
        tol,
    ))
}

/// How [`gamma_functional`] enumerates `(g, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMode {
    /// Exhaustive up to [`EXHAUSTIVE_GAMMA_MAX_ORDER`], sampled above.
    Auto,
    Exhaustive,
    Sampled,
}

/// Per-pair quantities for `Delta_b f` against `Delta_{b'} f * mu_S`, where
/// `b' = g^-1 b g` and `S = g^-1 C(g^-1)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairTerms {
    /// `E_x[Delta_b f(x) (Delta_{b'} f * mu_S)(x)]`.
    pub full: Complex64,
    /// `E_x Delta_b f`.
    pub mean_b: Complex64,
    /// `E_x Delta_{b'} f`.
    pub mean_conj: Complex64,
}

impl PairTerms {
    /// The same pairing with `Delta_{b'} f` replaced by its mean-zero part.
    /// Convolving a constant with `mu_S` leaves it unchanged, so the mean
    /// part contributes exactly `mean_b * mean_conj`.
    pub fn centered(&self) -> Complex64 {
        self.full - self.mean_b * self.mean_conj
    }

    pub fn mean_term(&self) -> f64 {
        self.mean_b.norm() * self.mean_conj.norm()
    }
}

/// Shared evaluator for the Gamma functional and the chain diagnostics.
pub(crate) struct PairEngine<'a> {
    group: &'a GroupTable,
    classes: &'a ConjugacyData,
    f: &'a [Complex64],
    /// `deltas[b * n + x] = f(x) f(xb)` when cached.
    deltas: Option<Vec<Complex64>>,
}

impl<'a> PairEngine<'a> {
    pub fn new(group: &'a GroupTable, classes: &'a ConjugacyData, f: &'a GroupFunction, cache: bool) -> Self {
        let mut engine = PairEngine {
            group,
            classes,
            f: f.values(),
            deltas: None,
        };
        if cache {
            let n = group.order();
            let mut all = Vec::with_capacity(n * n);
            for b in 0..n {
                all.extend_from_slice(&engine.delta(b));
            }
            engine.deltas = Some(all);
        }
        engine
    }

    fn delta(&self, b: usize) -> Cow<'_, [Complex64]> {
        let n = self.group.order();
        match &self.deltas {
            Some(all) => Cow::Borrowed(&all[b * n..(b + 1) * n]),
            None => Cow::Owned(
                (0..n)
                    .map(|x| self.f[x] * self.f[self.group.mul(x, b)])
                    .collect(),
            ),
        }
    }

    /// Right multipliers `s^-1` for `s` in `g^-1 C(g^-1)`.
    pub fn shifts(&self, g: usize) -> Vec<usize> {
        let gi = self.group.inv(g);
        self.classes.class_elements[self.classes.class_of(gi)]
            .iter()
            .map(|&c| self.group.mul(self.group.inv(c), g))
            .collect()
    }

    pub fn pair(&self, g: usize, b: usize, shifts: &[usize]) -> PairTerms {
        let n = self.group.order();
        let bp = self.group.conjugate(b, g);
        let db = self.delta(b);
        let dbp = self.delta(bp);
        let mut acc = Complex64::new(0.0, 0.0);
        match self.group.table() {
            Some(mul) => {
                for x in 0..n {
                    let row = &mul[x * n..(x + 1) * n];
                    let a: Complex64 = shifts.iter().map(|&s| dbp[row[s] as usize]).sum();
                    acc += db[x] * a;
                }
            }
            None => {
                for x in 0..n {
                    let a: Complex64 = shifts.iter().map(|&s| dbp[self.group.mul(x, s)]).sum();
                    acc += db[x] * a;
                }
            }
        }
        let nf = n as f64;
        PairTerms {
            full: acc / (nf * shifts.len() as f64),
            mean_b: db.iter().sum::<Complex64>() / nf,
            mean_conj: dbp.iter().sum::<Complex64>() / nf,
        }
    }

    /// Apply `visit` to every `(g, b)`; per-`g` results come back in `g`
    /// order.
    pub fn for_all_pairs<T, F>(&self, visit: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&PairTerms, &mut T) + Sync,
        T: Default,
    {
        let n = self.group.order();
        (0..n)
            .into_par_iter()
            .map(|g| {
                let shifts = self.shifts(g);
                let mut acc = T::default();
                for b in 0..n {
                    visit(&self.pair(g, b, &shifts), &mut acc);
                }
                acc
            })
            .collect()
    }
}

/// `Gamma = E_{g,b} |E_x[Delta_b f(x) (f_{g^-1 b g} * mu_{g^-1 C(g^-1)})(x)]|`
/// against `1 / sqrt(D)`, where `f_c` is the mean-zero part of `Delta_c f`.
///
/// Exhaustive mode visits all `n^2` pairs; sampled mode draws `budget`
/// uniform pairs from `seed` and reports the standard error.
#[allow(clippy::too_many_arguments)]
pub fn gamma_functional(
    group: &GroupTable,
    f: &GroupFunction,
    table: &CharacterTable,
    classes: &ConjugacyData,
    mode: GammaMode,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<LemmaReport> {
    f.check_same_group(group)?;
    require_mean_zero(f, "f")?;
    require_bounded(f, "f")?;
    let n = group.order();
    let exhaustive = match mode {
        GammaMode::Auto => n <= EXHAUSTIVE_GAMMA_MAX_ORDER,
        GammaMode::Exhaustive => true,
        GammaMode::Sampled => false,
    };
    let rhs = rhs_inv_sqrt(table);

    if exhaustive {
        let engine = PairEngine::new(group, classes, f, true);
        let per_g: Vec<f64> = engine.for_all_pairs(|t, acc: &mut f64| *acc += t.centered().norm());
        let gamma = per_g.iter().sum::<f64>() / (n * n) as f64;
        return Ok(LemmaReport::exhaustive(LemmaId::Gamma, gamma, rhs, tol));
    }

    if budget == 0 {
        return Err(Error::Precondition("sampled Gamma needs a positive budget".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..budget)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let engine = PairEngine::new(group, classes, f, false);
    let samples: Vec<f64> = pairs
        .par_iter()
        .map(|&(g, b)| engine.pair(g, b, &engine.shifts(g)).centered().norm())
        .collect();
    let (gamma, stderr) = mean_and_stderr(&samples);
    Ok(LemmaReport::sampled(LemmaId::Gamma, gamma, rhs, budget, seed, stderr, tol))
}

/// `||mu^_{gC(g)}(rho)||_HS^2 = |chi_rho(g)|^2 / d_rho` for every `g` and every
/// irreducible. The left side comes from the correlation kernel of the actual
/// density; `lhs` is the largest deviation and `rhs` is 0.
pub fn verify_claim_fc_mu(
    group: &GroupTable,
    table: &CharacterTable,
    classes: &ConjugacyData,
    tol: f64,
) -> Result<LemmaReport> {
    let n = group.order();
    let deviations: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|g| -> Result<f64> {
            let mu = mu_translated_class(group, classes, g)?;
            let profile = spectral_profile_unchecked(group, &mu, table, classes)?;
            let c = classes.class_of(g);
            Ok((0..table.k)
                .map(|r| {
                    let expect = table.chi[r][c].norm_sqr() / table.degrees[r] as f64;
                    (profile.hs2[r] - expect).abs()
                })
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    let worst = deviations.into_iter().fold(0.0, f64::max);
    Ok(LemmaReport::exhaustive(LemmaId::Fcmu, worst, 0.0, tol))
}

/// `sum_r d_r ||f^(rho_r)||_HS^2 = ||f||_2^2`; `lhs` is the absolute residual.
pub fn verify_parseval(
    group: &GroupTable,
    f: &GroupFunction,
    table: &CharacterTable,
    classes: &ConjugacyData,
    tol: f64,
) -> Result<LemmaReport> {
    let profile = spectral_profile_unchecked(group, f, table, classes)?;
    Ok(LemmaReport::exhaustive(
        LemmaId::Parseval,
        profile.parseval_residual,
        0.0,
        tol,
    ))
}
