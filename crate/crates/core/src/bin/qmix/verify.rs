use rayon::prelude::*;
use serde::Serialize;

use qmix::hash::Fnv;
use qmix::mixing::{
    cs_chain_diagnostics, gamma_functional, random_ensemble, trial_seed, verify_bnp,
    verify_claim_fc_mu, verify_derivative_bound, verify_parseval, EnsembleKind, GammaMode,
    LemmaId, LemmaReport, Mode,
};
use qmix::{Error, GroupFunction};

use crate::commands::{load, Loaded};
use crate::output::{emit, sig6, Record};
use crate::{Format, Outcome, Suite};

pub struct Options {
    pub spec: String,
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub trial: Option<usize>,
    pub budget: usize,
    pub max_order: usize,
    pub format: Format,
}

#[derive(Serialize)]
struct Row {
    group: String,
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    lemma_id: LemmaId,
    mode: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    stderr: f64,
    seed: u64,
    passed: bool,
    trial: usize,
    hash: String,
}

impl Record for Row {
    const HEADER: &'static [&'static str] = &[
        "group", "n", "D", "lemma_id", "mode", "lhs", "rhs", "margin", "stderr", "seed", "passed",
        "trial", "hash",
    ];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.group.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.lemma_id.to_string(),
            self.mode.clone(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.margin.to_string(),
            self.stderr.to_string(),
            self.seed.to_string(),
            self.passed.to_string(),
            self.trial.to_string(),
            self.hash.clone(),
        ]
    }

    fn text(&self) -> String {
        let mut s = format!(
            "{} trial={} {} lhs={} rhs={} margin={}",
            self.lemma_id,
            self.trial,
            self.mode,
            sig6(self.lhs),
            sig6(self.rhs),
            sig6(self.margin)
        );
        if self.stderr > 0.0 {
            s.push_str(&format!(" stderr={}", sig6(self.stderr)));
        }
        s.push_str(if self.passed { " ok" } else { " FAILED" });
        s
    }
}

fn suites(suite: Suite) -> Vec<Suite> {
    match suite {
        Suite::All => vec![
            Suite::Fcmu,
            Suite::Parseval,
            Suite::Bnp,
            Suite::Derivative,
            Suite::Gamma,
            Suite::Chain,
        ],
        s => vec![s],
    }
}

fn name(suite: Suite) -> &'static str {
    match suite {
        Suite::Bnp => "bnp",
        Suite::Derivative => "derivative",
        Suite::Gamma => "gamma",
        Suite::Fcmu => "fcmu",
        Suite::Parseval => "parseval",
        Suite::Chain => "chain",
        Suite::All => "all",
    }
}

fn hash_of(fs: &[&GroupFunction]) -> String {
    let mut h = Fnv::new();
    for f in fs {
        h.write_u64(f.content_hash());
    }
    format!("{:016x}", h.finish())
}

fn needs_quasirandom(suite: Suite) -> bool {
    matches!(suite, Suite::Bnp | Suite::Derivative | Suite::Gamma)
}

/// One seeded instance of `suite`; returns the report and the input hash.
fn trial(l: &Loaded, opts: &Options, suite: Suite, seed: u64) -> qmix::Result<(LemmaReport, String)> {
    let (g, c, t, tol) = (&l.group, &l.classes, &l.table, opts.tol);
    match suite {
        Suite::Bnp => {
            let fs = random_ensemble(g, EnsembleKind::MeanZeroUnimodular, seed, 2)?;
            Ok((verify_bnp(g, &fs[0], &fs[1], t, tol)?, hash_of(&[&fs[0], &fs[1]])))
        }
        Suite::Derivative => {
            let f = &random_ensemble(g, EnsembleKind::MeanZeroUnimodular, seed, 1)?[0];
            Ok((verify_derivative_bound(g, f, t, tol)?, hash_of(&[f])))
        }
        Suite::Gamma => {
            let f = &random_ensemble(g, EnsembleKind::MeanZeroUnimodular, seed, 1)?[0];
            let r = gamma_functional(g, f, t, c, GammaMode::Auto, opts.budget, seed, tol)?;
            Ok((r, hash_of(&[f])))
        }
        Suite::Parseval => {
            let f = &random_ensemble(g, EnsembleKind::Unimodular, seed, 1)?[0];
            Ok((verify_parseval(g, f, t, c, tol)?, hash_of(&[f])))
        }
        Suite::Fcmu => Ok((verify_claim_fc_mu(g, t, c, tol)?, String::from("-"))),
        Suite::Chain => {
            let fs = random_ensemble(g, EnsembleKind::Rademacher, seed, 2)?;
            let f3 = &random_ensemble(g, EnsembleKind::MeanZeroRademacher, trial_seed(seed, 1), 1)?[0];
            let r = cs_chain_diagnostics(g, &fs[0], &fs[1], f3, t, c, opts.max_order, tol)?;
            // The row reports the last link; `passed` covers every link.
            let split = r.value("split").unwrap_or(f64::NAN);
            let bound = r.value("bound").unwrap_or(f64::NAN);
            let report = LemmaReport {
                lemma_id: LemmaId::Chain,
                lhs: split,
                rhs: bound,
                mode: Mode::Exhaustive,
                passed: r.passed,
                margin: bound - split,
                stderr: 0.0,
                tol,
            };
            Ok((report, hash_of(&[&fs[0], &fs[1], f3])))
        }
        Suite::All => unreachable!("expanded by suites()"),
    }
}

pub fn run(opts: &Options) -> qmix::Result<Outcome> {
    let l = load(&opts.spec, opts.seed, qmix::chartab::DEFAULT_TOL)?;
    let d = l.table.quasirandom_degree();
    let n = l.group.order();
    if d < 2 && opts.suite != Suite::All && needs_quasirandom(opts.suite) {
        return Err(Error::Precondition(format!("not quasirandom (D={d})")));
    }

    let mut rows = Vec::new();
    for suite in suites(opts.suite) {
        if d < 2 && needs_quasirandom(suite) {
            eprintln!("note: skipping {}: not quasirandom (D={d})", name(suite));
            continue;
        }
        if suite == Suite::Chain && n > opts.max_order {
            eprintln!(
                "note: skipping chain: order {n} exceeds --max-order {}",
                opts.max_order
            );
            continue;
        }
        let indices: Vec<usize> = match (suite, opts.trial) {
            (_, Some(t)) => vec![t],
            (Suite::Fcmu, None) => vec![0],
            (_, None) => (0..opts.trials).collect(),
        };
        let results: Vec<(usize, u64, LemmaReport, String)> = indices
            .into_par_iter()
            .map(|t| {
                let seed = trial_seed(opts.seed, t as u64);
                trial(&l, opts, suite, seed).map(|(r, h)| (t, seed, r, h))
            })
            .collect::<qmix::Result<_>>()?;
        for (t, seed, r, hash) in results {
            rows.push(Row {
                group: l.spec.to_string(),
                n,
                d,
                lemma_id: r.lemma_id,
                mode: r.mode.to_string(),
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                stderr: r.stderr,
                seed,
                passed: r.passed,
                trial: t,
                hash,
            });
        }
    }
    emit(&rows, opts.format)?;

    let failed: Vec<&Row> = rows.iter().filter(|r| !r.passed).collect();
    for r in &failed {
        eprintln!(
            "witness: {} trial={} seed={} hash={} lhs={:e} rhs={:e}",
            r.lemma_id, r.trial, r.seed, r.hash, r.lhs, r.rhs
        );
        eprintln!(
            "  replay: qmix verify {} --suite {} --seed {} --trial {} --tol {:e} --budget {} --max-order {}",
            l.spec, r.lemma_id, opts.seed, r.trial, opts.tol, opts.budget, opts.max_order
        );
    }
    if opts.format == Format::Text {
        println!(
            "{}: {} checks, {} failed",
            l.spec,
            rows.len(),
            failed.len()
        );
    }
    Ok(if failed.is_empty() {
        Outcome::Passed
    } else {
        Outcome::Failed
    })
}
