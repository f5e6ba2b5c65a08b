use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use qmix::group::write_group;
use qmix::mixing::{
    adversarial_search, random_ensemble, theta_of_sets, trial_seed, EnsembleKind, MixingReport,
};
use qmix::{
    compute_character_table, conjugacy_classes, construct_group, parse_spec, CharacterTable,
    ConjugacyData, Error, GroupSpec, GroupTable,
};

use crate::output::{emit, sig6, Record};
use crate::{Format, Outcome};

pub struct Loaded {
    pub spec: GroupSpec,
    pub group: GroupTable,
    pub classes: ConjugacyData,
    pub table: CharacterTable,
}

pub fn load_group(spec: &str) -> qmix::Result<(GroupSpec, GroupTable)> {
    let spec = parse_spec(spec)?;
    let group = construct_group(&spec)?;
    Ok((spec, group))
}

pub fn load(spec: &str, seed: u64, tol: f64) -> qmix::Result<Loaded> {
    let (spec, group) = load_group(spec)?;
    let classes = conjugacy_classes(&group);
    let table = compute_character_table(&group, &classes, seed, tol)?;
    Ok(Loaded {
        spec,
        group,
        classes,
        table,
    })
}

#[derive(Serialize)]
struct GroupRow {
    group: String,
    n: usize,
    abelian: bool,
    classes: usize,
}

impl Record for GroupRow {
    const HEADER: &'static [&'static str] = &["group", "n", "abelian", "classes"];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.group.clone(),
            self.n.to_string(),
            self.abelian.to_string(),
            self.classes.to_string(),
        ]
    }

    fn text(&self) -> String {
        format!(
            "{}: n={} abelian={} classes={}",
            self.group, self.n, self.abelian, self.classes
        )
    }
}

pub fn group(spec: &str, out: Option<&Path>, format: Format) -> qmix::Result<Outcome> {
    let (spec, group) = load_group(spec)?;
    if let Some(path) = out {
        group.require_dense()?;
        write_group(&group, BufWriter::new(File::create(path)?))?;
    }
    let row = GroupRow {
        group: spec.to_string(),
        n: group.order(),
        abelian: group.is_abelian(),
        classes: conjugacy_classes(&group).k,
    };
    emit(&[row], format)?;
    Ok(Outcome::Passed)
}

pub fn chartab(spec: &str, format: Format, seed: u64, tol: f64) -> qmix::Result<Outcome> {
    let l = load(spec, seed, tol)?;
    let report = l.table.report();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                group: String,
                #[serde(flatten)]
                report: &'a qmix::chartab::ChartabReport,
                quasirandom: bool,
            }
            let out = Out {
                group: l.spec.to_string(),
                report: &report,
                quasirandom: report.d >= 2,
            };
            println!("{}", serde_json::to_string(&out)?);
        }
        Format::Csv => print!("{}", l.table.to_csv(&l.classes)),
        Format::Text => {
            println!("group: {} (n={}, classes={})", l.spec, report.n, report.k);
            let degrees: Vec<String> = report.degrees.iter().map(|d| d.to_string()).collect();
            println!("degrees: {}", degrees.join(" "));
            print!("D: {}", report.d);
            if report.d < 2 {
                print!(" (not quasirandom)");
            }
            println!();
            println!("zeta(1)-1: {}", sig6(report.zeta1));
            println!("orthogonality residual: {}", sig6(report.orthogonality_residual));
        }
    }
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct MixRow {
    group: String,
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    trial: usize,
    seed: u64,
    sizes: [usize; 3],
    theta: f64,
    bound: f64,
    margin: f64,
    vacuous: bool,
    passed: bool,
}

impl MixRow {
    fn new(group: &str, trial: usize, seed: u64, sets: &[Vec<usize>; 3], r: &MixingReport, tol: f64) -> Self {
        MixRow {
            group: group.to_string(),
            n: 0,
            d: r.d,
            trial,
            seed,
            sizes: [sets[0].len(), sets[1].len(), sets[2].len()],
            theta: r.theta,
            bound: r.bound,
            margin: r.margin,
            vacuous: r.vacuous,
            passed: r.within_bound(tol),
        }
    }
}

impl Record for MixRow {
    const HEADER: &'static [&'static str] = &[
        "group", "n", "D", "trial", "seed", "size1", "size2", "size3", "theta", "bound", "margin",
        "vacuous", "passed",
    ];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.group.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.sizes[0].to_string(),
            self.sizes[1].to_string(),
            self.sizes[2].to_string(),
            self.theta.to_string(),
            self.bound.to_string(),
            self.margin.to_string(),
            self.vacuous.to_string(),
            self.passed.to_string(),
        ]
    }

    fn text(&self) -> String {
        let mut s = format!(
            "trial {}: theta={} bound={} margin={} sizes={:?}",
            self.trial,
            sig6(self.theta),
            sig6(self.bound),
            sig6(self.margin),
            self.sizes
        );
        if self.vacuous {
            s.push_str(&format!(" (bound vacuous, D={})", self.d));
        }
        if !self.passed {
            s.push_str(" FAILED");
        }
        s
    }
}

fn parse_sets(group: &GroupTable, arg: &str) -> qmix::Result<[Vec<usize>; 3]> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    let sets: Vec<Vec<usize>> = serde_json::from_str(&text)?;
    let sets: [Vec<usize>; 3] = sets
        .try_into()
        .map_err(|v: Vec<_>| Error::Precondition(format!("expected 3 sets, got {}", v.len())))?;
    for &x in sets.iter().flatten() {
        group.check_index(x)?;
    }
    Ok(sets)
}

fn random_sets(group: &GroupTable, p: f64, seed: u64) -> qmix::Result<[Vec<usize>; 3]> {
    let fs = random_ensemble(group, EnsembleKind::Indicator(p), seed, 3)?;
    Ok([0, 1, 2].map(|i| {
        fs[i]
            .values()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != 0.0)
            .map(|(x, _)| x)
            .collect()
    }))
}

pub fn mix(
    spec: &str,
    sets: Option<&str>,
    random: Option<f64>,
    trials: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> qmix::Result<Outcome> {
    if let Some(p) = random {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Precondition(format!("--random needs 0 < p < 1, got {p}")));
        }
    }
    let l = load(spec, seed, qmix::chartab::DEFAULT_TOL)?;
    let name = l.spec.to_string();
    let d = l.table.quasirandom_degree();
    let n = l.group.order();
    let draws: Vec<(u64, [Vec<usize>; 3])> = match (sets, random) {
        (Some(arg), _) => vec![(seed, parse_sets(&l.group, arg)?)],
        (None, Some(p)) => (0..trials)
            .map(|t| {
                let s = trial_seed(seed, t as u64);
                random_sets(&l.group, p, s).map(|sets| (s, sets))
            })
            .collect::<qmix::Result<_>>()?,
        (None, None) => return Err(Error::Precondition("give --sets or --random".into())),
    };
    let mut rows = Vec::with_capacity(draws.len());
    for (t, (s, sets)) in draws.iter().enumerate() {
        let r = theta_of_sets(&l.group, [&sets[0], &sets[1], &sets[2]], d)?;
        let mut row = MixRow::new(&name, t, *s, sets, &r, tol);
        row.n = n;
        rows.push(row);
    }
    emit(&rows, format)?;
    if rows.iter().all(|r| r.passed) {
        Ok(Outcome::Passed)
    } else {
        for r in rows.iter().filter(|r| !r.passed) {
            eprintln!(
                "witness: trial={} seed={} theta={:e} bound={:e}",
                r.trial, r.seed, r.theta, r.bound
            );
        }
        Ok(Outcome::Failed)
    }
}

pub fn search(
    spec: &str,
    budget: usize,
    restarts: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> qmix::Result<Outcome> {
    let l = load(spec, seed, qmix::chartab::DEFAULT_TOL)?;
    let result = adversarial_search(&l.group, &l.table, budget, restarts, seed)?;
    let r = &result.report;
    let passed = r.within_bound(tol);
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                group: String,
                n: usize,
                seed: u64,
                budget: usize,
                restarts: usize,
                evaluations: usize,
                initial_theta: f64,
                sets: &'a [Vec<usize>; 3],
                report: &'a MixingReport,
                passed: bool,
            }
            let out = Out {
                group: l.spec.to_string(),
                n: l.group.order(),
                seed,
                budget,
                restarts,
                evaluations: result.evaluations,
                initial_theta: result.initial_theta,
                sets: &result.sets,
                report: r,
                passed,
            };
            println!("{}", serde_json::to_string(&out)?);
        }
        Format::Text | Format::Csv => {
            let mut row = MixRow::new(&l.spec.to_string(), 0, seed, &result.sets, r, tol);
            row.n = l.group.order();
            if format == Format::Csv {
                emit(&[row], format)?;
            } else {
                println!(
                    "search {}: restarts={} evaluations={} initial theta={}",
                    l.spec,
                    restarts,
                    result.evaluations,
                    sig6(result.initial_theta)
                );
                println!("{}", row.text().replacen("trial 0", "best", 1));
                for (i, set) in result.sets.iter().enumerate() {
                    println!("A{}: {}", i + 1, serde_json::to_string(set)?);
                }
            }
        }
    }
    if passed {
        Ok(Outcome::Passed)
    } else {
        eprintln!(
            "witness: theta={:e} exceeds bound={:e}; replay: qmix search {} --budget {budget} --restarts {restarts} --seed {seed}",
            r.theta, r.bound, l.spec
        );
        Ok(Outcome::Failed)
    }
}
