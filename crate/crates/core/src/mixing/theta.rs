use num_complex::Complex64;
use rayon::prelude::*;

use crate::chartab::CharacterTable;
use crate::error::Result;
use crate::fourier::{mean, sup_norm, GroupFunction};
use crate::group::GroupTable;
use crate::mixing::{theorem_bound, MixingReport, SUP_SLACK};

/// Rows of the outer loop handled by one task; partial sums are combined in
/// block order so results do not depend on the worker count.
const BLOCK: usize = 128;

/// `Theta = |E_{x,y}[f1(x) f2(xy) f3(xy^2)] - E f1 E f2 E f3|`, by exact
/// enumeration of all pairs.
///
/// Inputs with `||f||_inf > 1` are accepted; the report flags them since the
/// bound does not apply.
pub fn theta_defect(
    group: &GroupTable,
    f1: &GroupFunction,
    f2: &GroupFunction,
    f3: &GroupFunction,
    table: &CharacterTable,
) -> Result<MixingReport> {
    theta_with_degree(group, [f1, f2, f3], table.quasirandom_degree())
}

pub(crate) fn theta_with_degree(
    group: &GroupTable,
    fs: [&GroupFunction; 3],
    d: usize,
) -> Result<MixingReport> {
    for f in fs {
        f.check_same_group(group)?;
    }
    let [f1, f2, f3] = fs.map(GroupFunction::values);
    let n = group.order();

    let block_sum = |start: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in start..(start + BLOCK).min(n) {
            let mut row_acc = Complex64::new(0.0, 0.0);
            match group.table() {
                Some(mul) => {
                    let row = &mul[x * n..(x + 1) * n];
                    for y in 0..n {
                        let xy = row[y] as usize;
                        let xyy = mul[xy * n + y] as usize;
                        row_acc += f2[xy] * f3[xyy];
                    }
                }
                None => {
                    for y in 0..n {
                        let xy = group.mul(x, y);
                        row_acc += f2[xy] * f3[group.mul(xy, y)];
                    }
                }
            }
            acc += f1[x] * row_acc;
        }
        acc
    };
    let partials: Vec<Complex64> = (0..n)
        .step_by(BLOCK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(block_sum)
        .collect();
    let raw = partials.iter().sum::<Complex64>() / (n * n) as f64;

    let product = fs.iter().map(|f| mean(f)).product::<Complex64>();
    Ok(report(raw, product, d, fs.iter().any(|f| sup_norm(f) > 1.0 + SUP_SLACK)))
}

pub(crate) fn report(raw: Complex64, product: Complex64, d: usize, sup_norm_exceeded: bool) -> MixingReport {
    let theta = (raw - product).norm();
    let bound = theorem_bound(d.max(1)).expect("degree is at least 1");
    MixingReport {
        theta,
        raw_expectation: raw,
        product_of_means: product,
        bound,
        d,
        margin: bound - theta,
        vacuous: d < 2 || bound >= 1.0,
        sup_norm_exceeded,
    }
}

/// `#{(x, y) : x in A1, xy in A2, xy^2 in A3}`.
pub fn count_progressions(group: &GroupTable, sets: [&[usize]; 3]) -> Result<u64> {
    let n = group.order();
    let mut member = [vec![false; n], vec![false; n], vec![false; n]];
    for (m, set) in member.iter_mut().zip(sets) {
        for &x in set {
            group.check_index(x)?;
            m[x] = true;
        }
    }
    let mut count = 0u64;
    for x in (0..n).filter(|&x| member[0][x]) {
        for y in 0..n {
            let xy = group.mul(x, y);
            if member[1][xy] && member[2][group.mul(xy, y)] {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Defect of the raw indicators of three sets, i.e.
/// `|Pr[x in A1, xy in A2, xy^2 in A3] - prod |A_i| / n|`.
pub fn theta_of_sets(group: &GroupTable, sets: [&[usize]; 3], d: usize) -> Result<MixingReport> {
    let f1 = GroupFunction::indicator(group, sets[0])?;
    let f2 = GroupFunction::indicator(group, sets[1])?;
    let f3 = GroupFunction::indicator(group, sets[2])?;
    theta_with_degree(group, [&f1, &f2, &f3], d)
}
