//! Complex character tables by simultaneous diagonalization of the
//! class-multiplication matrices.
//!
//! The matrices `M_i` commute and share the eigenvectors
//! `w_r = (omega_r(K_l))_l`, where `omega_r(K_i) = h_i chi_r(i) / d_r` is the
//! central character of the class sum `K_i`. A random real combination of
//! the `M_i` separates all of them, so one dense eigensolve recovers every
//! central character at once. Degrees then follow from
//! `sum_i h_i |chi_r(i)|^2 = n`.
//!
//! Every table is certified against both orthogonality relations, integral
//! degrees, and `sum d^2 = n` before it is returned.

use std::cmp::Ordering;

use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classes::{class_mult_coefficients, ConjugacyData};
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Default tolerance for orthogonality residuals.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default tolerance on the distance of a degree from the nearest integer.
pub const DEGREE_TOL: f64 = 1e-6;
/// Largest number of classes handled.
pub const MAX_CLASSES: usize = 200;
const RETRIES: u64 = 5;

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    pub n: usize,
    pub k: usize,
    /// `chi[r][i]` is the value of the r-th irreducible character on class i.
    /// Row 0 is the trivial character.
    pub chi: Vec<Vec<Complex64>>,
    pub degrees: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// Minimum degree over the nontrivial irreducibles; 1 means not
    /// quasirandom.
    pub d: usize,
    pub tol: f64,
    pub row_residual: f64,
    pub column_residual: f64,
    pub degree_deviation: f64,
}

/// Summary written by `chartab --format json`.
#[derive(Debug, Clone, Serialize)]
pub struct ChartabReport {
    pub n: usize,
    pub k: usize,
    pub degrees: Vec<usize>,
    #[serde(rename = "D")]
    pub d: usize,
    pub zeta1: f64,
    pub orthogonality_residual: f64,
}

impl CharacterTable {
    pub fn quasirandom_degree(&self) -> usize {
        self.d
    }

    /// Sum of `d^-s` over the nontrivial irreducibles, i.e. `zeta_G(s) - 1`.
    pub fn witten_zeta(&self, s: f64) -> f64 {
        self.degrees[1..].iter().map(|&d| (d as f64).powf(-s)).sum()
    }

    #[inline]
    pub fn value(&self, r: usize, class: usize) -> Complex64 {
        self.chi[r][class]
    }

    /// The worse of the two orthogonality residuals.
    pub fn orthogonality_residual(&self) -> f64 {
        self.row_residual.max(self.column_residual)
    }

    /// Index of the row holding the complex conjugate of row `r`.
    pub fn conjugate_row(&self, r: usize) -> usize {
        (0..self.k)
            .find(|&s| {
                self.degrees[s] == self.degrees[r]
                    && self.chi[s]
                        .iter()
                        .zip(&self.chi[r])
                        .all(|(a, b)| (a - b.conj()).norm() < 1e-6)
            })
            .expect("character tables are closed under conjugation")
    }

    /// The character of row `r` spread over the elements of the group.
    pub fn character_values(&self, r: usize, classes: &ConjugacyData) -> Vec<Complex64> {
        classes
            .class_of
            .iter()
            .map(|&c| self.chi[r][c as usize])
            .collect()
    }

    pub fn report(&self) -> ChartabReport {
        ChartabReport {
            n: self.n,
            k: self.k,
            degrees: self.degrees.clone(),
            d: self.d,
            zeta1: self.witten_zeta(1.0),
            orthogonality_residual: self.orthogonality_residual(),
        }
    }

    /// CSV export: two header rows (`class_rep`, `class_size`) aligned with
    /// the value columns, then one row per irreducible holding its degree and
    /// a `re,im` pair per class at 17 significant digits.
    pub fn to_csv(&self, classes: &ConjugacyData) -> String {
        let mut out = String::new();
        out.push_str("class_rep");
        for &rep in &classes.representatives {
            out.push_str(&format!(",{rep},"));
        }
        out.push_str("\nclass_size");
        for &h in &classes.sizes {
            out.push_str(&format!(",{h},"));
        }
        out.push('\n');
        for (r, row) in self.chi.iter().enumerate() {
            out.push_str(&self.degrees[r].to_string());
            for z in row {
                out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }

    /// Check both orthogonality relations, integrality and `sum d^2 = n`,
    /// recording the residuals.
    fn certify(&mut self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        let sum_sq: usize = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != n {
            return Err(Error::Certification(format!(
                "sum of squared degrees {sum_sq} != {n}"
            )));
        }

        let mut row = 0.0f64;
        for r in 0..k {
            for s in r..k {
                let ip: Complex64 = (0..k)
                    .map(|i| self.chi[r][i] * self.chi[s][i].conj() * self.class_sizes[i] as f64)
                    .sum::<Complex64>()
                    / n as f64;
                let target = if r == s { 1.0 } else { 0.0 };
                row = row.max((ip - target).norm());
            }
        }

        // Columns are compared after scaling to unit length, so the residual
        // is on the same footing as the row relation.
        let mut col = 0.0f64;
        for i in 0..k {
            for j in i..k {
                let ip: Complex64 = (0..k).map(|r| self.chi[r][i] * self.chi[r][j].conj()).sum();
                let scale =
                    ((n / self.class_sizes[i]) as f64 * (n / self.class_sizes[j]) as f64).sqrt();
                let target = if i == j { scale } else { 0.0 };
                col = col.max((ip - target).norm() / scale);
            }
        }

        self.row_residual = row;
        self.column_residual = col;
        if row >= self.tol || col >= self.tol {
            return Err(Error::Certification(format!(
                "orthogonality residual too large (rows {row:.3e}, columns {col:.3e})"
            )));
        }
        Ok(())
    }
}

/// Compute and certify the character table of `group`.
///
/// `seed` drives the random combination of class matrices; on eigenvalue
/// collision or failed certification the combination is redrawn up to five
/// times.
pub fn compute_character_table(
    group: &GroupTable,
    classes: &ConjugacyData,
    seed: u64,
    tol: f64,
) -> Result<CharacterTable> {
    let k = classes.k;
    if k > MAX_CLASSES {
        return Err(Error::Precondition(format!(
            "{k} classes exceeds the limit of {MAX_CLASSES}"
        )));
    }
    let mats: Vec<Vec<Vec<u64>>> = (0..k)
        .map(|i| class_mult_coefficients(group, classes, i))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = None;
    for _ in 0..=RETRIES {
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        match attempt(group.order(), classes, &mats, &weights, tol) {
            Ok(table) => return Ok(table),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn attempt(
    n: usize,
    classes: &ConjugacyData,
    mats: &[Vec<Vec<u64>>],
    weights: &[f64],
    tol: f64,
) -> Result<CharacterTable> {
    let k = classes.k;
    let combo = Mat::<f64>::from_fn(k, k, |j, l| {
        mats.iter()
            .zip(weights)
            .map(|(m, w)| m[j][l] as f64 * w)
            .sum()
    });
    let evd = combo
        .eigen()
        .map_err(|e| Error::Certification(format!("eigensolver failed: {e:?}")))?;
    let values = evd.S().column_vector();
    let vectors = evd.U();

    let scale = (0..k).map(|a| values[a].norm()).fold(1.0f64, f64::max);
    for a in 0..k {
        for b in a + 1..k {
            if (values[a] - values[b]).norm() < 10.0 * tol * scale {
                return Err(Error::Certification("eigenvalue collision".into()));
            }
        }
    }

    let mut rows = Vec::with_capacity(k);
    let mut degree_deviation = 0.0f64;
    for r in 0..k {
        let lead = vectors[(0, r)];
        if lead.norm() < 1e-12 {
            return Err(Error::Certification(
                "eigenvector vanishes on the identity class".into(),
            ));
        }
        // Central characters, normalized so omega(K_e) = 1.
        let omega: Vec<Complex64> = (0..k).map(|i| vectors[(i, r)] / lead).collect();
        let norm: f64 = omega
            .iter()
            .zip(&classes.sizes)
            .map(|(w, &h)| w.norm_sqr() / h as f64)
            .sum();
        let raw_degree = (n as f64 / norm).sqrt();
        let degree = raw_degree.round();
        degree_deviation = degree_deviation.max((raw_degree - degree).abs());
        if (raw_degree - degree).abs() >= DEGREE_TOL || degree < 1.0 {
            return Err(Error::Certification(format!(
                "non-integral degree {raw_degree}"
            )));
        }
        let chi: Vec<Complex64> = omega
            .iter()
            .zip(&classes.sizes)
            .map(|(w, &h)| w * degree / h as f64)
            .collect();
        rows.push((degree as usize, chi));
    }

    rows.sort_by(row_order);
    let (degrees, chi): (Vec<usize>, Vec<Vec<Complex64>>) = rows.into_iter().unzip();
    let d = degrees[1..].iter().copied().min().unwrap_or(1);
    let mut table = CharacterTable {
        n,
        k,
        chi,
        degrees,
        class_sizes: classes.sizes.clone(),
        d,
        tol,
        row_residual: f64::NAN,
        column_residual: f64::NAN,
        degree_deviation,
    };
    table.certify()?;
    Ok(table)
}

fn is_trivial(row: &[Complex64]) -> bool {
    row.iter().all(|z| (z - 1.0).norm() < 1e-6)
}

fn rounded(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

/// Trivial row first, then by degree, then lexicographically on rounded
/// real parts and finally rounded imaginary parts.
fn row_order(a: &(usize, Vec<Complex64>), b: &(usize, Vec<Complex64>)) -> Ordering {
    is_trivial(&b.1)
        .cmp(&is_trivial(&a.1))
        .then(a.0.cmp(&b.0))
        .then_with(|| {
            let ka = a.1.iter().map(|z| rounded(z.re));
            let kb = b.1.iter().map(|z| rounded(z.re));
            ka.cmp(kb)
        })
        .then_with(|| {
            let ka = a.1.iter().map(|z| rounded(z.im));
            let kb = b.1.iter().map(|z| rounded(z.im));
            ka.cmp(kb)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::conjugacy_classes;
    use crate::group::{construct_group, parse_spec};

    fn table(s: &str, seed: u64) -> (GroupTable, ConjugacyData, CharacterTable) {
        let g = construct_group(&parse_spec(s).unwrap()).unwrap();
        let c = conjugacy_classes(&g);
        let t = compute_character_table(&g, &c, seed, DEFAULT_TOL).unwrap();
        (g, c, t)
    }

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    #[test]
    fn cyclic_characters_are_roots_of_unity() {
        let (_, _, t) = table("cyclic:4", 1);
        assert_eq!(t.degrees, vec![1, 1, 1, 1]);
        for row in &t.chi {
            for z in row {
                assert!((z.powu(4) - 1.0).norm() < 1e-9);
            }
        }
        assert_eq!(t.quasirandom_degree(), 1);
        assert!((t.witten_zeta(1.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn small_degree_lists() {
        assert_eq!(table("sym:3", 2).2.degrees, vec![1, 1, 2]);
        assert_eq!(table("alt:5", 3).2.degrees, vec![1, 3, 3, 4, 5]);
        assert_eq!(sorted(table("psl2:7", 4).2.degrees), vec![1, 3, 3, 6, 7, 8]);
        assert_eq!(
            sorted(table("sl2:5", 5).2.degrees),
            vec![1, 2, 2, 3, 3, 4, 4, 5, 6]
        );
    }

    #[test]
    fn quasirandom_degrees() {
        assert_eq!(table("alt:5", 1).2.quasirandom_degree(), 3);
        assert_eq!(table("psl2:7", 1).2.quasirandom_degree(), 3);
        assert_eq!(table("sym:3", 1).2.quasirandom_degree(), 1);
        assert_eq!(table("sl2:11", 1).2.quasirandom_degree(), 5);
    }

    #[test]
    fn witten_zeta_values() {
        let (_, _, t) = table("alt:5", 1);
        assert!((t.witten_zeta(1.0) - (1.0 / 3.0 + 1.0 / 3.0 + 0.25 + 0.2)).abs() < 1e-12);
        assert!((t.witten_zeta(2.0) - (2.0 / 9.0 + 1.0 / 16.0 + 1.0 / 25.0)).abs() < 1e-12);
        let (_, _, t) = table("cyclic:5", 1);
        assert_eq!(t.witten_zeta(1.0), 4.0);
    }

    #[test]
    fn golden_ratio_on_three_dimensional_rows() {
        let (_, c, t) = table("alt:5", 7);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for r in [1, 2] {
            assert_eq!(t.degrees[r], 3);
            let five_cycles: Vec<f64> = (0..c.k)
                .filter(|&i| c.sizes[i] == 12)
                .map(|i| t.chi[r][i].re)
                .collect();
            assert_eq!(five_cycles.len(), 2);
            for v in five_cycles {
                assert!((v - phi).abs() < 1e-9 || (v - (1.0 - phi)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn identity_column_relation() {
        let (_, c, t) = table("sl2:7", 11);
        for i in 1..c.k {
            let s: Complex64 = (0..t.k).map(|r| t.chi[r][i] * t.degrees[r] as f64).sum();
            assert!(s.norm() < 1e-8);
        }
    }

    #[test]
    fn seed_invariance() {
        for s in ["psl2:7", "dihedral:6", "sl2:5", "cyclic:7"] {
            let (_, _, a) = table(s, 1);
            let (_, _, b) = table(s, 99);
            assert_eq!(a.degrees, b.degrees);
            for (ra, rb) in a.chi.iter().zip(&b.chi) {
                for (x, y) in ra.iter().zip(rb) {
                    assert!((x - y).norm() < 10.0 * DEFAULT_TOL, "{s}");
                }
            }
        }
    }

    #[test]
    fn conjugate_rows() {
        let (_, _, t) = table("cyclic:5", 1);
        for r in 0..5 {
            let s = t.conjugate_row(r);
            assert_eq!(t.conjugate_row(s), r);
        }
        assert_eq!(t.conjugate_row(0), 0);
    }

    #[test]
    fn csv_layout() {
        let (_, c, t) = table("sym:3", 1);
        let csv = t.to_csv(&c);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2 + 3);
        assert!(lines[0].starts_with("class_rep,"));
        assert!(lines[1].starts_with("class_size,1,"));
        for line in &lines {
            assert_eq!(line.split(',').count(), 1 + 2 * 3);
        }
        assert!(lines[2].starts_with("1,1.0000000000000000e0,"));
    }
}
