//! Complex functions on a finite group and their Fourier data.
//!
//! Expectations are uniform over the group, so `||f||_p^p = E|f|^p` and
//! `(f * h)(x) = E_y f(x y^-1) h(y)`. Fourier coefficients are never
//! materialized as operators: every Hilbert-Schmidt quantity used here is a
//! trace and is computed from the character table.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::classes::ConjugacyData;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::hash::Fnv;

/// Tolerance for the class-function check in [`class_function_scalar`].
pub const CLASS_FUNCTION_TOL: f64 = 1e-10;
/// Relative tolerance for the Parseval self-check in [`spectral_profile`].
pub const PARSEVAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    values: Vec<Complex64>,
    group: u64,
}

impl GroupFunction {
    /// Wrap `values`, rejecting wrong lengths and non-finite entries.
    pub fn new(group: &GroupTable, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidFunction(format!(
                "length {} does not match group order {}",
                values.len(),
                group.order()
            )));
        }
        if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite value at element {i}")));
        }
        Ok(GroupFunction {
            values,
            group: group.fingerprint(),
        })
    }

    pub fn from_real(group: &GroupTable, values: &[f64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(group: &GroupTable, c: Complex64) -> Self {
        GroupFunction {
            values: vec![c; group.order()],
            group: group.fingerprint(),
        }
    }

    pub fn zero(group: &GroupTable) -> Self {
        Self::constant(group, Complex64::new(0.0, 0.0))
    }

    /// The 0/1 indicator of `set`.
    pub fn indicator(group: &GroupTable, set: &[usize]) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        for &x in set {
            group.check_index(x)?;
            values[x] = Complex64::new(1.0, 0.0);
        }
        Ok(GroupFunction {
            values,
            group: group.fingerprint(),
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn group_fingerprint(&self) -> u64 {
        self.group
    }

    #[inline]
    pub fn at(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    /// Build a function on the same group by mapping values.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GroupFunction {
            values: self.values.iter().map(|&z| f(z)).collect(),
            group: self.group,
        }
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Self {
        GroupFunction {
            values,
            group: self.group,
        }
    }

    pub fn check_same_group(&self, group: &GroupTable) -> Result<()> {
        if self.group == group.fingerprint() && self.values.len() == group.order() {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Content hash of the values, printed with verification witnesses.
    pub fn content_hash(&self) -> u64 {
        let mut h = Fnv::new();
        for z in &self.values {
            h.write_f64(z.re);
            h.write_f64(z.im);
        }
        h.finish()
    }

    /// Load from a JSON array of `[re, im]` pairs.
    pub fn from_json(group: &GroupTable, text: &str) -> Result<Self> {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
        Self::new(group, pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }

    pub fn to_json(&self) -> String {
        let pairs: Vec<[f64; 2]> = self.values.iter().map(|z| [z.re, z.im]).collect();
        serde_json::to_string(&pairs).expect("finite values serialize")
    }
}

pub fn mean(f: &GroupFunction) -> Complex64 {
    f.values.iter().sum::<Complex64>() / f.len() as f64
}

/// `(E|f|^p)^(1/p)`; `p = f64::INFINITY` gives the max modulus.
pub fn p_norm(f: &GroupFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Precondition(format!("p-norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.values.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let n = f.len() as f64;
    if p == 2.0 {
        return Ok((f.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / n).sqrt());
    }
    Ok((f.values.iter().map(|z| z.norm().powf(p)).sum::<f64>() / n).powf(1.0 / p))
}

pub fn norm2(f: &GroupFunction) -> f64 {
    p_norm(f, 2.0).expect("p = 2 is valid")
}

pub fn sup_norm(f: &GroupFunction) -> f64 {
    p_norm(f, f64::INFINITY).expect("p = inf is valid")
}

/// `E_x[f(x) h(x)]`, without conjugation.
pub fn pairing(f: &GroupFunction, h: &GroupFunction) -> Complex64 {
    f.values.iter().zip(&h.values).map(|(a, b)| a * b).sum::<Complex64>() / f.len() as f64
}

/// `(f * h)(x) = E_y[f(x y^-1) h(y)]`.
///
/// When `h` is supported on under a quarter of the group the sum runs over
/// its support only.
pub fn convolve(group: &GroupTable, f: &GroupFunction, h: &GroupFunction) -> Result<GroupFunction> {
    f.check_same_group(group)?;
    h.check_same_group(group)?;
    let n = group.order();
    let support: Vec<usize> = (0..n).filter(|&y| h.values[y] != Complex64::new(0.0, 0.0)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if support.len() * 4 < n {
        let inverses: Vec<usize> = support.iter().map(|&y| group.inv(y)).collect();
        for (x, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&y, &yi) in support.iter().zip(&inverses) {
                acc += f.values[group.mul(x, yi)] * h.values[y];
            }
            *slot = acc / n as f64;
        }
    } else if let Some(mul) = group.table() {
        let inv = group.inverses();
        for (x, slot) in out.iter_mut().enumerate() {
            let row = &mul[x * n..(x + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..n {
                acc += f.values[row[inv[y] as usize] as usize] * h.values[y];
            }
            *slot = acc / n as f64;
        }
    } else {
        for (x, slot) in out.iter_mut().enumerate() {
            let acc: Complex64 = (0..n)
                .map(|y| f.values[group.mul(x, group.inv(y))] * h.values[y])
                .sum();
            *slot = acc / n as f64;
        }
    }
    Ok(f.with_values(out))
}

/// `Delta_b f(x) = f(x) f(x b)`.
pub fn delta_shift(group: &GroupTable, f: &GroupFunction, b: usize) -> Result<GroupFunction> {
    f.check_same_group(group)?;
    group.check_index(b)?;
    let values = (0..group.order())
        .map(|x| f.values[x] * f.values[group.mul(x, b)])
        .collect();
    Ok(f.with_values(values))
}

/// Split `f = E[f] + f0` with `f0` mean zero.
pub fn mean_zero_decompose(f: &GroupFunction) -> (Complex64, GroupFunction) {
    let m = mean(f);
    (m, f.map(|z| z - m))
}

/// The scaled density `(|G| / |S|) 1_S`, which has mean 1.
pub fn mu_set(group: &GroupTable, set: &[usize]) -> Result<GroupFunction> {
    let mut ind = GroupFunction::indicator(group, set)?;
    let size = ind.values.iter().filter(|z| z.re != 0.0).count();
    if size == 0 {
        return Err(Error::Precondition("scaled density of an empty set".into()));
    }
    let scale = group.order() as f64 / size as f64;
    for z in ind.values.iter_mut() {
        *z *= scale;
    }
    Ok(ind)
}

/// The translate `g C(g)` of the conjugacy class of `g`.
pub fn translated_class(group: &GroupTable, classes: &ConjugacyData, g: usize) -> Vec<usize> {
    classes.class_elements[classes.class_of(g)]
        .iter()
        .map(|&c| group.mul(g, c))
        .collect()
}

/// `mu_{g C(g)}`.
pub fn mu_translated_class(
    group: &GroupTable,
    classes: &ConjugacyData,
    g: usize,
) -> Result<GroupFunction> {
    group.check_index(g)?;
    mu_set(group, &translated_class(group, classes, g))
}

/// `mu_{g^-1 C(g^-1)}`, the density convolved against in the Gamma functional.
pub fn mu_inverse_translated_class(
    group: &GroupTable,
    classes: &ConjugacyData,
    g: usize,
) -> Result<GroupFunction> {
    group.check_index(g)?;
    mu_translated_class(group, classes, group.inv(g))
}

/// Per-irreducible squared Hilbert-Schmidt norms of the Fourier transform.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub hs2: Vec<f64>,
    /// `|sum_r d_r hs2[r] - ||f||_2^2|`.
    pub parseval_residual: f64,
}

impl SpectralProfile {
    pub fn weighted_total(&self, table: &CharacterTable) -> f64 {
        self.hs2
            .iter()
            .zip(&table.degrees)
            .map(|(h, &d)| d as f64 * h)
            .sum()
    }
}

/// `||f^(rho)||_HS^2 = E_{x,y}[conj f(x) f(y) chi_rho(x^-1 y)]` for every
/// irreducible.
///
/// The correlation `R[c] = sum_{x^-1 y in c} conj f(x) f(y)` is aggregated
/// once per class, after which each irreducible costs O(k).
pub fn spectral_profile(
    group: &GroupTable,
    f: &GroupFunction,
    table: &CharacterTable,
    classes: &ConjugacyData,
) -> Result<SpectralProfile> {
    let profile = spectral_profile_unchecked(group, f, table, classes)?;
    let scale = norm2(f).powi(2).max(1.0);
    if profile.parseval_residual >= PARSEVAL_TOL * scale {
        return Err(Error::Certification(format!(
            "Parseval residual {:.3e}",
            profile.parseval_residual
        )));
    }
    Ok(profile)
}

/// [`spectral_profile`] without the Parseval self-check, for callers that
/// report the residual themselves.
pub fn spectral_profile_unchecked(
    group: &GroupTable,
    f: &GroupFunction,
    table: &CharacterTable,
    classes: &ConjugacyData,
) -> Result<SpectralProfile> {
    f.check_same_group(group)?;
    let n = group.order();
    let zero = Complex64::new(0.0, 0.0);
    let mut corr = vec![zero; classes.k];
    for x in 0..n {
        let fx = f.values[x].conj();
        if fx == zero {
            continue;
        }
        // Substituting y = x z: the pair contributes to the class of z.
        match group.table() {
            Some(mul) => {
                let row = &mul[x * n..(x + 1) * n];
                for z in 0..n {
                    corr[classes.class_of[z] as usize] += fx * f.values[row[z] as usize];
                }
            }
            None => {
                for z in 0..n {
                    corr[classes.class_of(z)] += fx * f.values[group.mul(x, z)];
                }
            }
        }
    }

    let n2 = (n * n) as f64;
    let scale = norm2(f).powi(2).max(1.0);
    let mut hs2 = Vec::with_capacity(table.k);
    for r in 0..table.k {
        let v: Complex64 = corr
            .iter()
            .zip(&table.chi[r])
            .map(|(c, chi)| c * chi)
            .sum::<Complex64>()
            / n2;
        if v.im.abs() >= 1e-8 * scale {
            return Err(Error::Certification(format!(
                "imaginary residue {:.3e} in HS norm of row {r}",
                v.im
            )));
        }
        hs2.push(v.re.max(0.0));
    }
    let mut profile = SpectralProfile {
        hs2,
        parseval_residual: 0.0,
    };
    profile.parseval_residual = (profile.weighted_total(table) - norm2(f).powi(2)).abs();
    Ok(profile)
}

/// True when `f` is constant on every conjugacy class within `tol`.
pub fn is_class_function(f: &GroupFunction, classes: &ConjugacyData, tol: f64) -> bool {
    classes.class_elements.iter().all(|members| {
        let v = f.values[members[0]];
        members.iter().all(|&x| (f.values[x] - v).norm() <= tol)
    })
}

/// The scalar `c` with `f^(rho_r) = c I` for a class function `f`:
/// `c = E_x[f(x) chi_r(x)] / d_r`.
pub fn class_function_scalar(
    f: &GroupFunction,
    table: &CharacterTable,
    classes: &ConjugacyData,
    r: usize,
) -> Result<Complex64> {
    if !is_class_function(f, classes, CLASS_FUNCTION_TOL) {
        return Err(Error::InvalidFunction("not a class function".into()));
    }
    let n = f.len() as f64;
    let total: Complex64 = (0..classes.k)
        .map(|c| f.values[classes.representatives[c]] * table.chi[r][c] * classes.sizes[c] as f64)
        .sum();
    Ok(total / (n * table.degrees[r] as f64))
}

/// Rebuild a class function from its scalars:
/// `f(x) = sum_r d_r c_r conj(chi_r(x))`.
pub fn invert_class_function(
    group: &GroupTable,
    scalars: &[Complex64],
    table: &CharacterTable,
    classes: &ConjugacyData,
) -> Result<GroupFunction> {
    if scalars.len() != table.k {
        return Err(Error::Precondition(format!(
            "expected {} scalars, got {}",
            table.k,
            scalars.len()
        )));
    }
    let per_class: Vec<Complex64> = (0..classes.k)
        .map(|c| {
            (0..table.k)
                .map(|r| scalars[r] * table.degrees[r] as f64 * table.chi[r][c].conj())
                .sum()
        })
        .collect();
    let values = classes
        .class_of
        .iter()
        .map(|&c| per_class[c as usize])
        .collect();
    GroupFunction::new(group, values)
}
