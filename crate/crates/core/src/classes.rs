//! Conjugacy classes and class-multiplication coefficients.

use serde::Serialize;

use crate::group::GroupTable;

/// Partition of a group into conjugacy classes.
///
/// Classes are numbered in order of their smallest element, so class 0 is
/// always `{e}` and each representative is the smallest index in its class.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyData {
    pub k: usize,
    pub class_of: Vec<u32>,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    pub class_elements: Vec<Vec<usize>>,
}

impl ConjugacyData {
    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    /// Index of the class containing the inverses of class `c`.
    pub fn inverse_class(&self, group: &GroupTable, c: usize) -> usize {
        self.class_of(group.inv(self.representatives[c]))
    }
}

/// Orbits of the conjugation action, found by flood fill along
/// `x -> g^{-1} x g` for the group's generators.
pub fn conjugacy_classes(group: &GroupTable) -> ConjugacyData {
    let n = group.order();
    let gens = group.generators();
    let mut class_of = vec![u32::MAX; n];
    let mut representatives = Vec::new();
    let mut class_elements: Vec<Vec<usize>> = Vec::new();

    for start in 0..n {
        if class_of[start] != u32::MAX {
            continue;
        }
        let c = representatives.len() as u32;
        representatives.push(start);
        class_of[start] = c;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let y = members[head];
            head += 1;
            for &g in gens {
                let z = group.conjugate(y, g);
                if class_of[z] == u32::MAX {
                    class_of[z] = c;
                    members.push(z);
                }
            }
        }
        members.sort_unstable();
        class_elements.push(members);
    }

    let sizes = class_elements.iter().map(Vec::len).collect();
    ConjugacyData {
        k: representatives.len(),
        class_of,
        representatives,
        sizes,
        class_elements,
    }
}

/// `M_i[j][l] = #{(a, b) : a in C_i, b in C_j, a b = rep(C_l)}`.
///
/// The class sums satisfy `K_i K_j = sum_l M_i[j][l] K_l`.
pub fn class_mult_coefficients(group: &GroupTable, classes: &ConjugacyData, i: usize) -> Vec<Vec<u64>> {
    let k = classes.k;
    let mut m = vec![vec![0u64; k]; k];
    for (l, &z) in classes.representatives.iter().enumerate() {
        for &a in &classes.class_elements[i] {
            let b = group.mul(group.inv(a), z);
            m[classes.class_of(b)][l] += 1;
        }
    }
    m
}
