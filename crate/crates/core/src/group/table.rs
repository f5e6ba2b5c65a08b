use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::law::{Key, Law};
use crate::group::{GroupSpec, DENSE_LIMIT, MAX_ORDER};
use crate::hash::Fnv;

#[derive(Debug, Clone)]
enum Storage {
    /// Row-major n x n table.
    Dense(Vec<u32>),
    /// Element keys plus a reverse index; products composed on demand.
    Keyed {
        law: Law,
        width: usize,
        keys: Vec<u32>,
        index: HashMap<Key, u32>,
    },
    /// Direct product of two tables, `(a, b)` stored at `a * n2 + b`.
    Product(Arc<GroupTable>, Arc<GroupTable>),
}

/// A finite group on the element indices `0..n`, with 0 the identity.
///
/// Groups up to [`DENSE_LIMIT`] elements carry a full multiplication table;
/// larger ones compose on demand and reject the quadratic kernels.
#[derive(Debug, Clone)]
pub struct GroupTable {
    n: usize,
    inv: Vec<u32>,
    storage: Storage,
    spec: Option<GroupSpec>,
    generators: Vec<usize>,
    fingerprint: u64,
}

/// Result of a breadth-first closure before a table is materialized.
struct Closure<T> {
    elements: Vec<T>,
    /// For every element but the identity: (parent index, generator slot)
    /// with `element = parent * generators[slot]`.
    parent: Vec<(u32, u32)>,
    /// `right[a * s + j] = a * generators[j]`.
    right: Vec<u32>,
    generator_indices: Vec<usize>,
}

fn closure<T, F>(identity: T, generators: &[T], compose: F, limit: usize) -> Result<(Closure<T>, HashMap<T, u32>)>
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let s = generators.len();
    let mut index: HashMap<T, u32> = HashMap::new();
    let mut elements = vec![identity.clone()];
    let mut parent = vec![(0u32, 0u32)];
    index.insert(identity, 0);
    let mut right: Vec<u32> = Vec::new();

    let mut head = 0;
    while head < elements.len() {
        for (j, g) in generators.iter().enumerate() {
            let y = compose(&elements[head], g);
            let idx = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= limit {
                        return Err(Error::TooLarge { limit });
                    }
                    let i = elements.len() as u32;
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push((head as u32, j as u32));
                    i
                }
            };
            right.push(idx);
        }
        head += 1;
    }
    debug_assert_eq!(right.len(), elements.len() * s);

    if elements.len() < 2 {
        return Err(Error::TrivialGroup);
    }
    let generator_indices = generators.iter().map(|g| index[g] as usize).collect();
    Ok((
        Closure {
            elements,
            parent,
            right,
            generator_indices,
        },
        index,
    ))
}

impl<T> Closure<T> {
    /// Fill the dense table using `mul[a][b] = mul[a][parent(b)] * gen`.
    fn dense_table(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.elements.len();
        let s = self.generator_indices.len();
        let mut mul = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let row = &mut mul[a * n..(a + 1) * n];
            row[0] = a as u32;
            for b in 1..n {
                let (p, j) = self.parent[b];
                let v = self.right[row[p as usize] as usize * s + j as usize];
                row[b] = v;
                if v == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        (mul, inv)
    }
}

/// Build a group by breadth-first closure of `generators` under `compose`.
///
/// Element 0 is `identity`; the rest are numbered in discovery order,
/// applying generators on the right in the listed order. The result always
/// carries a dense table, so at most [`DENSE_LIMIT`] elements are accepted.
pub fn build_closure<T, F>(identity: T, generators: &[T], compose: F) -> Result<GroupTable>
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let (cl, _) = closure(identity, generators, compose, DENSE_LIMIT)?;
    let (mul, inv) = cl.dense_table();
    let mut table = GroupTable {
        n: cl.elements.len(),
        inv,
        storage: Storage::Dense(mul),
        spec: None,
        generators: cl.generator_indices,
        fingerprint: 0,
    };
    table.fingerprint = table.table_fingerprint();
    Ok(table)
}

/// Build the group named by `spec`.
pub fn construct_group(spec: &GroupSpec) -> Result<GroupTable> {
    spec.validate()?;
    match spec {
        GroupSpec::Prod(parts) => {
            let mut acc = construct_group(&parts[0])?;
            for part in &parts[1..] {
                acc = direct_product(&acc, &construct_group(part)?)?;
            }
            Ok(acc)
        }
        _ => {
            let (law, gens) = family_generators(spec);
            let mut table = from_law(law, &gens)?;
            table.spec = Some(spec.clone());
            table.fingerprint = spec_fingerprint(spec);
            Ok(table)
        }
    }
}

fn family_generators(spec: &GroupSpec) -> (Law, Vec<Key>) {
    use crate::group::law::cycle;
    match *spec {
        GroupSpec::Cyclic(n) => (Law::Cyclic(n as u32), vec![vec![1].into()]),
        GroupSpec::Dihedral(n) => (
            Law::Dihedral(n as u32),
            vec![vec![1 % n as u32, 0].into(), vec![0, 1].into()],
        ),
        GroupSpec::Sym(n) => {
            let deg = n as usize;
            let all: Vec<usize> = (0..deg).collect();
            (Law::Perm(deg), vec![cycle(deg, &[0, 1]), cycle(deg, &all)])
        }
        GroupSpec::Alt(n) => {
            let deg = n as usize;
            let gens = (2..deg).map(|k| cycle(deg, &[0, 1, k])).collect();
            (Law::Perm(deg), gens)
        }
        GroupSpec::Sl2(p) | GroupSpec::Psl2(p) => {
            let projective = matches!(spec, GroupSpec::Psl2(_));
            let law = Law::Sl2 { p, projective };
            let t = crate::group::law::sl2_key([1, 1, 0, 1], p, projective);
            let w = crate::group::law::sl2_key([0, 1, p - 1, 0], p, projective);
            (law, vec![t, w])
        }
        GroupSpec::Prod(_) => unreachable!("products are assembled by direct_product"),
    }
}

fn from_law(law: Law, gens: &[Key]) -> Result<GroupTable> {
    let compose = |a: &Key, b: &Key| law.compose(a, b);
    let (cl, index) = closure(law.identity(), gens, compose, MAX_ORDER)?;
    let n = cl.elements.len();
    if n <= DENSE_LIMIT {
        let (mul, inv) = cl.dense_table();
        return Ok(GroupTable {
            n,
            inv,
            storage: Storage::Dense(mul),
            spec: None,
            generators: cl.generator_indices,
            fingerprint: 0,
        });
    }
    let width = cl.elements[0].len();
    let inv = cl
        .elements
        .iter()
        .map(|k| index[&law.invert(k)])
        .collect();
    let keys = cl.elements.iter().flat_map(|k| k.iter().copied()).collect();
    Ok(GroupTable {
        n,
        inv,
        storage: Storage::Keyed {
            law,
            width,
            keys,
            index,
        },
        spec: None,
        generators: cl.generator_indices,
        fingerprint: 0,
    })
}

/// Direct product `G1 x G2`; the pair `(a, b)` gets index `a * n2 + b`.
pub fn direct_product(g1: &GroupTable, g2: &GroupTable) -> Result<GroupTable> {
    let (n1, n2) = (g1.n, g2.n);
    let n = n1
        .checked_mul(n2)
        .filter(|&n| n <= MAX_ORDER)
        .ok_or(Error::TooLarge { limit: MAX_ORDER })?;

    let inv = (0..n)
        .map(|x| (g1.inv(x / n2) * n2 + g2.inv(x % n2)) as u32)
        .collect();
    let storage = if n <= DENSE_LIMIT {
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let (a, b) = (x / n2, x % n2);
            let row = &mut mul[x * n..(x + 1) * n];
            for c in 0..n1 {
                let ac = g1.mul(a, c) * n2;
                for d in 0..n2 {
                    row[c * n2 + d] = (ac + g2.mul(b, d)) as u32;
                }
            }
        }
        Storage::Dense(mul)
    } else {
        Storage::Product(Arc::new(g1.clone()), Arc::new(g2.clone()))
    };

    let generators = g1
        .generators
        .iter()
        .map(|&g| g * n2)
        .chain(g2.generators.iter().copied())
        .collect();
    let spec = match (&g1.spec, &g2.spec) {
        (Some(s1), Some(s2)) => {
            let mut parts = match s1 {
                GroupSpec::Prod(p) => p.clone(),
                other => vec![other.clone()],
            };
            parts.push(s2.clone());
            Some(GroupSpec::Prod(parts))
        }
        _ => None,
    };
    let mut table = GroupTable {
        n,
        inv,
        storage,
        spec,
        generators,
        fingerprint: 0,
    };
    table.fingerprint = match &table.spec {
        Some(s) => spec_fingerprint(s),
        None => {
            let mut h = Fnv::new();
            h.write_u64(g1.fingerprint);
            h.write_u64(g2.fingerprint);
            h.finish()
        }
    };
    Ok(table)
}

fn spec_fingerprint(spec: &GroupSpec) -> u64 {
    let mut h = Fnv::new();
    h.write_bytes(spec.to_string().as_bytes());
    h.finish()
}

impl GroupTable {
    /// Assemble a group from raw dense tables, checking the group axioms.
    pub fn from_tables(n: usize, mul: Vec<u32>, inv: Vec<u32>) -> Result<GroupTable> {
        if n < 2 {
            return Err(Error::TrivialGroup);
        }
        if n > DENSE_LIMIT {
            return Err(Error::NotDense(n));
        }
        if mul.len() != n * n || inv.len() != n {
            return Err(Error::Format("table lengths do not match order".into()));
        }
        let mut table = GroupTable {
            n,
            inv,
            storage: Storage::Dense(mul),
            spec: None,
            generators: (1..n).collect(),
            fingerprint: 0,
        };
        table.check_axioms(0)?;
        table.fingerprint = table.table_fingerprint();
        Ok(table)
    }

    fn table_fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        h.write_u64(self.n as u64);
        if let Storage::Dense(mul) = &self.storage {
            for &v in mul {
                h.write_u32(v);
            }
        }
        h.finish()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Stable identity used to tie functions to the group they live on.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// The flat row-major table, if materialized.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.storage {
            Storage::Dense(mul) => Some(mul),
            _ => None,
        }
    }

    /// The flat table, or [`Error::NotDense`] for large groups.
    pub fn require_dense(&self) -> Result<&[u32]> {
        self.table().ok_or(Error::NotDense(self.n))
    }

    pub fn inverses(&self) -> &[u32] {
        &self.inv
    }

    /// Product `a * b` without bounds checks beyond slice indexing.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.storage {
            Storage::Dense(mul) => mul[a * self.n + b] as usize,
            Storage::Keyed {
                law,
                width,
                keys,
                index,
            } => {
                let ka = &keys[a * width..(a + 1) * width];
                let kb = &keys[b * width..(b + 1) * width];
                index[&law.compose(ka, kb)] as usize
            }
            Storage::Product(g1, g2) => {
                let n2 = g2.n;
                g1.mul(a / n2, b / n2) * n2 + g2.mul(a % n2, b % n2)
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Checked product.
    pub fn try_mul(&self, a: usize, b: usize) -> Result<usize> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.mul(a, b))
    }

    pub fn check_index(&self, a: usize) -> Result<()> {
        if a < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: a,
                order: self.n,
            })
        }
    }

    /// `g^{-1} x g`.
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// True iff every pair of generators commutes (equivalently, every pair
    /// of elements).
    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().enumerate().all(|(i, &a)| {
            gens[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Verify identity, inverse, Latin-square and associativity laws.
    ///
    /// Associativity is checked on every triple for `n <= 256`, otherwise on
    /// `10 n^2` triples drawn from `seed`.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::Format(msg));
        let mut seen = vec![0usize; n];
        for a in 0..n {
            if self.inv[a] as usize >= n {
                return bad(format!("inverse of {a} out of range"));
            }
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return bad(format!("identity law fails at {a}"));
            }
            if self.mul(a, self.inv(a)) != 0 {
                return bad(format!("inverse law fails at {a}"));
            }
        }
        if let Some(mul) = self.table() {
            for (row_idx, row) in mul.chunks_exact(n).enumerate() {
                let stamp = row_idx + 1;
                for &v in row {
                    let v = v as usize;
                    if v >= n || seen[v] == stamp {
                        return bad(format!("row {row_idx} is not a permutation"));
                    }
                    seen[v] = stamp;
                }
            }
            seen.fill(0);
            for col in 0..n {
                let stamp = col + 1;
                for row in 0..n {
                    let v = mul[row * n + col] as usize;
                    if seen[v] == stamp {
                        return bad(format!("column {col} is not a permutation"));
                    }
                    seen[v] = stamp;
                }
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return bad(format!("associativity fails at ({a},{b},{c})"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..10 * n * n {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return bad(format!("associativity fails at ({a},{b},{c})"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_spec;

    fn build(s: &str) -> GroupTable {
        construct_group(&parse_spec(s).unwrap()).unwrap()
    }

    /// Permutations as image arrays, composed right-to-left.
    fn perm_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
        b.iter().map(|&i| a[i as usize]).collect()
    }

    #[test]
    fn cyclic_indexing_is_modular_addition() {
        let g = build("cyclic:4");
        assert_eq!(g.order(), 4);
        assert_eq!(g.mul(2, 3), 1);
        let z6 = build("cyclic:6");
        assert_eq!(z6.mul(2, 5), 1);
        assert!(z6.is_abelian());
    }

    #[test]
    fn family_orders() {
        for (s, n) in [
            ("sl2:5", 120),
            ("sl2:7", 336),
            ("psl2:7", 168),
            ("psl2:5", 60),
            ("alt:5", 60),
            ("alt:4", 12),
            ("sym:4", 24),
            ("dihedral:5", 10),
            ("dihedral:2", 4),
            ("prod:cyclic:2+cyclic:3", 6),
        ] {
            assert_eq!(build(s).order(), n, "{s}");
        }
    }

    #[test]
    fn closure_rejects_trivial_group() {
        let r = build_closure(0u8, &[0u8], |_, _| 0u8);
        assert!(matches!(r, Err(Error::TrivialGroup)));
    }

    #[test]
    fn closure_of_s3_permutations() {
        let id = vec![0u8, 1, 2];
        let g = build_closure(id, &[vec![1, 0, 2], vec![1, 2, 0]], |a, b| perm_mul(a, b)).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        g.check_axioms(0).unwrap();
    }

    #[test]
    fn s3_transposition_times_three_cycle() {
        // Element indices for sym:3 follow BFS from [(0 1), (0 1 2)]:
        // 0 = e, 1 = (0 1), 2 = (0 1 2), then 1*(0 1 2), 2*(0 1), 2*(0 1 2).
        let id = vec![0u8, 1, 2];
        let t = vec![1u8, 0, 2];
        let c = vec![1u8, 2, 0];
        let mut elems = vec![id.clone(), t.clone(), c.clone()];
        for (p, s) in [(1, &c), (2, &t), (2, &c)] {
            let e = perm_mul(&elems[p], s);
            if !elems.contains(&e) {
                elems.push(e);
            }
        }
        let g = build("sym:3");
        let prod = perm_mul(&t, &c);
        // (1 2)(1 2 3) = (2 3) in 1-based cycle notation.
        assert_eq!(prod, vec![0, 2, 1]);
        let idx = elems.iter().position(|e| *e == prod).unwrap();
        assert_eq!(g.mul(1, 2), idx);
    }

    #[test]
    fn axioms_hold_for_families() {
        for s in [
            "cyclic:12",
            "dihedral:6",
            "sym:4",
            "alt:5",
            "sl2:5",
            "psl2:7",
            "prod:alt:4+cyclic:3",
        ] {
            let g = build(s);
            g.check_axioms(1).unwrap();
            for a in 0..g.order() {
                assert_eq!(g.inv(g.inv(a)), a);
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = build("sl2:7");
        let b = build("sl2:7");
        assert_eq!(a.table(), b.table());
        assert_eq!(a.inverses(), b.inverses());
        assert_eq!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn product_indexing() {
        let g1 = build("cyclic:2");
        let g2 = build("cyclic:3");
        let p = direct_product(&g1, &g2).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.is_abelian());
        for x in 0..6 {
            for y in 0..6 {
                let expect = ((x / 3 + y / 3) % 2) * 3 + (x % 3 + y % 3) % 3;
                assert_eq!(p.mul(x, y), expect);
            }
        }
        assert_eq!(p.spec().unwrap().to_string(), "prod:cyclic:2+cyclic:3");
    }

    #[test]
    fn abelian_detection() {
        assert!(build("cyclic:12").is_abelian());
        assert!(!build("sym:3").is_abelian());
        assert!(build("prod:cyclic:4+cyclic:6").is_abelian());
        assert!(build("dihedral:2").is_abelian());
        assert!(!build("prod:cyclic:4+dihedral:3").is_abelian());
    }

    #[test]
    fn large_groups_compose_on_demand() {
        // |SL(2,23)| = 12144 exceeds the dense limit.
        let g = build("sl2:23");
        assert_eq!(g.order(), 12144);
        assert!(!g.is_dense());
        assert!(matches!(g.require_dense(), Err(Error::NotDense(12144))));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let (a, b, c) = (
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
            );
            assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        let big = direct_product(&build("alt:5"), &build("sym:5")).unwrap();
        assert_eq!(big.order(), 7200);
        assert!(big.is_dense());
        let huge = direct_product(&build("alt:5"), &build("alt:5")).unwrap();
        assert!(huge.is_dense());
        let keyed_prod = direct_product(&build("psl2:7"), &build("alt:5")).unwrap();
        assert_eq!(keyed_prod.order(), 10080);
        assert!(!keyed_prod.is_dense());
        assert_eq!(keyed_prod.mul(61, keyed_prod.inv(61)), 0);
    }
}
