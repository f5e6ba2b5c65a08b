//! Concrete element representations for the built-in families.
//!
//! Every element is a short key of `u32` words; the law knows how to
//! compose and invert keys.

pub(crate) type Key = Box<[u32]>;

#[derive(Debug, Clone)]
pub(crate) enum Law {
    /// `[k]`, addition mod n.
    Cyclic(u32),
    /// `[k, f]` for r^k s^f.
    Dihedral(u32),
    /// Image array of a permutation; `(a*b)[i] = a[b[i]]`.
    Perm(usize),
    /// Row-major 2x2 matrix over F_p; `projective` folds by ±I.
    Sl2 { p: u64, projective: bool },
}

impl Law {
    pub fn identity(&self) -> Key {
        match *self {
            Law::Cyclic(_) => vec![0].into(),
            Law::Dihedral(_) => vec![0, 0].into(),
            Law::Perm(deg) => (0..deg as u32).collect(),
            Law::Sl2 { .. } => vec![1, 0, 0, 1].into(),
        }
    }

    pub fn compose(&self, a: &[u32], b: &[u32]) -> Key {
        match *self {
            Law::Cyclic(n) => vec![((a[0] as u64 + b[0] as u64) % n as u64) as u32].into(),
            Law::Dihedral(n) => {
                let n = n as u64;
                let turn = if a[1] == 0 {
                    b[0] as u64
                } else {
                    (n - b[0] as u64) % n
                };
                vec![((a[0] as u64 + turn) % n) as u32, a[1] ^ b[1]].into()
            }
            Law::Perm(_) => b.iter().map(|&i| a[i as usize]).collect(),
            Law::Sl2 { p, projective } => {
                let m = |x: u32, y: u32| x as u64 * y as u64;
                let c = [
                    (m(a[0], b[0]) + m(a[1], b[2])) % p,
                    (m(a[0], b[1]) + m(a[1], b[3])) % p,
                    (m(a[2], b[0]) + m(a[3], b[2])) % p,
                    (m(a[2], b[1]) + m(a[3], b[3])) % p,
                ];
                sl2_key(c, p, projective)
            }
        }
    }

    pub fn invert(&self, a: &[u32]) -> Key {
        match *self {
            Law::Cyclic(n) => vec![(n - a[0]) % n].into(),
            Law::Dihedral(n) => {
                if a[1] == 0 {
                    vec![(n - a[0]) % n, 0].into()
                } else {
                    a.into()
                }
            }
            Law::Perm(deg) => {
                let mut out = vec![0u32; deg];
                for (i, &img) in a.iter().enumerate() {
                    out[img as usize] = i as u32;
                }
                out.into()
            }
            Law::Sl2 { p, projective } => {
                let neg = |x: u32| (p - x as u64) % p;
                sl2_key([a[3] as u64, neg(a[1]), neg(a[2]), a[0] as u64], p, projective)
            }
        }
    }
}

/// Canonical key of a 2x2 matrix; for the projective group the
/// representative has its first nonzero entry in `1..=(p-1)/2`.
pub(crate) fn sl2_key(mut c: [u64; 4], p: u64, projective: bool) -> Key {
    if projective {
        let lead = c.iter().copied().find(|&x| x != 0).unwrap_or(0);
        if lead > (p - 1) / 2 {
            for x in c.iter_mut() {
                *x = (p - *x) % p;
            }
        }
    }
    c.iter().map(|&x| x as u32).collect()
}

pub(crate) fn cycle(deg: usize, points: &[usize]) -> Key {
    let mut img: Vec<u32> = (0..deg as u32).collect();
    for w in 0..points.len() {
        img[points[w]] = points[(w + 1) % points.len()] as u32;
    }
    img.into()
}
