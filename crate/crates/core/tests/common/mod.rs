//! Random Galois lattices and local data for the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use torus_core::catalog::small_groups;
use torus_core::local::LocalTorusData;
use torus_core::{FiniteGroup, GaloisLattice, IntMatrix, Subgroup};

/// Permutation matrices of the left action on the cosets `xH`.
fn coset_action(g: &FiniteGroup, h: &Subgroup) -> Vec<Vec<usize>> {
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for x in g.elements() {
        let mut c: Vec<usize> = h.elements().iter().map(|&y| g.mul(x, y)).collect();
        c.sort_unstable();
        if !cosets.contains(&c) {
            cosets.push(c);
        }
    }
    g.elements()
        .map(|s| {
            cosets
                .iter()
                .map(|c| {
                    let image = g.mul(s, c[0]);
                    cosets.iter().position(|d| d.contains(&image)).unwrap()
                })
                .collect()
        })
        .collect()
}

fn permutation_matrix(p: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(p.len(), p.len());
    for (i, &j) in p.iter().enumerate() {
        m[(j, i)] = BigInt::from(1);
    }
    m
}

pub fn permutation_module(g: &FiniteGroup, h: &Subgroup) -> GaloisLattice {
    let perms = coset_action(g, h);
    let m = perms[0].len();
    GaloisLattice::new(g.clone(), m, perms.iter().map(|p| permutation_matrix(p)).collect()).unwrap()
}

/// The sum-zero sublattice of a permutation module.
pub fn augmentation_module(g: &FiniteGroup, h: &Subgroup) -> GaloisLattice {
    let perm = permutation_module(g, h);
    let m = perm.rank();
    let mut basis = IntMatrix::zeros(m, m - 1);
    for i in 0..m - 1 {
        basis[(i, i)] = BigInt::from(1);
        basis[(m - 1, i)] = BigInt::from(-1);
    }
    perm.sublattice(&basis).unwrap()
}

/// A permutation module modulo its all-ones vector.
pub fn norm_quotient_module(g: &FiniteGroup, h: &Subgroup) -> GaloisLattice {
    let perms = coset_action(g, h);
    let m = perms[0].len();
    // basis: images of e_1..e_{m-1}; e_m = -(e_1 + ... + e_{m-1})
    let action = perms
        .iter()
        .map(|p| {
            let mut a = IntMatrix::zeros(m - 1, m - 1);
            for i in 0..m - 1 {
                let j = p[i];
                if j < m - 1 {
                    a[(j, i)] += BigInt::from(1);
                } else {
                    for r in 0..m - 1 {
                        a[(r, i)] -= BigInt::from(1);
                    }
                }
            }
            a
        })
        .collect();
    GaloisLattice::new(g.clone(), m - 1, action).unwrap()
}

/// Rank one, with elements outside the index-two subgroup `k` acting by -1.
pub fn sign_module(g: &FiniteGroup, k: &Subgroup) -> GaloisLattice {
    let action = g
        .elements()
        .map(|x| IntMatrix::from_rows(&[[if k.contains(x) { 1 } else { -1 }]]))
        .collect();
    GaloisLattice::new(g.clone(), 1, action).unwrap()
}

pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        for col in 0..n {
            let v = &p[(j, col)] * &c;
            p[(i, col)] += v;
        }
    }
    p
}

/// A random lattice of rank `1..=max_rank` built from permutation,
/// augmentation, norm-quotient, sign and trivial blocks, then conjugated by
/// a random unimodular matrix.
pub fn random_lattice<R: Rng>(rng: &mut R, g: &FiniteGroup, max_rank: usize) -> GaloisLattice {
    let subgroups = g.subgroups();
    let index_two: Vec<&Subgroup> = subgroups
        .iter()
        .filter(|k| 2 * k.order() == g.order())
        .collect();
    let target = rng.gen_range(1..=max_rank);
    let mut lattice = GaloisLattice::new(g.clone(), 0, vec![IntMatrix::zeros(0, 0); g.order()]).unwrap();
    let mut attempts = 0;
    while lattice.rank() < target && attempts < 50 {
        attempts += 1;
        let room = target - lattice.rank();
        let h = subgroups.choose(rng).unwrap();
        let index = g.order() / h.order();
        let block = match rng.gen_range(0..5) {
            0 if index <= room => permutation_module(g, h),
            1 if index >= 2 && index - 1 <= room => augmentation_module(g, h),
            2 if index >= 2 && index - 1 <= room => norm_quotient_module(g, h),
            3 if !index_two.is_empty() => sign_module(g, index_two.choose(rng).unwrap()),
            4 => torus_core::catalog::split_torus(g, 1),
            _ => continue,
        };
        lattice = lattice.direct_sum(&block).unwrap();
    }
    if lattice.rank() == 0 {
        lattice = torus_core::catalog::split_torus(g, 1);
    }
    let p = random_unimodular(rng, lattice.rank());
    lattice.conjugate_by(&p).unwrap()
}

pub fn valid_frobenius(g: &FiniteGroup, inertia: &Subgroup) -> Vec<usize> {
    g.elements()
        .filter(|&f| inertia.quotient_generated_by(g, &g.whole(), f))
        .collect()
}

/// Normal subgroups `I` of `g` with `Γ/I` cyclic, filtered by `keep`.
pub fn admissible_inertia(g: &FiniteGroup, keep: impl Fn(&Subgroup) -> bool) -> Vec<Subgroup> {
    g.normal_subgroups()
        .into_iter()
        .filter(|i| keep(i) && !valid_frobenius(g, i).is_empty())
        .collect()
}

/// Groups of order `<= 8` that have at least one admissible inertia group
/// under `keep`.
pub fn random_group<R: Rng>(rng: &mut R, keep: &dyn Fn(&Subgroup) -> bool) -> FiniteGroup {
    let groups = small_groups();
    loop {
        let (_, g) = groups.choose(rng).unwrap();
        if !admissible_inertia(g, keep).is_empty() {
            return g.clone();
        }
    }
}

/// Random local data with `|I| <= max_inertia` and rank `<= max_rank`.
pub fn random_local<R: Rng>(rng: &mut R, max_inertia: usize, max_rank: usize) -> LocalTorusData {
    let keep = |i: &Subgroup| i.order() <= max_inertia;
    let g = random_group(rng, &keep);
    let lattice = random_lattice(rng, &g, max_rank);
    let inertia = admissible_inertia(&g, keep).choose(rng).unwrap().clone();
    let f = *valid_frobenius(&g, &inertia).choose(rng).unwrap();
    let q = BigInt::from(*[2, 3, 4, 5, 7, 8, 9, 11].choose(rng).unwrap());
    LocalTorusData::new(lattice, inertia, f, q).unwrap()
}

/// Random local data whose inertia acts trivially on the lattice.
pub fn random_unramified<R: Rng>(rng: &mut R, max_rank: usize) -> LocalTorusData {
    loop {
        let g = random_group(rng, &|_| true);
        let lattice = random_lattice(rng, &g, max_rank);
        let candidates = admissible_inertia(&g, |i| lattice.acts_trivially(i));
        if let Some(inertia) = candidates.choose(rng) {
            let f = *valid_frobenius(&g, inertia).choose(rng).unwrap();
            let q = BigInt::from(*[2, 3, 4, 5, 7].choose(rng).unwrap());
            return LocalTorusData::new(lattice, inertia.clone(), f, q).unwrap();
        }
    }
}

/// `det` by cofactor expansion in `i128`, independent of the library.
pub fn laplace_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * laplace_det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Invariant factors `D_k / D_{k-1}` from gcds of `k × k` minors, for a
/// matrix of full rank; zero factors mark the rank deficiency.
pub fn invariant_factors_by_minors(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut previous = 1i128;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for r in combinations(rows, k) {
            for c in combinations(cols, k) {
                let minor: Vec<Vec<i128>> = r.iter().map(|&i| c.iter().map(|&j| m[i][j]).collect()).collect();
                d = gcd(d, laplace_det(&minor));
            }
        }
        if d == 0 {
            out.extend(std::iter::repeat_n(0, rows.min(cols) - k + 1));
            break;
        }
        out.push(d / previous);
        previous = d;
    }
    out
}

pub fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(|x| i128::try_from(x.clone()).unwrap()).collect())
        .collect()
}
