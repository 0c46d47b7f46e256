//! Standard groups and tori used as fixtures and CLI templates.

use num_bigint::BigInt;

use crate::abelian::IntMatrix;
use crate::error::TorusError;
use crate::group::FiniteGroup;
use crate::lattice::GaloisLattice;

/// `Z/n` with element `k` standing for `σ^k`.
pub fn cyclic_group(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group of order 0");
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::new(table).expect("Z/n is a group")
}

/// Dihedral group of order `2n`; element `e * n + k` is `r^k s^e`.
pub fn dihedral_group(n: usize) -> FiniteGroup {
    assert!(n >= 1, "dihedral group needs n >= 1");
    let elem = |k: usize, e: usize| e * n + k;
    let table = (0..2 * n)
        .map(|x| {
            let (a, e) = (x % n, x / n);
            (0..2 * n)
                .map(|y| {
                    let (b, f) = (y % n, y / n);
                    let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                    elem(k, (e + f) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::new(table).expect("dihedral group is a group")
}

/// Quaternion group; element `2 * u + s` is `(-1)^s * [1, i, j, k][u]`.
pub fn quaternion_group() -> FiniteGroup {
    // unit products: (sign, unit) for units 1, i, j, k
    fn unit_mul(u: usize, v: usize) -> (usize, usize) {
        match (u, v) {
            (0, v) => (0, v),
            (u, 0) => (0, u),
            (u, v) if u == v => (1, 0),
            (1, 2) => (0, 3),
            (2, 3) => (0, 1),
            (3, 1) => (0, 2),
            (2, 1) => (1, 3),
            (3, 2) => (1, 1),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    }
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, u) = unit_mul(x / 2, y / 2);
                    2 * u + (s + x % 2 + y % 2) % 2
                })
                .collect()
        })
        .collect();
    FiniteGroup::new(table).expect("Q8 is a group")
}

/// One representative of every isomorphism type of group of order `<= 8`.
pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let c2 = cyclic_group(2);
    vec![
        ("C1", cyclic_group(1)),
        ("C2", cyclic_group(2)),
        ("C3", cyclic_group(3)),
        ("C4", cyclic_group(4)),
        ("C2xC2", c2.direct_product(&c2)),
        ("C5", cyclic_group(5)),
        ("C6", cyclic_group(6)),
        ("S3", dihedral_group(3)),
        ("C7", cyclic_group(7)),
        ("C8", cyclic_group(8)),
        ("C4xC2", cyclic_group(4).direct_product(&c2)),
        ("C2xC2xC2", c2.direct_product(&c2).direct_product(&c2)),
        ("D4", dihedral_group(4)),
        ("Q8", quaternion_group()),
    ]
}

/// Parses names such as `C6`, `D4` (order 8), `S3`, `Q8`, `C2xC2`, or a bare
/// order `5` (cyclic).
pub fn group_by_name(name: &str) -> Option<FiniteGroup> {
    let factor = |s: &str| -> Option<FiniteGroup> {
        if let Ok(n) = s.parse::<usize>() {
            return (n >= 1).then(|| cyclic_group(n));
        }
        match s {
            "S3" => Some(dihedral_group(3)),
            "Q8" => Some(quaternion_group()),
            _ => {
                let (kind, num) = s.split_at(1);
                let n: usize = num.parse().ok().filter(|&n| n >= 1)?;
                match kind {
                    "C" => Some(cyclic_group(n)),
                    "D" => Some(dihedral_group(n)),
                    _ => None,
                }
            }
        }
    };
    name.split('x')
        .map(factor)
        .try_fold(FiniteGroup::trivial(), |acc, g| g.map(|g| acc.direct_product(&g)))
}

/// Trivial action on `Z^d`.
pub fn split_torus(group: &FiniteGroup, d: usize) -> GaloisLattice {
    let action = vec![IntMatrix::identity(d); group.order()];
    GaloisLattice::new(group.clone(), d, action).expect("trivial action is valid")
}

/// `Z[Γ]` with `g` acting by left translation `e_h ↦ e_{gh}`.
pub fn weil_restriction(group: &FiniteGroup) -> GaloisLattice {
    let n = group.order();
    let action = group
        .elements()
        .map(|g| {
            let mut m = IntMatrix::zeros(n, n);
            for h in group.elements() {
                m[(group.mul(g, h), h)] = BigInt::from(1);
            }
            m
        })
        .collect();
    GaloisLattice::new(group.clone(), n, action).expect("regular representation is valid")
}

/// `Z[Γ] / (Σ g)` for `Γ` cyclic with designated generator `σ`, in the basis
/// given by the images of `1, σ, ..., σ^{n-2}`.
pub fn norm_one_torus(group: &FiniteGroup, generator: usize) -> Result<GaloisLattice, TorusError> {
    let n = group.order();
    if generator >= n || group.element_order(generator) != n {
        return Err(TorusError::NotCyclic(generator));
    }
    let d = n - 1;
    let mut sigma = IntMatrix::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            sigma[(i + 1, i)] = BigInt::from(1);
        } else {
            for r in 0..d {
                sigma[(r, i)] = BigInt::from(-1);
            }
        }
    }
    let mut action = vec![IntMatrix::zeros(d, d); n];
    let mut power = IntMatrix::identity(d);
    let mut element = 0;
    for _ in 0..n {
        action[element] = power.clone();
        power = &sigma * &power;
        element = group.mul(generator, element);
    }
    GaloisLattice::new(group.clone(), d, action)
}

pub fn direct_sum(a: &GaloisLattice, b: &GaloisLattice) -> Result<GaloisLattice, TorusError> {
    a.direct_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_group_orders() {
        let orders: Vec<usize> = small_groups().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]);
        let abelian: Vec<bool> = small_groups().iter().map(|(_, g)| g.is_abelian()).collect();
        assert_eq!(abelian.iter().filter(|&&a| !a).count(), 3);
    }

    #[test]
    fn group_names() {
        assert_eq!(group_by_name("C6").unwrap().order(), 6);
        assert_eq!(group_by_name("7").unwrap().order(), 7);
        assert_eq!(group_by_name("C2xC2").unwrap().order(), 4);
        assert!(!group_by_name("D4").unwrap().is_abelian());
        assert!(!group_by_name("Q8").unwrap().is_abelian());
        assert!(group_by_name("X3").is_none());
        assert!(group_by_name("C0").is_none());
    }

    #[test]
    fn split_examples() {
        let g = cyclic_group(3);
        for d in [0, 1, 5] {
            let t = split_torus(&g, d);
            assert_eq!(t.rank(), d);
            assert!(t.actions().iter().all(IntMatrix::is_identity));
        }
    }

    #[test]
    fn weil_examples() {
        let t = weil_restriction(&FiniteGroup::trivial());
        assert_eq!((t.rank(), t.action(0).is_identity()), (1, true));
        let t = weil_restriction(&cyclic_group(2));
        assert_eq!(t.action(1), &IntMatrix::from_rows(&[[0, 1], [1, 0]]));
        assert_eq!(weil_restriction(&cyclic_group(3)).character(), big(&[3, 0, 0]));
        for (_, g) in small_groups() {
            let mut expected = vec![BigInt::from(0); g.order()];
            expected[0] = BigInt::from(g.order());
            assert_eq!(weil_restriction(&g).character(), expected);
        }
    }

    #[test]
    fn norm_one_examples() {
        assert_eq!(norm_one_torus(&cyclic_group(1), 0).unwrap().rank(), 0);
        let t = norm_one_torus(&cyclic_group(2), 1).unwrap();
        assert_eq!(t.action(1), &IntMatrix::from_rows(&[[-1]]));
        let t = norm_one_torus(&cyclic_group(3), 1).unwrap();
        assert_eq!(t.action(1), &IntMatrix::from_rows(&[[0, -1], [1, -1]]));
        assert_eq!(t.character(), big(&[2, -1, -1]));
        assert!(matches!(
            norm_one_torus(&cyclic_group(4), 2),
            Err(TorusError::NotCyclic(2))
        ));
        assert!(norm_one_torus(&dihedral_group(3), 1).is_err());
    }

    #[test]
    fn norm_one_other_generator() {
        let g = cyclic_group(5);
        let a = norm_one_torus(&g, 1).unwrap();
        let b = norm_one_torus(&g, 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.character(), b.character());
    }

    #[test]
    fn direct_sum_examples() {
        let g = cyclic_group(4);
        let t = weil_restriction(&g);
        assert_eq!(direct_sum(&t, &split_torus(&g, 0)).unwrap(), t);
        assert_eq!(
            direct_sum(&split_torus(&g, 1), &split_torus(&g, 1)).unwrap(),
            split_torus(&g, 2)
        );
        for n in 2..9 {
            let g = cyclic_group(n);
            let sum = direct_sum(&norm_one_torus(&g, 1).unwrap(), &split_torus(&g, 1)).unwrap();
            assert_eq!(sum.character(), weil_restriction(&g).character());
        }
        assert!(matches!(
            direct_sum(&t, &split_torus(&cyclic_group(2), 1)),
            Err(TorusError::GroupMismatch)
        ));
    }

    #[test]
    fn catalog_outputs_validate() {
        for (_, g) in small_groups() {
            for l in [split_torus(&g, 2), weil_restriction(&g)] {
                assert!(validate(l.group(), l.rank(), l.actions()).is_ok());
            }
        }
    }
}
