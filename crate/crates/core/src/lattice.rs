//! Galois lattices: a finite group acting on `Z^d` by unimodular matrices.
//!
//! The stored action is always the action on the character lattice. The
//! cocharacter lattice is obtained through [`GaloisLattice::dual`], which uses
//! the contragredient `g ↦ action(g⁻¹)ᵀ`. Actions are left actions:
//! `action(g h) = action(g) action(h)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::abelian::{
    cokernel_structure, column_hnf, kernel_lattice, smith_normal_form, solve_integer,
    subgroup_structure_in_quotient, FinAbGroup, IntMatrix,
};
use crate::error::TorusError;
use crate::group::{FiniteGroup, Subgroup};

/// First failing condition found while validating a lattice action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongCount { expected: usize, found: usize },
    WrongShape { element: usize, rows: usize, cols: usize },
    IdentityActsNontrivially,
    NotUnimodular { element: usize, det: BigInt },
    NotHomomorphism { g: usize, h: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongCount { expected, found } => {
                write!(f, "expected {expected} action matrices, found {found}")
            }
            Violation::WrongShape { element, rows, cols } => {
                write!(f, "action of element {element} has shape {rows}x{cols}")
            }
            Violation::IdentityActsNontrivially => write!(f, "element 0 does not act as the identity"),
            Violation::NotUnimodular { element, det } => {
                write!(f, "action of element {element} has determinant {det}")
            }
            Violation::NotHomomorphism { g, h } => {
                write!(f, "action({g} * {h}) != action({g}) * action({h})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisLattice {
    group: FiniteGroup,
    rank: usize,
    action: Vec<IntMatrix>,
}

/// Checks every lattice invariant and reports the first failure.
pub fn validate(group: &FiniteGroup, rank: usize, action: &[IntMatrix]) -> Result<(), Violation> {
    if action.len() != group.order() {
        return Err(Violation::WrongCount {
            expected: group.order(),
            found: action.len(),
        });
    }
    for (g, a) in action.iter().enumerate() {
        if a.rows() != rank || a.cols() != rank {
            return Err(Violation::WrongShape {
                element: g,
                rows: a.rows(),
                cols: a.cols(),
            });
        }
    }
    if !action[0].is_identity() {
        return Err(Violation::IdentityActsNontrivially);
    }
    for (g, a) in action.iter().enumerate() {
        let det = a.determinant();
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(Violation::NotUnimodular { element: g, det });
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            if action[group.mul(g, h)] != &action[g] * &action[h] {
                return Err(Violation::NotHomomorphism { g, h });
            }
        }
    }
    Ok(())
}

impl GaloisLattice {
    pub fn new(group: FiniteGroup, rank: usize, action: Vec<IntMatrix>) -> Result<Self, TorusError> {
        validate(&group, rank, &action).map_err(TorusError::InvalidLattice)?;
        Ok(GaloisLattice { group, rank, action })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// Whether every element of `h` acts as the identity.
    pub fn acts_trivially(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&g| self.action[g].is_identity())
    }

    /// Canonical basis of the span of the columns of `action(h) - 1`.
    fn augmentation_relations(&self, h: &Subgroup) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let all = h
            .elements()
            .iter()
            .fold(IntMatrix::zeros(self.rank, 0), |acc, &g| {
                acc.hstack(&(&self.action[g] - &id))
            });
        column_hnf(&all)
    }

    /// Canonical basis of `X^H`.
    pub fn invariants_lattice(&self, h: &Subgroup) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let stacked = h
            .elements()
            .iter()
            .fold(IntMatrix::zeros(0, self.rank), |acc, &g| {
                acc.vstack(&(&self.action[g] - &id))
            });
        kernel_lattice(&stacked)
    }

    /// `X_H = X / <(action(h) - 1) x>`.
    pub fn coinvariants(&self, h: &Subgroup) -> Coinvariants {
        Coinvariants::new(self.augmentation_relations(h))
    }

    /// `Σ_{h ∈ H} action(h)`.
    pub fn trace_map(&self, h: &Subgroup) -> IntMatrix {
        h.elements()
            .iter()
            .fold(IntMatrix::zeros(self.rank, self.rank), |acc, &g| &acc + &self.action[g])
    }

    /// Splits `X` by the trace map of `h` into its kernel `Y` and image `N`.
    ///
    /// Both pieces are returned with the action of the largest group that
    /// stabilizes them for sure: the whole group when `h` is normal, `h`
    /// itself otherwise.
    pub fn canonical_decomposition(&self, h: &Subgroup) -> CanonicalDecomposition {
        let tr = self.trace_map(h);
        let kernel_basis = kernel_lattice(&tr);
        let image_basis = column_hnf(&tr);
        let acting = if h.is_normal_in(&self.group) {
            self.group.whole()
        } else {
            h.clone()
        };
        let ambient = self.restrict(&acting);
        let kernel = ambient
            .sublattice(&kernel_basis)
            .expect("kernel of the trace map is stable");
        let image = ambient
            .sublattice(&image_basis)
            .expect("image of the trace map is stable");
        CanonicalDecomposition {
            kernel_basis,
            image_basis,
            kernel,
            image,
            acting,
        }
    }

    /// `H¹(H, X)` from the full cocycle condition over all pairs of `H`.
    pub fn h1(&self, h: &Subgroup) -> Result<FinAbGroup, TorusError> {
        let elems = h.elements();
        let n = elems.len();
        let d = self.rank;
        let pos = |g: usize| elems.binary_search(&g).expect("subgroup is closed");

        // unknown f(elems[a]) occupies columns a*d .. (a+1)*d
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (a, &x) in elems.iter().enumerate() {
            for (b, &y) in elems.iter().enumerate() {
                let ab = pos(self.group.mul(x, y));
                let act = &self.action[x];
                for i in 0..d {
                    // f(xy)_i - f(x)_i - (action(x) f(y))_i
                    let mut row = vec![BigInt::zero(); n * d];
                    row[ab * d + i] += 1;
                    row[a * d + i] -= 1;
                    for j in 0..d {
                        row[b * d + j] -= &act[(i, j)];
                    }
                    if row.iter().any(|v| !v.is_zero()) && seen.insert(row.clone()) {
                        rows.push(row);
                    }
                }
            }
        }
        let cocycle_conditions = IntMatrix::from_bigint_rows(rows, n * d);
        let cocycles = kernel_lattice(&cocycle_conditions);

        let id = IntMatrix::identity(d);
        let coboundaries = elems
            .iter()
            .fold(IntMatrix::zeros(0, d), |acc, &g| acc.vstack(&(&self.action[g] - &id)));

        let h1 = subgroup_structure_in_quotient(&coboundaries, &cocycles);
        if h1.free_rank() != 0 {
            return Err(TorusError::Internal(format!(
                "H¹ of a finite group on a lattice came out with free rank {}",
                h1.free_rank()
            )));
        }
        Ok(h1)
    }

    /// Trace of the action of every group element.
    pub fn character(&self) -> Vec<BigInt> {
        self.action.iter().map(IntMatrix::trace).collect()
    }

    /// The contragredient lattice `g ↦ action(g⁻¹)ᵀ`.
    pub fn dual(&self) -> GaloisLattice {
        let action = self
            .group
            .elements()
            .map(|g| self.action[self.group.inv(g)].transpose())
            .collect();
        GaloisLattice {
            group: self.group.clone(),
            rank: self.rank,
            action,
        }
    }

    /// The same matrices viewed as a lattice over the subgroup `d`, whose
    /// elements are reindexed `0..|d|` in increasing order.
    pub fn restrict(&self, d: &Subgroup) -> GaloisLattice {
        let elems = d.elements();
        let pos = |g: usize| elems.binary_search(&g).expect("subgroup is closed");
        let table = elems
            .iter()
            .map(|&x| elems.iter().map(|&y| pos(self.group.mul(x, y))).collect())
            .collect();
        let group = FiniteGroup::new(table).expect("restriction of a group law");
        GaloisLattice {
            group,
            rank: self.rank,
            action: elems.iter().map(|&g| self.action[g].clone()).collect(),
        }
    }

    /// The action on a stable sublattice, in coordinates of the given basis
    /// (columns, full column rank).
    pub fn sublattice(&self, basis: &IntMatrix) -> Result<GaloisLattice, TorusError> {
        let k = basis.cols();
        let mut action = Vec::with_capacity(self.group.order());
        for (g, a) in self.action.iter().enumerate() {
            let image = a * basis;
            let coords = solve_integer(basis, &image).ok_or_else(|| {
                TorusError::NotWellDefined(format!("sublattice is not stable under element {g}"))
            })?;
            action.push(coords);
        }
        GaloisLattice::new(self.group.clone(), k, action)
    }

    pub fn direct_sum(&self, other: &GaloisLattice) -> Result<GaloisLattice, TorusError> {
        if self.group != other.group {
            return Err(TorusError::GroupMismatch);
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Ok(GaloisLattice {
            group: self.group.clone(),
            rank: self.rank + other.rank,
            action,
        })
    }

    /// `P action(g) P⁻¹` for a unimodular `P`.
    pub fn conjugate_by(&self, p: &IntMatrix) -> Result<GaloisLattice, TorusError> {
        if !p.is_unimodular() {
            return Err(TorusError::InvalidLattice(Violation::NotUnimodular {
                element: 0,
                det: p.determinant(),
            }));
        }
        let p_inv = solve_integer(p, &IntMatrix::identity(self.rank))
            .expect("unimodular matrices are invertible over Z");
        let action = self.action.iter().map(|a| &(p * a) * &p_inv).collect();
        GaloisLattice::new(self.group.clone(), self.rank, action)
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    /// Basis of `Y = ker(tr)`.
    pub kernel_basis: IntMatrix,
    /// Basis of `N = im(tr)`.
    pub image_basis: IntMatrix,
    pub kernel: GaloisLattice,
    pub image: GaloisLattice,
    /// Elements (of the original group) acting on `kernel` and `image`.
    pub acting: Subgroup,
}

/// A quotient `Z^d / R` together with Smith coordinates for it.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    group: FinAbGroup,
    relations: IntMatrix,
    to_coords: IntMatrix,
    from_coords: IntMatrix,
    kept: Vec<usize>,
    moduli: Vec<BigInt>,
}

impl Coinvariants {
    pub fn new(relations: IntMatrix) -> Self {
        let d = relations.rows();
        let snf = smith_normal_form(&relations);
        let diag = snf.diagonal();
        let mut kept = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..d {
            let m = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if m != BigInt::from(1) {
                kept.push(i);
                moduli.push(m);
            }
        }
        let from_coords = solve_integer(&snf.u, &IntMatrix::identity(d))
            .expect("Smith transform is unimodular");
        Coinvariants {
            group: cokernel_structure(&relations),
            relations,
            to_coords: snf.u,
            from_coords,
            kept,
            moduli,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Modulus of each quotient coordinate; `0` marks a free coordinate.
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Reduced coordinates of the class of `x`.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.to_coords.mul_vec(x);
        self.kept
            .iter()
            .zip(&self.moduli)
            .map(|(&i, m)| if m.is_zero() { y[i].clone() } else { y[i].mod_floor(m) })
            .collect()
    }

    /// Matrix of the endomorphism induced by `m` in quotient coordinates;
    /// column `j` is the image of the `j`-th coordinate generator.
    pub fn induced_endomorphism(&self, m: &IntMatrix) -> Result<IntMatrix, TorusError> {
        if solve_integer(&self.relations, &(m * &self.relations)).is_none() {
            return Err(TorusError::NotWellDefined(
                "map does not preserve the relation lattice".into(),
            ));
        }
        let columns: Vec<Vec<BigInt>> = self
            .kept
            .iter()
            .map(|&j| self.project(&m.mul_vec(&self.from_coords.column(j))))
            .collect();
        Ok(IntMatrix::from_columns(self.kept.len(), &columns))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_group, norm_one_torus, split_torus, weil_restriction};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sign_lattice() -> GaloisLattice {
        let g = cyclic_group(2);
        GaloisLattice::new(g, 1, vec![IntMatrix::identity(1), IntMatrix::from_rows(&[[-1]])]).unwrap()
    }

    fn split_plus_sign() -> GaloisLattice {
        let g = cyclic_group(2);
        GaloisLattice::new(
            g,
            2,
            vec![IntMatrix::identity(2), IntMatrix::from_rows(&[[1, 0], [0, -1]])],
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&FiniteGroup::trivial(), 3, &[IntMatrix::identity(3)]).is_ok());
        let g = cyclic_group(2);
        assert!(matches!(
            validate(&g, 1, &[IntMatrix::identity(1), IntMatrix::from_rows(&[[2]])]),
            Err(Violation::NotUnimodular { element: 1, .. })
        ));
        // sigma^2 = [[0,1],[-1,0]]^2 = -1 != identity
        assert!(matches!(
            validate(&g, 2, &[IntMatrix::identity(2), IntMatrix::from_rows(&[[0, 1], [-1, 0]])]),
            Err(Violation::NotHomomorphism { .. })
        ));
        assert!(matches!(
            validate(&g, 1, &[IntMatrix::identity(1)]),
            Err(Violation::WrongCount { .. })
        ));
    }

    #[test]
    fn invariants_examples() {
        let l = split_plus_sign();
        assert_eq!(l.invariants_lattice(&Subgroup::trivial()), IntMatrix::identity(2));
        let s = sign_lattice();
        assert_eq!(s.invariants_lattice(&s.group().whole()).cols(), 0);
        let w = weil_restriction(&cyclic_group(4));
        let inv = w.invariants_lattice(&w.group().whole());
        assert_eq!(inv, IntMatrix::from_rows(&[[1], [1], [1], [1]]));
    }

    #[test]
    fn coinvariants_examples() {
        let l = split_plus_sign();
        assert_eq!(*l.coinvariants(&Subgroup::trivial()).group(), FinAbGroup::free(2));
        let s = sign_lattice();
        assert_eq!(s.coinvariants(&s.group().whole()).group().invariant_factors(), &big(&[2])[..]);
        for n in 2..7 {
            let g = cyclic_group(n);
            let t = norm_one_torus(&g, 1).unwrap();
            let c = t.coinvariants(&g.whole());
            assert_eq!(c.group().free_rank(), 0);
            assert_eq!(c.group().invariant_factors(), &big(&[n as i64])[..]);
        }
    }

    #[test]
    fn trace_examples() {
        let l = split_plus_sign();
        assert_eq!(l.trace_map(&Subgroup::trivial()), IntMatrix::identity(2));
        let s = sign_lattice();
        assert!(s.trace_map(&s.group().whole()).is_zero());
        let w = weil_restriction(&cyclic_group(3));
        let tr = w.trace_map(&w.group().whole());
        assert!(tr.entries().all(|x| *x == BigInt::from(1)));
    }

    #[test]
    fn decomposition_examples() {
        let l = split_plus_sign();
        let dec = l.canonical_decomposition(&Subgroup::trivial());
        assert_eq!(dec.kernel_basis.cols(), 0);
        assert_eq!(dec.image_basis, IntMatrix::identity(2));

        let g = cyclic_group(5);
        let t = norm_one_torus(&g, 1).unwrap();
        let dec = t.canonical_decomposition(&g.whole());
        assert_eq!(dec.kernel_basis.cols(), 4);
        assert_eq!(dec.image_basis.cols(), 0);

        let dec = l.canonical_decomposition(&l.group().whole());
        assert_eq!(dec.kernel_basis, IntMatrix::from_rows(&[[0], [1]]));
        assert_eq!(dec.image_basis, IntMatrix::from_rows(&[[2], [0]]));
        assert_eq!(dec.image.character(), big(&[1, 1]));
        assert_eq!(dec.kernel.character(), big(&[1, -1]));
    }

    #[test]
    fn h1_examples() {
        let l = split_plus_sign();
        assert!(l.h1(&Subgroup::trivial()).unwrap().is_trivial());
        for n in 1..6 {
            let g = cyclic_group(n);
            let t = split_torus(&g, 1);
            assert!(t.h1(&g.whole()).unwrap().is_trivial());
        }
        let s = sign_lattice();
        assert_eq!(s.h1(&s.group().whole()).unwrap().invariant_factors(), &big(&[2])[..]);
    }

    #[test]
    fn character_examples() {
        let g = cyclic_group(4);
        assert_eq!(split_torus(&g, 3).character(), big(&[3, 3, 3, 3]));
        assert_eq!(weil_restriction(&g).character(), big(&[4, 0, 0, 0]));
        assert_eq!(sign_lattice().character(), big(&[1, -1]));
    }

    #[test]
    fn dual_examples() {
        let g = cyclic_group(3);
        let s = split_torus(&g, 2);
        assert_eq!(s.dual(), s);
        let w = weil_restriction(&g);
        assert_eq!(w.dual(), w);
        let t = norm_one_torus(&g, 1).unwrap();
        assert_eq!(t.action(1), &IntMatrix::from_rows(&[[0, -1], [1, -1]]));
        let dual = t.dual();
        assert!(validate(dual.group(), 2, dual.actions()).is_ok());
        assert_eq!(dual.character(), t.character());
        assert_eq!(dual.dual(), t);
    }

    #[test]
    fn restrict_examples() {
        let g = cyclic_group(4);
        let w = weil_restriction(&g);
        assert_eq!(w.restrict(&g.whole()), w);
        let triv = w.restrict(&Subgroup::trivial());
        assert_eq!(triv.group().order(), 1);
        let sub = Subgroup::new(&g, vec![0, 2]).unwrap();
        assert_eq!(w.restrict(&sub).character(), big(&[4, 0]));
    }

    #[test]
    fn coinvariant_coordinates() {
        // Z[Z/4] over Z/2 = {0, 2}: coinvariants Z^2, Frobenius swaps the two orbits
        let g = cyclic_group(4);
        let w = weil_restriction(&g);
        let sub = Subgroup::new(&g, vec![0, 2]).unwrap();
        let c = w.coinvariants(&sub);
        assert_eq!(*c.group(), FinAbGroup::free(2));
        let f = c.induced_endomorphism(w.action(1)).unwrap();
        assert_eq!(f.trace(), BigInt::zero());
        assert!((&f * &f).is_identity());
        assert!(!f.is_identity());
    }
}
