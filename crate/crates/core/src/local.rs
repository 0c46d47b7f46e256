//! Local invariants of a torus at one prime.
//!
//! The input is the character lattice with the action of the local Galois
//! group, the inertia subgroup, a Frobenius element and the residue field
//! size `q`. Everything is computed on the lattice side:
//!
//! * good reduction holds iff inertia acts trivially;
//! * the L-factor is `det(1 - h(F) q^{-s})^{-1}` with `h(F)` the Frobenius
//!   action on the inertia invariants;
//! * the component group is `ker(1 - F)` on the inertia coinvariants of the
//!   cocharacter lattice, and its torsion order is the local Shyr factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abelian::{kernel_of_endomorphism_on_quotient, solve_integer, FinAbGroup, IntMatrix};
use crate::error::TorusError;
use crate::group::Subgroup;
use crate::lattice::{Coinvariants, GaloisLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTorusData {
    lattice: GaloisLattice,
    inertia: Subgroup,
    frobenius: usize,
    residue_q: BigInt,
}

impl LocalTorusData {
    /// Checks that inertia is a normal subgroup, that `frobenius` generates
    /// the quotient by inertia, and that `q >= 2`.
    pub fn new(
        lattice: GaloisLattice,
        inertia: Subgroup,
        frobenius: usize,
        residue_q: BigInt,
    ) -> Result<Self, TorusError> {
        let group = lattice.group();
        let inertia = Subgroup::new(group, inertia.elements().to_vec())?;
        if !inertia.is_normal_in(group) {
            return Err(TorusError::InvalidLocalData(
                "inertia subgroup is not normal".into(),
            ));
        }
        if frobenius >= group.order() {
            return Err(TorusError::InvalidLocalData(format!(
                "frobenius {frobenius} is not an element of a group of order {}",
                group.order()
            )));
        }
        if !inertia.quotient_generated_by(group, &group.whole(), frobenius) {
            return Err(TorusError::InvalidLocalData(format!(
                "frobenius {frobenius} does not generate the quotient by inertia"
            )));
        }
        if residue_q < BigInt::from(2) {
            return Err(TorusError::InvalidLocalData(format!(
                "residue field size {residue_q} is below 2"
            )));
        }
        Ok(LocalTorusData {
            lattice,
            inertia,
            frobenius,
            residue_q,
        })
    }

    pub fn lattice(&self) -> &GaloisLattice {
        &self.lattice
    }

    pub fn inertia(&self) -> &Subgroup {
        &self.inertia
    }

    pub fn frobenius(&self) -> usize {
        self.frobenius
    }

    pub fn residue_q(&self) -> &BigInt {
        &self.residue_q
    }

    /// Same data with another Frobenius representative.
    pub fn with_frobenius(&self, frobenius: usize) -> Result<Self, TorusError> {
        Self::new(
            self.lattice.clone(),
            self.inertia.clone(),
            frobenius,
            self.residue_q.clone(),
        )
    }

    /// `q` is accepted whether or not it is a prime power; this flags the
    /// arithmetically meaningful case.
    pub fn q_is_prime_power(&self) -> bool {
        is_prime_power(&self.residue_q)
    }

    pub fn check_good_reduction(&self) -> bool {
        self.lattice.acts_trivially(&self.inertia)
    }

    /// Frobenius action on a basis of the inertia invariants.
    pub fn frobenius_on_invariants(&self) -> IntMatrix {
        let basis = self.lattice.invariants_lattice(&self.inertia);
        let image = self.lattice.action(self.frobenius) * &basis;
        solve_integer(&basis, &image).expect("invariants of a normal subgroup are stable")
    }

    /// `det(1 - h(F) q^{-s})^{-1}` as an exact rational.
    pub fn artin_l_factor(&self, s: u32) -> Result<BigRational, TorusError> {
        let h = self.frobenius_on_invariants();
        let k = h.rows();
        let qs = num_traits::pow(self.residue_q.clone(), s as usize);
        // det(1 - h/q^s) = det(q^s - h) / q^{sk}
        let shifted = &IntMatrix::identity(k).scale(&qs) - &h;
        let det = shifted.determinant();
        if det.is_zero() {
            return Err(TorusError::SingularMatrix);
        }
        Ok(BigRational::new(num_traits::pow(qs, k), det))
    }

    /// `|T(k)| = |det(q - action(F))|`, valid only with good reduction.
    pub fn point_count_good_reduction(&self) -> Result<BigInt, TorusError> {
        if !self.check_good_reduction() {
            return Err(TorusError::NotGoodReduction);
        }
        let d = self.lattice.rank();
        let m = &IntMatrix::identity(d).scale(&self.residue_q) - self.lattice.action(self.frobenius);
        Ok(m.determinant().abs())
    }

    /// Frobenius acting on the inertia coinvariants of the cocharacter lattice.
    pub fn frobenius_on_coinvariants(&self) -> Result<FrobeniusOnCoinvariants, TorusError> {
        let cochar = self.lattice.dual();
        let coinvariants = cochar.coinvariants(&self.inertia);
        let frobenius = cochar.action(self.frobenius).clone();
        let induced = coinvariants.induced_endomorphism(&frobenius)?;
        Ok(FrobeniusOnCoinvariants {
            coinvariants,
            frobenius,
            induced,
        })
    }

    /// `Φ_T(k) ≅ ker(1 - F | X_•(T)_I)`.
    pub fn component_group(&self) -> Result<FinAbGroup, TorusError> {
        let cochar = self.lattice.dual();
        let coinvariants = cochar.coinvariants(&self.inertia);
        let d = cochar.rank();
        let one_minus_f = &IntMatrix::identity(d) - cochar.action(self.frobenius);
        kernel_of_endomorphism_on_quotient(coinvariants.relations(), &one_minus_f)
    }

    /// The geometric component group `X_•(T)_I`, before taking Frobenius
    /// invariants.
    pub fn geometric_component_group(&self) -> FinAbGroup {
        self.lattice.dual().coinvariants(&self.inertia).group().clone()
    }

    pub fn local_shyr_factor(&self) -> Result<BigInt, TorusError> {
        Ok(self.component_group()?.torsion_order())
    }

    pub fn h1_inertia(&self) -> Result<FinAbGroup, TorusError> {
        self.lattice.h1(&self.inertia)
    }

    /// All local quantities, with the torsion/cohomology cross-check applied.
    pub fn report(&self) -> Result<LocalReport, TorusError> {
        let good_reduction = self.check_good_reduction();
        let l_factor_at_1 = self.artin_l_factor(1)?;
        let component_group = self.component_group()?;
        let geometric = self.geometric_component_group();
        let h1_inertia = self.h1_inertia()?;
        let shyr_factor = component_group.torsion_order();
        let point_count = if good_reduction {
            Some(self.point_count_good_reduction()?)
        } else {
            None
        };
        let report = LocalReport {
            good_reduction,
            q_is_prime_power: self.q_is_prime_power(),
            l_factor_at_1,
            component_group,
            geometric_component_group: geometric,
            shyr_factor,
            h1_inertia,
            point_count,
        };
        report.cross_check()?;
        Ok(report)
    }
}

#[derive(Clone, Debug)]
pub struct FrobeniusOnCoinvariants {
    pub coinvariants: Coinvariants,
    /// Frobenius on the cocharacter lattice `Z^d`.
    pub frobenius: IntMatrix,
    /// Induced map in the Smith coordinates of the coinvariants.
    pub induced: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub good_reduction: bool,
    pub q_is_prime_power: bool,
    pub l_factor_at_1: BigRational,
    /// `Φ_T(k)`
    pub component_group: FinAbGroup,
    /// `Φ_T(k̄) = X_•(T)_I`
    pub geometric_component_group: FinAbGroup,
    pub shyr_factor: BigInt,
    pub h1_inertia: FinAbGroup,
    /// `|T(k)|` when the torus has good reduction.
    pub point_count: Option<BigInt>,
}

impl LocalReport {
    /// Compares the torsion of the component groups against `H¹(I, X^•)`,
    /// which is computed independently from cocycles.
    ///
    /// `X_•(T)_I` is torsion-free exactly when `H¹(I, X^•(T))` vanishes, and
    /// the two finite groups have the same order. Torsion in `Φ_T(k)` lies
    /// inside that of `X_•(T)_I`, so a trivial `H¹` forces Shyr factor 1.
    pub fn cross_check(&self) -> Result<(), TorusError> {
        let geometric_torsion = self.geometric_component_group.torsion_order();
        let h1_order = self.h1_inertia.torsion_order();
        if geometric_torsion != h1_order {
            return Err(TorusError::CrossCheckFailure(format!(
                "torsion of X_•(T)_I has order {geometric_torsion} but H¹(I, X^•) has order {h1_order}"
            )));
        }
        if self.h1_inertia.is_trivial() && !self.shyr_factor.is_one() {
            return Err(TorusError::CrossCheckFailure(format!(
                "H¹(I, X^•) is trivial but the Shyr factor is {}",
                self.shyr_factor
            )));
        }
        if !geometric_torsion.is_multiple_of(&self.shyr_factor) {
            return Err(TorusError::CrossCheckFailure(format!(
                "Shyr factor {} does not divide |tors X_•(T)_I| = {geometric_torsion}",
                self.shyr_factor
            )));
        }
        if self.good_reduction && !self.component_group.is_torsion_free() {
            return Err(TorusError::CrossCheckFailure(
                "good reduction with torsion in the component group".into(),
            ));
        }
        Ok(())
    }
}

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller–Rabin with the first twelve prime bases; exact below 3.3e24.
fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &p in &WITNESSES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut r = 0u32;
    while d.is_even() {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&BigInt::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_power(q: &BigInt) -> bool {
    if *q < BigInt::from(2) {
        return false;
    }
    let bits = q.bits();
    (1..=bits).any(|k| {
        let k = k.to_u32().expect("bit length fits in u32");
        let root = q.nth_root(k);
        num_traits::pow(root.clone(), k as usize) == *q && is_probable_prime(&root)
    })
}
