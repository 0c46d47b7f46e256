//! Global Shyr invariant: local torsion orders times field prefactors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::TorusError;
use crate::group::Subgroup;
use crate::lattice::GaloisLattice;
use crate::local::{LocalReport, LocalTorusData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalField {
    /// Function field with constant field of size `q` and genus `genus`.
    Function { q: BigInt, genus: u64 },
    /// Number field with discriminant `discriminant`.
    Number { discriminant: BigInt },
}

/// Data at one place. Subgroups and the Frobenius are given in the indexing
/// of the global group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceData {
    pub label: String,
    pub decomposition: Subgroup,
    pub inertia: Subgroup,
    pub frobenius: usize,
    pub residue_q: BigInt,
}

impl PlaceData {
    /// Restricts `lattice` to the decomposition group and moves inertia and
    /// Frobenius to the reindexed subgroup.
    pub fn local_data(&self, lattice: &GaloisLattice) -> Result<LocalTorusData, TorusError> {
        let at_place = |source| TorusError::AtPlace {
            label: self.label.clone(),
            source: Box::new(source),
        };
        let group = lattice.group();
        let decomposition =
            Subgroup::new(group, self.decomposition.elements().to_vec()).map_err(at_place)?;
        let inertia = Subgroup::new(group, self.inertia.elements().to_vec()).map_err(at_place)?;
        if !inertia.is_subgroup_of(&decomposition) {
            return Err(at_place(TorusError::InvalidGlobalData(
                "inertia is not contained in the decomposition group".into(),
            )));
        }
        let elems = decomposition.elements();
        let pos = |g: usize| elems.binary_search(&g);
        let frobenius = pos(self.frobenius).map_err(|_| {
            at_place(TorusError::InvalidGlobalData(format!(
                "frobenius {} is not in the decomposition group",
                self.frobenius
            )))
        })?;
        let local = lattice.restrict(&decomposition);
        let inertia_local = Subgroup::new(
            local.group(),
            inertia.elements().iter().map(|&g| pos(g).unwrap()).collect(),
        )
        .map_err(at_place)?;
        LocalTorusData::new(local, inertia_local, frobenius, self.residue_q.clone()).map_err(at_place)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalTorusSpec {
    field: GlobalField,
    lattice: GaloisLattice,
    places: Vec<PlaceData>,
}

impl GlobalTorusSpec {
    /// Validates the field constants and every place. Places not listed are
    /// taken to be unramified.
    pub fn new(
        field: GlobalField,
        lattice: GaloisLattice,
        places: Vec<PlaceData>,
    ) -> Result<Self, TorusError> {
        match &field {
            GlobalField::Function { q, .. } if *q < BigInt::from(2) => {
                return Err(TorusError::InvalidGlobalData(format!(
                    "constant field size {q} is below 2"
                )));
            }
            GlobalField::Number { discriminant } if discriminant.is_zero() => {
                return Err(TorusError::InvalidGlobalData("discriminant is zero".into()));
            }
            _ => {}
        }
        for place in &places {
            place.local_data(&lattice)?;
        }
        Ok(GlobalTorusSpec {
            field,
            lattice,
            places,
        })
    }

    pub fn field(&self) -> &GlobalField {
        &self.field
    }

    pub fn lattice(&self) -> &GaloisLattice {
        &self.lattice
    }

    pub fn places(&self) -> &[PlaceData] {
        &self.places
    }

    pub fn local_reports(&self) -> Result<Vec<(String, LocalReport)>, TorusError> {
        self.places
            .iter()
            .map(|p| {
                let report = p.local_data(&self.lattice)?.report().map_err(|e| {
                    TorusError::AtPlace {
                        label: p.label.clone(),
                        source: Box::new(e),
                    }
                })?;
                Ok((p.label.clone(), report))
            })
            .collect()
    }

    /// Product of the local Shyr factors over the listed places.
    pub fn finite_part(&self) -> Result<BigInt, TorusError> {
        self.places.iter().try_fold(BigInt::one(), |acc, p| {
            let factor = p.local_data(&self.lattice)?.local_shyr_factor().map_err(|e| {
                TorusError::AtPlace {
                    label: p.label.clone(),
                    source: Box::new(e),
                }
            })?;
            Ok(acc * factor)
        })
    }

    /// `r_K`, the rank of the Galois invariants of the character lattice.
    pub fn pole_order(&self) -> usize {
        self.lattice
            .invariants_lattice(&self.lattice.group().whole())
            .cols()
    }

    pub fn shyr_invariant(&self) -> Result<SymbolicValue, TorusError> {
        let finite = BigRational::from_integer(self.finite_part()?);
        let d = self.lattice.rank() as i64;
        let r_k = self.pole_order() as i64;
        Ok(match &self.field {
            GlobalField::Function { q, genus } => {
                // q^{-d(g-1)}
                let exponent = d * (*genus as i64 - 1);
                let power = BigRational::from_integer(q.pow(exponent.unsigned_abs() as u32));
                let prefactor = if exponent > 0 { power.recip() } else { power };
                SymbolicValue {
                    coefficient: prefactor * finite,
                    lnq_exponent: -r_k,
                    sqrt_disc_exponent: 0,
                    archimedean_unevaluated: false,
                    base: Some(q.clone()),
                }
            }
            GlobalField::Number { discriminant } => SymbolicValue {
                coefficient: finite,
                lnq_exponent: 0,
                sqrt_disc_exponent: -d,
                archimedean_unevaluated: true,
                base: Some(discriminant.abs()),
            },
        })
    }
}

/// `coefficient · (ln q)^lnq_exponent · |Δ|^{sqrt_disc_exponent/2} · C_∞`,
/// where `C_∞` is present only when `archimedean_unevaluated` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicValue {
    pub coefficient: BigRational,
    pub lnq_exponent: i64,
    pub sqrt_disc_exponent: i64,
    pub archimedean_unevaluated: bool,
    /// `q` in the function field case, `|Δ|` in the number field case; used
    /// only for display.
    pub base: Option<BigInt>,
}

impl SymbolicValue {
    /// Whether the value is the rational number 1 with no symbolic factors.
    pub fn is_exactly_one(&self) -> bool {
        self.coefficient.is_one()
            && self.lnq_exponent == 0
            && self.sqrt_disc_exponent == 0
            && !self.archimedean_unevaluated
    }

    /// The quasi-discriminant `1 / value²`.
    pub fn quasi_discriminant(&self) -> QuasiDiscriminant<'_> {
        QuasiDiscriminant(self)
    }

    fn fmt_factors(&self, f: &mut fmt::Formatter<'_>, scale: i64) -> fmt::Result {
        let base = self.base.as_ref().map(ToString::to_string);
        let base = base.as_deref();
        if self.lnq_exponent != 0 {
            write!(f, " · (ln {})^{}", base.unwrap_or("q"), scale * self.lnq_exponent)?;
        }
        if self.sqrt_disc_exponent != 0 {
            write!(f, " · {}^({}/2)", base.unwrap_or("|Δ|"), scale * self.sqrt_disc_exponent)?;
        }
        if self.archimedean_unevaluated {
            if scale == 1 {
                write!(f, " · C_∞")?;
            } else {
                write!(f, " · C_∞^{scale}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        self.fmt_factors(f, 1)
    }
}

pub struct QuasiDiscriminant<'a>(&'a SymbolicValue);

impl fmt::Display for QuasiDiscriminant<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.0.coefficient;
        write!(f, "{}", (c * c).recip())?;
        self.0.fmt_factors(f, -2)
    }
}
