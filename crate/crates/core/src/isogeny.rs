//! Isogeny of tori, decided by equality of rational characters.
//!
//! Two tori split by the same extension are isogenous iff their character
//! lattices become isomorphic after tensoring with `Q`, and a rational
//! representation of a finite group is determined by its character.

use crate::error::TorusError;
use crate::group::Subgroup;
use crate::lattice::GaloisLattice;

pub fn isogenous(a: &GaloisLattice, b: &GaloisLattice) -> Result<bool, TorusError> {
    if a.group() != b.group() {
        return Err(TorusError::GroupMismatch);
    }
    Ok(a.character() == b.character())
}

/// Compares lattices over different tables through an explicit group
/// isomorphism `phi` from the group of `a` to the group of `b`.
pub fn isogenous_via(a: &GaloisLattice, b: &GaloisLattice, phi: &[usize]) -> Result<bool, TorusError> {
    let (ga, gb) = (a.group(), b.group());
    let n = ga.order();
    let mut hit = vec![false; gb.order()];
    let bijective = phi.len() == n
        && gb.order() == n
        && phi.iter().all(|&x| x < n && !std::mem::replace(&mut hit[x], true));
    if !bijective || ga.elements().any(|x| {
        ga.elements()
            .any(|y| phi[ga.mul(x, y)] != gb.mul(phi[x], phi[y]))
    }) {
        return Err(TorusError::GroupMismatch);
    }
    let (ca, cb) = (a.character(), b.character());
    Ok(ga.elements().all(|g| ca[g] == cb[phi[g]]))
}

/// Compares the image of the trace map of `h` (characters of `T_I`) with
/// the invariants `X^h` (characters of `T^I`) as representations of the
/// whole group. They are always isogenous; this makes that checkable.
pub fn check_ti_vs_tupper_i(lattice: &GaloisLattice, h: &Subgroup) -> Result<bool, TorusError> {
    if !h.is_normal_in(lattice.group()) {
        return Err(TorusError::InvalidSubgroup(
            "the subgroup must be normal".into(),
        ));
    }
    let decomposition = lattice.canonical_decomposition(h);
    let invariants = lattice.sublattice(&lattice.invariants_lattice(h))?;
    isogenous(&decomposition.image, &invariants)
}
