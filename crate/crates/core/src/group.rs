//! Finite groups given by multiplication tables.

use std::collections::BTreeSet;

use crate::error::TorusError;

/// A finite group on the elements `0..n`, with `0` the identity and
/// `mul(a, b) = table[a][b]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table as a group law with identity at index 0.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, TorusError> {
        let n = table.len();
        if n == 0 {
            return Err(TorusError::InvalidGroup("group must have at least one element".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(TorusError::InvalidGroup(format!(
                    "row {a} of the multiplication table has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(TorusError::InvalidGroup(format!(
                    "row {a} contains element {x}, out of range 0..{n}"
                )));
            }
        }
        for (a, row) in table.iter().enumerate() {
            if table[0][a] != a || row[0] != a {
                return Err(TorusError::InvalidGroup(format!(
                    "element 0 is not an identity for element {a}"
                )));
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inverse[a] = b,
                _ => {
                    return Err(TorusError::InvalidGroup(format!(
                        "element {a} has no two-sided inverse"
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(TorusError::InvalidGroup(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inverse })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            table: vec![vec![0]],
            inverse: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    /// `g h g^{-1}`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for h in self.elements() {
            if seen[h] {
                continue;
            }
            let class: BTreeSet<usize> = self.elements().map(|g| self.conjugate(g, h)).collect();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup {
            elements: set.into_iter().collect(),
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: self.elements().collect(),
        }
    }

    /// All subgroups, sorted by order and then lexicographically.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![Subgroup::trivial()];
        found.insert(vec![0]);
        while let Some(s) = queue.pop() {
            for g in self.elements() {
                if s.contains(g) {
                    continue;
                }
                let mut gens = s.elements.clone();
                gens.push(g);
                let t = self.generated(&gens);
                if found.insert(t.elements.clone()) {
                    queue.push(t);
                }
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().map(|elements| Subgroup { elements }).collect();
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        all
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.subgroups()
            .into_iter()
            .filter(|h| h.is_normal_in(self))
            .collect()
    }

    /// Direct product; the element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order();
        let n = self.order() * m;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("direct product of groups is a group")
    }
}

/// A subgroup, stored as the sorted list of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Validates closure under multiplication and inverses.
    pub fn new(group: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self, TorusError> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(TorusError::InvalidSubgroup("must contain the identity 0".into()));
        }
        if let Some(&x) = elements.iter().find(|&&x| x >= group.order()) {
            return Err(TorusError::InvalidSubgroup(format!(
                "element {x} is not in a group of order {}",
                group.order()
            )));
        }
        let s = Subgroup { elements };
        for &a in &s.elements {
            if !s.contains(group.inv(a)) {
                return Err(TorusError::InvalidSubgroup(format!(
                    "not closed under inverses at element {a}"
                )));
            }
            for &b in &s.elements {
                if !s.contains(group.mul(a, b)) {
                    return Err(TorusError::InvalidSubgroup(format!(
                        "not closed under multiplication: {a} * {b}"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal_in(&self, group: &FiniteGroup) -> bool {
        self.is_normal_in_subgroup(group, &group.whole())
    }

    /// Normality with respect to the elements of `ambient`.
    pub fn is_normal_in_subgroup(&self, group: &FiniteGroup, ambient: &Subgroup) -> bool {
        ambient
            .elements
            .iter()
            .all(|&g| self.elements.iter().all(|&h| self.contains(group.conjugate(g, h))))
    }

    /// Whether the image of `g` generates `ambient / self`. Requires `self`
    /// to be normal in `ambient`.
    pub fn quotient_generated_by(&self, group: &FiniteGroup, ambient: &Subgroup, g: usize) -> bool {
        let mut gens = self.elements.clone();
        gens.push(g);
        ambient.contains(g) && group.generated(&gens).elements == ambient.elements
    }
}
