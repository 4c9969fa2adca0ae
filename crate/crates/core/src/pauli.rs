//! Sparse Pauli strings over physical qubit ids, used to check the
//! commutation structure of link and plaquette operators.

use std::collections::BTreeMap;

use crate::lattice::{Layout, Link, Pauli, Plaquette, QubitId};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PauliString {
    terms: BTreeMap<QubitId, Pauli>,
}

impl PauliString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, q: QubitId, p: Pauli) -> Self {
        self.terms.insert(q, p);
        self
    }

    pub fn get(&self, q: QubitId) -> Option<Pauli> {
        self.terms.get(&q).copied()
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    /// Symplectic product: true iff the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let clashes = self.terms.iter().filter(|(q, p)| matches!(other.terms.get(q), Some(o) if o != *p)).count();
        clashes % 2 == 0
    }
}

/// `σ^α ⊗ σ^α` on the link endpoints.
pub fn link_operator(link: &Link, basis: Pauli) -> PauliString {
    PauliString::new().with(link.endpoints[0], basis).with(link.endpoints[1], basis)
}

/// Honeycomb plaquette operator `X0 Y1 Z2 X3 Y4 Z5`.
pub fn plaquette_operator(plaquette: &Plaquette) -> PauliString {
    const PATTERN: [Pauli; 6] = [Pauli::X, Pauli::Y, Pauli::Z, Pauli::X, Pauli::Y, Pauli::Z];
    plaquette.vertices.iter().zip(PATTERN).fold(PauliString::new(), |s, (&q, p)| s.with(q, p))
}

/// Color-code plaquette operator `W^α`: `σ^α` on all six vertices.
pub fn color_plaquette_operator(plaquette: &Plaquette, basis: Pauli) -> PauliString {
    plaquette.vertices.iter().fold(PauliString::new(), |s, &q| s.with(q, basis))
}

/// Product of the link operators around a plaquette, ignoring phase.
pub fn boundary_product(layout: &Layout, plaquette: &Plaquette) -> PauliString {
    let mut acc: BTreeMap<QubitId, (bool, bool)> = BTreeMap::new();
    for &lid in &plaquette.boundary {
        let link = layout.link(lid);
        let (x, z) = match link.pauli_type {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        };
        for q in link.endpoints {
            let e = acc.entry(q).or_insert((false, false));
            e.0 ^= x;
            e.1 ^= z;
        }
    }
    let mut out = PauliString::new();
    for (q, bits) in acc {
        match bits {
            (true, false) => out = out.with(q, Pauli::X),
            (true, true) => out = out.with(q, Pauli::Y),
            (false, true) => out = out.with(q, Pauli::Z),
            (false, false) => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_layout, build_patch};

    #[test]
    fn single_qubit_commutation() {
        let x = PauliString::new().with(0, Pauli::X);
        let z = PauliString::new().with(0, Pauli::Z);
        let zz = PauliString::new().with(0, Pauli::Z).with(1, Pauli::Z);
        let xx = PauliString::new().with(0, Pauli::X).with(1, Pauli::X);
        assert!(!x.commutes_with(&z));
        assert!(x.commutes_with(&x));
        assert!(xx.commutes_with(&zz));
        assert!(!x.commutes_with(&zz));
    }

    #[test]
    fn boundary_product_is_plaquette_operator() {
        for layout in [build_layout("falcon27").unwrap(), build_patch(2, 3).unwrap()] {
            for p in &layout.plaquettes {
                assert_eq!(boundary_product(&layout, p), plaquette_operator(p));
            }
        }
    }
}
