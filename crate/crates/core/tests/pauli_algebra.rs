use floquet_core::lattice::{build_layout, build_patch, Layout, Pauli};
use floquet_core::pauli::{boundary_product, color_plaquette_operator, link_operator, plaquette_operator, PauliString};

fn layouts() -> Vec<Layout> {
    let mut v: Vec<Layout> =
        ["falcon27", "hummingbird65", "eagle127"].iter().map(|n| build_layout(n).unwrap()).collect();
    v.push(build_patch(3, 3).unwrap());
    v
}

fn flipped(p: Pauli) -> Pauli {
    match p {
        Pauli::X => Pauli::Z,
        _ => Pauli::X,
    }
}

#[test]
fn honeycomb_plaquettes_commute_with_every_link() {
    for layout in layouts() {
        for p in &layout.plaquettes {
            let w = plaquette_operator(p);
            assert_eq!(w.weight(), 6);
            for link in &layout.links {
                assert!(
                    w.commutes_with(&link_operator(link, link.pauli_type)),
                    "{} p{} l{}",
                    layout.name,
                    p.id,
                    link.id
                );
            }
            for q in &layout.plaquettes {
                assert!(w.commutes_with(&plaquette_operator(q)));
            }
        }
    }
}

#[test]
fn honeycomb_plaquette_is_product_of_its_links() {
    for layout in layouts() {
        for p in &layout.plaquettes {
            assert_eq!(boundary_product(&layout, p), plaquette_operator(p));
        }
    }
}

#[test]
fn color_code_plaquettes_are_disturbed_by_own_color_links() {
    for layout in layouts() {
        for p in &layout.plaquettes {
            for basis in [Pauli::X, Pauli::Z] {
                let w = color_plaquette_operator(p, basis);
                let other = flipped(basis);
                let disturbing =
                    layout.links_of_color(p.color).filter(|l| !w.commutes_with(&link_operator(l, other))).count();
                assert!(disturbing >= 1, "{} p{} {basis:?}", layout.name, p.id);
                // Same-basis links and other-colored links never disturb it.
                for link in &layout.links {
                    assert!(w.commutes_with(&link_operator(link, basis)));
                    if link.color != p.color {
                        assert!(w.commutes_with(&link_operator(link, other)));
                    }
                }
            }
        }
    }
}

#[test]
fn color_code_plaquette_is_product_of_same_colored_boundary_links() {
    // The three boundary links of one color cover all six vertices.
    for layout in layouts() {
        for p in &layout.plaquettes {
            for c in floquet_core::Color::ALL.into_iter().filter(|&c| c != p.color) {
                let mut covered: Vec<u32> = p
                    .boundary
                    .iter()
                    .map(|&l| layout.link(l))
                    .filter(|l| l.color == c)
                    .flat_map(|l| l.endpoints)
                    .collect();
                covered.sort_unstable();
                let mut vs = p.vertices.to_vec();
                vs.sort_unstable();
                assert_eq!(covered, vs);
            }
        }
    }
}

#[test]
fn anticommuting_pairs() {
    let a = PauliString::new().with(1, Pauli::X).with(2, Pauli::Y);
    let b = PauliString::new().with(2, Pauli::Z).with(3, Pauli::X);
    assert!(!a.commutes_with(&b));
    let c = PauliString::new().with(1, Pauli::Z).with(2, Pauli::Z);
    assert!(a.commutes_with(&c));
}
