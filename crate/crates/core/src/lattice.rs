//! Heavy-hexagon layouts.
//!
//! Every layout is cut out of one abstract brick-wall lattice. Code qubits
//! sit at even columns of horizontal chains; the odd chain positions and the
//! vertical bridges between chains hold the auxiliary qubits. A hexagon in
//! band `r` (between chains `r` and `r + 1`) is identified by its left
//! column `b`, with `b ≡ 2·(r mod 2) (mod 4)`.
//!
//! Plaquette vertices are listed clockwise from the top-left vertex. With
//! this numbering the boundary links, starting with the one between vertex
//! 0 and vertex 1, have Pauli types `z, x, y, z, x, y`, so that the plaquette
//! operator is `X0 Y1 Z2 X3 Y4 Z5`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type QubitId = u32;
pub type LinkId = usize;
pub type PlaquetteId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitRole {
    Code,
    Auxiliary,
    Unused,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::X => "x",
            Pauli::Y => "y",
            Pauli::Z => "z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    /// The color that is neither `self` nor `other`.
    pub fn third(self, other: Color) -> Color {
        debug_assert_ne!(self, other);
        Color::ALL.into_iter().find(|&c| c != self && c != other).unwrap()
    }

    fn from_residue(u: i32) -> Color {
        match u.rem_euclid(3) {
            0 => Color::Blue,
            1 => Color::Red,
            _ => Color::Green,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub id: LinkId,
    pub pauli_type: Pauli,
    pub color: Color,
    pub endpoints: [QubitId; 2],
    pub aux: QubitId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plaquette {
    pub id: PlaquetteId,
    pub color: Color,
    /// Clockwise from the top-left vertex.
    pub vertices: [QubitId; 6],
    /// `boundary[k]` joins `vertices[k]` and `vertices[(k + 1) % 6]`.
    pub boundary: [LinkId; 6],
}

/// Pauli type of each boundary position of a plaquette.
pub const BOUNDARY_TYPES: [Pauli; 6] = [Pauli::Z, Pauli::X, Pauli::Y, Pauli::Z, Pauli::X, Pauli::Y];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub name: String,
    #[serde(with = "qubit_list")]
    pub qubits: BTreeMap<QubitId, QubitRole>,
    pub links: Vec<Link>,
    pub plaquettes: Vec<Plaquette>,
    pub coupling: BTreeSet<(QubitId, QubitId)>,
}

mod qubit_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{QubitId, QubitRole};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        id: QubitId,
        role: QubitRole,
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<QubitId, QubitRole>, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = map.iter().map(|(&id, &role)| Entry { id, role }).collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<QubitId, QubitRole>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        Ok(entries.into_iter().map(|e| (e.id, e.role)).collect())
    }
}

impl Layout {
    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn plaquette(&self, id: PlaquetteId) -> &Plaquette {
        &self.plaquettes[id]
    }

    pub fn role(&self, q: QubitId) -> QubitRole {
        self.qubits.get(&q).copied().unwrap_or(QubitRole::Unused)
    }

    pub fn is_coupled(&self, a: QubitId, b: QubitId) -> bool {
        self.coupling.contains(&(a.min(b), a.max(b)))
    }

    /// Code and auxiliary qubits in ascending order.
    pub fn active_qubits(&self) -> Vec<QubitId> {
        self.qubits.iter().filter(|(_, r)| **r != QubitRole::Unused).map(|(&q, _)| q).collect()
    }

    pub fn links_of_color(&self, color: Color) -> impl Iterator<Item = &Link> + '_ {
        self.links.iter().filter(move |l| l.color == color)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Layout> {
        Ok(serde_json::from_str(text)?)
    }
}

// ---------------------------------------------------------------------------
// Construction

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Site {
    Chain { row: i32, col: i32 },
    Bridge { band: i32, col: i32 },
}

impl Site {
    fn order_key(self) -> (i32, i32) {
        match self {
            Site::Chain { row, col } => (2 * row, col),
            Site::Bridge { band, col } => (2 * band + 1, col),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Hex {
    band: i32,
    left: i32,
}

impl Hex {
    fn color(self) -> Color {
        Color::from_residue((self.left + 2) / 2)
    }

    fn vertex_sites(self) -> [Site; 6] {
        let (r, b) = (self.band, self.left);
        [
            Site::Chain { row: r, col: b },
            Site::Chain { row: r, col: b + 2 },
            Site::Chain { row: r, col: b + 4 },
            Site::Chain { row: r + 1, col: b + 4 },
            Site::Chain { row: r + 1, col: b + 2 },
            Site::Chain { row: r + 1, col: b },
        ]
    }

    /// Aux site of each boundary link, in boundary order.
    fn link_sites(self) -> [Site; 6] {
        let (r, b) = (self.band, self.left);
        [
            Site::Chain { row: r, col: b + 1 },
            Site::Chain { row: r, col: b + 3 },
            Site::Bridge { band: r, col: b + 4 },
            Site::Chain { row: r + 1, col: b + 3 },
            Site::Chain { row: r + 1, col: b + 1 },
            Site::Bridge { band: r, col: b },
        ]
    }
}

fn band_offset(band: i32) -> i32 {
    2 * band.rem_euclid(2)
}

/// Color of the link whose auxiliary qubit sits at `site`: the color of
/// neither of the two hexagons it borders.
fn link_color(site: Site) -> Color {
    match site {
        Site::Chain { row, col } => {
            // Horizontal link between columns col-1 and col+1. The two
            // bordering hexagons (one above, one below) have left columns
            // col-1 and col-3.
            let (c0, c1) = (col - 1, col - 3);
            debug_assert!(band_offset(row) == c0.rem_euclid(4) || band_offset(row) == c1.rem_euclid(4));
            Color::from_residue((c0 + 2) / 2).third(Color::from_residue((c1 + 2) / 2))
        }
        Site::Bridge { col, .. } => Color::from_residue((col + 2) / 2).third(Color::from_residue((col - 2) / 2)),
    }
}

/// Physical description of a heavy-hex device: horizontal chains and the
/// bridge qubits between consecutive chains.
struct DeviceMap {
    name: &'static str,
    num_qubits: u32,
    /// (first column, qubit ids left to right)
    chains: Vec<(i32, Vec<QubitId>)>,
    /// per band: (column, bridge qubit id)
    bridges: Vec<Vec<(i32, QubitId)>>,
    /// Couplings to pendant qubits outside the chains.
    extra: Vec<(QubitId, QubitId)>,
}

impl DeviceMap {
    fn site_ids(&self) -> HashMap<Site, QubitId> {
        let mut ids = HashMap::new();
        for (row, (first, chain)) in self.chains.iter().enumerate() {
            for (k, &q) in chain.iter().enumerate() {
                ids.insert(Site::Chain { row: row as i32, col: first + k as i32 }, q);
            }
        }
        for (band, bridges) in self.bridges.iter().enumerate() {
            for &(col, q) in bridges {
                ids.insert(Site::Bridge { band: band as i32, col }, q);
            }
        }
        ids
    }

    fn coupling(&self) -> BTreeSet<(QubitId, QubitId)> {
        let mut edges = BTreeSet::new();
        let mut add = |a: QubitId, b: QubitId| {
            edges.insert((a.min(b), a.max(b)));
        };
        for (_, chain) in &self.chains {
            for w in chain.windows(2) {
                add(w[0], w[1]);
            }
        }
        let ids = self.site_ids();
        for (band, bridges) in self.bridges.iter().enumerate() {
            for &(col, q) in bridges {
                let above = ids[&Site::Chain { row: band as i32, col }];
                let below = ids[&Site::Chain { row: band as i32 + 1, col }];
                add(above, q);
                add(q, below);
            }
        }
        for &(a, b) in &self.extra {
            add(a, b);
        }
        edges
    }
}

fn falcon27() -> DeviceMap {
    DeviceMap {
        name: "falcon27",
        num_qubits: 27,
        chains: vec![(-1, vec![0, 1, 4, 7, 10, 12, 15, 18, 21, 23]), (0, vec![3, 5, 8, 11, 14, 16, 19, 22, 25, 26])],
        bridges: vec![vec![(0, 2), (4, 13), (8, 24)]],
        extra: vec![(6, 7), (17, 18), (8, 9), (19, 20)],
    }
}

fn regular_device(
    name: &'static str,
    num_qubits: u32,
    chain_lens: &[(i32, u32)],
    bridges_per_band: usize,
) -> DeviceMap {
    let mut next = 0;
    let mut chains = Vec::new();
    let mut bridges = Vec::new();
    for (row, &(first, len)) in chain_lens.iter().enumerate() {
        chains.push((first, (next..next + len).collect()));
        next += len;
        if row + 1 < chain_lens.len() {
            let offset = band_offset(row as i32);
            let band = (0..bridges_per_band)
                .map(|k| {
                    let q = next + k as u32;
                    (offset + 4 * k as i32, q)
                })
                .collect();
            bridges.push(band);
            next += bridges_per_band as u32;
        }
    }
    assert_eq!(next, num_qubits);
    DeviceMap { name, num_qubits, chains, bridges, extra: vec![] }
}

fn hummingbird65() -> DeviceMap {
    regular_device("hummingbird65", 65, &[(0, 10), (0, 11), (0, 11), (0, 11), (1, 10)], 3)
}

fn eagle127() -> DeviceMap {
    regular_device("eagle127", 127, &[(0, 14), (0, 15), (0, 15), (0, 15), (0, 15), (0, 15), (1, 14)], 4)
}

fn assemble(
    name: String,
    hexes: &[Hex],
    ids: &HashMap<Site, QubitId>,
    all_qubits: impl Iterator<Item = QubitId>,
    coupling: BTreeSet<(QubitId, QubitId)>,
) -> Layout {
    let mut qubits: BTreeMap<QubitId, QubitRole> = all_qubits.map(|q| (q, QubitRole::Unused)).collect();

    // links keyed by aux site
    let mut link_sites: BTreeMap<QubitId, (Site, [QubitId; 2], Pauli)> = BTreeMap::new();
    for hex in hexes {
        let v = hex.vertex_sites();
        for (k, site) in hex.link_sites().into_iter().enumerate() {
            let ends = [ids[&v[k]], ids[&v[(k + 1) % 6]]];
            let aux = ids[&site];
            let pauli = BOUNDARY_TYPES[k];
            let entry = link_sites.entry(aux).or_insert((site, ends, pauli));
            debug_assert_eq!(entry.2, pauli);
        }
    }
    let mut link_of_aux = HashMap::new();
    let mut links = Vec::with_capacity(link_sites.len());
    for (id, (&aux, &(site, endpoints, pauli_type))) in link_sites.iter().enumerate() {
        link_of_aux.insert(aux, id);
        let mut endpoints = endpoints;
        endpoints.sort_unstable();
        links.push(Link { id, pauli_type, color: link_color(site), endpoints, aux });
        qubits.insert(aux, QubitRole::Auxiliary);
        for q in endpoints {
            qubits.insert(q, QubitRole::Code);
        }
    }

    let plaquettes = hexes
        .iter()
        .enumerate()
        .map(|(id, hex)| Plaquette {
            id,
            color: hex.color(),
            vertices: hex.vertex_sites().map(|s| ids[&s]),
            boundary: hex.link_sites().map(|s| link_of_aux[&ids[&s]]),
        })
        .collect();

    Layout { name, qubits, links, plaquettes, coupling }
}

/// Builds the layout of a named IBM heavy-hex device using its physical
/// qubit numbering. All complete hexagons of the device become plaquettes.
pub fn build_layout(device_name: &str) -> Result<Layout> {
    let device = match device_name {
        "falcon27" => falcon27(),
        "hummingbird65" => hummingbird65(),
        "eagle127" => eagle127(),
        other => return Err(Error::UnknownDevice(other.to_string())),
    };
    let ids = device.site_ids();
    let bands = device.bridges.len() as i32;
    let max_col = device.chains.iter().map(|(first, chain)| first + chain.len() as i32).max().unwrap_or(0);
    let mut hexes = Vec::new();
    for band in 0..bands {
        let mut left = band_offset(band);
        while left + 4 <= max_col {
            let hex = Hex { band, left };
            let complete = hex.vertex_sites().iter().all(|s| ids.contains_key(s))
                && hex.link_sites().iter().all(|s| ids.contains_key(s));
            if complete {
                hexes.push(hex);
            }
            left += 4;
        }
    }
    Ok(assemble(device.name.to_string(), &hexes, &ids, 0..device.num_qubits, device.coupling()))
}

/// A planar patch of `rows` bands with `cols` hexagons each, alternate bands
/// shifted by half a hexagon. Qubits are numbered consecutively chain by
/// chain, each chain followed by the bridges below it.
pub fn build_patch(rows: usize, cols: usize) -> Result<Layout> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidPatch { rows, cols });
    }
    let hexes: Vec<Hex> = (0..rows as i32)
        .flat_map(|band| (0..cols as i32).map(move |k| Hex { band, left: 4 * k + band_offset(band) }))
        .collect();
    let sites: BTreeSet<(i32, i32, Site)> = hexes
        .iter()
        .flat_map(|h| h.vertex_sites().into_iter().chain(h.link_sites()))
        .map(|s| {
            let (a, b) = s.order_key();
            (a, b, s)
        })
        .collect();
    let ids: HashMap<Site, QubitId> = sites.iter().enumerate().map(|(i, &(_, _, s))| (s, i as QubitId)).collect();

    let mut coupling = BTreeSet::new();
    for hex in &hexes {
        let v = hex.vertex_sites();
        for (k, site) in hex.link_sites().into_iter().enumerate() {
            let aux = ids[&site];
            for end in [v[k], v[(k + 1) % 6]] {
                let q = ids[&end];
                coupling.insert((q.min(aux), q.max(aux)));
            }
        }
    }
    let n = ids.len() as QubitId;
    Ok(assemble(format!("patch{rows}x{cols}"), &hexes, &ids, 0..n, coupling))
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LinkEndpointNotCode { link: LinkId, qubit: QubitId },
    LinkAuxNotAuxiliary { link: LinkId, qubit: QubitId },
    LinkNotCoupled { link: LinkId, qubits: (QubitId, QubitId) },
    PlaquetteDegenerate { plaquette: PlaquetteId },
    BoundaryMismatch { plaquette: PlaquetteId, position: usize, link: LinkId },
    BoundaryColor { plaquette: PlaquetteId, link: LinkId },
    BoundaryType { plaquette: PlaquetteId, link: LinkId },
    EndColor { plaquette: PlaquetteId, link: LinkId },
    VertexLinks { qubit: QubitId },
}

impl Violation {
    /// The link the violation concerns, if any.
    pub fn link(&self) -> Option<LinkId> {
        match *self {
            Violation::LinkEndpointNotCode { link, .. }
            | Violation::LinkAuxNotAuxiliary { link, .. }
            | Violation::LinkNotCoupled { link, .. }
            | Violation::BoundaryMismatch { link, .. }
            | Violation::BoundaryColor { link, .. }
            | Violation::BoundaryType { link, .. }
            | Violation::EndColor { link, .. } => Some(link),
            Violation::PlaquetteDegenerate { .. } | Violation::VertexLinks { .. } => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LinkEndpointNotCode { link, qubit } => {
                write!(f, "link {link}: endpoint {qubit} is not a code qubit")
            }
            Violation::LinkAuxNotAuxiliary { link, qubit } => {
                write!(f, "link {link}: qubit {qubit} is not auxiliary")
            }
            Violation::LinkNotCoupled { link, qubits } => {
                write!(f, "link {link}: pair {qubits:?} is not coupled")
            }
            Violation::PlaquetteDegenerate { plaquette } => {
                write!(f, "plaquette {plaquette}: vertices or boundary links not distinct")
            }
            Violation::BoundaryMismatch { plaquette, position, link } => write!(
                f,
                "plaquette {plaquette}: boundary link {link} at position {position} does not join consecutive vertices"
            ),
            Violation::BoundaryColor { plaquette, link } => {
                write!(f, "plaquette {plaquette}: boundary link {link} breaks the color alternation")
            }
            Violation::BoundaryType { plaquette, link } => {
                write!(f, "plaquette {plaquette}: boundary link {link} has the wrong Pauli type")
            }
            Violation::EndColor { plaquette, link } => {
                write!(f, "link {link} ends on plaquette {plaquette} of a different color")
            }
            Violation::VertexLinks { qubit } => {
                write!(f, "code qubit {qubit}: incident links repeat a color or type")
            }
        }
    }
}

/// Checks every link and plaquette invariant. Links on the edge of a finite
/// patch are checked only against plaquettes that exist.
pub fn validate_coloring(layout: &Layout) -> Vec<Violation> {
    let mut out = Vec::new();

    for link in &layout.links {
        for &q in &link.endpoints {
            if layout.role(q) != QubitRole::Code {
                out.push(Violation::LinkEndpointNotCode { link: link.id, qubit: q });
            }
            if !layout.is_coupled(q, link.aux) {
                out.push(Violation::LinkNotCoupled { link: link.id, qubits: (q, link.aux) });
            }
        }
        if layout.role(link.aux) != QubitRole::Auxiliary {
            out.push(Violation::LinkAuxNotAuxiliary { link: link.id, qubit: link.aux });
        }
    }

    for p in &layout.plaquettes {
        let vs: BTreeSet<_> = p.vertices.iter().collect();
        let ls: BTreeSet<_> = p.boundary.iter().collect();
        if vs.len() != 6 || ls.len() != 6 || p.boundary.iter().any(|&l| l >= layout.links.len()) {
            out.push(Violation::PlaquetteDegenerate { plaquette: p.id });
            continue;
        }
        let first = layout.link(p.boundary[0]).color;
        for (k, &lid) in p.boundary.iter().enumerate() {
            let link = layout.link(lid);
            let mut want = [p.vertices[k], p.vertices[(k + 1) % 6]];
            want.sort_unstable();
            let mut got = link.endpoints;
            got.sort_unstable();
            if want != got {
                out.push(Violation::BoundaryMismatch { plaquette: p.id, position: k, link: lid });
            }
            let expected = if k % 2 == 0 { first } else { p.color.third(first) };
            if link.color == p.color || first == p.color || link.color != expected {
                out.push(Violation::BoundaryColor { plaquette: p.id, link: lid });
            }
            if link.pauli_type != BOUNDARY_TYPES[k] {
                out.push(Violation::BoundaryType { plaquette: p.id, link: lid });
            }
        }
        // Links leaving the plaquette from one of its vertices must carry the
        // plaquette's color.
        for link in &layout.links {
            if p.boundary.contains(&link.id) {
                continue;
            }
            if link.endpoints.iter().any(|q| p.vertices.contains(q)) && link.color != p.color {
                out.push(Violation::EndColor { plaquette: p.id, link: link.id });
            }
        }
    }

    let mut incident: BTreeMap<QubitId, Vec<&Link>> = BTreeMap::new();
    for link in &layout.links {
        for &q in &link.endpoints {
            incident.entry(q).or_default().push(link);
        }
    }
    for (q, links) in incident {
        let colors: BTreeSet<_> = links.iter().map(|l| l.color).collect();
        let types: BTreeSet<_> = links.iter().map(|l| l.pauli_type).collect();
        if colors.len() != links.len() || types.len() != links.len() {
            out.push(Violation::VertexLinks { qubit: q });
        }
    }
    out
}
