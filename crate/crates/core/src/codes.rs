//! Round schedules and detectors for the honeycomb Floquet code and the
//! Floquet Color code.
//!
//! Detectors are first expressed over link measurement *outcomes*
//! `(link, instance)`. With auxiliary resets each outcome is one record.
//! Without resets the record at instance `k` is the running XOR of outcomes
//! `1..=k`, so outcome `k` is recovered as `raw[k] ⊕ raw[k-1]`; the detector's
//! record set is the symmetric difference of those pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, MeasurementPlan};
use crate::error::{Error, Result};
use crate::lattice::{Color, Layout, LinkId, Pauli, PlaquetteId};
use crate::simulator::{self, Program};

pub const HONEYCOMB_MIN_ROUNDS: usize = 7;
pub const COLOR_MIN_ROUNDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundBasis {
    /// Each link is measured in its own Pauli type.
    Native,
    X,
    Y,
    Z,
}

impl RoundBasis {
    fn flipped(self) -> RoundBasis {
        match self {
            RoundBasis::X => RoundBasis::Z,
            RoundBasis::Z => RoundBasis::X,
            other => other,
        }
    }
}

impl fmt::Display for RoundBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundBasis::Native => "native",
            RoundBasis::X => "x",
            RoundBasis::Y => "y",
            RoundBasis::Z => "z",
        })
    }
}

impl From<Pauli> for RoundBasis {
    fn from(p: Pauli) -> Self {
        match p {
            Pauli::X => RoundBasis::X,
            Pauli::Y => RoundBasis::Y,
            Pauli::Z => RoundBasis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSpec {
    pub color: Color,
    pub basis: RoundBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Honeycomb,
    Color,
}

impl CodeKind {
    pub fn default_rounds(self) -> usize {
        match self {
            CodeKind::Honeycomb => HONEYCOMB_MIN_ROUNDS,
            CodeKind::Color => COLOR_MIN_ROUNDS,
        }
    }

    pub fn schedule(self, n_rounds: usize) -> Result<Vec<RoundSpec>> {
        match self {
            CodeKind::Honeycomb => honeycomb_schedule(n_rounds),
            CodeKind::Color => color_code_schedule(n_rounds),
        }
    }

    pub fn detectors(self, layout: &Layout, schedule: &[RoundSpec], reset_aux: bool) -> Result<Vec<Detector>> {
        match self {
            CodeKind::Honeycomb => honeycomb_detectors(layout, schedule, reset_aux),
            CodeKind::Color => color_code_detectors(layout, schedule, reset_aux),
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Honeycomb => "honeycomb",
            CodeKind::Color => "color",
        })
    }
}

impl std::str::FromStr for CodeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "honeycomb" => Ok(CodeKind::Honeycomb),
            "color" => Ok(CodeKind::Color),
            other => Err(format!("unknown code `{other}` (expected honeycomb or color)")),
        }
    }
}

/// A set of records whose XOR is 0 on every noiseless shot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detector {
    pub id: usize,
    pub plaquette: PlaquetteId,
    pub color: Color,
    pub basis: RoundBasis,
    /// Sorted, duplicate free.
    pub records: Vec<usize>,
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{} plaquette={} basis={} records=", self.id, self.plaquette, self.basis)?;
        for (k, r) in self.records.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Honeycomb rounds cycling through `order` with native link bases.
pub fn honeycomb_schedule_with_order(n_rounds: usize, order: [Color; 3]) -> Result<Vec<RoundSpec>> {
    if n_rounds < HONEYCOMB_MIN_ROUNDS {
        return Err(Error::TooFewRounds { code: "honeycomb", min: HONEYCOMB_MIN_ROUNDS, got: n_rounds });
    }
    Ok((0..n_rounds).map(|t| RoundSpec { color: order[t % 3], basis: RoundBasis::Native }).collect())
}

/// Red, green, blue, red, ...
pub fn honeycomb_schedule(n_rounds: usize) -> Result<Vec<RoundSpec>> {
    honeycomb_schedule_with_order(n_rounds, [Color::Red, Color::Green, Color::Blue])
}

/// Color-code rounds: the color steps red → green → blue while the basis
/// alternates, giving a period of six rounds.
pub fn color_code_schedule_from(n_rounds: usize, start_color: Color, start_basis: Pauli) -> Result<Vec<RoundSpec>> {
    if n_rounds < COLOR_MIN_ROUNDS {
        return Err(Error::TooFewRounds { code: "color", min: COLOR_MIN_ROUNDS, got: n_rounds });
    }
    if start_basis == Pauli::Y {
        return Err(Error::UnsupportedBasis(Pauli::Y));
    }
    let offset = Color::ALL.iter().position(|&c| c == start_color).unwrap();
    let mut basis = RoundBasis::from(start_basis);
    Ok((0..n_rounds)
        .map(|t| {
            let spec = RoundSpec { color: Color::ALL[(offset + t) % 3], basis };
            basis = basis.flipped();
            spec
        })
        .collect())
}

pub fn color_code_schedule(n_rounds: usize) -> Result<Vec<RoundSpec>> {
    color_code_schedule_from(n_rounds, Color::Red, Pauli::X)
}

/// A plaquette value inferred from link outcomes.
type Evaluation = BTreeSet<(LinkId, usize)>;

fn outcome_terms_to_records(plan: &MeasurementPlan, terms: &BTreeSet<(LinkId, usize)>, reset_aux: bool) -> Vec<usize> {
    let mut records = BTreeSet::new();
    let mut toggle = |r: usize| {
        if !records.remove(&r) {
            records.insert(r);
        }
    };
    for &(link, instance) in terms {
        let rec = plan.record_of(link, instance).expect("outcome was scheduled");
        toggle(rec);
        if !reset_aux && instance > 1 {
            toggle(plan.record_of(link, instance - 1).expect("earlier instance was scheduled"));
        }
    }
    records.into_iter().collect()
}

fn symmetric_difference(a: &Evaluation, b: &Evaluation) -> Evaluation {
    a.symmetric_difference(b).copied().collect()
}

/// Outcome of `link` measured in round `t`, if any.
fn outcome_in_round(plan: &MeasurementPlan, t: usize, link: LinkId) -> Option<(LinkId, usize)> {
    plan.rounds[t].iter().find(|m| m.link == link).map(|m| (m.link, m.instance))
}

fn finish(
    plan: &MeasurementPlan,
    raw: Vec<(PlaquetteId, Color, RoundBasis, Evaluation)>,
    reset_aux: bool,
) -> Vec<Detector> {
    let mut out: Vec<Detector> = raw
        .into_iter()
        .map(|(plaquette, color, basis, terms)| Detector {
            id: 0,
            plaquette,
            color,
            basis,
            records: outcome_terms_to_records(plan, &terms, reset_aux),
        })
        .collect();
    out.sort_by_key(|d| (d.plaquette, d.basis));
    for (k, d) in out.iter_mut().enumerate() {
        d.id = k;
    }
    out
}

/// Honeycomb detectors. Two consecutive rounds of colors `a ≠ b` evaluate
/// every plaquette of the third color from its six boundary outcomes; each
/// pair of successive evaluations of a plaquette forms a detector. The
/// plaquette operators commute with every link operator, so no comparison is
/// ever invalidated.
pub fn honeycomb_detectors(layout: &Layout, schedule: &[RoundSpec], reset_aux: bool) -> Result<Vec<Detector>> {
    if schedule.len() < HONEYCOMB_MIN_ROUNDS {
        return Err(Error::TooFewRounds { code: "honeycomb", min: HONEYCOMB_MIN_ROUNDS, got: schedule.len() });
    }
    if let Some((t, r)) = schedule.iter().enumerate().find(|(_, r)| r.basis != RoundBasis::Native) {
        return Err(Error::InvalidBasis { round: t, basis: r.basis.to_string(), code: "honeycomb" });
    }
    let plan = MeasurementPlan::new(layout, schedule)?;

    let mut last: BTreeMap<PlaquetteId, Evaluation> = BTreeMap::new();
    let mut raw = Vec::new();
    for t in 1..schedule.len() {
        let (a, b) = (schedule[t - 1].color, schedule[t].color);
        if a == b {
            continue;
        }
        let target = a.third(b);
        for p in layout.plaquettes.iter().filter(|p| p.color == target) {
            let mut eval = Evaluation::new();
            for &lid in &p.boundary {
                let term = outcome_in_round(&plan, t - 1, lid)
                    .or_else(|| outcome_in_round(&plan, t, lid))
                    .expect("boundary link measured in one of the two rounds");
                eval.insert(term);
            }
            if let Some(prev) = last.insert(p.id, eval.clone()) {
                raw.push((p.id, p.color, RoundBasis::Native, symmetric_difference(&prev, &eval)));
            }
        }
    }
    Ok(finish(&plan, raw, reset_aux))
}

/// Color-code detectors. An `α` round of color `a` evaluates `W^α` of every
/// plaquette of a color `c ≠ a` from its three `a`-colored boundary
/// outcomes. A `¬α` round of color `c` randomizes `W^α` on the `c`
/// plaquettes, so successive evaluations are compared only when no such round
/// lies between them. The deterministic initial value of `W^z` is never used.
pub fn color_code_detectors(layout: &Layout, schedule: &[RoundSpec], reset_aux: bool) -> Result<Vec<Detector>> {
    if schedule.len() < COLOR_MIN_ROUNDS {
        return Err(Error::TooFewRounds { code: "color", min: COLOR_MIN_ROUNDS, got: schedule.len() });
    }
    color_code_detectors_unchecked(layout, schedule, reset_aux)
}

/// As [`color_code_detectors`] without the minimum-length check, for
/// studying truncated schedules.
pub fn color_code_detectors_unchecked(
    layout: &Layout,
    schedule: &[RoundSpec],
    reset_aux: bool,
) -> Result<Vec<Detector>> {
    if let Some((t, r)) = schedule.iter().enumerate().find(|(_, r)| !matches!(r.basis, RoundBasis::X | RoundBasis::Z)) {
        return Err(Error::InvalidBasis { round: t, basis: r.basis.to_string(), code: "color" });
    }
    let plan = MeasurementPlan::new(layout, schedule)?;

    let mut last: BTreeMap<(PlaquetteId, RoundBasis), Evaluation> = BTreeMap::new();
    let mut raw = Vec::new();
    for (t, round) in schedule.iter().enumerate() {
        // Disturbance first: the round's own links are not on the boundary of
        // its color's plaquettes, so it never also evaluates them.
        let disturbed = round.basis.flipped();
        for p in layout.plaquettes.iter().filter(|p| p.color == round.color) {
            last.remove(&(p.id, disturbed));
        }
        for p in layout.plaquettes.iter().filter(|p| p.color != round.color) {
            let eval: Evaluation = p
                .boundary
                .iter()
                .filter(|&&lid| layout.link(lid).color == round.color)
                .map(|&lid| outcome_in_round(&plan, t, lid).expect("link of the round's color"))
                .collect();
            if let Some(prev) = last.insert((p.id, round.basis), eval.clone()) {
                raw.push((p.id, p.color, round.basis, symmetric_difference(&prev, &eval)));
            }
        }
    }
    Ok(finish(&plan, raw, reset_aux))
}

/// A detector that fired on a noiseless shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorFailure {
    pub detector: usize,
    pub trial: usize,
}

/// Fixed base seed for detector verification runs.
pub const VERIFY_SEED: u64 = 0x5eed_0fde_7ec7;

/// Runs the circuit without noise `trials` times and reports every detector
/// whose records ever XOR to 1 (first failing trial only).
pub fn verify_detectors(circuit: &Circuit, detectors: &[Detector], trials: usize) -> Vec<DetectorFailure> {
    let program = Program::compile_noiseless(circuit);
    let mut failed = vec![false; detectors.len()];
    let mut out = Vec::new();
    for trial in 0..trials.max(1) {
        let bits = simulator::run_program(&program, simulator::shot_seed(VERIFY_SEED, trial as u64));
        for (k, d) in detectors.iter().enumerate() {
            if failed[k] {
                continue;
            }
            let parity = d.records.iter().fold(false, |acc, &r| acc ^ simulator::bit(&bits, r));
            if parity {
                failed[k] = true;
                out.push(DetectorFailure { detector: d.id, trial });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::schedule_rounds;
    use crate::lattice::{build_layout, build_patch};

    use Color::*;

    #[test]
    fn honeycomb_orders() {
        let colors = |s: Vec<RoundSpec>| s.into_iter().map(|r| r.color).collect::<Vec<_>>();
        assert_eq!(colors(honeycomb_schedule(7).unwrap()), vec![Red, Green, Blue, Red, Green, Blue, Red]);
        assert_eq!(colors(honeycomb_schedule(8).unwrap()), vec![Red, Green, Blue, Red, Green, Blue, Red, Green]);
        assert_eq!(
            colors(honeycomb_schedule_with_order(7, [Green, Blue, Red]).unwrap()),
            vec![Green, Blue, Red, Green, Blue, Red, Green]
        );
        assert!(honeycomb_schedule(6).is_err());
        assert!(honeycomb_schedule(7).unwrap().iter().all(|r| r.basis == RoundBasis::Native));
    }

    #[test]
    fn color_code_ten_rounds() {
        use RoundBasis::{X, Z};
        let s: Vec<(Color, RoundBasis)> =
            color_code_schedule(10).unwrap().into_iter().map(|r| (r.color, r.basis)).collect();
        assert_eq!(
            s,
            vec![
                (Red, X),
                (Green, Z),
                (Blue, X),
                (Red, Z),
                (Green, X),
                (Blue, Z),
                (Red, X),
                (Green, Z),
                (Blue, X),
                (Red, Z)
            ]
        );
        assert!(color_code_schedule(6).is_err());
        let twelve = color_code_schedule(12).unwrap();
        assert_eq!(twelve[..6], twelve[6..]);
    }

    #[test]
    fn falcon_honeycomb_reset_detectors() {
        let layout = build_layout("falcon27").unwrap();
        let d = honeycomb_detectors(&layout, &honeycomb_schedule(7).unwrap(), true).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|d| d.records.len() == 12));
    }

    #[test]
    fn falcon_blue_no_reset_uses_second_instances() {
        let layout = build_layout("falcon27").unwrap();
        let sched = honeycomb_schedule(7).unwrap();
        let d = honeycomb_detectors(&layout, &sched, false).unwrap();
        let c = schedule_rounds(&layout, &sched, false).unwrap();
        let blue = d.iter().find(|d| d.color == Blue).unwrap();
        assert_eq!(blue.records.len(), 6);
        for &r in &blue.records {
            let tag = c.tags[r];
            assert_eq!(tag.instance, 2);
            assert_ne!(layout.link(tag.link).color, Blue);
        }
    }

    #[test]
    fn single_patch_no_reset_combines_first_and_third() {
        // The lone plaquette is red; its boundary is green and blue, so with
        // the default order it is compared over rounds (2,3) and (5,6). Use
        // the order that makes it the "third" plaquette: blue, red, green.
        let layout = build_patch(1, 1).unwrap();
        assert_eq!(layout.plaquettes[0].color, Red);
        let sched = honeycomb_schedule_with_order(7, [Blue, Red, Green]).unwrap();
        // rounds: B R G B R G B -> the green plaquette role is played by red:
        // evaluations at (G,B) = rounds (3,4) and (6,7), with B measured at
        // instances 2 and 3 and G at instances 1 and 2.
        let d = honeycomb_detectors(&layout, &sched, false).unwrap();
        assert_eq!(d.len(), 1);
        let c = schedule_rounds(&layout, &sched, false).unwrap();
        let mut green_inst = BTreeSet::new();
        let mut blue_inst = BTreeSet::new();
        for &r in &d[0].records {
            let tag = c.tags[r];
            match layout.link(tag.link).color {
                Green => green_inst.insert(tag.instance),
                Blue => blue_inst.insert(tag.instance),
                Red => unreachable!(),
            };
        }
        assert_eq!(d[0].records.len(), 3 + 6);
        assert_eq!(green_inst, [2].into());
        assert_eq!(blue_inst, [1, 3].into());
    }

    #[test]
    fn falcon_color_code_has_four_detectors() {
        let layout = build_layout("falcon27").unwrap();
        let d = color_code_detectors(&layout, &color_code_schedule(10).unwrap(), true).unwrap();
        assert_eq!(d.len(), 4);
        for p in &layout.plaquettes {
            let bases: BTreeSet<_> = d.iter().filter(|d| d.plaquette == p.id).map(|d| d.basis).collect();
            assert_eq!(bases, [RoundBasis::X, RoundBasis::Z].into());
        }
        assert!(d.iter().all(|d| d.records.len() == 6));
    }

    #[test]
    fn six_rounds_give_fewer_color_detectors() {
        let layout = build_layout("hummingbird65").unwrap();
        let full = color_code_schedule(10).unwrap();
        let ten = color_code_detectors(&layout, &full, true).unwrap();
        let six = color_code_detectors_unchecked(&layout, &full[..6], true).unwrap();
        assert!(six.len() < ten.len());
        assert_eq!(ten.len(), 2 * layout.plaquettes.len());
    }

    #[test]
    fn wrong_bases_rejected() {
        let layout = build_layout("falcon27").unwrap();
        let honey = honeycomb_schedule(7).unwrap();
        assert!(matches!(
            color_code_detectors(&layout, &[honey.clone(), honey.clone()].concat(), true),
            Err(Error::InvalidBasis { .. })
        ));
        let color = color_code_schedule(10).unwrap();
        assert!(matches!(honeycomb_detectors(&layout, &color, true), Err(Error::InvalidBasis { .. })));
        let mut with_y = color.clone();
        with_y[3].basis = RoundBasis::Y;
        assert!(color_code_detectors(&layout, &with_y, true).is_err());
    }

    #[test]
    fn detector_line_format() {
        let d = Detector { id: 3, plaquette: 1, color: Red, basis: RoundBasis::X, records: vec![1, 4, 9] };
        assert_eq!(d.to_string(), "D3 plaquette=1 basis=x records=1,4,9");
    }

    #[test]
    fn shipped_detectors_verify() {
        let layout = build_layout("falcon27").unwrap();
        for code in [CodeKind::Honeycomb, CodeKind::Color] {
            for reset in [true, false] {
                let sched = code.schedule(code.default_rounds()).unwrap();
                let c = schedule_rounds(&layout, &sched, reset).unwrap();
                let d = code.detectors(&layout, &sched, reset).unwrap();
                assert!(verify_detectors(&c, &d, 100).is_empty(), "{code} reset={reset}");
            }
        }
    }

    #[test]
    fn broken_detector_is_caught() {
        let layout = build_layout("falcon27").unwrap();
        let sched = honeycomb_schedule(7).unwrap();
        let c = schedule_rounds(&layout, &sched, true).unwrap();
        let mut d = honeycomb_detectors(&layout, &sched, true).unwrap();
        d[0].records.pop();
        let report = verify_detectors(&c, &d, 100);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].detector, d[0].id);
    }
}
