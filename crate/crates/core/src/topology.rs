//! The catalog of resource-distribution architectures.
//!
//! Architectures are named by three letters: how the source supplies the
//! agents (`P`arallel to all of them, or `S`equential into agent 1), whether
//! agent links are `D`irected or `N`on-directed, and whether the chain is
//! `O`pen or `C`losed. `P` alone is the unlinked parallel design, `PA` and
//! `SA` link every pair of agents.
//!
//! An agent forwards `f` of its state split equally among its out-neighbours.
//! An agent with no out-neighbour loses its forwarded share from the system.
//! Agents never send anything back to the source.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::linalg::Matrix;
use crate::{abs, Error};

/// Tolerance used by [`validate`] for sums that should be exact.
pub const VALIDATION_TOLERANCE: f64 = 1e-12;

/// Agent count used throughout the reference experiments.
pub const DEFAULT_AGENTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArchKind {
    P,
    Pdo,
    Pdc,
    Pno,
    Pnc,
    Sdo,
    Sdc,
    Sno,
    Snc,
    Pa,
    Sa,
}

/// How the source distributes its `b` units per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Supply {
    /// `b / N` into every agent.
    Parallel,
    /// All of `b` into agent 1.
    Sequential,
}

/// Inter-agent link pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Links {
    None,
    DirectedOpen,
    DirectedClosed,
    UndirectedOpen,
    UndirectedClosed,
    Complete,
}

impl ArchKind {
    /// Catalog order used for every listing and table.
    pub const ALL: [ArchKind; 11] = [
        ArchKind::P,
        ArchKind::Pdo,
        ArchKind::Pdc,
        ArchKind::Pno,
        ArchKind::Pnc,
        ArchKind::Sdo,
        ArchKind::Sdc,
        ArchKind::Sno,
        ArchKind::Snc,
        ArchKind::Pa,
        ArchKind::Sa,
    ];

    pub const fn code(self) -> &'static str {
        match self {
            ArchKind::P => "P",
            ArchKind::Pdo => "PDO",
            ArchKind::Pdc => "PDC",
            ArchKind::Pno => "PNO",
            ArchKind::Pnc => "PNC",
            ArchKind::Sdo => "SDO",
            ArchKind::Sdc => "SDC",
            ArchKind::Sno => "SNO",
            ArchKind::Snc => "SNC",
            ArchKind::Pa => "PA",
            ArchKind::Sa => "SA",
        }
    }

    pub const fn supply(self) -> Supply {
        match self {
            ArchKind::P
            | ArchKind::Pdo
            | ArchKind::Pdc
            | ArchKind::Pno
            | ArchKind::Pnc
            | ArchKind::Pa => Supply::Parallel,
            ArchKind::Sdo | ArchKind::Sdc | ArchKind::Sno | ArchKind::Snc | ArchKind::Sa => {
                Supply::Sequential
            }
        }
    }

    pub const fn links(self) -> Links {
        match self {
            ArchKind::P => Links::None,
            ArchKind::Pdo | ArchKind::Sdo => Links::DirectedOpen,
            ArchKind::Pdc | ArchKind::Sdc => Links::DirectedClosed,
            ArchKind::Pno | ArchKind::Sno => Links::UndirectedOpen,
            ArchKind::Pnc | ArchKind::Snc => Links::UndirectedClosed,
            ArchKind::Pa | ArchKind::Sa => Links::Complete,
        }
    }

    pub const fn description(self) -> &'static str {
        match self {
            ArchKind::P => "parallel supply, no agent links",
            ArchKind::Pdo => "parallel supply, directed open chain",
            ArchKind::Pdc => "parallel supply, directed closed cycle",
            ArchKind::Pno => "parallel supply, undirected open chain",
            ArchKind::Pnc => "parallel supply, undirected closed cycle",
            ArchKind::Sdo => "sequential supply, directed open chain",
            ArchKind::Sdc => "sequential supply, directed closed cycle",
            ArchKind::Sno => "sequential supply, undirected open chain",
            ArchKind::Snc => "sequential supply, undirected closed cycle",
            ArchKind::Pa => "parallel supply, all agents interconnected",
            ArchKind::Sa => "sequential supply, all agents interconnected",
        }
    }

    /// Out-neighbours of agent `j` (0-based) among `n` agents, ascending.
    pub fn out_neighbors(self, j: usize, n: usize) -> Vec<usize> {
        let mut set = BTreeSet::new();
        match self.links() {
            Links::None => {}
            Links::DirectedOpen => {
                if j + 1 < n {
                    set.insert(j + 1);
                }
            }
            Links::DirectedClosed => {
                set.insert((j + 1) % n);
            }
            Links::UndirectedOpen => {
                if j > 0 {
                    set.insert(j - 1);
                }
                if j + 1 < n {
                    set.insert(j + 1);
                }
            }
            Links::UndirectedClosed => {
                set.insert((j + n - 1) % n);
                set.insert((j + 1) % n);
            }
            Links::Complete => set.extend((0..n).filter(|&i| i != j)),
        }
        set.remove(&j);
        set.into_iter().collect()
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ArchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ArchKind::ALL
            .into_iter()
            .find(|k| k.code() == s)
            .ok_or_else(|| Error::UnknownArchitecture(s.to_string()))
    }
}

/// One catalog design at a given agent count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArchitectureSpec {
    kind: ArchKind,
    n_agents: usize,
}

impl ArchitectureSpec {
    pub fn new(kind: ArchKind, n_agents: usize) -> Result<Self, Error> {
        if n_agents < 2 {
            return Err(Error::TooFewAgents(n_agents));
        }
        Ok(ArchitectureSpec { kind, n_agents })
    }

    pub fn kind(&self) -> ArchKind {
        self.kind
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }
}

/// Per-step fractions and supply shared by every agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    /// Fraction kept.
    pub s: f64,
    /// Fraction forwarded.
    pub f: f64,
    /// Units injected by the source per step.
    pub b: f64,
    /// Share of the transformed fraction that counts as work.
    pub w: f64,
}

impl FlowParams {
    /// `s` and `f` with unit supply and `w = 1`.
    pub fn new(s: f64, f: f64) -> Self {
        FlowParams { s, f, b: 1.0, w: 1.0 }
    }

    pub fn with_supply(self, b: f64) -> Self {
        FlowParams { b, ..self }
    }

    pub fn with_efficiency(self, w: f64) -> Self {
        FlowParams { w, ..self }
    }

    /// Transformed fraction `1 - s - f`.
    pub fn e(&self) -> f64 {
        1.0 - self.s - self.f
    }

    fn check(&self) -> Result<(), Error> {
        for (name, value) in [("s", self.s), ("f", self.f), ("w", self.w)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::FractionOutOfRange { name, value });
            }
        }
        if self.s + self.f > 1.0 + VALIDATION_TOLERANCE {
            return Err(Error::FractionsExceedUnity {
                sum: self.s + self.f,
            });
        }
        if !self.b.is_finite() || self.b <= 0.0 {
            return Err(Error::NonPositiveSupply(self.b));
        }
        Ok(())
    }
}

/// The concrete linear system of one architecture.
///
/// `forward_matrix[(i, j)]` is the fraction of agent `j`'s state delivered
/// to agent `i` per step. Fields are public so that hand-made systems can be
/// checked with [`validate`]; [`build_architecture`] always returns a valid
/// one.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSystem {
    pub n_agents: usize,
    pub forward_matrix: Matrix,
    pub source_vector: Vec<f64>,
    pub waste_mask: Vec<bool>,
    pub s: f64,
    pub f: f64,
    pub e: f64,
    pub b: f64,
    pub w: f64,
}

impl FlowSystem {
    /// Full one-step update matrix `s I + forward_matrix`.
    pub fn update_matrix(&self) -> Matrix {
        let mut m = self.forward_matrix.clone();
        for i in 0..self.n_agents {
            m[(i, i)] += self.s;
        }
        m
    }

    /// Indices of agents whose forwarded share leaves the system.
    pub fn wasting_agents(&self) -> impl Iterator<Item = usize> + '_ {
        self.waste_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &w)| w.then_some(i))
    }

    pub fn is_lossless(&self) -> bool {
        !self.waste_mask.iter().any(|&w| w)
    }
}

/// Builds the flow system of a catalog architecture.
pub fn build_architecture(spec: ArchitectureSpec, params: FlowParams) -> Result<FlowSystem, Error> {
    params.check()?;
    let n = spec.n_agents();
    let kind = spec.kind();
    let FlowParams { s, f, b, w } = params;

    let mut forward = Matrix::zeros(n, n);
    let mut waste = vec![false; n];
    for j in 0..n {
        let targets = kind.out_neighbors(j, n);
        if targets.is_empty() {
            waste[j] = true;
            continue;
        }
        let share = f / targets.len() as f64;
        for i in targets {
            forward[(i, j)] = share;
        }
    }

    let source = match kind.supply() {
        Supply::Parallel => vec![b / n as f64; n],
        Supply::Sequential => {
            let mut v = vec![0.0; n];
            v[0] = b;
            v
        }
    };

    Ok(FlowSystem {
        n_agents: n,
        forward_matrix: forward,
        source_vector: source,
        waste_mask: waste,
        s,
        f,
        e: 1.0 - s - f,
        b,
        w,
    })
}

/// A broken [`FlowSystem`] invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    FractionsExceedUnity,
    FractionOutOfRange { name: &'static str, value: f64 },
    FractionsDoNotSumToOne { sum: f64 },
    Shape { what: &'static str, expected: usize, found: usize },
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    /// `col` is 1-based.
    ColumnSum { col: usize, sum: f64, expected: f64 },
    NegativeSource { agent: usize, value: f64 },
    SourceTotal { sum: f64, expected: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FractionsExceedUnity => fm.write_str("fractions exceed unity"),
            Violation::FractionOutOfRange { name, value } => {
                write!(fm, "fraction {name} = {value} outside [0, 1]")
            }
            Violation::FractionsDoNotSumToOne { sum } => write!(fm, "s + f + e sums to {sum}, expected 1"),
            Violation::Shape {
                what,
                expected,
                found,
            } => write!(fm, "{what} has length {found}, expected {expected}"),
            Violation::EntryOutOfRange { row, col, value } => {
                write!(fm, "forward entry ({row}, {col}) = {value} outside [0, f]")
            }
            Violation::ColumnSum { col, sum, expected } => {
                write!(fm, "column {col} sums to {sum}, expected {expected}")
            }
            Violation::NegativeSource { agent, value } => {
                write!(fm, "source entry {agent} = {value} is negative")
            }
            Violation::SourceTotal { sum, expected } => {
                write!(fm, "source vector sums to {sum}, expected {expected}")
            }
        }
    }
}

impl Violation {
    pub fn message(&self) -> String {
        format!("{self}")
    }
}

/// Checks every [`FlowSystem`] invariant, returning one entry per breach.
pub fn validate(system: &FlowSystem) -> Vec<Violation> {
    let tol = VALIDATION_TOLERANCE;
    let mut out = Vec::new();
    let n = system.n_agents;

    if system.s + system.f > 1.0 + tol {
        out.push(Violation::FractionsExceedUnity);
    }
    for (name, value) in [("s", system.s), ("f", system.f), ("e", system.e), ("w", system.w)] {
        if !(-tol..=1.0 + tol).contains(&value) {
            out.push(Violation::FractionOutOfRange { name, value });
        }
    }
    let total = system.s + system.f + system.e;
    if abs(total - 1.0) > tol {
        out.push(Violation::FractionsDoNotSumToOne { sum: total });
    }

    let fm = &system.forward_matrix;
    let mut shapes_ok = true;
    for (what, expected, found) in [
        ("forward matrix rows", n, fm.rows()),
        ("forward matrix columns", n, fm.cols()),
        ("source vector", n, system.source_vector.len()),
        ("waste mask", n, system.waste_mask.len()),
    ] {
        if expected != found {
            shapes_ok = false;
            out.push(Violation::Shape {
                what,
                expected,
                found,
            });
        }
    }
    if !shapes_ok {
        return out;
    }

    for i in 0..n {
        for j in 0..n {
            let v = fm[(i, j)];
            if v < -tol || v > system.f + tol || !v.is_finite() {
                out.push(Violation::EntryOutOfRange {
                    row: i + 1,
                    col: j + 1,
                    value: v,
                });
            }
        }
    }
    for j in 0..n {
        let sum = fm.column_sum(j);
        let expected = if system.waste_mask[j] { 0.0 } else { system.f };
        if abs(sum - expected) > tol {
            out.push(Violation::ColumnSum {
                col: j + 1,
                sum,
                expected,
            });
        }
    }

    for (i, &v) in system.source_vector.iter().enumerate() {
        if v < 0.0 {
            out.push(Violation::NegativeSource { agent: i + 1, value: v });
        }
    }
    let sum: f64 = system.source_vector.iter().sum();
    if abs(sum - system.b) > tol {
        out.push(Violation::SourceTotal {
            sum,
            expected: system.b,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(kind: ArchKind, s: f64, f: f64) -> FlowSystem {
        build_architecture(ArchitectureSpec::new(kind, 5).unwrap(), FlowParams::new(s, f)).unwrap()
    }

    #[test]
    fn codes_round_trip() {
        for k in ArchKind::ALL {
            assert_eq!(k.code().parse::<ArchKind>().unwrap(), k);
        }
        assert!(matches!("pdo".parse::<ArchKind>(), Err(Error::UnknownArchitecture(_))));
        assert!("ALL".parse::<ArchKind>().is_err());
    }

    #[test]
    fn pnc_matches_half_f_coefficients() {
        let f = 0.1;
        let s = sys(ArchKind::Pnc, 0.8, f);
        let mut nonzero = 0;
        for i in 0..5 {
            for j in 0..5 {
                let adjacent = (i + 1) % 5 == j || (j + 1) % 5 == i;
                let want = if adjacent { 0.5 * f } else { 0.0 };
                assert_eq!(s.forward_matrix[(i, j)], want, "({i},{j})");
                nonzero += adjacent as usize;
            }
        }
        assert_eq!(nonzero, 10);
        assert_eq!(s.source_vector, vec![0.2; 5]);
        assert!(s.is_lossless());
    }

    #[test]
    fn sdo_is_a_wasting_chain() {
        let f = 0.8;
        let s = sys(ArchKind::Sdo, 0.1, f);
        for j in 0..4 {
            for i in 0..5 {
                let want = if i == j + 1 { f } else { 0.0 };
                assert_eq!(s.forward_matrix[(i, j)], want);
            }
        }
        assert_eq!(s.forward_matrix.column_sum(4), 0.0);
        assert_eq!(s.waste_mask, vec![false, false, false, false, true]);
        assert_eq!(s.source_vector, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn plain_parallel_has_no_links() {
        let s = sys(ArchKind::P, 0.8, 0.1);
        assert_eq!(s.forward_matrix, Matrix::zeros(5, 5));
        assert!(s.waste_mask.iter().all(|&w| w));
        assert_eq!(s.source_vector, vec![0.2; 5]);
    }

    #[test]
    fn complete_graphs_split_f_evenly() {
        for kind in [ArchKind::Pa, ArchKind::Sa] {
            let s = sys(kind, 0.8, 0.1);
            for i in 0..5 {
                for j in 0..5 {
                    let want = if i == j { 0.0 } else { 0.1 / 4.0 };
                    assert_eq!(s.forward_matrix[(i, j)], want);
                }
            }
        }
        assert_eq!(sys(ArchKind::Sa, 0.8, 0.1).source_vector[0], 1.0);
    }

    #[test]
    fn open_undirected_endpoints_send_full_f() {
        let s = sys(ArchKind::Pno, 0.1, 0.8);
        assert_eq!(s.forward_matrix[(1, 0)], 0.8);
        assert_eq!(s.forward_matrix[(3, 4)], 0.8);
        assert_eq!(s.forward_matrix[(0, 1)], 0.4);
        assert_eq!(s.forward_matrix[(2, 1)], 0.4);
    }

    #[test]
    fn two_agent_cycles_collapse_to_one_link() {
        for kind in [ArchKind::Pnc, ArchKind::Pdc, ArchKind::Pno] {
            let s = build_architecture(ArchitectureSpec::new(kind, 2).unwrap(), FlowParams::new(0.5, 0.4)).unwrap();
            assert_eq!(s.forward_matrix[(0, 1)], 0.4, "{kind}");
            assert_eq!(s.forward_matrix[(1, 0)], 0.4, "{kind}");
            assert!(validate(&s).is_empty());
        }
    }

    #[test]
    fn build_rejects_bad_inputs() {
        assert_eq!(ArchitectureSpec::new(ArchKind::P, 1), Err(Error::TooFewAgents(1)));
        let spec = ArchitectureSpec::new(ArchKind::P, 5).unwrap();
        assert!(matches!(
            build_architecture(spec, FlowParams::new(0.6, 0.5)),
            Err(Error::FractionsExceedUnity { .. })
        ));
        assert!(matches!(
            build_architecture(spec, FlowParams::new(-0.1, 0.5)),
            Err(Error::FractionOutOfRange { name: "s", .. })
        ));
        assert_eq!(
            build_architecture(spec, FlowParams::new(0.5, 0.4).with_supply(0.0)),
            Err(Error::NonPositiveSupply(0.0))
        );
        assert!(build_architecture(spec, FlowParams::new(0.5, 0.4).with_supply(f64::NAN)).is_err());
    }

    #[test]
    fn validate_accepts_catalog() {
        for k in ArchKind::ALL {
            assert!(validate(&sys(k, 0.1, 0.8)).is_empty(), "{k}");
        }
    }

    #[test]
    fn validate_reports_half_column() {
        let mut s = sys(ArchKind::Sdo, 0.8, 0.1);
        s.forward_matrix[(3, 2)] = 0.05;
        let v = validate(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].message(), "column 3 sums to 0.05, expected 0.1");
    }

    #[test]
    fn validate_reports_excess_fractions() {
        let mut s = sys(ArchKind::P, 0.8, 0.1);
        s.f = 0.3;
        s.e = 1.0 - s.s - s.f;
        let msgs: Vec<String> = validate(&s).iter().map(Violation::message).collect();
        assert!(msgs.contains(&"fractions exceed unity".to_string()), "{msgs:?}");
    }

    #[test]
    fn validate_reports_shape_and_source() {
        let mut s = sys(ArchKind::Pdc, 0.8, 0.1);
        s.source_vector[0] = 0.5;
        let v = validate(&s);
        assert!(v.iter().any(|x| matches!(x, Violation::SourceTotal { .. })));
        s.waste_mask.pop();
        let v = validate(&s);
        assert!(v.iter().any(|x| matches!(x, Violation::Shape { what: "waste mask", .. })));
    }
}
