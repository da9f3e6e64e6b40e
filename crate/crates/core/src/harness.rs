//! Verification campaigns: run one property over seeded or exhaustively
//! enumerated digraphs and assemble a deterministic report.
//!
//! A report is split into a body, which depends only on the campaign
//! configuration and is byte-stable across runs, and a footer holding the
//! wall time and the SHA-256 of the serialized body.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cycles::{
    check_circuit_hypothesis_with, check_cycle_hypothesis, every_cycle_has_symmetric_arc, CircuitCheck, CycleCondition,
    DEFAULT_BUDGET,
};
use crate::digraph::{Digraph, Distance, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::generators::{
    enumerate_labeled_digraphs, random_digraph, random_strongly_connected, trial_seed, EXHAUSTIVE_BOUND,
};
use crate::kernels::{
    find_kl_kernel, is_3_kernel_perfect, is_kernel_perfect, is_kl_kernel, is_quasi_3_kernel_perfect, k_closure,
    KernelQuery, DEFAULT_SEARCH_BOUND, PERFECTION_BOUND,
};
use crate::substitution::{
    base_kernel, build_substitution_sequence, check_additive_inverse_property, check_pre_kernel_properties,
    check_unique_short_chord, find_all_roads, find_road, run_substitution_method, validate_road, Road,
    SubstitutionTrace,
};
use crate::textfmt::format_digraph;

pub const DEFAULT_MAX_FAILURES: usize = 10;

/// Largest `n` for the closure-lemma campaign, which visits all `2^n` subsets.
pub const CLOSURE_LEMMA_BOUND: usize = 16;

/// Largest `n` for the closure distance campaign.
pub const DISTANCE_BOUND: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyId {
    /// `S` is a 3-kernel of `D` iff it is a kernel of `C^2(D)`.
    ClosureLemma,
    /// `d_{C^k}(u,v) = ceil(d(u,v) / k)` for `k` in `{2, 3}`.
    ClosureDistance,
    /// Every cycle has a symmetric arc implies kernel-perfect.
    Duchet,
    /// Two consecutive short chords on every cycle of length not divisible by
    /// three (one short chord otherwise) gives `d(v,u) <= 2` for every arc.
    ReversePath,
    /// The crossing chord condition gives a 3-kernel.
    #[serde(rename = "theorem2")]
    Theorem2,
    /// The pre-3-kernel is 2-absorbent and its short internal paths are ordered.
    PreKernelProps,
    /// Every member of `N_s` starts a road of length `s`.
    Roads,
    /// A road has at most one interior skip arc, with the labels it forces.
    UniqueChord,
    /// `d(x0, t_j) = -j (mod 3)` on roads, under the circuit condition.
    AdditiveInverse,
    /// The circuit condition plus quasi-3-kernel-perfect gives 3-kernel-perfect.
    #[serde(rename = "theorem4")]
    Theorem4,
}

impl PropertyId {
    pub const ALL: [PropertyId; 10] = [
        PropertyId::ClosureLemma,
        PropertyId::ClosureDistance,
        PropertyId::Duchet,
        PropertyId::ReversePath,
        PropertyId::Theorem2,
        PropertyId::PreKernelProps,
        PropertyId::Roads,
        PropertyId::UniqueChord,
        PropertyId::AdditiveInverse,
        PropertyId::Theorem4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::ClosureLemma => "closure-lemma",
            PropertyId::ClosureDistance => "closure-distance",
            PropertyId::Duchet => "duchet",
            PropertyId::ReversePath => "reverse-path",
            PropertyId::Theorem2 => "theorem2",
            PropertyId::PreKernelProps => "pre-kernel-props",
            PropertyId::Roads => "roads",
            PropertyId::UniqueChord => "unique-chord",
            PropertyId::AdditiveInverse => "additive-inverse",
            PropertyId::Theorem4 => "theorem4",
        }
    }

    /// Whether instances come from the strongly connected generator (or are
    /// filtered to strongly connected ones in exhaustive mode).
    pub fn needs_strong_connectivity(self) -> bool {
        !matches!(self, PropertyId::ClosureLemma | PropertyId::ClosureDistance | PropertyId::Duchet)
    }

    pub fn default_arc_prob(self) -> f64 {
        match self {
            PropertyId::ClosureLemma => 0.3,
            PropertyId::ClosureDistance => 0.2,
            PropertyId::Duchet | PropertyId::ReversePath | PropertyId::Theorem2 => 0.6,
            PropertyId::PreKernelProps | PropertyId::Roads | PropertyId::UniqueChord => 0.2,
            PropertyId::AdditiveInverse | PropertyId::Theorem4 => 0.1,
        }
    }

    fn size_bound(self) -> usize {
        match self {
            PropertyId::ClosureLemma => CLOSURE_LEMMA_BOUND,
            PropertyId::ClosureDistance => DISTANCE_BOUND,
            PropertyId::Duchet | PropertyId::Theorem4 => PERFECTION_BOUND,
            _ => DEFAULT_SEARCH_BOUND,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub property: PropertyId,
    /// Vertex count; in exhaustive mode, every size `1..=n` is enumerated.
    pub n: usize,
    /// Ignored in exhaustive mode.
    pub trials: u64,
    pub seed: u64,
    pub exhaustive: bool,
    /// Arc probability of the random generators (extra arcs on top of the
    /// Hamiltonian cycle for strongly connected instances).
    pub arc_prob: f64,
    pub max_failures: usize,
    /// Search-step cap for circuit enumeration.
    pub budget: usize,
}

impl CampaignConfig {
    pub fn new(property: PropertyId, n: usize) -> Self {
        CampaignConfig {
            property,
            n,
            trials: 100,
            seed: 0,
            exhaustive: false,
            arc_prob: property.default_arc_prob(),
            max_failures: DEFAULT_MAX_FAILURES,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn trials(self, trials: u64) -> Self {
        CampaignConfig { trials, ..self }
    }

    pub fn seed(self, seed: u64) -> Self {
        CampaignConfig { seed, ..self }
    }

    pub fn exhaustive(self) -> Self {
        CampaignConfig { exhaustive: true, ..self }
    }

    pub fn arc_prob(self, arc_prob: f64) -> Self {
        CampaignConfig { arc_prob, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.arc_prob) {
            return Err(Error::InvalidParameter(format!("arc probability {} outside [0, 1]", self.arc_prob)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("campaigns need n >= 1".into()));
        }
        let bound = if self.exhaustive { EXHAUSTIVE_BOUND } else { self.property.size_bound() };
        if self.n > bound {
            return Err(Error::SizeBound { vertex_count: self.n, bound });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No instance satisfied the hypothesis, so nothing was checked.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
        })
    }
}

/// How many generated instances fell into one hypothesis class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupancyRow {
    pub class: String,
    pub tried: u64,
    pub accepted: u64,
    /// Instances whose membership test hit the search budget.
    pub undecided: u64,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: u64,
    /// Which part of the property failed.
    pub check: String,
    /// Canonical text form of the instance.
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x0: Option<Vertex>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub property_id: PropertyId,
    pub parameters: CampaignConfig,
    pub instances_generated: u64,
    /// Instances on which the property itself was evaluated.
    pub instances_checked: u64,
    pub occupancy: Vec<OccupancyRow>,
    /// Instances or start vertices set aside, by reason.
    pub skipped: BTreeMap<String, u64>,
    /// Event counts gathered while checking.
    pub observations: BTreeMap<String, u64>,
    /// Trial indices of the checked instances.
    pub checked_trials: Vec<u64>,
    pub failure_count: u64,
    /// Failure totals per check.
    pub failure_counts: BTreeMap<String, u64>,
    /// The first `max_failures` failures in trial order.
    pub failures: Vec<FailureRecord>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFooter {
    pub wall_time_ms: u64,
    pub body_sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub body: ReportBody,
    pub footer: ReportFooter,
}

impl ReportBody {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report bodies serialize")
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(self.to_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.body.failure_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// A short human-readable summary.
    pub fn summary(&self) -> String {
        let b = &self.body;
        let mut out = format!(
            "property: {}\nverdict: {}\ninstances generated: {}\ninstances checked: {}\nfailures: {}\n",
            b.property_id, b.verdict, b.instances_generated, b.instances_checked, b.failure_count
        );
        for row in &b.occupancy {
            out += &format!(
                "occupancy {}: {}/{} accepted, {} undecided{}\n",
                row.class,
                row.accepted,
                row.tried,
                row.undecided,
                if row.vacuous { " (vacuous)" } else { "" }
            );
        }
        for (reason, count) in &b.skipped {
            out += &format!("skipped {reason}: {count}\n");
        }
        for (event, count) in &b.observations {
            out += &format!("observed {event}: {count}\n");
        }
        for f in &b.failures {
            let x0 = f.x0.map(|x| format!(" x0={x}")).unwrap_or_default();
            out += &format!("failure trial {}{x0} [{}]: {}\n{}", f.trial, f.check, f.detail, f.instance);
        }
        out
    }
}

/// What one instance contributed to the report.
#[derive(Debug, Default)]
struct Tally {
    checked: bool,
    /// `(accepted, undecided)` per occupancy row.
    rows: Vec<(bool, bool)>,
    skipped: Vec<String>,
    observed: Vec<String>,
    failures: Vec<(&'static str, Option<Vertex>, String)>,
}

impl Tally {
    fn fail(&mut self, check: &'static str, x0: Option<Vertex>, detail: String) {
        self.failures.push((check, x0, detail));
    }
}

/// Runs a campaign and builds its report.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let started = Instant::now();
    let exhaustive: Vec<Digraph> = if cfg.exhaustive {
        let mut all = Vec::new();
        for size in 1..=cfg.n {
            all.extend(enumerate_labeled_digraphs(size)?);
        }
        all
    } else {
        Vec::new()
    };
    let count = if cfg.exhaustive { exhaustive.len() as u64 } else { cfg.trials };

    let tallies: Vec<(u64, Digraph, Tally)> = (0..count)
        .into_par_iter()
        .map(|t| {
            let d = if cfg.exhaustive { exhaustive[t as usize].clone() } else { generate(cfg, t)? };
            let tally = evaluate(cfg, &d)?;
            Ok((t, d, tally))
        })
        .collect::<Result<_>>()?;

    let labels = row_labels(cfg.property);
    let mut occupancy: Vec<OccupancyRow> = labels
        .iter()
        .map(|l| OccupancyRow { class: l.clone(), tried: 0, accepted: 0, undecided: 0, vacuous: false })
        .collect();
    let mut skipped = BTreeMap::new();
    let mut observations = BTreeMap::new();
    let mut checked_trials = Vec::new();
    let mut failures = Vec::new();
    let mut failure_count = 0u64;
    let mut failure_counts = BTreeMap::new();
    for (t, d, tally) in &tallies {
        for reason in &tally.skipped {
            *skipped.entry(reason.clone()).or_insert(0) += 1;
        }
        for event in &tally.observed {
            *observations.entry(event.clone()).or_insert(0) += 1;
        }
        if !tally.rows.is_empty() {
            for (row, &(accepted, undecided)) in occupancy.iter_mut().zip(&tally.rows) {
                row.tried += 1;
                row.accepted += accepted as u64;
                row.undecided += undecided as u64;
            }
        }
        if tally.checked {
            checked_trials.push(*t);
        }
        for (check, x0, detail) in &tally.failures {
            failure_count += 1;
            *failure_counts.entry(check.to_string()).or_insert(0) += 1;
            if failures.len() < cfg.max_failures {
                failures.push(FailureRecord {
                    trial: *t,
                    check: check.to_string(),
                    instance: format_digraph(d),
                    x0: *x0,
                    detail: detail.clone(),
                });
            }
        }
    }
    for row in &mut occupancy {
        row.vacuous = row.accepted == 0;
    }
    let instances_checked = checked_trials.len() as u64;
    let verdict = if failure_count > 0 {
        Verdict::Fail
    } else if instances_checked == 0 {
        Verdict::Vacuous
    } else {
        Verdict::Pass
    };
    let body = ReportBody {
        property_id: cfg.property,
        parameters: *cfg,
        instances_generated: count,
        instances_checked,
        occupancy,
        skipped,
        observations,
        checked_trials,
        failure_count,
        failure_counts,
        failures,
        verdict,
    };
    let footer = ReportFooter { wall_time_ms: started.elapsed().as_millis() as u64, body_sha256: body.sha256() };
    Ok(VerificationReport { body, footer })
}

fn generate(cfg: &CampaignConfig, t: u64) -> Result<Digraph> {
    let seed = trial_seed(cfg.seed, t);
    if cfg.property.needs_strong_connectivity() || cfg.property == PropertyId::Duchet {
        random_strongly_connected(cfg.n, cfg.arc_prob, seed)
    } else {
        random_digraph(cfg.n, cfg.arc_prob, seed)
    }
}

fn row_labels(property: PropertyId) -> Vec<String> {
    let conventions = |name: &str| (2..=3).map(|m| format!("{name}, min-cycle-len={m}")).collect();
    match property {
        PropertyId::Duchet => vec!["every cycle has a symmetric arc".into()],
        PropertyId::ReversePath => conventions("two consecutive short chords"),
        PropertyId::Theorem2 => conventions("two consecutive and a crossing short chord"),
        PropertyId::AdditiveInverse => vec!["circuit chord condition".into()],
        PropertyId::Theorem4 => vec!["circuit chord condition and quasi-3-kernel-perfect".into()],
        _ => Vec::new(),
    }
}

fn evaluate(cfg: &CampaignConfig, d: &Digraph) -> Result<Tally> {
    let mut tally = Tally::default();
    if (cfg.property.needs_strong_connectivity() || cfg.property == PropertyId::Duchet)
        && cfg.exhaustive
        && !d.is_strongly_connected()
    {
        tally.skipped.push("not strongly connected".into());
        return Ok(tally);
    }
    match cfg.property {
        PropertyId::ClosureLemma => closure_lemma(d, &mut tally)?,
        PropertyId::ClosureDistance => closure_distance(d, &mut tally)?,
        PropertyId::Duchet => duchet(d, &mut tally)?,
        PropertyId::ReversePath => reverse_path(d, &mut tally),
        PropertyId::Theorem2 => crossing_chords_kernel(d, &mut tally)?,
        PropertyId::PreKernelProps | PropertyId::Roads | PropertyId::UniqueChord => {
            for_each_trace(d, &mut tally, |trace, tally| match cfg.property {
                PropertyId::PreKernelProps => pre_kernel_props(trace, tally),
                PropertyId::Roads => roads(trace, tally),
                _ => unique_chord(trace, tally),
            })?
        }
        PropertyId::AdditiveInverse => {
            match circuit_condition(d, cfg.budget)? {
                Some(true) => tally.rows.push((true, false)),
                Some(false) => {
                    tally.rows.push((false, false));
                    return Ok(tally);
                }
                None => {
                    tally.rows.push((false, true));
                    return Ok(tally);
                }
            }
            for_each_trace(d, &mut tally, additive_inverse)?;
        }
        PropertyId::Theorem4 => theorem4(d, cfg.budget, &mut tally)?,
    }
    Ok(tally)
}

fn closure_lemma(d: &Digraph, tally: &mut Tally) -> Result<()> {
    tally.checked = true;
    let c2 = k_closure(d, 2)?;
    for mask in 0..1u64 << d.vertex_count() {
        let s = VertexSet::from_mask(mask);
        let three = is_kl_kernel(d, &s, KernelQuery::THREE_KERNEL);
        let classic = is_kl_kernel(&c2, &s, KernelQuery::KERNEL);
        if three != classic {
            tally.fail("equivalence", None, format!("S = {s}: 3-kernel of D is {three}, kernel of C2(D) is {classic}"));
        }
    }
    Ok(())
}

fn closure_distance(d: &Digraph, tally: &mut Tally) -> Result<()> {
    tally.checked = true;
    let base = d.distances();
    for k in [2, 3] {
        let ck = k_closure(d, k)?;
        let dk = ck.distances();
        for u in d.vertices() {
            for v in d.vertices() {
                let expected = match base.get(u, v) {
                    Distance::Finite(x) => Distance::Finite(x.div_ceil(k)),
                    Distance::Unreachable => Distance::Unreachable,
                };
                if dk.get(u, v) != expected {
                    tally.fail(
                        "distance",
                        None,
                        format!(
                            "k = {k}, ({u}, {v}): d = {}, closure distance {} != {expected}",
                            base.get(u, v),
                            dk.get(u, v)
                        ),
                    );
                }
            }
        }
    }
    Ok(())
}

fn duchet(d: &Digraph, tally: &mut Tally) -> Result<()> {
    let report = every_cycle_has_symmetric_arc(d);
    tally.rows.push((report.satisfied, false));
    if !report.satisfied {
        return Ok(());
    }
    tally.checked = true;
    let perfection = is_kernel_perfect(d)?;
    if let Some(s) = perfection.counterexample {
        tally.fail("kernel-perfect", None, format!("induced subdigraph on {s} has no kernel"));
    }
    Ok(())
}

fn cycle_rows(d: &Digraph, condition: CycleCondition, tally: &mut Tally) -> bool {
    let mut any = false;
    for min_len in 2..=3 {
        let ok = check_cycle_hypothesis(d, condition, min_len).satisfied;
        tally.rows.push((ok, false));
        any |= ok;
    }
    any
}

fn reverse_path(d: &Digraph, tally: &mut Tally) {
    if !cycle_rows(d, CycleCondition::TwoConsecutive, tally) {
        return;
    }
    tally.checked = true;
    let dm = d.distances();
    for &(u, v) in d.arcs() {
        if !dm.get(v, u).is_within(2) {
            tally.fail("reverse-path", None, format!("arc ({u}, {v}) but d({v}, {u}) = {}", dm.get(v, u)));
        }
    }
}

fn crossing_chords_kernel(d: &Digraph, tally: &mut Tally) -> Result<()> {
    if !cycle_rows(d, CycleCondition::ThreeWithCrossing, tally) {
        return Ok(());
    }
    tally.checked = true;
    if !find_kl_kernel(d, KernelQuery::THREE_KERNEL)?.found() {
        tally.fail("3-kernel", None, "no 3-kernel".into());
    }
    Ok(())
}

/// `Some(satisfied)`, or `None` when circuit enumeration ran out of budget.
fn circuit_condition(d: &Digraph, budget: usize) -> Result<Option<bool>> {
    let opts = CircuitCheck { budget, stop_at_first: true, ..CircuitCheck::new(d.arc_count()) };
    match check_circuit_hypothesis_with(d, opts) {
        Ok(r) => Ok(Some(r.satisfied)),
        Err(e) if e.is_resource_bound() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Builds the trace from every start vertex whose base kernel exists.
fn for_each_trace(
    d: &Digraph,
    tally: &mut Tally,
    mut check: impl FnMut(&SubstitutionTrace, &mut Tally) -> Result<()>,
) -> Result<()> {
    for x0 in d.vertices() {
        let Some(k) = base_kernel(d, x0)? else {
            tally.skipped.push("no base kernel".into());
            continue;
        };
        match build_substitution_sequence(d, x0, &k) {
            Ok(trace) => {
                if let Err(msg) = trace.check_invariants() {
                    tally.fail("trace-invariant", Some(x0), format!("trace invariant: {msg}"));
                }
                tally.checked = true;
                tally.observed.push("traces built".into());
                check(&trace, tally)?;
            }
            Err(Error::SubkernelMissing { index }) => {
                tally.skipped.push(format!("no 3-kernel for M_{index}"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn pre_kernel_props(trace: &SubstitutionTrace, tally: &mut Tally) -> Result<()> {
    let report = check_pre_kernel_properties(trace);
    if !report.absorbent {
        tally.fail(
            "absorbent",
            Some(trace.x0),
            format!("pre-3-kernel {} does not 2-absorb {:?}", report.pre_kernel, report.unabsorbed),
        );
    }
    for p in report.violations() {
        tally.fail(
            "internal-path",
            Some(trace.x0),
            format!("path {:?} joins N_{:?} to N_{:?} inside the pre-3-kernel", p.path, p.from_index, p.to_index),
        );
    }
    Ok(())
}

fn road_failure(trace: &SubstitutionTrace, road: &Road) -> Option<String> {
    let report = validate_road(trace, &road.path);
    if report.holds() {
        return None;
    }
    let failures: Vec<String> =
        [&report.well_formed, &report.start, &report.pairing, &report.anchors, &report.skip_arcs]
            .iter()
            .flat_map(|c| c.failures.clone())
            .collect();
    Some(format!("road {:?} fails: {}", road.path, failures.join("; ")))
}

fn roads(trace: &SubstitutionTrace, tally: &mut Tally) -> Result<()> {
    for (s, v) in trace.indexed_members() {
        match find_road(trace, v, s) {
            Ok(road) => {
                if let Some(msg) = road_failure(trace, &road) {
                    tally.fail("road-invalid", Some(trace.x0), msg);
                }
            }
            Err(Error::NoRoadFound { .. }) => {
                tally.fail("road-missing", Some(trace.x0), format!("no road of length {s} from {v} in N_{s}"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn unique_chord(trace: &SubstitutionTrace, tally: &mut Tally) -> Result<()> {
    for (s, v) in trace.indexed_members() {
        for road in find_all_roads(trace, v, s)? {
            let report = check_unique_short_chord(trace, &road);
            if report.trigger.is_some() {
                tally.observed.push("roads with an interior skip arc".into());
            }
            if !report.holds() {
                tally.fail(
                    "unique-chord",
                    Some(trace.x0),
                    format!(
                        "road {:?}: skip arcs at {:?}, labels off at {:?}",
                        road.path, report.skip_positions, report.label_failures
                    ),
                );
            }
        }
    }
    Ok(())
}

fn additive_inverse(trace: &SubstitutionTrace, tally: &mut Tally) -> Result<()> {
    for (s, v) in trace.indexed_members() {
        for road in find_all_roads(trace, v, s)? {
            let report = check_additive_inverse_property(trace, &road);
            for c in report.checks.iter().filter(|c| !c.holds) {
                tally.fail(
                    "additive-inverse",
                    Some(trace.x0),
                    format!(
                        "road {:?}: d(x0, t_{}) = {:?} is not -{} mod 3",
                        road.path, c.position, c.distance, c.position
                    ),
                );
            }
        }
    }
    Ok(())
}

fn theorem4(d: &Digraph, budget: usize, tally: &mut Tally) -> Result<()> {
    let accepted = match circuit_condition(d, budget)? {
        None => {
            tally.rows.push((false, true));
            return Ok(());
        }
        Some(false) => false,
        Some(true) => is_quasi_3_kernel_perfect(d)?.holds,
    };
    tally.rows.push((accepted, false));
    if !accepted {
        return Ok(());
    }
    tally.checked = true;
    if let Some(s) = is_3_kernel_perfect(d)?.counterexample {
        tally.fail("3-kernel-perfect", None, format!("induced subdigraph on {s} has no 3-kernel"));
    }
    for x0 in d.vertices() {
        let outcome = match run_substitution_method(d, x0) {
            Ok(o) => o,
            Err(e @ (Error::NoBaseKernel { .. } | Error::SubkernelMissing { .. })) => {
                tally.fail("method-aborted", Some(x0), format!("method aborted: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        if !outcome.is_3_kernel {
            tally.fail(
                "pre-3-kernel",
                Some(x0),
                format!(
                    "pre-3-kernel {} is not a 3-kernel (witness {:?})",
                    outcome.pre_3_kernel, outcome.failure_witness
                ),
            );
        }
        additive_inverse(&outcome.trace, tally)?;
    }
    Ok(())
}
