//! Verification suites: every structural result against the dense oracle,
//! and every published closed form against the engine.
//!
//! Oracle disagreements are failures. Published forms that disagree with the
//! engine are warnings carrying the measured deviation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Family;
use crate::graph::{random_regular, Graph};
use crate::joined_union::{
    alphas, quotient_eigenvalues, quotient_matrix, structural_spectrum, Component, JoinedUnionSpec,
};
use crate::numtheory::factorize;
use crate::par::{self, Execution};
use crate::power_graph::{isomorphism_check, multiplicity_floor_check, power_spectrum};
use crate::power_report::{family_report, power_oracle, PowerFamily};
use crate::spectra::{
    adjacency_matrix, adjacency_spectrum_closed, compare_spectra, compare_values,
    eigenvalues_symmetric, oracle_spectrum, ClosedFormKind, Spectrum, COMPARE_TOL,
};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const RANDOM_SPECS: usize = 200;
pub const RANDOM_JOINS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    JoinedUnion,
    Power,
    Families,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "joined-union" => Ok(Suite::JoinedUnion),
            "power" => Ok(Suite::Power),
            "families" => Ok(Suite::Families),
            "all" => Ok(Suite::All),
            other => Err(Error::OutOfRange(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::JoinedUnion => "joined-union",
            Suite::Power => "power",
            Suite::Families => "families",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub suite: String,
    pub case: String,
    pub status: Status,
    pub deviation: Option<f64>,
    pub detail: String,
}

impl CaseResult {
    fn new(
        suite: &str,
        case: impl Into<String>,
        status: Status,
        deviation: Option<f64>,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            suite: suite.to_string(),
            case: case.into(),
            status,
            deviation,
            detail: detail.into(),
        }
    }

    fn oracle(suite: &str, case: impl Into<String>, deviation: f64, tol: f64) -> Self {
        let status = if deviation <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Self::new(suite, case, status, Some(deviation), "structural vs oracle")
    }

    fn error(suite: &str, case: impl Into<String>, err: &Error) -> Self {
        Self::new(suite, case, Status::Fail, None, err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub max_n: u64,
    pub tol: f64,
    pub oracle_max: u64,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_n: 300,
            tol: COMPARE_TOL,
            oracle_max: crate::power_report::DEFAULT_ORACLE_MAX,
            seed: DEFAULT_SEED,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub max_n: u64,
    pub tol: f64,
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let mut cases = Vec::new();
    if matches!(suite, Suite::JoinedUnion | Suite::All) {
        cases.extend(joined_union_suite(cfg));
    }
    if matches!(suite, Suite::Power | Suite::All) {
        cases.extend(power_suite(cfg));
    }
    if matches!(suite, Suite::Families | Suite::All) {
        cases.extend(families_suite(cfg));
    }
    VerifyReport {
        suite,
        max_n: cfg.max_n,
        tol: cfg.tol,
        cases,
    }
}

/// A random regular component of order at most `max_order`: complete,
/// empty, cycle, or random regular.
pub fn random_component<R: Rng + ?Sized>(rng: &mut R, max_order: usize) -> Component {
    let max_order = max_order.max(3);
    loop {
        let made = match rng.gen_range(0..4) {
            0 => Component::complete(rng.gen_range(1..=max_order)),
            1 => Component::empty(rng.gen_range(1..=max_order)),
            2 => Component::cycle(rng.gen_range(3..=max_order)),
            _ => {
                let m = rng.gen_range(2..=max_order);
                let r = rng.gen_range(1..m);
                match random_regular(m, r, rng) {
                    Some(g) => Component::regular_graph(g),
                    None => continue,
                }
            }
        };
        if let Ok(c) = made {
            return c;
        }
    }
}

/// A random joined union with outer order at most 8 and components of order
/// at most 6, resampled until no vertex is isolated.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R) -> JoinedUnionSpec {
    loop {
        let k = rng.gen_range(1..=8);
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                if rng.gen_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        let outer = Graph::from_edge_list(k, &edges).expect("simple outer graph");
        let components = (0..k).map(|_| random_component(rng, 6)).collect();
        let spec = JoinedUnionSpec::new(outer, components).expect("valid components");
        if spec.block_degrees().iter().all(|&d| d > 0) {
            return spec;
        }
    }
}

/// A random join `G_1 ▽ G_2` of components of order at most 6.
pub fn random_join<R: Rng + ?Sized>(rng: &mut R) -> JoinedUnionSpec {
    JoinedUnionSpec::join(random_component(rng, 6), random_component(rng, 6)).expect("valid join")
}

pub fn random_specs(seed: u64, count: usize) -> Vec<JoinedUnionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng)).collect()
}

pub fn random_joins(seed: u64, count: usize) -> Vec<JoinedUnionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a6f_696e);
    (0..count).map(|_| random_join(&mut rng)).collect()
}

pub fn describe(spec: &JoinedUnionSpec) -> String {
    let parts: Vec<String> = spec
        .components()
        .iter()
        .map(|c| format!("{}/{}", c.order(), c.regularity()))
        .collect();
    format!(
        "outer {}v{}e [{}]",
        spec.outer().order(),
        spec.outer().size(),
        parts.join(" ")
    )
}

/// Oracle equivalence, trace identity and eigenvalue range for one spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecCheck {
    pub order: usize,
    pub oracle_deviation: f64,
    pub trace_gap: f64,
    pub min: f64,
    pub max: f64,
}

impl SpecCheck {
    pub fn trace_ok(&self) -> bool {
        self.trace_gap <= 1e-9 * self.order as f64
    }

    pub fn range_ok(&self) -> bool {
        self.min >= -1e-9 && self.max <= 2.0 + 1e-9
    }
}

pub fn check_spec(spec: &JoinedUnionSpec) -> Result<SpecCheck> {
    let structural = structural_spectrum(spec)?;
    let oracle = oracle_spectrum(&spec.materialize()?)?;
    let order = spec.total_order();
    Ok(SpecCheck {
        order,
        oracle_deviation: compare_spectra(&structural, &oracle, f64::INFINITY)?.max_deviation,
        trace_gap: (structural.sum() - order as f64).abs(),
        min: structural.min().unwrap_or(0.0),
        max: structural.max().unwrap_or(0.0),
    })
}

/// How far the spectrum's extremes sit from the 2x2 quotient eigenvalues of
/// a join.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremesCheck {
    pub min: f64,
    pub max: f64,
    pub quotient: (f64, f64),
    pub min_gap: f64,
    pub max_gap: f64,
}

impl ExtremesCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_gap <= tol && self.max_gap <= tol
    }
}

pub fn join_extremes(spec: &JoinedUnionSpec) -> Result<ExtremesCheck> {
    if spec.outer().order() != 2 {
        return Err(Error::BadShape);
    }
    let full = oracle_spectrum(&spec.materialize()?)?;
    let q = quotient_eigenvalues(&quotient_matrix(spec)?)?;
    let (min, max) = (full.min().unwrap_or(0.0), full.max().unwrap_or(0.0));
    let gap = |x: f64| {
        q.iter()
            .map(|v| (v - x).abs())
            .fold(f64::INFINITY, f64::min)
    };
    Ok(ExtremesCheck {
        min,
        max,
        quotient: (q[0], q[1]),
        min_gap: gap(min),
        max_gap: gap(max),
    })
}

/// Jacobi against closed-form adjacency spectra of `C_m` and `K_m`.
pub fn calibration(m_max: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for m in 1..=m_max {
        let mut kinds = vec![ClosedFormKind::Complete(m)];
        if m >= 3 {
            kinds.push(ClosedFormKind::Cycle(m));
        }
        for kind in kinds {
            let jacobi = eigenvalues_symmetric(&adjacency_matrix(&kind.graph()?)?)?;
            let closed = adjacency_spectrum_closed(kind)?.values();
            worst = worst.max(compare_values(&jacobi, &closed, f64::INFINITY)?.max_deviation);
        }
    }
    Ok(worst)
}

fn joined_union_suite(cfg: &VerifyConfig) -> Vec<CaseResult> {
    const S: &str = "joined-union";
    let mut out = Vec::new();

    match calibration(64) {
        Ok(d) => out.push(CaseResult::new(
            S,
            "jacobi calibration C_m, K_m, m<=64",
            if d < 1e-10 {
                Status::Pass
            } else {
                Status::Fail
            },
            Some(d),
            "jacobi vs closed-form adjacency spectra",
        )),
        Err(e) => out.push(CaseResult::error(
            S,
            "jacobi calibration C_m, K_m, m<=64",
            &e,
        )),
    }

    let specs = random_specs(cfg.seed, RANDOM_SPECS);
    let checks = par::map(cfg.exec, &specs, check_spec);
    for (i, (spec, check)) in specs.iter().zip(checks).enumerate() {
        let name = format!("random spec {i:03} {}", describe(spec));
        match check {
            Ok(c) => {
                let ok = c.oracle_deviation <= cfg.tol && c.trace_ok() && c.range_ok();
                out.push(CaseResult::new(
                    S,
                    name,
                    if ok { Status::Pass } else { Status::Fail },
                    Some(c.oracle_deviation),
                    format!(
                        "N={} trace gap {:.3e}, range [{:.12}, {:.12}]",
                        c.order, c.trace_gap, c.min, c.max
                    ),
                ));
            }
            Err(e) => out.push(CaseResult::error(S, name, &e)),
        }
    }

    let joins = random_joins(cfg.seed, RANDOM_JOINS);
    let extremes = par::map(cfg.exec, &joins, join_extremes);
    for (i, (spec, check)) in joins.iter().zip(extremes).enumerate() {
        let name = format!("join extremes {i:02} {}", describe(spec));
        match check {
            Ok(c) => {
                let dev = c.min_gap.max(c.max_gap);
                let (status, detail) = if c.holds(cfg.tol) {
                    (
                        Status::Pass,
                        "min and max are quotient eigenvalues".to_string(),
                    )
                } else {
                    (
                        Status::Warn,
                        format!(
                            "published claim fails: max {:.12} vs quotient {{{:.12}, {:.12}}}",
                            c.max, c.quotient.0, c.quotient.1
                        ),
                    )
                };
                out.push(CaseResult::new(S, name, status, Some(dev), detail));
            }
            Err(e) => out.push(CaseResult::error(S, name, &e)),
        }
    }

    out.push(alpha_summand_case());
    out
}

/// The alpha definition sums `n_i` (the block's own order) over neighbours;
/// the degree count needs `n_j`. Measured on `K_{1,3}[K_1, K_2, K_3, K_4]`.
fn alpha_summand_case() -> CaseResult {
    let case = "alpha summand n_i vs n_j";
    let build = || -> Result<(Vec<usize>, Vec<usize>)> {
        let spec = JoinedUnionSpec::new(
            crate::graph::make_star(4)?,
            vec![
                Component::complete(1)?,
                Component::complete(2)?,
                Component::complete(3)?,
                Component::complete(4)?,
            ],
        )?;
        let printed = (0..4)
            .map(|i| spec.outer().degree(i) * spec.components()[i].order())
            .collect();
        Ok((printed, alphas(&spec)))
    };
    match build() {
        Ok((printed, engine)) => {
            let dev = printed
                .iter()
                .zip(&engine)
                .map(|(a, b)| a.abs_diff(*b) as f64)
                .fold(0.0, f64::max);
            CaseResult::new(
                "joined-union",
                case,
                if dev == 0.0 {
                    Status::Pass
                } else {
                    Status::Warn
                },
                Some(dev),
                format!("literal summand {printed:?}, degree-consistent {engine:?}"),
            )
        }
        Err(e) => CaseResult::error("joined-union", case, &e),
    }
}

/// Power-graph suite for `3 <= n <= max_n`.
fn power_suite(cfg: &VerifyConfig) -> Vec<CaseResult> {
    const S: &str = "power";
    let ns: Vec<u64> = (3..=cfg.max_n).collect();
    let rows = par::map(cfg.exec, &ns, |&n| power_case(n, cfg));
    let mut out: Vec<CaseResult> = rows.into_iter().flatten().collect();

    for family in [
        PowerFamily::PrimePower,
        PowerFamily::Semiprime,
        PowerFamily::TriplePrime,
        PowerFamily::EvenExponents,
    ] {
        // The per-n loop above already ran the oracle.
        let report = match family_report(family, cfg.max_n, 0, cfg.exec) {
            Ok(r) => r,
            Err(e) => {
                out.push(CaseResult::error(S, format!("family {family}"), &e));
                continue;
            }
        };
        if report.rows.is_empty() {
            continue;
        }
        if matches!(family, PowerFamily::PrimePower | PowerFamily::Semiprime) {
            let dev = report.max_printed_deviation();
            out.push(CaseResult::new(
                S,
                format!(
                    "family {family} closed form, {} values of n",
                    report.rows.len()
                ),
                if dev <= cfg.tol {
                    Status::Pass
                } else {
                    Status::Warn
                },
                Some(dev),
                "published spectrum vs structural",
            ));
        }
        let checked: usize = report.rows.iter().map(|r| r.printed_checked).sum();
        let mut groups: BTreeMap<String, (usize, f64, String)> = BTreeMap::new();
        for row in &report.rows {
            let mut kinds_here = BTreeMap::new();
            for m in &row.mismatches {
                let dev = (m.printed - m.recomputed).abs();
                let e = kinds_here
                    .entry(m.kind().to_string())
                    .or_insert((0.0f64, String::new()));
                if dev > e.0 {
                    *e = (
                        dev,
                        format!(
                            "n={} {}: printed {:.12}, recomputed {:.12}",
                            row.n, m.quantity, m.printed, m.recomputed
                        ),
                    );
                }
            }
            for (kind, (dev, example)) in kinds_here {
                let g = groups.entry(kind).or_insert((0, 0.0, String::new()));
                g.0 += 1;
                if dev > g.1 {
                    g.1 = dev;
                    g.2 = example;
                }
            }
        }
        if groups.is_empty() && checked > 0 {
            out.push(CaseResult::new(
                S,
                format!("family {family} published quantities"),
                Status::Pass,
                Some(0.0),
                format!("{checked} quantities recomputed"),
            ));
        }
        for (kind, (count, dev, example)) in groups {
            out.push(CaseResult::new(
                S,
                format!("family {family} published {kind}"),
                Status::Warn,
                Some(dev),
                format!(
                    "differs for {count}/{} values of n; worst {example}",
                    report.rows.len()
                ),
            ));
        }
    }
    out
}

fn power_case(n: u64, cfg: &VerifyConfig) -> Vec<CaseResult> {
    const S: &str = "power";
    let mut out = Vec::new();
    if n <= cfg.oracle_max {
        let name = format!("n={n} oracle");
        match power_spectrum(n).and_then(|s| Ok((s, power_oracle(n)?))) {
            Ok((s, o)) => match compare_spectra(&s, &o, cfg.tol) {
                Ok(c) => out.push(CaseResult::oracle(S, name, c.max_deviation, cfg.tol)),
                Err(e) => out.push(CaseResult::error(S, name, &e)),
            },
            Err(e) => out.push(CaseResult::error(S, name, &e)),
        }
        let iso = isomorphism_check(n);
        out.push(CaseResult::new(
            S,
            format!("n={n} isomorphism"),
            if iso { Status::Pass } else { Status::Fail },
            None,
            "explicit block map is an isomorphism",
        ));
    }
    match multiplicity_floor_check(n) {
        Ok(f) => {
            let expect_equality =
                factorize(n).is_ok_and(|x| x.is_prime() || x.is_semiprime_distinct());
            // Equality is claimed for primes and pq only as a sufficient
            // condition; other n may meet the floor exactly too.
            let status = if !f.floor_holds {
                Status::Fail
            } else if expect_equality && !f.equality {
                Status::Warn
            } else {
                Status::Pass
            };
            out.push(CaseResult::new(
                S,
                format!("n={n} multiplicity floor"),
                status,
                Some((f.multiplicity as f64) - (f.totient as f64)),
                format!("mult(n/(n-1))={} phi(n)={}", f.multiplicity, f.totient),
            ));
        }
        Err(e) => out.push(CaseResult::error(
            S,
            format!("n={n} multiplicity floor"),
            &e,
        )),
    }
    out
}

/// Parameter grid for the families suite.
pub fn family_grid() -> Vec<Family> {
    let mut g = Vec::new();
    for a in 1..=6 {
        for b in a..=6 {
            g.push(Family::CompleteBipartite { a, b });
        }
    }
    for p in 2..=5 {
        for t in 1..=4 {
            g.push(Family::EqualMultipartite { p, t });
        }
    }
    for parts in [
        vec![1, 2],
        vec![1, 2, 3],
        vec![2, 2, 5],
        vec![1, 1, 1, 4],
        vec![3, 4, 5, 6],
    ] {
        g.push(Family::Multipartite { parts });
    }
    for n in 2..=8 {
        for omega in 1..n {
            g.push(Family::CompleteSplit { omega, n });
        }
    }
    for a in 3..=7 {
        for b in 1..=5 {
            g.push(Family::Cone { a, b });
        }
    }
    for n in 4..=25 {
        g.push(Family::Wheel { n });
    }
    for n in 1..=20 {
        g.push(Family::Friendship { n });
    }
    for n in 2..=8 {
        for p in 1..n {
            g.push(Family::Firefly { p, n });
        }
    }
    for a in 1..=4 {
        for b in 3..=8 {
            g.push(Family::MultistepWheel { a, b });
        }
    }
    g
}

struct FamilyOutcome {
    oracle: Result<f64>,
    printed: Option<crate::families::PrintedCheck>,
}

fn family_outcome(f: &Family, tol: f64) -> FamilyOutcome {
    let engine = f.spectrum();
    let oracle = engine.as_ref().map_err(Clone::clone).and_then(|s| {
        let o = oracle_spectrum(&f.spec()?.materialize()?)?;
        Ok(compare_spectra(s, &o, tol)?.max_deviation)
    });
    let printed = match (&engine, f.printed_form()) {
        (Ok(s), Ok(Some(p))) => Some(p.check(s, tol)),
        _ => None,
    };
    FamilyOutcome { oracle, printed }
}

fn families_suite(cfg: &VerifyConfig) -> Vec<CaseResult> {
    const S: &str = "families";
    let grid = family_grid();
    let outcomes = par::map(cfg.exec, &grid, |f| family_outcome(f, cfg.tol));
    let mut out = Vec::new();
    // name -> (instances, disagreeing, worst deviation, worst example)
    let mut printed: BTreeMap<&str, (usize, usize, f64, String)> = BTreeMap::new();
    for (f, o) in grid.iter().zip(&outcomes) {
        match &o.oracle {
            Ok(d) => out.push(CaseResult::oracle(S, format!("{f} oracle"), *d, cfg.tol)),
            Err(e) => out.push(CaseResult::error(S, format!("{f} oracle"), e)),
        }
        if let Some(c) = &o.printed {
            let entry = printed
                .entry(f.name())
                .or_insert((0, 0, 0.0, String::new()));
            entry.0 += 1;
            if !c.agrees {
                entry.1 += 1;
                let dev = c.deviation();
                if dev >= entry.2 {
                    entry.2 = dev;
                    entry.3 = format!(
                        "{f}: {} printed values vs {}, printed-to-computed {:.6e}, computed-to-printed {:.6e}{}",
                        c.printed_total,
                        c.reference_total,
                        c.value_deviation,
                        c.coverage_deviation,
                        c.multiset_deviation
                            .map_or(String::new(), |d| format!(", sorted-list deviation {d:.6e}"))
                    );
                }
            }
        }
    }
    for (name, (total, bad, dev, example)) in printed {
        let formula = grid
            .iter()
            .find(|f| f.name() == name)
            .and_then(|f| f.printed_form().ok().flatten())
            .map(|p| p.formula)
            .unwrap_or_default();
        if bad == 0 {
            out.push(CaseResult::new(
                S,
                format!("{name} published form"),
                Status::Pass,
                Some(0.0),
                format!("{formula} agrees on {total} instances"),
            ));
        } else {
            out.push(CaseResult::new(
                S,
                format!("{name} published form"),
                Status::Warn,
                Some(dev),
                format!("{formula} disagrees on {bad}/{total} instances; worst {example}"),
            ));
        }
    }
    out
}

/// A join's 2x2 quotient built from the component data alone.
pub fn join_quotient(n1: usize, r1: usize, n2: usize, r2: usize) -> Result<Spectrum> {
    let spec = JoinedUnionSpec::join(
        Component::listed(r1, vec![r1 as f64; n1]),
        Component::listed(r2, vec![r2 as f64; n2]),
    )?;
    let q = quotient_eigenvalues(&quotient_matrix(&spec)?)?;
    Ok(Spectrum::from_values(q, crate::spectra::Source::Quotient))
}
