//! Per-family sweeps over `P(Z_n)`: structural spectrum against the dense
//! oracle, plus the published per-family quantities recomputed from their
//! defining formulas and held against the decomposition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joined_union::{alphas, quotient_matrix, JoinedUnionSpec};
use crate::numtheory::{factorize, totient, FactoredInteger};
use crate::par::{self, Execution};
use crate::power_graph::{
    decompose, power_graph_direct, power_spectrum, realize, spectrum_pq_closed,
};
use crate::spectra::{compare_spectra, oracle_spectrum, Source, Spectrum};

/// Default largest `n` for which the dense oracle runs.
pub const DEFAULT_ORACLE_MAX: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerFamily {
    /// `n = p^z`.
    PrimePower,
    /// `n = pq`, `p < q`.
    Semiprime,
    /// `n = pqr`, `p < q < r`.
    TriplePrime,
    /// `n = p^{2 m_1} q^{2 m_2}`.
    EvenExponents,
}

impl PowerFamily {
    pub fn contains(&self, f: &FactoredInteger) -> bool {
        let fs = f.factors();
        match self {
            PowerFamily::PrimePower => fs.len() == 1,
            PowerFamily::Semiprime => fs.len() == 2 && fs.iter().all(|&(_, e)| e == 1),
            PowerFamily::TriplePrime => fs.len() == 3 && fs.iter().all(|&(_, e)| e == 1),
            PowerFamily::EvenExponents => fs.len() == 2 && fs.iter().all(|&(_, e)| e % 2 == 0),
        }
    }

    pub fn members(&self, bound: u64) -> Vec<u64> {
        (3..=bound)
            .filter(|&n| factorize(n).is_ok_and(|f| self.contains(&f)))
            .collect()
    }
}

impl fmt::Display for PowerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerFamily::PrimePower => "p^z",
            PowerFamily::Semiprime => "pq",
            PowerFamily::TriplePrime => "pqr",
            PowerFamily::EvenExponents => "p^2m1q^2m2",
        })
    }
}

impl FromStr for PowerFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p^z" | "prime_power" => Ok(PowerFamily::PrimePower),
            "pq" | "semiprime" => Ok(PowerFamily::Semiprime),
            "pqr" | "triple_prime" => Ok(PowerFamily::TriplePrime),
            "p^2m1q^2m2" | "even_exponents" => Ok(PowerFamily::EvenExponents),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// A published quantity that disagrees with its recomputed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedMismatch {
    pub quantity: String,
    pub printed: f64,
    pub recomputed: f64,
}

impl PrintedMismatch {
    /// The quantity with its per-`n` index (divisor value, matrix position)
    /// removed, so the same printed formula groups across `n`.
    pub fn kind(&self) -> &str {
        let q = self.quantity.as_str();
        for cut in [" for the order-", " for d=", " entry ("] {
            if let Some(i) = q.find(cut) {
                if cut == " for d=" && q[i + cut.len()..].starts_with(|c: char| !c.is_ascii_digit())
                {
                    return q.rfind(" (").map_or(q, |j| &q[..j]);
                }
                return &q[..i];
            }
        }
        q
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub n: u64,
    /// Structural vs dense oracle, when the oracle ran.
    pub structural_vs_oracle: Option<f64>,
    /// Structural vs the family's printed spectrum, when one is available.
    pub structural_vs_printed: Option<f64>,
    /// Number of printed quantities checked for this `n`.
    pub printed_checked: usize,
    pub mismatches: Vec<PrintedMismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: PowerFamily,
    pub bound: u64,
    pub oracle_max: u64,
    pub rows: Vec<FamilyRow>,
}

impl FamilyReport {
    pub fn max_oracle_deviation(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.structural_vs_oracle)
            .fold(0.0, f64::max)
    }

    pub fn max_printed_deviation(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.structural_vs_printed)
            .fold(0.0, f64::max)
    }
}

/// Dense oracle: normalized Laplacian spectrum of the explicit `P(Z_n)`.
pub fn power_oracle(n: u64) -> Result<Spectrum> {
    oracle_spectrum(&power_graph_direct(n)?)
}

pub fn family_report(
    family: PowerFamily,
    bound: u64,
    oracle_max: u64,
    exec: Execution,
) -> Result<FamilyReport> {
    let members = family.members(bound);
    let rows = par::map(exec, &members, |&n| family_row(family, n, oracle_max))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport {
        family,
        bound,
        oracle_max,
        rows,
    })
}

fn family_row(family: PowerFamily, n: u64, oracle_max: u64) -> Result<FamilyRow> {
    let structural = power_spectrum(n)?;
    let structural_vs_oracle = if n <= oracle_max {
        Some(compare_spectra(&structural, &power_oracle(n)?, f64::INFINITY)?.max_deviation)
    } else {
        None
    };
    let mut row = FamilyRow {
        n,
        structural_vs_oracle,
        structural_vs_printed: None,
        printed_checked: 0,
        mismatches: Vec::new(),
    };
    let f = factorize(n)?;
    match family {
        PowerFamily::PrimePower => {
            let nf = n as f64;
            let printed = Spectrum::from_multiplicities(
                &[(0.0, 1), (nf / (nf - 1.0), n as usize - 1)],
                Source::ClosedForm,
            );
            row.structural_vs_printed =
                Some(compare_spectra(&structural, &printed, f64::INFINITY)?.max_deviation);
        }
        PowerFamily::Semiprime => {
            let (p, q) = (f.factors()[0].0, f.factors()[1].0);
            let closed = spectrum_pq_closed(p, q)?;
            row.structural_vs_printed =
                Some(compare_spectra(&structural, &closed, f64::INFINITY)?.max_deviation);
            semiprime_statement_checks(p, q, &mut row);
        }
        PowerFamily::TriplePrime => {
            let ps: Vec<u64> = f.factors().iter().map(|&(p, _)| p).collect();
            pqr_checks(n, ps[0], ps[1], ps[2], &structural, &mut row)?;
            zn_statement_checks(n, &mut row)?;
        }
        PowerFamily::EvenExponents => {
            let (p, e1) = f.factors()[0];
            let (q, e2) = f.factors()[1];
            if e1 <= e2 {
                even_exponent_checks(n, p, e1, q, e2, &mut row)?;
            }
            zn_statement_checks(n, &mut row)?;
        }
    }
    Ok(row)
}

fn record(row: &mut FamilyRow, quantity: impl Into<String>, printed: f64, recomputed: f64) {
    row.printed_checked += 1;
    let scale = 1.0 + recomputed.abs();
    if (printed - recomputed).abs() > 1e-10 * scale {
        row.mismatches.push(PrintedMismatch {
            quantity: quantity.into(),
            printed,
            recomputed,
        });
    }
}

/// The block structure indexed by divisor value.
struct Blocks {
    spec: JoinedUnionSpec,
    divisors: Vec<u64>,
    alpha: Vec<usize>,
    degree: Vec<usize>,
}

impl Blocks {
    fn new(n: u64) -> Result<Self> {
        let dec = decompose(n)?;
        let spec = realize(&dec)?;
        let alpha = alphas(&spec);
        let degree = spec.block_degrees();
        Ok(Self {
            spec,
            divisors: dec.proper_divisors,
            alpha,
            degree,
        })
    }

    fn index(&self, d: u64) -> usize {
        self.divisors.binary_search(&d).expect("proper divisor") + 1
    }

    fn alpha(&self, d: u64) -> f64 {
        self.alpha[self.index(d)] as f64
    }

    fn degree(&self, d: u64) -> f64 {
        self.degree[self.index(d)] as f64
    }
}

fn phi(x: u64) -> f64 {
    totient(x).expect("positive") as f64
}

/// For `n = pq` the structural values are `1 + 1/(q φ(p))` and
/// `1 + 1/(p φ(q))`; the stated form reads `1/(q φ(p))` for both.
fn semiprime_statement_checks(p: u64, q: u64, row: &mut FamilyRow) {
    let stated = 1.0 / (q as f64 * phi(p));
    if p > 2 {
        record(
            row,
            format!("stated eigenvalue for the order-{p} block"),
            stated,
            1.0 + stated,
        );
    }
    record(
        row,
        format!("stated eigenvalue for the order-{q} block"),
        stated,
        1.0 + 1.0 / (p as f64 * phi(q)),
    );
}

/// The general statement lists `(φ(d)+α)/(d+α-1)`; the derivation gives
/// `(φ(d)+α)/(φ(d)+α-1)`.
fn zn_statement_checks(n: u64, row: &mut FamilyRow) -> Result<()> {
    let b = Blocks::new(n)?;
    for &d in &b.divisors {
        if phi(d) < 2.0 {
            continue;
        }
        let a = b.alpha(d);
        record(
            row,
            format!("general-statement eigenvalue for d={d}"),
            (phi(d) + a) / (d as f64 + a - 1.0),
            (phi(d) + a) / (phi(d) + a - 1.0),
        );
    }
    Ok(())
}

fn pqr_checks(
    n: u64,
    p: u64,
    q: u64,
    r: u64,
    structural: &Spectrum,
    row: &mut FamilyRow,
) -> Result<()> {
    let b = Blocks::new(n)?;
    let pn = phi(n);
    let (fp, fq, fr) = (phi(p), phi(q), phi(r));
    let (fpq, fpr, fqr) = (phi(p * q), phi(p * r), phi(q * r));
    let nf = n as f64;

    // Blocks in the published order p, q, r, pq, pr, qr.
    let order = [p, q, r, p * q, p * r, q * r];

    let alpha_printed = [
        pn + 1.0 + fpq + fpr,
        pn + 1.0 + fpq + fqr,
        pn + 1.0 + fpr + fqr,
        pn + 1.0 + fp + fq,
        pn + 1.0 + fp + fr,
        pn + 1.0 + fq + fr,
    ];
    let degree_printed = [
        pn + fp + fpq + fpr,
        pn + fq + fpq + fqr,
        pn + fr + fpr + fqr,
        pn + fpq + fp + fq,
        pn + fpr + fp + fr,
        pn + fqr + fq + fr,
    ];
    record(row, "pqr alpha_1", nf - pn - 1.0, b.alpha[0] as f64);
    record(row, "pqr r'_1", nf - 1.0, b.degree[0] as f64);
    record(
        row,
        "pqr z_1",
        (nf - pn - 1.0) / (nf - 1.0),
        b.alpha[0] as f64 / b.degree[0] as f64,
    );
    for (k, &d) in order.iter().enumerate() {
        let idx = k + 2;
        record(
            row,
            format!("pqr alpha_{idx}"),
            alpha_printed[k],
            b.alpha(d),
        );
        record(row, format!("pqr r'_{idx}"), degree_printed[k], b.degree(d));
        record(
            row,
            format!("pqr z_{idx}"),
            alpha_printed[k] / degree_printed[k],
            b.alpha(d) / b.degree(d),
        );
    }

    // Listed structural eigenvalues 1 + 1/r'; the pq entry reads
    // φ(n)+φ(pq)+φ(q)+φ(q).
    let listed = [
        pn + fp + fpq + fpr,
        pn + fq + fpq + fqr,
        pn + fr + fpr + fqr,
        pn + fpq + fq + fq,
        pn + fpr + fp + fr,
        pn + fqr + fq + fr,
    ];
    for (k, &d) in order.iter().enumerate() {
        if phi(d) < 2.0 {
            continue;
        }
        let engine = 1.0 + 1.0 / b.degree(d);
        if structural.count_near(engine, 1e-9) == 0 {
            return Err(Error::OutOfRange(format!("block value for d={d} missing")));
        }
        record(
            row,
            format!("pqr listed eigenvalue for d={d}"),
            1.0 + 1.0 / listed[k],
            engine,
        );
    }

    // Printed 7x7 matrix entries against the engine's quotient matrix.
    let q_engine = quotient_matrix(&b.spec)?;
    let idx = |k: usize| if k == 0 { 0 } else { b.index(order[k - 1]) };
    let rp: Vec<f64> = (0..7).map(|k| b.degree[idx(k)] as f64).collect();
    let c = |i: usize, j: usize| 1.0 / (rp[i - 1] * rp[j - 1]).sqrt();
    let sizes = [pn + 1.0, fp, fq, fr, fpq, fpr, fqr];
    let z: Vec<f64> = (0..7)
        .map(|k| {
            if k == 0 {
                (nf - pn - 1.0) / (nf - 1.0)
            } else {
                alpha_printed[k - 1] / degree_printed[k - 1]
            }
        })
        .collect();
    let mut printed = [[0.0f64; 7]; 7];
    for k in 0..7 {
        printed[k][k] = z[k];
    }
    for j in 1..7 {
        printed[0][j] = -sizes[j] * c(1, j + 1);
        printed[j][0] = sizes[0] * c(j + 1, 1);
    }
    printed[1][4] = -fpq * c(2, 5);
    printed[1][5] = -fpr * c(2, 6);
    printed[2][4] = -fpq * c(3, 5);
    printed[2][6] = -fqr * c(3, 7);
    printed[3][5] = -fpr * c(4, 6);
    printed[3][6] = -fqr * c(4, 7);
    printed[4][1] = -fp * c(2, 5);
    printed[4][2] = -fq * c(3, 5);
    printed[5][1] = -fp * c(2, 6);
    printed[5][3] = -fr * c(6, 4);
    printed[6][2] = -fq * c(7, 5);
    printed[6][3] = -fr * c(7, 4);
    for (i, printed_row) in printed.iter().enumerate() {
        for (j, &value) in printed_row.iter().enumerate() {
            if i == j {
                continue;
            }
            record(
                row,
                format!("pqr matrix entry ({},{})", i + 1, j + 1),
                value,
                q_engine.get(idx(i), idx(j)),
            );
        }
    }
    Ok(())
}

/// Published `alpha_i` and `r'_i = r_i + alpha_i` for `n = p^{n1} q^{n2}`
/// with even exponents, evaluated for the divisors they name.
fn even_exponent_checks(
    n: u64,
    p: u64,
    n1: u32,
    q: u64,
    n2: u32,
    row: &mut FamilyRow,
) -> Result<()> {
    let b = Blocks::new(n)?;
    let (m1, m2) = (n1 / 2, n2 / 2);
    let nf = n as f64;
    let pw = |base: u64, e: u32| (base as f64).powi(e as i32);
    let (pp, qq) = (|e: u32| pw(p, e), |e: u32| pw(q, e));
    let ph = |x: f64| phi(x as u64);
    let pf = p as f64;

    // (label, divisor, printed alpha, printed r')
    let mut rows: Vec<(&str, f64, Option<f64>, Option<f64>)> = vec![
        ("p", pf, Some(nf - ph(pf) - qq(n2) + 1.0), Some(nf - qq(n2))),
        (
            "p^{m1}",
            pp(m1),
            Some(pp(m1 - 1) + qq(n2) * (pp(n1) - pp(m1 - 1)) - ph(pp(m1))),
            Some(pp(m1 - 1) + qq(n2) * (pp(n1) - pp(m1 - 1)) - 1.0),
        ),
        (
            "p^{n1}",
            pp(n1),
            Some(pp(n1 - 1) + ph(pp(n1)) * (qq(n2 - 1) - 1.0)),
            Some(pp(n1 - 1) + ph(pp(n1)) * qq(n2) - 1.0),
        ),
        (
            "q",
            q as f64,
            Some(nf - ph(q as f64) - pp(n1) + 1.0),
            Some(nf - pp(n1)),
        ),
        (
            "q^{m2}",
            qq(m2),
            Some(qq(m2 - 1) + pp(n1) * (qq(n2) - qq(m2 - 1)) - ph(qq(m2))),
            Some(qq(m2 - 1) + pp(n1) * (qq(n2) - qq(m2 - 1)) - 1.0),
        ),
        (
            "q^{n2}",
            qq(n2),
            Some(qq(n2 - 1) + ph(qq(n2)) * (pp(n1) - 1.0)),
            Some(qq(n2 - 1) + ph(qq(n2)) * pp(n1) - 1.0),
        ),
        (
            "pq",
            pf * q as f64,
            Some(ph(pf) + ph(q as f64) + 1.0 - ph(pf * q as f64) + (qq(n2) - 1.0) * (pp(n1) - 1.0)),
            Some(ph(pf) + ph(q as f64) + (qq(n2) - 1.0) * (pp(n1) - 1.0)),
        ),
        (
            "pq^{m2}",
            pf * qq(m2),
            Some(qq(n2) * (pp(n1) - 1.0) + qq(m2) - qq(m2 - 1) * (pp(n1) - pf) - ph(pf * qq(m2))),
            Some(qq(n2) * (pp(n1) - 1.0) + qq(m2) - qq(m2 - 1) * (pp(n1) - pf) - 1.0),
        ),
        (
            "pq^{n2}",
            pf * qq(n2),
            Some(pf * qq(n2) - ph(pf * qq(n2)) + ph(pp(n1)) * (qq(n2) - q as f64)),
            Some(pf * qq(n2) + ph(pp(n1)) * (qq(n2) - q as f64) - 1.0),
        ),
        (
            // alpha for this divisor uses an undefined exponent; only r' is checked.
            "p^{m1}q",
            pp(m1) * q as f64,
            None,
            Some(pp(m1) + pp(n1) * (qq(n2) - 1.0) - pp(m1 - 1) * (qq(n1) - q as f64) - 1.0),
        ),
        (
            "p^{m1}q^{n2}",
            pp(m1) * qq(n2),
            Some(pp(m1) * qq(n2) - ph(pp(m1) * qq(n2)) + ph(qq(n2)) * (pp(n1) - pp(m1))),
            Some(pp(m1) * qq(n2) + ph(qq(n2)) * (pp(n1) - pp(m1)) - 1.0),
        ),
        (
            "p^{n1}q",
            pp(n1) * q as f64,
            Some(pp(n1) * q as f64 + ph(pp(n1)) * (qq(n2) - q as f64) - ph(pp(n1) * q as f64)),
            Some(pp(n1) * q as f64 + ph(pp(n1)) * (qq(n2) - q as f64) - 1.0),
        ),
        (
            "p^{n1}q^{m2}",
            pp(n1) * qq(m2),
            Some(pp(n1) * qq(m2) + ph(pp(n1)) * (qq(n2) - qq(m2)) - ph(pp(n1) * qq(m2))),
            Some(pp(n1) * qq(m2) + ph(pp(n1)) * (qq(n2) - qq(m2)) - 1.0),
        ),
        (
            "p^{n1}q^{n2-1}",
            pp(n1) * qq(n2 - 1),
            Some(pp(n1) * qq(n2 - 1) + phi(n) - ph(pp(n1) * qq(n2 - 1))),
            Some(pp(n1) * qq(n2 - 1) + phi(n) - 1.0),
        ),
    ];
    if n1 >= 2 {
        rows.push((
            "p^2",
            pf * pf,
            Some(qq(n2) * (pp(n1) - pf) + pf - ph(pf * pf)),
            None,
        ));
    }
    record(row, "alpha_1", nf - 1.0 - phi(n), b.alpha[0] as f64);
    record(row, "r'_1", nf - 1.0, b.degree[0] as f64);
    for (label, d, alpha, degree) in rows {
        let d = d as u64;
        if let Some(a) = alpha {
            record(row, format!("alpha for d={label} ({d})"), a, b.alpha(d));
        }
        if let Some(r) = degree {
            record(row, format!("r' for d={label} ({d})"), r, b.degree(d));
        }
    }
    Ok(())
}
