//! Dense symmetric matrices, the cyclic Jacobi eigensolver, closed-form
//! adjacency spectra and tagged eigenvalue multisets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default tolerance for clustering eigenvalues into multiplicities.
pub const GROUP_TOL: f64 = 1e-7;
/// Default tolerance for comparing two spectra.
pub const COMPARE_TOL: f64 = 1e-8;

const SYMMETRY_TOL: f64 = 1e-12;
const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// A dense real symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn new(order: usize, data: Vec<f64>) -> Result<Self> {
        if order == 0 || data.len() != order * order {
            return Err(Error::BadShape);
        }
        for i in 0..order {
            for j in i + 1..order {
                let gap = (data[i * order + j] - data[j * order + i]).abs();
                if gap.is_nan() || gap > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        gap,
                    });
                }
            }
        }
        Ok(Self { order, data })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                data.push(f(i, j));
            }
        }
        Self::new(order, data)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

pub fn adjacency_matrix(g: &Graph) -> Result<SymMatrix> {
    let n = g.order();
    if n == 0 {
        return Err(Error::BadShape);
    }
    let mut data = vec![0.0; n * n];
    for &(u, v) in g.edges() {
        data[u * n + v] = 1.0;
        data[v * n + u] = 1.0;
    }
    SymMatrix::new(n, data)
}

/// `D^{-1/2} (D - A) D^{-1/2}`: unit diagonal, `-1/sqrt(d_u d_v)` on edges.
pub fn normalized_laplacian(g: &Graph) -> Result<SymMatrix> {
    let n = g.order();
    if n == 0 {
        return Err(Error::BadShape);
    }
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|v| match g.degree(v) {
            0 => Err(Error::IsolatedVertex(v)),
            d => Ok(1.0 / (d as f64).sqrt()),
        })
        .collect::<Result<_>>()?;
    let mut data = vec![0.0; n * n];
    for v in 0..n {
        data[v * n + v] = 1.0;
    }
    for &(u, v) in g.edges() {
        let w = -inv_sqrt[u] * inv_sqrt[v];
        data[u * n + v] = w;
        data[v * n + u] = w;
    }
    SymMatrix::new(n, data)
}

fn off_and_diag_norms(a: &[f64], n: usize) -> (f64, f64) {
    let mut off = 0.0;
    let mut diag = 0.0;
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        diag += row[i] * row[i];
        off += row[i + 1..].iter().map(|x| x * x).sum::<f64>();
    }
    ((2.0 * off).sqrt(), diag.sqrt())
}

/// All eigenvalues of `m`, ascending, by cyclic Jacobi rotations.
///
/// Each sweep visits every pair `(p, q)` once in round-robin order: a round
/// applies `n/2` disjoint rotations, first to rows, then to columns, which
/// keeps memory access row-contiguous. Sweeps stop once the off-diagonal
/// Frobenius norm drops below `1e-12 * (diagonal norm + 1)`.
pub fn eigenvalues_symmetric(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.order;
    let mut a = m.data.clone();
    let slots = n + n % 2;
    let mut players: Vec<usize> = (0..slots).collect();
    let mut rots: Vec<Rotation> = Vec::with_capacity(slots / 2);
    let mut sweeps = 0;
    loop {
        let (off, diag) = off_and_diag_norms(&a, n);
        if off < JACOBI_REL_TOL * (diag + 1.0) {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        // Entries this small cannot keep the off-norm above the threshold.
        let skip = 0.5 * JACOBI_REL_TOL * (diag + 1.0) / n as f64;
        for _ in 1..slots {
            rots.clear();
            for i in 0..slots / 2 {
                let (x, y) = (players[i], players[slots - 1 - i]);
                if x < n && y < n {
                    let (p, q) = (x.min(y), x.max(y));
                    if a[p * n + q].abs() <= skip {
                        continue;
                    }
                    if let Some(r) = Rotation::annihilating(&a, n, p, q) {
                        rots.push(r);
                    }
                }
            }
            apply_round(&mut a, n, &rots);
            players[1..].rotate_right(1);
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Plane rotation in `(p, q)` zeroing `a[p][q]`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    p: usize,
    q: usize,
    s: f64,
    tau: f64,
    app: f64,
    aqq: f64,
}

impl Rotation {
    fn annihilating(a: &[f64], n: usize, p: usize, q: usize) -> Option<Self> {
        let apq = a[p * n + q];
        if apq == 0.0 {
            return None;
        }
        let app = a[p * n + p];
        let aqq = a[q * n + q];
        let theta = (aqq - app) / (2.0 * apq);
        let t = if theta.is_finite() {
            theta.signum() / (theta.abs() + theta.hypot(1.0))
        } else {
            0.5 / theta
        };
        let c = 1.0 / t.hypot(1.0);
        let s = t * c;
        Some(Self {
            p,
            q,
            s,
            tau: s / (1.0 + c),
            app: app - t * apq,
            aqq: aqq + t * apq,
        })
    }
}

/// `A <- J^T A J` for a set of disjoint rotations `J`.
fn apply_round(a: &mut [f64], n: usize, rots: &[Rotation]) {
    for r in rots {
        let (lo, hi) = a.split_at_mut(r.q * n);
        let row_p = &mut lo[r.p * n..(r.p + 1) * n];
        let row_q = &mut hi[..n];
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let (xp, yq) = (*x, *y);
            *x = xp - r.s * (yq + r.tau * xp);
            *y = yq + r.s * (xp - r.tau * yq);
        }
    }
    for row in a.chunks_exact_mut(n) {
        for r in rots {
            let (xp, yq) = (row[r.p], row[r.q]);
            row[r.p] = xp - r.s * (yq + r.tau * xp);
            row[r.q] = yq + r.s * (xp - r.tau * yq);
        }
    }
    for r in rots {
        a[r.p * n + r.p] = r.app;
        a[r.q * n + r.q] = r.aqq;
        a[r.p * n + r.q] = 0.0;
        a[r.q * n + r.p] = 0.0;
    }
}

/// Dense oracle: the normalized Laplacian spectrum of `g`, oracle-tagged.
pub fn oracle_spectrum(g: &Graph) -> Result<Spectrum> {
    let values = eigenvalues_symmetric(&normalized_laplacian(g)?)?;
    Ok(Spectrum::from_values(values, Source::Oracle))
}

/// Where an eigenvalue came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Structural,
    Quotient,
    ClosedForm,
    Oracle,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Structural => "structural",
            Source::Quotient => "quotient",
            Source::ClosedForm => "closed_form",
            Source::Oracle => "oracle",
        })
    }
}

/// One distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
    pub source: Source,
}

/// A multiset of eigenvalues.
///
/// Keeps the raw sorted values (used by every comparison) next to a grouped
/// view with strictly increasing distinct values (used for presentation).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    raw: Vec<(f64, Source)>,
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn from_tagged(mut values: Vec<(f64, Source)>, tol: f64) -> Self {
        values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let entries = cluster(&values, tol);
        Self {
            raw: values,
            entries,
        }
    }

    pub fn from_values(values: impl IntoIterator<Item = f64>, source: Source) -> Self {
        Self::from_tagged(values.into_iter().map(|v| (v, source)).collect(), GROUP_TOL)
    }

    /// Builds a spectrum from `(value, multiplicity)` pairs.
    pub fn from_multiplicities(pairs: &[(f64, usize)], source: Source) -> Self {
        Self::from_values(
            pairs.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m)),
            source,
        )
    }

    pub fn empty() -> Self {
        Self {
            raw: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// Raw values, ascending, each repeated by multiplicity.
    pub fn values(&self) -> Vec<f64> {
        self.raw.iter().map(|&(v, _)| v).collect()
    }

    pub fn tagged(&self) -> &[(f64, Source)] {
        &self.raw
    }

    pub fn total(&self) -> usize {
        self.raw.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.raw.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.raw.last().map(|r| r.0)
    }

    pub fn sum(&self) -> f64 {
        self.raw.iter().map(|r| r.0).sum()
    }

    /// Number of raw values within `tol` of `x`.
    pub fn count_near(&self, x: f64, tol: f64) -> usize {
        self.raw.iter().filter(|r| (r.0 - x).abs() <= tol).count()
    }

    /// Same values, every tag replaced by `source`.
    pub fn retagged(&self, source: Source) -> Self {
        Self::from_tagged(
            self.raw.iter().map(|&(v, _)| (v, source)).collect(),
            GROUP_TOL,
        )
    }

    pub fn regrouped(&self, tol: f64) -> Self {
        Self::from_tagged(self.raw.clone(), tol)
    }
}

/// Greedy clustering of sorted values: a value joins the current cluster when
/// it lies within `tol` of the running cluster mean.
fn cluster(values: &[(f64, Source)], tol: f64) -> Vec<SpectrumEntry> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut sum = values[i].0;
        let mut j = i + 1;
        while j < values.len() && (values[j].0 - sum / (j - i) as f64).abs() <= tol {
            sum += values[j].0;
            j += 1;
        }
        let count = j - i;
        out.push(SpectrumEntry {
            value: sum / count as f64,
            multiplicity: count,
            source: majority_source(&values[i..j]),
        });
        i = j;
    }
    out
}

// Mixed clusters report the tag contributing the most copies; ties go to the
// earlier variant.
fn majority_source(members: &[(f64, Source)]) -> Source {
    let mut counts = [0usize; 4];
    for &(_, s) in members {
        counts[s as usize] += 1;
    }
    let best = (0..4)
        .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
        .unwrap_or(0);
    [
        Source::Structural,
        Source::Quotient,
        Source::ClosedForm,
        Source::Oracle,
    ][best]
}

/// Groups ascending values into an oracle-tagged spectrum.
pub fn group_multiplicities(values: &[f64], tol: f64) -> Spectrum {
    Spectrum::from_tagged(values.iter().map(|&v| (v, Source::Oracle)).collect(), tol)
}

/// Outcome of comparing two spectra elementwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Max elementwise deviation between the flattened sorted value lists.
pub fn compare_spectra(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<Comparison> {
    compare_values(&a.values(), &b.values(), tol)
}

pub fn compare_values(a: &[f64], b: &[f64], tol: f64) -> Result<Comparison> {
    if a.len() != b.len() {
        return Err(Error::TotalMismatch(a.len(), b.len()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let max_deviation = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(Comparison {
        max_deviation,
        tol,
        pass: max_deviation <= tol,
    })
}

/// Regular graph kinds whose adjacency spectra are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormKind {
    Complete(usize),
    Empty(usize),
    Cycle(usize),
}

impl ClosedFormKind {
    pub fn order(&self) -> usize {
        match *self {
            ClosedFormKind::Complete(m) | ClosedFormKind::Empty(m) | ClosedFormKind::Cycle(m) => m,
        }
    }

    pub fn regularity(&self) -> usize {
        match *self {
            ClosedFormKind::Complete(m) => m - 1,
            ClosedFormKind::Empty(_) => 0,
            ClosedFormKind::Cycle(_) => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ClosedFormKind::Complete(0) | ClosedFormKind::Empty(0) => {
                Err(Error::OutOfRange("closed-form graph needs m >= 1".into()))
            }
            ClosedFormKind::Cycle(m) if m < 3 => {
                Err(Error::OutOfRange("cycle needs m >= 3".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn graph(&self) -> Result<Graph> {
        match *self {
            ClosedFormKind::Complete(m) => crate::graph::make_complete(m),
            ClosedFormKind::Empty(m) => crate::graph::make_empty(m),
            ClosedFormKind::Cycle(m) => crate::graph::make_cycle(m),
        }
    }

    /// `(value, multiplicity)` pairs, ascending.
    pub fn adjacency_pairs(&self) -> Result<Vec<(f64, usize)>> {
        self.validate()?;
        Ok(match *self {
            ClosedFormKind::Complete(1) => vec![(0.0, 1)],
            ClosedFormKind::Complete(m) => vec![(-1.0, m - 1), ((m - 1) as f64, 1)],
            ClosedFormKind::Empty(m) => vec![(0.0, m)],
            ClosedFormKind::Cycle(m) => {
                // 2cos(2πk/m) for k and m-k coincide.
                let mut pairs: Vec<(f64, usize)> = (0..=m / 2)
                    .map(|k| {
                        let value = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / m as f64).cos();
                        let mult = if k == 0 || 2 * k == m { 1 } else { 2 };
                        (value, mult)
                    })
                    .collect();
                pairs.reverse();
                pairs
            }
        })
    }
}

pub fn adjacency_spectrum_closed(kind: ClosedFormKind) -> Result<Spectrum> {
    Ok(Spectrum::from_multiplicities(
        &kind.adjacency_pairs()?,
        Source::ClosedForm,
    ))
}
