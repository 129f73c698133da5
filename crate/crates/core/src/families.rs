//! Named graph families expressed as joined unions.
//!
//! Each family's spectrum is produced by the general structural engine. The
//! companion [`Family::printed_form`] evaluates the literal published closed
//! forms so the two can be compared and disagreements reported.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{make_complete, make_star};
use crate::joined_union::{structural_spectrum, Component, JoinedUnionSpec};
use crate::spectra::{Source, Spectrum};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum Family {
    /// `K_{n_1, ..., n_p}`.
    Multipartite {
        parts: Vec<usize>,
    },
    /// `K_{t, ..., t}` with `p` parts.
    EqualMultipartite {
        p: usize,
        t: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    /// `K_omega ▽ complement(K_{n - omega})`.
    CompleteSplit {
        omega: usize,
        n: usize,
    },
    /// `C_a ▽ complement(K_b)`.
    Cone {
        a: usize,
        b: usize,
    },
    /// `C_{n-1} ▽ K_1`, order `n`.
    Wheel {
        n: usize,
    },
    /// `K_1 ▽ n K_2`.
    Friendship {
        n: usize,
    },
    /// `K_{1,n}[K_1, p copies of K_1, n - p copies of K_2]`.
    Firefly {
        p: usize,
        n: usize,
    },
    /// `K_1 ▽ a C_b`.
    MultistepWheel {
        a: usize,
        b: usize,
    },
}

fn out_of_range(msg: impl Into<String>) -> Error {
    Error::OutOfRange(msg.into())
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Multipartite { .. } => "multipartite",
            Family::EqualMultipartite { .. } => "equal_multipartite",
            Family::CompleteBipartite { .. } => "complete_bipartite",
            Family::CompleteSplit { .. } => "complete_split",
            Family::Cone { .. } => "cone",
            Family::Wheel { .. } => "wheel",
            Family::Friendship { .. } => "friendship",
            Family::Firefly { .. } => "firefly",
            Family::MultistepWheel { .. } => "multistep_wheel",
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match self {
            Family::Multipartite { parts } => parts.clone(),
            Family::EqualMultipartite { p, t } => vec![*p, *t],
            Family::CompleteBipartite { a, b } => vec![*a, *b],
            Family::CompleteSplit { omega, n } => vec![*omega, *n],
            Family::Cone { a, b } => vec![*a, *b],
            Family::Wheel { n } => vec![*n],
            Family::Friendship { n } => vec![*n],
            Family::Firefly { p, n } => vec![*p, *n],
            Family::MultistepWheel { a, b } => vec![*a, *b],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Multipartite { ref parts } => {
                if parts.len() < 2 || parts.contains(&0) {
                    return Err(out_of_range("multipartite needs >= 2 parts of order >= 1"));
                }
            }
            Family::EqualMultipartite { p, t } => {
                if p < 2 || t < 1 {
                    return Err(out_of_range("equal_multipartite needs p >= 2, t >= 1"));
                }
            }
            Family::CompleteBipartite { a, b } => {
                if a < 1 || b < 1 {
                    return Err(out_of_range("complete_bipartite needs a, b >= 1"));
                }
            }
            Family::CompleteSplit { omega, n } => {
                if omega < 1 || n <= omega {
                    return Err(out_of_range("complete_split needs 1 <= omega < n"));
                }
            }
            Family::Cone { a, b } => {
                if a < 3 || b < 1 {
                    return Err(out_of_range("cone needs a >= 3, b >= 1"));
                }
            }
            Family::Wheel { n } => {
                if n < 4 {
                    return Err(out_of_range("wheel needs n >= 4"));
                }
            }
            Family::Friendship { n } => {
                if n < 1 {
                    return Err(out_of_range("friendship needs n >= 1"));
                }
            }
            Family::Firefly { p, n } => {
                if p < 1 || p >= n {
                    return Err(out_of_range("firefly needs 1 <= p < n"));
                }
            }
            Family::MultistepWheel { a, b } => {
                if a < 1 || b < 3 {
                    return Err(out_of_range("multistep_wheel needs a >= 1, b >= 3"));
                }
            }
        }
        Ok(())
    }

    /// The family member as a joined union.
    pub fn spec(&self) -> Result<JoinedUnionSpec> {
        self.validate()?;
        match *self {
            Family::Multipartite { ref parts } => JoinedUnionSpec::new(
                make_complete(parts.len())?,
                parts
                    .iter()
                    .map(|&m| Component::empty(m))
                    .collect::<Result<_>>()?,
            ),
            Family::EqualMultipartite { p, t } => {
                JoinedUnionSpec::new(make_complete(p)?, vec![Component::empty(t)?; p])
            }
            Family::CompleteBipartite { a, b } => {
                JoinedUnionSpec::join(Component::empty(a)?, Component::empty(b)?)
            }
            Family::CompleteSplit { omega, n } => {
                JoinedUnionSpec::join(Component::complete(omega)?, Component::empty(n - omega)?)
            }
            Family::Cone { a, b } => {
                JoinedUnionSpec::join(Component::cycle(a)?, Component::empty(b)?)
            }
            Family::Wheel { n } => {
                JoinedUnionSpec::join(Component::cycle(n - 1)?, Component::complete(1)?)
            }
            Family::Friendship { n } => {
                let mut comps = vec![Component::complete(1)?];
                comps.extend(std::iter::repeat_n(Component::complete(2)?, n));
                JoinedUnionSpec::new(make_star(n + 1)?, comps)
            }
            Family::Firefly { p, n } => {
                let mut comps = vec![Component::complete(1)?; p + 1];
                comps.extend(std::iter::repeat_n(Component::complete(2)?, n - p));
                JoinedUnionSpec::new(make_star(n + 1)?, comps)
            }
            Family::MultistepWheel { a, b } => {
                let mut comps = vec![Component::complete(1)?];
                comps.extend(std::iter::repeat_n(Component::cycle(b)?, a));
                JoinedUnionSpec::new(make_star(a + 1)?, comps)
            }
        }
    }

    /// Spectrum from the structural engine, tagged closed-form.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(structural_spectrum(&self.spec()?)?.retagged(Source::ClosedForm))
    }

    /// The published closed form evaluated literally, when one exists.
    pub fn printed_form(&self) -> Result<Option<PrintedForm>> {
        self.validate()?;
        let cos = |k: usize, m: usize| (2.0 * PI * k as f64 / m as f64).cos();
        let form = match *self {
            Family::Multipartite { .. } => return Ok(None),
            Family::EqualMultipartite { p, t } => PrintedForm::new(
                "{0, 1^[N-p], (p/(p-1))^[p-1]}",
                vec![
                    (0.0, 1),
                    (1.0, p * t - p),
                    (p as f64 / (p - 1) as f64, p - 1),
                ],
            ),
            Family::CompleteBipartite { a, b } => PrintedForm::new(
                "{0, 1^[a+b-2], 2}",
                vec![(0.0, 1), (1.0, a + b - 2), (2.0, 1)],
            ),
            Family::CompleteSplit { omega, n } => {
                let n_f = n as f64;
                PrintedForm::new(
                    "{0, (n/(n-1))^[omega-1], (2n-omega+1)/(n-1)}",
                    vec![
                        (0.0, 1),
                        (n_f / (n_f - 1.0), omega - 1),
                        ((2.0 * n_f - omega as f64 + 1.0) / (n_f - 1.0), 1),
                    ],
                )
            }
            Family::Cone { a, b } => {
                let b_f = b as f64;
                let mut pairs: Vec<(f64, usize)> = (2..a)
                    .map(|k| (1.0 - 2.0 * cos(k, a) / (2.0 + b_f), 1))
                    .collect();
                pairs.push((0.0, 1));
                pairs.push(((2.0 * b_f + 2.0) / (b_f + 2.0), 1));
                PrintedForm::new(
                    "{1 - 2cos(2πk/a)/(2+b), k=2..a-1} ∪ {0, (2b+2)/(b+2)}",
                    pairs,
                )
            }
            Family::Wheel { n } => {
                let m = n - 1;
                let mut pairs: Vec<(f64, usize)> = (2..=n - 2)
                    .map(|k| (1.0 - 2.0 * cos(k, m) / 3.0, 1))
                    .collect();
                pairs.push((0.0, 1));
                pairs.push((4.0 / 3.0, 1));
                PrintedForm::new("{1 - (2/3)cos(2πk/(n-1)), k=2..n-2} ∪ {0, 4/3}", pairs)
            }
            Family::Friendship { n } => PrintedForm::new(
                "{0, (1/2)^[n-1], (3/2)^[n+1]}",
                vec![(0.0, 1), (0.5, n - 1), (1.5, n + 1)],
            ),
            Family::Firefly { p, n } => {
                let s = ((2 * n - p) as f64).sqrt();
                let r = ((2 * n + 7 * p) as f64).sqrt();
                PrintedForm::new(
                    "{0, (1/2)^[n-p-1], 1^[p-1], (3/2)^[n-p], (5√(2n-p) ± √(2n+7p))/(4√(2n-p))}",
                    vec![
                        (0.0, 1),
                        (0.5, n - p - 1),
                        (1.0, p - 1),
                        (1.5, n - p),
                        ((5.0 * s - r) / (4.0 * s), 1),
                        ((5.0 * s + r) / (4.0 * s), 1),
                    ],
                )
            }
            Family::MultistepWheel { a, b } => {
                // Listed cycle values read as one copy per cycle, together with
                // the (1/3)^[a-1] block of the quotient.
                let mut pairs: Vec<(f64, usize)> =
                    (2..=b).map(|k| (1.0 - 2.0 * cos(k, b) / 3.0, a)).collect();
                pairs.push((0.0, 1));
                pairs.push((1.0 / 3.0, a - 1));
                pairs.push((4.0 / 3.0, 1));
                PrintedForm::new(
                    "{0, 4/3, (1/3)^[a-1], 1 - (2/3)cos(2πk/b) for k=2..b}",
                    pairs,
                )
            }
        };
        Ok(Some(form))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(usize::to_string).collect();
        write!(f, "{}:{}", self.name(), params.join(","))
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `name:param1,param2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let params: Vec<usize> = rest
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| out_of_range(format!("bad family parameter {t:?}")))
            })
            .collect::<Result<_>>()?;
        let want = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(out_of_range(format!(
                    "{name} takes {k} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let family = match name.trim() {
            "multipartite" => Family::Multipartite { parts: params },
            "equal_multipartite" => {
                want(2)?;
                Family::EqualMultipartite {
                    p: params[0],
                    t: params[1],
                }
            }
            "complete_bipartite" => {
                want(2)?;
                Family::CompleteBipartite {
                    a: params[0],
                    b: params[1],
                }
            }
            "complete_split" => {
                want(2)?;
                Family::CompleteSplit {
                    omega: params[0],
                    n: params[1],
                }
            }
            "cone" => {
                want(2)?;
                Family::Cone {
                    a: params[0],
                    b: params[1],
                }
            }
            "wheel" => {
                want(1)?;
                Family::Wheel { n: params[0] }
            }
            "friendship" => {
                want(1)?;
                Family::Friendship { n: params[0] }
            }
            "firefly" => {
                want(2)?;
                Family::Firefly {
                    p: params[0],
                    n: params[1],
                }
            }
            "multistep_wheel" => {
                want(2)?;
                Family::MultistepWheel {
                    a: params[0],
                    b: params[1],
                }
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        family.validate()?;
        Ok(family)
    }
}

/// `G_1 ▽ G_2` for regular `G_i` given by order, degree and adjacency
/// eigenvalues.
pub fn join_two_regular(
    n1: usize,
    r1: usize,
    lambdas1: Vec<f64>,
    n2: usize,
    r2: usize,
    lambdas2: Vec<f64>,
) -> Result<Spectrum> {
    if lambdas1.len() != n1 || lambdas2.len() != n2 {
        return Err(out_of_range(
            "eigenvalue list length must equal the component order",
        ));
    }
    let spec = JoinedUnionSpec::join(
        Component::listed(r1, lambdas1),
        Component::listed(r2, lambdas2),
    )?;
    Ok(structural_spectrum(&spec)?.retagged(Source::ClosedForm))
}

pub fn multipartite_spectrum(parts: &[usize]) -> Result<Spectrum> {
    Family::Multipartite {
        parts: parts.to_vec(),
    }
    .spectrum()
}

pub fn equal_multipartite_spectrum(p: usize, t: usize) -> Result<Spectrum> {
    Family::EqualMultipartite { p, t }.spectrum()
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Spectrum> {
    Family::CompleteBipartite { a, b }.spectrum()
}

pub fn complete_split(omega: usize, n: usize) -> Result<Spectrum> {
    Family::CompleteSplit { omega, n }.spectrum()
}

pub fn cone(a: usize, b: usize) -> Result<Spectrum> {
    Family::Cone { a, b }.spectrum()
}

pub fn wheel(n: usize) -> Result<Spectrum> {
    Family::Wheel { n }.spectrum()
}

pub fn friendship(n: usize) -> Result<Spectrum> {
    Family::Friendship { n }.spectrum()
}

pub fn firefly(p: usize, n: usize) -> Result<Spectrum> {
    Family::Firefly { p, n }.spectrum()
}

pub fn multistep_wheel(a: usize, b: usize) -> Result<Spectrum> {
    Family::MultistepWheel { a, b }.spectrum()
}

/// A literal published eigenvalue list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedForm {
    pub formula: String,
    pub pairs: Vec<(f64, usize)>,
}

impl PrintedForm {
    fn new(formula: &str, pairs: Vec<(f64, usize)>) -> Self {
        Self {
            formula: formula.to_string(),
            pairs: pairs.into_iter().filter(|p| p.1 > 0).collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.pairs.iter().map(|p| p.1).sum()
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_multiplicities(&self.pairs, Source::ClosedForm)
    }

    /// Measures how far the printed list is from `reference`.
    pub fn check(&self, reference: &Spectrum, tol: f64) -> PrintedCheck {
        let reference_values = reference.values();
        let value_deviation = self
            .pairs
            .iter()
            .map(|&(v, _)| {
                reference_values
                    .iter()
                    .map(|r| (r - v).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let printed_values: Vec<f64> = self.pairs.iter().map(|p| p.0).collect();
        let coverage_deviation = reference_values
            .iter()
            .map(|&r| {
                printed_values
                    .iter()
                    .map(|v| (r - v).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let multiset_deviation =
            crate::spectra::compare_values(&self.spectrum().values(), &reference_values, tol)
                .ok()
                .map(|c| c.max_deviation);
        let agrees = multiset_deviation.is_some_and(|d| d <= tol);
        PrintedCheck {
            printed_total: self.total(),
            reference_total: reference.total(),
            value_deviation,
            coverage_deviation,
            multiset_deviation,
            agrees,
        }
    }
}

/// Result of holding a printed eigenvalue list against a computed spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedCheck {
    pub printed_total: usize,
    pub reference_total: usize,
    /// Largest distance from a printed value to the nearest computed value.
    pub value_deviation: f64,
    /// Largest distance from a computed value to the nearest printed value.
    pub coverage_deviation: f64,
    /// Elementwise deviation of the sorted lists; `None` when totals differ.
    pub multiset_deviation: Option<f64>,
    pub agrees: bool,
}

impl PrintedCheck {
    /// Single figure for reports: the worst of the three measures.
    pub fn deviation(&self) -> f64 {
        self.value_deviation
            .max(self.coverage_deviation)
            .max(self.multiset_deviation.unwrap_or(0.0))
    }
}
