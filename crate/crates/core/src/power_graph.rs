//! Power graphs of the cyclic groups `Z_n`.
//!
//! `P(Z_n)` splits as `K_{φ(n)+1} ▽ G_n[K_{φ(d_1)}, ..., K_{φ(d_t)}]` where
//! `d_1 < ... < d_t` are the proper divisors of `n` and `G_n` is their
//! divisibility graph. Block 0 holds the identity and the generators; block
//! `i >= 1` holds the `φ(d_i)` elements of order `d_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{block_offsets, make_complete, Graph};
use crate::joined_union::{structural_spectrum, Component, JoinedUnionSpec};
use crate::numtheory::{factorize, gcd, is_prime, totient, FactoredInteger};
use crate::spectra::{Source, Spectrum, GROUP_TOL};

/// Direct construction: `x ~ y` iff one generates a subgroup containing the
/// other, i.e. `gcd(x, n) | gcd(y, n)` or the reverse (`gcd(0, n) = n`).
pub fn power_graph_direct(n: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::OutOfRange("power graph needs n >= 2".into()));
    }
    let size = usize::try_from(n).map_err(|_| Error::Overflow)?;
    let g: Vec<u64> = (0..n).map(|x| gcd(x, n)).collect();
    let mut edges = Vec::new();
    for x in 0..size {
        for y in x + 1..size {
            if g[y].is_multiple_of(g[x]) || g[x].is_multiple_of(g[y]) {
                edges.push((x, y));
            }
        }
    }
    Graph::from_edge_list(size, &edges)
}

/// Divisibility graph on the proper divisors of `n` (ascending).
pub fn divisor_graph(n: u64) -> Result<Graph> {
    let divisors = crate::numtheory::proper_divisors(n)?;
    Ok(divisor_graph_on(&divisors))
}

fn divisor_graph_on(divisors: &[u64]) -> Graph {
    let mut edges = Vec::new();
    for (i, &a) in divisors.iter().enumerate() {
        for (j, &b) in divisors.iter().enumerate().skip(i + 1) {
            if b % a == 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_list(divisors.len(), &edges).expect("divisor pairs are distinct")
}

/// The block structure of `P(Z_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerGraphDecomposition {
    pub n: u64,
    pub factored: FactoredInteger,
    pub proper_divisors: Vec<u64>,
    /// `G_n`, order `t`.
    pub divisor_graph: Graph,
    /// `K_1 ▽ G_n`, vertex 0 is the dominating vertex.
    pub outer: Graph,
    /// `[φ(n)+1, φ(d_1), ..., φ(d_t)]`.
    pub block_orders: Vec<usize>,
    /// `[φ(n), φ(d_1)-1, ..., φ(d_t)-1]`.
    pub block_regularities: Vec<usize>,
}

impl PowerGraphDecomposition {
    /// Number of proper divisors.
    pub fn t(&self) -> usize {
        self.proper_divisors.len()
    }

    /// Block index holding the elements of order `d` (`d | n`).
    pub fn block_of_order(&self, d: u64) -> Option<usize> {
        if d == 1 || d == self.n {
            return Some(0);
        }
        self.proper_divisors.binary_search(&d).ok().map(|i| i + 1)
    }
}

pub fn decompose(n: u64) -> Result<PowerGraphDecomposition> {
    if n < 3 {
        return Err(Error::OutOfRange("decomposition needs n >= 3".into()));
    }
    let factored = factorize(n)?;
    let proper_divisors = crate::numtheory::proper_divisors(n)?;
    let divisor_graph = divisor_graph_on(&proper_divisors);
    let t = proper_divisors.len();
    let mut edges: Vec<(usize, usize)> = (1..=t).map(|v| (0, v)).collect();
    edges.extend(divisor_graph.edges().iter().map(|&(u, v)| (u + 1, v + 1)));
    let outer = Graph::from_edge_list(t + 1, &edges)?;

    let to_usize = |x: u64| usize::try_from(x).map_err(|_| Error::Overflow);
    let phi_n = to_usize(factored.totient())?;
    let mut block_orders = vec![phi_n + 1];
    let mut block_regularities = vec![phi_n];
    for &d in &proper_divisors {
        let phi = to_usize(totient(d)?)?;
        block_orders.push(phi);
        block_regularities.push(phi - 1);
    }
    Ok(PowerGraphDecomposition {
        n,
        factored,
        proper_divisors,
        divisor_graph,
        outer,
        block_orders,
        block_regularities,
    })
}

/// The decomposition as a joined union of cliques.
pub fn realize(dec: &PowerGraphDecomposition) -> Result<JoinedUnionSpec> {
    let comps = dec
        .block_orders
        .iter()
        .map(|&m| Component::complete(m))
        .collect::<Result<_>>()?;
    JoinedUnionSpec::new(dec.outer.clone(), comps)
}

/// Joined-union spec for `P(Z_n)`, including `n = 2` as `K_1[K_2]`.
pub fn power_spec(n: u64) -> Result<JoinedUnionSpec> {
    match n {
        0 | 1 => Err(Error::OutOfRange("power graph needs n >= 2".into())),
        2 => JoinedUnionSpec::new(make_complete(1)?, vec![Component::complete(2)?]),
        _ => realize(&decompose(n)?),
    }
}

/// Normalized Laplacian spectrum of `P(Z_n)` from the decomposition alone.
pub fn power_spectrum(n: u64) -> Result<Spectrum> {
    structural_spectrum(&power_spec(n)?)
}

/// Verifies that sending each element to the block of its order is an
/// isomorphism between [`power_graph_direct`] and the materialized joined
/// union.
pub fn isomorphism_check(n: u64) -> bool {
    let Ok(dec) = decompose(n) else {
        return false;
    };
    let (Ok(direct), Ok(joined)) = (
        power_graph_direct(n),
        realize(&dec).and_then(|s| s.materialize()),
    ) else {
        return false;
    };
    if direct.order() != joined.order() || direct.size() != joined.size() {
        return false;
    }
    let offsets = block_offsets(&dec.block_orders);
    let mut filled = vec![0usize; dec.block_orders.len()];
    let mut map = Vec::with_capacity(direct.order());
    for x in 0..n {
        let order = n / gcd(x, n);
        let Some(block) = dec.block_of_order(order) else {
            return false;
        };
        if filled[block] == dec.block_orders[block] {
            return false;
        }
        map.push(offsets[block] + filled[block]);
        filled[block] += 1;
    }
    if filled != dec.block_orders {
        return false;
    }
    direct
        .edges()
        .iter()
        .all(|&(u, v)| joined.has_edge(map[u], map[v]))
}

/// How often `n/(n-1)` occurs in the spectrum of `P(Z_n)` against the
/// guaranteed floor `φ(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorCheck {
    pub n: u64,
    pub multiplicity: usize,
    pub totient: u64,
    pub floor_holds: bool,
    pub equality: bool,
}

pub fn multiplicity_floor_check(n: u64) -> Result<FloorCheck> {
    if n < 3 {
        return Err(Error::OutOfRange("floor check needs n >= 3".into()));
    }
    let target = n as f64 / (n - 1) as f64;
    let multiplicity = power_spectrum(n)?.count_near(target, GROUP_TOL);
    let phi = totient(n)?;
    Ok(FloorCheck {
        n,
        multiplicity,
        totient: phi,
        floor_holds: multiplicity as u64 >= phi,
        equality: multiplicity as u64 == phi,
    })
}

/// Coefficients `(b, c)` of the quadratic factor `x^2 - b x + c` of the
/// quotient characteristic polynomial for `n = pq`.
pub fn pq_quadratic(p: u64, q: u64) -> Result<(f64, f64)> {
    let (p, q) = ordered_primes(p, q)?;
    let n = (p * q) as f64;
    let phi_n = ((p - 1) * (q - 1)) as f64;
    let phi_p = (p - 1) as f64;
    let phi_q = (q - 1) as f64;
    let (p, q) = (p as f64, q as f64);
    let mid = q * phi_p + phi_q;
    let b = (phi_n + 1.0) / (q * phi_p) + (phi_p + phi_q) / mid + (phi_n + 1.0) / (p * phi_q);
    let c = (phi_n + 1.0) * phi_p / (p * phi_q * mid)
        + (phi_n + 1.0).powi(2) / (n * phi_n)
        + (phi_n + 1.0) * phi_q / (q * phi_p * mid);
    Ok((b, c))
}

fn ordered_primes(p: u64, q: u64) -> Result<(u64, u64)> {
    if p == q || !is_prime(p) || !is_prime(q) {
        return Err(Error::OutOfRange(format!(
            "{p} and {q} are not distinct primes"
        )));
    }
    Ok((p.min(q), p.max(q)))
}

/// Closed-form spectrum of `P(Z_{pq})`: explicit multiplicities plus the
/// roots of the quotient's cubic `x (x^2 - b x + c)`.
pub fn spectrum_pq_closed(p: u64, q: u64) -> Result<Spectrum> {
    let (p, q) = ordered_primes(p, q)?;
    let (b, c) = pq_quadratic(p, q)?;
    let disc = (b * b - 4.0 * c).max(0.0).sqrt();
    let n = p * q;
    let (phi_p, phi_q) = (p - 1, q - 1);
    let phi_n = phi_p * phi_q;
    let nf = n as f64;
    let pairs = [
        (0.0, 1),
        (nf / (nf - 1.0), phi_n as usize),
        (1.0 + 1.0 / (q * phi_p) as f64, phi_p as usize - 1),
        (1.0 + 1.0 / (p * phi_q) as f64, phi_q as usize - 1),
        ((b - disc) / 2.0, 1),
        ((b + disc) / 2.0, 1),
    ];
    Ok(Spectrum::from_multiplicities(&pairs, Source::ClosedForm))
}
