//! Normalized Laplacian spectrum of a joined union `G[G_1, ..., G_n]` of
//! regular graphs, assembled from the components' adjacency spectra and the
//! equitable quotient matrix.

use crate::error::{Error, Result};
use crate::graph::{block_offsets, joined_union, Graph};
use crate::spectra::{
    adjacency_matrix, eigenvalues_symmetric, ClosedFormKind, Source, Spectrum, SymMatrix, GROUP_TOL,
};

/// How a component's adjacency spectrum is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSource {
    Closed(ClosedFormKind),
    /// An explicit regular graph; its spectrum comes from the Jacobi solver.
    Explicit(Graph),
    /// A caller-supplied adjacency spectrum (no graph to materialize).
    Listed(Vec<f64>),
}

/// One regular component of a joined union.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    order: usize,
    regularity: usize,
    source: ComponentSource,
}

impl Component {
    pub fn closed(kind: ClosedFormKind) -> Result<Self> {
        kind.validate()?;
        Ok(Self {
            order: kind.order(),
            regularity: kind.regularity(),
            source: ComponentSource::Closed(kind),
        })
    }

    pub fn complete(m: usize) -> Result<Self> {
        Self::closed(ClosedFormKind::Complete(m))
    }

    pub fn empty(m: usize) -> Result<Self> {
        Self::closed(ClosedFormKind::Empty(m))
    }

    pub fn cycle(m: usize) -> Result<Self> {
        Self::closed(ClosedFormKind::Cycle(m))
    }

    /// An explicit graph declared `regularity`-regular. The declaration is
    /// checked when the component is placed in a [`JoinedUnionSpec`].
    pub fn explicit(graph: Graph, regularity: usize) -> Self {
        Self {
            order: graph.order(),
            regularity,
            source: ComponentSource::Explicit(graph),
        }
    }

    /// Explicit graph with its regularity read off the graph.
    pub fn regular_graph(graph: Graph) -> Result<Self> {
        let r = graph.is_regular().ok_or(Error::NonRegularComponent {
            index: 0,
            declared: graph.degree(0),
        })?;
        Ok(Self::explicit(graph, r))
    }

    pub fn listed(regularity: usize, eigenvalues: Vec<f64>) -> Self {
        Self {
            order: eigenvalues.len(),
            regularity,
            source: ComponentSource::Listed(eigenvalues),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn regularity(&self) -> usize {
        self.regularity
    }

    pub fn source(&self) -> &ComponentSource {
        &self.source
    }

    pub fn graph(&self) -> Option<Graph> {
        match &self.source {
            ComponentSource::Closed(kind) => kind.graph().ok(),
            ComponentSource::Explicit(g) => Some(g.clone()),
            ComponentSource::Listed(_) => None,
        }
    }

    /// Adjacency eigenvalues with one copy of the Perron value `r` removed.
    fn non_perron_eigenvalues(&self) -> Result<Vec<(f64, usize)>> {
        match &self.source {
            ComponentSource::Closed(kind) => {
                let mut pairs = kind.adjacency_pairs()?;
                if let Some(last) = pairs.last_mut() {
                    last.1 -= 1;
                }
                pairs.retain(|p| p.1 > 0);
                Ok(pairs)
            }
            ComponentSource::Explicit(g) => {
                let mut ev = eigenvalues_symmetric(&adjacency_matrix(g)?)?;
                ev.pop();
                Ok(ev.into_iter().map(|v| (v, 1)).collect())
            }
            ComponentSource::Listed(values) => {
                let mut ev = values.clone();
                ev.sort_by(f64::total_cmp);
                ev.pop();
                Ok(ev.into_iter().map(|v| (v, 1)).collect())
            }
        }
    }
}

/// Outer graph plus one regular component per outer vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedUnionSpec {
    outer: Graph,
    components: Vec<Component>,
}

impl JoinedUnionSpec {
    pub fn new(outer: Graph, components: Vec<Component>) -> Result<Self> {
        if components.len() != outer.order() {
            return Err(Error::PartCountMismatch {
                expected: outer.order(),
                got: components.len(),
            });
        }
        for (index, c) in components.iter().enumerate() {
            if c.order == 0 {
                return Err(Error::OutOfRange(format!("component {index} has order 0")));
            }
            if c.regularity >= c.order {
                return Err(Error::NonRegularComponent {
                    index,
                    declared: c.regularity,
                });
            }
            match &c.source {
                ComponentSource::Explicit(g) if g.is_regular() != Some(c.regularity) => {
                    return Err(Error::NonRegularComponent {
                        index,
                        declared: c.regularity,
                    });
                }
                ComponentSource::Listed(values) => {
                    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    if (top - c.regularity as f64).abs() > 1e-9 {
                        return Err(Error::NonRegularComponent {
                            index,
                            declared: c.regularity,
                        });
                    }
                }
                _ => {}
            }
        }
        Ok(Self { outer, components })
    }

    /// `G_1 ▽ G_2` as `K_2[G_1, G_2]`.
    pub fn join(first: Component, second: Component) -> Result<Self> {
        Self::new(crate::graph::make_complete(2)?, vec![first, second])
    }

    pub fn outer(&self) -> &Graph {
        &self.outer
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn block_orders(&self) -> Vec<usize> {
        self.components.iter().map(Component::order).collect()
    }

    pub fn regularities(&self) -> Vec<usize> {
        self.components.iter().map(Component::regularity).collect()
    }

    /// Order of the realized graph.
    pub fn total_order(&self) -> usize {
        self.components.iter().map(Component::order).sum()
    }

    /// Builds the explicit joined-union graph (the oracle-side object).
    pub fn materialize(&self) -> Result<Graph> {
        let parts = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| c.graph().ok_or(Error::NotMaterializable(i)))
            .collect::<Result<Vec<_>>>()?;
        joined_union(&self.outer, &parts)
    }

    /// Common degree `r_i + alpha_i` of the vertices in each block.
    pub fn block_degrees(&self) -> Vec<usize> {
        alphas(self)
            .iter()
            .zip(&self.components)
            .map(|(a, c)| a + c.regularity)
            .collect()
    }

    fn check_no_isolated(&self) -> Result<Vec<usize>> {
        let degrees = self.block_degrees();
        let offsets = block_offsets(&self.block_orders());
        match degrees.iter().position(|&d| d == 0) {
            Some(i) => Err(Error::IsolatedVertex(offsets[i])),
            None => Ok(degrees),
        }
    }
}

/// `alpha_i`: total order of the components sitting on the outer neighbors
/// of vertex `i`.
pub fn alphas(spec: &JoinedUnionSpec) -> Vec<usize> {
    (0..spec.outer.order())
        .map(|i| {
            spec.outer
                .neighbors(i)
                .iter()
                .map(|&j| spec.components[j].order)
                .sum()
        })
        .collect()
}

/// The (generally nonsymmetric) equitable quotient matrix of the joined
/// union's normalized Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMatrix {
    order: usize,
    entries: Vec<f64>,
    block_sizes: Vec<usize>,
}

impl QuotientMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.entries[i * self.order..(i + 1) * self.order]
            .iter()
            .sum()
    }

    /// `D^{1/2} M D^{-1/2}` with `D = diag(block_sizes)`.
    pub fn symmetrized(&self) -> Result<SymMatrix> {
        let scale: Vec<f64> = self
            .block_sizes
            .iter()
            .map(|&s| (s as f64).sqrt())
            .collect();
        let n = self.order;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = self.get(i, i);
            for j in i + 1..n {
                // Average the two mirrored entries so rounding cannot break symmetry.
                let upper = scale[i] * self.get(i, j) / scale[j];
                let lower = scale[j] * self.get(j, i) / scale[i];
                let v = 0.5 * (upper + lower);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix::new(n, data)
    }
}

pub fn quotient_matrix(spec: &JoinedUnionSpec) -> Result<QuotientMatrix> {
    let degrees = spec.check_no_isolated()?;
    let alpha = alphas(spec);
    let n = spec.outer.order();
    let sizes = spec.block_orders();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = alpha[i] as f64 / degrees[i] as f64;
        for &j in spec.outer.neighbors(i) {
            entries[i * n + j] =
                -(sizes[j] as f64) / ((degrees[i] as f64) * (degrees[j] as f64)).sqrt();
        }
    }
    Ok(QuotientMatrix {
        order: n,
        entries,
        block_sizes: sizes,
    })
}

/// Eigenvalues of the quotient matrix, ascending, via symmetrization.
pub fn quotient_eigenvalues(q: &QuotientMatrix) -> Result<Vec<f64>> {
    eigenvalues_symmetric(&q.symmetrized()?)
}

/// Full normalized Laplacian spectrum of the joined union without building
/// it: `n_i - 1` values `1 - lambda / (r_i + alpha_i)` per component plus the
/// quotient eigenvalues.
pub fn structural_spectrum(spec: &JoinedUnionSpec) -> Result<Spectrum> {
    let degrees = spec.check_no_isolated()?;
    let mut values = Vec::with_capacity(spec.total_order());
    for (c, &deg) in spec.components.iter().zip(&degrees) {
        for (lambda, mult) in c.non_perron_eigenvalues()? {
            let v = 1.0 - lambda / deg as f64;
            values.extend(std::iter::repeat_n((v, Source::Structural), mult));
        }
    }
    let q = quotient_matrix(spec)?;
    values.extend(
        quotient_eigenvalues(&q)?
            .into_iter()
            .map(|v| (v, Source::Quotient)),
    );
    Ok(Spectrum::from_tagged(values, GROUP_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_cycle, make_empty, make_star};
    use crate::spectra::{compare_spectra, normalized_laplacian};

    fn oracle(spec: &JoinedUnionSpec) -> Spectrum {
        let g = spec.materialize().unwrap();
        let ev = eigenvalues_symmetric(&normalized_laplacian(&g).unwrap()).unwrap();
        Spectrum::from_values(ev, Source::Oracle)
    }

    fn friendship(n: usize) -> JoinedUnionSpec {
        let mut comps = vec![Component::complete(1).unwrap()];
        comps.extend((0..n).map(|_| Component::complete(2).unwrap()));
        JoinedUnionSpec::new(make_star(n + 1).unwrap(), comps).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alphas(&friendship(4)), vec![8, 1, 1, 1, 1]);
        let join =
            JoinedUnionSpec::join(Component::cycle(5).unwrap(), Component::empty(3).unwrap())
                .unwrap();
        assert_eq!(alphas(&join), vec![3, 5]);
        let spec = JoinedUnionSpec::new(
            make_empty(3).unwrap(),
            vec![Component::complete(2).unwrap(); 3],
        )
        .unwrap();
        assert_eq!(alphas(&spec), vec![0, 0, 0]);
    }

    #[test]
    fn join_quotient_matches_two_by_two_formula() {
        let (n1, r1, n2, r2) = (5usize, 2usize, 4usize, 3usize);
        let spec = JoinedUnionSpec::join(
            Component::cycle(n1).unwrap(),
            Component::complete(n2).unwrap(),
        )
        .unwrap();
        let q = quotient_matrix(&spec).unwrap();
        let d1 = (r1 + n2) as f64;
        let d2 = (r2 + n1) as f64;
        assert!((q.get(0, 0) - n2 as f64 / d1).abs() < 1e-15);
        assert!((q.get(0, 1) + n2 as f64 / (d1 * d2).sqrt()).abs() < 1e-15);
        assert!((q.get(1, 0) + n1 as f64 / (d1 * d2).sqrt()).abs() < 1e-15);
        assert!((q.get(1, 1) - n1 as f64 / d2).abs() < 1e-15);
    }

    #[test]
    fn friendship_quotient_shape() {
        let n = 4;
        let q = quotient_matrix(&friendship(n)).unwrap();
        assert_eq!(q.get(0, 0), 1.0);
        for j in 1..=n {
            assert!((q.get(0, j) + 1.0 / (n as f64).sqrt()).abs() < 1e-15);
            assert!((q.get(j, 0) + 1.0 / (2.0 * (n as f64).sqrt())).abs() < 1e-15);
            assert_eq!(q.get(j, j), 0.5);
        }
        assert_eq!(q.get(1, 2), 0.0);
    }

    #[test]
    fn bipartite_join_quotient_eigenvalues() {
        let spec =
            JoinedUnionSpec::join(Component::empty(3).unwrap(), Component::empty(5).unwrap())
                .unwrap();
        let ev = quotient_eigenvalues(&quotient_matrix(&spec).unwrap()).unwrap();
        assert!(ev[0].abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn friendship_spectrum() {
        let s = structural_spectrum(&friendship(3)).unwrap();
        let want = Spectrum::from_multiplicities(&[(0.0, 1), (0.5, 2), (1.5, 4)], Source::Oracle);
        assert!(compare_spectra(&s, &want, 1e-12).unwrap().pass);
        let dev = compare_spectra(&s, &oracle(&friendship(3)), 1e-10).unwrap();
        assert!(dev.pass, "{dev:?}");
    }

    #[test]
    fn join_of_singletons() {
        let spec = JoinedUnionSpec::join(
            Component::complete(1).unwrap(),
            Component::complete(1).unwrap(),
        )
        .unwrap();
        let s = structural_spectrum(&spec).unwrap();
        assert!(
            compare_spectra(
                &s,
                &Spectrum::from_values([0.0, 2.0], Source::Oracle),
                1e-14
            )
            .unwrap()
            .pass
        );
    }

    #[test]
    fn explicit_component_uses_jacobi() {
        let petersen_like = make_cycle(6).unwrap();
        let spec = JoinedUnionSpec::join(
            Component::explicit(petersen_like, 2),
            Component::complete(3).unwrap(),
        )
        .unwrap();
        let dev =
            compare_spectra(&structural_spectrum(&spec).unwrap(), &oracle(&spec), 1e-10).unwrap();
        assert!(dev.pass);
    }

    #[test]
    fn non_regular_component_rejected() {
        let err = JoinedUnionSpec::join(
            Component::explicit(make_star(4).unwrap(), 1),
            Component::complete(2).unwrap(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::NonRegularComponent {
                index: 0,
                declared: 1
            }
        );
        assert!(Component::regular_graph(make_star(4).unwrap()).is_err());
    }

    #[test]
    fn isolated_block_rejected() {
        let spec = JoinedUnionSpec::new(
            make_empty(2).unwrap(),
            vec![
                Component::complete(2).unwrap(),
                Component::empty(3).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(quotient_matrix(&spec), Err(Error::IsolatedVertex(2)));
        assert_eq!(structural_spectrum(&spec), Err(Error::IsolatedVertex(2)));
    }

    #[test]
    fn listed_component_cannot_materialize() {
        let spec = JoinedUnionSpec::join(
            Component::listed(1, vec![1.0, -1.0]),
            Component::complete(2).unwrap(),
        )
        .unwrap();
        assert_eq!(spec.materialize(), Err(Error::NotMaterializable(0)));
        // K_2 ▽ K_2 = K_4
        let s = structural_spectrum(&spec).unwrap();
        let want = Spectrum::from_multiplicities(&[(0.0, 1), (4.0 / 3.0, 3)], Source::Oracle);
        assert!(compare_spectra(&s, &want, 1e-12).unwrap().pass);
    }

    #[test]
    fn part_count_checked() {
        assert!(matches!(
            JoinedUnionSpec::new(
                make_complete(3).unwrap(),
                vec![Component::complete(1).unwrap()]
            ),
            Err(Error::PartCountMismatch {
                expected: 3,
                got: 1
            })
        ));
    }
}
