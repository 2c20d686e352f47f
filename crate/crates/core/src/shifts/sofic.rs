use super::{Alphabet, Shift};
use crate::error::{Error, Result};

/// A finite graph with labeled edges; its points are the label sequences of
/// infinite paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SoficPresentation {
    vertices: Vec<String>,
    alphabet: Alphabet,
    /// `(src, label, dst)`, sorted and without repeats.
    edges: Vec<(usize, usize, usize)>,
}

impl SoficPresentation {
    pub fn new<V: Into<String>>(
        vertices: impl IntoIterator<Item = V>,
        alphabet: Alphabet,
        edges: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let vertex = |name: &str| {
            vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownState(name.to_string()))
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for &(s, l, d) in edges {
            let label = alphabet.index_of(l).ok_or_else(|| Error::UnknownSymbol(l.to_string()))?;
            indexed.push((vertex(s)?, label, vertex(d)?));
        }
        Self::from_indexed(vertices, alphabet, indexed)
    }

    pub fn from_indexed(
        vertices: Vec<String>,
        alphabet: Alphabet,
        mut edges: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::DuplicateState(v.clone()));
            }
        }
        for &(s, l, d) in &edges {
            if s >= vertices.len() || d >= vertices.len() {
                return Err(Error::EndpointOutOfRange(s, d));
            }
            if l >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{l}")));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { vertices, alphabet, edges })
    }

    /// One vertex with a self-loop per symbol.
    pub fn full(alphabet: Alphabet) -> Self {
        let edges = (0..alphabet.len()).map(|a| (0, a, 0)).collect();
        Self::from_indexed(vec!["v".into()], alphabet, edges).expect("valid")
    }

    /// The even shift: between two 1s there is an even number of 0s.
    pub fn even_shift() -> Self {
        Self::new(
            ["A", "B"],
            Alphabet::numbered(2),
            &[("A", "1", "A"), ("A", "0", "B"), ("B", "0", "A")],
        )
        .expect("valid")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &(usize, usize, usize)> {
        let start = self.edges.partition_point(|e| e.0 < v);
        self.edges[start..].iter().take_while(move |e| e.0 == v)
    }

    /// Repeatedly removes vertices without outgoing edges.
    pub fn trim(&self) -> Self {
        let n = self.vertices.len();
        let mut alive = vec![true; n];
        loop {
            let mut out = vec![false; n];
            for &(s, _, d) in &self.edges {
                if alive[s] && alive[d] {
                    out[s] = true;
                }
            }
            let mut changed = false;
            for v in 0..n {
                if alive[v] && !out[v] {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for v in (0..n).filter(|&v| alive[v]) {
            remap[v] = vertices.len();
            vertices.push(self.vertices[v].clone());
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(s, _, d)| alive[s] && alive[d])
            .map(|&(s, l, d)| (remap[s], l, remap[d]))
            .collect();
        Self { vertices, alphabet: self.alphabet.clone(), edges }
    }

    pub fn is_trimmed(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.out_edges(v).next().is_some())
    }
}

impl Shift for SoficPresentation {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn presentation(&self) -> SoficPresentation {
        self.trim()
    }
}
