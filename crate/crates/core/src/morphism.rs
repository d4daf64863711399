//! Graph morphisms and the harmonicity check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};

/// Image of a source edge: a target edge (by index) or a target vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeImage {
    Edge(usize),
    Vertex(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    source: MultiGraph,
    target: MultiGraph,
    vertex_map: Vec<VertexId>,
    edge_map: Vec<EdgeImage>,
}

/// JSON form of a morphism: `{vertex_map, edge_map}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismMaps {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeImage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicReport {
    pub harmonic: bool,
    /// Fibre size over any target edge; 0 for constant maps.
    pub degree: usize,
    pub constant: bool,
    /// Every source vertex has positive horizontal multiplicity.
    pub non_degenerate: bool,
}

impl GraphMorphism {
    pub fn new(
        source: MultiGraph,
        target: MultiGraph,
        vertex_map: Vec<VertexId>,
        edge_map: Vec<EdgeImage>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() || edge_map.len() != source.edge_count() {
            return Err(Error::InvalidInput("morphism maps have the wrong length".into()));
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= target.vertex_count()) {
            return Err(Error::MissingVertex(w));
        }
        for (i, (e, img)) in source.edges().iter().zip(&edge_map).enumerate() {
            let [u, v] = e.ends.map(|x| vertex_map[x]);
            match *img {
                EdgeImage::Vertex(w) => {
                    if u != w || v != w {
                        return Err(Error::InvalidInput(format!(
                            "edge index {i} collapses to vertex {w} but its ends map to {u} and {v}"
                        )));
                    }
                }
                EdgeImage::Edge(t) => {
                    let ends = target
                        .edges()
                        .get(t)
                        .ok_or_else(|| Error::InvalidInput(format!("target edge index {t} out of range")))?
                        .ends;
                    if !(ends == [u, v] || ends == [v, u]) {
                        return Err(Error::InvalidInput(format!(
                            "edge index {i} maps onto target edge {t} with mismatched ends"
                        )));
                    }
                }
            }
        }
        Ok(GraphMorphism {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    pub fn identity(g: &MultiGraph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: g.vertices().collect(),
            edge_map: (0..g.edge_count()).map(EdgeImage::Edge).collect(),
        }
    }

    pub fn source(&self) -> &MultiGraph {
        &self.source
    }

    pub fn target(&self) -> &MultiGraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[EdgeImage] {
        &self.edge_map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism> {
        if next.source != self.target {
            return Err(Error::InvalidInput("morphisms do not compose".into()));
        }
        let vertex_map = self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect();
        let edge_map = self
            .edge_map
            .iter()
            .map(|img| match *img {
                EdgeImage::Vertex(w) => EdgeImage::Vertex(next.vertex_map[w]),
                EdgeImage::Edge(t) => next.edge_map[t],
            })
            .collect();
        GraphMorphism::new(self.source.clone(), next.target.clone(), vertex_map, edge_map)
    }

    pub fn maps(&self) -> MorphismMaps {
        MorphismMaps {
            vertex_map: self.vertex_map.clone(),
            edge_map: self.edge_map.clone(),
        }
    }
}

/// Checks harmonicity: at every source vertex `v`, the number of edges at `v`
/// mapping onto a target edge at `φ(v)` must not depend on that target edge.
pub fn is_harmonic(m: &GraphMorphism) -> HarmonicReport {
    let src_inc = m.source.incidence();
    let tgt_inc = m.target.incidence();
    let image_vertices: std::collections::BTreeSet<_> = m.vertex_map.iter().collect();
    let constant = image_vertices.len() <= 1;

    let mut harmonic = true;
    let mut non_degenerate = true;
    for v in m.source.vertices() {
        let image = m.vertex_map[v];
        let mut targets: Vec<usize> = tgt_inc[image].clone();
        targets.sort_unstable();
        targets.dedup();
        if targets.is_empty() {
            continue;
        }
        let mut counts = vec![0usize; targets.len()];
        for &ei in &src_inc[v] {
            if let EdgeImage::Edge(t) = m.edge_map[ei] {
                let slot = targets.binary_search(&t).expect("valid morphism maps onto incident edges");
                counts[slot] += 1;
            }
        }
        if counts.iter().any(|&c| c != counts[0]) {
            harmonic = false;
        }
        if counts[0] == 0 {
            non_degenerate = false;
        }
    }

    let mut fibres = vec![0usize; m.target.edge_count()];
    for img in &m.edge_map {
        if let EdgeImage::Edge(t) = *img {
            fibres[t] += 1;
        }
    }
    let degree = if constant { 0 } else { fibres.first().copied().unwrap_or(0) };
    if !constant && fibres.iter().any(|&f| f != degree) {
        harmonic = false;
    }
    HarmonicReport {
        harmonic,
        degree,
        constant,
        non_degenerate: non_degenerate && !constant,
    }
}
