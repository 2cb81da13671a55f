//! Order structure over concept sets: the extent-inclusion order, covering
//! (Hasse) edges, meet and join, iceberg filtering and DOT rendering.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::ObjectSet;
use crate::context::FormalContext;
use crate::mining::{sort_canonical, Concept};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("concept does not belong to a context of this shape")]
    ContextMismatch,
    #[error("meet and join need at least one concept")]
    EmptyCollection,
    #[error("concept {index} is not closed in the context")]
    NotAConcept { index: usize },
    #[error("concept {index} appears more than once")]
    Duplicate { index: usize },
    #[error("concept set is incomplete: {0}")]
    Incomplete(String),
}

/// `c1 ≼ c2`: the extent of `c1` is contained in the extent of `c2`
/// (equivalently the intent of `c1` contains the intent of `c2`).
pub fn order_leq(c1: &Concept, c2: &Concept) -> Result<bool, LatticeError> {
    if c1.extent().dim() != c2.extent().dim() || c1.intent().dim() != c2.intent().dim() {
        return Err(LatticeError::ContextMismatch);
    }
    let by_extent = c1.extent().is_subset(c2.extent());
    debug_assert_eq!(by_extent, c1.intent().is_superset(c2.intent()));
    Ok(by_extent)
}

fn check_members(ctx: &FormalContext, cs: &[Concept]) -> Result<(), LatticeError> {
    if cs.is_empty() {
        return Err(LatticeError::EmptyCollection);
    }
    if cs.iter().any(|c| {
        c.extent().dim() != ctx.object_count() || c.intent().dim() != ctx.attribute_count()
    }) {
        return Err(LatticeError::ContextMismatch);
    }
    Ok(())
}

/// Greatest lower bound: intersect the extents, close the union of intents.
pub fn meet(ctx: &FormalContext, cs: &[Concept]) -> Result<Concept, LatticeError> {
    check_members(ctx, cs)?;
    let mut extent = ctx.all_objects();
    let mut intents = ctx.attribute_set([]);
    for c in cs {
        extent.intersect_with(c.extent());
        intents.union_with(c.intent());
    }
    let intent = ctx
        .close_attributes(&intents)
        .map_err(|_| LatticeError::ContextMismatch)?;
    Ok(Concept::new(extent, intent))
}

/// Least upper bound: close the union of extents, intersect the intents.
pub fn join(ctx: &FormalContext, cs: &[Concept]) -> Result<Concept, LatticeError> {
    check_members(ctx, cs)?;
    let mut extents = ctx.object_set([]);
    let mut intent = ctx.all_attributes();
    for c in cs {
        extents.union_with(c.extent());
        intent.intersect_with(c.intent());
    }
    let extent = ctx
        .close_objects(&extents)
        .map_err(|_| LatticeError::ContextMismatch)?;
    Ok(Concept::new(extent, intent))
}

/// True when the concept's support reaches `min_support` percent. The
/// comparison is inclusive up to a 1e-9 relative tolerance, so a threshold
/// computed as `100 × k / n` keeps the concepts with exactly `k` objects.
pub fn meets_support(concept: &Concept, min_support: f64) -> bool {
    let n = concept.extent().dim() as f64;
    let k = concept.extent().len() as f64;
    100.0 * k >= min_support * n * (1.0 - 1e-9)
}

/// Concepts whose support is at least `min_support` percent, in input
/// order.
pub fn iceberg(concepts: &[Concept], min_support: f64) -> Vec<Concept> {
    concepts
        .iter()
        .filter(|c| meets_support(c, min_support))
        .cloned()
        .collect()
}

/// Covering relation over an arbitrary set of concepts.
///
/// Nodes are the concepts in canonical order; `covers` holds
/// `(child, parent)` index pairs where `parent` is an immediate successor
/// of `child` under `≼`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    concepts: Vec<Concept>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

impl HasseDiagram {
    /// Builds the transitive reduction of `≼` restricted to `concepts`.
    /// The concepts are sorted canonically first.
    pub fn from_concepts(mut concepts: Vec<Concept>) -> Self {
        sort_canonical(&mut concepts);
        let n = concepts.len();
        let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];

        for (i, child) in concepts.iter().enumerate() {
            let mut above: Vec<usize> = (0..n)
                .filter(|&j| child.extent().is_proper_subset(concepts[j].extent()))
                .collect();
            above.sort_by_key(|&j| (concepts[j].extent().len(), j));
            // An upper neighbour is a minimal element of `above`; any
            // non-minimal one sits over a smaller neighbour already kept.
            let mut kept: Vec<usize> = Vec::new();
            for j in above {
                if !kept
                    .iter()
                    .any(|&k| concepts[k].extent().is_subset(concepts[j].extent()))
                {
                    kept.push(j);
                }
            }
            kept.sort_unstable();
            for &j in &kept {
                lower[j].push(i);
            }
            upper[i] = kept;
        }

        let mut covers: Vec<(usize, usize)> = upper
            .iter()
            .enumerate()
            .flat_map(|(i, ps)| ps.iter().map(move |&p| (i, p)))
            .collect();
        covers.sort_unstable();
        HasseDiagram {
            concepts,
            covers,
            upper,
            lower,
        }
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// `(child, parent)` pairs, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Immediate successors (more general concepts) of node `i`.
    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    /// Immediate predecessors (more specific concepts) of node `i`.
    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// Nodes without a successor.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.upper[i].is_empty()).collect()
    }

    /// Nodes without a predecessor.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lower[i].is_empty()).collect()
    }

    /// Whether node `lo` reaches node `hi` by following covers upward
    /// (reflexive).
    pub fn reaches(&self, lo: usize, hi: usize) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![lo];
        while let Some(i) = stack.pop() {
            if i == hi {
                return true;
            }
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(self.upper[i].iter().copied().filter(|&p| !seen[p]));
        }
        false
    }

    /// Longest-path depth of every node measured from the maximal nodes.
    /// Node `i` sits at depth 0 when nothing covers it.
    pub fn depths(&self) -> Vec<usize> {
        // Canonical order extends the reverse of ≼, so parents precede
        // children and one forward pass suffices.
        let mut depth = vec![0usize; self.len()];
        for i in 0..self.len() {
            depth[i] = self.upper[i]
                .iter()
                .map(|&p| depth[p] + 1)
                .max()
                .unwrap_or(0);
        }
        depth
    }
}

/// A complete concept lattice with its top and bottom concepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    diagram: HasseDiagram,
    top: usize,
    bottom: usize,
}

impl ConceptLattice {
    /// Builds the lattice of a complete concept set.
    ///
    /// Every concept must be closed in `ctx`, no concept may repeat, the
    /// set must contain the top concept and be closed under pairwise
    /// meets. Meet closure together with the top implies join closure in a
    /// finite set, so the result is a lattice.
    pub fn build(ctx: &FormalContext, concepts: Vec<Concept>) -> Result<Self, LatticeError> {
        let mut extents: HashSet<&ObjectSet> = HashSet::with_capacity(concepts.len());
        for (index, c) in concepts.iter().enumerate() {
            if !c.is_valid_in(ctx) {
                return Err(if c.extent().dim() == ctx.object_count()
                    && c.intent().dim() == ctx.attribute_count()
                {
                    LatticeError::NotAConcept { index }
                } else {
                    LatticeError::ContextMismatch
                });
            }
            if !extents.insert(c.extent()) {
                return Err(LatticeError::Duplicate { index });
            }
        }
        if !extents.contains(&ctx.all_objects()) {
            return Err(LatticeError::Incomplete("top concept missing".into()));
        }
        let mut scratch = ctx.object_set([]);
        for (i, a) in concepts.iter().enumerate() {
            for b in &concepts[i + 1..] {
                a.extent().intersection_into(b.extent(), &mut scratch);
                if !extents.contains(&scratch) {
                    return Err(LatticeError::Incomplete(format!(
                        "meet of extents {:?} and {:?} is missing",
                        a.extent(),
                        b.extent()
                    )));
                }
            }
        }
        drop(extents);

        let diagram = HasseDiagram::from_concepts(concepts);
        let top = 0;
        let bottom = diagram.len() - 1;
        debug_assert!(diagram.concepts()[top].extent().is_full());
        debug_assert_eq!(diagram.minimal(), vec![bottom]);
        Ok(ConceptLattice {
            diagram,
            top,
            bottom,
        })
    }

    pub fn diagram(&self) -> &HasseDiagram {
        &self.diagram
    }

    pub fn concepts(&self) -> &[Concept] {
        self.diagram.concepts()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.diagram.covers()
    }

    pub fn top_index(&self) -> usize {
        self.top
    }

    pub fn bottom_index(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> &Concept {
        &self.concepts()[self.top]
    }

    pub fn bottom(&self) -> &Concept {
        &self.concepts()[self.bottom]
    }
}

#[derive(Debug, Clone)]
pub struct DotOptions {
    /// Graph name written after `digraph`.
    pub name: String,
    /// Append the support percentage (one decimal) to each node label.
    pub show_support: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            name: "lattice".into(),
            show_support: true,
        }
    }
}

fn dot_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// Renders a diagram as Graphviz DOT. Edges run from the more specific
/// concept to the more general one and `rankdir=BT` puts general concepts
/// on top. Node identifiers are canonical indices.
pub fn export_dot(diagram: &HasseDiagram, attribute_names: &[String], options: &DotOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(&options.name));
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=box, fontname=\"Helvetica\"];\n");
    for (i, c) in diagram.concepts().iter().enumerate() {
        let names: Vec<&str> = c.intent().iter().map(|m| attribute_names[m].as_str()).collect();
        let mut label = if names.is_empty() {
            "{}".to_string()
        } else {
            names.join("\n")
        };
        if options.show_support {
            let _ = write!(label, "\n{:.1}%", c.support_percent());
        }
        let _ = writeln!(out, "  {i} [label=\"{}\"];", dot_escape(&label));
    }
    for &(child, parent) in diagram.covers() {
        let _ = writeln!(out, "  {child} -> {parent};");
    }
    out.push_str("}\n");
    out
}
