//! Enumeration of all formal concepts of a context.
//!
//! [`enumerate_concepts`] runs Close-by-One: starting from the top concept,
//! each concept `(A, B)` is extended by every attribute `j` after its
//! generator position that is not already in `B`. The candidate
//! `(A ∩ Rj, (A ∩ Rj)')` is accepted only if its intent agrees with `B` on
//! all attributes before `j`; this canonicity test makes every concept
//! reachable from exactly one parent, so no duplicates are produced and no
//! lookup structure is needed.
//!
//! [`brute_force_concepts`] closes every attribute subset and is kept as an
//! independent oracle for small contexts.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{AttributeSet, ObjectSet};
use crate::context::{ContextError, FormalContext};

/// Largest attribute count accepted by [`brute_force_concepts`].
pub const BRUTE_FORCE_ATTRIBUTE_LIMIT: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MiningError {
    #[error("concept limit of {limit} exceeded after {found} concepts")]
    Capacity { limit: usize, found: usize },
    #[error("brute force enumeration supports at most {limit} attributes, got {count}")]
    TooManyAttributes { count: usize, limit: usize },
    #[error("support is undefined for a context without objects")]
    EmptyContext,
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// A formal concept: an extent and intent that derive to each other.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    extent: ObjectSet,
    intent: AttributeSet,
}

impl Concept {
    /// Pairs an extent with an intent without checking closedness. Use
    /// [`Concept::from_intent`] or [`Concept::is_valid_in`] when the pair
    /// comes from outside the enumerator.
    pub fn new(extent: ObjectSet, intent: AttributeSet) -> Self {
        Concept { extent, intent }
    }

    /// The concept generated by an attribute set: `(B', B'')`.
    pub fn from_intent(ctx: &FormalContext, attrs: &AttributeSet) -> Result<Self, ContextError> {
        let extent = ctx.derive_intent(attrs)?;
        let intent = ctx.common_attributes(&extent);
        Ok(Concept { extent, intent })
    }

    /// The concept generated by an object set: `(A'', A')`.
    pub fn from_extent(ctx: &FormalContext, objects: &ObjectSet) -> Result<Self, ContextError> {
        let intent = ctx.derive_extent(objects)?;
        let extent = ctx.common_objects(&intent);
        Ok(Concept { extent, intent })
    }

    pub fn extent(&self) -> &ObjectSet {
        &self.extent
    }

    pub fn intent(&self) -> &AttributeSet {
        &self.intent
    }

    /// Percentage of the context's objects in the extent. Zero when the
    /// context has no objects.
    pub fn support_percent(&self) -> f64 {
        match self.extent.dim() {
            0 => 0.0,
            n => 100.0 * self.extent.len() as f64 / n as f64,
        }
    }

    /// True when the concept lives in a context of `ctx`'s shape and both
    /// derivations map its parts onto each other.
    pub fn is_valid_in(&self, ctx: &FormalContext) -> bool {
        self.fits(ctx)
            && ctx.common_attributes(&self.extent) == self.intent
            && ctx.common_objects(&self.intent) == self.extent
    }

    pub(crate) fn fits(&self, ctx: &FormalContext) -> bool {
        self.extent.dim() == ctx.object_count() && self.intent.dim() == ctx.attribute_count()
    }

    /// Canonical ordering: colexicographic on intents, so the top concept
    /// comes first and the bottom concept last.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.intent.colex_cmp(&other.intent)
    }
}

/// `100 × |extent| / |objects|`.
pub fn support(ctx: &FormalContext, concept: &Concept) -> Result<f64, MiningError> {
    if ctx.object_count() == 0 {
        return Err(MiningError::EmptyContext);
    }
    if !concept.fits(ctx) {
        return Err(ContextError::DimensionMismatch {
            kind: "object",
            expected: ctx.object_count(),
            found: concept.extent.dim(),
        }
        .into());
    }
    Ok(concept.support_percent())
}

#[derive(Debug, Clone, Default)]
pub struct MiningOptions {
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Abort with [`MiningError::Capacity`] once more concepts than this
    /// have been found.
    pub max_concepts: Option<usize>,
}

/// All concepts of `ctx` in canonical order.
pub fn enumerate_concepts(ctx: &FormalContext) -> Vec<Concept> {
    enumerate_concepts_with(ctx, &MiningOptions::default())
        .expect("unbounded enumeration on the global pool cannot fail")
}

pub fn enumerate_concepts_with(
    ctx: &FormalContext,
    options: &MiningOptions,
) -> Result<Vec<Concept>, MiningError> {
    let run = || {
        let miner = Miner::new(ctx, options.max_concepts);
        let mut concepts = miner.run();
        if miner.overflowed.load(AtomicOrdering::Relaxed) {
            return Err(MiningError::Capacity {
                limit: options.max_concepts.unwrap_or(usize::MAX),
                found: miner.found.load(AtomicOrdering::Relaxed),
            });
        }
        sort_canonical(&mut concepts);
        Ok(concepts)
    };
    match options.threads {
        #[cfg(feature = "parallel")]
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| MiningError::ThreadPool(e.to_string()))?
            .install(run),
        _ => run(),
    }
}

pub fn sort_canonical(concepts: &mut [Concept]) {
    #[cfg(feature = "parallel")]
    {
        use rayon::slice::ParallelSliceMut;
        concepts.par_sort_unstable_by(Concept::canonical_cmp);
    }
    #[cfg(not(feature = "parallel"))]
    concepts.sort_unstable_by(Concept::canonical_cmp);
}

/// Subtrees at this depth or shallower are handed to the worker pool.
#[cfg(feature = "parallel")]
const PARALLEL_DEPTH: usize = 3;

struct Miner<'a> {
    ctx: &'a FormalContext,
    limit: usize,
    found: AtomicUsize,
    overflowed: AtomicBool,
}

impl<'a> Miner<'a> {
    fn new(ctx: &'a FormalContext, limit: Option<usize>) -> Self {
        Miner {
            ctx,
            limit: limit.unwrap_or(usize::MAX),
            found: AtomicUsize::new(0),
            overflowed: AtomicBool::new(false),
        }
    }

    fn run(&self) -> Vec<Concept> {
        let top = Concept::from_extent(self.ctx, &self.ctx.all_objects())
            .expect("full object set has the context's dimension");
        let mut out = Vec::new();
        self.visit(top, 0, 0, &mut out);
        out
    }

    fn count_one(&self) -> bool {
        let n = self.found.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if n > self.limit {
            self.overflowed.store(true, AtomicOrdering::Relaxed);
            return false;
        }
        true
    }

    /// Canonical children of `parent` generated from attributes `start..`.
    fn children(&self, parent: &Concept, start: usize) -> Vec<(Concept, usize)> {
        let ctx = self.ctx;
        let mut out = Vec::new();
        let mut extent = ObjectSet::empty(ctx.object_count());
        for j in start..ctx.attribute_count() {
            if parent.intent.contains(j) {
                continue;
            }
            parent.extent.intersection_into(ctx.column(j), &mut extent);
            let intent = ctx.common_attributes(&extent);
            if intent.agrees_below(&parent.intent, j) {
                out.push((Concept::new(extent.clone(), intent), j + 1));
            }
        }
        out
    }

    #[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
    fn visit(&self, concept: Concept, start: usize, depth: usize, out: &mut Vec<Concept>) {
        if self.overflowed.load(AtomicOrdering::Relaxed) || !self.count_one() {
            return;
        }
        let children = self.children(&concept, start);
        out.push(concept);

        #[cfg(feature = "parallel")]
        if depth < PARALLEL_DEPTH && children.len() > 1 {
            use rayon::prelude::*;
            let parts: Vec<Vec<Concept>> = children
                .into_par_iter()
                .map(|(child, next)| {
                    let mut local = Vec::new();
                    self.visit(child, next, depth + 1, &mut local);
                    local
                })
                .collect();
            out.extend(parts.into_iter().flatten());
            return;
        }

        for (child, next) in children {
            self.visit(child, next, depth + 1, out);
        }
    }
}

/// Reference enumeration: close every subset of the attributes and keep
/// the fixpoints. Exponential in the attribute count.
pub fn brute_force_concepts(ctx: &FormalContext) -> Result<Vec<Concept>, MiningError> {
    let m = ctx.attribute_count();
    if m > BRUTE_FORCE_ATTRIBUTE_LIMIT {
        return Err(MiningError::TooManyAttributes {
            count: m,
            limit: BRUTE_FORCE_ATTRIBUTE_LIMIT,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let attrs = AttributeSet::from_indices(m, (0..m).filter(|j| mask >> j & 1 == 1));
        let extent = ctx.common_objects(&attrs);
        let closed = ctx.common_attributes(&extent);
        if closed == attrs {
            out.push(Concept::new(extent, closed));
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// One JSON Lines record: names in index order and support in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptRecord {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
    pub support: f64,
}

impl ConceptRecord {
    pub fn new(ctx: &FormalContext, concept: &Concept) -> Self {
        ConceptRecord {
            extent: concept
                .extent
                .iter()
                .map(|g| ctx.object_names()[g].clone())
                .collect(),
            intent: concept
                .intent
                .iter()
                .map(|m| ctx.attribute_names()[m].clone())
                .collect(),
            support: concept.support_percent(),
        }
    }
}

/// Serializes concepts as JSON Lines, one record per line.
pub fn write_jsonl(ctx: &FormalContext, concepts: &[Concept]) -> String {
    let mut out = String::new();
    for c in concepts {
        out.push_str(
            &serde_json::to_string(&ConceptRecord::new(ctx, c)).expect("record is serializable"),
        );
        out.push('\n');
    }
    out
}
