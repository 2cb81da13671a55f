//! Positive/negative analysis of a labeled trait table.
//!
//! The table is binarized once with a schema inferred over all objects,
//! split into a positive and a negative context, and both are mined. Any
//! positive concept whose intent is also a concept intent of the negative
//! context is dropped; what remains are attribute patterns closed only
//! among positives. The survivors are then cut at a minimum support
//! measured against the positive context.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::binarize::{apply_schema, infer_schema, parse_traits, BinarizationSchema, BinarizeError, RoleConfig, TraitTable};
use crate::bits::AttributeSet;
use crate::context::FormalContext;
use crate::lattice::{iceberg, HasseDiagram};
use crate::mining::{enumerate_concepts_with, Concept, ConceptRecord, MiningError, MiningOptions};

#[derive(Debug, Error, PartialEq)]
pub enum ContrastError {
    #[error("empty {0} class")]
    EmptyClass(&'static str),
    #[error("{labels} labels for {objects} objects")]
    LabelCount { labels: usize, objects: usize },
    #[error("concept lists are over different attribute sets ({positive} vs {negative} attributes)")]
    AttributeMismatch { positive: usize, negative: usize },
    #[error("concept does not belong to the context")]
    ContextMismatch,
    #[error("coverage is undefined for a context without objects")]
    EmptyContext,
    #[error("minimum support {0} is outside [0, 100]")]
    SupportOutOfRange(f64),
    #[error("role config has no label column")]
    NoLabelColumn,
    #[error(transparent)]
    Binarize(#[from] BinarizeError),
}

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error("schema stage: {0}")]
    Schema(#[source] BinarizeError),
    #[error("split stage: {0}")]
    Split(#[source] ContrastError),
    #[error("mining stage ({class} context): {source}")]
    Mining {
        class: &'static str,
        #[source]
        source: MiningError,
    },
    #[error("reduction stage: {0}")]
    Reduce(#[source] ContrastError),
    #[error("iceberg stage: {0}")]
    Iceberg(#[source] ContrastError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

/// A trait table with one class label per object.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    table: TraitTable,
    labels: Vec<Label>,
}

impl LabeledDataset {
    pub fn new(table: TraitTable, labels: Vec<Label>) -> Result<Self, ContrastError> {
        if labels.len() != table.len() {
            return Err(ContrastError::LabelCount {
                labels: labels.len(),
                objects: table.len(),
            });
        }
        Ok(LabeledDataset { table, labels })
    }

    /// Reads a trait CSV whose label column is named in `config`. Cells
    /// equal to the configured positive value are positive; all others are
    /// negative.
    pub fn parse_csv(text: &str, config: &RoleConfig) -> Result<Self, ContrastError> {
        let spec = config.label.as_ref().ok_or(ContrastError::NoLabelColumn)?;
        let parsed = parse_traits(text, config)?;
        let labels = parsed
            .labels
            .unwrap_or_default()
            .iter()
            .map(|v| {
                if *v == spec.positive {
                    Label::Positive
                } else {
                    Label::Negative
                }
            })
            .collect();
        Self::new(parsed.table, labels)
    }

    pub fn table(&self) -> &TraitTable {
        &self.table
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn indices(&self, label: Label) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i] == label)
            .collect()
    }
}

/// Binarizes the whole dataset with `schema` and splits it into the
/// positive and negative contexts, keeping the original object order
/// within each class.
pub fn split_by_label(
    ds: &LabeledDataset,
    schema: &BinarizationSchema,
) -> Result<(FormalContext, FormalContext), ContrastError> {
    let pos = ds.indices(Label::Positive);
    let neg = ds.indices(Label::Negative);
    if pos.is_empty() {
        return Err(ContrastError::EmptyClass("positive"));
    }
    if neg.is_empty() {
        return Err(ContrastError::EmptyClass("negative"));
    }
    let full = apply_schema(&ds.table, schema)?;
    Ok((full.select_objects(&pos), full.select_objects(&neg)))
}

/// Positive concepts whose intent is not the intent of any negative
/// concept, in input order.
pub fn contrast_reduce(positive: &[Concept], negative: &[Concept]) -> Result<Vec<Concept>, ContrastError> {
    let width = |cs: &[Concept]| cs.first().map(|c| c.intent().dim());
    if let (Some(p), Some(n)) = (width(positive), width(negative)) {
        if p != n {
            return Err(ContrastError::AttributeMismatch {
                positive: p,
                negative: n,
            });
        }
    }
    let negative_intents: HashSet<&AttributeSet> = negative.iter().map(Concept::intent).collect();
    Ok(positive
        .iter()
        .filter(|c| !negative_intents.contains(c.intent()))
        .cloned()
        .collect())
}

/// Percentage of the context's objects lying in at least one extent.
pub fn coverage(concepts: &[Concept], ctx: &FormalContext) -> Result<f64, ContrastError> {
    if ctx.object_count() == 0 {
        return Err(ContrastError::EmptyContext);
    }
    let mut covered = ctx.object_set([]);
    for c in concepts {
        if c.extent().dim() != ctx.object_count() {
            return Err(ContrastError::ContextMismatch);
        }
        covered.union_with(c.extent());
    }
    Ok(100.0 * covered.len() as f64 / ctx.object_count() as f64)
}

/// Attribute names produced for missing values end with this suffix.
pub const MISSING_SUFFIX: &str = "=NAN";

/// Whether any attribute of the concept's intent stands for a missing
/// value.
pub fn is_missing_data(ctx: &FormalContext, concept: &Concept) -> bool {
    concept
        .intent()
        .iter()
        .any(|m| ctx.attribute_names()[m].ends_with(MISSING_SUFFIX))
}

pub fn check_min_support(min_support: f64) -> Result<f64, ContrastError> {
    if (0.0..=100.0).contains(&min_support) {
        Ok(min_support)
    } else {
        Err(ContrastError::SupportOutOfRange(min_support))
    }
}

/// Everything the positive/negative analysis produces.
#[derive(Debug, Clone)]
pub struct ContrastReport {
    pub schema: BinarizationSchema,
    pub positive_context: FormalContext,
    pub negative_object_count: usize,
    pub positive_concept_count: usize,
    pub negative_concept_count: usize,
    /// Positive concepts surviving contrast reduction, canonical order.
    pub reduced: Vec<Concept>,
    pub removed_count: usize,
    pub min_support: f64,
    /// Reduced concepts with support at least `min_support` in the
    /// positive context.
    pub iceberg: Vec<Concept>,
    /// Coverage of positive objects by all iceberg concepts.
    pub iceberg_coverage: f64,
    /// Coverage of positive objects by the missing-data iceberg concepts.
    pub missing_data_coverage: f64,
}

impl ContrastReport {
    pub fn is_missing_data(&self, concept: &Concept) -> bool {
        is_missing_data(&self.positive_context, concept)
    }

    pub fn missing_data_count(&self) -> usize {
        self.iceberg.iter().filter(|c| self.is_missing_data(c)).count()
    }

    /// Order diagram of the iceberg concepts. Reduction can remove meets
    /// and joins, so this is a poset diagram rather than a lattice.
    pub fn iceberg_diagram(&self) -> HasseDiagram {
        HasseDiagram::from_concepts(self.iceberg.clone())
    }

    /// JSON document with every report field; concepts use the JSON Lines
    /// record layout plus a `missing_data` flag.
    pub fn to_json(&self, provenance: &Provenance) -> String {
        let records = |cs: &[Concept]| -> Vec<ReportConcept> {
            cs.iter()
                .map(|c| ReportConcept {
                    record: ConceptRecord::new(&self.positive_context, c),
                    missing_data: self.is_missing_data(c),
                })
                .collect()
        };
        let doc = ReportDocument {
            positive_objects: self.positive_context.object_count(),
            negative_objects: self.negative_object_count,
            attributes: self.positive_context.attribute_count(),
            positive_concepts: self.positive_concept_count,
            negative_concepts: self.negative_concept_count,
            reduced_concepts: self.reduced.len(),
            removed_concepts: self.removed_count,
            min_support: self.min_support,
            iceberg_concepts: self.iceberg.len(),
            missing_data_concepts: self.missing_data_count(),
            coverage: Coverage {
                iceberg: self.iceberg_coverage,
                missing_data: self.missing_data_coverage,
            },
            iceberg: records(&self.iceberg),
            reduced: records(&self.reduced),
            schema: &self.schema,
            provenance,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report is serializable");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    /// SHA-256 of the input file, hex encoded.
    pub input_sha256: Option<String>,
    pub min_support: f64,
    pub tool: String,
    pub version: String,
}

impl Provenance {
    pub fn new(input_sha256: Option<String>, min_support: f64) -> Self {
        Provenance {
            input_sha256,
            min_support,
            tool: "fca".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Serialize)]
struct ReportConcept {
    #[serde(flatten)]
    record: ConceptRecord,
    missing_data: bool,
}

#[derive(Serialize)]
struct Coverage {
    iceberg: f64,
    missing_data: f64,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    positive_objects: usize,
    negative_objects: usize,
    attributes: usize,
    positive_concepts: usize,
    negative_concepts: usize,
    reduced_concepts: usize,
    removed_concepts: usize,
    min_support: f64,
    iceberg_concepts: usize,
    missing_data_concepts: usize,
    coverage: Coverage,
    iceberg: Vec<ReportConcept>,
    reduced: Vec<ReportConcept>,
    schema: &'a BinarizationSchema,
    provenance: &'a Provenance,
}

/// Schema inference, split, mining of both classes, reduction, iceberg
/// cut and coverage.
pub fn run_pipeline(
    ds: &LabeledDataset,
    min_support: f64,
    options: &MiningOptions,
) -> Result<ContrastReport, PipelineError> {
    check_min_support(min_support).map_err(PipelineError::Iceberg)?;
    let schema = infer_schema(&ds.table).map_err(PipelineError::Schema)?;
    let (pos_ctx, neg_ctx) = split_by_label(ds, &schema).map_err(PipelineError::Split)?;

    let mine = |ctx: &FormalContext, class: &'static str| {
        enumerate_concepts_with(ctx, options).map_err(|source| PipelineError::Mining { class, source })
    };
    #[cfg(feature = "parallel")]
    let (pos, neg) = rayon::join(|| mine(&pos_ctx, "positive"), || mine(&neg_ctx, "negative"));
    #[cfg(not(feature = "parallel"))]
    let (pos, neg) = (mine(&pos_ctx, "positive"), mine(&neg_ctx, "negative"));
    let (pos, neg) = (pos?, neg?);

    let reduced = contrast_reduce(&pos, &neg).map_err(PipelineError::Reduce)?;
    let top = iceberg(&reduced, min_support);
    let missing: Vec<Concept> = top
        .iter()
        .filter(|c| is_missing_data(&pos_ctx, c))
        .cloned()
        .collect();
    let iceberg_coverage = coverage(&top, &pos_ctx).map_err(PipelineError::Iceberg)?;
    let missing_data_coverage = coverage(&missing, &pos_ctx).map_err(PipelineError::Iceberg)?;

    Ok(ContrastReport {
        schema,
        negative_object_count: neg_ctx.object_count(),
        positive_concept_count: pos.len(),
        negative_concept_count: neg.len(),
        removed_count: pos.len() - reduced.len(),
        reduced,
        min_support,
        iceberg: top,
        iceberg_coverage,
        missing_data_coverage,
        positive_context: pos_ctx,
    })
}
