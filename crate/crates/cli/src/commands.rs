use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fca_core::binarize::{apply_schema, infer_schema, parse_trait_csv, BinarizationSchema, BinarizeError, RoleConfig};
use fca_core::contrast::{run_pipeline, LabeledDataset, PipelineError, Provenance};
use fca_core::generate::random_context;
use fca_core::mining::write_jsonl;
use fca_core::{
    enumerate_concepts_with, export_dot, iceberg, parse_binary_csv, parse_cxt, write_binary_csv,
    write_cxt, ConceptLattice, ContextError, DotOptions, FormalContext, HasseDiagram, MiningError,
    MiningOptions,
};
use sha2::{Digest, Sha256};

use crate::{Command, MiningArgs, TableFormat};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<MiningError> for Failure {
    fn from(e: MiningError) -> Self {
        let code = if matches!(e, MiningError::Capacity { .. }) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Mining {
                source: MiningError::Capacity { .. },
                ..
            } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn with_path<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(with_path(path))
}

/// Fails early when an output file could not be created.
fn check_output(path: Option<&PathBuf>) -> Result<(), Failure> {
    if let Some(path) = path {
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return Err(Failure::input(format!(
                    "{}: output directory does not exist",
                    path.display()
                )));
            }
        }
        if path.is_dir() {
            return Err(Failure::input(format!("{}: is a directory", path.display())));
        }
    }
    Ok(())
}

fn emit(path: Option<&PathBuf>, data: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, data).map_err(with_path(path)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}

fn load_context(path: &Path) -> Result<FormalContext, Failure> {
    let text = read(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let parsed: Result<FormalContext, ContextError> = if is_csv {
        parse_binary_csv(&text)
    } else {
        parse_cxt(&text)
    };
    parsed.map_err(with_path(path))
}

fn render(ctx: &FormalContext, format: TableFormat) -> String {
    match format {
        TableFormat::Cxt => write_cxt(ctx),
        TableFormat::Csv => write_binary_csv(ctx),
    }
}

fn options(args: &MiningArgs) -> Result<MiningOptions, Failure> {
    if args.threads == Some(0) {
        return Err(Failure::input("--threads must be at least 1"));
    }
    Ok(MiningOptions {
        threads: args.threads,
        max_concepts: args.max_concepts,
    })
}

fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Convert { input, to, output } => {
            check_output(output.as_ref())?;
            let ctx = load_context(&input)?;
            emit(output.as_ref(), &render(&ctx, to))
        }

        Command::Binarize {
            input,
            roles,
            schema,
            schema_out,
            format,
            output,
        } => {
            check_output(output.as_ref())?;
            check_output(schema_out.as_ref())?;
            let config = RoleConfig::from_json(&read(&roles)?).map_err(with_path(&roles))?;
            let text = read(&input)?;
            let table = parse_trait_csv(&text, &config).map_err(with_path(&input))?;
            let schema = match &schema {
                Some(path) => BinarizationSchema::from_json(&read(path)?).map_err(with_path(path))?,
                None => infer_schema(&table).map_err(with_path(&input))?,
            };
            let ctx = apply_schema(&table, &schema)
                .map_err(|e: BinarizeError| Failure::input(format!("{}: {e}", input.display())))?;
            if let Some(path) = &schema_out {
                fs::write(path, schema.to_json()).map_err(with_path(path))?;
            }
            emit(output.as_ref(), &render(&ctx, format))?;
            eprintln!(
                "binarized {} objects into {} attributes from {} columns",
                ctx.object_count(),
                ctx.attribute_count(),
                schema.columns.len()
            );
            Ok(())
        }

        Command::Mine {
            input,
            min_support,
            mining,
            output,
        } => {
            check_output(output.as_ref())?;
            let opts = options(&mining)?;
            let ctx = load_context(&input)?;
            let started = Instant::now();
            let mut concepts = enumerate_concepts_with(&ctx, &opts)?;
            let total = concepts.len();
            if let Some(min) = min_support {
                concepts = iceberg(&concepts, min);
            }
            let elapsed = started.elapsed();
            emit(output.as_ref(), &write_jsonl(&ctx, &concepts))?;
            eprintln!(
                "{total} concepts ({} written) in {:.3}s",
                concepts.len(),
                elapsed.as_secs_f64()
            );
            Ok(())
        }

        Command::Lattice {
            input,
            min_support,
            no_support,
            mining,
            output,
        } => {
            check_output(output.as_ref())?;
            let opts = options(&mining)?;
            let ctx = load_context(&input)?;
            let started = Instant::now();
            let concepts = enumerate_concepts_with(&ctx, &opts)?;
            let diagram = match min_support {
                Some(min) => HasseDiagram::from_concepts(iceberg(&concepts, min)),
                None => ConceptLattice::build(&ctx, concepts)
                    .map_err(|e| Failure::input(e.to_string()))?
                    .diagram()
                    .clone(),
            };
            let dot = export_dot(
                &diagram,
                ctx.attribute_names(),
                &DotOptions {
                    show_support: !no_support,
                    ..DotOptions::default()
                },
            );
            emit(output.as_ref(), &dot)?;
            eprintln!(
                "{} nodes, {} edges in {:.3}s",
                diagram.len(),
                diagram.covers().len(),
                started.elapsed().as_secs_f64()
            );
            Ok(())
        }

        Command::Contrast {
            input,
            roles,
            min_support,
            dot,
            mining,
            output,
        } => {
            check_output(output.as_ref())?;
            check_output(dot.as_ref())?;
            let opts = options(&mining)?;
            let config = RoleConfig::from_json(&read(&roles)?).map_err(with_path(&roles))?;
            let text = read(&input)?;
            let ds = LabeledDataset::parse_csv(&text, &config).map_err(with_path(&input))?;
            let started = Instant::now();
            let report = run_pipeline(&ds, min_support, &opts)?;
            let provenance = Provenance::new(Some(sha256_hex(text.as_bytes())), min_support);
            emit(output.as_ref(), &report.to_json(&provenance))?;
            if let Some(path) = &dot {
                let rendered = export_dot(
                    &report.iceberg_diagram(),
                    report.positive_context.attribute_names(),
                    &DotOptions {
                        name: "iceberg".into(),
                        show_support: true,
                    },
                );
                fs::write(path, rendered).map_err(with_path(path))?;
            }
            eprintln!(
                "positive {} concepts, negative {}, reduced {} ({} removed), iceberg {} at {}%, coverage {:.1}% (missing-data {:.1}%) in {:.3}s",
                report.positive_concept_count,
                report.negative_concept_count,
                report.reduced.len(),
                report.removed_count,
                report.iceberg.len(),
                min_support,
                report.iceberg_coverage,
                report.missing_data_coverage,
                started.elapsed().as_secs_f64()
            );
            Ok(())
        }

        Command::Gen {
            objects,
            attributes,
            density,
            seed,
            format,
            output,
        } => {
            check_output(output.as_ref())?;
            let ctx = random_context(objects, attributes, density, seed);
            emit(output.as_ref(), &render(&ctx, format))?;
            eprintln!(
                "generated {objects}x{attributes} context with {} incidences",
                ctx.incidence_count()
            );
            Ok(())
        }
    }
}
