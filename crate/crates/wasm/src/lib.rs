//! WebAssembly bindings for the lattice explorer page in `www/`.
//!
//! Every exported function is a thin wrapper over a plain Rust function that
//! returns JSON, so the logic is tested natively.

use fca_core::generate::random_context;
use fca_core::{
    enumerate_concepts_with, iceberg, parse_binary_csv, parse_cxt, write_binary_csv,
    FormalContext, HasseDiagram, MiningError, MiningOptions,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest lattice the page will lay out.
pub const MAX_CONCEPTS: usize = 5_000;

#[derive(Debug, Serialize)]
pub struct Node {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
    pub support: f64,
    /// Longest path to a maximal node; 0 is the top row.
    pub layer: usize,
    /// Horizontal position in [0, 1].
    pub x: f64,
}

#[derive(Debug, Serialize)]
pub struct Layout {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub total_concepts: usize,
    pub layers: usize,
    pub nodes: Vec<Node>,
    /// `[lower, upper]` node index pairs.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct Table {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    /// Row-major incidence.
    pub rows: Vec<Vec<bool>>,
}

#[derive(Debug, Serialize)]
pub struct Closure {
    pub intent: Vec<usize>,
    pub extent: Vec<usize>,
}

/// Accepts Burmeister `.cxt` (first line `B`) or a binary CSV with a
/// header row.
pub fn parse_context(text: &str) -> Result<FormalContext, String> {
    let first = text.lines().next().unwrap_or("").trim();
    let parsed = if first == "B" {
        parse_cxt(text)
    } else {
        parse_binary_csv(text)
    };
    parsed.map_err(|e| e.to_string())
}

/// The incidence table of `text`, for the page's grid editor.
pub fn table(text: &str) -> Result<Table, String> {
    let ctx = parse_context(text)?;
    let rows = (0..ctx.object_count())
        .map(|g| (0..ctx.attribute_count()).map(|m| ctx.incident(g, m)).collect())
        .collect();
    Ok(Table {
        objects: ctx.object_names().to_vec(),
        attributes: ctx.attribute_names().to_vec(),
        rows,
    })
}

fn layout(diagram: &HasseDiagram) -> (Vec<usize>, Vec<f64>) {
    let depths = diagram.depths();
    let layers = depths.iter().max().map_or(0, |d| d + 1);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); layers];
    for (i, &d) in depths.iter().enumerate() {
        rows[d].push(i);
    }
    // Order each row by the mean position of its upper covers, top-down.
    let mut x = vec![0.5; diagram.len()];
    for row in &mut rows {
        let key = |i: usize| {
            let up = diagram.upper_covers(i);
            if up.is_empty() {
                0.5
            } else {
                up.iter().map(|&u| x[u]).sum::<f64>() / up.len() as f64
            }
        };
        let mut keyed: Vec<(f64, usize)> = row.iter().map(|&i| (key(i), i)).collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let width = keyed.len() as f64;
        for (slot, &(_, i)) in keyed.iter().enumerate() {
            x[i] = (slot as f64 + 0.5) / width;
        }
        *row = keyed.into_iter().map(|(_, i)| i).collect();
    }
    (depths, x)
}

/// Mines `text`, keeps concepts with at least `min_support` percent and
/// lays out their order diagram in rows.
pub fn lattice(text: &str, min_support: f64) -> Result<Layout, String> {
    if !(0.0..=100.0).contains(&min_support) {
        return Err(format!("minimum support {min_support} is outside [0, 100]"));
    }
    let ctx = parse_context(text)?;
    let options = MiningOptions {
        threads: None,
        max_concepts: Some(MAX_CONCEPTS),
    };
    let concepts = enumerate_concepts_with(&ctx, &options).map_err(|e| match e {
        MiningError::Capacity { limit, .. } => {
            format!("more than {limit} concepts; use a smaller context")
        }
        other => other.to_string(),
    })?;
    let total_concepts = concepts.len();
    let diagram = HasseDiagram::from_concepts(iceberg(&concepts, min_support));
    let (depths, x) = layout(&diagram);
    let nodes = diagram
        .concepts()
        .iter()
        .enumerate()
        .map(|(i, c)| Node {
            extent: c.extent().to_vec(),
            intent: c.intent().to_vec(),
            support: c.support_percent(),
            layer: depths[i],
            x: x[i],
        })
        .collect();
    Ok(Layout {
        objects: ctx.object_names().to_vec(),
        attributes: ctx.attribute_names().to_vec(),
        total_concepts,
        layers: depths.iter().max().map_or(0, |d| d + 1),
        nodes,
        edges: diagram.covers().to_vec(),
    })
}

/// Closure of an attribute selection together with its extent.
pub fn closure(text: &str, attributes: &[usize]) -> Result<Closure, String> {
    let ctx = parse_context(text)?;
    if let Some(&bad) = attributes.iter().find(|&&a| a >= ctx.attribute_count()) {
        return Err(format!("attribute index {bad} out of range"));
    }
    let selected = ctx.attribute_set(attributes.iter().copied());
    let extent = ctx.derive_intent(&selected).map_err(|e| e.to_string())?;
    let intent = ctx.derive_extent(&extent).map_err(|e| e.to_string())?;
    Ok(Closure {
        intent: intent.to_vec(),
        extent: extent.to_vec(),
    })
}

/// A seeded random context as binary CSV.
pub fn random_csv(objects: usize, attributes: usize, density: f64, seed: u64) -> Result<String, String> {
    if !(0.0..=1.0).contains(&density) {
        return Err(format!("density {density} is outside [0, 1]"));
    }
    if objects > 200 || attributes > 26 {
        return Err("at most 200 objects and 26 attributes".into());
    }
    Ok(write_binary_csv(&random_context(objects, attributes, density, seed)))
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = tableJson)]
pub fn table_json(text: &str) -> Result<String, JsError> {
    to_json(table(text))
}

#[wasm_bindgen(js_name = latticeJson)]
pub fn lattice_json(text: &str, min_support: f64) -> Result<String, JsError> {
    to_json(lattice(text, min_support))
}

#[wasm_bindgen(js_name = closureJson)]
pub fn closure_json(text: &str, attributes: Vec<u32>) -> Result<String, JsError> {
    let attributes: Vec<usize> = attributes.into_iter().map(|a| a as usize).collect();
    to_json(closure(text, &attributes))
}

#[wasm_bindgen(js_name = randomContext)]
pub fn random_context_csv(objects: u32, attributes: u32, density: f64, seed: u32) -> Result<String, JsError> {
    random_csv(objects as usize, attributes as usize, density, u64::from(seed)).map_err(|e| JsError::new(&e))
}
