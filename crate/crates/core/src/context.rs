//! Formal contexts, the two derivation operators, and context file formats.
//!
//! Two formats are supported. The Burmeister `.cxt` layout:
//!
//! ```text
//! B
//!
//! <object count>
//! <attribute count>
//!
//! <object names, one per line>
//! <attribute names, one per line>
//! <one row per object over {X, .}>
//! ```
//!
//! and a binary CSV table whose header row holds attribute names (the first
//! header cell is a corner label and is ignored) and whose first column holds
//! object names. CSV cells may be `0`/`1` or `.`/`X`.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::{AttributeSet, ObjectSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("line {line}: {message}")]
    Cxt { line: usize, message: String },
    #[error("csv row {row}, column {column}: {message}")]
    Csv {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate {kind} name {name:?}")]
    DuplicateName { kind: &'static str, name: String },
    #[error("{kind} set has dimension {found}, context has {expected}")]
    DimensionMismatch {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("incidence has {rows} rows for {objects} objects")]
    Shape { rows: usize, objects: usize },
}

/// A formal context `(objects, attributes, incidence)`.
///
/// The incidence is stored twice: one bit row per object over attributes
/// and one bit column per attribute over objects. The context is immutable
/// once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    object_names: Vec<String>,
    attribute_names: Vec<String>,
    rows: Vec<AttributeSet>,
    cols: Vec<ObjectSet>,
}

fn check_unique(kind: &'static str, names: &[String]) -> Result<(), ContextError> {
    let mut seen = HashSet::with_capacity(names.len());
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(ContextError::DuplicateName {
                kind,
                name: name.clone(),
            });
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from names and per-object attribute rows.
    pub fn new(
        object_names: Vec<String>,
        attribute_names: Vec<String>,
        rows: Vec<AttributeSet>,
    ) -> Result<Self, ContextError> {
        check_unique("object", &object_names)?;
        check_unique("attribute", &attribute_names)?;
        if rows.len() != object_names.len() {
            return Err(ContextError::Shape {
                rows: rows.len(),
                objects: object_names.len(),
            });
        }
        let m = attribute_names.len();
        if let Some(bad) = rows.iter().find(|r| r.dim() != m) {
            return Err(ContextError::DimensionMismatch {
                kind: "attribute",
                expected: m,
                found: bad.dim(),
            });
        }
        let n = object_names.len();
        let mut cols = vec![ObjectSet::empty(n); m];
        for (g, row) in rows.iter().enumerate() {
            for a in row {
                cols[a].insert(g);
            }
        }
        Ok(FormalContext {
            object_names,
            attribute_names,
            rows,
            cols,
        })
    }

    /// Builds a context from a boolean matrix, naming objects `g0, g1, …`
    /// and attributes `m0, m1, …`.
    pub fn from_matrix(matrix: &[Vec<bool>], attributes: usize) -> Self {
        let rows = matrix
            .iter()
            .map(|r| {
                AttributeSet::from_indices(
                    attributes,
                    r.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j),
                )
            })
            .collect();
        let objects = (0..matrix.len()).map(|i| format!("g{i}")).collect();
        let attrs = (0..attributes).map(|j| format!("m{j}")).collect();
        Self::new(objects, attrs, rows).expect("generated names are unique")
    }

    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    /// The attributes of object `g` (`gR`).
    pub fn row(&self, g: usize) -> &AttributeSet {
        &self.rows[g]
    }

    /// The objects having attribute `m` (`Rm`).
    pub fn column(&self, m: usize) -> &ObjectSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[AttributeSet] {
        &self.rows
    }

    pub fn columns(&self) -> &[ObjectSet] {
        &self.cols
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(AttributeSet::len).sum()
    }

    pub fn all_objects(&self) -> ObjectSet {
        ObjectSet::full(self.object_count())
    }

    pub fn all_attributes(&self) -> AttributeSet {
        AttributeSet::full(self.attribute_count())
    }

    pub fn object_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> ObjectSet {
        ObjectSet::from_indices(self.object_count(), indices)
    }

    pub fn attribute_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> AttributeSet {
        AttributeSet::from_indices(self.attribute_count(), indices)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_names.iter().position(|n| n == name)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|n| n == name)
    }

    fn check_objects(&self, set: &ObjectSet) -> Result<(), ContextError> {
        if set.dim() != self.object_count() {
            return Err(ContextError::DimensionMismatch {
                kind: "object",
                expected: self.object_count(),
                found: set.dim(),
            });
        }
        Ok(())
    }

    fn check_attributes(&self, set: &AttributeSet) -> Result<(), ContextError> {
        if set.dim() != self.attribute_count() {
            return Err(ContextError::DimensionMismatch {
                kind: "attribute",
                expected: self.attribute_count(),
                found: set.dim(),
            });
        }
        Ok(())
    }

    /// Attributes shared by every object of `extent`. The empty object set
    /// derives to all attributes.
    pub fn derive_extent(&self, extent: &ObjectSet) -> Result<AttributeSet, ContextError> {
        self.check_objects(extent)?;
        Ok(self.common_attributes(extent))
    }

    /// Objects having every attribute of `intent`. The empty attribute set
    /// derives to all objects.
    pub fn derive_intent(&self, intent: &AttributeSet) -> Result<ObjectSet, ContextError> {
        self.check_attributes(intent)?;
        Ok(self.common_objects(intent))
    }

    pub fn close_attributes(&self, attrs: &AttributeSet) -> Result<AttributeSet, ContextError> {
        self.check_attributes(attrs)?;
        Ok(self.common_attributes(&self.common_objects(attrs)))
    }

    pub fn close_objects(&self, objects: &ObjectSet) -> Result<ObjectSet, ContextError> {
        self.check_objects(objects)?;
        Ok(self.common_objects(&self.common_attributes(objects)))
    }

    pub(crate) fn common_attributes(&self, extent: &ObjectSet) -> AttributeSet {
        let mut out = self.all_attributes();
        for g in extent {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    pub(crate) fn common_objects(&self, intent: &AttributeSet) -> ObjectSet {
        let mut out = self.all_objects();
        for m in intent {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// Returns a new context restricted to the given objects, in the given
    /// order. Attributes are kept unchanged.
    pub fn select_objects(&self, objects: &[usize]) -> FormalContext {
        FormalContext {
            object_names: objects.iter().map(|&g| self.object_names[g].clone()).collect(),
            attribute_names: self.attribute_names.clone(),
            rows: objects.iter().map(|&g| self.rows[g].clone()).collect(),
            cols: {
                let n = objects.len();
                let mut cols = vec![ObjectSet::empty(n); self.attribute_count()];
                for (i, &g) in objects.iter().enumerate() {
                    for m in &self.rows[g] {
                        cols[m].insert(i);
                    }
                }
                cols
            },
        }
    }
}

/// Parses a Burmeister `.cxt` document.
pub fn parse_cxt(text: &str) -> Result<FormalContext, ContextError> {
    let err = |line: usize, message: String| ContextError::Cxt { line, message };

    if !text.is_empty() && !text.ends_with('\n') {
        let last = text.lines().count();
        return Err(err(last, "truncated input: missing trailing newline".into()));
    }
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    let line_at = |i: usize| -> Result<&str, ContextError> {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| err(i + 1, "truncated input".into()))
    };

    if line_at(0)? != "B" {
        return Err(err(1, "expected header \"B\"".into()));
    }
    if !line_at(1)?.is_empty() {
        return Err(err(2, "expected blank line after header".into()));
    }
    let count = |i: usize, what: &str| -> Result<usize, ContextError> {
        let raw = line_at(i)?;
        raw.trim()
            .parse()
            .map_err(|_| err(i + 1, format!("invalid {what} count {raw:?}")))
    };
    let n = count(2, "object")?;
    let m = count(3, "attribute")?;
    if !line_at(4)?.is_empty() {
        return Err(err(5, "expected blank line after counts".into()));
    }

    let mut cursor = 5;
    let mut names = |k: usize| -> Result<Vec<String>, ContextError> {
        let out = (cursor..cursor + k)
            .map(|i| line_at(i).map(str::to_owned))
            .collect::<Result<Vec<_>, _>>()?;
        cursor += k;
        Ok(out)
    };
    let object_names = names(n)?;
    let attribute_names = names(m)?;
    let rows_start = cursor;

    let mut rows = Vec::with_capacity(n);
    for g in 0..n {
        let i = rows_start + g;
        let raw = line_at(i)?;
        let cells: Vec<char> = raw.chars().collect();
        if cells.len() != m {
            return Err(err(
                i + 1,
                format!("row has {} cells, expected {m}", cells.len()),
            ));
        }
        let mut row = AttributeSet::empty(m);
        for (j, c) in cells.into_iter().enumerate() {
            match c {
                'X' | 'x' => row.insert(j),
                '.' => {}
                other => {
                    return Err(err(
                        i + 1,
                        format!("illegal cell character {other:?} at column {}", j + 1),
                    ))
                }
            }
        }
        rows.push(row);
    }
    if let Some((i, _)) = lines
        .iter()
        .enumerate()
        .skip(rows_start + n)
        .find(|(_, l)| !l.trim().is_empty())
    {
        return Err(err(i + 1, "unexpected content after incidence rows".into()));
    }

    FormalContext::new(object_names, attribute_names, rows)
}

/// Renders a context as a `.cxt` document. The output re-parses to the same
/// context.
pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "B\n\n{}\n{}\n\n",
        ctx.object_count(),
        ctx.attribute_count()
    );
    for name in ctx.object_names.iter().chain(&ctx.attribute_names) {
        out.push_str(name);
        out.push('\n');
    }
    for row in &ctx.rows {
        out.extend((0..ctx.attribute_count()).map(|j| if row.contains(j) { 'X' } else { '.' }));
        out.push('\n');
    }
    out
}

/// Parses a binary CSV table into a context.
pub fn parse_binary_csv(text: &str) -> Result<FormalContext, ContextError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let csv_err = |row: usize, column: usize, message: String| ContextError::Csv {
        row,
        column,
        message,
    };

    let header = match records.next() {
        Some(rec) => rec.map_err(|e| csv_err(1, 0, e.to_string()))?,
        None => return FormalContext::new(Vec::new(), Vec::new(), Vec::new()),
    };
    if header.is_empty() {
        return Err(csv_err(1, 1, "missing header".into()));
    }
    let attribute_names: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let m = attribute_names.len();

    let mut object_names = Vec::new();
    let mut rows = Vec::new();
    for (r, rec) in records.enumerate() {
        let row_no = r + 2;
        let rec = rec.map_err(|e| csv_err(row_no, 0, e.to_string()))?;
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() != m + 1 {
            return Err(csv_err(
                row_no,
                rec.len(),
                format!("ragged row: {} cells, expected {}", rec.len(), m + 1),
            ));
        }
        object_names.push(rec[0].to_owned());
        let mut row = AttributeSet::empty(m);
        for (j, cell) in rec.iter().skip(1).enumerate() {
            match cell.trim() {
                "1" | "X" | "x" => row.insert(j),
                "0" | "." => {}
                other => {
                    return Err(csv_err(
                        row_no,
                        j + 2,
                        format!(
                            "non-binary value {other:?} (object {:?}, attribute {:?})",
                            &rec[0], attribute_names[j]
                        ),
                    ))
                }
            }
        }
        rows.push(row);
    }
    FormalContext::new(object_names, attribute_names, rows)
}

/// Renders a context as a `0`/`1` CSV table with an `object` corner label.
pub fn write_binary_csv(ctx: &FormalContext) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("object").chain(ctx.attribute_names.iter().map(String::as_str));
    writer.write_record(header).expect("in-memory write");
    for (g, name) in ctx.object_names.iter().enumerate() {
        let cells = (0..ctx.attribute_count()).map(|j| if ctx.incident(g, j) { "1" } else { "0" });
        writer
            .write_record(std::iter::once(name.as_str()).chain(cells))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const K1_CXT: &str = include_str!("../tests/data/k1.cxt");

    pub fn k1() -> FormalContext {
        parse_cxt(K1_CXT).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn attrs(ctx: &FormalContext, names: &[&str]) -> AttributeSet {
        ctx.attribute_set(names.iter().map(|n| ctx.attribute_index(n).unwrap()))
    }

    fn objs(ctx: &FormalContext, names: &[&str]) -> ObjectSet {
        ctx.object_set(names.iter().map(|n| ctx.object_index(n).unwrap()))
    }

    #[test]
    fn parses_k1() {
        let k1 = k1();
        assert_eq!(k1.object_count(), 3);
        assert_eq!(k1.attribute_count(), 3);
        assert_eq!(k1.incidence_count(), 5);
        assert!(k1.incident(0, 0) && k1.incident(0, 1) && !k1.incident(0, 2));
        assert_eq!(k1.column(1).len(), 3);
    }

    #[test]
    fn parses_empty_context() {
        let ctx = parse_cxt("B\n\n0\n0\n\n").unwrap();
        assert_eq!(ctx.object_count(), 0);
        assert_eq!(ctx.attribute_count(), 0);
        assert_eq!(write_cxt(&ctx), "B\n\n0\n0\n\n");
    }

    #[test]
    fn rejects_illegal_cell_with_line_number() {
        let text = K1_CXT.replace("XX.\n.XX", "XY.\n.XX");
        match parse_cxt(&text) {
            Err(ContextError::Cxt { line, message }) => {
                assert_eq!(line, 12);
                assert!(message.contains("'Y'"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_documents() {
        let short_row = K1_CXT.replace(".X.\n", ".X\n");
        assert!(matches!(parse_cxt(&short_row), Err(ContextError::Cxt { line: 14, .. })));
        let truncated = "B\n\n3\n3\n\no1\no2\n";
        assert!(matches!(parse_cxt(truncated), Err(ContextError::Cxt { line: 8, .. })));
        let no_newline = K1_CXT.trim_end();
        assert!(parse_cxt(no_newline).is_err());
        let dup = K1_CXT.replace("o2\n", "o1\n");
        assert!(matches!(parse_cxt(&dup), Err(ContextError::DuplicateName { kind: "object", .. })));
        assert!(matches!(parse_cxt("C\n\n0\n0\n\n"), Err(ContextError::Cxt { line: 1, .. })));
        assert!(matches!(parse_cxt("B\n\nx\n0\n\n"), Err(ContextError::Cxt { line: 3, .. })));
        let extra = format!("{K1_CXT}XXX\n");
        assert!(matches!(parse_cxt(&extra), Err(ContextError::Cxt { line: 15, .. })));
    }

    #[test]
    fn write_cxt_round_trips_names_with_spaces() {
        let ctx = FormalContext::new(
            vec!["house mouse".into(), " rat ".into()],
            vec!["Litter Size=HIGH".into()],
            vec![
                AttributeSet::from_indices(1, [0]),
                AttributeSet::empty(1),
            ],
        )
        .unwrap();
        let text = write_cxt(&ctx);
        assert!(text.contains("\nhouse mouse\n rat \n"));
        assert_eq!(parse_cxt(&text).unwrap(), ctx);
        assert_eq!(write_cxt(&k1()), K1_CXT);
    }

    #[test]
    fn binary_csv_matches_cxt() {
        let csv = "object,a,b,c\no1,1,1,0\no2,0,1,1\no3,0,1,0\n";
        assert_eq!(parse_binary_csv(csv).unwrap(), k1());
        let dots = "obj,a,b,c\no1,X,X,.\no2,.,X,X\no3,.,X,.\n";
        assert_eq!(parse_binary_csv(dots).unwrap(), k1());
        assert_eq!(parse_binary_csv(&write_binary_csv(&k1())).unwrap(), k1());

        let full = parse_binary_csv(",p,q\nx,1,1\ny,1,1\n").unwrap();
        assert_eq!(full.incidence_count(), 4);
    }

    #[test]
    fn binary_csv_errors() {
        match parse_binary_csv("o,a,b\nx,1,2\n") {
            Err(ContextError::Csv { row, column, message }) => {
                assert_eq!((row, column), (2, 3));
                assert!(message.contains("\"b\""), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_binary_csv("o,a,b\nx,1\n"),
            Err(ContextError::Csv { row: 2, .. })
        ));
    }

    #[test]
    fn derivations_on_k1() {
        let k1 = k1();
        assert_eq!(k1.derive_extent(&objs(&k1, &["o1", "o2"])).unwrap(), attrs(&k1, &["b"]));
        assert_eq!(k1.derive_extent(&objs(&k1, &[])).unwrap(), attrs(&k1, &["a", "b", "c"]));
        assert_eq!(k1.derive_extent(&objs(&k1, &["o1"])).unwrap(), attrs(&k1, &["a", "b"]));

        assert_eq!(k1.derive_intent(&attrs(&k1, &["b"])).unwrap(), objs(&k1, &["o1", "o2", "o3"]));
        assert_eq!(k1.derive_intent(&attrs(&k1, &[])).unwrap(), objs(&k1, &["o1", "o2", "o3"]));
        assert_eq!(k1.derive_intent(&attrs(&k1, &["a", "c"])).unwrap(), objs(&k1, &[]));
    }

    #[test]
    fn closures_on_k1() {
        let k1 = k1();
        assert_eq!(k1.close_attributes(&attrs(&k1, &["a"])).unwrap(), attrs(&k1, &["a", "b"]));
        assert_eq!(k1.close_attributes(&attrs(&k1, &["a", "b"])).unwrap(), attrs(&k1, &["a", "b"]));
        assert_eq!(k1.close_attributes(&attrs(&k1, &[])).unwrap(), attrs(&k1, &["b"]));

        assert_eq!(k1.close_objects(&objs(&k1, &["o3"])).unwrap(), objs(&k1, &["o1", "o2", "o3"]));
        assert_eq!(k1.close_objects(&objs(&k1, &["o1"])).unwrap(), objs(&k1, &["o1"]));
        assert_eq!(k1.close_objects(&objs(&k1, &[])).unwrap(), objs(&k1, &[]));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let k1 = k1();
        assert_eq!(
            k1.derive_extent(&ObjectSet::empty(4)),
            Err(ContextError::DimensionMismatch { kind: "object", expected: 3, found: 4 })
        );
        assert!(k1.close_attributes(&AttributeSet::empty(2)).is_err());
    }

    #[test]
    fn select_objects_keeps_transpose_consistent() {
        let k1 = k1();
        let sub = k1.select_objects(&[2, 0]);
        assert_eq!(sub.object_names(), ["o3", "o1"]);
        for g in 0..2 {
            for m in 0..3 {
                assert_eq!(sub.row(g).contains(m), sub.column(m).contains(g));
            }
        }
        assert_eq!(sub.column(0).to_vec(), vec![1]);
    }
}
