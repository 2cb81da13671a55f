//! Discretization of numeric trait tables into formal contexts.
//!
//! Every source column becomes a group of mutually exclusive binary
//! attributes named `FEATURE=CATEGORY`:
//!
//! | role        | categories                  | rule                                       |
//! |-------------|-----------------------------|--------------------------------------------|
//! | `numeric`   | `HIGH`, `LOW`, `NAN`        | `HIGH` iff value > median, else `LOW`      |
//! | `latitude`  | `S`, `TROPICAL`, `N`, `NAN` | `[-90,-30)`, `[-30,30)`, `[30,90]`         |
//! | `longitude` | `WEST`, `EAST`, `NAN`       | `WEST` iff value < -25                     |
//!
//! Missing values always land in `NAN`. Medians use non-missing values
//! only; an even count takes the mean of the two middle values.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::AttributeSet;
use crate::context::{ContextError, FormalContext};

/// Cell values read as missing, besides anything that parses to -999.
pub const MISSING_TOKENS: &[&str] = &["", "NA", "NaN", "nan", "-999", "-999.0"];

const MISSING_SENTINEL: f64 = -999.0;

pub const DEFAULT_LATITUDE_BOUNDS: [f64; 2] = [-30.0, 30.0];
pub const DEFAULT_LONGITUDE_SPLIT: f64 = -25.0;

#[derive(Debug, Error, PartialEq)]
pub enum BinarizeError {
    #[error("csv row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("column {0:?} named in the role config is not in the table")]
    UnknownColumn(String),
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    InvalidNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("column {0:?} has no non-missing values")]
    AllMissing(String),
    #[error("column {column:?}, object {object:?}: {role} value {value} outside [{min}, {max}]")]
    OutOfRange {
        column: String,
        object: String,
        role: Role,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("duplicate object id {0:?}")]
    DuplicateObject(String),
    #[error("schema does not match table: {0}")]
    SchemaMismatch(String),
    #[error("invalid role config: {0}")]
    Config(String),
    #[error(transparent)]
    Context(#[from] ContextError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Numeric,
    Latitude,
    Longitude,
}

impl Role {
    pub fn categories(self) -> &'static [&'static str] {
        match self {
            Role::Numeric => &["HIGH", "LOW", "NAN"],
            Role::Latitude => &["S", "TROPICAL", "N", "NAN"],
            Role::Longitude => &["WEST", "EAST", "NAN"],
        }
    }

    fn range(self) -> Option<(f64, f64)> {
        match self {
            Role::Numeric => None,
            Role::Latitude => Some((-90.0, 90.0)),
            Role::Longitude => Some((-180.0, 180.0)),
        }
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Role::Numeric => "numeric",
            Role::Latitude => "latitude",
            Role::Longitude => "longitude",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnRole {
    pub name: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub column: String,
    /// Cell value marking the positive class; every other value is negative.
    pub positive: String,
}

/// Which columns to read and how to treat them.
///
/// ```json
/// {
///   "id_column": "species",
///   "label": {"column": "reservoir", "positive": "1"},
///   "columns": [
///     {"name": "X5.1_AdultBodyMass_g", "role": "numeric"},
///     {"name": "X26.2_GR_MaxLat_dd", "role": "latitude"}
///   ]
/// }
/// ```
///
/// Without `id_column` the first CSV column holds the object ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_column: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<LabelSpec>,
    pub columns: Vec<ColumnRole>,
}

impl RoleConfig {
    pub fn from_json(text: &str) -> Result<Self, BinarizeError> {
        let config: RoleConfig =
            serde_json::from_str(text).map_err(|e| BinarizeError::Config(e.to_string()))?;
        let mut seen = HashSet::new();
        for c in &config.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(BinarizeError::Config(format!("column {:?} listed twice", c.name)));
            }
        }
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is serializable")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraitColumn {
    pub name: String,
    pub role: Role,
    pub values: Vec<Option<f64>>,
}

/// Objects with per-column numeric values, `None` where missing.
#[derive(Debug, Clone, PartialEq)]
pub struct TraitTable {
    object_ids: Vec<String>,
    columns: Vec<TraitColumn>,
}

impl TraitTable {
    pub fn new(object_ids: Vec<String>, columns: Vec<TraitColumn>) -> Result<Self, BinarizeError> {
        let mut seen = HashSet::new();
        for id in &object_ids {
            if !seen.insert(id.as_str()) {
                return Err(BinarizeError::DuplicateObject(id.clone()));
            }
        }
        if let Some(c) = columns.iter().find(|c| c.values.len() != object_ids.len()) {
            return Err(BinarizeError::SchemaMismatch(format!(
                "column {:?} has {} values for {} objects",
                c.name,
                c.values.len(),
                object_ids.len()
            )));
        }
        Ok(TraitTable { object_ids, columns })
    }

    pub fn object_ids(&self) -> &[String] {
        &self.object_ids
    }

    pub fn columns(&self) -> &[TraitColumn] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.object_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object_ids.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&TraitColumn> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Rows reordered (or subset) by index.
    pub fn select_rows(&self, rows: &[usize]) -> TraitTable {
        TraitTable {
            object_ids: rows.iter().map(|&r| self.object_ids[r].clone()).collect(),
            columns: self
                .columns
                .iter()
                .map(|c| TraitColumn {
                    name: c.name.clone(),
                    role: c.role,
                    values: rows.iter().map(|&r| c.values[r]).collect(),
                })
                .collect(),
        }
    }
}

/// `None` for missing tokens and for anything equal to the -999 sentinel.
pub fn parse_value(cell: &str) -> Result<Option<f64>, std::num::ParseFloatError> {
    let cell = cell.trim();
    if MISSING_TOKENS.contains(&cell) {
        return Ok(None);
    }
    let v: f64 = cell.parse()?;
    if v.is_nan() || v == MISSING_SENTINEL {
        Ok(None)
    } else {
        Ok(Some(v))
    }
}

/// A parsed CSV with its raw label cells, if the config names a label
/// column.
pub(crate) struct ParsedTraits {
    pub table: TraitTable,
    pub labels: Option<Vec<String>>,
}

pub(crate) fn parse_traits(text: &str, config: &RoleConfig) -> Result<ParsedTraits, BinarizeError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| BinarizeError::Csv {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let find = |name: &str| header.iter().position(|h| h == name);

    let id_col = match &config.id_column {
        Some(name) => find(name).ok_or_else(|| BinarizeError::UnknownColumn(name.clone()))?,
        None if header.is_empty() => {
            return Err(BinarizeError::Csv {
                row: 1,
                message: "empty header".into(),
            })
        }
        None => 0,
    };
    let label_col = match &config.label {
        Some(l) => Some(find(&l.column).ok_or_else(|| BinarizeError::UnknownColumn(l.column.clone()))?),
        None => None,
    };
    // Data columns follow the table's column order.
    let mut picked: Vec<(usize, &ColumnRole)> = config
        .columns
        .iter()
        .map(|c| {
            find(&c.name)
                .map(|i| (i, c))
                .ok_or_else(|| BinarizeError::UnknownColumn(c.name.clone()))
        })
        .collect::<Result<_, _>>()?;
    picked.sort_by_key(|(i, _)| *i);

    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut values: Vec<Vec<Option<f64>>> = vec![Vec::new(); picked.len()];
    for (r, rec) in reader.records().enumerate() {
        let row = r + 2;
        let rec = rec.map_err(|e| BinarizeError::Csv {
            row,
            message: e.to_string(),
        })?;
        ids.push(rec[id_col].trim().to_owned());
        if let Some(lc) = label_col {
            labels.push(rec[lc].trim().to_owned());
        }
        for (slot, &(i, col)) in picked.iter().enumerate() {
            let cell = &rec[i];
            let v = parse_value(cell).map_err(|_| BinarizeError::InvalidNumber {
                row,
                column: col.name.clone(),
                value: cell.to_owned(),
            })?;
            values[slot].push(v);
        }
    }
    let columns = picked
        .iter()
        .zip(values)
        .map(|(&(_, c), values)| TraitColumn {
            name: c.name.clone(),
            role: c.role,
            values,
        })
        .collect();
    Ok(ParsedTraits {
        table: TraitTable::new(ids, columns)?,
        labels: label_col.map(|_| labels),
    })
}

/// Reads a trait CSV. Only the columns named in `config` are kept, in
/// table order.
pub fn parse_trait_csv(text: &str, config: &RoleConfig) -> Result<TraitTable, BinarizeError> {
    parse_traits(text, config).map(|p| p.table)
}

/// Discretization rule for one source column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRule {
    pub name: String,
    pub role: Role,
    /// `[median]` for numeric columns, the two inner latitude bounds, or the
    /// single longitude split.
    pub thresholds: Vec<f64>,
    pub categories: Vec<String>,
}

impl ColumnRule {
    fn new(name: &str, role: Role, thresholds: Vec<f64>) -> Self {
        ColumnRule {
            name: name.to_owned(),
            role,
            thresholds,
            categories: role.categories().iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = String> + '_ {
        self.categories.iter().map(move |c| format!("{}={c}", self.name))
    }

    fn validate(&self) -> Result<(), BinarizeError> {
        let expected_thresholds = match self.role {
            Role::Numeric => 1,
            Role::Latitude => 2,
            Role::Longitude => 1,
        };
        if self.thresholds.len() != expected_thresholds {
            return Err(BinarizeError::SchemaMismatch(format!(
                "column {:?} needs {expected_thresholds} threshold(s), has {}",
                self.name,
                self.thresholds.len()
            )));
        }
        if self.categories.len() != self.role.categories().len() {
            return Err(BinarizeError::SchemaMismatch(format!(
                "column {:?} needs {} categories, has {}",
                self.name,
                self.role.categories().len(),
                self.categories.len()
            )));
        }
        if self.thresholds.windows(2).any(|w| w[0] > w[1]) {
            return Err(BinarizeError::SchemaMismatch(format!(
                "thresholds of column {:?} are not ascending",
                self.name
            )));
        }
        Ok(())
    }

    /// Index into `categories` for a value.
    pub fn category_of(&self, value: Option<f64>) -> usize {
        let nan = self.categories.len() - 1;
        let Some(v) = value else { return nan };
        match self.role {
            Role::Numeric => usize::from(v <= self.thresholds[0]),
            Role::Latitude => self.thresholds.iter().filter(|&&t| v >= t).count(),
            Role::Longitude => usize::from(v >= self.thresholds[0]),
        }
    }
}

/// Per-column rules, in source column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarizationSchema {
    pub columns: Vec<ColumnRule>,
}

impl BinarizationSchema {
    pub fn attribute_names(&self) -> Vec<String> {
        self.columns.iter().flat_map(ColumnRule::attribute_names).collect()
    }

    pub fn attribute_count(&self) -> usize {
        self.columns.iter().map(|c| c.categories.len()).sum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema is serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, BinarizeError> {
        let schema: BinarizationSchema = serde_json::from_str(text)
            .map_err(|e| BinarizeError::SchemaMismatch(e.to_string()))?;
        for c in &schema.columns {
            c.validate()?;
        }
        Ok(schema)
    }
}

/// Median of the present values; even counts average the middle pair.
pub fn median(values: &[Option<f64>]) -> Option<f64> {
    let mut present: Vec<f64> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        return None;
    }
    present.sort_by(f64::total_cmp);
    let mid = present.len() / 2;
    Some(if present.len().is_multiple_of(2) {
        (present[mid - 1] + present[mid]) / 2.0
    } else {
        present[mid]
    })
}

fn check_range(table: &TraitTable, column: &TraitColumn) -> Result<(), BinarizeError> {
    let Some((min, max)) = column.role.range() else {
        return Ok(());
    };
    for (obj, v) in table.object_ids.iter().zip(&column.values) {
        if let Some(v) = *v {
            if !(min..=max).contains(&v) {
                return Err(BinarizeError::OutOfRange {
                    column: column.name.clone(),
                    object: obj.clone(),
                    role: column.role,
                    value: v,
                    min,
                    max,
                });
            }
        }
    }
    Ok(())
}

/// Computes medians for numeric columns and attaches the fixed geographic
/// bins.
pub fn infer_schema(table: &TraitTable) -> Result<BinarizationSchema, BinarizeError> {
    let mut columns = Vec::with_capacity(table.columns.len());
    for col in &table.columns {
        check_range(table, col)?;
        let rule = match col.role {
            Role::Numeric => {
                let m = median(&col.values).ok_or_else(|| BinarizeError::AllMissing(col.name.clone()))?;
                ColumnRule::new(&col.name, Role::Numeric, vec![m])
            }
            Role::Latitude => ColumnRule::new(&col.name, Role::Latitude, DEFAULT_LATITUDE_BOUNDS.to_vec()),
            Role::Longitude => {
                ColumnRule::new(&col.name, Role::Longitude, vec![DEFAULT_LONGITUDE_SPLIT])
            }
        };
        columns.push(rule);
    }
    Ok(BinarizationSchema { columns })
}

/// Builds the binary context: one attribute per (column, category), one
/// bit set per object and column.
pub fn apply_schema(table: &TraitTable, schema: &BinarizationSchema) -> Result<FormalContext, BinarizeError> {
    let mut sources = Vec::with_capacity(schema.columns.len());
    for rule in &schema.columns {
        rule.validate()?;
        let col = table
            .column(&rule.name)
            .ok_or_else(|| BinarizeError::SchemaMismatch(format!("table has no column {:?}", rule.name)))?;
        if col.role != rule.role {
            return Err(BinarizeError::SchemaMismatch(format!(
                "column {:?} is {} in the table but {} in the schema",
                rule.name, col.role, rule.role
            )));
        }
        check_range(table, col)?;
        sources.push(col);
    }

    let width = schema.attribute_count();
    let mut rows = vec![AttributeSet::empty(width); table.len()];
    let mut offset = 0;
    for (rule, col) in schema.columns.iter().zip(sources) {
        for (row, &v) in rows.iter_mut().zip(&col.values) {
            row.insert(offset + rule.category_of(v));
        }
        offset += rule.categories.len();
    }
    Ok(FormalContext::new(
        table.object_ids.clone(),
        schema.attribute_names(),
        rows,
    )?)
}

/// The fifteen trait columns used for the rodent analysis with their roles:
/// twelve median-split numeric traits, two latitudes and one longitude.
pub fn rodent_trait_roles() -> Vec<ColumnRole> {
    const COLUMNS: [(&str, Role); 15] = [
        ("X26.1_GR_Area_km2", Role::Numeric),
        ("X23.1_SexualMaturityAge_d", Role::Numeric),
        ("X27.2_HuPopDen_Mean_n.km2", Role::Numeric),
        ("logNeoBM", Role::Numeric),
        ("X15.1_LitterSize", Role::Numeric),
        ("X5.1_AdultBodyMass_g", Role::Numeric),
        ("X9.1_GestationLen_d", Role::Numeric),
        ("X25.1_WeaningAge_d", Role::Numeric),
        ("X13.1_AdultHeadBodyLen_mm", Role::Numeric),
        ("SpeciesDensity", Role::Numeric),
        ("X30.2_PET_Mean_mm", Role::Numeric),
        ("X26.2_GR_MaxLat_dd", Role::Latitude),
        ("X16.1_LittersPerYear", Role::Numeric),
        ("X26.5_GR_MaxLong_dd", Role::Longitude),
        ("X26.3_GR_MinLat_dd", Role::Latitude),
    ];
    COLUMNS
        .iter()
        .map(|&(name, role)| ColumnRole {
            name: name.to_owned(),
            role,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn numeric(name: &str, values: Vec<Option<f64>>) -> TraitColumn {
        TraitColumn {
            name: name.into(),
            role: Role::Numeric,
            values,
        }
    }

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("s{i}")).collect()
    }

    #[test]
    fn missing_tokens() {
        for cell in ["-999", "-999.0", "", "NA", "NaN", " NA ", "-999.00"] {
            assert_eq!(parse_value(cell), Ok(None), "{cell:?}");
        }
        assert_eq!(parse_value("3.5"), Ok(Some(3.5)));
        assert_eq!(parse_value("-30"), Ok(Some(-30.0)));
        assert!(parse_value("abc").is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[Some(1.0), Some(2.0), Some(3.0), Some(4.0), None]), Some(2.5));
        assert_eq!(median(&[Some(5.0)]), Some(5.0));
        assert_eq!(median(&[Some(3.0), None, Some(1.0), Some(2.0)]), Some(2.0));
        assert_eq!(median(&[None, None]), None);
    }

    #[test]
    fn all_missing_column_is_rejected() {
        let table = TraitTable::new(ids(2), vec![numeric("F", vec![None, None])]).unwrap();
        assert_eq!(infer_schema(&table), Err(BinarizeError::AllMissing("F".into())));
    }

    #[test]
    fn numeric_split_and_ties() {
        let table = TraitTable::new(
            ids(5),
            vec![numeric("F", vec![Some(1.0), Some(2.0), Some(3.0), Some(4.0), None])],
        )
        .unwrap();
        let schema = infer_schema(&table).unwrap();
        assert_eq!(schema.columns[0].thresholds, vec![2.5]);
        let ctx = apply_schema(&table, &schema).unwrap();
        assert_eq!(ctx.attribute_names(), ["F=HIGH", "F=LOW", "F=NAN"]);
        let cat = |g: usize| ctx.row(g).to_vec();
        assert_eq!(cat(0), vec![1]);
        assert_eq!(cat(2), vec![0]);
        assert_eq!(cat(4), vec![2]);

        let tie = ColumnRule::new("F", Role::Numeric, vec![2.0]);
        assert_eq!(tie.category_of(Some(2.0)), 1);
        assert_eq!(tie.category_of(Some(2.0000001)), 0);
    }

    #[test]
    fn geographic_bins() {
        let lat = ColumnRule::new("LAT", Role::Latitude, DEFAULT_LATITUDE_BOUNDS.to_vec());
        let cats: Vec<&str> = [-90.0, -30.0001, -30.0, 0.0, 29.99, 30.0, 45.0, 90.0]
            .iter()
            .map(|&v| lat.categories[lat.category_of(Some(v))].as_str())
            .collect();
        assert_eq!(cats, ["S", "S", "TROPICAL", "TROPICAL", "TROPICAL", "N", "N", "N"]);
        assert_eq!(lat.category_of(None), 3);

        let lon = ColumnRule::new("LON", Role::Longitude, vec![DEFAULT_LONGITUDE_SPLIT]);
        let cats: Vec<&str> = [-180.0, -25.0001, -25.0, 0.0, 180.0]
            .iter()
            .map(|&v| lon.categories[lon.category_of(Some(v))].as_str())
            .collect();
        assert_eq!(cats, ["WEST", "WEST", "EAST", "EAST", "EAST"]);
        assert_eq!(lon.category_of(None), 2);
    }

    #[test]
    fn latitude_45_sets_north() {
        let table = TraitTable::new(
            ids(1),
            vec![TraitColumn {
                name: "LAT".into(),
                role: Role::Latitude,
                values: vec![Some(45.0)],
            }],
        )
        .unwrap();
        let ctx = apply_schema(&table, &infer_schema(&table).unwrap()).unwrap();
        let on: Vec<&String> = ctx.row(0).iter().map(|m| &ctx.attribute_names()[m]).collect();
        assert_eq!(on, ["LAT=N"]);
    }

    #[test]
    fn out_of_range_geography() {
        let table = TraitTable::new(
            ids(2),
            vec![TraitColumn {
                name: "LON".into(),
                role: Role::Longitude,
                values: vec![Some(10.0), Some(181.0)],
            }],
        )
        .unwrap();
        assert!(matches!(
            infer_schema(&table),
            Err(BinarizeError::OutOfRange { ref object, .. }) if object == "s1"
        ));
        let lat = TraitTable::new(
            ids(1),
            vec![TraitColumn {
                name: "LAT".into(),
                role: Role::Latitude,
                values: vec![Some(-91.0)],
            }],
        )
        .unwrap();
        assert!(infer_schema(&lat).is_err());
    }

    #[test]
    fn parse_trait_csv_with_config() {
        let csv = "species,mass,lat,note,lon\nA,3.5,10,x,-999\nB,NA,-45,y,100\nC,-999,60,z,-70\n";
        let config = RoleConfig::from_json(
            r#"{"columns":[{"name":"lon","role":"longitude"},{"name":"mass","role":"numeric"},{"name":"lat","role":"latitude"}]}"#,
        )
        .unwrap();
        let table = parse_trait_csv(csv, &config).unwrap();
        assert_eq!(table.object_ids(), ["A", "B", "C"]);
        let names: Vec<&str> = table.columns().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["mass", "lat", "lon"]);
        assert_eq!(table.columns()[0].values, vec![Some(3.5), None, None]);
        assert_eq!(table.columns()[2].values, vec![None, Some(100.0), Some(-70.0)]);

        let bad = RoleConfig::from_json(r#"{"columns":[{"name":"nope","role":"numeric"}]}"#).unwrap();
        assert_eq!(
            parse_trait_csv(csv, &bad),
            Err(BinarizeError::UnknownColumn("nope".into()))
        );
        let text_cell = RoleConfig::from_json(r#"{"columns":[{"name":"note","role":"numeric"}]}"#).unwrap();
        assert!(matches!(
            parse_trait_csv(csv, &text_cell),
            Err(BinarizeError::InvalidNumber { row: 2, .. })
        ));
        assert!(matches!(
            RoleConfig::from_json(r#"{"columns":[{"name":"mass","role":"weird"}]}"#),
            Err(BinarizeError::Config(_))
        ));
    }

    #[test]
    fn schema_json_round_trip_and_reuse() {
        let table = TraitTable::new(
            ids(3),
            vec![numeric("F", vec![Some(1.0), Some(5.0), Some(9.0)])],
        )
        .unwrap();
        let schema = infer_schema(&table).unwrap();
        let json = schema.to_json();
        let back = BinarizationSchema::from_json(&json).unwrap();
        assert_eq!(back, schema);

        let fresh = TraitTable::new(vec!["new".into()], vec![numeric("F", vec![Some(100.0)])]).unwrap();
        let ctx = apply_schema(&fresh, &back).unwrap();
        assert_eq!(ctx.attribute_names(), schema.attribute_names().as_slice());
        assert_eq!(ctx.row(0).to_vec(), vec![0]);

        let other = TraitTable::new(ids(1), vec![numeric("G", vec![Some(1.0)])]).unwrap();
        assert!(matches!(apply_schema(&other, &schema), Err(BinarizeError::SchemaMismatch(_))));
        assert!(BinarizationSchema::from_json(r#"{"columns":[{"name":"F","role":"numeric","thresholds":[],"categories":["HIGH","LOW","NAN"]}]}"#).is_err());
    }

    #[test]
    fn rodent_roles_give_47_columns() {
        let roles = rodent_trait_roles();
        let n = 4;
        let columns = roles
            .iter()
            .map(|r| TraitColumn {
                name: r.name.clone(),
                role: r.role,
                values: vec![Some(10.0), None, Some(-40.0), Some(50.0)],
            })
            .collect();
        let table = TraitTable::new(ids(n), columns).unwrap();
        let ctx = apply_schema(&table, &infer_schema(&table).unwrap()).unwrap();
        assert_eq!(ctx.attribute_count(), 47);
        for g in 0..n {
            assert_eq!(ctx.row(g).len(), 15);
        }
    }

    proptest! {
        #[test]
        fn one_bit_per_source_column(
            values in proptest::collection::vec(proptest::option::weighted(0.8, -90.0f64..90.0), 1..40),
        ) {
            prop_assume!(values.iter().any(Option::is_some));
            let n = values.len();
            let table = TraitTable::new(ids(n), vec![
                numeric("F", values.clone()),
                TraitColumn { name: "LAT".into(), role: Role::Latitude, values: values.clone() },
                TraitColumn { name: "LON".into(), role: Role::Longitude, values },
            ]).unwrap();
            let schema = infer_schema(&table).unwrap();
            let ctx = apply_schema(&table, &schema).unwrap();
            prop_assert_eq!(ctx.attribute_count(), 10);
            for g in 0..n {
                let row = ctx.row(g);
                prop_assert_eq!((0..3).filter(|&j| row.contains(j)).count(), 1);
                prop_assert_eq!((3..7).filter(|&j| row.contains(j)).count(), 1);
                prop_assert_eq!((7..10).filter(|&j| row.contains(j)).count(), 1);
            }
            prop_assert_eq!(apply_schema(&table, &schema).unwrap(), ctx);
        }

        #[test]
        fn median_split_is_balanced(mut distinct in proptest::collection::btree_set(-1000i32..1000, 1..60)) {
            let values: Vec<Option<f64>> = std::mem::take(&mut distinct).into_iter().map(|v| Some(v as f64)).collect();
            let table = TraitTable::new(ids(values.len()), vec![numeric("F", values)]).unwrap();
            let ctx = apply_schema(&table, &infer_schema(&table).unwrap()).unwrap();
            let high = ctx.column(0).len() as i64;
            let low = ctx.column(1).len() as i64;
            prop_assert!((high - low).abs() <= 1);
        }

        #[test]
        fn row_permutation_permutes_context(
            values in proptest::collection::vec(proptest::option::weighted(0.8, -50.0f64..50.0), 2..30),
            seed in any::<u64>(),
        ) {
            prop_assume!(values.iter().any(Option::is_some));
            let n = values.len();
            let table = TraitTable::new(ids(n), vec![numeric("F", values)]).unwrap();
            let mut order: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let permuted = table.select_rows(&order);
            let schema = infer_schema(&table).unwrap();
            prop_assert_eq!(&infer_schema(&permuted).unwrap(), &schema);
            let a = apply_schema(&table, &schema).unwrap();
            let b = apply_schema(&permuted, &schema).unwrap();
            prop_assert_eq!(b, a.select_objects(&order));
        }
    }
}
