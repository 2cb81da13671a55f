#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fca_core::binarize::{rodent_trait_roles, ColumnRole, LabelSpec, Role, RoleConfig};

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

pub fn fca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fca"))
        .args(args)
        .output()
        .expect("spawn fca")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Small deterministic generator so fixtures do not depend on a crate RNG.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// A trait table shaped like the rodent data: a species column, a 0/1
/// carrier column, the fifteen trait columns and two extra columns the
/// role config ignores. About a fifth of all cells are `-999` or empty.
pub fn synthetic_traits_csv(rows: usize, seed: u64) -> String {
    let mut rng = SplitMix(seed);
    let roles = rodent_trait_roles();
    let mut out = String::from("species,carrier,Order,");
    out.push_str(&roles.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(","));
    out.push_str(",X1.1_ActivityCycle\n");
    for i in 0..rows {
        let carrier = u8::from(rng.unit() < 0.3);
        out.push_str(&format!("Species {i},{carrier},Rodentia"));
        for r in &roles {
            let u = rng.unit();
            let cell = if u < 0.12 {
                "-999".to_string()
            } else if u < 0.2 {
                String::new()
            } else {
                let v = rng.unit();
                match r.role {
                    Role::Numeric => format!("{:.3}", 1.0 + 500.0 * v * v),
                    Role::Latitude => format!("{:.2}", -90.0 + 180.0 * v),
                    Role::Longitude => format!("{:.2}", -180.0 + 360.0 * v),
                }
            };
            out.push(',');
            out.push_str(&cell);
        }
        out.push_str(",2\n");
    }
    out
}

pub fn rodent_role_config(with_label: bool) -> RoleConfig {
    RoleConfig {
        id_column: Some("species".into()),
        label: with_label.then(|| LabelSpec {
            column: "carrier".into(),
            positive: "1".into(),
        }),
        columns: rodent_trait_roles(),
    }
}

pub fn numeric_role(name: &str) -> ColumnRole {
    ColumnRole {
        name: name.into(),
        role: Role::Numeric,
    }
}
