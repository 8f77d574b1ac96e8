//! Reference conductivities and user material files.
//!
//! Material files are UTF-8 CSV with the header `symbol,name,kappa`. Entries
//! shadow earlier definitions with the same symbol; the last one wins.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub symbol: String,
    pub name: String,
    /// Average thermal conductivity, W/(m·°C).
    pub kappa: f64,
}

impl Material {
    fn new(symbol: &str, name: &str, kappa: f64) -> Self {
        Self {
            symbol: symbol.to_owned(),
            name: name.to_owned(),
            kappa,
        }
    }
}

/// Ordered collection of materials with unique symbols.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MaterialDatabase {
    entries: Vec<Material>,
}

impl MaterialDatabase {
    /// The five reference metals.
    pub fn builtin() -> Self {
        Self {
            entries: vec![
                Material::new("Al", "Aluminium", 204.0),
                Material::new("Cu", "Copper", 386.0),
                Material::new("Fe", "Iron", 73.0),
                Material::new("Ag", "Silver", 419.0),
                Material::new("Pb", "Lead", 35.0),
            ],
        }
    }

    pub fn entries(&self) -> &[Material] {
        &self.entries
    }

    pub fn lookup(&self, symbol: &str) -> Result<&Material> {
        self.entries
            .iter()
            .find(|m| m.symbol == symbol)
            .ok_or_else(|| Error::UnknownMaterial(symbol.to_owned()))
    }

    /// Inserts or replaces by symbol. Returns the shadowed entry, if any.
    pub fn insert(&mut self, material: Material) -> Option<Material> {
        match self
            .entries
            .iter_mut()
            .find(|m| m.symbol == material.symbol)
        {
            Some(slot) => Some(std::mem::replace(slot, material)),
            None => {
                self.entries.push(material);
                None
            }
        }
    }

    /// Merges `others` over `self`, logging a warning for each shadowed symbol.
    pub fn merge(&mut self, others: impl IntoIterator<Item = Material>) -> Vec<String> {
        let mut shadowed = Vec::new();
        for m in others {
            let symbol = m.symbol.clone();
            if let Some(old) = self.insert(m) {
                log::warn!(
                    "material `{symbol}` redefined (previous kappa {})",
                    old.kappa
                );
                shadowed.push(symbol);
            }
        }
        shadowed
    }
}

pub fn builtin_database() -> Vec<Material> {
    MaterialDatabase::builtin().entries
}

#[derive(Deserialize)]
struct Row {
    symbol: String,
    name: String,
    kappa: f64,
}

/// Parses a materials CSV. Rows are validated but not merged, so duplicate
/// symbols are returned in file order.
pub fn parse_materials<R: Read>(reader: R) -> Result<Vec<Material>> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers().map_err(|e| Error::MaterialParse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != ["symbol", "name", "kappa"] {
        return Err(Error::MaterialParse {
            line: 1,
            message: format!(
                "expected header `symbol,name,kappa`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Vec::new();
    for record in csv.deserialize::<Row>() {
        let row = record.map_err(|e| Error::MaterialParse {
            line: e.position().map_or(0, |p| p.line()),
            message: match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                _ => e.to_string(),
            },
        })?;
        let line = out.len() as u64 + 2;
        if row.symbol.is_empty() {
            return Err(Error::MaterialValidation {
                line,
                symbol: row.symbol,
                reason: "has an empty symbol".into(),
            });
        }
        if !(row.kappa.is_finite() && row.kappa > 0.0) {
            return Err(Error::MaterialValidation {
                line,
                symbol: row.symbol,
                reason: format!("has non-positive conductivity {}", row.kappa),
            });
        }
        out.push(Material {
            symbol: row.symbol,
            name: row.name,
            kappa: row.kappa,
        });
    }
    Ok(out)
}

/// Loads a materials file and merges it over the built-in database.
pub fn load_materials(path: impl AsRef<Path>) -> Result<MaterialDatabase> {
    let file = std::fs::File::open(path)?;
    let mut db = MaterialDatabase::builtin();
    db.merge(parse_materials(file)?);
    Ok(db)
}
