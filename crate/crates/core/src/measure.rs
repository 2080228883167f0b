//! The dissipative cell model.
//!
//! A wandering set `W` is split into cells `B_1..B_m`. The space is the
//! disjoint union of the levels `f^k(W)`, and the model stores the exact
//! measures `μ(f^k(B_i))` on a finite window of levels. Outside the window an
//! optional pair of geometric tails extends every cell proportionally:
//!
//! * `μ(f^k(B_i)) = μ(f^{k_min}(B_i)) · r_left^(k_min - k)` for `k < k_min`,
//! * `μ(f^k(B_i)) = μ(f^{k_max}(B_i)) · r_right^(k - k_max)` for `k > k_max`.
//!
//! Without tails the system is a pure window and any level outside it is
//! undefined.

use std::collections::BTreeMap;

use num::traits::One;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, format_rational, parse_rational, powi, Exponent, Rational};

/// Geometric tail ratios.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tails {
    pub left: Rational,
    pub right: Rational,
}

impl Tails {
    pub fn new(left: Rational, right: Rational) -> Self {
        Tails { left, right }
    }

    pub fn symmetric(r: Rational) -> Self {
        Tails {
            left: r.clone(),
            right: r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSystem {
    p: Exponent,
    k_min: i64,
    k_max: i64,
    cells: Vec<String>,
    /// `mu[k - k_min][i] = μ(f^k(B_i))`.
    mu: Vec<Vec<Rational>>,
    /// `level_mass[k - k_min] = μ(f^k(W))`.
    level_mass: Vec<Rational>,
    tails: Option<Tails>,
}

impl MeasureSystem {
    /// Builds a system and checks every structural condition: non-empty window
    /// containing level 0, at least one cell, one positive measure per cell
    /// and level, positive tail ratios.
    pub fn new(
        p: Exponent,
        k_min: i64,
        k_max: i64,
        cells: Vec<String>,
        mu: Vec<Vec<Rational>>,
        tails: Option<Tails>,
    ) -> Result<Self> {
        if k_min > k_max {
            return Err(Error::EmptyWindow {
                min: k_min,
                max: k_max,
            });
        }
        if k_min > 0 || k_max < 0 {
            return Err(Error::WindowMissesZero {
                min: k_min,
                max: k_max,
            });
        }
        if cells.is_empty() {
            return Err(Error::NoCells);
        }
        let levels = (k_max - k_min + 1) as usize;
        if mu.len() != levels {
            let k = k_min + mu.len().min(levels) as i64;
            return Err(if mu.len() < levels {
                Error::MissingLevel(k)
            } else {
                Error::StrayLevel(k)
            });
        }
        let mut level_mass = Vec::with_capacity(levels);
        for (offset, row) in mu.iter().enumerate() {
            let k = k_min + offset as i64;
            if row.len() != cells.len() {
                return Err(Error::CellCountMismatch {
                    k,
                    expected: cells.len(),
                    found: row.len(),
                });
            }
            if let Some(cell) = row.iter().position(|q| !rational::is_positive(q)) {
                return Err(Error::NonPositiveMeasure { k, cell });
            }
            level_mass.push(row.iter().sum());
        }
        if let Some(t) = &tails {
            if !rational::is_positive(&t.left) {
                return Err(Error::NonPositiveTail { side: "left" });
            }
            if !rational::is_positive(&t.right) {
                return Err(Error::NonPositiveTail { side: "right" });
            }
        }
        Ok(MeasureSystem {
            p,
            k_min,
            k_max,
            cells,
            mu,
            level_mass,
            tails,
        })
    }

    /// One-cell system with `μ(f^k(W)) = mass(k)` on the window.
    pub fn single_cell(
        p: Exponent,
        k_min: i64,
        k_max: i64,
        mass: impl Fn(i64) -> Rational,
        tails: Option<Tails>,
    ) -> Result<Self> {
        let mu = (k_min..=k_max).map(|k| vec![mass(k)]).collect();
        MeasureSystem::new(p, k_min, k_max, vec!["W".into()], mu, tails)
    }

    pub fn p(&self) -> &Exponent {
        &self.p
    }

    pub fn window(&self) -> (i64, i64) {
        (self.k_min, self.k_max)
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn cells(&self) -> &[String] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn tails(&self) -> Option<&Tails> {
        self.tails.as_ref()
    }

    pub fn in_window(&self, k: i64) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }

    /// `μ(f^k(B_i))` for any level covered by the window or the tails.
    pub fn mu(&self, k: i64, cell: usize) -> Result<Rational> {
        if cell >= self.cells.len() {
            return Err(Error::InvalidCell { k, cell });
        }
        self.scaled(k, |row| row[cell].clone())
    }

    /// `μ(f^k(W))`.
    pub fn mu_w(&self, k: i64) -> Result<Rational> {
        if self.in_window(k) {
            return Ok(self.level_mass[(k - self.k_min) as usize].clone());
        }
        let (boundary, factor) = self.tail_factor(k)?;
        Ok(&self.level_mass[boundary] * factor)
    }

    /// `μ(B_i) = μ(f^0(B_i))`.
    pub fn mu_cell(&self, cell: usize) -> &Rational {
        &self.mu[(-self.k_min) as usize][cell]
    }

    /// `μ(W)`.
    pub fn mu_wandering(&self) -> &Rational {
        &self.level_mass[(-self.k_min) as usize]
    }

    /// Whether the whole space has finite measure. Every pure window model is
    /// finite; with tails this holds iff both ratios are below one.
    pub fn has_finite_mass(&self) -> bool {
        match &self.tails {
            None => true,
            Some(t) => t.left < Rational::one() && t.right < Rational::one(),
        }
    }

    fn scaled(&self, k: i64, pick: impl Fn(&[Rational]) -> Rational) -> Result<Rational> {
        if self.in_window(k) {
            return Ok(pick(&self.mu[(k - self.k_min) as usize]));
        }
        let (boundary, factor) = self.tail_factor(k)?;
        Ok(pick(&self.mu[boundary]) * factor)
    }

    /// Boundary row index and geometric factor for a level outside the window.
    fn tail_factor(&self, k: i64) -> Result<(usize, Rational)> {
        let tails = self.tails.as_ref().ok_or(Error::OutsideWindow(k))?;
        if k < self.k_min {
            Ok((0, powi(&tails.left, self.k_min - k)))
        } else {
            Ok((
                self.mu.len() - 1,
                powi(&tails.right, k - self.k_max),
            ))
        }
    }

    /// Least `c ≥ 1` with `μ(f^{k∓1}(B_i)) ≤ c · μ(f^k(B_i))` for every level
    /// and cell, tails included. This bounds both `T_f` and its inverse.
    pub fn star_constant(&self) -> Rational {
        let mut c = Rational::one();
        for pair in self.mu.windows(2) {
            for (lo, hi) in pair[0].iter().zip(&pair[1]) {
                let up = hi / lo;
                let down = lo / hi;
                c = c.max(up).max(down);
            }
        }
        if let Some(t) = &self.tails {
            for r in [&t.left, &t.right] {
                c = c.max(r.clone()).max(r.recip());
            }
        }
        c
    }

    /// Least `K ≥ 1` with
    /// `μ(f^k W) μ(B_i) / K ≤ μ(f^k(B_i)) μ(W) ≤ K μ(f^k W) μ(B_i)`.
    ///
    /// Tail levels repeat the boundary proportions, so scanning the window is
    /// exhaustive.
    pub fn distortion_constant(&self) -> Rational {
        let total = self.mu_wandering();
        let mut k_const = Rational::one();
        for (row, mass) in self.mu.iter().zip(&self.level_mass) {
            for (cell, value) in row.iter().enumerate() {
                let rho = (value * total) / (mass * self.mu_cell(cell));
                k_const = k_const.max(rho.recip()).max(rho);
            }
        }
        k_const
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            p: self.p.clone(),
            window: WindowDoc {
                min: self.k_min,
                max: self.k_max,
            },
            cells: self.cells.clone(),
            mu: MuTable(
                self.mu
                    .iter()
                    .enumerate()
                    .map(|(o, row)| (self.k_min + o as i64, row.clone()))
                    .collect(),
            ),
            tails: self.tails.as_ref().map(|t| TailsDoc {
                left: t.left.clone(),
                right: t.right.clone(),
            }),
        }
    }

    pub fn from_doc(doc: SystemDoc) -> Result<Self> {
        let SystemDoc {
            p,
            window,
            cells,
            mu,
            tails,
        } = doc;
        if window.min > window.max {
            return Err(Error::EmptyWindow {
                min: window.min,
                max: window.max,
            });
        }
        let mut table = mu.0;
        if let Some((&k, _)) = table
            .iter()
            .find(|(k, _)| !(window.min..=window.max).contains(*k))
        {
            return Err(Error::StrayLevel(k));
        }
        let mut rows = Vec::new();
        for k in window.min..=window.max {
            rows.push(table.remove(&k).ok_or(Error::MissingLevel(k))?);
        }
        MeasureSystem::new(
            p,
            window.min,
            window.max,
            cells,
            rows,
            tails.map(|t| Tails::new(t.left, t.right)),
        )
    }

    /// Parses the JSON configuration. Syntax and type errors carry the line,
    /// column and field path; structural errors name the offending entry.
    pub fn from_json(text: &str) -> std::result::Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: SystemDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError {
                line: Some(inner.line()),
                column: Some(inner.column()),
                field: Some(path),
                message: inner.to_string(),
            }
        })?;
        MeasureSystem::from_doc(doc).map_err(|e| ConfigError {
            line: None,
            column: None,
            field: field_of(&e),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("system serializes")
    }
}

fn field_of(e: &Error) -> Option<String> {
    match e {
        Error::NonPositiveMeasure { k, cell } => Some(format!("mu.{k}[{cell}]")),
        Error::CellCountMismatch { k, .. } => Some(format!("mu.{k}")),
        Error::MissingLevel(k) | Error::StrayLevel(k) => Some(format!("mu.{k}")),
        Error::EmptyWindow { .. } | Error::WindowMissesZero { .. } => Some("window".into()),
        Error::NoCells => Some("cells".into()),
        Error::NonPositiveTail { side } => Some(format!("tails.{side}")),
        Error::InvalidExponent(_) => Some("p".into()),
        _ => None,
    }
}

/// A configuration that failed to load, with as much location as is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, "line {l}, column {c}: ")?;
        }
        if let Some(field) = self.field.as_deref().filter(|s| !s.is_empty() && *s != ".") {
            write!(f, "field `{field}`: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Wire form of a [`MeasureSystem`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub p: Exponent,
    pub window: WindowDoc,
    pub cells: Vec<String>,
    pub mu: MuTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tails: Option<TailsDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDoc {
    pub min: i64,
    pub max: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailsDoc {
    #[serde(with = "crate::rational::serde_rational")]
    pub left: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub right: Rational,
}

/// Level-keyed measure rows, serialized in numeric level order.
#[derive(Clone, Debug, Default)]
pub struct MuTable(pub BTreeMap<i64, Vec<Rational>>);

impl Serialize for MuTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, row) in &self.0 {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            map.serialize_entry(&k.to_string(), &row)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for MuTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BTreeMap::<String, Vec<String>>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (key, row) in raw {
            let k: i64 = key
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("level key {key:?} is not an integer")))?;
            let row = row
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_rational(s).map_err(|e| D::Error::custom(format!("mu.{k}[{i}]: {e}")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if out.insert(k, row).is_some() {
                return Err(D::Error::custom(format!("duplicate level {k}")));
            }
        }
        Ok(MuTable(out))
    }
}
