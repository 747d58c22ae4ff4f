//! The JSON diagram format and command reports.
//!
//! ```json
//! {
//!   "diagram": { "kind": "pair", "roles": { "f": "f", "g": "g" } },
//!   "field": { "kind": "Q" },
//!   "morphisms": {
//!     "f": { "dst": "B", "matrix": [["1"], ["0"]], "src": "A" },
//!     "g": { "dst": "C", "matrix": [["0", "1"]], "src": "B" }
//!   },
//!   "objects": { "A": 1, "B": 2, "C": 1 }
//! }
//! ```
//!
//! Matrices are lists of rows (one per dimension of `dst`) of scalar
//! strings. Output is canonical: keys sorted, scalars in lowest terms or
//! as residues in `0..p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::category::{Mor, Obj};
use crate::error::{Error, Result};
use crate::gen::GenConfig;
use crate::matrix::Matrix;
use crate::scalar::ScalarField;
use crate::snake::SnakeInput;
use crate::squares::Square;

// Struct fields are declared in alphabetical order so serialization is
// sorted whether or not serde_json preserves insertion order.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FieldSpec {
    Q,
    GFp { p: u64 },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<ScalarField> {
        match self {
            FieldSpec::Q => Ok(ScalarField::Rationals),
            FieldSpec::GFp { p } => ScalarField::prime(*p),
        }
    }

    pub fn from_field(field: ScalarField) -> Self {
        match field {
            ScalarField::Rationals => FieldSpec::Q,
            ScalarField::Prime(p) => FieldSpec::GFp { p: p as u64 },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub dst: String,
    pub matrix: Vec<Vec<String>>,
    pub src: String,
}

impl MorphismEntry {
    pub fn from_mor(src: &str, dst: &str, mor: &Mor) -> Self {
        let m = mor.matrix();
        let matrix = (0..m.rows())
            .map(|r| m.row(r).iter().map(|s| s.to_string()).collect())
            .collect();
        MorphismEntry { dst: dst.into(), matrix, src: src.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    Morphism,
    Pair,
    Square,
    Snake,
}

impl DiagramKind {
    pub fn roles(self) -> &'static [&'static str] {
        match self {
            DiagramKind::Morphism => &["f"],
            DiagramKind::Pair => &["f", "g"],
            DiagramKind::Square => &["bottom", "left", "right", "top"],
            DiagramKind::Snake => &["a", "b", "c", "d", "u", "v", "w"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    pub kind: DiagramKind,
    pub roles: BTreeMap<String, String>,
}

/// Provenance of generated files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInfo {
    pub density: f64,
    pub max_dim: usize,
    pub prng: String,
    pub seed: u64,
}

impl GeneratorInfo {
    pub fn from_config(cfg: &GenConfig) -> Self {
        GeneratorInfo {
            density: cfg.density,
            max_dim: cfg.max_dim,
            prng: crate::gen::PRNG_NAME.into(),
            seed: cfg.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub diagram: DiagramSpec,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
    pub morphisms: BTreeMap<String, MorphismEntry>,
    pub objects: BTreeMap<String, usize>,
}

/// Parses and fully validates a diagram file.
pub fn parse(text: &str) -> Result<DiagramFile> {
    let mut file: DiagramFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    file.check()?;
    // Canonical scalar text, so that serialize(parse(x)) is stable.
    let field = file.scalar_field()?;
    let names: Vec<String> = file.morphisms.keys().cloned().collect();
    for name in names {
        let mor = file.morphism_in(field, &name)?;
        let entry = file.morphisms.get_mut(&name).expect("listed above");
        *entry = MorphismEntry::from_mor(&entry.src, &entry.dst, &mor);
    }
    Ok(file)
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn serialize(file: &DiagramFile) -> String {
    to_canonical_json(file)
}

pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable");
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    text
}

impl DiagramFile {
    pub fn scalar_field(&self) -> Result<ScalarField> {
        self.field.to_field()
    }

    fn check(&self) -> Result<()> {
        let field = self.scalar_field()?;
        for name in self.morphisms.keys() {
            self.morphism_in(field, name)?;
        }
        let expected = self.diagram.kind.roles();
        let given: Vec<&str> = self.diagram.roles.keys().map(String::as_str).collect();
        if given != expected {
            return Err(Error::Parse(format!(
                "diagram kind {:?} needs roles {expected:?}, found {given:?}",
                self.diagram.kind
            )));
        }
        for (role, target) in &self.diagram.roles {
            if !self.morphisms.contains_key(target) {
                return Err(Error::Parse(format!("role {role}: unknown morphism {target:?}")));
            }
        }
        match self.diagram.kind {
            DiagramKind::Morphism => Ok(()),
            DiagramKind::Pair => self.pair().map(drop),
            DiagramKind::Square => self.square_roles().map(drop),
            DiagramKind::Snake => self.snake_roles().map(drop),
        }
    }

    fn object(&self, field: ScalarField, name: &str, context: &str) -> Result<Obj> {
        let dim = self
            .objects
            .get(name)
            .ok_or_else(|| Error::Parse(format!("{context}: unknown object {name:?}")))?;
        Ok(Obj::new(field, *dim))
    }

    fn morphism_in(&self, field: ScalarField, name: &str) -> Result<Mor> {
        let entry = self
            .morphisms
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown morphism {name:?}")))?;
        let ctx = format!("morphism {name}");
        let src = self.object(field, &entry.src, &ctx)?;
        let dst = self.object(field, &entry.dst, &ctx)?;
        if entry.matrix.len() != dst.dim {
            return Err(Error::Parse(format!(
                "{ctx}: {} rows but {} has dimension {}",
                entry.matrix.len(),
                entry.dst,
                dst.dim
            )));
        }
        let mut entries = Vec::with_capacity(src.dim * dst.dim);
        for (r, row) in entry.matrix.iter().enumerate() {
            if row.len() != src.dim {
                return Err(Error::Parse(format!(
                    "{ctx}: row {r} has {} entries but {} has dimension {}",
                    row.len(),
                    entry.src,
                    src.dim
                )));
            }
            for (c, text) in row.iter().enumerate() {
                let s = field.parse_scalar(text).map_err(|e| {
                    Error::Parse(format!("{ctx}: entry ({r}, {c}): {e}"))
                })?;
                entries.push(s);
            }
        }
        Mor::new(src, dst, Matrix::new(field, dst.dim, src.dim, entries)?)
    }

    /// Source and target object names of a morphism.
    pub fn endpoints(&self, name: &str) -> Result<(&str, &str)> {
        let e = self
            .morphisms
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown morphism {name:?}")))?;
        Ok((&e.src, &e.dst))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor> {
        self.morphism_in(self.scalar_field()?, name)
    }

    fn role_entry(&self, role: &str) -> Result<(&str, &MorphismEntry)> {
        let name = self
            .diagram
            .roles
            .get(role)
            .ok_or_else(|| Error::Parse(format!("missing role {role}")))?;
        Ok((name, &self.morphisms[name]))
    }

    pub fn role(&self, role: &str) -> Result<Mor> {
        let (name, _) = self.role_entry(role)?;
        self.morphism(name)
    }

    /// Checks that role `from`'s `end` object is named like role `to`'s
    /// `start` object.
    fn corners(&self, checks: &[(&str, bool, &str, bool)]) -> Result<()> {
        for &(r1, dst1, r2, dst2) in checks {
            let (_, e1) = self.role_entry(r1)?;
            let (_, e2) = self.role_entry(r2)?;
            let o1 = if dst1 { &e1.dst } else { &e1.src };
            let o2 = if dst2 { &e2.dst } else { &e2.src };
            if o1 != o2 {
                let end = |d| if d { "target" } else { "source" };
                return Err(Error::Parse(format!(
                    "{} of {r1} is {o1:?} but {} of {r2} is {o2:?}",
                    end(dst1),
                    end(dst2)
                )));
            }
        }
        Ok(())
    }

    pub fn pair(&self) -> Result<(Mor, Mor)> {
        self.corners(&[("f", true, "g", false)])?;
        Ok((self.role("f")?, self.role("g")?))
    }

    fn square_roles(&self) -> Result<()> {
        self.corners(&[
            ("top", false, "left", false),
            ("top", true, "right", false),
            ("left", true, "bottom", false),
            ("right", true, "bottom", true),
        ])
    }

    pub fn square(&self) -> Result<Square> {
        self.square_roles()?;
        Square::new(self.role("top")?, self.role("left")?, self.role("right")?, self.role("bottom")?)
    }

    fn snake_roles(&self) -> Result<()> {
        self.corners(&[
            ("a", true, "c", false),
            ("b", true, "d", false),
            ("u", false, "a", false),
            ("u", true, "b", false),
            ("v", false, "a", true),
            ("v", true, "b", true),
            ("w", false, "c", true),
            ("w", true, "d", true),
        ])
    }

    pub fn snake(&self) -> Result<SnakeInput> {
        self.snake_roles()?;
        Ok(SnakeInput {
            a: self.role("a")?,
            c: self.role("c")?,
            u: self.role("u")?,
            v: self.role("v")?,
            w: self.role("w")?,
            b: self.role("b")?,
            d: self.role("d")?,
        })
    }
}

/// Assembles diagram files from morphisms with named corners.
pub struct DiagramBuilder {
    field: ScalarField,
    objects: BTreeMap<String, usize>,
    morphisms: BTreeMap<String, MorphismEntry>,
    roles: BTreeMap<String, String>,
}

impl DiagramBuilder {
    pub fn new(field: ScalarField) -> Self {
        DiagramBuilder {
            field,
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            roles: BTreeMap::new(),
        }
    }

    /// Adds `mor: src → dst` under `name`, playing `role`.
    pub fn arrow(mut self, role: &str, name: &str, src: &str, dst: &str, mor: &Mor) -> Self {
        self.objects.insert(src.into(), mor.src().dim);
        self.objects.insert(dst.into(), mor.dst().dim);
        self.morphisms.insert(name.into(), MorphismEntry::from_mor(src, dst, mor));
        self.roles.insert(role.into(), name.into());
        self
    }

    pub fn build(self, kind: DiagramKind, generator: Option<GeneratorInfo>) -> DiagramFile {
        DiagramFile {
            diagram: DiagramSpec { kind, roles: self.roles },
            field: FieldSpec::from_field(self.field),
            generator,
            morphisms: self.morphisms,
            objects: self.objects,
        }
    }
}

pub fn pair_file(f: &Mor, g: &Mor, generator: Option<GeneratorInfo>) -> DiagramFile {
    DiagramBuilder::new(f.field())
        .arrow("f", "f", "A", "B", f)
        .arrow("g", "g", "B", "C", g)
        .build(DiagramKind::Pair, generator)
}

pub fn square_file(sq: &Square, generator: Option<GeneratorInfo>) -> DiagramFile {
    DiagramBuilder::new(sq.top.field())
        .arrow("top", "top", "A", "B", &sq.top)
        .arrow("left", "left", "A", "C", &sq.left)
        .arrow("right", "right", "B", "D", &sq.right)
        .arrow("bottom", "bottom", "C", "D", &sq.bottom)
        .build(DiagramKind::Square, generator)
}

pub fn snake_file(s: &SnakeInput, generator: Option<GeneratorInfo>) -> DiagramFile {
    DiagramBuilder::new(s.a.field())
        .arrow("a", "a", "A", "B", &s.a)
        .arrow("c", "c", "B", "C", &s.c)
        .arrow("u", "u", "A", "A'", &s.u)
        .arrow("v", "v", "B", "B'", &s.v)
        .arrow("w", "w", "C", "C'", &s.w)
        .arrow("b", "b", "A'", "B'", &s.b)
        .arrow("d", "d", "B'", "C'", &s.d)
        .build(DiagramKind::Snake, generator)
}

/// Output of every command. The process fails iff a verdict is false or a
/// violation is recorded; `flags` are informational.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub derived: BTreeMap<String, MorphismEntry>,
    pub flags: BTreeMap<String, bool>,
    pub objects: BTreeMap<String, usize>,
    pub ranks: BTreeMap<String, usize>,
    pub verdicts: BTreeMap<String, bool>,
    pub violations: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.verdicts.values().all(|&v| v)
    }

    pub fn verdict(&mut self, name: &str, value: bool) {
        self.verdicts.insert(name.into(), value);
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.flags.insert(name.into(), value);
    }

    /// Records a derived arrow together with its endpoint dimensions and
    /// its rank.
    pub fn derived(&mut self, name: &str, src: &str, dst: &str, mor: &Mor) {
        self.objects.insert(src.into(), mor.src().dim);
        self.objects.insert(dst.into(), mor.dst().dim);
        self.derived.insert(name.into(), MorphismEntry::from_mor(src, dst, mor));
        self.ranks.insert(name.into(), mor.rank());
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}
