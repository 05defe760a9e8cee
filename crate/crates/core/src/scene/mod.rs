//! Scene state: a bounded floor holding catalog objects that may not
//! overlap.
//!
//! Objects are placed either on one of the nine global cells (three
//! columns by three rows) or relative to an object already in the scene.
//! Every placed object gets a reference name that is never handed out
//! twice during the life of a scene.

mod geometry;

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use geometry::{Aabb, Footprint};

pub const DEFAULT_FLOOR_WIDTH: f64 = 30.0;
pub const DEFAULT_FLOOR_DEPTH: f64 = 30.0;
/// Clearance left between an anchor and an object placed next to it.
pub const DEFAULT_GAP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("the position is already taken by {0}")]
    Occupied(String),
    #[error("{0} would not fit inside the floor at that position")]
    OutOfBounds(String),
    #[error("{0} is not an available object")]
    UnknownPrototype(String),
    #[error("there is no object called {0} to use as a reference")]
    UnknownAnchor(String),
    #[error("there is no object called {0} in the scene")]
    NotFound(String),
    #[error("'{pos_x}' / '{pos_y}' is not a valid position")]
    InvalidPosition { pos_x: String, pos_y: String },
    #[error("invalid scene: {0}")]
    Invalid(String),
}

impl SceneError {
    /// Stable machine-readable code, used on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            SceneError::Occupied(_) => "occupied",
            SceneError::OutOfBounds(_) => "out_of_bounds",
            SceneError::UnknownPrototype(_) => "unknown_prototype",
            SceneError::UnknownAnchor(_) => "unknown_anchor",
            SceneError::NotFound(_) => "not_found",
            SceneError::InvalidPosition { .. } => "invalid_position",
            SceneError::Invalid(_) => "invalid_scene",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    Left,
    Center,
    Right,
}

impl Column {
    pub const ALL: [Column; 3] = [Column::Left, Column::Center, Column::Right];

    pub fn parse(token: &str) -> Option<Self> {
        match token.trim().to_ascii_lowercase().as_str() {
            "left" => Some(Column::Left),
            "center" => Some(Column::Center),
            "right" => Some(Column::Right),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Column::Left => "left",
            Column::Center => "center",
            Column::Right => "right",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Column::Left => -1.0,
            Column::Center => 0.0,
            Column::Right => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Row {
    Front,
    Center,
    Back,
}

impl Row {
    pub const ALL: [Row; 3] = [Row::Front, Row::Center, Row::Back];

    pub fn parse(token: &str) -> Option<Self> {
        match token.trim().to_ascii_lowercase().as_str() {
            "front" => Some(Row::Front),
            "center" => Some(Row::Center),
            "back" => Some(Row::Back),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Row::Front => "front",
            Row::Center => "center",
            Row::Back => "back",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Row::Front => -1.0,
            Row::Center => 0.0,
            Row::Back => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    LeftOf,
    RightOf,
    Behind,
    InFrontOf,
}

impl Relation {
    pub const ALL: [Relation; 4] = [
        Relation::LeftOf,
        Relation::RightOf,
        Relation::Behind,
        Relation::InFrontOf,
    ];

    pub fn parse(token: &str) -> Option<Self> {
        let words: Vec<String> = token
            .split_whitespace()
            .map(str::to_ascii_lowercase)
            .collect();
        match words.join(" ").as_str() {
            "left of" => Some(Relation::LeftOf),
            "right of" => Some(Relation::RightOf),
            "behind" => Some(Relation::Behind),
            "in front of" => Some(Relation::InFrontOf),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::LeftOf => "left of",
            Relation::RightOf => "right of",
            Relation::Behind => "behind",
            Relation::InFrontOf => "in front of",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Placement {
    Global { col: Column, row: Row },
    Relative { relation: Relation, anchor: String },
}

impl Placement {
    /// Interprets the `(posX, posY)` string pair carried by add commands.
    ///
    /// A relation in `pos_x` selects relative placement with `pos_y` as the
    /// anchor's reference name; otherwise the pair must be a column and a
    /// row.
    pub fn from_tokens(pos_x: &str, pos_y: &str) -> Result<Self, SceneError> {
        if let Some(relation) = Relation::parse(pos_x) {
            if !pos_y.trim().is_empty() {
                return Ok(Placement::Relative {
                    relation,
                    anchor: pos_y.to_string(),
                });
            }
        } else if let (Some(col), Some(row)) = (Column::parse(pos_x), Row::parse(pos_y)) {
            return Ok(Placement::Global { col, row });
        }
        Err(SceneError::InvalidPosition {
            pos_x: pos_x.to_string(),
            pos_y: pos_y.to_string(),
        })
    }
}

/// Placeable prototypes keyed by name, in declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    prototypes: IndexMap<String, Footprint>,
}

impl Catalog {
    pub fn new<I, S>(entries: I) -> Result<Self, SceneError>
    where
        I: IntoIterator<Item = (S, Footprint)>,
        S: Into<String>,
    {
        let mut prototypes = IndexMap::new();
        for (name, footprint) in entries {
            let name = name.into();
            validate_prototype_name(&name)?;
            if !footprint.is_valid() {
                return Err(SceneError::Invalid(format!(
                    "prototype {name} has a non-positive or non-finite extent"
                )));
            }
            if prototypes.insert(name.clone(), footprint).is_some() {
                return Err(SceneError::Invalid(format!("duplicate prototype {name}")));
            }
        }
        Ok(Self { prototypes })
    }

    pub fn get(&self, name: &str) -> Option<&Footprint> {
        self.prototypes.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.prototypes.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.prototypes.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Footprint)> {
        self.prototypes.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }
}

// '#' is reserved for ref-name suffixes; '/' and ',' would be ambiguous on
// the wire and in listings.
fn validate_prototype_name(name: &str) -> Result<(), SceneError> {
    if name.trim().is_empty() || name.trim() != name {
        return Err(SceneError::Invalid(format!(
            "prototype name '{name}' is empty or has surrounding whitespace"
        )));
    }
    if let Some(c) = name
        .chars()
        .find(|c| matches!(c, '#' | '/' | '\\' | ',') || c.is_control())
    {
        return Err(SceneError::Invalid(format!(
            "prototype name '{name}' contains reserved character {c:?}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub ref_name: String,
    pub prototype: String,
    /// Box centre; `y` is half the height, the object rests on the floor.
    pub center: [f64; 3],
    pub footprint: Footprint,
}

impl SceneObject {
    pub fn aabb(&self) -> Aabb {
        self.footprint.aabb_at(self.center[0], self.center[2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    floor_width_x: f64,
    floor_depth_z: f64,
    gap: f64,
    objects: IndexMap<String, SceneObject>,
    name_counters: BTreeMap<String, u32>,
}

impl Default for Scene {
    fn default() -> Self {
        Self {
            floor_width_x: DEFAULT_FLOOR_WIDTH,
            floor_depth_z: DEFAULT_FLOOR_DEPTH,
            gap: DEFAULT_GAP,
            objects: IndexMap::new(),
            name_counters: BTreeMap::new(),
        }
    }
}

impl Scene {
    pub fn new(floor_width_x: f64, floor_depth_z: f64) -> Result<Self, SceneError> {
        Self::with_gap(floor_width_x, floor_depth_z, DEFAULT_GAP)
    }

    pub fn with_gap(floor_width_x: f64, floor_depth_z: f64, gap: f64) -> Result<Self, SceneError> {
        for (what, v) in [("floor width", floor_width_x), ("floor depth", floor_depth_z)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SceneError::Invalid(format!("{what} must be positive, got {v}")));
            }
        }
        if !(gap.is_finite() && gap >= 0.0) {
            return Err(SceneError::Invalid(format!("gap must be non-negative, got {gap}")));
        }
        Ok(Self {
            floor_width_x,
            floor_depth_z,
            gap,
            ..Default::default()
        })
    }

    /// Rebuilds a scene from persisted parts, re-checking every invariant.
    pub fn from_parts(
        floor_width_x: f64,
        floor_depth_z: f64,
        gap: f64,
        objects: Vec<SceneObject>,
        name_counters: BTreeMap<String, u32>,
    ) -> Result<Self, SceneError> {
        let mut scene = Self::with_gap(floor_width_x, floor_depth_z, gap)?;
        scene.name_counters = name_counters;
        for obj in objects {
            if !obj.footprint.is_valid() {
                return Err(SceneError::Invalid(format!("{} has an invalid footprint", obj.ref_name)));
            }
            let expected_y = obj.footprint.height_y / 2.0;
            if obj.center[1] != expected_y {
                return Err(SceneError::Invalid(format!("{} is not resting on the floor", obj.ref_name)));
            }
            let aabb = obj.aabb();
            if !aabb.within_floor(floor_width_x, floor_depth_z) {
                return Err(SceneError::Invalid(format!("{} lies outside the floor", obj.ref_name)));
            }
            if let Some(other) = scene.check_collision(&aabb) {
                return Err(SceneError::Invalid(format!("{} overlaps {other}", obj.ref_name)));
            }
            let issued = scene.name_counters.get(&obj.prototype).copied().unwrap_or(0);
            if ref_index(&obj.prototype, &obj.ref_name).is_none_or(|k| k > issued) {
                return Err(SceneError::Invalid(format!(
                    "{} is not a name issued for {} (counter {issued})",
                    obj.ref_name, obj.prototype
                )));
            }
            if scene.objects.contains_key(&obj.ref_name) {
                return Err(SceneError::Invalid(format!("duplicate object {}", obj.ref_name)));
            }
            scene.objects.insert(obj.ref_name.clone(), obj);
        }
        Ok(scene)
    }

    pub fn floor_width_x(&self) -> f64 {
        self.floor_width_x
    }

    pub fn floor_depth_z(&self) -> f64 {
        self.floor_depth_z
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn name_counters(&self) -> &BTreeMap<String, u32> {
        &self.name_counters
    }

    pub fn get(&self, ref_name: &str) -> Option<&SceneObject> {
        self.objects.get(ref_name)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Objects in insertion order.
    pub fn list_objects(&self) -> Vec<SceneObject> {
        self.objects.values().cloned().collect()
    }

    pub fn objects(&self) -> impl Iterator<Item = &SceneObject> {
        self.objects.values()
    }

    pub fn ref_names(&self) -> impl Iterator<Item = &str> {
        self.objects.keys().map(String::as_str)
    }

    /// Centre `(x, z)` of a global cell: columns sit at `-W/3, 0, +W/3`,
    /// rows at `-D/3` (front), `0`, `+D/3` (back).
    pub fn resolve_global(&self, col: Column, row: Row) -> (f64, f64) {
        (
            col.sign() * self.floor_width_x / 3.0,
            row.sign() * self.floor_depth_z / 3.0,
        )
    }

    /// Centre `(x, z)` for `prototype` placed next to `anchor_ref`, offset
    /// along one axis by both half extents plus the clearance gap.
    pub fn resolve_relative(
        &self,
        catalog: &Catalog,
        relation: Relation,
        anchor_ref: &str,
        prototype: &str,
    ) -> Result<(f64, f64), SceneError> {
        let anchor = self
            .objects
            .get(anchor_ref)
            .ok_or_else(|| SceneError::UnknownAnchor(anchor_ref.to_string()))?;
        let new = catalog
            .get(prototype)
            .ok_or_else(|| SceneError::UnknownPrototype(prototype.to_string()))?;
        let [ax, _, az] = anchor.center;
        let dx = anchor.footprint.half_width_x + new.half_width_x + self.gap;
        let dz = anchor.footprint.half_depth_z + new.half_depth_z + self.gap;
        Ok(match relation {
            Relation::LeftOf => (ax - dx, az),
            Relation::RightOf => (ax + dx, az),
            Relation::InFrontOf => (ax, az - dz),
            Relation::Behind => (ax, az + dz),
        })
    }

    /// Lexicographically smallest ref-name whose box overlaps `candidate`
    /// with positive volume.
    pub fn check_collision(&self, candidate: &Aabb) -> Option<&str> {
        self.objects
            .values()
            .filter(|o| o.aabb().overlaps(candidate))
            .map(|o| o.ref_name.as_str())
            .min()
    }

    /// Resolves, checks and inserts a new object, returning its ref-name.
    /// On error the scene is left untouched.
    pub fn add_object(
        &mut self,
        catalog: &Catalog,
        prototype: &str,
        placement: &Placement,
    ) -> Result<String, SceneError> {
        let footprint = *catalog
            .get(prototype)
            .ok_or_else(|| SceneError::UnknownPrototype(prototype.to_string()))?;
        let (x, z) = match placement {
            Placement::Global { col, row } => self.resolve_global(*col, *row),
            Placement::Relative { relation, anchor } => {
                self.resolve_relative(catalog, *relation, anchor, prototype)?
            }
        };
        let aabb = footprint.aabb_at(x, z);
        if !aabb.within_floor(self.floor_width_x, self.floor_depth_z) {
            return Err(SceneError::OutOfBounds(prototype.to_string()));
        }
        if let Some(blocker) = self.check_collision(&aabb) {
            return Err(SceneError::Occupied(blocker.to_string()));
        }

        let ref_name = self.next_ref_name(prototype);
        let counter = self.name_counters.entry(prototype.to_string()).or_insert(0);
        *counter += 1;
        self.objects.insert(
            ref_name.clone(),
            SceneObject {
                ref_name: ref_name.clone(),
                prototype: prototype.to_string(),
                center: [x, footprint.height_y / 2.0, z],
                footprint,
            },
        );
        Ok(ref_name)
    }

    /// Removes an object. Counters are kept, so its name is never reused.
    pub fn remove_object(&mut self, ref_name: &str) -> Result<SceneObject, SceneError> {
        self.objects
            .shift_remove(ref_name)
            .ok_or_else(|| SceneError::NotFound(ref_name.to_string()))
    }

    /// The name the next instance of `prototype` would receive: the bare
    /// prototype name the first time, `prototype#k` afterwards.
    pub fn next_ref_name(&self, prototype: &str) -> String {
        match self.name_counters.get(prototype).copied().unwrap_or(0) {
            0 => prototype.to_string(),
            n => format!("{prototype}#{}", n + 1),
        }
    }
}

/// Issue index of `ref_name` for `prototype`: 1 for the bare name, `k` for
/// `prototype#k` (k >= 2).
fn ref_index(prototype: &str, ref_name: &str) -> Option<u32> {
    if ref_name == prototype {
        return Some(1);
    }
    let k: u32 = ref_name.strip_prefix(prototype)?.strip_prefix('#')?.parse().ok()?;
    (k >= 2).then_some(k)
}
