//! Workspace loading and scene persistence.
//!
//! A workspace is a directory holding four TOML documents:
//!
//! * `nlu.toml`: intents and entities
//! * `plans.toml`: the agent's plan library
//! * `catalog.toml`: placeable prototypes
//! * `scene.toml`: floor size, clearance gap and the initial scene
//!   (optional; an empty 30 m x 30 m floor when absent)
//!
//! Every document carries `schema_version = 1` and unknown fields are
//! rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{parse_plan_library, Plan};
use crate::nlu::{NluConfig, ValueDomain};
use crate::scene::{Catalog, Footprint, Scene, SceneObject, DEFAULT_FLOOR_DEPTH, DEFAULT_FLOOR_WIDTH, DEFAULT_GAP};

pub const SCHEMA_VERSION: u32 = 1;

pub const NLU_FILE: &str = "nlu.toml";
pub const PLANS_FILE: &str = "plans.toml";
pub const CATALOG_FILE: &str = "catalog.toml";
pub const SCENE_FILE: &str = "scene.toml";

pub const DEFAULT_NLU: &str = include_str!("../workspace/nlu.toml");
pub const DEFAULT_PLANS: &str = include_str!("../workspace/plans.toml");
pub const DEFAULT_CATALOG: &str = include_str!("../workspace/catalog.toml");
pub const DEFAULT_SCENE: &str = include_str!("../workspace/scene.toml");

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl StoreError {
    fn invalid(path: &Path, message: impl ToString) -> Self {
        StoreError::Invalid {
            path: path.display().to_string(),
            message: message.to_string(),
        }
    }

    /// File the error refers to.
    pub fn path(&self) -> &str {
        match self {
            StoreError::Invalid { path, .. } | StoreError::Io { path, .. } => path,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkspaceConfig {
    pub nlu_path: PathBuf,
    pub plans_path: PathBuf,
    pub catalog_path: PathBuf,
    pub scene_path: PathBuf,
    pub floor_width_x: f64,
    pub floor_depth_z: f64,
    pub gap: f64,
    pub confidence_threshold: f64,
}

/// A validated workspace, ready to run.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub config: WorkspaceConfig,
    pub nlu: NluConfig,
    pub plans: Vec<Plan>,
    pub catalog: Catalog,
    pub scene: Scene,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDocument {
    schema_version: u32,
    #[serde(default)]
    prototypes: Vec<PrototypeDocument>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrototypeDocument {
    name: String,
    half_width_x: f64,
    half_depth_z: f64,
    height_y: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDocument {
    schema_version: u32,
    floor_width_x: f64,
    floor_depth_z: f64,
    #[serde(default = "default_gap")]
    gap: f64,
    #[serde(default)]
    counters: BTreeMap<String, u32>,
    #[serde(default)]
    objects: Vec<ObjectDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectDocument {
    ref_name: String,
    prototype: String,
    center: [f64; 3],
    footprint: Footprint,
}

fn default_gap() -> f64 {
    DEFAULT_GAP
}

fn check_version(found: u32) -> Result<(), String> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(format!("unsupported schema_version {found} (expected {SCHEMA_VERSION})"))
    }
}

pub fn parse_catalog(document: &str) -> Result<Catalog, String> {
    let doc: CatalogDocument = toml::from_str(document).map_err(|e| e.to_string())?;
    check_version(doc.schema_version)?;
    if doc.prototypes.is_empty() {
        return Err("the catalog has no prototypes".into());
    }
    Catalog::new(
        doc.prototypes
            .into_iter()
            .map(|p| (p.name, Footprint::new(p.half_width_x, p.half_depth_z, p.height_y))),
    )
    .map_err(|e| e.to_string())
}

pub fn parse_scene(document: &str) -> Result<Scene, String> {
    let doc: SceneDocument = toml::from_str(document).map_err(|e| e.to_string())?;
    check_version(doc.schema_version)?;
    let objects = doc
        .objects
        .into_iter()
        .map(|o| SceneObject {
            ref_name: o.ref_name,
            prototype: o.prototype,
            center: o.center,
            footprint: o.footprint,
        })
        .collect();
    Scene::from_parts(doc.floor_width_x, doc.floor_depth_z, doc.gap, objects, doc.counters)
        .map_err(|e| e.to_string())
}

/// Deterministic TOML rendering: objects in insertion order, counters
/// sorted by prototype.
pub fn render_scene(scene: &Scene) -> String {
    let doc = SceneDocument {
        schema_version: SCHEMA_VERSION,
        floor_width_x: scene.floor_width_x(),
        floor_depth_z: scene.floor_depth_z(),
        gap: scene.gap(),
        counters: scene.name_counters().clone(),
        objects: scene
            .objects()
            .map(|o| ObjectDocument {
                ref_name: o.ref_name.clone(),
                prototype: o.prototype.clone(),
                center: o.center,
                footprint: o.footprint,
            })
            .collect(),
    };
    toml::to_string(&doc).expect("scene documents always serialize")
}

pub fn save_scene(scene: &Scene, path: &Path) -> Result<(), StoreError> {
    fs::write(path, render_scene(scene)).map_err(|source| StoreError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_scene(path: &Path) -> Result<Scene, StoreError> {
    parse_scene(&read(path)?).map_err(|e| StoreError::invalid(path, e))
}

fn read(path: &Path) -> Result<String, StoreError> {
    fs::read_to_string(path).map_err(|source| StoreError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads and cross-checks every document of the workspace in `dir`.
pub fn load_workspace(dir: &Path) -> Result<Workspace, StoreError> {
    let nlu_path = dir.join(NLU_FILE);
    let plans_path = dir.join(PLANS_FILE);
    let catalog_path = dir.join(CATALOG_FILE);
    let scene_path = dir.join(SCENE_FILE);

    let nlu = NluConfig::from_toml(&read(&nlu_path)?).map_err(|e| StoreError::invalid(&nlu_path, e))?;
    let plans = parse_plan_library(&read(&plans_path)?).map_err(|e| StoreError::invalid(&plans_path, e))?;
    let catalog = parse_catalog(&read(&catalog_path)?).map_err(|e| StoreError::invalid(&catalog_path, e))?;
    let scene = if scene_path.exists() {
        load_scene(&scene_path)?
    } else {
        Scene::new(DEFAULT_FLOOR_WIDTH, DEFAULT_FLOOR_DEPTH).expect("default floor is valid")
    };

    assemble(nlu_path, plans_path, catalog_path, scene_path, nlu, plans, catalog, scene)
}

/// The workspace shipped with the crate.
pub fn default_workspace() -> Workspace {
    let base = PathBuf::from("<builtin>");
    assemble(
        base.join(NLU_FILE),
        base.join(PLANS_FILE),
        base.join(CATALOG_FILE),
        base.join(SCENE_FILE),
        NluConfig::from_toml(DEFAULT_NLU).expect("builtin nlu config"),
        default_plans(),
        parse_catalog(DEFAULT_CATALOG).expect("builtin catalog"),
        parse_scene(DEFAULT_SCENE).expect("builtin scene"),
    )
    .expect("builtin workspace is consistent")
}

pub fn default_plans() -> Vec<Plan> {
    parse_plan_library(DEFAULT_PLANS).expect("builtin plan library")
}

/// Writes the built-in documents into `dir`.
pub fn write_default_workspace(dir: &Path) -> Result<(), StoreError> {
    fs::create_dir_all(dir).map_err(|source| StoreError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for (name, body) in [
        (NLU_FILE, DEFAULT_NLU),
        (PLANS_FILE, DEFAULT_PLANS),
        (CATALOG_FILE, DEFAULT_CATALOG),
        (SCENE_FILE, DEFAULT_SCENE),
    ] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|source| StoreError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    nlu_path: PathBuf,
    plans_path: PathBuf,
    catalog_path: PathBuf,
    scene_path: PathBuf,
    nlu: NluConfig,
    plans: Vec<Plan>,
    catalog: Catalog,
    scene: Scene,
) -> Result<Workspace, StoreError> {
    for plan in &plans {
        if let Some(intent) = plan.triggering_intent() {
            match nlu.intent(intent) {
                Some(def) if def.fulfillment => {}
                Some(_) => {
                    return Err(StoreError::invalid(
                        &plans_path,
                        format!("plan {} reacts to {intent}, which has fulfillment off", plan.name),
                    ))
                }
                None => {
                    return Err(StoreError::invalid(
                        &plans_path,
                        format!("plan {} reacts to unknown intent {intent}", plan.name),
                    ))
                }
            }
        }
    }
    if !nlu.entities().iter().any(|e| e.domain == ValueDomain::CatalogName) {
        return Err(StoreError::invalid(&nlu_path, "no entity draws its values from the catalog"));
    }
    if let Some(obj) = scene.objects().find(|o| !catalog.contains(&o.prototype)) {
        return Err(StoreError::invalid(
            &scene_path,
            format!("object {} uses prototype {} which is not in the catalog", obj.ref_name, obj.prototype),
        ));
    }

    let config = WorkspaceConfig {
        nlu_path,
        plans_path,
        catalog_path,
        scene_path,
        floor_width_x: scene.floor_width_x(),
        floor_depth_z: scene.floor_depth_z(),
        gap: scene.gap(),
        confidence_threshold: nlu.confidence_threshold(),
    };
    Ok(Workspace {
        config,
        nlu,
        plans,
        catalog,
        scene,
    })
}
