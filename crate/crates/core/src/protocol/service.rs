//! The scene listener's request handling, independent of any transport.

use serde::{Deserialize, Serialize};

use super::wire::{SceneCommandRequest, SceneCommandResponse};
use super::{ClientError, SceneClient};
use crate::scene::{Catalog, Footprint, Placement, Scene};

/// Scene plus catalog plus the version counter bumped on every successful
/// mutation.
#[derive(Debug, Clone)]
pub struct SceneService {
    scene: Scene,
    catalog: Catalog,
    version: u64,
}

impl SceneService {
    pub fn new(scene: Scene, catalog: Catalog) -> Self {
        Self {
            scene,
            catalog,
            version: 0,
        }
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn ref_names(&self) -> Vec<String> {
        self.scene.ref_names().map(str::to_string).collect()
    }

    pub fn execute(&mut self, req: &SceneCommandRequest) -> SceneCommandResponse {
        if let Err(e) = req.validate() {
            return (&e).into();
        }
        match req {
            SceneCommandRequest::Add { obj_name, pos_x, pos_y } => {
                match Placement::from_tokens(pos_x, pos_y)
                    .and_then(|p| self.scene.add_object(&self.catalog, obj_name, &p))
                {
                    Ok(ref_name) => {
                        self.version += 1;
                        SceneCommandResponse::Done(ref_name)
                    }
                    Err(e) => (&e).into(),
                }
            }
            SceneCommandRequest::Remove { ref_name } => match self.scene.remove_object(ref_name) {
                Ok(obj) => {
                    self.version += 1;
                    SceneCommandResponse::Done(obj.ref_name)
                }
                Err(e) => (&e).into(),
            },
            SceneCommandRequest::List => {
                let names: Vec<&str> = self.scene.ref_names().collect();
                SceneCommandResponse::Done(names.join(", "))
            }
        }
    }

    /// Decodes a request path and executes it. Malformed paths are answered
    /// with an error and never touch the scene.
    pub fn handle_path(&mut self, path: &str) -> SceneCommandResponse {
        match SceneCommandRequest::decode(path) {
            Ok(req) => self.execute(&req),
            Err(e) => (&e).into(),
        }
    }

    pub fn snapshot(&self) -> SceneSnapshot {
        SceneSnapshot {
            scene_version: self.version,
            floor: Floor {
                width_x: self.scene.floor_width_x(),
                depth_z: self.scene.floor_depth_z(),
            },
            gap: self.scene.gap(),
            objects: self
                .scene
                .objects()
                .map(|o| ObjectView {
                    ref_name: o.ref_name.clone(),
                    prototype: o.prototype.clone(),
                    center: o.center,
                    extents: o.footprint,
                })
                .collect(),
        }
    }
}

/// In-process client that still goes through the wire encoding, so local
/// runs exercise the same path and body formats as the HTTP listener.
pub struct LocalSceneClient<'a> {
    service: &'a mut SceneService,
}

impl<'a> LocalSceneClient<'a> {
    pub fn new(service: &'a mut SceneService) -> Self {
        Self { service }
    }
}

impl SceneClient for LocalSceneClient<'_> {
    fn send(&mut self, req: &SceneCommandRequest) -> Result<SceneCommandResponse, ClientError> {
        let body = self.service.handle_path(&req.encode()).to_body();
        SceneCommandResponse::parse_body(&body).map_err(|e| ClientError::Transport(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Floor {
    pub width_x: f64,
    pub depth_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectView {
    pub ref_name: String,
    pub prototype: String,
    pub center: [f64; 3],
    pub extents: Footprint,
}

/// Scene state document served to viewers; objects in insertion order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSnapshot {
    pub scene_version: u64,
    pub floor: Floor,
    pub gap: f64,
    pub objects: Vec<ObjectView>,
}
