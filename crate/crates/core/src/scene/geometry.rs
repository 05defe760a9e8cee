//! Axis-aligned boxes resting on the floor plane.
//!
//! The floor is centred on the origin: `+x` points right, `-z` points to
//! the front (towards the viewer) and `+y` is up.

use serde::{Deserialize, Serialize};

/// Half extents on the floor plane plus full height of a prototype.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Footprint {
    pub half_width_x: f64,
    pub half_depth_z: f64,
    pub height_y: f64,
}

impl Footprint {
    pub fn new(half_width_x: f64, half_depth_z: f64, height_y: f64) -> Self {
        Self {
            half_width_x,
            half_depth_z,
            height_y,
        }
    }

    pub fn is_valid(&self) -> bool {
        [self.half_width_x, self.half_depth_z, self.height_y]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }

    /// Box of this footprint standing on the floor at `(x, z)`.
    pub fn aabb_at(&self, x: f64, z: f64) -> Aabb {
        Aabb {
            min: [x - self.half_width_x, 0.0, z - self.half_depth_z],
            max: [x + self.half_width_x, self.height_y, z + self.half_depth_z],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    /// True when the intersection has positive volume. Touching faces,
    /// edges or corners do not count.
    pub fn overlaps(&self, other: &Aabb) -> bool {
        (0..3).all(|i| self.min[i] < other.max[i] && other.min[i] < self.max[i])
    }

    /// Containment in the floor rectangle `[-w/2, w/2] x [-d/2, d/2]`,
    /// boundary inclusive.
    pub fn within_floor(&self, floor_width_x: f64, floor_depth_z: f64) -> bool {
        let hx = floor_width_x / 2.0;
        let hz = floor_depth_z / 2.0;
        self.min[0] >= -hx && self.max[0] <= hx && self.min[2] >= -hz && self.max[2] <= hz
    }
}
