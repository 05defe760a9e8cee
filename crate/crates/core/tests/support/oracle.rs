// Brute-force reference model of scene placement, written without reusing
// any engine code. Boxes are kept in a plain Vec and every check scans all
// of them.

#![allow(dead_code)]

#[derive(Debug, Clone)]
pub struct Proto {
    pub name: String,
    pub hw: f64,
    pub hd: f64,
    pub h: f64,
}

#[derive(Debug, Clone)]
pub struct OBox {
    pub name: String,
    pub proto: String,
    pub x: f64,
    pub z: f64,
    pub hw: f64,
    pub hd: f64,
    pub h: f64,
}

#[derive(Debug, Clone)]
pub enum Cmd {
    /// col and row in -1..=1: left/front = -1, right/back = +1.
    Global { proto: String, col: i32, row: i32 },
    /// rel: 0 left of, 1 right of, 2 behind, 3 in front of.
    Relative { proto: String, rel: usize, anchor: String },
    Remove(String),
}

pub const COLS: [&str; 3] = ["left", "center", "right"];
pub const ROWS: [&str; 3] = ["front", "center", "back"];
pub const RELS: [&str; 4] = ["left of", "right of", "behind", "in front of"];

impl Cmd {
    /// The (objName, posX, posY) strings the wire would carry.
    pub fn add_tokens(&self) -> Option<(String, String, String)> {
        match self {
            Cmd::Global { proto, col, row } => Some((
                proto.clone(),
                COLS[(col + 1) as usize].to_string(),
                ROWS[(row + 1) as usize].to_string(),
            )),
            Cmd::Relative { proto, rel, anchor } => Some((proto.clone(), RELS[*rel].to_string(), anchor.clone())),
            Cmd::Remove(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expect {
    Added { ref_name: String, x: f64, z: f64 },
    Removed(String),
    Rejected(&'static str),
}

pub struct Oracle {
    pub w: f64,
    pub d: f64,
    pub gap: f64,
    pub protos: Vec<Proto>,
    pub boxes: Vec<OBox>,
    issued: Vec<(String, u32)>,
}

impl Oracle {
    pub fn new(w: f64, d: f64, gap: f64, protos: Vec<Proto>) -> Self {
        Self {
            w,
            d,
            gap,
            protos,
            boxes: Vec::new(),
            issued: Vec::new(),
        }
    }

    fn proto(&self, name: &str) -> Option<&Proto> {
        self.protos.iter().find(|p| p.name == name)
    }

    pub fn apply(&mut self, cmd: &Cmd) -> Expect {
        match cmd {
            Cmd::Remove(r) => match self.boxes.iter().position(|b| &b.name == r) {
                Some(i) => {
                    self.boxes.remove(i);
                    Expect::Removed(r.clone())
                }
                None => Expect::Rejected("not_found"),
            },
            Cmd::Global { proto, col, row } => {
                let Some(p) = self.proto(proto).cloned() else {
                    return Expect::Rejected("unknown_prototype");
                };
                let x = *col as f64 * self.w / 3.0;
                let z = *row as f64 * self.d / 3.0;
                self.place(&p, x, z)
            }
            Cmd::Relative { proto, rel, anchor } => {
                let Some(p) = self.proto(proto).cloned() else {
                    return Expect::Rejected("unknown_prototype");
                };
                let Some(a) = self.boxes.iter().find(|b| &b.name == anchor).cloned() else {
                    return Expect::Rejected("unknown_anchor");
                };
                let (x, z) = match rel {
                    0 => (a.x - (a.hw + p.hw + self.gap), a.z),
                    1 => (a.x + (a.hw + p.hw + self.gap), a.z),
                    2 => (a.x, a.z + (a.hd + p.hd + self.gap)),
                    3 => (a.x, a.z - (a.hd + p.hd + self.gap)),
                    _ => unreachable!(),
                };
                self.place(&p, x, z)
            }
        }
    }

    fn place(&mut self, p: &Proto, x: f64, z: f64) -> Expect {
        let (hx, hz) = (self.w / 2.0, self.d / 2.0);
        if x - p.hw < -hx || x + p.hw > hx || z - p.hd < -hz || z + p.hd > hz {
            return Expect::Rejected("out_of_bounds");
        }
        let hit = self.boxes.iter().any(|b| {
            let sx = (x - p.hw) < (b.x + b.hw) && (b.x - b.hw) < (x + p.hw);
            let sz = (z - p.hd) < (b.z + b.hd) && (b.z - b.hd) < (z + p.hd);
            // both boxes stand on the floor, so heights always overlap
            sx && sz && p.h > 0.0 && b.h > 0.0
        });
        if hit {
            return Expect::Rejected("occupied");
        }
        let n = match self.issued.iter_mut().find(|(k, _)| *k == p.name) {
            Some((_, n)) => {
                *n += 1;
                *n
            }
            None => {
                self.issued.push((p.name.clone(), 1));
                1
            }
        };
        let name = if n == 1 { p.name.clone() } else { format!("{}#{}", p.name, n) };
        self.boxes.push(OBox {
            name: name.clone(),
            proto: p.name.clone(),
            x,
            z,
            hw: p.hw,
            hd: p.hd,
            h: p.h,
        });
        Expect::Added { ref_name: name, x, z }
    }

    /// Pairwise no-overlap and containment over the current boxes.
    pub fn invariants_hold(&self) -> bool {
        let (hx, hz) = (self.w / 2.0, self.d / 2.0);
        let inside = self
            .boxes
            .iter()
            .all(|b| b.x - b.hw >= -hx && b.x + b.hw <= hx && b.z - b.hd >= -hz && b.z + b.hd <= hz);
        let disjoint = self.boxes.iter().enumerate().all(|(i, a)| {
            self.boxes[i + 1..].iter().all(|b| {
                !((a.x - a.hw) < (b.x + b.hw)
                    && (b.x - b.hw) < (a.x + a.hw)
                    && (a.z - a.hd) < (b.z + b.hd)
                    && (b.z - b.hd) < (a.z + a.hd))
            })
        });
        inside && disjoint
    }
}

/// Random workload: a small floor so that collisions and bound violations
/// are common, extents on a 0.25 grid so that touching cases are exact.
pub mod gen {
    use super::*;
    use rand::Rng;

    pub const NAMES: [&str; 5] = ["Yaskawa MA2010", "ABB IRB 2600", "Pallet", "Crate (large)", "Tisch 100%"];

    pub fn protos<R: Rng>(rng: &mut R) -> Vec<Proto> {
        NAMES
            .iter()
            .map(|n| Proto {
                name: n.to_string(),
                hw: rng.random_range(1..=8) as f64 * 0.25,
                hd: rng.random_range(1..=8) as f64 * 0.25,
                h: rng.random_range(1..=8) as f64 * 0.25,
            })
            .collect()
    }

    pub fn floor<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
        const SIZES: [f64; 5] = [6.0, 7.5, 9.0, 12.0, 15.0];
        const GAPS: [f64; 3] = [0.0, 0.25, 0.5];
        (
            SIZES[rng.random_range(0..SIZES.len())],
            SIZES[rng.random_range(0..SIZES.len())],
            GAPS[rng.random_range(0..GAPS.len())],
        )
    }

    /// Next command given the oracle's live refs. Mostly placements, with
    /// occasional removals, bogus anchors and unknown prototypes.
    pub fn cmd<R: Rng>(rng: &mut R, live: &[String]) -> Cmd {
        let proto = if rng.random_bool(0.03) {
            "Unobtainium".to_string()
        } else {
            NAMES[rng.random_range(0..NAMES.len())].to_string()
        };
        match rng.random_range(0..10) {
            0 if !live.is_empty() => Cmd::Remove(live[rng.random_range(0..live.len())].clone()),
            0 => Cmd::Remove("ghost".into()),
            1..=4 => Cmd::Global {
                proto,
                col: rng.random_range(-1..=1),
                row: rng.random_range(-1..=1),
            },
            _ => {
                let anchor = if live.is_empty() || rng.random_bool(0.05) {
                    "nowhere".to_string()
                } else {
                    live[rng.random_range(0..live.len())].clone()
                };
                Cmd::Relative {
                    proto,
                    rel: rng.random_range(0..4),
                    anchor,
                }
            }
        }
    }
}
