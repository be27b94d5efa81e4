//! A free double cover together with a degree-3 map of its base to a tree.

use serde_json::{json, Map, Value};

use super::{DoubleCover, HarmonicMorphism};
use crate::error::{Error, Result};
use crate::graph::json::{as_obj, graph_from_json, graph_to_json};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub cover: DoubleCover,
    pub trig: HarmonicMorphism,
}

impl Tower {
    pub fn new(cover: DoubleCover, trig: HarmonicMorphism) -> Result<Tower> {
        let t = Tower { cover, trig };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cover.base != self.trig.source {
            return Err(Error::InvalidTower("cover base differs from the trigonal source".into()));
        }
        if !self.cover.is_free() {
            return Err(Error::InvalidTower("cover is not free".into()));
        }
        if !self.cover.is_connected_cover() {
            return Err(Error::InvalidTower("cover is disconnected".into()));
        }
        if !self.trig.target.is_connected() || self.trig.target.b1() != 0 {
            return Err(Error::InvalidTower("target is not a tree".into()));
        }
        self.trig
            .validate()
            .map_err(|e| Error::InvalidTower(e.to_string()))?;
        if self.trig.global_degree()? != 3 {
            return Err(Error::InvalidTower("trigonal map must have degree 3".into()));
        }
        if !self.trig.is_effective() {
            return Err(Error::InvalidTower("trigonal map is not effective".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let s = &self.trig.source;
        let t = &self.trig.target;
        let mut v = self.cover.to_json();
        let vm: Map<String, Value> = s
            .vertices
            .iter()
            .enumerate()
            .map(|(i, x)| (x.name.clone(), json!(t.vertices[self.trig.vertex_map[i]].name)))
            .collect();
        let hm: Map<String, Value> = (0..2 * s.num_edges())
            .map(|h| {
                let th = self.trig.half_edge_map[h];
                (
                    format!("{}.{}", s.edges[h / 2].name, h % 2),
                    json!(format!("{}.{}", t.edges[th / 2].name, th % 2)),
                )
            })
            .collect();
        let vd: Map<String, Value> = s
            .vertices
            .iter()
            .zip(&self.trig.vertex_degree)
            .map(|(x, d)| (x.name.clone(), json!(d)))
            .collect();
        let ed: Map<String, Value> = s
            .edges
            .iter()
            .zip(&self.trig.edge_degree)
            .map(|(x, d)| (x.name.clone(), json!(d)))
            .collect();
        v["tree"] = graph_to_json(t);
        v["vertex_map"] = Value::Object(vm);
        v["half_edge_map"] = Value::Object(hm);
        v["local_degrees"] = json!({"vertices": vd, "edges": ed});
        v
    }

    pub fn from_json(v: &Value) -> Result<Tower> {
        let cover = DoubleCover::from_json(v)?;
        let obj = as_obj(v, "tower")?;
        let tree_v = obj
            .get("tree")
            .ok_or_else(|| Error::Parse("tower: missing field 'tree'".into()))?;
        let target = graph_from_json(tree_v)?;
        let s = &cover.base;
        let get = |key: &str| -> Result<&Map<String, Value>> {
            as_obj(
                obj.get(key)
                    .ok_or_else(|| Error::Parse(format!("tower: missing field '{key}'")))?,
                key,
            )
        };
        let str_of = |m: &Map<String, Value>, k: &str, ctx: &str| -> Result<String> {
            m.get(k)
                .and_then(|x| x.as_str())
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("{ctx}: missing entry '{k}'")))
        };
        let vm = get("vertex_map")?;
        let mut vertex_map = Vec::new();
        for x in &s.vertices {
            let name = str_of(vm, &x.name, "vertex_map")?;
            vertex_map.push(target.vertex_index(&name)?);
        }
        let hm = get("half_edge_map")?;
        let mut half_edge_map = Vec::new();
        for h in 0..2 * s.num_edges() {
            let key = format!("{}.{}", s.edges[h / 2].name, h % 2);
            let val = str_of(hm, &key, "half_edge_map")?;
            let (e, side) = val
                .rsplit_once('.')
                .ok_or_else(|| Error::Parse(format!("half_edge_map: bad entry '{val}'")))?;
            let side: usize = side
                .parse()
                .ok()
                .filter(|&x| x < 2)
                .ok_or_else(|| Error::Parse(format!("half_edge_map: bad side in '{val}'")))?;
            half_edge_map.push(2 * target.edge_index(e)? + side);
        }
        let ld = get("local_degrees")?;
        let deg = |key: &str, names: Vec<&String>| -> Result<Vec<u32>> {
            let m = as_obj(
                ld.get(key)
                    .ok_or_else(|| Error::Parse(format!("local_degrees: missing '{key}'")))?,
                key,
            )?;
            names
                .into_iter()
                .map(|n| {
                    m.get(n)
                        .and_then(|x| x.as_u64())
                        .map(|x| x as u32)
                        .ok_or_else(|| Error::Parse(format!("local_degrees.{key}: missing '{n}'")))
                })
                .collect()
        };
        let vertex_degree = deg("vertices", s.vertices.iter().map(|x| &x.name).collect())?;
        let edge_degree = deg("edges", s.edges.iter().map(|x| &x.name).collect())?;
        let trig = HarmonicMorphism {
            source: s.clone(),
            target,
            vertex_map,
            half_edge_map,
            vertex_degree,
            edge_degree,
        };
        Tower::new(cover, trig)
    }

    pub fn parse(text: &str) -> Result<Tower> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Tower::from_json(&v)
    }
}
