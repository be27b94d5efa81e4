//! JSON graph format:
//! `{"vertices":[{"id":..,"genus":..}],"edges":[{"id":..,"ends":[..,..],"length":".."}]}`.

use std::collections::HashSet;

use serde_json::{json, Map, Value};

use super::Graph;
use crate::error::{Error, Result};
use crate::linear::LinearForm;

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("{ctx}: missing field '{key}'")))
}

pub(crate) fn as_obj<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{ctx}: expected an object")))
}

pub(crate) fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{ctx}: expected an array")))
}

pub(crate) fn as_str<'a>(v: &'a Value, ctx: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("{ctx}: expected a string")))
}

pub(crate) fn parse_length(v: &Value, ctx: &str) -> Result<LinearForm> {
    let f = match v {
        Value::String(s) => LinearForm::parse(s).map_err(|e| Error::Parse(format!("{ctx}: {e}")))?,
        Value::Number(n) if n.is_i64() => LinearForm::constant(crate::linear::q(n.as_i64().unwrap())),
        Value::Number(n) => LinearForm::parse(&n.to_string()).map_err(|e| Error::Parse(format!("{ctx}: {e}")))?,
        _ => return Err(Error::Parse(format!("{ctx}: length must be a string or number"))),
    };
    if !f.is_positive_on_orthant() {
        return Err(Error::Parse(format!("{ctx}: length '{f}' is not positive")));
    }
    Ok(f)
}

/// Parses a graph from a JSON value. Extra fields are ignored so cover and
/// tower files can reuse this.
pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let obj = as_obj(v, "graph")?;
    let mut g = Graph::new();
    for (i, vert) in as_array(field(obj, "vertices", "graph")?, "vertices")?.iter().enumerate() {
        let ctx = format!("vertices[{i}]");
        let o = as_obj(vert, &ctx)?;
        let id = as_str(field(o, "id", &ctx)?, &ctx)?;
        let genus = match o.get("genus") {
            None => 0,
            Some(x) => x
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("{ctx}: genus must be a nonnegative integer")))?
                as u32,
        };
        if g.vertex_index(id).is_ok() {
            return Err(Error::Parse(format!("{ctx}: duplicate vertex id '{id}'")));
        }
        g.add_vertex(id, genus);
    }
    let mut seen = HashSet::new();
    for (i, edge) in as_array(field(obj, "edges", "graph")?, "edges")?.iter().enumerate() {
        let ctx = format!("edges[{i}]");
        let o = as_obj(edge, &ctx)?;
        let id = as_str(field(o, "id", &ctx)?, &ctx)?;
        if !seen.insert(id.to_string()) {
            return Err(Error::Parse(format!("{ctx}: duplicate edge id '{id}'")));
        }
        let ends = as_array(field(o, "ends", &ctx)?, &ctx)?;
        if ends.len() != 2 {
            return Err(Error::Parse(format!("{ctx}: 'ends' must have two entries")));
        }
        let a = g
            .vertex_index(as_str(&ends[0], &ctx)?)
            .map_err(|e| Error::Parse(format!("{ctx}: {e}")))?;
        let b = g
            .vertex_index(as_str(&ends[1], &ctx)?)
            .map_err(|e| Error::Parse(format!("{ctx}: {e}")))?;
        let length = match o.get("length") {
            Some(l) => parse_length(l, &ctx)?,
            None => LinearForm::named(id),
        };
        g.add_edge(id, a, b, length);
    }
    Ok(g)
}

pub fn graph_to_json(g: &Graph) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| json!({"id": v.name, "genus": v.genus}))
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| {
            json!({
                "id": e.name,
                "ends": [g.vertices[e.ends[0]].name, g.vertices[e.ends[1]].name],
                "length": e.length.to_string(),
            })
        })
        .collect();
    json!({"vertices": vertices, "edges": edges})
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    graph_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dumbbell, theta};

    #[test]
    fn round_trip() {
        for g in [theta(), dumbbell()] {
            let s = graph_to_json(&g).to_string();
            assert_eq!(parse_graph(&s).unwrap(), g);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_graph(r#"{"vertices":[{"id":"a"}],"edges":[{"id":"e","ends":["a","b"]}]}"#).is_err());
        assert!(parse_graph(r#"{"vertices":[{"id":"a"}],"edges":[{"id":"e","ends":["a","a"],"length":"0"}]}"#).is_err());
        let g = parse_graph(r#"{"vertices":[{"id":"a","genus":1}],"edges":[{"id":"e","ends":["a","a"],"length":"3/2"}]}"#).unwrap();
        assert_eq!(g.genus().unwrap(), 2);
    }
}
