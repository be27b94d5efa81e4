//! Conjectural second moments for covers of any genus: covers with no FS
//! sets (`q = 0`), and covers with one FS_2 set `{e, f}` and no larger FS
//! sets, where `q = p2(e, f) w0(G1) w0(G2)` over the two components left
//! after cutting `{e, f}`.

use serde_json::{json, Value};

use super::q::p2;
use super::{p_prym, w0_prym};
use crate::error::{Error, Result};
use crate::linear::qf;
use crate::matroid::fs_sets;
use crate::morphism::{DoubleCover, Mark};
use crate::poly::{MomentExpression, PiecewisePolynomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjectureClass {
    NoFs,
    UniqueFs2 { e: usize, f: usize },
}

impl ConjectureClass {
    pub fn to_json(&self, c: &DoubleCover) -> Value {
        match self {
            ConjectureClass::NoFs => json!({"class": "no FS sets"}),
            ConjectureClass::UniqueFs2 { e, f } => json!({
                "class": "unique FS2 set",
                "fs2": [c.base.edges[*e].name, c.base.edges[*f].name],
            }),
        }
    }
}

/// The class a cover falls in, or `None` if neither formula applies.
pub fn classify(c: &DoubleCover) -> Option<ConjectureClass> {
    let fs2 = fs_sets(c, 2);
    let max_n = c.undilated_edges().len();
    if (3..=max_n).any(|n| !fs_sets(c, n).is_empty()) {
        return None;
    }
    match fs2.len() {
        0 => Some(ConjectureClass::NoFs),
        1 => Some(ConjectureClass::UniqueFs2 {
            e: fs2[0][0],
            f: fs2[0][1],
        }),
        _ => None,
    }
}

/// `w0` of the cover restricted to one component of `base \ cut`.
fn component_w0(c: &DoubleCover, cut: &[usize], comp: usize, label: &[usize]) -> Result<Polynomial> {
    let verts: Vec<usize> = (0..c.base.num_vertices()).filter(|&v| label[v] == comp).collect();
    let edges: Vec<usize> = (0..c.base.num_edges())
        .filter(|i| !cut.contains(i) && label[c.base.edges[*i].ends[0]] == comp)
        .collect();
    let (g, vmap, _) = c.base.subgraph(&verts, &edges);
    let marks: Vec<Mark> = edges.iter().map(|&i| c.marks[i]).collect();
    let declared: Vec<usize> = verts.iter().filter(|&&v| c.dilated[v]).map(|v| vmap[v]).collect();
    let sub = DoubleCover::new(g, marks, &declared)?;
    w0_prym(&sub)
}

/// The conjectured `I2` expression, with the class it was derived from.
pub fn conjectural_i2(c: &DoubleCover, p_coefficient: i64) -> Result<Option<(ConjectureClass, MomentExpression)>> {
    if !c.is_connected_cover() {
        return Err(Error::DisconnectedCover);
    }
    let Some(class) = classify(c) else {
        return Ok(None);
    };
    let p = p_prym(c, p_coefficient)?;
    let numerator = match &class {
        ConjectureClass::NoFs => PiecewisePolynomial::from_poly(p),
        ConjectureClass::UniqueFs2 { e, f } => {
            let cut = [*e, *f];
            let (label, unb) = c.component_balance(|i| !cut.contains(&i));
            if unb.len() != 2 {
                return Err(Error::Internal("FS2 set does not split the graph in two".into()));
            }
            let w = component_w0(c, &cut, 0, &label)?.mul(&component_w0(c, &cut, 1, &label)?);
            let le = &c.base.edges[*e].length;
            let lf = &c.base.edges[*f].length;
            p2(le, lf).mul_poly(&w).add_poly(&p)
        }
    };
    Ok(Some((
        class,
        MomentExpression {
            numerator,
            radicand: w0_prym(c)?,
            scale: qf(1, 12),
        },
    )))
}
