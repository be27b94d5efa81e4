//! The piecewise term `q` for free covers of trivalent graphs of genus at
//! most four, classified by FS2 and FS3 sets.
//!
//! Each genus-4 configuration is recognised from the FS sets alone: which
//! sets share edges, and what the components left after removing them look
//! like. Sub-cover volumes `w0(G'_i)` are computed on the component of
//! genus two left by removing an FS2 set.

use serde_json::{json, Value};

use super::{signs_of, w0_prym, AppendixReading};
use crate::error::{Error, Result};
use crate::linear::LinearForm;
use crate::matroid::fs_sets;
use crate::morphism::DoubleCover;
use crate::poly::{Cone, PiecewisePolynomial as PP, Polynomial};

/// The configuration a cover was matched to, with the edges playing each
/// role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCase {
    pub genus: usize,
    pub fs2: Vec<Vec<String>>,
    pub fs3: Vec<Vec<String>>,
    pub name: String,
    pub roles: Vec<(String, String)>,
}

impl QCase {
    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.genus,
            "configuration": self.name,
            "fs2": self.fs2,
            "fs3": self.fs3,
            "roles": self.roles.iter().map(|(r, e)| json!([r, e])).collect::<Vec<_>>(),
        })
    }
}

fn lin(f: &LinearForm) -> Polynomial {
    Polynomial::from_linear(f)
}

fn prod(fs: &[&LinearForm]) -> Polynomial {
    let mut p = Polynomial::one();
    for f in fs {
        p = p.mul(&lin(f));
    }
    p
}

fn cone(v: Vec<LinearForm>) -> Cone {
    Cone::from_ineqs(v)
}

/// `4x^2(3y - x)` where `x <= y`, symmetric.
pub fn p2(x: &LinearForm, y: &LinearForm) -> PP {
    let half = |a: &LinearForm, b: &LinearForm| {
        prod(&[a, a]).mul(&lin(&b.scale(&crate::linear::q(3)).sub(a))).scale_int(4)
    };
    PP::from_pieces(vec![
        (cone(vec![y.sub(x)]), half(x, y)),
        (cone(vec![x.sub(y)]), half(y, x)),
    ])
}

/// `2x^2(x^2 - 2xy - 2xz + 6yz)` where `x` is the smallest, symmetric.
pub fn p3(x: &LinearForm, y: &LinearForm, z: &LinearForm) -> PP {
    let piece = |a: &LinearForm, b: &LinearForm, c: &LinearForm| {
        let inner = prod(&[a, a])
            .sub(&prod(&[a, b]).scale_int(2))
            .sub(&prod(&[a, c]).scale_int(2))
            .add(&prod(&[b, c]).scale_int(6));
        prod(&[a, a]).mul(&inner).scale_int(2)
    };
    PP::from_pieces(vec![
        (cone(vec![y.sub(x), z.sub(x)]), piece(x, y, z)),
        (cone(vec![x.sub(y), z.sub(y)]), piece(y, x, z)),
        (cone(vec![x.sub(z), y.sub(z)]), piece(z, x, y)),
    ])
}

/// `2 s1^4 - 16 s1^2 s2 + 32 s2^2 + 16 s1 s3`.
pub fn s_poly(e1: &LinearForm, e2: &LinearForm, e3: &LinearForm) -> Polynomial {
    let s1 = lin(&e1.add(e2).add(e3));
    let s2 = prod(&[e1, e2]).add(&prod(&[e1, e3])).add(&prod(&[e2, e3]));
    let s3 = prod(&[e1, e2, e3]);
    s1.pow(4)
        .scale_int(2)
        .sub(&s1.pow(2).mul(&s2).scale_int(16))
        .add(&s2.pow(2).scale_int(32))
        .add(&s1.mul(&s3).scale_int(16))
}

struct Ctx<'a> {
    c: &'a DoubleCover,
}

struct Comp {
    verts: Vec<usize>,
    edges: Vec<usize>,
}

impl Comp {
    fn b1(&self) -> usize {
        self.edges.len() + 1 - self.verts.len()
    }
}

impl Ctx<'_> {
    fn len(&self, e: usize) -> LinearForm {
        self.c.base.edges[e].length.clone()
    }

    fn name(&self, e: usize) -> String {
        self.c.base.edges[e].name.clone()
    }

    fn comps(&self, removed: &[usize]) -> Vec<Comp> {
        let g = &self.c.base;
        let (label, n) = g.components_with(|i| !removed.contains(&i));
        let mut out: Vec<Comp> = (0..n)
            .map(|_| Comp {
                verts: Vec::new(),
                edges: Vec::new(),
            })
            .collect();
        for v in 0..g.num_vertices() {
            out[label[v]].verts.push(v);
        }
        for (i, e) in g.edges.iter().enumerate() {
            if !removed.contains(&i) {
                out[label[e.ends[0]]].edges.push(i);
            }
        }
        out
    }

    fn comp_of_genus(&self, removed: &[usize], genus: usize) -> Result<Comp> {
        let mut cs: Vec<Comp> = self.comps(removed).into_iter().filter(|c| c.b1() == genus).collect();
        if cs.len() != 1 {
            return Err(self.unmatched(&format!("no unique genus-{genus} component")));
        }
        Ok(cs.pop().unwrap())
    }

    fn sub_w0(&self, comp: &Comp) -> Result<Polynomial> {
        let (g, _, _) = self.c.base.subgraph(&comp.verts, &comp.edges);
        let sub = DoubleCover::free(g, &signs_of(self.c, &comp.edges))?;
        w0_prym(&sub)
    }

    /// `w0` of the genus-2 piece left by removing an FS2 set.
    fn w_rest(&self, fs2: &[usize]) -> Result<Polynomial> {
        self.sub_w0(&self.comp_of_genus(fs2, 2)?)
    }

    fn unmatched(&self, why: &str) -> Error {
        Error::UnmatchedConfiguration(why.to_string())
    }
}

fn shared(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| !b.contains(x)).collect()
}

/// `q` for a free cover of a trivalent graph of genus at most four.
pub fn q_free_trivalent(c: &DoubleCover, reading: AppendixReading) -> Result<(PP, QCase)> {
    let genus = c.base.genus()?;
    if genus > 4 {
        return Err(Error::GenusTooLarge(genus));
    }
    let ctx = Ctx { c };
    let fs2 = if genus >= 3 { fs_sets(c, 2) } else { Vec::new() };
    let fs3 = if genus >= 4 { fs_sets(c, 3) } else { Vec::new() };
    let names = |s: &Vec<Vec<usize>>| -> Vec<Vec<String>> {
        s.iter().map(|x| x.iter().map(|&e| ctx.name(e)).collect()).collect()
    };
    let mut case = QCase {
        genus,
        fs2: names(&fs2),
        fs3: names(&fs3),
        name: String::new(),
        roles: Vec::new(),
    };
    let mut roles: Vec<(&str, usize)> = Vec::new();
    let q = match genus {
        0..=2 => {
            case.name = "no FS sets".into();
            PP::zero()
        }
        3 => match fs2.len() {
            0 => {
                case.name = "no FS sets".into();
                PP::zero()
            }
            1 => {
                case.name = "one FS2 set".into();
                let (e, f) = (fs2[0][0], fs2[0][1]);
                roles.extend([("e", e), ("f", f)]);
                p2(&ctx.len(e), &ctx.len(f))
            }
            n => return Err(ctx.unmatched(&format!("genus 3 with {n} FS2 sets"))),
        },
        _ => genus4(&ctx, &fs2, &fs3, reading, &mut case, &mut roles)?,
    };
    case.roles = roles.into_iter().map(|(r, e)| (r.to_string(), ctx.name(e))).collect();
    Ok((q, case))
}

fn genus4(
    ctx: &Ctx,
    fs2: &[Vec<usize>],
    fs3: &[Vec<usize>],
    reading: AppendixReading,
    case: &mut QCase,
    roles: &mut Vec<(&'static str, usize)>,
) -> Result<PP> {
    let l = |e: usize| ctx.len(e);
    case.name = format!("{} FS2, {} FS3", fs2.len(), fs3.len());
    match (fs2.len(), fs3.len()) {
        (0, 0) => Ok(PP::zero()),
        (0, 1) => {
            let s = &fs3[0];
            roles.extend([("e", s[0]), ("f", s[1]), ("g", s[2])]);
            Ok(p3(&l(s[0]), &l(s[1]), &l(s[2])))
        }
        (1, 0) => {
            let (e, f) = (fs2[0][0], fs2[0][1]);
            roles.extend([("e", e), ("f", f)]);
            let w = ctx.w_rest(&fs2[0])?;
            Ok(p2(&l(e), &l(f)).mul_poly(&w))
        }
        (1, 1) => {
            let common = shared(&fs2[0], &fs3[0]);
            if common.len() != 1 {
                return Err(ctx.unmatched("FS2 and FS3 sets must share one edge"));
            }
            let e = common[0];
            let f = minus(&fs2[0], &[e])[0];
            let gh = minus(&fs3[0], &[e]);
            roles.extend([("e", e), ("f", f), ("g", gh[0]), ("h", gh[1])]);
            let (le, lf, lg, lh) = (l(e), l(f), l(gh[0]), l(gh[1]));
            let w = ctx.w_rest(&fs2[0])?;
            let a = p2(&le, &lf)
                .mul_poly(&w)
                .add_poly(&prod(&[&le, &le, &lg, &lh]).scale_int(12))
                .restrict(&cone(vec![lf.sub(&le)]));
            let two_e_f = le.scale(&crate::linear::q(2)).sub(&lf);
            let b = p3(&le.sub(&lf), &lg, &lh)
                .add(&p2(&lf, &le).mul_poly(&w))
                .add_poly(&prod(&[&lf, &lg, &lh, &two_e_f]).scale_int(12))
                .restrict(&cone(vec![le.sub(&lf)]));
            Ok(PP::union(vec![a, b]))
        }
        (1, 2) => {
            let pair = &fs2[0];
            let mut idx = Vec::new();
            for s in fs3 {
                let c = shared(s, pair);
                if c.len() != 1 {
                    return Err(ctx.unmatched("each FS3 set must meet the FS2 set once"));
                }
                idx.push((c[0], minus(s, &c)));
            }
            if idx[0].0 == idx[1].0 || !shared(&fs3[0], &fs3[1]).is_empty() {
                return Err(ctx.unmatched("FS3 sets must be disjoint"));
            }
            let (e1, fg1) = idx[0].clone();
            let (e2, fg2) = idx[1].clone();
            roles.extend([("e1", e1), ("f1", fg1[0]), ("g1", fg1[1]), ("e2", e2), ("f2", fg2[0]), ("g2", fg2[1])]);
            let w = ctx.w_rest(pair)?;
            let cone_piece = |ea: usize, fga: &[usize], eb: usize, fgb: &[usize]| {
                // cone ea <= eb
                let (la, lb) = (l(ea), l(eb));
                let (fa, ga, fb, gb) = (l(fga[0]), l(fga[1]), l(fgb[0]), l(fgb[1]));
                p3(&lb.sub(&la), &fb, &gb)
                    .add(&p2(&la, &lb).mul_poly(&w))
                    .add_poly(
                        &prod(&[&la, &la, &fb, &gb])
                            .scale_int(-12)
                            .add(&prod(&[&la, &lb, &fb, &gb]).scale_int(24))
                            .add(&prod(&[&la, &la, &fa, &ga]).scale_int(12)),
                    )
                    .restrict(&cone(vec![lb.sub(&la)]))
            };
            Ok(PP::union(vec![
                cone_piece(e1, &fg1, e2, &fg2),
                cone_piece(e2, &fg2, e1, &fg1),
            ]))
        }
        (2, 0) => {
            let common = shared(&fs2[0], &fs2[1]);
            match common.len() {
                0 => {
                    case.name = "2 FS2 (disjoint), 0 FS3".into();
                    let (a, b) = (&fs2[0], &fs2[1]);
                    roles.extend([("e1", a[0]), ("f1", a[1]), ("e2", b[0]), ("f2", b[1])]);
                    let t1 = p2(&l(a[0]), &l(a[1])).mul_poly(&ctx.w_rest(a)?);
                    let t2 = p2(&l(b[0]), &l(b[1])).mul_poly(&ctx.w_rest(b)?);
                    let cross = prod(&[&l(a[0]), &l(a[1]), &l(b[0]), &l(b[1])]).scale_int(24);
                    Ok(t1.add(&t2).add_poly(&cross))
                }
                1 => {
                    case.name = "2 FS2 (sharing an edge), 0 FS3".into();
                    let e = common[0];
                    let f = minus(&fs2[0], &[e])[0];
                    let g = minus(&fs2[1], &[e])[0];
                    roles.extend([("e", e), ("f", f), ("g", g)]);
                    // w0 of the genus-2 piece is the even loop h
                    let h = ctx.w_rest(&fs2[0])?;
                    Ok(p2(&l(e), &l(f).add(&l(g))).mul_poly(&h))
                }
                _ => Err(ctx.unmatched("two equal FS2 sets")),
            }
        }
        (2, 1) => {
            let s = &fs3[0];
            let common = shared(&shared(&fs2[0], &fs2[1]), s);
            if common.len() != 1 {
                return Err(ctx.unmatched("the three sets must share one edge"));
            }
            let e = common[0];
            let f1 = minus(&fs2[0], &[e])[0];
            let f2 = minus(&fs2[1], &[e])[0];
            let gh = minus(s, &[e]);
            roles.extend([("e", e), ("f1", f1), ("f2", f2), ("g", gh[0]), ("h", gh[1])]);
            let (le, lf1, lf2, lg, lh) = (l(e), l(f1), l(f2), l(gh[0]), l(gh[1]));
            let f12 = lf1.add(&lf2);
            let a = p2(&le, &f12)
                .mul_poly(&lin(&lg.add(&lh)))
                .add_poly(&prod(&[&le, &le, &lg, &lh]).scale_int(12))
                .restrict(&cone(vec![f12.sub(&le)]));
            let bracket = prod(&[&f12, &lg, &lh]).add(&prod(&[&lf1, &lf2, &lg.add(&lh)]));
            let b = p3(&le.sub(&f12), &lg, &lh)
                .add(&p2(&lf1, &le).mul_poly(&ctx.w_rest(&fs2[0])?))
                .add(&p2(&lf2, &le).mul_poly(&ctx.w_rest(&fs2[1])?))
                .add_poly(&lin(&le.scale(&crate::linear::q(2)).sub(&f12)).mul(&bracket).scale_int(12))
                .restrict(&cone(vec![le.sub(&f12)]));
            Ok(PP::union(vec![a, b]))
        }
        (2, 2) => two_two(ctx, fs2, fs3, roles),
        (3, k) => three_fs2(ctx, fs2, fs3, k, reading, case, roles),
        (a, b) => Err(ctx.unmatched(&format!("genus 4 with {a} FS2 and {b} FS3 sets"))),
    }
}

fn two_two(ctx: &Ctx, fs2: &[Vec<usize>], fs3: &[Vec<usize>], roles: &mut Vec<(&'static str, usize)>) -> Result<PP> {
    let (a, b) = (&fs2[0], &fs2[1]);
    if !shared(a, b).is_empty() {
        return Err(ctx.unmatched("FS2 sets must be disjoint"));
    }
    let (s, s2) = (&fs3[0], &fs3[1]);
    let g = shared(s, s2);
    let (sa, sb) = (shared(s, a), shared(s, b));
    if g.len() != 1 || sa.len() != 1 || sb.len() != 1 {
        return Err(ctx.unmatched("unexpected FS3 pattern"));
    }
    let (e1, f2, g) = (sa[0], sb[0], g[0]);
    let f1 = minus(a, &[e1])[0];
    let e2 = minus(b, &[f2])[0];
    if !(s2.contains(&e2) && s2.contains(&f1)) {
        return Err(ctx.unmatched("unexpected FS3 pattern"));
    }
    roles.extend([("e1", e1), ("f1", f1), ("e2", e2), ("f2", f2), ("g", g)]);
    let l = |e: usize| ctx.len(e);
    // W1 = w0(G'_1), the genus-2 piece containing G_1, left by removing {e2, f2}
    let w1 = ctx.w_rest(b)?;
    let w2 = ctx.w_rest(a)?;
    let lg = l(g);
    let swap = |e: [LinearForm; 4]| [e[2].clone(), e[3].clone(), e[0].clone(), e[1].clone()];
    // [e1, e2, f1, f2]
    let base = [l(e1), l(e2), l(f1), l(f2)];
    let both = |v: &[LinearForm; 4]| -> PP {
        let [e1, e2, f1, f2] = v;
        let poly = prod(&[e1, f2, f2])
            .add(&prod(&[e2, f1, f1]))
            .add(&prod(&[&e1.add(e2), f1, f2]).scale_int(2))
            .sub(&prod(&[&f1.add(f2), f1, f2]));
        p2(e1, f1)
            .mul_poly(&w2)
            .add(&p2(e2, f2).mul_poly(&w1))
            .add_poly(&lin(&lg).mul(&poly).scale_int(12))
            .add_poly(&prod(&[e1, e2, f1, f2]).scale_int(24))
            .restrict(&cone(vec![e1.sub(f1), e2.sub(f2)]))
    };
    let mixed = |v: &[LinearForm; 4]| -> PP {
        let [e1, e2, f1, f2] = v;
        let poly = prod(&[e1, e2, e2])
            .neg()
            .sub(&prod(&[f1, f1, f2]))
            .add(&prod(&[e2, e2, f1]))
            .add(&prod(&[e2, f1, f1]))
            .add(&prod(&[e1, e2, f2]).scale_int(2))
            .add(&prod(&[e1, f1, f2]).scale_int(2));
        p2(e1, f1)
            .mul_poly(&w2)
            .add(&p2(e2, f2).mul_poly(&w1))
            .add(&p3(&e1.sub(f1), &f2.sub(e2), &lg))
            .add_poly(&lin(&lg).mul(&poly).scale_int(12))
            .add_poly(&prod(&[e1, e2, f1, f2]).scale_int(24))
            .restrict(&cone(vec![e1.sub(f1), f2.sub(e2)]))
    };
    let swapped = swap(base.clone());
    Ok(PP::union(vec![both(&base), both(&swapped), mixed(&base), mixed(&swapped)]))
}

/// Roles for one of the three genus-1 pieces when there are three FS2 sets.
struct Piece {
    e: LinearForm,
    f: LinearForm,
    g: LinearForm,
    /// `f + g` when `{e, f, g}` is an FS3 set, `4f + g` for bridge and loop.
    a: LinearForm,
    fs3: bool,
    /// `w0(G'_i)`, the genus-2 piece containing `e_i`.
    w: Polynomial,
}

fn three_fs2(
    ctx: &Ctx,
    fs2: &[Vec<usize>],
    fs3: &[Vec<usize>],
    k: usize,
    reading: AppendixReading,
    case: &mut QCase,
    roles: &mut Vec<(&'static str, usize)>,
) -> Result<PP> {
    let mut es: Vec<usize> = fs2.iter().flatten().copied().collect();
    es.sort();
    es.dedup();
    if es.len() != 3 {
        return Err(ctx.unmatched("three FS2 sets must cover three edges"));
    }
    let g = &ctx.c.base;
    let mut pieces: Vec<(bool, usize, [usize; 3], Polynomial)> = Vec::new();
    for &e in &es {
        let others: Vec<usize> = es.iter().copied().filter(|&x| x != e).collect();
        if !fs2.iter().any(|s| s.contains(&others[0]) && s.contains(&others[1])) {
            return Err(ctx.unmatched("FS2 sets are not the three pairs"));
        }
        let gi = ctx.comp_of_genus(&others, 1)?;
        let w = ctx.w_rest(&others)?;
        if gi.edges.len() != 2 {
            return Err(ctx.unmatched("genus-1 piece must have two edges"));
        }
        let s3: Vec<&Vec<usize>> = fs3.iter().filter(|s| s.contains(&e)).collect();
        let (fs3_type, f, gg) = match s3.len() {
            1 => {
                let fg = minus(s3[0], &[e]);
                let mut want = gi.edges.clone();
                want.sort();
                let mut have = fg.clone();
                have.sort();
                if want != have {
                    return Err(ctx.unmatched("FS3 set does not match the genus-1 piece"));
                }
                (true, fg[0], fg[1])
            }
            0 => {
                let lp: Vec<usize> = gi.edges.iter().copied().filter(|&x| g.edges[x].is_loop()).collect();
                let br: Vec<usize> = gi.edges.iter().copied().filter(|&x| !g.edges[x].is_loop()).collect();
                if lp.len() != 1 || br.len() != 1 {
                    return Err(ctx.unmatched("genus-1 piece is not a bridge and a loop"));
                }
                (false, br[0], lp[0])
            }
            _ => return Err(ctx.unmatched("edge in two FS3 sets")),
        };
        pieces.push((fs3_type, e, [e, f, gg], w));
    }
    if pieces.iter().filter(|p| p.0).count() != k {
        return Err(ctx.unmatched("FS3 count mismatch"));
    }
    // pieces with an FS3 set first, as in the printed labelling
    pieces.sort_by_key(|p| (!p.0, p.1));
    let names = [("e1", "f1", "g1"), ("e2", "f2", "g2"), ("e3", "f3", "g3")];
    let mut ps = Vec::new();
    for (i, (t, _, [e, f, gg], w)) in pieces.into_iter().enumerate() {
        roles.extend([(names[i].0, e), (names[i].1, f), (names[i].2, gg)]);
        let (le, lf, lg) = (ctx.len(e), ctx.len(f), ctx.len(gg));
        let a = if t { lf.add(&lg) } else { lf.scale(&crate::linear::q(4)).add(&lg) };
        ps.push(Piece {
            e: le,
            f: lf,
            g: lg,
            a,
            fs3: t,
            w,
        });
    }
    case.name = format!("3 FS2, {k} FS3");
    let mut parts = vec![central(&ps)];
    for kk in 0..3 {
        let (i, j) = match kk {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let printed = reading == AppendixReading::Printed;
        let piece = if printed && k == 1 && kk != 0 {
            printed_31(&ps, kk, 0, if kk == 1 { 2 } else { 1 })
        } else if printed && k == 2 && kk == 2 {
            dominant(&ps, kk, i, j, Some(kk))
        } else {
            dominant(&ps, kk, i, j, None)
        };
        parts.push(piece);
    }
    Ok(PP::union(parts))
}

fn central(ps: &[Piece]) -> PP {
    let s1 = ps[0].e.add(&ps[1].e).add(&ps[2].e);
    let mut out = PP::from_poly(s_poly(&ps[0].e, &ps[1].e, &ps[2].e));
    for p in ps {
        out = out.add(&p2(&p.e, &s1.sub(&p.e)).mul_poly(&lin(&p.a)));
        if p.fs3 {
            out = out.add_poly(&prod(&[&p.e, &p.e, &p.f, &p.g]).scale_int(12));
        }
    }
    let mut c = Vec::new();
    for k in 0..3 {
        c.push(s1.sub(&ps[k].e).sub(&ps[k].e));
    }
    out.restrict(&cone(c))
}

/// The cone `e_k >= e_i + e_j`. `w_override` replaces the volume factor of
/// `p2(e_i, e_k)` by `w0(G'_k)` as printed in one configuration.
fn dominant(ps: &[Piece], k: usize, i: usize, j: usize, w_override: Option<usize>) -> PP {
    let (pk, pi, pj) = (&ps[k], &ps[i], &ps[j]);
    let wi = &ps[w_override.unwrap_or(j)].w;
    let mut out = p2(&pi.e, &pk.e).mul_poly(wi).add(&p2(&pj.e, &pk.e).mul_poly(&pi.w));
    let excess = pk.e.sub(&pi.e).sub(&pj.e);
    let two = pk.e.scale(&crate::linear::q(2)).sub(&pi.e).sub(&pj.e);
    if pk.fs3 {
        let inner = prod(&[&pi.e.add(&pj.e), &pk.f, &pk.g]).add(&prod(&[&pi.e, &pj.e, &pk.f.add(&pk.g)]));
        out = out
            .add(&p3(&excess, &pk.f, &pk.g))
            .add_poly(&lin(&two).mul(&inner).scale_int(12));
    } else {
        out = out.add_poly(&prod(&[&pi.e, &pj.e, &two, &pk.a]).scale_int(12));
    }
    for (m, n) in [(pi, pj), (pj, pi)] {
        out = out.add_poly(&prod(&[&m.e, &m.e, &n.e, &m.a]).scale_int(12));
        if m.fs3 {
            out = out.add_poly(&prod(&[&m.e, &m.e, &m.f, &m.g]).scale_int(12));
        }
    }
    out.restrict(&cone(vec![excess]))
}

/// The cone `e_k >= e_b + e_a` with one FS3 piece `b`, as printed.
fn printed_31(ps: &[Piece], k: usize, b: usize, a: usize) -> PP {
    let (pk, pb, pa) = (&ps[k], &ps[b], &ps[a]);
    let two = pk.e.scale(&crate::linear::q(2)).sub(&pb.e).sub(&pa.e);
    let inner = lin(&pb.e)
        .mul(&lin(&pb.a))
        .add(&lin(&two).mul(&lin(&pk.a)))
        .sub(&lin(&pa.e).mul(&lin(&pa.a)));
    p2(&pb.e, &pk.e)
        .mul_poly(&pk.w)
        .add(&p2(&pk.e, &pa.e).mul_poly(&pb.w))
        .add_poly(
            &prod(&[&pb.e, &pa.e])
                .mul(&inner)
                .add(&prod(&[&pb.e, &pb.e, &pb.f, &pb.g]))
                .scale_int(12),
        )
        .restrict(&cone(vec![pk.e.sub(&pb.e).sub(&pa.e)]))
}
