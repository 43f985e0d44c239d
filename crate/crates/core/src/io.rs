//! JSON interchange for digraphs, certificates and derived structures.
//!
//! A digraph document looks like
//! `{"vertices": [{"id": "a", "label": "x"}], "edges": [{"tail": "a", "head": "b"}],
//! "qo": {"elements": ["x"], "leq": [["x", "x"]]}, "loops_allowed": false}`.
//! `label`, edge `id`, `qo` and `loops_allowed` are optional; a `generator`
//! record is accepted and ignored. Everything that
//! refers to vertices or edges uses their names.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decomp::{Contracted, Sp2Separation};
use crate::digraph::MultiDigraph;
use crate::error::{Error, Result};
use crate::immersion::Embedding;
use crate::labelled::LabelledDigraph;
use crate::qo::QuasiOrder;
use crate::separation::Separation;
use crate::sp::{SpKind, SpTree};
use crate::sptree::Portrait;

#[derive(Debug, Serialize, Deserialize)]
struct VertexDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    tail: String,
    head: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct QoDoc {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DigraphDoc {
    vertices: Vec<VertexDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qo: Option<QoDoc>,
    #[serde(default)]
    loops_allowed: bool,
    /// Provenance written by generators; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<Value>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

/// Reads a digraph document. Labels are required for every vertex when a
/// `qo` is given and forbidden otherwise.
pub fn parse_labelled(text: &str) -> Result<LabelledDigraph> {
    let doc: DigraphDoc = serde_json::from_str(text).map_err(parse_error)?;
    let mut d = if doc.loops_allowed { MultiDigraph::with_loops() } else { MultiDigraph::new() };
    for v in &doc.vertices {
        d.add_vertex(v.id.clone())?;
    }
    for (i, e) in doc.edges.iter().enumerate() {
        let end = |name: &str| {
            d.vertex_by_name(name)
                .ok_or_else(|| Error::Parse(format!("edge {i} refers to unknown vertex {name:?}")))
        };
        let (tail, head) = (end(&e.tail)?, end(&e.head)?);
        match &e.id {
            Some(id) => d.add_named_edge(id.clone(), tail, head)?,
            None => d.add_edge(tail, head)?,
        };
    }
    let Some(qo_doc) = doc.qo else {
        if let Some(v) = doc.vertices.iter().find(|v| v.label.is_some()) {
            return Err(Error::Parse(format!("vertex {:?} has a label but no qo is given", v.id)));
        }
        return Ok(LabelledDigraph::unlabelled(d));
    };
    let idx = |name: &str| {
        qo_doc
            .elements
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::Domain(format!("{name:?} is not an element of the order")))
    };
    let pairs = qo_doc
        .leq
        .iter()
        .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let labels = doc
        .vertices
        .iter()
        .map(|v| match &v.label {
            Some(l) => idx(l),
            None => Err(Error::Parse(format!("vertex {:?} has no label", v.id))),
        })
        .collect::<Result<Vec<_>>>()?;
    let qo = QuasiOrder::from_pairs(qo_doc.elements.clone(), &pairs)?;
    LabelledDigraph::new(d, Arc::new(qo), labels)
}

/// Reads an unlabelled digraph document.
pub fn parse_digraph(text: &str) -> Result<MultiDigraph> {
    Ok(parse_labelled(text)?.digraph)
}

/// Writes a digraph document. The order is omitted when it is trivial.
pub fn labelled_to_json(ld: &LabelledDigraph) -> Value {
    let d = &ld.digraph;
    let trivial = *ld.qo == QuasiOrder::trivial();
    let doc = DigraphDoc {
        vertices: d
            .vertices()
            .map(|v| VertexDoc {
                id: d.vertex_name(v).to_string(),
                label: (!trivial).then(|| ld.label_name(v).to_string()),
            })
            .collect(),
        edges: d
            .edge_ids()
            .map(|e| {
                let ed = d.edge(e);
                EdgeDoc {
                    id: Some(d.edge_name(e).to_string()),
                    tail: d.vertex_name(ed.tail).to_string(),
                    head: d.vertex_name(ed.head).to_string(),
                }
            })
            .collect(),
        qo: (!trivial).then(|| QoDoc {
            elements: ld.qo.elements().to_vec(),
            leq: ld
                .qo
                .pairs()
                .into_iter()
                .map(|(a, b)| (ld.qo.name(a).to_string(), ld.qo.name(b).to_string()))
                .collect(),
        }),
        loops_allowed: d.loops_allowed(),
        generator: None,
    };
    serde_json::to_value(doc).expect("serialisable")
}

pub fn digraph_to_json(d: &MultiDigraph) -> Value {
    labelled_to_json(&LabelledDigraph::unlabelled(d.clone()))
}

/// `{"vmap": {guest vertex: host vertex}, "emap": {guest edge: [host edges]}}`.
pub fn embedding_to_json(guest: &MultiDigraph, host: &MultiDigraph, emb: &Embedding) -> Value {
    let vmap: serde_json::Map<String, Value> = emb
        .vertex_map
        .iter()
        .enumerate()
        .map(|(h, &g)| (guest.vertex_name(h).to_string(), json!(host.vertex_name(g))))
        .collect();
    let emap: serde_json::Map<String, Value> = emb
        .edge_map
        .iter()
        .enumerate()
        .map(|(e, path)| {
            let names: Vec<&str> = path.iter().map(|&f| host.edge_name(f)).collect();
            (guest.edge_name(e).to_string(), json!(names))
        })
        .collect();
    json!({ "vmap": vmap, "emap": emap })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingDoc {
    vmap: BTreeMap<String, String>,
    emap: BTreeMap<String, Vec<String>>,
}

/// Reads a certificate written by [`embedding_to_json`]. Every guest vertex
/// and edge must be mapped.
pub fn parse_embedding(text: &str, guest: &MultiDigraph, host: &MultiDigraph) -> Result<Embedding> {
    let doc: EmbeddingDoc = serde_json::from_str(text).map_err(parse_error)?;
    let mut vertex_map = vec![None; guest.vertex_count()];
    for (h, g) in &doc.vmap {
        let hv = guest
            .vertex_by_name(h)
            .ok_or_else(|| Error::Parse(format!("unknown guest vertex {h:?}")))?;
        let gv = host
            .vertex_by_name(g)
            .ok_or_else(|| Error::Parse(format!("unknown host vertex {g:?}")))?;
        vertex_map[hv] = Some(gv);
    }
    let mut edge_map = vec![None; guest.edge_count()];
    for (e, path) in &doc.emap {
        let he = guest
            .edge_by_name(e)
            .ok_or_else(|| Error::Parse(format!("unknown guest edge {e:?}")))?;
        let p = path
            .iter()
            .map(|f| {
                host.edge_by_name(f)
                    .ok_or_else(|| Error::Parse(format!("unknown host edge {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        edge_map[he] = Some(p);
    }
    let vertex_map = vertex_map
        .into_iter()
        .enumerate()
        .map(|(v, g)| g.ok_or_else(|| Error::Parse(format!("guest vertex {:?} is unmapped", guest.vertex_name(v)))))
        .collect::<Result<Vec<_>>>()?;
    let edge_map = edge_map
        .into_iter()
        .enumerate()
        .map(|(e, p)| p.ok_or_else(|| Error::Parse(format!("guest edge {:?} is unmapped", guest.edge_name(e)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Embedding { vertex_map, edge_map })
}

/// `{"op": "series" | "parallel", "s": .., "t": .., "children": [..]}` with
/// leaves `{"edge": name, "tail": .., "head": ..}`.
pub fn sp_tree_to_json(d: &MultiDigraph, tree: &SpTree) -> Value {
    let (s, t) = (d.vertex_name(tree.s), d.vertex_name(tree.t));
    match &tree.kind {
        SpKind::Edge { edge, .. } => {
            let e = d.edge(*edge);
            json!({
                "edge": d.edge_name(*edge),
                "tail": d.vertex_name(e.tail),
                "head": d.vertex_name(e.head),
            })
        }
        SpKind::Series(ch) | SpKind::Parallel(ch) => {
            let op = if matches!(tree.kind, SpKind::Series(_)) { "series" } else { "parallel" };
            let children: Vec<Value> = ch.iter().map(|c| sp_tree_to_json(d, c)).collect();
            json!({ "op": op, "s": s, "t": t, "children": children })
        }
    }
}

pub fn separation_to_json(d: &MultiDigraph, sep: &Separation) -> Value {
    let names = |es: &[usize]| es.iter().map(|&e| d.edge_name(e).to_string()).collect::<Vec<_>>();
    let boundary: Vec<&str> = sep.boundary(d).into_iter().map(|v| d.vertex_name(v)).collect();
    json!({
        "boundary": boundary,
        "a_edges": names(&sep.edges_a),
        "b_edges": names(&sep.edges_b),
    })
}

pub fn sp2sep_to_json(d: &MultiDigraph, sep: &Sp2Separation) -> Value {
    let mut v = separation_to_json(d, &sep.separation);
    v["s"] = json!(d.vertex_name(sep.s));
    v["t"] = json!(d.vertex_name(sep.t));
    v
}

/// Nodes in index order with parent, tag, gap and what they stand for.
pub fn portrait_to_json(p: &Portrait) -> Value {
    use crate::sptree::PortraitNode as N;
    let d = &p.digraph.digraph;
    let block_vertices = |b: usize| -> Vec<&str> { p.blocks[b].vertices.iter().map(|&v| d.vertex_name(v)).collect() };
    let nodes: Vec<Value> = (0..p.tree.len())
        .map(|i| {
            let node = p.tree.payload(i);
            let subject = match *node {
                N::Root(v) | N::CutVertex(v) => json!({ "vertex": d.vertex_name(v) }),
                N::Middle(b) | N::EntryTruncation(b) | N::ExitTruncation(b) | N::Leaf(b) => {
                    json!({ "block": b, "vertices": block_vertices(b) })
                }
            };
            json!({
                "node": i,
                "parent": p.tree.parent(i),
                "tag": node.tag(),
                "gap": p.tree.gap(i).map(|g| g.to_string()),
                "subject": subject,
            })
        })
        .collect();
    json!({ "root": d.vertex_name(p.root), "nodes": nodes })
}

/// Contracted digraph plus, per gadget, the separation it replaced and its
/// spine multiplicities.
pub fn contracted_to_json(c: &Contracted) -> Value {
    let d = &c.digraph;
    let gadgets: Vec<Value> = c
        .gadgets
        .iter()
        .map(|g| {
            let spine: Vec<&str> = [g.v0, g.left, g.middle, g.right, g.v1]
                .iter()
                .map(|&v| d.vertex_name(v))
                .collect();
            json!({
                "separation": g.separation,
                "spine": spine,
                "multiplicities": g.multiplicities,
            })
        })
        .collect();
    json!({ "digraph": digraph_to_json(d), "gadgets": gadgets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::{check_embedding, EmbeddingConstraints};

    #[test]
    fn roundtrip_labelled() {
        let text = r#"{"vertices":[{"id":"a","label":"x"},{"id":"b","label":"y"}],
            "edges":[{"tail":"a","head":"b"},{"id":"back","tail":"b","head":"a"}],
            "qo":{"elements":["x","y"],"leq":[["x","y"]]}}"#;
        let ld = parse_labelled(text).unwrap();
        assert_eq!(ld.digraph.edge_count(), 2);
        assert!(ld.qo.leq(0, 1) && !ld.qo.leq(1, 0));
        let again = parse_labelled(&labelled_to_json(&ld).to_string()).unwrap();
        assert_eq!(again, ld);
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_labelled("{\"vertices\": [\n {\"id\": 3}]}").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("line 2")), "{err}");
        let err = parse_labelled(r#"{"vertices":[{"id":"a"}],"edges":[{"tail":"a","head":"z"}]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err = parse_labelled(r#"{"vertices":[{"id":"a","label":"q"}],"qo":{"elements":["x"]}}"#).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn embedding_roundtrip() {
        let g = MultiDigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = MultiDigraph::from_edges(2, &[(0, 1)]).unwrap();
        let emb = Embedding {
            vertex_map: vec![0, 2],
            edge_map: vec![vec![0, 1]],
        };
        let text = embedding_to_json(&h, &g, &emb).to_string();
        let back = parse_embedding(&text, &h, &g).unwrap();
        assert_eq!(back, emb);
        let (hl, gl) = (LabelledDigraph::unlabelled(h), LabelledDigraph::unlabelled(g));
        assert!(check_embedding(&hl, &gl, &back, &EmbeddingConstraints::default()).unwrap().is_ok());
    }
}
