//! Witness checks that read a certificate's result lines back and test them
//! directly against the embedded inputs, independently of the rerun.

use std::collections::BTreeSet;

use arrows::{abc_hypergraph, ColoringWitness, WitnessProperty};
use completion::{EdgeLabelledGraph, NonMetricCycle, Q};
use eppa::{replay_table, EppaInstance, ExtensionTable};
use halesjewett::{enumerate_lines, word_index};
use orientations::{predimension, simple_edges, Orientation};
use structures::{partial_automorphisms, PartialAutomorphism};

use crate::cert::{Certificate, Verdict};
use crate::DEFAULT_NODE_CAP;

fn field<'a>(cert: &'a Certificate, key: &str) -> Option<&'a str> {
    cert.result.iter().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

fn fields<'a>(cert: &'a Certificate, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
    cert.result.iter().filter_map(move |l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

fn nums(s: &str) -> Result<Vec<usize>, String> {
    s.split_whitespace().map(|x| x.parse().map_err(|_| format!("bad number `{x}`"))).collect()
}

fn flag(cert: &Certificate, name: &str) -> Option<String> {
    let i = cert.argv.iter().position(|a| a == name)?;
    cert.argv.get(i + 1).cloned()
}

fn input(cert: &Certificate, i: usize) -> Result<&structures::Structure, String> {
    cert.inputs.get(i).ok_or_else(|| format!("missing input {i}"))
}

/// `Ok(Some(what))` when a witness was checked, `Ok(None)` when this kind has
/// no separate witness check, `Err` when the witness is wrong.
pub(crate) fn check_witness(cert: &Certificate) -> Result<Option<String>, String> {
    match (cert.kind.as_str(), cert.verdict) {
        ("arrow", Verdict::Fails) => arrow(cert).map(Some),
        ("complete-metric", _) => metric(cert).map(Some),
        ("orient-orient", _) => orient(cert).map(Some),
        ("hj", _) => hj(cert).map(Some),
        ("eppa-check", Verdict::Holds) => eppa(cert).map(Some),
        _ => Ok(None),
    }
}

fn arrow(cert: &Certificate) -> Result<String, String> {
    let colors: usize = flag(cert, "--colors").and_then(|c| c.parse().ok()).ok_or("no --colors")?;
    let assignment = nums(field(cert, "coloring").ok_or("no coloring")?)?;
    let property = match field(cert, "property") {
        Some("rigidity") => WitnessProperty::Rigidity,
        Some("no-monochromatic") => WitnessProperty::NoMonochromatic,
        _ => return Err("unknown coloring property".into()),
    };
    let h = abc_hypergraph(input(cert, 0)?, input(cert, 1)?, input(cert, 2)?, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let w = ColoringWitness { colors, assignment, property };
    if arrows::replay_witness(&h, &w) {
        Ok(format!("{}-coloring of {} embeddings leaves all {} copies non-monochromatic", colors, h.vertices.len(), h.hyperedges.len()))
    } else {
        Err("some copy of B is monochromatic".into())
    }
}

fn metric(cert: &Certificate) -> Result<String, String> {
    let g = EdgeLabelledGraph::from_structure(input(cert, 0)?).map_err(|e| e.to_string())?;
    match cert.verdict {
        Verdict::Fails => {
            let cycle = nums(field(cert, "cycle").ok_or("no cycle")?)?;
            let labels = field(cert, "labels")
                .ok_or("no labels")?
                .split_whitespace()
                .map(|q| q.parse::<Q>().map_err(|_| format!("bad label `{q}`")))
                .collect::<Result<Vec<Q>, String>>()?;
            if (NonMetricCycle { cycle, labels }).verify(&g) {
                Ok("non-metric cycle lies in the input".into())
            } else {
                Err("cycle is not a non-metric cycle of the input".into())
            }
        }
        Verdict::Holds => {
            let mut m = EdgeLabelledGraph::new(g.size);
            for l in fields(cert, "distance") {
                let w: Vec<&str> = l.split_whitespace().collect();
                let [u, v, q] = w.as_slice() else { return Err(format!("bad distance line `{l}`")) };
                let (u, v): (usize, usize) = (u.parse().map_err(|_| "bad vertex")?, v.parse().map_err(|_| "bad vertex")?);
                if u >= g.size || v >= g.size {
                    return Err(format!("vertex out of range in `{l}`"));
                }
                m.set(u, v, q.parse::<Q>().map_err(|_| format!("bad label `{q}`"))?);
            }
            if !m.is_metric_space() {
                return Err("completion is not a metric space".into());
            }
            if g.labels.iter().any(|(&(u, v), &q)| m.get(u, v) != Some(q)) {
                return Err("completion changes an input distance".into());
            }
            Ok("completion is a metric space extending the input".into())
        }
    }
}

fn orient(cert: &Certificate) -> Result<String, String> {
    let g = input(cert, 0)?;
    let edges = simple_edges(g).map_err(|e| e.to_string())?;
    let delta = predimension(g).map_err(|e| e.to_string())?;
    match cert.verdict {
        Verdict::Holds => {
            let arcs = fields(cert, "arc")
                .map(|l| match nums(l)?.as_slice() {
                    [u, v] => Ok((*u, *v)),
                    _ => Err(format!("bad arc `{l}`")),
                })
                .collect::<Result<Vec<_>, String>>()?;
            let o = Orientation { size: g.size(), arcs };
            if !o.is_two_orientation_of(&edges) {
                return Err("arcs are not a 2-orientation of the graph".into());
            }
            if o.root_multiplicity() != delta {
                return Err("root multiplicities do not sum to the predimension".into());
            }
            Ok(format!("2-orientation with root multiplicity {delta}"))
        }
        Verdict::Fails => match field(cert, "violation") {
            Some(v) => {
                let set: BTreeSet<usize> = nums(v)?.into_iter().collect();
                let m = edges.iter().filter(|(u, v)| set.contains(u) && set.contains(v)).count() as i64;
                if 2 * set.len() as i64 - m < 0 {
                    Ok("violating set has negative predimension".into())
                } else {
                    Err("violating set has non-negative predimension".into())
                }
            }
            None => Ok("no violation set recorded".into()),
        },
    }
}

fn hj(cert: &Certificate) -> Result<String, String> {
    let arg = |i: usize| cert.argv.get(i).and_then(|s| s.parse::<usize>().ok()).ok_or("bad hj arguments");
    let (sigma, r) = (arg(1)?, arg(2)?);
    let n: usize = field(cert, "hj").and_then(|s| s.parse().ok()).ok_or("no hj value")?;
    let coloring = nums(field(cert, "bad-coloring-below").ok_or("no coloring")?)?;
    let len = n.checked_sub(1).ok_or("hj value must be positive")?;
    if coloring.len() != sigma.pow(len as u32) || coloring.iter().any(|&c| c >= r.max(1)) {
        return Err("coloring has the wrong shape".into());
    }
    for (_, line) in enumerate_lines(sigma, len) {
        let c: BTreeSet<usize> = line.iter().map(|w| coloring[word_index(w, sigma)]).collect();
        if c.len() == 1 {
            return Err("coloring has a monochromatic line".into());
        }
    }
    Ok(format!("no monochromatic line in length {len}"))
}

fn eppa(cert: &Certificate) -> Result<String, String> {
    let (a, b) = (input(cert, 0)?.clone(), input(cert, 1)?.clone());
    let inclusion = match flag(cert, "--inclusion") {
        Some(s) => s.split(',').map(|x| x.parse().map_err(|_| "bad inclusion".to_string())).collect::<Result<_, _>>()?,
        None => (0..a.size()).collect(),
    };
    let inst = EppaInstance::new(a, b, inclusion).map_err(|e| e.to_string())?;
    let mut entries = Vec::new();
    for l in fields(cert, "extend") {
        let (pa, g) = l.split_once(" by ").ok_or_else(|| format!("bad line `{l}`"))?;
        let (d, m) = pa.split_once("->").ok_or_else(|| format!("bad line `{l}`"))?;
        entries.push((PartialAutomorphism { domain: nums(d)?, map: nums(m)? }, nums(g)?));
    }
    let table = ExtensionTable { entries };
    if !replay_table(&inst, &table) {
        return Err("some extension is not an automorphism extending its partial map".into());
    }
    let listed: BTreeSet<&PartialAutomorphism> = table.entries.iter().map(|(p, _)| p).collect();
    let all = partial_automorphisms(&inst.small, None);
    if all.iter().any(|p| !listed.contains(p)) {
        return Err("table misses a partial automorphism".into());
    }
    Ok(format!("{} extensions replayed", table.entries.len()))
}
