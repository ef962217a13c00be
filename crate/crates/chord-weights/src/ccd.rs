//! Chinese character diagrams: trivalent graphs drawn in the disk.
//!
//! A [`ChineseDiagram`] has univalent *exterior* vertices on an oriented
//! circle and trivalent *interior* vertices inside it, each carrying a
//! counterclockwise ordering of its three neighbours.  Chord diagrams are the
//! special case with no interior vertices.
//!
//! The central operation is [`ChineseDiagram::stu_reduce`]: every interior
//! vertex adjacent to the circle can be resolved into a difference of two
//! diagrams with one interior vertex fewer, so a diagram with `t` interior
//! vertices expands into `2^t` signed chord diagrams, collected into a
//! [`DiagramCombination`].  The resolution order is not canonical; different
//! orders agree only modulo the four-term relations, which is exactly what
//! the span tests check.
//!
//! [`ChineseDiagram::as_pair`] forms the antisymmetry pair (a vertex with its
//! neighbour order reversed) and [`ChineseDiagram::ihx_triple`] the local
//! I, H, X re-gluings around an interior edge; both produce combinations that
//! must vanish modulo the four-term span.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::{ChordDiagram, FourTermRelation};
use crate::error::Error;
use crate::poly::{rint, Rational};
use crate::Result;

/// A trivalent diagram in the disk, stored by vertex labels.
///
/// `circle` lists the exterior vertex labels in circle order.  A label that
/// appears twice on the circle is a chord; a label that appears once must be
/// named by exactly one interior vertex.  Each interior vertex maps to its
/// three neighbour labels in counterclockwise order; parallel edges repeat
/// the neighbour, and repeated mentions pair up first with first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChineseDiagram {
    circle: Vec<String>,
    interior: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: String,
    nbrs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonDiagram {
    circle: Vec<String>,
    #[serde(default)]
    interior: Vec<JsonVertex>,
}

/// A port is one edge end: a circle position or an interior vertex slot.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Port {
    Ext(usize),
    Int(usize, usize),
}

/// The same diagram resolved into an explicit perfect matching on ports.
/// Interior vertices are indexed in sorted label order.
#[derive(Clone)]
struct Ports {
    ext: Vec<Port>,
    int_: Vec<[Port; 3]>,
    int_names: Vec<String>,
}

impl ChineseDiagram {
    pub fn new(circle: Vec<String>, interior: BTreeMap<String, Vec<String>>) -> Self {
        ChineseDiagram { circle, interior }
    }

    /// View a chord diagram as a diagram with no interior vertices.
    pub fn from_chord_diagram(d: &ChordDiagram) -> Self {
        let circle = d.to_string().chars().map(|c| c.to_string()).collect();
        ChineseDiagram {
            circle,
            interior: BTreeMap::new(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: JsonDiagram =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("diagram JSON: {e}")))?;
        let mut interior = BTreeMap::new();
        for v in raw.interior {
            if interior.insert(v.id.clone(), v.nbrs).is_some() {
                return Err(Error::Parse(format!(
                    "interior vertex {} listed twice",
                    v.id
                )));
            }
        }
        Ok(ChineseDiagram {
            circle: raw.circle,
            interior,
        })
    }

    pub fn to_json_string(&self) -> String {
        let raw = JsonDiagram {
            circle: self.circle.clone(),
            interior: self
                .interior
                .iter()
                .map(|(id, nbrs)| JsonVertex {
                    id: id.clone(),
                    nbrs: nbrs.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("diagram serialization cannot fail")
    }

    pub fn circle(&self) -> &[String] {
        &self.circle
    }

    pub fn interior(&self) -> &BTreeMap<String, Vec<String>> {
        &self.interior
    }

    /// Half the vertex count.  Meaningful once `validate` has passed.
    pub fn degree(&self) -> usize {
        (self.circle.len() + self.interior.len()) / 2
    }

    /// Check all structural invariants and return the degree.
    pub fn validate(&self) -> Result<usize> {
        self.build_ports()?;
        Ok(self.degree())
    }

    /// Resolve the port matching from the label representation.
    fn build_ports(&self) -> Result<Ports> {
        let m = self.circle.len();
        let int_names: Vec<String> = self.interior.keys().cloned().collect();
        let t = int_names.len();

        let mut ext_pos: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, l) in self.circle.iter().enumerate() {
            ext_pos.entry(l.as_str()).or_default().push(i);
        }
        for (label, pos) in &ext_pos {
            if pos.len() > 2 {
                return Err(Error::InvalidDiagram(format!(
                    "label {label} occurs {} times on the circle",
                    pos.len()
                )));
            }
        }
        for n in &int_names {
            if ext_pos.contains_key(n.as_str()) {
                return Err(Error::InvalidDiagram(format!(
                    "label {n} names both an interior vertex and a circle vertex"
                )));
            }
        }
        let int_index: BTreeMap<&str, usize> = int_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();

        let mut nbrs: Vec<&[String]> = Vec::with_capacity(t);
        for (id, list) in &self.interior {
            if list.len() != 3 {
                return Err(Error::InvalidDiagram(format!(
                    "interior vertex {id} has {} neighbours; interior vertices are trivalent",
                    list.len()
                )));
            }
            if list.iter().any(|x| x == id) {
                return Err(Error::InvalidDiagram(format!(
                    "interior vertex {id} lists itself; self-loops are not allowed"
                )));
            }
            nbrs.push(list);
        }
        if !(m + t).is_multiple_of(2) {
            return Err(Error::InvalidDiagram(format!(
                "{} vertices in total; a diagram has an even vertex count",
                m + t
            )));
        }

        let mut ext: Vec<Option<Port>> = vec![None; m];
        let mut int_: Vec<[Option<Port>; 3]> = vec![[None; 3]; t];

        // Exterior edges: chords between repeated circle labels, or one edge
        // into the interior vertex that names the label.
        for (label, pos) in &ext_pos {
            match pos.len() {
                1 => {
                    let mut mentions = Vec::new();
                    for (v, list) in nbrs.iter().enumerate() {
                        for (s, x) in list.iter().enumerate() {
                            if x == label {
                                mentions.push((v, s));
                            }
                        }
                    }
                    if mentions.len() != 1 {
                        return Err(Error::InvalidDiagram(format!(
                            "circle vertex {label} needs exactly one interior neighbour, found {}",
                            mentions.len()
                        )));
                    }
                    let (v, s) = mentions[0];
                    ext[pos[0]] = Some(Port::Int(v, s));
                    int_[v][s] = Some(Port::Ext(pos[0]));
                }
                2 => {
                    if nbrs.iter().any(|list| list.iter().any(|x| x == label)) {
                        return Err(Error::InvalidDiagram(format!(
                            "label {label} forms a chord and cannot also neighbour the interior"
                        )));
                    }
                    ext[pos[0]] = Some(Port::Ext(pos[1]));
                    ext[pos[1]] = Some(Port::Ext(pos[0]));
                }
                k => {
                    return Err(Error::InvalidDiagram(format!(
                        "label {label} occurs {k} times on the circle"
                    )));
                }
            }
        }

        // Interior-interior edges; repeated mentions pair in slot order.
        for v in 0..t {
            for (w_name, w) in &int_index {
                let w = *w;
                if w <= v {
                    continue;
                }
                let vs: Vec<usize> = (0..3).filter(|&s| nbrs[v][s] == *w_name).collect();
                let ws: Vec<usize> = (0..3).filter(|&s| nbrs[w][s] == int_names[v]).collect();
                if vs.len() != ws.len() {
                    return Err(Error::InvalidDiagram(format!(
                        "asymmetric adjacency between {} and {}",
                        int_names[v], int_names[w]
                    )));
                }
                for (&s, &s2) in vs.iter().zip(&ws) {
                    int_[v][s] = Some(Port::Int(w, s2));
                    int_[w][s2] = Some(Port::Int(v, s));
                }
            }
        }

        let ext: Vec<Port> = ext
            .into_iter()
            .map(|p| p.expect("every circle slot was matched above"))
            .collect();
        let mut full = Vec::with_capacity(t);
        for (v, row) in int_.into_iter().enumerate() {
            let mut out = [Port::Ext(usize::MAX); 3];
            for (s, p) in row.into_iter().enumerate() {
                out[s] = p.ok_or_else(|| {
                    Error::InvalidDiagram(format!(
                        "interior vertex {} names unknown neighbour {}",
                        int_names[v], nbrs[v][s]
                    ))
                })?;
            }
            full.push(out);
        }

        // Every interior vertex must reach the circle.
        let mut seen = vec![false; t];
        let mut stack: Vec<usize> = ext
            .iter()
            .filter_map(|p| match p {
                Port::Int(v, _) => Some(*v),
                Port::Ext(_) => None,
            })
            .collect();
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            for p in &full[v] {
                if let Port::Int(w, _) = p {
                    if !seen[*w] {
                        stack.push(*w);
                    }
                }
            }
        }
        if let Some(v) = (0..t).find(|&v| !seen[v]) {
            return Err(Error::InvalidDiagram(format!(
                "interior vertex {} is not connected to the circle",
                int_names[v]
            )));
        }

        Ok(Ports {
            ext,
            int_: full,
            int_names,
        })
    }

    /// Resolve every interior vertex, deterministically: each step removes
    /// the candidate that is least by (vertex label, circle position).
    pub fn stu_reduce(&self) -> Result<DiagramCombination> {
        self.stu_reduce_with(&mut |_| 0)
    }

    /// Resolve with a caller-chosen order.  At each step the candidate
    /// resolutions (an interior vertex together with one exterior neighbour)
    /// are sorted by (vertex label, circle position) and `pick(count)`,
    /// taken modulo `count`, selects one.  `pick` is consulted once per step
    /// in depth-first order, the positive branch first.  All orders agree
    /// modulo the four-term relations.
    pub fn stu_reduce_with(
        &self,
        pick: &mut dyn FnMut(usize) -> usize,
    ) -> Result<DiagramCombination> {
        let g = self.build_ports()?;
        let mut out = DiagramCombination::new();
        reduce(&g, &Rational::one(), pick, &mut out)?;
        Ok(out)
    }

    /// The antisymmetry pair: this diagram and a copy with the cyclic order
    /// at interior vertex `v` reversed.  The sum of their resolutions lies in
    /// the four-term span.
    ///
    /// The mirror acts on the resolved matching, not on the label list:
    /// reversing the written list of a vertex with parallel edges would
    /// re-pair the repeated mentions in slot order and reconstruct the
    /// unmirrored diagram.
    pub fn as_pair(&self, v: &str) -> Result<(ChineseDiagram, ChineseDiagram)> {
        let g = self.build_ports()?;
        let vi = g
            .int_names
            .iter()
            .position(|n| n == v)
            .ok_or_else(|| Error::InvalidDiagram(format!("no interior vertex named {v}")))?;
        let mut m = g.clone();
        m.int_[vi].reverse();
        // Slot s of v is now slot 2 - s; repoint every partner port.
        let flip = |p: &mut Port| {
            if let Port::Int(x, s) = p {
                if *x == vi {
                    *s = 2 - *s;
                }
            }
        };
        for p in m.ext.iter_mut() {
            flip(p);
        }
        for row in m.int_.iter_mut() {
            for p in row.iter_mut() {
                flip(p);
            }
        }
        let mirrored = self.emit(&m)?;
        mirrored.validate()?;
        Ok((self.clone(), mirrored))
    }

    /// The I, H, X triple around the first edge joining interior vertices
    /// `v` and `w`.  Reading counterclockwise from that edge, `v` carries
    /// legs `(a, b)` and `w` carries `(c, d)`; H re-glues them onto a fresh
    /// edge as `(e, d, a slash e, b, c)` and X as `(e, c, a slash e, b, d)`.
    /// The alternating sum I - H + X of the resolutions lies in the
    /// four-term span.
    pub fn ihx_triple(&self, v: &str, w: &str) -> Result<(Self, Self, Self)> {
        let g = self.build_ports()?;
        let vi = g
            .int_names
            .iter()
            .position(|n| n == v)
            .ok_or_else(|| Error::InvalidDiagram(format!("no interior vertex named {v}")))?;
        let wi = g
            .int_names
            .iter()
            .position(|n| n == w)
            .ok_or_else(|| Error::InvalidDiagram(format!("no interior vertex named {w}")))?;
        if vi == wi {
            return Err(Error::InvalidDiagram(
                "the edge must join two distinct interior vertices".into(),
            ));
        }
        let s_e = (0..3)
            .find(|&s| matches!(g.int_[vi][s], Port::Int(x, _) if x == wi))
            .ok_or_else(|| Error::InvalidDiagram(format!("no edge joins {v} and {w}")))?;
        let t_e = match g.int_[vi][s_e] {
            Port::Int(_, t) => t,
            Port::Ext(_) => unreachable!(),
        };
        let legs = [
            (vi, (s_e + 1) % 3), // a
            (vi, (s_e + 2) % 3), // b
            (wi, (t_e + 1) % 3), // c
            (wi, (t_e + 2) % 3), // d
        ];
        // Slot assignments on the fresh vertices p, q (slot 0 is the fresh
        // edge): H puts (d, a) on p and (b, c) on q; X swaps c and d.
        let h = self.reglue(&g, vi, wi, legs, [(0, 2), (1, 1), (1, 2), (0, 1)])?;
        let x = self.reglue(&g, vi, wi, legs, [(0, 2), (1, 1), (0, 1), (1, 2)])?;
        Ok((self.clone(), h, x))
    }

    /// Replace interior vertices `vi`, `wi` by fresh vertices `p`, `q` joined
    /// by an edge, reattaching the four legs at the slots given by `place`
    /// (`(0, s)` is slot `s` of `p`, `(1, s)` of `q`).
    fn reglue(
        &self,
        g: &Ports,
        vi: usize,
        wi: usize,
        legs: [(usize, usize); 4],
        place: [(usize, usize); 4],
    ) -> Result<ChineseDiagram> {
        let keep: Vec<usize> = (0..g.int_.len()).filter(|&x| x != vi && x != wi).collect();
        let new_of_old: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let p_idx = keep.len();
        let q_idx = keep.len() + 1;
        let fresh = self.fresh_names(2);

        let leg_of = |p: Port| -> Option<usize> {
            match p {
                Port::Int(x, s) => legs.iter().position(|&(y, s2)| y == x && s2 == s),
                Port::Ext(_) => None,
            }
        };
        let placed = |j: usize| -> Port {
            let (side, slot) = place[j];
            Port::Int(if side == 1 { q_idx } else { p_idx }, slot)
        };
        let remap = |p: Port| -> Port {
            match p {
                Port::Ext(i) => Port::Ext(i),
                Port::Int(x, s) => Port::Int(new_of_old[&x], s),
            }
        };

        let mut ext = g.ext.clone();
        for p in ext.iter_mut() {
            *p = match leg_of(*p) {
                Some(j) => placed(j),
                None => remap(*p),
            };
        }
        let mut int_: Vec<[Port; 3]> = Vec::with_capacity(keep.len() + 2);
        let mut names: Vec<String> = Vec::with_capacity(keep.len() + 2);
        for &o in &keep {
            let mut row = [Port::Ext(usize::MAX); 3];
            for (slot, old) in row.iter_mut().zip(&g.int_[o]) {
                *slot = match leg_of(*old) {
                    Some(j) => placed(j),
                    None => remap(*old),
                };
            }
            int_.push(row);
            names.push(g.int_names[o].clone());
        }
        let mut prow = [Port::Int(q_idx, 0); 3];
        let mut qrow = [Port::Int(p_idx, 0); 3];
        for j in 0..4 {
            let far = g.int_[legs[j].0][legs[j].1];
            let target = match leg_of(far) {
                Some(j2) => placed(j2),
                None => remap(far),
            };
            let (side, slot) = place[j];
            if side == 1 {
                qrow[slot] = target;
            } else {
                prow[slot] = target;
            }
        }
        for (idx, row) in [(p_idx, &prow), (q_idx, &qrow)] {
            if row
                .iter()
                .any(|p| matches!(p, Port::Int(x, _) if *x == idx))
            {
                return Err(Error::InvalidDiagram(
                    "re-gluing these legs would create a self-loop".into(),
                ));
            }
        }
        int_.push(prow);
        int_.push(qrow);
        names.push(fresh[0].clone());
        names.push(fresh[1].clone());

        let out = self.emit(&Ports {
            ext,
            int_,
            int_names: names,
        })?;
        out.validate()?;
        Ok(out)
    }

    /// Turn a port matching whose circle is unchanged back into a label
    /// diagram.  Repeated label mentions pair first with first, which does
    /// not always reproduce the intended matching of parallel edges; the
    /// written rotation of each cyclic list is free, so search rotations
    /// until the round trip reproduces the matching exactly.
    fn emit(&self, g: &Ports) -> Result<ChineseDiagram> {
        let t = g.int_.len();
        let want = edge_set(g, &BTreeMap::new());
        let mut rot = vec![0usize; t];
        loop {
            let mut interior = BTreeMap::new();
            for (v, row) in g.int_.iter().enumerate() {
                let mut list = Vec::with_capacity(3);
                for s in 0..3 {
                    list.push(match row[(s + rot[v]) % 3] {
                        Port::Ext(i) => self.circle[i].clone(),
                        Port::Int(w, _) => g.int_names[w].clone(),
                    });
                }
                if interior.insert(g.int_names[v].clone(), list).is_some() {
                    return Err(Error::Internal("duplicate interior vertex name".into()));
                }
            }
            let out = ChineseDiagram {
                circle: self.circle.clone(),
                interior,
            };
            let by_name: BTreeMap<String, usize> = g
                .int_names
                .iter()
                .zip(&rot)
                .map(|(n, &r)| (n.clone(), r))
                .collect();
            if let Ok(back) = out.build_ports() {
                if edge_set(&back, &by_name) == want {
                    return Ok(out);
                }
            }
            // Next rotation assignment, odometer order.
            let Some(v) = (0..t).find(|&v| rot[v] < 2) else {
                return Err(Error::Unsupported(
                    "parallel edges attach in an order the label format cannot express".into(),
                ));
            };
            rot[v] += 1;
            for r in rot.iter_mut().take(v) {
                *r = 0;
            }
        }
    }

    /// `count` labels not used anywhere in this diagram.
    fn fresh_names(&self, count: usize) -> Vec<String> {
        let used: BTreeSet<&str> = self
            .circle
            .iter()
            .map(|s| s.as_str())
            .chain(self.interior.keys().map(|s| s.as_str()))
            .collect();
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            let cand = format!("#{k}");
            k += 1;
            if !used.contains(cand.as_str()) {
                out.push(cand);
            }
        }
        out
    }
}

impl fmt::Display for ChineseDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circle [{}]", self.circle.join(" "))?;
        for (id, nbrs) in &self.interior {
            write!(f, "; {id} -> ({})", nbrs.join(" "))?;
        }
        Ok(())
    }
}

/// Name-based view of a matching, for comparing two port resolutions.
/// `rot` says how far each vertex's written list was rotated, keyed by
/// vertex name, so slots are reported in a rotation-independent frame.
fn edge_set(
    g: &Ports,
    rot: &BTreeMap<String, usize>,
) -> BTreeSet<((String, usize), (String, usize))> {
    let slot = |v: usize, s: usize| (s + rot.get(&g.int_names[v]).copied().unwrap_or(0)) % 3 + 1;
    let name = |p: Port| -> (String, usize) {
        match p {
            Port::Ext(i) => (format!("@{i}"), 0),
            Port::Int(v, s) => (g.int_names[v].clone(), slot(v, s)),
        }
    };
    let mut out = BTreeSet::new();
    let mut push = |a: (String, usize), b: (String, usize)| {
        let e = if a <= b { (a, b) } else { (b, a) };
        out.insert(e);
    };
    for (i, p) in g.ext.iter().enumerate() {
        push((format!("@{i}"), 0), name(*p));
    }
    for (v, row) in g.int_.iter().enumerate() {
        for (s, p) in row.iter().enumerate() {
            push((g.int_names[v].clone(), slot(v, s)), name(*p));
        }
    }
    out
}

/// One resolution step at interior vertex `v`, slot `s` (whose partner is a
/// circle vertex `u`).  Reading counterclockwise from `u`, the other legs of
/// `v` are `(a, b)`.  `u` is replaced by two adjacent circle slots carrying
/// the legs: the positive branch puts `b` where `u` was and `a` after it,
/// preserving the counterclockwise order read at `u`; the negative branch
/// swaps them.
fn stu_step(g: &Ports, v: usize, s: usize, swap: bool) -> Ports {
    let u = match g.int_[v][s] {
        Port::Ext(u) => u,
        Port::Int(..) => unreachable!("resolution requires an exterior neighbour"),
    };
    let leg_a = g.int_[v][(s + 1) % 3];
    let leg_b = g.int_[v][(s + 2) % 3];
    let m = g.ext.len();

    let map_e = |i: usize| if i < u { i } else { i + 1 };
    let map_v = |x: usize| if x < v { x } else { x - 1 };
    let remap = |p: Port| match p {
        Port::Ext(i) => Port::Ext(map_e(i)),
        // Stale partners of the removed vertex; the foot loop overwrites them.
        Port::Int(x, t) if x == v => Port::Int(usize::MAX, t),
        Port::Int(x, t) => Port::Int(map_v(x), t),
    };
    let (b_pos, a_pos) = if swap { (u + 1, u) } else { (u, u + 1) };

    let mut ext = vec![Port::Ext(usize::MAX); m + 1];
    for i in 0..m {
        if i != u {
            ext[map_e(i)] = remap(g.ext[i]);
        }
    }
    let mut int_ = Vec::with_capacity(g.int_.len() - 1);
    let mut int_names = Vec::with_capacity(g.int_.len() - 1);
    for x in 0..g.int_.len() {
        if x == v {
            continue;
        }
        let mut row = [Port::Ext(usize::MAX); 3];
        for (slot, old) in row.iter_mut().zip(&g.int_[x]) {
            *slot = remap(*old);
        }
        int_.push(row);
        int_names.push(g.int_names[x].clone());
    }
    for (pos, far) in [(a_pos, leg_a), (b_pos, leg_b)] {
        ext[pos] = remap(far);
        match far {
            Port::Ext(x) => ext[map_e(x)] = Port::Ext(pos),
            Port::Int(x, t) => int_[map_v(x)][t] = Port::Ext(pos),
        }
    }
    Ports {
        ext,
        int_,
        int_names,
    }
}

fn reduce(
    g: &Ports,
    coeff: &Rational,
    pick: &mut dyn FnMut(usize) -> usize,
    out: &mut DiagramCombination,
) -> Result<()> {
    if g.int_.is_empty() {
        out.add(chord_word(g)?, coeff.clone());
        return Ok(());
    }
    let mut cands: Vec<(usize, usize, usize)> = Vec::new();
    for (v, row) in g.int_.iter().enumerate() {
        for (s, p) in row.iter().enumerate() {
            if let Port::Ext(u) = p {
                cands.push((v, s, *u));
            }
        }
    }
    cands.sort_by(|x, y| (g.int_names[x.0].as_str(), x.2).cmp(&(g.int_names[y.0].as_str(), y.2)));
    if cands.is_empty() {
        return Err(Error::Internal(
            "an interior vertex lost its route to the circle during reduction".into(),
        ));
    }
    let (v, s, _) = cands[pick(cands.len()) % cands.len()];
    reduce(&stu_step(g, v, s, false), coeff, pick, out)?;
    reduce(&stu_step(g, v, s, true), &-coeff.clone(), pick, out)
}

/// Read the chord diagram off a fully reduced circle.
fn chord_word(g: &Ports) -> Result<ChordDiagram> {
    let mut letter = vec![u8::MAX; g.ext.len()];
    let mut next: u8 = 0;
    for i in 0..g.ext.len() {
        if letter[i] != u8::MAX {
            continue;
        }
        match g.ext[i] {
            Port::Ext(j) if j > i => {
                letter[i] = next;
                letter[j] = next;
                next = next.checked_add(1).ok_or_else(|| {
                    Error::Unsupported("more than 255 chords after reduction".into())
                })?;
            }
            _ => return Err(Error::Internal("inconsistent circle matching".into())),
        }
    }
    ChordDiagram::from_sequence(&letter)
}

/// A finite rational combination of canonical chord diagrams of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiagramCombination {
    terms: BTreeMap<ChordDiagram, Rational>,
}

impl DiagramCombination {
    pub fn new() -> Self {
        DiagramCombination::default()
    }

    /// Add `coeff` times a diagram, merging and dropping zeros.  The key is
    /// the canonical rotation, so equal diagrams always merge.
    pub fn add(&mut self, d: ChordDiagram, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let d = d.canonical();
        if let Some((first, _)) = self.terms.iter().next() {
            assert_eq!(
                first.degree(),
                d.degree(),
                "combination terms must share one degree"
            );
        }
        let entry = self.terms.entry(d).or_insert_with(Rational::zero);
        *entry += coeff;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn coeff(&self, d: &ChordDiagram) -> Rational {
        self.terms.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChordDiagram, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of the terms, if any terms remain.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|d| d.degree())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = DiagramCombination::new();
        for (d, x) in &self.terms {
            out.add(d.clone(), x * c);
        }
        out
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, x) in &other.terms {
            out.add(d.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.sum(&other.scale(&rint(-1)))
    }
}

impl From<&FourTermRelation> for DiagramCombination {
    fn from(rel: &FourTermRelation) -> Self {
        let mut out = DiagramCombination::new();
        for (d, c) in rel.terms() {
            out.add(d.clone(), rint(c));
        }
        out
    }
}

impl fmt::Display for DiagramCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
