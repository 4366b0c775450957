//! Affine orbit hypergraphs graded by `l_σ`, their Ω-quotient and unit
//! color section, the affine support function, the twisted existence
//! test, and the shape constructors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;
use crate::hypergraph::{orbit_partition, Edge, EdgeType, FieldMode, HypergraphError, OrbitHypergraph, SupportFunction, Vertex};
use crate::involution::InvolutionDatum;
use crate::root_system::{height, AffineDynkin, Character};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("label {0} is not a node of the affine diagram")]
    UnknownNode(String),
    #[error("node map {0:?} is not an element of Ω")]
    UnknownElement(BTreeMap<String, String>),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("vertex map for Ω element {0} is not a bijection")]
    NotBijective(usize),
    #[error("the action is not a group action: {0}")]
    NotAnAction(String),
    #[error("l_sigma is not constant on the orbit of {0}")]
    GradingNotInvariant(String),
    #[error("edge {0} does not have one or two elements of minimal and of maximal l_sigma")]
    EdgeShape(String),
    #[error("coloring is not equivariant at {0}")]
    ColoringNotEquivariant(String),
    #[error("graph has no coloring")]
    MissingColoring,
    #[error("stabilizer images differ between {0} and {1}")]
    StabilizersDiffer(String, String),
    #[error("witness check failed: {0}")]
    WitnessFailed(String),
    #[error("unsupported shape: {0}")]
    Shape(String),
}

/// Ω element written as the node names it moves.
pub type ElementRepr = BTreeMap<String, String>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionRepr {
    pub element: ElementRepr,
    /// Moved vertices only.
    #[serde(default)]
    pub vertices: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineRepr {
    pub graph: OrbitHypergraph,
    #[serde(default)]
    pub omega_action: Vec<ActionRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<String, ElementRepr>>,
}

/// An `l_σ`-graded hypergraph with labels in the affine diagram, a group
/// acting through Ω, and optionally a coloring by Ω.
#[derive(Debug, Clone)]
pub struct AffineOrbitHypergraph {
    /// Vertex ranks hold `l_σ`.
    pub graph: OrbitHypergraph,
    pub node_of_label: Vec<usize>,
    /// Pairs (Ω element, vertex permutation); the identity comes first.
    pub action: Vec<(usize, Vec<usize>)>,
    pub coloring: Option<Vec<usize>>,
}

pub fn parse_element(ad: &AffineDynkin, e: &ElementRepr) -> Result<usize, AffineError> {
    let mut p: Vec<usize> = (0..ad.nodes.len()).collect();
    for (a, b) in e {
        let i = ad.node_index(a).ok_or_else(|| AffineError::UnknownNode(a.clone()))?;
        let j = ad.node_index(b).ok_or_else(|| AffineError::UnknownNode(b.clone()))?;
        p[i] = j;
    }
    ad.index_of(&p).ok_or_else(|| AffineError::UnknownElement(e.clone()))
}

pub fn element_repr(ad: &AffineDynkin, o: usize) -> ElementRepr {
    ad.omega[o]
        .iter()
        .enumerate()
        .filter(|(i, j)| i != *j)
        .map(|(i, &j)| (ad.nodes[i].name.clone(), ad.nodes[j].name.clone()))
        .collect()
}

fn label_nodes(g: &OrbitHypergraph, ad: &AffineDynkin) -> Result<Vec<usize>, AffineError> {
    g.labels
        .iter()
        .map(|l| ad.node_index(l).ok_or_else(|| AffineError::UnknownNode(l.clone())))
        .collect()
}

/// Permutation of labels induced by an Ω element; `None` where the image
/// node is not a label of the graph.
fn label_perm(node_of_label: &[usize], ad: &AffineDynkin, o: usize) -> Option<Vec<usize>> {
    node_of_label
        .iter()
        .map(|&n| {
            let m = ad.act_on_node(o, n);
            node_of_label.iter().position(|&x| x == m)
        })
        .collect()
}

/// Parses and checks a group acting on `g` through Ω.
pub fn parse_action(
    g: &OrbitHypergraph,
    ad: &AffineDynkin,
    reprs: &[ActionRepr],
) -> Result<Vec<(usize, Vec<usize>)>, AffineError> {
    let nodes = label_nodes(g, ad)?;
    let mut action: Vec<(usize, Vec<usize>)> = vec![(0, (0..g.len()).collect())];
    for r in reprs {
        let o = parse_element(ad, &r.element)?;
        let mut p: Vec<usize> = (0..g.len()).collect();
        for (a, b) in &r.vertices {
            let i = g.vertex_index(a).ok_or_else(|| AffineError::UnknownVertex(a.clone()))?;
            let j = g.vertex_index(b).ok_or_else(|| AffineError::UnknownVertex(b.clone()))?;
            p[i] = j;
        }
        if o == 0 && p.iter().enumerate().all(|(i, &j)| i == j) {
            continue;
        }
        action.push((o, p));
    }
    check_action(g, ad, &nodes, &action)?;
    Ok(action)
}

fn check_action(
    g: &OrbitHypergraph,
    ad: &AffineDynkin,
    nodes: &[usize],
    action: &[(usize, Vec<usize>)],
) -> Result<(), AffineError> {
    for (o, p) in action {
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if sorted != (0..g.len()).collect::<Vec<_>>() {
            return Err(AffineError::NotBijective(*o));
        }
        let lp = label_perm(nodes, ad, *o)
            .ok_or_else(|| AffineError::NotAnAction(format!("element {o} moves a label off the graph")))?;
        g.check_automorphism(p, &lp).map_err(|e| match e {
            HypergraphError::NotAutomorphism(s) if s.starts_with("rank") => {
                AffineError::GradingNotInvariant(s)
            }
            other => AffineError::Hypergraph(other),
        })?;
    }
    let lookup: BTreeMap<usize, &Vec<usize>> = action.iter().map(|(o, p)| (*o, p)).collect();
    if lookup.len() != action.len() {
        return Err(AffineError::NotAnAction("an Ω element is listed twice".into()));
    }
    for (a, pa) in action {
        for (b, pb) in action {
            let comp: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
            match lookup.get(&ad.compose(*a, *b)) {
                Some(&pc) if *pc == comp => {}
                Some(_) => {
                    return Err(AffineError::NotAnAction(
                        "vertex and Ω compositions disagree".into(),
                    ))
                }
                None => return Err(AffineError::NotAnAction("not closed under composition".into())),
            }
        }
    }
    Ok(())
}

fn check_edge_shapes(g: &OrbitHypergraph) -> Result<(), AffineError> {
    for e in g.edges.iter().filter(|e| !e.open && e.members.len() >= 2) {
        let ls: Vec<i64> = e.members.iter().map(|&m| g.rank(m)).collect();
        let min = *ls.iter().min().expect("nonempty");
        let max = *ls.iter().max().expect("nonempty");
        let nmin = ls.iter().filter(|&&l| l == min).count();
        let nmax = ls.iter().filter(|&&l| l == max).count();
        if !(1..=2).contains(&nmin) || !(1..=2).contains(&nmax) {
            return Err(AffineError::EdgeShape(g.edge_name(e)));
        }
    }
    Ok(())
}

impl AffineOrbitHypergraph {
    pub fn from_repr(r: &AffineRepr, ad: &AffineDynkin) -> Result<Self, AffineError> {
        let mut graph = r.graph.clone();
        graph.mode = FieldMode::Affine;
        graph.validate()?;
        let node_of_label = label_nodes(&graph, ad)?;
        let action = parse_action(&graph, ad, &r.omega_action)?;
        let coloring = match &r.coloring {
            None => None,
            Some(map) => {
                let mut c = vec![usize::MAX; graph.len()];
                for (v, e) in map {
                    let i = graph
                        .vertex_index(v)
                        .ok_or_else(|| AffineError::UnknownVertex(v.clone()))?;
                    c[i] = parse_element(ad, e)?;
                }
                if let Some(i) = c.iter().position(|&x| x == usize::MAX) {
                    return Err(AffineError::UnknownVertex(graph.vertices[i].id.clone()));
                }
                Some(c)
            }
        };
        let g = AffineOrbitHypergraph {
            graph,
            node_of_label,
            action,
            coloring,
        };
        g.validate(ad)?;
        Ok(g)
    }

    pub fn validate(&self, ad: &AffineDynkin) -> Result<(), AffineError> {
        self.graph.validate()?;
        check_action(&self.graph, ad, &self.node_of_label, &self.action)?;
        check_edge_shapes(&self.graph)?;
        if let Some(c) = &self.coloring {
            for (o, p) in &self.action {
                for v in 0..self.graph.len() {
                    if c[p[v]] != ad.compose(*o, c[v]) {
                        return Err(AffineError::ColoringNotEquivariant(
                            self.graph.vertices[v].id.clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn l_sigma(&self) -> Vec<i64> {
        self.graph.ranks()
    }

    fn label_perms(&self, ad: &AffineDynkin) -> Vec<Vec<usize>> {
        self.action
            .iter()
            .map(|(o, _)| label_perm(&self.node_of_label, ad, *o).expect("checked on construction"))
            .collect()
    }

    /// Quotient by the Ω action. With a coloring, vertex orbits are named
    /// after their unit-colored member and edge orbits take the label of
    /// the edge meeting that member.
    pub fn gamma0(&self, ad: &AffineDynkin) -> Result<OrbitHypergraph, AffineError> {
        let perms: Vec<Vec<usize>> = self.action.iter().map(|(_, p)| p.clone()).collect();
        let orbits = orbit_partition(self.graph.len(), &perms);
        let g = &self.graph;
        let coloring = self.coloring.clone();
        let name = move |members: &[usize]| -> String {
            if let Some(c) = &coloring {
                if let Some(&m) = members.iter().find(|&&m| c[m] == 0) {
                    return g.vertices[m].id.clone();
                }
            }
            members
                .iter()
                .map(|&m| g.vertices[m].id.as_str())
                .collect::<Vec<_>>()
                .join("|")
        };
        let unit = self.coloring.clone();
        let prefer = move |e: &Edge| -> bool {
            unit.as_ref()
                .is_some_and(|c| e.members.iter().any(|&m| c[m] == 0))
        };
        let prefer_ref: &dyn Fn(&Edge) -> bool = &prefer;
        let q = self
            .graph
            .quotient_general(&orbits, &self.label_perms(ad), &perms, &name, Some(prefer_ref))
            .map_err(|e| match e {
                HypergraphError::IncompatibleAction(s) => {
                    AffineError::Hypergraph(HypergraphError::IncompatibleAction(s))
                }
                other => AffineError::Hypergraph(HypergraphError::IncompatibleAction(other.to_string())),
            })?;
        Ok(q)
    }

    /// Induced sub-hypergraph on the vertices colored by the unit of Ω.
    pub fn gamma1(&self) -> Result<OrbitHypergraph, AffineError> {
        let c = self.coloring.as_ref().ok_or(AffineError::MissingColoring)?;
        Ok(induced(&self.graph, &(0..self.graph.len()).filter(|&v| c[v] == 0).collect::<Vec<_>>()))
    }

    /// True iff Ω acts freely on vertices and no edge meets an orbit twice.
    pub fn action_is_free(&self) -> bool {
        let n = self.graph.len();
        let free = self
            .action
            .iter()
            .skip(1)
            .all(|(_, p)| (0..n).all(|v| p[v] != v));
        let perms: Vec<Vec<usize>> = self.action.iter().map(|(_, p)| p.clone()).collect();
        let orbits = orbit_partition(n, &perms);
        free && self.graph.edges.iter().all(|e| {
            let set: BTreeSet<usize> = e.members.iter().map(|&m| orbits[m]).collect();
            set.len() == e.members.len()
        })
    }

    /// Dimension of the harmonic functions constant on Ω-orbits.
    pub fn invariant_harmonic_dim(&self) -> usize {
        let n = self.graph.len();
        let mut rows = Vec::new();
        for (_, p) in self.action.iter().skip(1) {
            for v in 0..n {
                if p[v] != v {
                    let mut r = vec![0; n];
                    r[v] = 1;
                    r[p[v]] = -1;
                    rows.push(r);
                }
            }
        }
        self.graph.harmonic_dim_with(&rows)
    }
}

pub fn induced(g: &OrbitHypergraph, keep: &[usize]) -> OrbitHypergraph {
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let edges = g
        .edges
        .iter()
        .filter_map(|e| {
            let m: Vec<usize> = e.members.iter().filter_map(|x| pos.get(x).copied()).collect();
            (!m.is_empty()).then(|| Edge {
                members: m,
                ..e.clone()
            })
        })
        .collect();
    OrbitHypergraph {
        vertices: keep.iter().map(|&v| g.vertices[v].clone()).collect(),
        labels: g.labels.clone(),
        edges,
        mode: g.mode,
    }
}

/// Support function on a Γ⁰-type graph, by induction on `l_σ` from the
/// length zero layer.
pub fn affine_support_function(g0: &OrbitHypergraph) -> Result<SupportFunction, HypergraphError> {
    g0.support_with_grading(&g0.ranks())
}

#[derive(Debug, Clone)]
pub struct TwistedOutcome {
    pub exists: bool,
    /// Full vertices of length zero.
    pub s: Vec<usize>,
    /// Stabilizer image in Ω of each length zero vertex.
    pub stabilizers: Vec<(usize, BTreeSet<usize>)>,
    pub witness: Option<Vec<Cyclotomic>>,
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

/// Decides whether the construction by orbit functions extended through
/// the support function yields a nonzero harmonic φ on Γ¹ with
/// `φ(h·x) = φ(x)·(χ⁻¹χ₀)(ω(h)⁻¹)`; builds and checks the witness.
pub fn twisted_harmonic_exists(
    g1: &OrbitHypergraph,
    ad: &AffineDynkin,
    h_action: &[(usize, Vec<usize>)],
    character: &Character,
) -> Result<TwistedOutcome, AffineError> {
    let nodes = label_nodes(g1, ad)?;
    check_action(g1, ad, &nodes, h_action)?;
    let ls = g1.ranks();
    let base = ls.iter().min().copied().unwrap_or(0);
    let layer: Vec<usize> = (0..g1.len()).filter(|&v| ls[v] == base).collect();
    let stabilizers: Vec<(usize, BTreeSet<usize>)> = layer
        .iter()
        .map(|&x| {
            (
                x,
                h_action
                    .iter()
                    .filter(|(_, p)| p[x] == x)
                    .map(|(o, _)| *o)
                    .collect(),
            )
        })
        .collect();
    let s_fn = affine_support_function(g1)?;
    let s = s_fn.basis.clone();
    let psi = character.inverse_times(&Character::chi0(ad));
    let exists = !s.is_empty() && stabilizers.iter().all(|(_, st)| psi.is_trivial_on(st));
    let witness = if exists {
        Some(build_witness(g1, ad, h_action, &psi, &s_fn)?)
    } else {
        None
    };
    Ok(TwistedOutcome {
        exists,
        s,
        stabilizers,
        witness,
    })
}

/// The common stabilizer image of the length zero layer, which must not
/// depend on the vertex.
pub fn omega_h(g1: &OrbitHypergraph, outcome: &TwistedOutcome) -> Result<BTreeSet<usize>, AffineError> {
    let mut it = outcome.stabilizers.iter();
    let Some((x0, first)) = it.next() else {
        return Ok(BTreeSet::from([0]));
    };
    for (x, st) in it {
        if st != first {
            return Err(AffineError::StabilizersDiffer(
                g1.vertices[*x0].id.clone(),
                g1.vertices[*x].id.clone(),
            ));
        }
    }
    Ok(first.clone())
}

fn build_witness(
    g1: &OrbitHypergraph,
    ad: &AffineDynkin,
    h_action: &[(usize, Vec<usize>)],
    psi: &Character,
    s_fn: &SupportFunction,
) -> Result<Vec<Cyclotomic>, AffineError> {
    let order = psi
        .phases
        .iter()
        .fold(2usize, |acc, p| lcm(acc, *p.denom() as usize));
    let zeta = |phase: num_rational::Ratio<i64>| -> Cyclotomic {
        let k = (phase * num_rational::Ratio::from_integer(order as i64)).to_integer();
        Cyclotomic::root_of_unity(order, k)
    };
    let x0 = s_fn.basis[0];
    let mut on_s: Vec<Option<Cyclotomic>> = vec![None; s_fn.basis.len()];
    for (o, p) in h_action {
        let y = p[x0];
        let k = s_fn
            .basis
            .iter()
            .position(|&b| b == y)
            .ok_or_else(|| AffineError::WitnessFailed("translate of a full vertex is not full".into()))?;
        let val = zeta(psi.value(ad.inverse(*o)));
        match &on_s[k] {
            Some(v) if *v != val => {
                return Err(AffineError::WitnessFailed(format!(
                    "conflicting values at {}",
                    g1.vertices[y].id
                )))
            }
            _ => on_s[k] = Some(val),
        }
    }
    let on_s: Vec<Cyclotomic> = on_s
        .into_iter()
        .map(|v| v.unwrap_or_else(|| Cyclotomic::zero(order)))
        .collect();
    let phi: Vec<Cyclotomic> = s_fn
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&on_s)
                .fold(Cyclotomic::zero(order), |acc, (&c, v)| &acc + &v.scale(c))
        })
        .collect();
    if phi.iter().all(Cyclotomic::is_zero) {
        return Err(AffineError::WitnessFailed("witness vanishes".into()));
    }
    for e in g1.edges.iter().filter(|e| !e.open) {
        let sum = e
            .members
            .iter()
            .fold(Cyclotomic::zero(order), |acc, &m| &acc + &phi[m]);
        if !sum.is_zero() {
            return Err(AffineError::WitnessFailed(format!(
                "edge {} has a nonzero sum",
                g1.edge_name(e)
            )));
        }
    }
    for (o, p) in h_action {
        let factor = zeta(psi.value(ad.inverse(*o)));
        for v in 0..g1.len() {
            if phi[p[v]] != &phi[v] * &factor {
                return Err(AffineError::WitnessFailed(format!(
                    "equivariance fails at {}",
                    g1.vertices[v].id
                )));
            }
        }
    }
    Ok(phi)
}

/// Factors whose hyperspecial length zero chamber fails to be full in the
/// affine direction: σ-stable factors on which σ is inner and the highest
/// root has even height.
pub fn hyperspecial_defects(inv: &InvolutionDatum) -> Vec<usize> {
    (0..inv.ambient.factors.len())
        .filter(|&f| inv.factor_is_inner(f) && height(&inv.roots.highest_roots[f]) % 2 == 0)
        .collect()
}

/// St_{χ₀} verdict from the orbit side: the closed graph has a full
/// closed vertex and every hyperspecial length zero chamber is full.
pub fn orbit_side_st_chi0(closed: &OrbitHypergraph, inv: &InvolutionDatum) -> bool {
    !closed.full_closed_vertices().is_empty() && hyperspecial_defects(inv).is_empty()
}

fn shape_graph(
    verts: Vec<(String, i64)>,
    edges: Vec<(usize, Vec<String>, EdgeType, bool)>,
) -> Result<OrbitHypergraph, AffineError> {
    let labels = vec!["s0".to_string(), "s1".to_string()];
    let g = OrbitHypergraph::from_parts(
        verts,
        labels.clone(),
        edges
            .into_iter()
            .map(|(l, m, k, open)| (labels[l].clone(), m, k, open))
            .collect(),
        FieldMode::Affine,
    )?;
    check_edge_shapes(&g)?;
    Ok(g)
}

/// Two arms of length `len` leaving a single length zero vertex, one
/// through each label; the topmost edges are open.
pub fn line(len: usize) -> Result<OrbitHypergraph, AffineError> {
    if len == 0 {
        return Err(AffineError::Shape("line needs length at least 1".into()));
    }
    let mut verts = vec![("O".to_string(), 0)];
    let mut edges = Vec::new();
    for (arm, first) in [("P", 0usize), ("Q", 1usize)] {
        let mut prev = "O".to_string();
        for d in 1..=len {
            let id = format!("{arm}{d}");
            verts.push((id.clone(), d as i64));
            let label = (first + d - 1) % 2;
            edges.push((label, vec![prev.clone(), id.clone()], EdgeType::U, false));
            prev = id;
        }
        edges.push(((first + len) % 2, vec![prev], EdgeType::U, true));
    }
    shape_graph(verts, edges)
}

/// Two parallel paths `A` and `B` joined at both ends.
pub fn rectangle(rows: usize, cols: usize) -> Result<OrbitHypergraph, AffineError> {
    if rows != 2 {
        return Err(AffineError::Shape("rectangles have exactly 2 rows".into()));
    }
    if cols == 0 {
        return Err(AffineError::Shape("rectangle needs at least 1 column".into()));
    }
    let a = |j: usize| format!("A{j}");
    let b = |j: usize| format!("B{j}");
    let mut verts = Vec::new();
    for j in 1..=cols {
        verts.push((a(j), j as i64 - 1));
        verts.push((b(j), j as i64));
    }
    let mut edges = Vec::new();
    let row_label = |j: usize| if j % 2 == 1 { 0 } else { 1 };
    for j in 1..cols {
        edges.push((row_label(j), vec![a(j), a(j + 1)], EdgeType::U, false));
        edges.push((row_label(j), vec![b(j), b(j + 1)], EdgeType::U, false));
    }
    edges.push((1, vec![a(1), b(1)], EdgeType::U, false));
    let last = if cols == 1 { 0 } else { 1 - row_label(cols - 1) };
    edges.push((last, vec![a(cols), b(cols)], EdgeType::U, false));
    shape_graph(verts, edges)
}

/// Four parallel paths `T1, T2, B1, B2` closed off by a size four edge at
/// each end; the `B` rows sit one step below the `T` rows.
pub fn box_shape(cols: usize) -> Result<OrbitHypergraph, AffineError> {
    if cols == 0 {
        return Err(AffineError::Shape("box needs at least 1 column".into()));
    }
    let rows = ["T1", "T2", "B1", "B2"];
    let id = |r: &str, j: usize| format!("{r}_{j}");
    let n = cols as i64;
    let mut verts = Vec::new();
    for r in rows {
        for j in 1..=cols {
            let l = if r.starts_with('B') { n - j as i64 } else { n - j as i64 + 1 };
            verts.push((id(r, j), l));
        }
    }
    let row_label = |j: usize| if j % 2 == 1 { 1 } else { 0 };
    let mut edges = Vec::new();
    for r in rows {
        for j in 1..cols {
            edges.push((row_label(j), vec![id(r, j), id(r, j + 1)], EdgeType::U, false));
        }
    }
    edges.push((0, rows.iter().map(|r| id(r, 1)).collect(), EdgeType::T, false));
    let last = if cols == 1 { 1 } else { 1 - row_label(cols - 1) };
    edges.push((last, rows.iter().map(|r| id(r, cols)).collect(), EdgeType::T, false));
    shape_graph(verts, edges)
}

/// Γ¹ × Ω with the product coloring: the copy of color `o` carries the
/// labels moved by `o`, and Ω acts by left multiplication on colors.
pub fn colored_cover(g1: &OrbitHypergraph, ad: &AffineDynkin) -> Result<AffineRepr, AffineError> {
    let nodes = label_nodes(g1, ad)?;
    let n = g1.len();
    let m = ad.order();
    let vid = |v: usize, o: usize| format!("{}@{o}", g1.vertices[v].id);
    let mut vertices = Vec::new();
    for o in 0..m {
        for v in 0..n {
            vertices.push(Vertex {
                id: vid(v, o),
                rank: g1.rank(v),
            });
        }
    }
    let mut edges = Vec::new();
    for o in 0..m {
        let lp = label_perm(&nodes, ad, o)
            .ok_or_else(|| AffineError::NotAnAction("Ω moves a label off the graph".into()))?;
        for e in &g1.edges {
            edges.push(Edge {
                label: lp[e.label],
                members: e.members.iter().map(|&v| o * n + v).collect(),
                kind: e.kind,
                open: e.open,
            });
        }
    }
    let graph = OrbitHypergraph {
        vertices,
        labels: g1.labels.clone(),
        edges,
        mode: FieldMode::Affine,
    };
    graph.validate()?;
    let omega_action = (1..m)
        .map(|a| ActionRepr {
            element: element_repr(ad, a),
            vertices: (0..m)
                .flat_map(|o| {
                    let target = ad.compose(a, o);
                    (0..n).map(move |v| (v, o, target))
                })
                .map(|(v, o, t)| (vid(v, o), vid(v, t)))
                .collect(),
        })
        .collect();
    let coloring = Some(
        (0..m)
            .flat_map(|o| (0..n).map(move |v| (v, o)))
            .map(|(v, o)| (vid(v, o), element_repr(ad, o)))
            .collect(),
    );
    Ok(AffineRepr {
        graph,
        omega_action,
        coloring,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{fundamental_group, generate_roots, CartanDatum};

    fn a1() -> AffineDynkin {
        fundamental_group(&generate_roots(&CartanDatum::parse("A1").unwrap()).unwrap())
    }

    #[test]
    fn line_alternates() {
        let g = line(4).unwrap();
        let s = affine_support_function(&g).unwrap();
        assert_eq!(s.basis.len(), 1);
        for v in 0..g.len() {
            let sign = if g.rank(v) % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.values[v], vec![sign]);
        }
    }

    #[test]
    fn rectangle_support_alternates() {
        for cols in 1..7 {
            let g = rectangle(2, cols).unwrap();
            let s = affine_support_function(&g).unwrap();
            assert_eq!(s.basis.len(), 1, "cols {cols}");
            for v in 0..g.len() {
                let sign = if g.rank(v) % 2 == 0 { 1 } else { -1 };
                assert_eq!(s.values[v], vec![sign]);
            }
        }
        assert!(rectangle(3, 2).is_err());
    }

    #[test]
    fn box_support_is_consistent() {
        for cols in 1..7 {
            let g = box_shape(cols).unwrap();
            let s = affine_support_function(&g).unwrap();
            assert_eq!(s.basis.len(), 2);
            g.check_support(&s, &g.ranks()).unwrap();
        }
    }

    #[test]
    fn free_swap_on_a_four_vertex_line() {
        let ad = fundamental_group(&generate_roots(&CartanDatum::parse("A1xA1").unwrap()).unwrap());
        let e = |l: &str, m: &[&str], k| (l.to_string(), m.iter().map(|s| s.to_string()).collect(), k, false);
        let g = OrbitHypergraph::from_parts(
            vec![("a".into(), 1), ("b".into(), 0), ("c".into(), 0), ("d".into(), 1)],
            vec!["s2".into(), "s0_2".into()],
            vec![
                e("s2", &["a", "b"], EdgeType::U),
                e("s0_2", &["b", "c"], EdgeType::U),
                e("s2", &["c", "d"], EdgeType::U),
                e("s0_2", &["a"], EdgeType::G),
                e("s0_2", &["d"], EdgeType::G),
            ],
            FieldMode::Affine,
        )
        .unwrap();
        let swap = ActionRepr {
            element: BTreeMap::from([("s1".into(), "s0_1".into()), ("s0_1".into(), "s1".into())]),
            vertices: [("a", "d"), ("d", "a"), ("b", "c"), ("c", "b")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        };
        let aff = AffineOrbitHypergraph::from_repr(
            &AffineRepr {
                graph: g.clone(),
                omega_action: vec![swap],
                coloring: None,
            },
            &ad,
        )
        .unwrap();
        assert_eq!(aff.gamma0(&ad).unwrap().len(), 2);

        // An element moving the labels needs a matching vertex map.
        let moved = ActionRepr {
            element: BTreeMap::from([("s2".into(), "s0_2".into()), ("s0_2".into(), "s2".into())]),
            vertices: BTreeMap::new(),
        };
        assert!(AffineOrbitHypergraph::from_repr(
            &AffineRepr {
                graph: g.clone(),
                omega_action: vec![moved],
                coloring: None,
            },
            &ad,
        )
        .is_err());
    }

    #[test]
    fn cover_round_trips() {
        let ad = a1();
        let g1 = line(2).unwrap();
        let repr = colored_cover(&g1, &ad).unwrap();
        let aff = AffineOrbitHypergraph::from_repr(&repr, &ad).unwrap();
        assert!(aff.action_is_free());
        let q = aff.gamma0(&ad).unwrap();
        assert!(crate::hypergraph::isomorphic(&q, &g1));
        let s = aff.gamma1().unwrap();
        assert_eq!(s.len(), g1.len());
        assert_eq!(aff.invariant_harmonic_dim(), q.harmonic_space().dim());
    }

    #[test]
    fn twisted_on_empty_s() {
        let ad = a1();
        let g = OrbitHypergraph::from_parts(
            vec![("A".into(), 0)],
            vec!["s0".into(), "s1".into()],
            vec![
                ("s0".into(), vec!["A".into()], EdgeType::G, false),
                ("s1".into(), vec!["A".into()], EdgeType::G, false),
            ],
            FieldMode::Affine,
        )
        .unwrap();
        let h = vec![(0, vec![0])];
        let out = twisted_harmonic_exists(&g, &ad, &h, &Character::trivial(&ad)).unwrap();
        assert!(!out.exists);
        assert!(out.s.is_empty());
    }
}
