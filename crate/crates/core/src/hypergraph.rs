//! Ranked hypergraphs of Borel orbits with labeled, typed edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{echelon, kernel_i64, rank_rational, to_big, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeType {
    G,
    U,
    T,
    N,
}

impl EdgeType {
    pub fn closed_size(self) -> usize {
        match self {
            EdgeType::G => 1,
            EdgeType::U | EdgeType::N => 2,
            EdgeType::T => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldMode {
    #[serde(rename = "closed", alias = "algebraically_closed")]
    Closed,
    #[serde(rename = "rational")]
    Rational,
    /// Graded by `l_σ` instead of orbit dimension.
    #[serde(rename = "affine")]
    Affine,
}

impl FieldMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldMode::Closed => "closed",
            FieldMode::Rational => "rational",
            FieldMode::Affine => "affine",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("negative rank on vertex {0}")]
    NegativeRank(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("edge {0} is empty")]
    EmptyEdge(String),
    #[error("edge {0} repeats a member")]
    RepeatedMember(String),
    #[error("label {label} does not partition the vertices: vertex {vertex} lies in {count} edges")]
    Partition {
        label: String,
        vertex: String,
        count: usize,
    },
    #[error("edge {edge} of type {kind:?} has size {size}")]
    SizeMismatch {
        edge: String,
        kind: EdgeType,
        size: usize,
    },
    #[error("edge {0} has no unique vertex of maximal rank")]
    DenseNotUnique(String),
    #[error("edge {0} has ranks differing by more than one")]
    RankGap(String),
    #[error("support function is inconsistent on edge {0}")]
    Inconsistent(String),
    #[error("support function cannot determine vertex {0}")]
    Undetermined(String),
    #[error("operation requires {expected} mode, graph is in {found} mode")]
    WrongMode {
        expected: &'static str,
        found: &'static str,
    },
    #[error("label collision on {0}")]
    LabelCollision(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("edge {0} is not of type N or T")]
    WrongEdgeType(String),
    #[error("vertex {0} is not the dense vertex of an N or T edge")]
    WrongVertex(String),
    #[error("incompatible projection: {0}")]
    IncompatibleProjection(String),
    #[error("incompatible action: {0}")]
    IncompatibleAction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub rank: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: usize,
    /// Sorted vertex indices.
    pub members: Vec<usize>,
    pub kind: EdgeType,
    /// Set on edges cut off by truncation; their members outside the data
    /// are unknown, so they impose no constraint and count as large.
    pub open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitHypergraph {
    pub vertices: Vec<Vertex>,
    pub labels: Vec<String>,
    pub edges: Vec<Edge>,
    pub mode: FieldMode,
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    id: String,
    rank: i64,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    label: String,
    members: Vec<String>,
    #[serde(rename = "type")]
    kind: EdgeType,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    open: bool,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<VertexRepr>,
    labels: Vec<String>,
    edges: Vec<EdgeRepr>,
    mode: FieldMode,
}

impl Serialize for OrbitHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexRepr {
                    id: v.id.clone(),
                    rank: v.rank,
                })
                .collect(),
            labels: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRepr {
                    label: self.labels[e.label].clone(),
                    members: e.members.iter().map(|&m| self.vertices[m].id.clone()).collect(),
                    kind: e.kind,
                    open: e.open,
                })
                .collect(),
            mode: self.mode,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = GraphRepr::deserialize(d)?;
        OrbitHypergraph::from_parts(
            r.vertices.into_iter().map(|v| (v.id, v.rank)).collect(),
            r.labels,
            r.edges
                .into_iter()
                .map(|e| (e.label, e.members, e.kind, e.open))
                .collect(),
            r.mode,
        )
        .map_err(D::Error::custom)
    }
}

pub type EdgeSpec = (String, Vec<String>, EdgeType, bool);

/// Formal integer combination of the base vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    /// Vertex indices of S, increasing.
    pub basis: Vec<usize>,
    /// `values[v][k]` is the coefficient of `basis[k]` in `s(v)`.
    pub values: Vec<Vec<i64>>,
}

impl SupportFunction {
    /// The vertex function `v ↦ λ(s(v))` for the coordinate functional λ
    /// dual to `basis[k]`.
    pub fn coordinate(&self, k: usize) -> Vec<Rational> {
        self.values
            .iter()
            .map(|row| Rational::from_integer(row[k].into()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|r| r.iter().all(|&c| c == 0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicSpace {
    pub basis: Vec<Vec<Rational>>,
}

impl HarmonicSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Membership in the span of the basis.
    pub fn contains(&self, f: &[Rational]) -> bool {
        if f.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(f.to_vec());
        rank_rational(&rows) == self.dim()
    }
}

impl OrbitHypergraph {
    pub fn from_parts(
        vertices: Vec<(String, i64)>,
        labels: Vec<String>,
        edges: Vec<EdgeSpec>,
        mode: FieldMode,
    ) -> Result<Self, HypergraphError> {
        let mut index = HashMap::new();
        for (k, (id, _)) in vertices.iter().enumerate() {
            if index.insert(id.clone(), k).is_some() {
                return Err(HypergraphError::DuplicateVertex(id.clone()));
            }
        }
        let mut out_edges = Vec::new();
        for (label, members, kind, open) in edges {
            let l = labels
                .iter()
                .position(|x| *x == label)
                .ok_or_else(|| HypergraphError::UnknownLabel(label.clone()))?;
            let mut m = members
                .iter()
                .map(|id| {
                    index
                        .get(id)
                        .copied()
                        .ok_or_else(|| HypergraphError::UnknownVertex(id.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            m.sort_unstable();
            out_edges.push(Edge {
                label: l,
                members: m,
                kind,
                open,
            });
        }
        let g = OrbitHypergraph {
            vertices: vertices
                .into_iter()
                .map(|(id, rank)| Vertex { id, rank })
                .collect(),
            labels,
            edges: out_edges,
            mode,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hypergraph serializes")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn rank(&self, v: usize) -> i64 {
        self.vertices[v].rank
    }

    pub fn ranks(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.rank).collect()
    }

    pub fn edge_name(&self, e: &Edge) -> String {
        let ids: Vec<&str> = e.members.iter().map(|&m| self.vertices[m].id.as_str()).collect();
        format!("{}:{{{}}}", self.labels[e.label], ids.join(","))
    }

    /// `incidence()[v][l]` is the index of the edge with label `l`
    /// containing `v`. Assumes the partition property.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![vec![usize::MAX; self.labels.len()]; self.len()];
        for (k, e) in self.edges.iter().enumerate() {
            for &m in &e.members {
                inc[m][e.label] = k;
            }
        }
        inc
    }

    /// Partition, membership and id checks shared by every mode.
    pub fn validate_structure(&self) -> Result<(), HypergraphError> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(&v.id) {
                return Err(HypergraphError::DuplicateVertex(v.id.clone()));
            }
            if v.rank < 0 {
                return Err(HypergraphError::NegativeRank(v.id.clone()));
            }
        }
        let mut count = vec![vec![0usize; self.labels.len()]; self.len()];
        for e in &self.edges {
            if e.label >= self.labels.len() {
                return Err(HypergraphError::UnknownLabel(e.label.to_string()));
            }
            if e.members.is_empty() {
                return Err(HypergraphError::EmptyEdge(self.labels[e.label].clone()));
            }
            if let Some(&m) = e.members.iter().find(|&&m| m >= self.len()) {
                return Err(HypergraphError::UnknownVertex(m.to_string()));
            }
            if e.members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(HypergraphError::RepeatedMember(self.edge_name(e)));
            }
            for &m in &e.members {
                count[m][e.label] += 1;
            }
        }
        for (v, row) in count.iter().enumerate() {
            for (l, &c) in row.iter().enumerate() {
                if c != 1 {
                    return Err(HypergraphError::Partition {
                        label: self.labels[l].clone(),
                        vertex: self.vertices[v].id.clone(),
                        count: c,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), HypergraphError> {
        self.validate_structure()?;
        for e in self.edges.iter().filter(|e| !e.open && e.members.len() >= 2) {
            let ranks: Vec<i64> = e.members.iter().map(|&m| self.rank(m)).collect();
            let max = *ranks.iter().max().expect("nonempty");
            let min = *ranks.iter().min().expect("nonempty");
            if self.mode == FieldMode::Affine {
                continue;
            }
            if max - min > 1 {
                return Err(HypergraphError::RankGap(self.edge_name(e)));
            }
            if self.mode == FieldMode::Closed && ranks.iter().filter(|&&r| r == max).count() != 1 {
                return Err(HypergraphError::DenseNotUnique(self.edge_name(e)));
            }
        }
        if self.mode == FieldMode::Closed {
            for e in self.edges.iter().filter(|e| !e.open) {
                if e.members.len() != e.kind.closed_size() {
                    return Err(HypergraphError::SizeMismatch {
                        edge: self.edge_name(e),
                        kind: e.kind,
                        size: e.members.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// One row per constrained edge, one column per vertex.
    pub fn constraint_matrix(&self) -> Vec<Vec<i64>> {
        self.edges
            .iter()
            .filter(|e| !e.open)
            .map(|e| {
                let mut row = vec![0; self.len()];
                for &m in &e.members {
                    row[m] = 1;
                }
                row
            })
            .collect()
    }

    pub fn harmonic_space(&self) -> HarmonicSpace {
        HarmonicSpace {
            basis: kernel_i64(&self.constraint_matrix(), self.len()),
        }
    }

    /// Dimension of the harmonic functions satisfying extra linear
    /// relations, each given as an integer row over the vertices.
    pub fn harmonic_dim_with(&self, extra: &[Vec<i64>]) -> usize {
        let mut rows = self.constraint_matrix();
        rows.extend_from_slice(extra);
        self.len() - echelon(&to_big(&rows), self.len()).rank()
    }

    pub fn is_harmonic(&self, f: &[Rational]) -> bool {
        self.edges.iter().filter(|e| !e.open).all(|e| {
            e.members
                .iter()
                .fold(Rational::zero(), |acc, &m| acc + &f[m])
                .is_zero()
        })
    }

    /// Full means every incident edge has at least two members; open
    /// edges count as large.
    pub fn is_full(&self, v: usize) -> bool {
        self.edges
            .iter()
            .filter(|e| e.members.contains(&v))
            .all(|e| e.open || e.members.len() >= 2)
    }

    pub fn min_rank(&self) -> Option<i64> {
        self.vertices.iter().map(|v| v.rank).min()
    }

    pub fn max_rank(&self) -> Option<i64> {
        self.vertices.iter().map(|v| v.rank).max()
    }

    pub fn closed_vertices(&self) -> Vec<usize> {
        let Some(min) = self.min_rank() else {
            return Vec::new();
        };
        (0..self.len()).filter(|&v| self.rank(v) == min).collect()
    }

    pub fn full_closed_vertices(&self) -> Vec<usize> {
        self.closed_vertices()
            .into_iter()
            .filter(|&v| self.is_full(v))
            .collect()
    }

    pub fn support_function(&self) -> Result<SupportFunction, HypergraphError> {
        self.support_with_grading(&self.ranks())
    }

    /// Builds the support function by induction on `grading`, starting
    /// from the vertices of minimal grade.
    ///
    /// A vertex is solved from the first incident edge whose other members
    /// are already known. Failing that, an edge whose only unknown members
    /// share the vertex's grade is used, with those peers read as zero.
    pub fn support_with_grading(&self, grading: &[i64]) -> Result<SupportFunction, HypergraphError> {
        let n = self.len();
        let Some(&base) = grading.iter().min() else {
            return Ok(SupportFunction {
                basis: Vec::new(),
                values: Vec::new(),
            });
        };
        let basis: Vec<usize> = (0..n)
            .filter(|&v| grading[v] == base && self.is_full(v))
            .collect();
        let k = basis.len();
        let mut values: Vec<Option<Vec<i64>>> = vec![None; n];
        for v in (0..n).filter(|&v| grading[v] == base) {
            let mut row = vec![0; k];
            if let Some(pos) = basis.iter().position(|&b| b == v) {
                row[pos] = 1;
            }
            values[v] = Some(row);
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ei, e) in self.edges.iter().enumerate() {
            if e.open {
                continue;
            }
            for &m in &e.members {
                incident[m].push(ei);
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| grading[v] != base).collect();
        order.sort_by(|&a, &b| {
            grading[a]
                .cmp(&grading[b])
                .then_with(|| self.vertices[a].id.cmp(&self.vertices[b].id))
        });
        for v in order {
            let residual = |ei: usize, allow_peers: bool| -> Option<Vec<i64>> {
                let mut sum = vec![0i64; k];
                for &m in &self.edges[ei].members {
                    if m == v {
                        continue;
                    }
                    match &values[m] {
                        Some(row) => {
                            for (s, x) in sum.iter_mut().zip(row) {
                                *s += x;
                            }
                        }
                        None if allow_peers && grading[m] == grading[v] => {}
                        None => return None,
                    }
                }
                Some(sum.into_iter().map(|x| -x).collect())
            };
            let found = incident[v]
                .iter()
                .find_map(|&ei| residual(ei, false))
                .or_else(|| incident[v].iter().find_map(|&ei| residual(ei, true)));
            match found {
                Some(row) => values[v] = Some(row),
                None => {
                    return Err(HypergraphError::Undetermined(self.vertices[v].id.clone()))
                }
            }
        }
        let values: Vec<Vec<i64>> = values.into_iter().map(|r| r.expect("assigned")).collect();
        for e in self.edges.iter().filter(|e| !e.open) {
            let mut sum = vec![0i64; k];
            for &m in &e.members {
                for (s, x) in sum.iter_mut().zip(&values[m]) {
                    *s += x;
                }
            }
            if sum.iter().any(|&x| x != 0) {
                return Err(HypergraphError::Inconsistent(self.edge_name(e)));
            }
        }
        Ok(SupportFunction { basis, values })
    }

    /// Checks that `s` restricts to the identity on S, vanishes on the
    /// other base vertices and has zero edge sums.
    pub fn check_support(&self, s: &SupportFunction, grading: &[i64]) -> Result<(), String> {
        let base = grading.iter().min().copied().unwrap_or(0);
        for v in (0..self.len()).filter(|&v| grading[v] == base) {
            let expected: Vec<i64> = s.basis.iter().map(|&b| i64::from(b == v)).collect();
            if s.values[v] != expected {
                return Err(format!("s({}) is not the expected base value", self.vertices[v].id));
            }
        }
        for e in self.edges.iter().filter(|e| !e.open) {
            for k in 0..s.basis.len() {
                if e.members.iter().map(|&m| s.values[m][k]).sum::<i64>() != 0 {
                    return Err(format!("edge {} has a nonzero sum", self.edge_name(e)));
                }
            }
        }
        Ok(())
    }

    pub fn verify_dimension_theorem(&self) -> Result<bool, HypergraphError> {
        if self.mode != FieldMode::Closed {
            return Err(HypergraphError::WrongMode {
                expected: "closed",
                found: self.mode.as_str(),
            });
        }
        Ok(self.full_closed_vertices().len() == self.harmonic_space().dim())
    }

    /// Quotient by the group generated by the given label-preserving
    /// vertex permutations.
    pub fn quotient_by_automorphisms(&self, gens: &[Vec<usize>]) -> Result<Self, HypergraphError> {
        let label_perms: Vec<Vec<usize>> =
            gens.iter().map(|_| (0..self.labels.len()).collect()).collect();
        for g in gens {
            self.check_automorphism(g, &(0..self.labels.len()).collect::<Vec<_>>())?;
        }
        let orbits = orbit_partition(self.len(), gens);
        let name = |members: &[usize]| -> String {
            members
                .iter()
                .map(|&m| self.vertices[m].id.as_str())
                .collect::<Vec<_>>()
                .join("|")
        };
        self.quotient_general(&orbits, &label_perms, gens, &name, None)
    }

    /// Checks that `perm` maps each edge onto an edge with label
    /// `label_perm[label]`, of the same type, and preserves ranks.
    pub fn check_automorphism(&self, perm: &[usize], label_perm: &[usize]) -> Result<(), HypergraphError> {
        if perm.len() != self.len() {
            return Err(HypergraphError::NotAutomorphism(format!(
                "permutation has length {}, graph has {} vertices",
                perm.len(),
                self.len()
            )));
        }
        let mut image: Vec<usize> = perm.to_vec();
        image.sort_unstable();
        if image != (0..self.len()).collect::<Vec<_>>() {
            return Err(HypergraphError::NotAutomorphism("not a bijection".into()));
        }
        for v in 0..self.len() {
            if self.rank(v) != self.rank(perm[v]) {
                return Err(HypergraphError::NotAutomorphism(format!(
                    "rank of {} not preserved",
                    self.vertices[v].id
                )));
            }
        }
        let edge_set: BTreeSet<(usize, Vec<usize>, EdgeType)> = self
            .edges
            .iter()
            .map(|e| (e.label, e.members.clone(), e.kind))
            .collect();
        for e in &self.edges {
            let mut m: Vec<usize> = e.members.iter().map(|&x| perm[x]).collect();
            m.sort_unstable();
            if !edge_set.contains(&(label_perm[e.label], m, e.kind)) {
                return Err(HypergraphError::NotAutomorphism(format!(
                    "edge {} has no image",
                    self.edge_name(e)
                )));
            }
        }
        Ok(())
    }

    /// Shared quotient construction. `label_perms[i]` is the label action
    /// of `gens[i]`. Edge orbits take the label of the member chosen by
    /// `preferred`, when given, else the smallest label in the orbit.
    pub(crate) fn quotient_general(
        &self,
        orbits: &[usize],
        label_perms: &[Vec<usize>],
        gens: &[Vec<usize>],
        name: &dyn Fn(&[usize]) -> String,
        preferred: Option<&dyn Fn(&Edge) -> bool>,
    ) -> Result<Self, HypergraphError> {
        let mut reps: Vec<usize> = orbits.to_vec();
        reps.sort_unstable();
        reps.dedup();
        let new_index: HashMap<usize, usize> =
            reps.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let members_of = |r: usize| -> Vec<usize> {
            (0..self.len()).filter(|&v| orbits[v] == r).collect()
        };
        let vertices: Vec<Vertex> = reps
            .iter()
            .map(|&r| Vertex {
                id: name(&members_of(r)),
                rank: self.rank(r),
            })
            .collect();

        // Edge orbits under the generated group.
        let key = |e: &Edge| -> (usize, Vec<usize>) { (e.label, e.members.clone()) };
        let index: HashMap<(usize, Vec<usize>), usize> =
            self.edges.iter().enumerate().map(|(k, e)| (key(e), k)).collect();
        let mut edge_orbit: Vec<usize> = (0..self.edges.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for (g, lp) in gens.iter().zip(label_perms) {
            for (k, e) in self.edges.iter().enumerate() {
                let mut m: Vec<usize> = e.members.iter().map(|&x| g[x]).collect();
                m.sort_unstable();
                let j = *index.get(&(lp[e.label], m)).ok_or_else(|| {
                    HypergraphError::IncompatibleAction(format!("edge {} has no image", self.edge_name(e)))
                })?;
                let (a, b) = (find(&mut edge_orbit, k), find(&mut edge_orbit, j));
                if a != b {
                    edge_orbit[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for k in 0..self.edges.len() {
            let r = find(&mut edge_orbit, k);
            groups.entry(r).or_default().push(k);
        }
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        for (_, ks) in groups {
            let rep = preferred
                .and_then(|p| ks.iter().copied().find(|&k| p(&self.edges[k])))
                .unwrap_or_else(|| {
                    *ks.iter()
                        .min_by_key(|&&k| (self.edges[k].label, k))
                        .expect("nonempty orbit")
                });
            let e = &self.edges[rep];
            let mut m: Vec<usize> = e.members.iter().map(|&x| new_index[&orbits[x]]).collect();
            m.sort_unstable();
            m.dedup();
            let kind = if self.mode == FieldMode::Closed {
                retype(e.kind, m.len())
            } else {
                e.kind
            };
            if seen.insert((e.label, m.clone())) {
                edges.push(Edge {
                    label: e.label,
                    members: m,
                    kind,
                    open: e.open,
                });
            }
        }
        edges.sort();
        let q = OrbitHypergraph {
            vertices,
            labels: self.labels.clone(),
            edges,
            mode: self.mode,
        };
        q.validate()
            .map_err(|e| HypergraphError::IncompatibleAction(e.to_string()))?;
        Ok(q)
    }

    pub fn product(&self, other: &Self) -> Result<Self, HypergraphError> {
        if let Some(l) = self.labels.iter().find(|l| other.labels.contains(l)) {
            return Err(HypergraphError::LabelCollision(l.clone()));
        }
        let n2 = other.len();
        let idx = |a: usize, b: usize| a * n2 + b;
        let mut vertices = Vec::with_capacity(self.len() * n2);
        for a in &self.vertices {
            for b in &other.vertices {
                vertices.push(Vertex {
                    id: format!("{}*{}", a.id, b.id),
                    rank: a.rank + b.rank,
                });
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            for b in 0..n2 {
                edges.push(Edge {
                    label: e.label,
                    members: e.members.iter().map(|&a| idx(a, b)).collect(),
                    kind: e.kind,
                    open: e.open,
                });
            }
        }
        let off = self.labels.len();
        for e in &other.edges {
            for a in 0..self.len() {
                edges.push(Edge {
                    label: e.label + off,
                    members: e.members.iter().map(|&b| idx(a, b)).collect(),
                    kind: e.kind,
                    open: e.open,
                });
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mode = if self.mode == other.mode {
            self.mode
        } else {
            FieldMode::Rational
        };
        let g = OrbitHypergraph {
            vertices,
            labels,
            edges,
            mode,
        };
        g.validate()?;
        Ok(g)
    }

    /// Same graph with its labels renamed position by position.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, HypergraphError> {
        if labels.len() != self.labels.len() {
            return Err(HypergraphError::LabelCollision(format!(
                "{} new names for {} labels",
                labels.len(),
                self.labels.len()
            )));
        }
        let set: BTreeSet<&String> = labels.iter().collect();
        if set.len() != labels.len() {
            return Err(HypergraphError::LabelCollision("repeated label name".into()));
        }
        Ok(OrbitHypergraph {
            labels,
            ..self.clone()
        })
    }

    /// Disjoint union over the same label set; ids get the given prefixes.
    pub fn disjoint_union(&self, other: &Self, prefixes: (&str, &str)) -> Result<Self, HypergraphError> {
        if self.labels != other.labels {
            return Err(HypergraphError::LabelCollision("label sets differ".into()));
        }
        let off = self.len();
        let mut vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: format!("{}{}", prefixes.0, v.id),
                rank: v.rank,
            })
            .collect();
        vertices.extend(other.vertices.iter().map(|v| Vertex {
            id: format!("{}{}", prefixes.1, v.id),
            rank: v.rank,
        }));
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            members: e.members.iter().map(|m| m + off).collect(),
            ..e.clone()
        }));
        let g = OrbitHypergraph {
            vertices,
            labels: self.labels.clone(),
            edges,
            mode: self.mode,
        };
        g.validate()?;
        Ok(g)
    }

    /// `le[x][y]` iff `x ≤ y` in the order generated by `a < b` whenever
    /// `a` and `b` share an edge and `rank(a) < rank(b)`.
    pub fn order_closure(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            for &a in &e.members {
                for &b in &e.members {
                    if self.rank(a) < self.rank(b) {
                        up[a].push(b);
                    }
                }
            }
        }
        let mut le = vec![vec![false; n]; n];
        for x in 0..n {
            let mut stack = vec![x];
            le[x][x] = true;
            while let Some(y) = stack.pop() {
                for &z in &up[y] {
                    if !le[x][z] {
                        le[x][z] = true;
                        stack.push(z);
                    }
                }
            }
        }
        le
    }

    /// Number of vertices of maximal rank lying above each vertex.
    pub fn dense_multiplicity(&self) -> Vec<usize> {
        let le = self.order_closure();
        let Some(max) = self.max_rank() else {
            return Vec::new();
        };
        (0..self.len())
            .map(|x| (0..self.len()).filter(|&y| self.rank(y) == max && le[x][y]).count())
            .collect()
    }

    pub fn rational_form_delete(&self, edge: usize) -> Result<Self, HypergraphError> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| HypergraphError::WrongEdgeType(edge.to_string()))?;
        if !matches!(e.kind, EdgeType::N | EdgeType::T) || e.open {
            return Err(HypergraphError::WrongEdgeType(self.edge_name(e)));
        }
        let max = e.members.iter().map(|&m| self.rank(m)).max().expect("nonempty");
        let le = self.order_closure();
        let mut deleted = vec![false; self.len()];
        let mut work: Vec<usize> = e
            .members
            .iter()
            .copied()
            .filter(|&m| self.rank(m) < max)
            .collect();
        for &w in &work {
            deleted[w] = true;
        }
        while let Some(d) = work.pop() {
            let add = |y: usize, deleted: &mut Vec<bool>, work: &mut Vec<usize>| {
                if !deleted[y] {
                    deleted[y] = true;
                    work.push(y);
                }
            };
            for y in 0..self.len() {
                if le[y][d] {
                    add(y, &mut deleted, &mut work);
                }
            }
            for f in self.edges.iter().filter(|f| f.members.contains(&d)) {
                match f.kind {
                    EdgeType::U => {
                        for &y in &f.members {
                            add(y, &mut deleted, &mut work);
                        }
                    }
                    EdgeType::N => {
                        for &y in f.members.iter().filter(|&&y| self.rank(y) == self.rank(d)) {
                            add(y, &mut deleted, &mut work);
                        }
                    }
                    _ => {}
                }
            }
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&v| !deleted[v]).collect();
        let new_index: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|f| {
                let m: Vec<usize> = f.members.iter().filter_map(|x| new_index.get(x).copied()).collect();
                (!m.is_empty()).then(|| Edge {
                    members: m,
                    ..f.clone()
                })
            })
            .collect();
        let g = OrbitHypergraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            labels: self.labels.clone(),
            edges,
            mode: FieldMode::Rational,
        };
        g.validate()?;
        Ok(g)
    }

    /// Returns the doubled graph and its projection back onto `self`.
    pub fn rational_form_double(&self, vertex: usize) -> Result<(Self, Vec<usize>), HypergraphError> {
        let ok = self.edges.iter().any(|e| {
            !e.open
                && matches!(e.kind, EdgeType::N | EdgeType::T)
                && e.members.contains(&vertex)
                && e.members.iter().all(|&m| self.rank(m) <= self.rank(vertex))
                && e.members.len() >= 2
        });
        if !ok {
            let id = self
                .vertices
                .get(vertex)
                .map_or_else(|| vertex.to_string(), |v| v.id.clone());
            return Err(HypergraphError::WrongVertex(id));
        }
        let le = self.order_closure();
        let mut doubled = vec![false; self.len()];
        doubled[vertex] = true;
        let mut work = vec![vertex];
        while let Some(d) = work.pop() {
            let mut targets: Vec<usize> = (0..self.len()).filter(|&y| le[d][y]).collect();
            for f in self
                .edges
                .iter()
                .filter(|f| f.kind == EdgeType::U && f.members.contains(&d))
            {
                targets.extend(f.members.iter().copied());
            }
            for y in targets {
                if !doubled[y] {
                    doubled[y] = true;
                    work.push(y);
                }
            }
        }
        let mut vertices = Vec::new();
        let mut proj = Vec::new();
        let mut copies: Vec<Vec<usize>> = Vec::new();
        for (v, vx) in self.vertices.iter().enumerate() {
            if doubled[v] {
                let mut c = Vec::new();
                for s in 1..=2 {
                    c.push(vertices.len());
                    vertices.push(Vertex {
                        id: format!("{}_{}", vx.id, s),
                        rank: vx.rank,
                    });
                    proj.push(v);
                }
                copies.push(c);
            } else {
                copies.push(vec![vertices.len()]);
                vertices.push(vx.clone());
                proj.push(v);
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            let nd = e.members.iter().filter(|&&m| doubled[m]).count();
            if nd == e.members.len() {
                for s in 0..2 {
                    let mut m: Vec<usize> = e.members.iter().map(|&x| copies[x][s]).collect();
                    m.sort_unstable();
                    edges.push(Edge {
                        members: m,
                        ..e.clone()
                    });
                }
            } else {
                let mut m: Vec<usize> = e.members.iter().flat_map(|&x| copies[x].clone()).collect();
                m.sort_unstable();
                edges.push(Edge {
                    members: m,
                    ..e.clone()
                });
            }
        }
        let g = OrbitHypergraph {
            vertices,
            labels: self.labels.clone(),
            edges,
            mode: FieldMode::Rational,
        };
        g.validate()?;
        Ok((g, proj))
    }

    /// Graph with edges sorted, for comparison of equal data written in
    /// different orders.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].id.cmp(&self.vertices[b].id));
        let mut pos = vec![0; self.len()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| {
                let mut m: Vec<usize> = e.members.iter().map(|&x| pos[x]).collect();
                m.sort_unstable();
                Edge {
                    members: m,
                    ..e.clone()
                }
            })
            .collect();
        edges.sort();
        OrbitHypergraph {
            vertices: order.iter().map(|&v| self.vertices[v].clone()).collect(),
            labels: self.labels.clone(),
            edges,
            mode: self.mode,
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        const COLORS: [&str; 8] = [
            "gold", "green3", "blue", "red", "purple", "orange", "cyan4", "brown",
        ];
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  node [shape=circle];");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{}\" [label=\"{}\\nrank {}\"];", v.id, v.id, v.rank);
        }
        for (k, e) in self.edges.iter().enumerate() {
            let color = COLORS[e.label % COLORS.len()];
            let style = if e.open { ",style=dashed" } else { "" };
            let ids: Vec<&str> = e.members.iter().map(|&m| self.vertices[m].id.as_str()).collect();
            match ids.as_slice() {
                [a] => {
                    let _ = writeln!(out, "  \"{a}\" -- \"{a}\" [color={color}{style}];");
                }
                [a, b] => {
                    let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [color={color}{style}];");
                }
                _ => {
                    let hub = format!("e{k}");
                    let _ = writeln!(
                        out,
                        "  \"{hub}\" [shape=point,color={color},xlabel=\"{:?}\"];",
                        e.kind
                    );
                    for a in ids {
                        let _ = writeln!(out, "  \"{a}\" -- \"{hub}\" [color={color}{style}];");
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn retype(kind: EdgeType, size: usize) -> EdgeType {
    match (kind, size) {
        (EdgeType::T, 2) => EdgeType::N,
        (_, 1) => EdgeType::G,
        (k, _) => k,
    }
}

/// For each vertex, the smallest vertex of its orbit.
pub fn orbit_partition(n: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let mut rep: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for g in gens {
            for v in 0..n {
                let (a, b) = (rep[v], rep[g[v]]);
                if a != b {
                    let m = a.min(b);
                    for r in rep.iter_mut() {
                        if *r == a || *r == b {
                            *r = m;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return rep;
        }
    }
}

/// `π^!(φ)(x) = m(x)·φ(π(x))`, with `m` counted in `g_f`.
pub fn finite_field_pullback(
    g_f: &OrbitHypergraph,
    g_fbar: &OrbitHypergraph,
    proj: &[usize],
    phi: &[Rational],
) -> Result<Vec<Rational>, HypergraphError> {
    check_projection(g_f, g_fbar, proj)?;
    if phi.len() != g_fbar.len() {
        return Err(HypergraphError::IncompatibleProjection(
            "function length does not match the target graph".into(),
        ));
    }
    let m = g_f.dense_multiplicity();
    Ok((0..g_f.len())
        .map(|x| Rational::from_integer(m[x].into()) * &phi[proj[x]])
        .collect())
}

pub fn check_projection(
    g_f: &OrbitHypergraph,
    g_fbar: &OrbitHypergraph,
    proj: &[usize],
) -> Result<(), HypergraphError> {
    let bad = |s: String| Err(HypergraphError::IncompatibleProjection(s));
    if g_f.labels != g_fbar.labels {
        return bad("label lists differ".into());
    }
    if proj.len() != g_f.len() {
        return bad(format!("map has {} entries for {} vertices", proj.len(), g_f.len()));
    }
    if proj.iter().any(|&p| p >= g_fbar.len()) {
        return bad("map leaves the target graph".into());
    }
    let hit: BTreeSet<usize> = proj.iter().copied().collect();
    if hit.len() != g_fbar.len() {
        return bad("map is not surjective".into());
    }
    let inc = g_fbar.incidence();
    for e in &g_f.edges {
        let target = inc[proj[e.members[0]]][e.label];
        if e
            .members
            .iter()
            .any(|&m| inc[proj[m]][e.label] != target)
        {
            return bad(format!("edge {} is split by the map", g_f.edge_name(e)));
        }
    }
    Ok(())
}

/// Label- and rank-preserving isomorphism test by backtracking.
pub fn isomorphic(a: &OrbitHypergraph, b: &OrbitHypergraph) -> bool {
    if a.len() != b.len() || a.labels.len() != b.labels.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let sig = |g: &OrbitHypergraph, v: usize| -> (i64, Vec<(usize, EdgeType)>) {
        let mut s: Vec<(usize, EdgeType)> = g
            .edges
            .iter()
            .filter(|e| e.members.contains(&v))
            .map(|e| (e.members.len(), e.kind))
            .collect();
        s.sort();
        (g.rank(v), s)
    };
    let sa: Vec<_> = (0..a.len()).map(|v| sig(a, v)).collect();
    let sb: Vec<_> = (0..b.len()).map(|v| sig(b, v)).collect();
    let edges_b: BTreeSet<(usize, Vec<usize>, EdgeType)> = b
        .edges
        .iter()
        .map(|e| (e.label, e.members.clone(), e.kind))
        .collect();
    let label_map: Vec<usize> = a
        .labels
        .iter()
        .map(|l| b.labels.iter().position(|x| x == l).unwrap_or(usize::MAX))
        .collect();
    if label_map.contains(&usize::MAX) {
        return false;
    }
    let inc_a = a.incidence();
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];

    fn consistent(
        a: &OrbitHypergraph,
        inc_a: &[Vec<usize>],
        edges_b: &BTreeSet<(usize, Vec<usize>, EdgeType)>,
        label_map: &[usize],
        map: &[usize],
        v: usize,
    ) -> bool {
        for &ei in &inc_a[v] {
            let e = &a.edges[ei];
            if e.members.iter().all(|&m| map[m] != usize::MAX) {
                let mut m: Vec<usize> = e.members.iter().map(|&x| map[x]).collect();
                m.sort_unstable();
                if !edges_b.contains(&(label_map[e.label], m, e.kind)) {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        v: usize,
        a: &OrbitHypergraph,
        inc_a: &[Vec<usize>],
        edges_b: &BTreeSet<(usize, Vec<usize>, EdgeType)>,
        label_map: &[usize],
        sa: &[(i64, Vec<(usize, EdgeType)>)],
        sb: &[(i64, Vec<(usize, EdgeType)>)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == map.len() {
            return true;
        }
        for w in 0..sb.len() {
            if used[w] || sa[v] != sb[w] {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if consistent(a, inc_a, edges_b, label_map, map, v)
                && search(v + 1, a, inc_a, edges_b, label_map, sa, sb, map, used)
            {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    search(0, a, &inc_a, &edges_b, &label_map, &sa, &sb, &mut map, &mut used)
}

/// Unit vector helper for tests and callers building functions by hand.
pub fn indicator(n: usize, v: usize) -> Vec<Rational> {
    let mut f = vec![Rational::zero(); n];
    f[v] = Rational::one();
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(
        verts: &[(&str, i64)],
        labels: &[&str],
        edges: &[(&str, &[&str], EdgeType)],
        mode: FieldMode,
    ) -> Result<OrbitHypergraph, HypergraphError> {
        OrbitHypergraph::from_parts(
            verts.iter().map(|(i, r)| (i.to_string(), *r)).collect(),
            labels.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(l, m, k)| {
                    (
                        l.to_string(),
                        m.iter().map(|s| s.to_string()).collect(),
                        *k,
                        false,
                    )
                })
                .collect(),
            mode,
        )
    }

    fn pgl2_t() -> OrbitHypergraph {
        graph(
            &[("c1", 0), ("c2", 0), ("o", 1)],
            &["a"],
            &[("a", &["c1", "c2", "o"], EdgeType::T)],
            FieldMode::Closed,
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_graph() {
        let g = graph(
            &[("v", 0)],
            &["a", "b"],
            &[("a", &["v"], EdgeType::G), ("b", &["v"], EdgeType::G)],
            FieldMode::Closed,
        )
        .unwrap();
        assert_eq!(g.harmonic_space().dim(), 0);
        assert!(g.full_closed_vertices().is_empty());
        assert!(g.verify_dimension_theorem().unwrap());
    }

    #[test]
    fn rejects_u_edge_of_size_three() {
        let e = graph(
            &[("a", 0), ("b", 0), ("c", 1)],
            &["a"],
            &[("a", &["a", "b", "c"], EdgeType::U)],
            FieldMode::Closed,
        )
        .unwrap_err();
        assert!(matches!(e, HypergraphError::SizeMismatch { .. }));
    }

    #[test]
    fn rejects_broken_partition() {
        let e = graph(
            &[("a", 0), ("b", 1)],
            &["a"],
            &[("a", &["a", "b"], EdgeType::U), ("a", &["b"], EdgeType::G)],
            FieldMode::Closed,
        )
        .unwrap_err();
        assert!(matches!(e, HypergraphError::Partition { .. }));
    }

    #[test]
    fn rejects_two_dense_vertices() {
        let e = graph(
            &[("a", 1), ("b", 1)],
            &["a"],
            &[("a", &["a", "b"], EdgeType::U)],
            FieldMode::Closed,
        )
        .unwrap_err();
        assert!(matches!(e, HypergraphError::DenseNotUnique(_)));
    }

    #[test]
    fn no_edges_means_free_functions() {
        let g = graph(&[("a", 0), ("b", 0)], &[], &[], FieldMode::Closed).unwrap();
        assert_eq!(g.harmonic_space().dim(), 2);
    }

    #[test]
    fn pgl2_torus() {
        let g = pgl2_t();
        assert_eq!(g.full_closed_vertices(), vec![0, 1]);
        assert_eq!(g.harmonic_space().dim(), 2);
        let s = g.support_function().unwrap();
        assert_eq!(s.values[2], vec![-1, -1]);
    }

    #[test]
    fn double_dense_vertex() {
        let g = pgl2_t();
        let (d, proj) = g.rational_form_double(2).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.edges.len(), 1);
        assert_eq!(d.edges[0].members.len(), 4);
        assert_eq!(d.harmonic_space().dim(), 3);
        assert_eq!(proj, vec![0, 1, 2, 2]);
        assert_eq!(d.dense_multiplicity(), vec![2, 2, 1, 1]);
        assert!(g.rational_form_double(0).is_err());
        assert!(d.verify_dimension_theorem().is_err());
    }

    #[test]
    fn delete_lower_vertices() {
        let g = pgl2_t();
        let d = g.rational_form_delete(0).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.vertices[0].id, "o");
        assert_eq!(d.harmonic_space().dim(), 0);
    }

    #[test]
    fn swap_quotient() {
        let g = graph(
            &[("a", 0), ("b", 0)],
            &["x"],
            &[("x", &["a"], EdgeType::G), ("x", &["b"], EdgeType::G)],
            FieldMode::Closed,
        )
        .unwrap();
        let q = g.quotient_by_automorphisms(&[vec![1, 0]]).unwrap();
        assert_eq!(q.len(), 1);
        let t = g.quotient_by_automorphisms(&[]).unwrap();
        assert!(isomorphic(&t, &g));
    }

    #[test]
    fn quotient_retypes_t_to_n() {
        let q = pgl2_t().quotient_by_automorphisms(&[vec![1, 0, 2]]).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.edges[0].kind, EdgeType::N);
    }

    #[test]
    fn non_automorphism_rejected() {
        let g = pgl2_t();
        assert!(g.quotient_by_automorphisms(&[vec![2, 1, 0]]).is_err());
    }

    #[test]
    fn product_with_point() {
        let p = graph(&[("p", 0)], &[], &[], FieldMode::Closed).unwrap();
        let g = pgl2_t();
        assert!(isomorphic(&g.product(&p).unwrap(), &g));
        assert!(g.product(&g).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = pgl2_t();
        let back = OrbitHypergraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn pullback_rejects_bad_maps() {
        let g = pgl2_t();
        let (d, _) = g.rational_form_double(2).unwrap();
        let phi = vec![Rational::zero(); 3];
        assert!(finite_field_pullback(&d, &g, &[0, 1, 2], &phi).is_err());
        assert!(finite_field_pullback(&d, &g, &[0, 0, 2, 2], &phi).is_err());
        let zero = finite_field_pullback(&d, &g, &[0, 1, 2, 2], &phi).unwrap();
        assert!(zero.iter().all(Zero::is_zero));
    }

    #[test]
    fn dot_has_self_loops() {
        let g = graph(&[("v", 0)], &["a"], &[("a", &["v"], EdgeType::G)], FieldMode::Closed).unwrap();
        assert!(g.to_dot("x").contains("\"v\" -- \"v\""));
    }
}
