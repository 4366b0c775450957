//! Root systems from Cartan matrices, Weyl group actions, the affine
//! Dynkin diagram and the group Ω of its special automorphisms.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{identity, mat_mul, mat_vec, Mat};

pub type Root = Vec<i64>;
pub type Perm = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("cartan matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("cartan entry ({0},{0}) is not 2")]
    BadDiagonal(usize),
    #[error("cartan entry ({0},{1}) is positive")]
    PositiveOffDiagonal(usize, usize),
    #[error("cartan entries ({0},{1}) and ({1},{0}) disagree on vanishing")]
    AsymmetricZero(usize, usize),
    #[error("cartan matrix does not match factor list: {0}")]
    FactorMismatch(String),
    #[error("unsupported simple type {0}")]
    Unsupported(String),
    #[error("root closure exceeded {0} roots; matrix is not of finite type")]
    Infinite(usize),
    #[error("root list does not match the generated root system")]
    RootsMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "type")]
    pub kind: SimpleType,
    pub rank: usize,
}

impl Factor {
    pub fn new(kind: SimpleType, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match kind {
            SimpleType::A => rank >= 1,
            SimpleType::B | SimpleType::C => rank >= 2,
            SimpleType::D => rank >= 4,
            SimpleType::G => rank == 2,
        };
        if ok {
            Ok(Factor { kind, rank })
        } else {
            Err(RootSystemError::Unsupported(format!("{kind:?}{rank}")))
        }
    }

    /// Standard Cartan matrix with entries `<alpha_i^vee, alpha_j>`.
    /// B_n has its short root last, C_n its long root last, and G_2 has
    /// the short root first.
    pub fn cartan(&self) -> Mat {
        let n = self.rank;
        let mut m = identity(n);
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x *= 2;
            }
        }
        let chain = match self.kind {
            SimpleType::D => n - 1,
            _ => n,
        };
        for i in 0..chain.saturating_sub(1) {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
        match self.kind {
            SimpleType::A => {}
            SimpleType::B => m[n - 1][n - 2] = -2,
            SimpleType::C => m[n - 2][n - 1] = -2,
            SimpleType::D => {
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
            }
            SimpleType::G => m[0][1] = -3,
        }
        m
    }

    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.kind {
            SimpleType::A => n * (n + 1),
            SimpleType::B | SimpleType::C => 2 * n * n,
            SimpleType::D => 2 * n * (n - 1),
            SimpleType::G => 12,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

impl FromStr for Factor {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RootSystemError::Unsupported(s.to_string());
        let mut chars = s.trim().chars();
        let kind = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => SimpleType::A,
            'B' => SimpleType::B,
            'C' => SimpleType::C,
            'D' => SimpleType::D,
            'G' => SimpleType::G,
            _ => return Err(bad()),
        };
        let rank = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| bad())?;
        Factor::new(kind, rank)
    }
}

#[derive(Deserialize)]
struct CartanRepr {
    factors: Vec<Factor>,
    #[serde(default)]
    cartan: Option<Mat>,
}

/// Simple factors together with the block diagonal Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CartanRepr")]
pub struct CartanDatum {
    pub factors: Vec<Factor>,
    pub cartan: Mat,
}

impl TryFrom<CartanRepr> for CartanDatum {
    type Error = RootSystemError;

    fn try_from(r: CartanRepr) -> Result<Self, Self::Error> {
        let datum = match r.cartan {
            Some(cartan) => CartanDatum {
                factors: r.factors,
                cartan,
            },
            None => CartanDatum::from_factors(&r.factors),
        };
        datum.validate()?;
        Ok(datum)
    }
}

impl CartanDatum {
    pub fn from_factors(factors: &[Factor]) -> Self {
        let n: usize = factors.iter().map(|f| f.rank).sum();
        let mut cartan = vec![vec![0; n]; n];
        let mut off = 0;
        for f in factors {
            let block = f.cartan();
            for i in 0..f.rank {
                for j in 0..f.rank {
                    cartan[off + i][off + j] = block[i][j];
                }
            }
            off += f.rank;
        }
        CartanDatum {
            factors: factors.to_vec(),
            cartan,
        }
    }

    /// Parses `"A2"`, `"A1xA1"`, `"C2"` and the like.
    pub fn parse(types: &str) -> Result<Self, RootSystemError> {
        let factors = types
            .split(['x', '×', '*'])
            .map(str::parse)
            .collect::<Result<Vec<Factor>, _>>()?;
        Ok(Self::from_factors(&factors))
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn factor_ranges(&self) -> Vec<Range<usize>> {
        let mut off = 0;
        self.factors
            .iter()
            .map(|f| {
                let r = off..off + f.rank;
                off += f.rank;
                r
            })
            .collect()
    }

    pub fn factor_of(&self, i: usize) -> usize {
        self.factor_ranges()
            .iter()
            .position(|r| r.contains(&i))
            .expect("simple root index in range")
    }

    pub fn validate(&self) -> Result<(), RootSystemError> {
        let n = self.cartan.len();
        for (row, r) in self.cartan.iter().enumerate() {
            if r.len() != n {
                return Err(RootSystemError::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
        }
        for i in 0..n {
            if self.cartan[i][i] != 2 {
                return Err(RootSystemError::BadDiagonal(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if self.cartan[i][j] > 0 {
                    return Err(RootSystemError::PositiveOffDiagonal(i, j));
                }
                if (self.cartan[i][j] == 0) != (self.cartan[j][i] == 0) {
                    return Err(RootSystemError::AsymmetricZero(i, j));
                }
            }
        }
        let total: usize = self.factors.iter().map(|f| f.rank).sum();
        if total != n {
            return Err(RootSystemError::FactorMismatch(format!(
                "factor ranks sum to {total}, matrix has size {n}"
            )));
        }
        let expected = CartanDatum::from_factors(&self.factors);
        if expected.cartan != self.cartan {
            return Err(RootSystemError::FactorMismatch(
                "blocks differ from the standard matrices of the listed factors".into(),
            ));
        }
        Ok(())
    }
}

/// The finite root system of a Cartan datum, in the simple root basis.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan: CartanDatum,
    /// All roots, sorted lexicographically.
    pub roots: Vec<Root>,
    pub positives: Vec<Root>,
    /// Highest root of each factor, in factor order.
    pub highest_roots: Vec<Root>,
    lookup: HashSet<Root>,
}

#[derive(Serialize, Deserialize)]
struct RootSystemRepr {
    factors: Vec<Factor>,
    cartan: Mat,
    roots: Vec<Root>,
}

impl Serialize for RootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RootSystemRepr {
            factors: self.cartan.factors.clone(),
            cartan: self.cartan.cartan.clone(),
            roots: self.roots.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = RootSystemRepr::deserialize(d)?;
        let datum = CartanDatum::try_from(CartanRepr {
            factors: r.factors,
            cartan: Some(r.cartan),
        })
        .map_err(D::Error::custom)?;
        let rs = generate_roots(&datum).map_err(D::Error::custom)?;
        let mut given = r.roots;
        given.sort();
        if given != rs.roots {
            return Err(D::Error::custom(RootSystemError::RootsMismatch));
        }
        Ok(rs)
    }
}

pub fn generate_roots(cartan: &CartanDatum) -> Result<RootSystem, RootSystemError> {
    cartan.validate()?;
    let n = cartan.rank();
    let limit = 4 * n * n + 64;
    let mut seen: HashSet<Root> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            let w = reflect_with(&cartan.cartan, i, &v);
            if seen.insert(w.clone()) {
                if seen.len() > limit {
                    return Err(RootSystemError::Infinite(limit));
                }
                queue.push_back(w);
            }
        }
    }
    let mut roots: Vec<Root> = seen.into_iter().collect();
    roots.sort();
    let positives: Vec<Root> = roots
        .iter()
        .filter(|r| r.iter().all(|&c| c >= 0))
        .cloned()
        .collect();
    let highest_roots = cartan
        .factor_ranges()
        .iter()
        .map(|range| {
            positives
                .iter()
                .filter(|r| r.iter().enumerate().all(|(k, &c)| c == 0 || range.contains(&k)))
                .max_by_key(|r| r.iter().sum::<i64>())
                .cloned()
                .expect("every factor has a positive root")
        })
        .collect();
    let lookup = roots.iter().cloned().collect();
    Ok(RootSystem {
        cartan: cartan.clone(),
        roots,
        positives,
        highest_roots,
        lookup,
    })
}

fn reflect_with(cartan: &Mat, i: usize, v: &[i64]) -> Root {
    let pairing: i64 = v.iter().zip(&cartan[i]).map(|(x, a)| x * a).sum();
    let mut w = v.to_vec();
    w[i] -= pairing;
    w
}

pub fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

pub fn is_positive(v: &[i64]) -> bool {
    v.iter().any(|&c| c != 0) && v.iter().all(|&c| c >= 0)
}

pub fn is_negative(v: &[i64]) -> bool {
    v.iter().any(|&c| c != 0) && v.iter().all(|&c| c <= 0)
}

pub fn simple_root(n: usize, i: usize) -> Root {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.lookup.contains(v)
    }

    pub fn reflect(&self, i: usize, v: &[i64]) -> Root {
        reflect_with(&self.cartan.cartan, i, v)
    }

    /// Matrix of the simple reflection; column j is `s_i(alpha_j)`.
    pub fn reflection_matrix(&self, i: usize) -> Mat {
        let n = self.rank();
        let mut m = identity(n);
        for j in 0..n {
            m[i][j] -= self.cartan.cartan[i][j];
        }
        m
    }

    /// Longest element of the parabolic subgroup generated by `subset`,
    /// as a matrix whose column j is `w(alpha_j)`.
    pub fn longest_element(&self, subset: &[usize]) -> Mat {
        let mut w = identity(self.rank());
        loop {
            let next = subset.iter().copied().find(|&i| {
                let col: Root = w.iter().map(|row| row[i]).collect();
                is_positive(&col)
            });
            match next {
                Some(i) => w = mat_mul(&w, &self.reflection_matrix(i)),
                None => return w,
            }
        }
    }

    pub fn w0(&self) -> Mat {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.longest_element(&all)
    }

    pub fn apply(&self, w: &Mat, v: &[i64]) -> Root {
        mat_vec(w, v)
    }

    /// Roots supported on the given simple roots.
    pub fn parabolic_roots(&self, subset: &[usize]) -> Vec<Root> {
        self.roots
            .iter()
            .filter(|r| r.iter().enumerate().all(|(k, &c)| c == 0 || subset.contains(&k)))
            .cloned()
            .collect()
    }

    pub fn coxeter_number(&self, factor: usize) -> i64 {
        height(&self.highest_roots[factor]) + 1
    }
}

/// A node of the affine Dynkin diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineNode {
    pub name: String,
    pub factor: usize,
    /// `None` for the affine node of the factor.
    pub simple: Option<usize>,
}

/// The affine Dynkin diagram together with Ω, realized as node
/// permutations. Finite nodes come first, then one affine node per factor.
#[derive(Debug, Clone)]
pub struct AffineDynkin {
    pub rank: usize,
    pub nodes: Vec<AffineNode>,
    /// Element 0 is the identity.
    pub omega: Vec<Perm>,
    /// For each element, its component in each factor group, as an index
    /// into `factor_groups[f]`.
    pub components: Vec<Vec<usize>>,
    /// The Ω of each simple factor; element 0 is the identity.
    pub factor_groups: Vec<Vec<Perm>>,
}

fn compose_perm(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

pub fn perm_sign(p: &Perm) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1i8;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn affine_node_name(rank: usize, nfactors: usize, node: usize) -> String {
    if node < rank {
        format!("s{}", node + 1)
    } else if nfactors == 1 {
        "s0".to_string()
    } else {
        format!("s0_{}", node - rank + 1)
    }
}

pub fn fundamental_group(rs: &RootSystem) -> AffineDynkin {
    let n = rs.rank();
    let ranges = rs.cartan.factor_ranges();
    let nf = ranges.len();
    let total = n + nf;
    let mut nodes: Vec<AffineNode> = (0..n)
        .map(|i| AffineNode {
            name: affine_node_name(n, nf, i),
            factor: rs.cartan.factor_of(i),
            simple: Some(i),
        })
        .collect();
    for f in 0..nf {
        nodes.push(AffineNode {
            name: affine_node_name(n, nf, n + f),
            factor: f,
            simple: None,
        });
    }

    let mut factor_groups = Vec::new();
    for (f, range) in ranges.iter().enumerate() {
        let theta = &rs.highest_roots[f];
        let all: Vec<usize> = range.clone().collect();
        let w0 = rs.longest_element(&all);
        let mut group: Vec<Perm> = vec![(0..total).collect()];
        for j in range.clone().filter(|&j| theta[j] == 1) {
            let rest: Vec<usize> = all.iter().copied().filter(|&k| k != j).collect();
            let u = mat_mul(&rs.longest_element(&rest), &w0);
            let locate = |v: &Root| -> usize {
                if v.iter().zip(theta).all(|(a, b)| *a == -b) {
                    return n + f;
                }
                range
                    .clone()
                    .find(|&k| *v == simple_root(n, k))
                    .expect("special automorphism maps the affine base to itself")
            };
            let mut p: Perm = (0..total).collect();
            for i in range.clone() {
                p[i] = locate(&mat_vec(&u, &simple_root(n, i)));
            }
            let neg_theta: Root = theta.iter().map(|c| -c).collect();
            p[n + f] = locate(&mat_vec(&u, &neg_theta));
            group.push(p);
        }
        factor_groups.push(group);
    }

    let mut omega: Vec<Perm> = vec![(0..total).collect()];
    let mut components: Vec<Vec<usize>> = vec![vec![]];
    for group in &factor_groups {
        let mut next_omega = Vec::new();
        let mut next_comp = Vec::new();
        for (p, c) in omega.iter().zip(&components) {
            for (k, q) in group.iter().enumerate() {
                next_omega.push(compose_perm(q, p));
                let mut c2 = c.clone();
                c2.push(k);
                next_comp.push(c2);
            }
        }
        omega = next_omega;
        components = next_comp;
    }
    AffineDynkin {
        rank: n,
        nodes,
        omega,
        components,
        factor_groups,
    }
}

impl AffineDynkin {
    pub fn order(&self) -> usize {
        self.omega.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.omega.iter().position(|q| q == p)
    }

    /// Index of `a ∘ b` (apply `b` first).
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let p = compose_perm(&self.omega[a], &self.omega[b]);
        self.index_of(&p).expect("Ω is closed under composition")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let p = &self.omega[a];
        let mut inv = vec![0; p.len()];
        for (i, &x) in p.iter().enumerate() {
            inv[x] = i;
        }
        self.index_of(&inv).expect("Ω is closed under inversion")
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn act_on_node(&self, o: usize, node: usize) -> usize {
        self.omega[o][node]
    }

    /// True iff the listed elements form a subgroup.
    pub fn is_subgroup(&self, elems: &BTreeSet<usize>) -> bool {
        elems.contains(&0)
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| elems.contains(&self.compose(a, b))))
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.compose(g, x);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// A generator of the cyclic group of factor `f` and, for each element
    /// of that group, its exponent. `None` if the factor group is not cyclic.
    pub fn factor_cyclic_structure(&self, f: usize) -> Option<(usize, Vec<usize>)> {
        let group = &self.factor_groups[f];
        let m = group.len();
        for (g, gp) in group.iter().enumerate() {
            let mut exps = vec![usize::MAX; m];
            let mut cur: Perm = group[0].clone();
            for e in 0..m {
                let k = group.iter().position(|q| *q == cur)?;
                if exps[k] != usize::MAX {
                    break;
                }
                exps[k] = e;
                cur = compose_perm(gp, &cur);
            }
            if exps.iter().all(|&e| e != usize::MAX) {
                return Some((g, exps));
            }
        }
        None
    }
}

/// Sign of the permutation of Ω on the nodes of the affine diagram.
pub fn chi0_sign(ad: &AffineDynkin, o: usize) -> i8 {
    perm_sign(&ad.omega[o])
}

pub type Phase = Ratio<i64>;

fn reduce_phase(p: Phase) -> Phase {
    let f = p - p.floor();
    if f < Phase::from_integer(0) {
        f + 1
    } else {
        f
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("expected {expected} phases, one per simple factor, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("phase {phase} on factor {factor} is not killed by the order {order}")]
    NotAHomomorphism { factor: usize, phase: String, order: usize },
    #[error("factor {0} has a non-cyclic Ω; phases cannot be assigned")]
    NonCyclic(usize),
    #[error("cannot parse character spec {0:?}")]
    Parse(String),
}

/// An unramified character restricted to Ω, stored as phases in Q/Z:
/// the value at `o` is `exp(2πi·phase[o])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub phases: Vec<Phase>,
}

impl Character {
    pub fn trivial(ad: &AffineDynkin) -> Self {
        Character {
            phases: vec![Phase::from_integer(0); ad.order()],
        }
    }

    pub fn chi0(ad: &AffineDynkin) -> Self {
        Character {
            phases: (0..ad.order())
                .map(|o| {
                    if chi0_sign(ad, o) < 0 {
                        Phase::new(1, 2)
                    } else {
                        Phase::from_integer(0)
                    }
                })
                .collect(),
        }
    }

    /// Character given by its phase on the generator of each factor's
    /// cyclic Ω.
    pub fn from_generator_phases(
        ad: &AffineDynkin,
        phases: &[Phase],
    ) -> Result<Self, CharacterError> {
        let nf = ad.factor_groups.len();
        if phases.len() != nf {
            return Err(CharacterError::Arity {
                expected: nf,
                got: phases.len(),
            });
        }
        let mut exps = Vec::new();
        for (f, &ph) in phases.iter().enumerate() {
            let (_, e) = ad
                .factor_cyclic_structure(f)
                .ok_or(CharacterError::NonCyclic(f))?;
            let order = ad.factor_groups[f].len();
            if !(ph * Phase::from_integer(order as i64)).is_integer() {
                return Err(CharacterError::NotAHomomorphism {
                    factor: f,
                    phase: ph.to_string(),
                    order,
                });
            }
            exps.push(e);
        }
        let values = ad
            .components
            .iter()
            .map(|comp| {
                let total = comp
                    .iter()
                    .enumerate()
                    .fold(Phase::from_integer(0), |acc, (f, &k)| {
                        acc + phases[f] * Phase::from_integer(exps[f][k] as i64)
                    });
                reduce_phase(total)
            })
            .collect();
        Ok(Character { phases: values })
    }

    /// Parses a comma separated list of per-factor generator phases such
    /// as `"1/2"` or `"0,1/3"`. The words `trivial` and `chi0` are accepted.
    pub fn parse(ad: &AffineDynkin, spec: &str) -> Result<Self, CharacterError> {
        match spec.trim() {
            "trivial" | "1" => return Ok(Self::trivial(ad)),
            "chi0" => return Ok(Self::chi0(ad)),
            _ => {}
        }
        let phases = spec
            .split(',')
            .map(|s| {
                let s = s.trim();
                let parsed = match s.split_once('/') {
                    Some((a, b)) => a
                        .trim()
                        .parse::<i64>()
                        .ok()
                        .zip(b.trim().parse::<i64>().ok().filter(|&d| d != 0))
                        .map(|(a, b)| Phase::new(a, b)),
                    None => s.parse::<i64>().ok().map(Phase::from_integer),
                };
                parsed.ok_or_else(|| CharacterError::Parse(spec.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_generator_phases(ad, &phases)
    }

    pub fn value(&self, o: usize) -> Phase {
        self.phases[o]
    }

    pub fn is_trivial_on(&self, elems: &BTreeSet<usize>) -> bool {
        elems.iter().all(|&o| self.phases[o] == Phase::from_integer(0))
    }

    /// Pointwise quotient `self^{-1} · other`.
    pub fn inverse_times(&self, other: &Character) -> Character {
        Character {
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| reduce_phase(*b - *a))
                .collect(),
        }
    }

    pub fn is_homomorphism(&self, ad: &AffineDynkin) -> bool {
        (0..ad.order()).all(|a| {
            (0..ad.order()).all(|b| {
                reduce_phase(self.phases[a] + self.phases[b]) == self.phases[ad.compose(a, b)]
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        generate_roots(&CartanDatum::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn a1_roots() {
        let r = rs("A1");
        assert_eq!(r.roots, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn a2_highest_root() {
        let r = rs("A2");
        assert_eq!(r.roots.len(), 6);
        assert_eq!(r.highest_roots, vec![vec![1, 1]]);
    }

    #[test]
    fn g2_highest_root() {
        let r = rs("G2");
        assert_eq!(r.roots.len(), 12);
        assert_eq!(r.highest_roots, vec![vec![3, 2]]);
    }

    #[test]
    fn root_counts() {
        for s in ["A3", "A4", "B2", "B3", "C2", "C3", "D4", "A1xA1", "A2xC2"] {
            let c = CartanDatum::parse(s).unwrap();
            let expected: usize = c.factors.iter().map(Factor::root_count).sum();
            assert_eq!(rs(s).roots.len(), expected, "{s}");
        }
    }

    #[test]
    fn rejects_bad_matrix() {
        let c = CartanDatum {
            factors: vec![Factor::new(SimpleType::A, 2).unwrap()],
            cartan: vec![vec![2, -1], vec![0, 2]],
        };
        assert_eq!(c.validate(), Err(RootSystemError::AsymmetricZero(0, 1)));
        let c = CartanDatum {
            factors: vec![Factor::new(SimpleType::A, 1).unwrap()],
            cartan: vec![vec![3]],
        };
        assert!(generate_roots(&c).is_err());
    }

    #[test]
    fn w0_is_minus_identity_for_c2_and_g2() {
        for s in ["C2", "G2", "A1"] {
            let r = rs(s);
            let w0 = r.w0();
            for i in 0..r.rank() {
                let img = mat_vec(&w0, &simple_root(r.rank(), i));
                assert!(img.iter().enumerate().all(|(k, &c)| c == -i64::from(k == i)));
            }
        }
    }

    #[test]
    fn omega_orders() {
        assert_eq!(fundamental_group(&rs("A1")).order(), 2);
        assert_eq!(fundamental_group(&rs("A2")).order(), 3);
        assert_eq!(fundamental_group(&rs("A4")).order(), 5);
        assert_eq!(fundamental_group(&rs("C2")).order(), 2);
        assert_eq!(fundamental_group(&rs("G2")).order(), 1);
        assert_eq!(fundamental_group(&rs("A1xA2")).order(), 6);
    }

    #[test]
    fn a1_swap_and_a2_rotation() {
        let a1 = fundamental_group(&rs("A1"));
        assert_eq!(a1.omega[1], vec![1, 0]);
        assert_eq!(chi0_sign(&a1, 1), -1);
        let a2 = fundamental_group(&rs("A2"));
        for o in 1..3 {
            let p = &a2.omega[o];
            assert!((0..3).all(|k| p[k] != k));
            assert_eq!(chi0_sign(&a2, o), 1);
        }
    }

    #[test]
    fn c2_swaps_the_two_long_nodes() {
        let c2 = fundamental_group(&rs("C2"));
        assert_eq!(c2.omega[1], vec![0, 2, 1]);
    }

    #[test]
    fn characters() {
        let ad = fundamental_group(&rs("A1"));
        let chi0 = Character::chi0(&ad);
        assert_eq!(Character::parse(&ad, "1/2").unwrap(), chi0);
        assert!(chi0.is_homomorphism(&ad));
        assert!(Character::parse(&ad, "1/3").is_err());
        let a2 = fundamental_group(&rs("A2"));
        let chi = Character::parse(&a2, "1/3").unwrap();
        assert!(chi.is_homomorphism(&a2));
        assert!(!chi.is_trivial_on(&BTreeSet::from([0, 1])));
    }
}
