//! Involutions of the root lattice in standard position.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{mat_vec, Mat};
use crate::root_system::{
    generate_roots, is_negative, is_positive, simple_root, CartanDatum, Perm, Root, RootSystem,
    RootSystemError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvolutionError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("sigma has {got} rows of length {len}, expected {rank} rows of length {rank}")]
    Shape { rank: usize, got: usize, len: usize },
    #[error("sigma is not an involution: sigma^2 moves {0:?}")]
    NotAnInvolution(Root),
    #[error("sigma does not permute the roots: sigma({root:?}) = {image:?}")]
    NotRootPermuting { root: Root, image: Root },
    #[error("sigma is not in standard position: positive root {root:?} goes to positive {image:?}")]
    NotStandardPosition { root: Root, image: Root },
    #[error("sigma* is not a diagram automorphism at simple root {0}")]
    SigmaStarInconsistent(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootType {
    Fixed,
    Type1,
    Type2,
    Type3,
}

#[derive(Deserialize)]
struct InvolutionRepr {
    name: String,
    ambient: CartanDatum,
    sigma: Mat,
}

/// An involution of the root lattice. `sigma[i]` is the coefficient
/// vector of `σ(α_i)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "InvolutionRepr")]
pub struct InvolutionDatum {
    pub name: String,
    pub ambient: CartanDatum,
    pub sigma: Mat,
    #[serde(skip)]
    pub roots: RootSystem,
    #[serde(skip)]
    pub delta0: Vec<usize>,
    #[serde(skip)]
    pub factor_swap: Perm,
}

impl TryFrom<InvolutionRepr> for InvolutionDatum {
    type Error = InvolutionError;

    fn try_from(r: InvolutionRepr) -> Result<Self, Self::Error> {
        InvolutionDatum::new(&r.name, r.ambient, r.sigma)
    }
}

/// Which of the table shapes a local diagram has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagramShape {
    /// Two orthogonal nodes swapped by σ*.
    A1xA1Swap,
    /// A single node.
    A1,
    /// Two joined nodes swapped by σ*.
    A2Flip,
    Other,
}

/// Local diagram attached to a simple root outside Δ₀.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiAlphaDiagram {
    pub alpha: usize,
    pub nodes: Vec<usize>,
    pub black: Vec<usize>,
    pub cartan: Mat,
    /// σ* restricted to `nodes`, as positions in `nodes`.
    pub sigma_star: Vec<usize>,
    pub shape: DiagramShape,
}

impl InvolutionDatum {
    /// Builds and validates.
    pub fn new(name: &str, ambient: CartanDatum, sigma: Mat) -> Result<Self, InvolutionError> {
        let roots = generate_roots(&ambient)?;
        let n = roots.rank();
        if sigma.len() != n || sigma.iter().any(|r| r.len() != n) {
            return Err(InvolutionError::Shape {
                rank: n,
                got: sigma.len(),
                len: sigma.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
            });
        }
        let mut inv = InvolutionDatum {
            name: name.to_string(),
            ambient,
            sigma,
            roots,
            delta0: Vec::new(),
            factor_swap: Vec::new(),
        };
        inv.validate()?;
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        self.roots.rank()
    }

    /// Matrix acting on column coefficient vectors.
    pub fn matrix(&self) -> Mat {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.sigma[j][i]).collect())
            .collect()
    }

    pub fn apply(&self, v: &[i64]) -> Root {
        let n = self.rank();
        let mut out = vec![0; n];
        for (c, img) in v.iter().zip(&self.sigma) {
            for k in 0..n {
                out[k] += c * img[k];
            }
        }
        out
    }

    pub fn validate(&mut self) -> Result<(), InvolutionError> {
        let n = self.rank();
        for i in 0..n {
            let e = simple_root(n, i);
            if self.apply(&self.apply(&e)) != e {
                return Err(InvolutionError::NotAnInvolution(e));
            }
        }
        for r in &self.roots.roots {
            let img = self.apply(r);
            if !self.roots.contains(&img) {
                return Err(InvolutionError::NotRootPermuting {
                    root: r.clone(),
                    image: img,
                });
            }
        }
        for r in &self.roots.positives {
            let img = self.apply(r);
            if img != *r && !is_negative(&img) {
                return Err(InvolutionError::NotStandardPosition {
                    root: r.clone(),
                    image: img,
                });
            }
        }
        self.delta0 = (0..n)
            .filter(|&i| self.apply(&simple_root(n, i)) == simple_root(n, i))
            .collect();
        let ranges = self.ambient.factor_ranges();
        self.factor_swap = ranges
            .iter()
            .map(|range| {
                let img = self.apply(&simple_root(n, range.start));
                let k = img.iter().position(|&c| c != 0).expect("nonzero image");
                self.ambient.factor_of(k)
            })
            .collect();
        Ok(())
    }

    pub fn classify_simple_roots(&self) -> Vec<RootType> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let a = simple_root(n, i);
                let s = self.apply(&a);
                if s == a {
                    return RootType::Fixed;
                }
                let d: Root = a.iter().zip(&s).map(|(x, y)| x - y).collect();
                if self.roots.contains(&d) {
                    RootType::Type1
                } else if d.iter().all(|c| c % 2 == 0)
                    && self.roots.contains(&d.iter().map(|c| c / 2).collect::<Vec<_>>())
                {
                    RootType::Type2
                } else {
                    RootType::Type3
                }
            })
            .collect()
    }

    pub fn quasi_split(&self) -> bool {
        self.delta0.is_empty()
    }

    pub fn two_rho_0(&self) -> Root {
        let n = self.rank();
        let mut v = vec![0; n];
        for &i in &self.delta0 {
            v[i] += 1;
        }
        v
    }

    /// `σ*(α) = −σ(w_{Δ₀}(α))` with `w_{Δ₀}` the longest element of the
    /// parabolic subgroup of Δ₀, returned as a permutation of Δ.
    pub fn sigma_star(&self) -> Result<Perm, InvolutionError> {
        let n = self.rank();
        let w = self.roots.longest_element(&self.delta0);
        let mut p = Vec::with_capacity(n);
        for i in 0..n {
            let img: Root = self
                .apply(&mat_vec(&w, &simple_root(n, i)))
                .iter()
                .map(|c| -c)
                .collect();
            let k = (0..n)
                .find(|&k| img == simple_root(n, k))
                .ok_or(InvolutionError::SigmaStarInconsistent(i))?;
            p.push(k);
        }
        let c = &self.ambient.cartan;
        for i in 0..n {
            if p[p[i]] != i || (0..n).any(|j| c[p[i]][p[j]] != c[i][j]) {
                return Err(InvolutionError::SigmaStarInconsistent(i));
            }
        }
        Ok(p)
    }

    /// The permutation of Δ induced by `w₀ ∘ σ`, when it is one; this is
    /// the class of σ modulo inner automorphisms.
    pub fn outer_class(&self) -> Option<Perm> {
        let n = self.rank();
        let w0 = self.roots.w0();
        (0..n)
            .map(|i| {
                let img = mat_vec(&w0, &self.apply(&simple_root(n, i)));
                (0..n).find(|&k| img == simple_root(n, k))
            })
            .collect()
    }

    pub fn factor_is_invariant(&self, f: usize) -> bool {
        self.factor_swap[f] == f
    }

    /// True iff σ preserves factor `f` and acts on it by an inner
    /// automorphism.
    pub fn factor_is_inner(&self, f: usize) -> bool {
        if !self.factor_is_invariant(f) {
            return false;
        }
        match self.outer_class() {
            Some(p) => self.ambient.factor_ranges()[f].clone().all(|i| p[i] == i),
            None => false,
        }
    }

    pub fn phi_alpha_diagram(&self, alpha: usize) -> Result<PhiAlphaDiagram, InvolutionError> {
        let star = self.sigma_star()?;
        let mut gens: BTreeSet<usize> = self.delta0.iter().copied().collect();
        gens.insert(alpha);
        gens.insert(star[alpha]);
        let c = &self.ambient.cartan;
        let component = |start: usize| -> BTreeSet<usize> {
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &gens {
                    if c[x][y] != 0 && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            seen
        };
        let mut nodes: BTreeSet<usize> = component(alpha);
        nodes.extend(component(star[alpha]));
        let nodes: Vec<usize> = nodes.into_iter().collect();
        let black: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|i| self.delta0.contains(i))
            .collect();
        let sub: Mat = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| c[i][j]).collect())
            .collect();
        let sigma_star: Vec<usize> = nodes
            .iter()
            .map(|&i| nodes.iter().position(|&j| j == star[i]).expect("σ*-stable"))
            .collect();
        let shape = match (nodes.len(), black.is_empty()) {
            (1, true) => DiagramShape::A1,
            (2, true) if sigma_star == [1, 0] && sub[0][1] == 0 => DiagramShape::A1xA1Swap,
            (2, true) if sigma_star == [1, 0] && sub == vec![vec![2, -1], vec![-1, 2]] => {
                DiagramShape::A2Flip
            }
            _ => DiagramShape::Other,
        };
        Ok(PhiAlphaDiagram {
            alpha,
            nodes,
            black,
            cartan: sub,
            sigma_star,
            shape,
        })
    }

    /// Positive roots fixed by σ; empty iff σ sends every positive root to a
    /// negative one.
    pub fn fixed_positive_roots(&self) -> Vec<Root> {
        self.roots
            .positives
            .iter()
            .filter(|r| is_positive(r) && self.apply(r) == **r)
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(types: &str, sigma: Mat) -> Result<InvolutionDatum, InvolutionError> {
        InvolutionDatum::new("t", CartanDatum::parse(types).unwrap(), sigma)
    }

    #[test]
    fn a1_minus_identity() {
        let i = inv("A1", vec![vec![-1]]).unwrap();
        assert!(i.delta0.is_empty());
        assert!(i.quasi_split());
        assert_eq!(i.classify_simple_roots(), vec![RootType::Type2]);
        assert_eq!(i.sigma_star().unwrap(), vec![0]);
    }

    #[test]
    fn a1_identity() {
        let i = inv("A1", vec![vec![1]]).unwrap();
        assert_eq!(i.delta0, vec![0]);
        assert!(!i.quasi_split());
        assert_eq!(i.two_rho_0(), vec![1]);
    }

    #[test]
    fn a2_with_one_fixed_root() {
        let i = inv("A2", vec![vec![1, 0], vec![-1, -1]]).unwrap();
        assert_eq!(i.delta0, vec![0]);
        assert_eq!(i.two_rho_0(), vec![1, 0]);
    }

    #[test]
    fn order_three_matrix_is_rejected() {
        let e = inv("A2", vec![vec![0, 1], vec![-1, -1]]).unwrap_err();
        assert!(matches!(e, InvolutionError::NotAnInvolution(_)));
    }

    #[test]
    fn not_standard_position() {
        let e = inv("A2", vec![vec![0, 1], vec![1, 0]]).unwrap_err();
        assert!(matches!(e, InvolutionError::NotStandardPosition { .. }));
    }

    #[test]
    fn table_rows() {
        let row1 = inv("A1xA1", vec![vec![0, -1], vec![-1, 0]]).unwrap();
        assert_eq!(row1.classify_simple_roots(), vec![RootType::Type3; 2]);
        assert_eq!(row1.sigma_star().unwrap(), vec![1, 0]);
        assert_eq!(row1.phi_alpha_diagram(0).unwrap().shape, DiagramShape::A1xA1Swap);

        let row5 = inv("A2", vec![vec![0, -1], vec![-1, 0]]).unwrap();
        assert_eq!(row5.classify_simple_roots(), vec![RootType::Type1; 2]);
        assert_eq!(row5.phi_alpha_diagram(0).unwrap().shape, DiagramShape::A2Flip);
        assert!(row5.factor_is_inner(0));

        let outer = inv("A2", vec![vec![-1, 0], vec![0, -1]]).unwrap();
        assert_eq!(outer.sigma_star().unwrap(), vec![0, 1]);
        assert_eq!(outer.outer_class().unwrap(), vec![1, 0]);
        assert!(!outer.factor_is_inner(0));
        assert_eq!(outer.phi_alpha_diagram(1).unwrap().shape, DiagramShape::A1);
    }

    #[test]
    fn sigma_star_with_fixed_roots() {
        // A3 with the middle root fixed and the outer roots exchanged.
        let i = inv("A3", vec![vec![0, -1, -1], vec![0, 1, 0], vec![-1, -1, 0]]).unwrap();
        assert_eq!(i.delta0, vec![1]);
        let star = i.sigma_star().unwrap();
        assert_eq!(star, vec![2, 1, 0]);
        let d = i.phi_alpha_diagram(0).unwrap();
        assert_eq!(d.black, vec![1]);
        assert_eq!(d.nodes, vec![0, 1, 2]);
        assert_eq!(d.shape, DiagramShape::Other);
    }
}
