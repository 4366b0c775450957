//! Dual group side: the unipotent criterion, the factoring verdict, and
//! the Jordan type of a regular symplectic unipotent inside SL_{2n+1}.

use thiserror::Error;

use crate::involution::{DiagramShape, InvolutionDatum, InvolutionError, RootType};
use crate::linalg::{identity, mat_mul, rank_i64, Mat};
use crate::root_system::SimpleType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error("{got} factor descriptions for {factors} factors")]
    FactorDataLength { factors: usize, got: usize },
    #[error("factor {factor} described as {text:?} disagrees with the involution data")]
    FactorDataMismatch { factor: usize, text: String },
    #[error("quasi-split involution has a local diagram outside the table at simple root {0}")]
    UnexpectedDiagram(usize),
    #[error("the structural and diagram formulations disagree ({structural} vs {diagram})")]
    FormulationsDisagree { structural: bool, diagram: bool },
}

/// Factors of type A_{2n} that σ preserves and acts on by an inner
/// automorphism.
pub fn a2n_exceptions(inv: &InvolutionDatum) -> Vec<usize> {
    inv.ambient
        .factors
        .iter()
        .enumerate()
        .filter(|(f, fac)| {
            fac.kind == SimpleType::A && fac.rank % 2 == 0 && inv.factor_is_inner(*f)
        })
        .map(|(f, _)| f)
        .collect()
}

/// Reads `P(GLaxGLb)`; returns `(a, b)`.
fn parse_levi_text(text: &str) -> Option<(usize, usize)> {
    let inner = text.strip_prefix("P(")?.strip_suffix(')')?;
    let (l, r) = inner.split_once('x')?;
    Some((
        l.strip_prefix("GL")?.parse().ok()?,
        r.strip_prefix("GL")?.parse().ok()?,
    ))
}

fn check_factor_data(inv: &InvolutionDatum, factor_data: &[String]) -> Result<(), DualError> {
    let factors = &inv.ambient.factors;
    if factor_data.len() != factors.len() {
        return Err(DualError::FactorDataLength {
            factors: factors.len(),
            got: factor_data.len(),
        });
    }
    let structural = a2n_exceptions(inv);
    for (f, text) in factor_data.iter().enumerate() {
        let Some((a, b)) = parse_levi_text(text) else {
            continue;
        };
        let fac = &factors[f];
        if fac.kind != SimpleType::A || a + b != fac.rank + 1 {
            return Err(DualError::FactorDataMismatch {
                factor: f,
                text: text.clone(),
            });
        }
        let textual = a.abs_diff(b) == 1;
        if textual != structural.contains(&f) {
            return Err(DualError::FactorDataMismatch {
                factor: f,
                text: text.clone(),
            });
        }
    }
    Ok(())
}

/// Whether the unipotent variety of the dual group of X meets the regular
/// unipotent orbit of the dual group of G.
///
/// Computed twice: structurally (quasi-split, no inner A_{2n} factor) and
/// from the local diagrams (every one a single node or a swapped pair of
/// orthogonal nodes). Disagreement is an error.
pub fn unipotent_criterion(inv: &InvolutionDatum, factor_data: &[String]) -> Result<bool, DualError> {
    check_factor_data(inv, factor_data)?;
    let structural = inv.quasi_split() && a2n_exceptions(inv).is_empty();
    let diagram = if inv.quasi_split() {
        let mut ok = true;
        for a in 0..inv.rank() {
            match inv.phi_alpha_diagram(a)?.shape {
                DiagramShape::A1 | DiagramShape::A1xA1Swap => {}
                DiagramShape::A2Flip => ok = false,
                DiagramShape::Other => return Err(DualError::UnexpectedDiagram(a)),
            }
        }
        ok
    } else {
        false
    };
    if structural != diagram {
        return Err(DualError::FormulationsDisagree { structural, diagram });
    }
    Ok(structural)
}

/// Whether the Steinberg parameter factors through the dual group of X:
/// X is quasi-split and no simple root has `α − σ(α)` a root, so the
/// coroots `(α − σα)/2` and the pairs `{α, σ*α}` give a regular unipotent
/// of the dual group of X.
pub fn parameter_factors_through_iota(inv: &InvolutionDatum) -> bool {
    inv.quasi_split()
        && inv
            .classify_simple_roots()
            .iter()
            .all(|t| matches!(t, RootType::Type2 | RootType::Type3))
}

/// Gram matrix of the symplectic form on `2n` coordinates,
/// `antidiag(1, …, 1, −1, …, −1)`.
pub fn symplectic_form(n: usize) -> Mat {
    let d = 2 * n;
    let mut j = vec![vec![0; d]; d];
    for (k, row) in j.iter_mut().enumerate() {
        row[d - 1 - k] = if k < n { 1 } else { -1 };
    }
    j
}

/// Product of `I + X_α` over the simple root vectors of `sp_{2n}` for the
/// form [`symplectic_form`].
pub fn symplectic_regular_unipotent(n: usize) -> Mat {
    let d = 2 * n;
    let mut u = identity(d);
    for i in 0..n {
        let mut x = identity(d);
        if i + 1 < n {
            x[i][i + 1] += 1;
            x[d - 2 - i][d - 1 - i] -= 1;
        } else {
            x[n - 1][n] += 1;
        }
        u = mat_mul(&u, &x);
    }
    u
}

/// Jordan partition of a unipotent matrix, from the ranks of the powers
/// of `u − I`. Parts in decreasing order.
pub fn jordan_partition(u: &Mat) -> Vec<usize> {
    let d = u.len();
    let mut nil = u.clone();
    for (i, row) in nil.iter_mut().enumerate() {
        row[i] -= 1;
    }
    let mut ranks = vec![d];
    let mut p = nil.clone();
    while *ranks.last().expect("nonempty") > 0 {
        ranks.push(rank_i64(&p));
        p = mat_mul(&p, &nil);
    }
    // at_least[k] blocks have size > k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in 0..at_least.len() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k + 1, at_least[k] - next));
    }
    parts.reverse();
    parts
}

/// Jordan type in SL_{2n+1} of a regular unipotent of Sp_{2n} embedded
/// block-diagonally with a 1×1 identity block.
pub fn sp_embedding_jordan_type(n: usize) -> Vec<usize> {
    assert!(n >= 1);
    let u = symplectic_regular_unipotent(n);
    let d = 2 * n + 1;
    let mut big = identity(d);
    for i in 0..2 * n {
        big[i][..2 * n].copy_from_slice(&u[i]);
    }
    jordan_partition(&big)
}

/// `I + Σ E_{i,i+1}`, a regular unipotent of SL_d.
pub fn sl_regular_unipotent(d: usize) -> Mat {
    let mut u = identity(d);
    for i in 0..d.saturating_sub(1) {
        u[i][i + 1] = 1;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::transpose;
    use crate::root_system::CartanDatum;

    fn inv(name: &str, ambient: &str, sigma: Mat) -> InvolutionDatum {
        InvolutionDatum::new(name, CartanDatum::parse(ambient).unwrap(), sigma).unwrap()
    }

    #[test]
    fn symplectic_unipotent_preserves_form() {
        for n in 1..=5 {
            let u = symplectic_regular_unipotent(n);
            let j = symplectic_form(n);
            assert_eq!(mat_mul(&mat_mul(&transpose(&u), &j), &u), j, "n={n}");
            assert_eq!(jordan_partition(&u), vec![2 * n]);
        }
    }

    #[test]
    fn jordan_types() {
        assert_eq!(sp_embedding_jordan_type(1), vec![2, 1]);
        assert_eq!(sp_embedding_jordan_type(2), vec![4, 1]);
        for d in 1..=7 {
            assert_eq!(jordan_partition(&sl_regular_unipotent(d)), vec![d]);
        }
        assert_eq!(jordan_partition(&identity(3)), vec![1, 1, 1]);
    }

    #[test]
    fn criteria_on_small_cases() {
        let po3 = inv("PGL3/PO3", "A2", vec![vec![-1, 0], vec![0, -1]]);
        assert_eq!(unipotent_criterion(&po3, &["PO3".into()]), Ok(true));
        assert!(parameter_factors_through_iota(&po3));

        let levi = inv("PGL3/P(GL1xGL2)", "A2", vec![vec![0, -1], vec![-1, 0]]);
        assert_eq!(unipotent_criterion(&levi, &["P(GL1xGL2)".into()]), Ok(false));
        assert!(!parameter_factors_through_iota(&levi));

        let group = inv("PGL2xPGL2/PGL2", "A1xA1", vec![vec![0, -1], vec![-1, 0]]);
        assert_eq!(
            unipotent_criterion(&group, &["diagonal".into(), "diagonal".into()]),
            Ok(true)
        );
        assert!(parameter_factors_through_iota(&group));

        let split = inv("PGL2/PGL2", "A1", vec![vec![1]]);
        assert_eq!(unipotent_criterion(&split, &["PGL2".into()]), Ok(false));
        assert!(!parameter_factors_through_iota(&split));
    }

    #[test]
    fn text_cross_check() {
        let po3 = inv("PGL3/PO3", "A2", vec![vec![-1, 0], vec![0, -1]]);
        assert!(matches!(
            unipotent_criterion(&po3, &["P(GL1xGL2)".into()]),
            Err(DualError::FactorDataMismatch { .. })
        ));
        assert!(matches!(
            unipotent_criterion(&po3, &[]),
            Err(DualError::FactorDataLength { .. })
        ));
    }
}
