//! The curated catalog of symmetric pairs, shipped as versioned JSON and
//! verified against recomputed values on load.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{
    omega_h, orbit_side_st_chi0, parse_action, parse_element, twisted_harmonic_exists,
    ActionRepr, AffineOrbitHypergraph, AffineRepr, ElementRepr,
};
use crate::dual_group::unipotent_criterion;
use crate::hypergraph::{check_projection, isomorphic, FieldMode, OrbitHypergraph};
use crate::involution::InvolutionDatum;
use crate::root_system::{fundamental_group, AffineDynkin, Character};

pub const SCHEMA: &str = "stdist-catalog/v1";

/// The catalog shipped with the crate.
pub const BUILTIN: &str = include_str!("../catalog/v1/catalog.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("entry {entry}: {message}")]
    Invalid { entry: String, message: String },
    #[error("entry {entry}: expected {field} = {expected}, recomputed {found}")]
    Mismatch {
        entry: String,
        field: &'static str,
        expected: String,
        found: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub schema: String,
    pub entries: Vec<EntryRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DerivedFrom {
    Quotient {
        quotient_of: String,
        automorphisms: Vec<BTreeMap<String, String>>,
    },
    Product {
        product_of: Vec<String>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineDataRepr {
    pub gamma1: OrbitHypergraph,
    #[serde(default)]
    pub h_action: Vec<ActionRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_aff: Option<AffineRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<OrbitHypergraph>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaHStatus {
    /// Forced by a stored fragment or by Ω being trivial.
    #[serde(rename = "derived")]
    Derived,
    #[serde(rename = "unverified annotation")]
    Unverified,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaHRepr {
    #[serde(default)]
    pub generators: Vec<ElementRepr>,
    pub status: OmegaHStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub quasi_split: bool,
    pub full_closed_count: usize,
    pub harmonic_dim_closed: usize,
    pub st_chi0_distinguished: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmonic_dim_rational: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryRepr {
    pub name: String,
    pub source: String,
    pub involution: InvolutionDatum,
    pub factor_data: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypergraph_closed: Option<OrbitHypergraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<DerivedFrom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypergraph_rational: Option<OrbitHypergraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine: Option<AffineDataRepr>,
    pub omega_h: OmegaHRepr,
    pub expected: Expected,
    #[serde(default)]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AffineFragment {
    /// Length zero color section, ranks hold `l_σ`.
    pub gamma1: OrbitHypergraph,
    /// `(ω(h), vertex permutation)` for the H-stabilizer acting on Γ¹.
    pub h_action: Vec<(usize, Vec<usize>)>,
    pub gamma_aff: Option<AffineOrbitHypergraph>,
    pub gamma0: Option<OrbitHypergraph>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub source: String,
    pub involution: InvolutionDatum,
    pub factor_data: Vec<String>,
    pub closed: OrbitHypergraph,
    pub rational: Option<OrbitHypergraph>,
    pub projection: Option<Vec<usize>>,
    pub affine: Option<AffineFragment>,
    pub omega: AffineDynkin,
    pub omega_h: BTreeSet<usize>,
    pub omega_h_status: OmegaHStatus,
    pub expected: Expected,
    pub flags: Vec<String>,
    /// As read, for re-serialization.
    pub repr: EntryRepr,
}

fn invalid(entry: &str, message: impl ToString) -> CatalogError {
    CatalogError::Invalid {
        entry: entry.to_string(),
        message: message.to_string(),
    }
}

fn mismatch<T: ToString>(entry: &str, field: &'static str, expected: T, found: T) -> CatalogError {
    CatalogError::Mismatch {
        entry: entry.to_string(),
        field,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn vertex_map(
    entry: &str,
    from: &OrbitHypergraph,
    to: &OrbitHypergraph,
    map: &BTreeMap<String, String>,
    total: bool,
) -> Result<Vec<usize>, CatalogError> {
    let mut p: Vec<usize> = (0..from.len()).collect();
    let mut seen = vec![false; from.len()];
    for (a, b) in map {
        let i = from
            .vertex_index(a)
            .ok_or_else(|| invalid(entry, format!("unknown vertex {a}")))?;
        let j = to
            .vertex_index(b)
            .ok_or_else(|| invalid(entry, format!("unknown vertex {b}")))?;
        p[i] = j;
        seen[i] = true;
    }
    if total {
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(invalid(entry, format!("map misses vertex {}", from.vertices[i].id)));
        }
    }
    Ok(p)
}

fn resolve_closed(
    r: &EntryRepr,
    done: &BTreeMap<String, OrbitHypergraph>,
) -> Result<OrbitHypergraph, CatalogError> {
    let get = |n: &str| {
        done.get(n)
            .ok_or_else(|| invalid(&r.name, format!("derived from unknown or later entry {n}")))
    };
    match (&r.hypergraph_closed, &r.derived_from) {
        (Some(g), None) => Ok(g.clone()),
        (None, Some(DerivedFrom::Quotient {
            quotient_of,
            automorphisms,
        })) => {
            let base = get(quotient_of)?;
            let gens = automorphisms
                .iter()
                .map(|m| vertex_map(&r.name, base, base, m, false))
                .collect::<Result<Vec<_>, _>>()?;
            base.quotient_by_automorphisms(&gens)
                .map_err(|e| invalid(&r.name, e))
        }
        (None, Some(DerivedFrom::Product { product_of })) => {
            let mut acc: Option<OrbitHypergraph> = None;
            for n in product_of {
                let g = get(n)?;
                acc = Some(match acc {
                    None => g.clone(),
                    Some(a) => {
                        let off = a.labels.len();
                        let renamed = g
                            .with_labels((0..g.labels.len()).map(|i| format!("a{}", off + i + 1)).collect())
                            .map_err(|e| invalid(&r.name, e))?;
                        a.product(&renamed).map_err(|e| invalid(&r.name, e))?
                    }
                });
            }
            acc.ok_or_else(|| invalid(&r.name, "empty product"))
        }
        (Some(_), Some(_)) => Err(invalid(&r.name, "both a stored and a derived closed graph")),
        (None, None) => Err(invalid(&r.name, "no closed graph")),
    }
}

fn build_entry(r: &EntryRepr, closed: OrbitHypergraph) -> Result<CatalogEntry, CatalogError> {
    let name = r.name.as_str();
    if closed.mode != FieldMode::Closed {
        return Err(invalid(name, "closed graph is not in closed mode"));
    }
    let inv = r.involution.clone();
    if closed.labels.len() != inv.rank() {
        return Err(invalid(
            name,
            format!("{} labels for rank {}", closed.labels.len(), inv.rank()),
        ));
    }
    let omega = fundamental_group(&inv.roots);
    let (rational, projection) = match (&r.hypergraph_rational, &r.projection) {
        (None, None) => (None, None),
        (Some(g), Some(map)) => {
            if g.mode != FieldMode::Rational {
                return Err(invalid(name, "rational graph is not in rational mode"));
            }
            let p = vertex_map(name, g, &closed, map, true)?;
            check_projection(g, &closed, &p).map_err(|e| invalid(name, e))?;
            (Some(g.clone()), Some(p))
        }
        _ => return Err(invalid(name, "rational graph and projection come together")),
    };
    let affine = match &r.affine {
        None => None,
        Some(a) => {
            let h_action = parse_action(&a.gamma1, &omega, &a.h_action).map_err(|e| invalid(name, e))?;
            let gamma_aff = a
                .gamma_aff
                .as_ref()
                .map(|g| AffineOrbitHypergraph::from_repr(g, &omega))
                .transpose()
                .map_err(|e| invalid(name, e))?;
            Some(AffineFragment {
                gamma1: a.gamma1.clone(),
                h_action,
                gamma_aff,
                gamma0: a.gamma0.clone(),
            })
        }
    };
    let gens = r
        .omega_h
        .generators
        .iter()
        .map(|e| parse_element(&omega, e))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invalid(name, e))?;
    Ok(CatalogEntry {
        name: r.name.clone(),
        source: r.source.clone(),
        involution: inv,
        factor_data: r.factor_data.clone(),
        closed,
        rational,
        projection,
        affine,
        omega_h: omega.generate(&gens),
        omega,
        omega_h_status: r.omega_h.status,
        expected: r.expected.clone(),
        flags: r.flags.clone(),
        repr: r.clone(),
    })
}

/// Recomputes every stored expectation of an entry.
pub fn verify_entry(e: &CatalogEntry) -> Result<(), CatalogError> {
    let name = e.name.as_str();
    let x = &e.expected;
    let qs = e.involution.quasi_split();
    if qs != x.quasi_split {
        return Err(mismatch(name, "quasi_split", x.quasi_split, qs));
    }
    let count = e.closed.full_closed_vertices().len();
    if count != x.full_closed_count {
        return Err(mismatch(name, "full_closed_count", x.full_closed_count, count));
    }
    let dim = e.closed.harmonic_space().dim();
    if dim != x.harmonic_dim_closed {
        return Err(mismatch(name, "harmonic_dim_closed", x.harmonic_dim_closed, dim));
    }
    let st = orbit_side_st_chi0(&e.closed, &e.involution);
    if st != x.st_chi0_distinguished {
        return Err(mismatch(name, "st_chi0_distinguished", x.st_chi0_distinguished, st));
    }
    match (&e.rational, x.harmonic_dim_rational) {
        (Some(g), Some(d)) => {
            let found = g.harmonic_space().dim();
            if found != d {
                return Err(mismatch(name, "harmonic_dim_rational", d, found));
            }
        }
        (None, None) => {}
        _ => {
            return Err(invalid(
                name,
                "harmonic_dim_rational is expected exactly when a rational graph is stored",
            ))
        }
    }
    unipotent_criterion(&e.involution, &e.factor_data).map_err(|err| invalid(name, err))?;
    if let Some(a) = &e.affine {
        let outcome = twisted_harmonic_exists(&a.gamma1, &e.omega, &a.h_action, &Character::trivial(&e.omega))
            .map_err(|err| invalid(name, err))?;
        let found = omega_h(&a.gamma1, &outcome).map_err(|err| invalid(name, err))?;
        if found != e.omega_h {
            return Err(mismatch(
                name,
                "omega_h",
                format!("{:?}", e.omega_h),
                format!("{found:?}"),
            ));
        }
        if let Some(aff) = &a.gamma_aff {
            let g0 = aff.gamma0(&e.omega).map_err(|err| invalid(name, err))?;
            if let Some(stored) = &a.gamma0 {
                if !isomorphic(&g0, stored) {
                    return Err(mismatch(name, "gamma0", "stored graph", "non-isomorphic quotient"));
                }
            }
            let g1 = aff.gamma1().map_err(|err| invalid(name, err))?;
            if !isomorphic(&g1, &a.gamma1) {
                return Err(mismatch(name, "gamma1", "stored graph", "non-isomorphic color section"));
            }
        }
    }
    if e.omega_h_status == OmegaHStatus::Derived && e.affine.is_none() && e.omega.order() != 1 {
        return Err(invalid(name, "Ω_H marked derived without a fragment to derive it from"));
    }
    Ok(())
}

/// Parses, validates and verifies a serialized catalog. Entries may be
/// derived from earlier ones.
pub fn load_catalog(source: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let doc: CatalogDoc = serde_json::from_str(source).map_err(|e| CatalogError::Schema(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(CatalogError::Schema(format!(
            "unsupported schema {:?}, expected {SCHEMA:?}",
            doc.schema
        )));
    }
    let mut names = BTreeSet::new();
    let mut done: BTreeMap<String, OrbitHypergraph> = BTreeMap::new();
    let mut closed = Vec::with_capacity(doc.entries.len());
    for r in &doc.entries {
        if !names.insert(r.name.clone()) {
            return Err(invalid(&r.name, "duplicate entry name"));
        }
        let g = resolve_closed(r, &done)?;
        done.insert(r.name.clone(), g.clone());
        closed.push(g);
    }
    let built: Vec<Result<CatalogEntry, CatalogError>> = doc
        .entries
        .par_iter()
        .zip(closed)
        .map(|(r, g)| {
            let e = build_entry(r, g)?;
            verify_entry(&e)?;
            Ok(e)
        })
        .collect();
    built.into_iter().collect()
}

pub fn builtin() -> Result<Vec<CatalogEntry>, CatalogError> {
    load_catalog(BUILTIN)
}

pub fn to_json(entries: &[CatalogEntry]) -> String {
    let doc = CatalogDoc {
        schema: SCHEMA.to_string(),
        entries: entries.iter().map(|e| e.repr.clone()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("catalog serializes")
}

pub fn find<'a>(entries: &'a [CatalogEntry], name: &str) -> Option<&'a CatalogEntry> {
    entries.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_loads() {
        let c = builtin().unwrap();
        assert_eq!(c.len(), 13);
        let po3 = find(&c, "PGL3/PO3").unwrap();
        assert_eq!(po3.expected.harmonic_dim_closed, 1);
        assert_eq!(find(&c, "PSp4/PGL2").unwrap().expected.full_closed_count, 2);
        assert_eq!(find(&c, "SL2/Gm").unwrap().expected.harmonic_dim_rational, Some(3));
        assert_eq!(find(&c, "PSp4/PGL2/mirror").unwrap().closed.len(), 7);
    }

    #[test]
    fn round_trip() {
        let c = builtin().unwrap();
        let again = load_catalog(&to_json(&c)).unwrap();
        assert_eq!(to_json(&again), to_json(&c));
    }

    #[test]
    fn mismatch_names_entry_and_field() {
        let mut doc: serde_json::Value = serde_json::from_str(BUILTIN).unwrap();
        doc["entries"][4]["expected"]["harmonic_dim_closed"] = 7.into();
        let err = load_catalog(&doc.to_string()).unwrap_err();
        assert_eq!(
            err,
            CatalogError::Mismatch {
                entry: "PGL3/PO3".into(),
                field: "harmonic_dim_closed",
                expected: "7".into(),
                found: "1".into(),
            }
        );
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(load_catalog("{}"), Err(CatalogError::Schema(_))));
        let bad = BUILTIN.replacen("stdist-catalog/v1", "stdist-catalog/v0", 1);
        assert!(matches!(load_catalog(&bad), Err(CatalogError::Schema(_))));
    }
}
