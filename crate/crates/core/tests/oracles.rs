//! Independent recomputations compared against the engine: harmonic
//! dimensions by modular elimination straight from the catalog JSON,
//! clan counts by a closed formula, and Jordan types by direct kernels.

#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;

use serde_json::Value;
use stdist::catalog::{builtin, find, BUILTIN};
use stdist::dual_group::{jordan_partition, sp_embedding_jordan_type, symplectic_regular_unipotent};
use stdist::hypergraph::{finite_field_pullback, indicator, OrbitHypergraph};

const P: i128 = 1_000_000_007;

fn rank_mod_p(mut rows: Vec<Vec<i128>>, ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c].rem_euclid(P) != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = pow(rows[r][c].rem_euclid(P), P - 2);
        for i in 0..rows.len() {
            if i != r && rows[i][c].rem_euclid(P) != 0 {
                let f = rows[i][c].rem_euclid(P) * inv % P;
                for k in 0..ncols {
                    rows[i][k] = (rows[i][k] - f * rows[r][k]).rem_euclid(P);
                }
            }
        }
        r += 1;
    }
    r
}

fn pow(mut b: i128, mut e: i128) -> i128 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

/// (harmonic dim, full closed count) read off raw graph JSON.
fn oracle(g: &Value) -> (usize, usize) {
    let ids: Vec<&str> = g["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["id"].as_str().unwrap())
        .collect();
    let rank: HashMap<&str, i64> = g["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["id"].as_str().unwrap(), v["rank"].as_i64().unwrap()))
        .collect();
    let idx: HashMap<&str, usize> = ids.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let edges = g["edges"].as_array().unwrap();
    let mut rows = Vec::new();
    for e in edges {
        if e.get("open").and_then(Value::as_bool).unwrap_or(false) {
            continue;
        }
        let mut row = vec![0i128; ids.len()];
        for m in e["members"].as_array().unwrap() {
            row[idx[m.as_str().unwrap()]] += 1;
        }
        rows.push(row);
    }
    let dim = ids.len() - rank_mod_p(rows, ids.len());
    let low = rank.values().copied().min().unwrap();
    let count = ids
        .iter()
        .filter(|v| rank[*v] == low)
        .filter(|v| {
            edges
                .iter()
                .filter(|e| e["members"].as_array().unwrap().iter().any(|m| m == **v))
                .all(|e| e["members"].as_array().unwrap().len() >= 2)
        })
        .count();
    (dim, count)
}

#[test]
fn stored_graphs_match_modular_oracle() {
    let doc: Value = serde_json::from_str(BUILTIN).unwrap();
    let catalog = builtin().unwrap();
    let mut checked = 0;
    for raw in doc["entries"].as_array().unwrap() {
        let name = raw["name"].as_str().unwrap();
        let e = find(&catalog, name).unwrap();
        if let Some(g) = raw.get("hypergraph_closed") {
            let (dim, count) = oracle(g);
            assert_eq!(dim, e.closed.harmonic_space().dim(), "{name}");
            assert_eq!(count, e.closed.full_closed_vertices().len(), "{name}");
            checked += 1;
        }
        if let Some(g) = raw.get("hypergraph_rational") {
            let (dim, _) = oracle(g);
            assert_eq!(dim, e.rational.as_ref().unwrap().harmonic_space().dim(), "{name}");
        }
    }
    assert_eq!(checked, 11);
}

#[test]
fn drawn_figures() {
    let c = builtin().unwrap();
    let dim_count = |n: &str| {
        let g = &find(&c, n).unwrap().closed;
        (g.harmonic_space().dim(), g.full_closed_vertices().len())
    };
    assert_eq!(dim_count("PGL3/PO3"), (1, 1));
    assert_eq!(dim_count("PSp4/PGL2"), (2, 2));
    assert_eq!(dim_count("G2/(PGL2xSL2)"), (1, 1));
    // v4 lies in two size-3 edges in the drawing.
    assert_eq!(dim_count("PGL3/PGL2"), (1, 1));
}

fn double_factorial_odd(k: usize) -> usize {
    (1..=k).map(|i| 2 * i - 1).product()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Clans of signature (p, q): choose 2k paired positions, a perfect
/// matching on them, and the signs of the rest.
fn clan_count(p: usize, q: usize) -> usize {
    let n = p + q;
    (0..=p.min(q))
        .map(|k| binom(n, 2 * k) * double_factorial_odd(k) * binom(n - 2 * k, p - k))
        .sum()
}

#[test]
fn clan_enumerations_have_the_right_size() {
    let c = builtin().unwrap();
    assert_eq!(find(&c, "PGL3/P(GL1xGL2)").unwrap().closed.len(), clan_count(1, 2));
    assert_eq!(find(&c, "PGL5/P(GL2xGL3)").unwrap().closed.len(), clan_count(2, 3));
    assert_eq!(clan_count(2, 3), 55);
    let g = &find(&c, "PGL3/P(GL1xGL2)").unwrap().closed;
    let f = &find(&c, "PGL3/PGL2").unwrap().closed;
    assert!(stdist::hypergraph::isomorphic(g, f));
}

fn nilpotent_kernel_dims(u: &[Vec<i64>]) -> Vec<usize> {
    let d = u.len();
    let n: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| u[i][j] - i64::from(i == j)).collect())
        .collect();
    let mut p = n.clone();
    let mut dims = Vec::new();
    for _ in 0..d {
        let rows: Vec<Vec<i128>> = p.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        dims.push(d - rank_mod_p(rows, d));
        p = (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| p[i][k] * n[k][j]).sum()).collect())
            .collect();
    }
    dims
}

#[test]
fn jordan_types_from_kernel_growth() {
    for n in 1..=5 {
        let part = sp_embedding_jordan_type(n);
        assert_eq!(part, vec![2 * n, 1]);
        // Kernel of (u - 1)^k for the block sum (2n) + (1) has dimension
        // min(k, 2n) + 1.
        let u = symplectic_regular_unipotent(n);
        let mut big = vec![vec![0i64; 2 * n + 1]; 2 * n + 1];
        for i in 0..2 * n {
            big[i][..2 * n].copy_from_slice(&u[i]);
        }
        big[2 * n][2 * n] = 1;
        let dims = nilpotent_kernel_dims(&big);
        for (k, d) in dims.iter().enumerate() {
            assert_eq!(*d, (k + 1).min(2 * n) + 1, "n={n} k={}", k + 1);
        }
        assert_eq!(jordan_partition(&big), part);
    }
}

#[test]
fn dense_multiplicity_on_doubled_torus() {
    let c = builtin().unwrap();
    let e = find(&c, "SL2/Gm").unwrap();
    let r: &OrbitHypergraph = e.rational.as_ref().unwrap();
    let m = r.dense_multiplicity();
    for (v, x) in r.vertices.iter().enumerate() {
        let want = if x.id.starts_with('c') { 2 } else { 1 };
        assert_eq!(m[v], want, "{}", x.id);
    }
    let proj = e.projection.as_ref().unwrap();
    let c1 = e.closed.vertex_index("c1").unwrap();
    let phi = indicator(e.closed.len(), c1);
    let pulled = finite_field_pullback(r, &e.closed, proj, &phi).unwrap();
    let two = stdist::linalg::Rational::from_integer(2.into());
    assert_eq!(pulled[r.vertex_index("c1").unwrap()], two);
}
