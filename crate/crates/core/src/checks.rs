//! The cross-checks run by `verify-all` and the acceptance test target.

use std::fmt;
use std::time::{Duration, Instant};

use crate::affine::{affine_support_function, orbit_side_st_chi0, twisted_harmonic_exists};
use crate::catalog::{find, CatalogEntry};
use crate::dual_group::{parameter_factors_through_iota, sp_embedding_jordan_type, unipotent_criterion};
use crate::hypergraph::{finite_field_pullback, OrbitHypergraph};
use crate::random::random_closed_graphs;
use crate::root_system::{chi0_sign, AffineDynkin, Character, Phase};

pub const RANDOM_SEED: u64 = 20_240_601;
pub const RANDOM_COUNT: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Failures, or a short summary when passing.
    pub details: Vec<String>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}]: {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        if !self.details.is_empty() {
            write!(f, " ({})", self.details.join("; "))?;
        }
        Ok(())
    }
}

fn result(id: u8, name: &'static str, failures: Vec<String>, summary: String) -> CheckResult {
    let passed = failures.is_empty();
    CheckResult {
        id,
        name,
        passed,
        details: if passed { vec![summary] } else { failures },
    }
}

/// Graph pool for the random generator: catalog closed graphs small
/// enough for products.
pub fn random_pool(entries: &[CatalogEntry]) -> Vec<OrbitHypergraph> {
    entries
        .iter()
        .map(|e| e.closed.clone())
        .filter(|g| g.len() <= 12)
        .collect()
}

pub fn figure_reproduction(entries: &[CatalogEntry]) -> CheckResult {
    let start = Instant::now();
    let targets = [
        ("PGL3/PO3", 1, 1),
        ("PGL3/PGL2", 0, 0),
        ("PSp4/PGL2", 2, 2),
        ("G2/(PGL2xSL2)", 1, 1),
    ];
    let mut failures = Vec::new();
    for (name, dim, count) in targets {
        let Some(e) = find(entries, name) else {
            failures.push(format!("{name} missing"));
            continue;
        };
        let d = e.closed.harmonic_space().dim();
        let c = e.closed.full_closed_vertices().len();
        if (d, c) != (dim, count) {
            failures.push(format!("{name}: dim {d} count {c}, required dim {dim} count {count}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    result(1, "figure reproduction", failures, "4 figures match".into())
}

pub fn dimension_theorem(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    let mut check = |label: String, g: &OrbitHypergraph| {
        let d = g.harmonic_space().dim();
        let c = g.full_closed_vertices().len();
        if d != c {
            failures.push(format!("{label}: dim {d} != count {c}"));
        }
    };
    for e in entries {
        check(e.name.clone(), &e.closed);
    }
    let random = random_closed_graphs(&random_pool(entries), RANDOM_SEED, RANDOM_COUNT);
    for (k, g) in random.iter().enumerate() {
        check(format!("random #{k}"), g);
    }
    result(
        2,
        "dimension theorem",
        failures,
        format!("{} catalog + {} random graphs", entries.len(), random.len()),
    )
}

pub fn rational_doubling(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    match (find(entries, "SL2/Gm"), find(entries, "PGL2/T")) {
        (Some(sl2), Some(pgl2)) => {
            match &sl2.rational {
                Some(r) => {
                    let d = r.harmonic_space().dim();
                    if d != 3 {
                        failures.push(format!("rational dim {d}, required 3"));
                    }
                    let c = sl2.closed.full_closed_vertices().len();
                    if c != 2 {
                        failures.push(format!("closed count {c}, required 2"));
                    }
                    let dense = pgl2.closed.vertex_index("o");
                    match dense.map(|v| pgl2.closed.rational_form_double(v)) {
                        Some(Ok((doubled, _))) => {
                            if doubled.canonical() != r.canonical() {
                                failures.push("doubling the dense vertex gives a different graph".into());
                            }
                        }
                        Some(Err(err)) => failures.push(err.to_string()),
                        None => failures.push("PGL2/T has no vertex o".into()),
                    }
                }
                None => failures.push("SL2/Gm has no rational graph".into()),
            }
        }
        _ => failures.push("SL2/Gm or PGL2/T missing".into()),
    }
    result(3, "finite field doubling", failures, "dim 3 vs count 2, doubling matches".into())
}

pub fn pullback_preservation(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    let mut projections = 0;
    for e in entries {
        let (Some(r), Some(p)) = (&e.rational, &e.projection) else {
            continue;
        };
        projections += 1;
        let target = r.harmonic_space();
        for (k, phi) in e.closed.harmonic_space().basis.iter().enumerate() {
            match finite_field_pullback(r, &e.closed, p, phi) {
                Ok(f) if target.contains(&f) => {}
                Ok(_) => failures.push(format!("{}: pullback of basis vector {k} is not harmonic", e.name)),
                Err(err) => failures.push(format!("{}: {err}", e.name)),
            }
        }
    }
    if projections == 0 {
        failures.push("no catalog projection".into());
    }
    result(4, "pullback preservation", failures, format!("{projections} projections"))
}

fn support_failures(label: &str, g: &OrbitHypergraph, grading: &[i64], out: &mut Vec<String>) {
    let s = match g.support_with_grading(grading) {
        Ok(s) => s,
        Err(err) => {
            out.push(format!("{label}: {err}"));
            return;
        }
    };
    if let Err(err) = g.check_support(&s, grading) {
        out.push(format!("{label}: {err}"));
    }
    let space = g.harmonic_space();
    for k in 0..s.basis.len() {
        if !space.contains(&s.coordinate(k)) {
            out.push(format!("{label}: coordinate {k} is not harmonic"));
        }
    }
}

pub fn support_soundness(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    let mut fragments = 0;
    for e in entries {
        support_failures(&e.name, &e.closed, &e.closed.ranks(), &mut failures);
        if let Some(a) = &e.affine {
            fragments += 1;
            match affine_support_function(&a.gamma1) {
                Ok(s) => {
                    if let Err(err) = a.gamma1.check_support(&s, &a.gamma1.ranks()) {
                        failures.push(format!("{} affine: {err}", e.name));
                    }
                }
                Err(err) => failures.push(format!("{} affine: {err}", e.name)),
            }
        }
    }
    let random = random_closed_graphs(&random_pool(entries), RANDOM_SEED, RANDOM_COUNT);
    for (k, g) in random.iter().enumerate() {
        support_failures(&format!("random #{k}"), g, &g.ranks(), &mut failures);
    }
    result(
        5,
        "support function soundness",
        failures,
        format!(
            "{} catalog, {fragments} affine fragments, {} random",
            entries.len(),
            random.len()
        ),
    )
}

pub fn dual_cross_validation(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    for e in entries {
        let orbit = orbit_side_st_chi0(&e.closed, &e.involution);
        let iota = parameter_factors_through_iota(&e.involution);
        match unipotent_criterion(&e.involution, &e.factor_data) {
            Ok(u) if u == orbit && u == iota => {}
            Ok(u) => failures.push(format!(
                "{}: orbit {orbit}, factoring {iota}, unipotent {u}",
                e.name
            )),
            Err(err) => failures.push(format!("{}: {err}", e.name)),
        }
    }
    if entries.len() < 12 {
        failures.push(format!("only {} entries", entries.len()));
    }
    for name in ["PGL3/P(GL1xGL2)", "PGL5/P(GL2xGL3)"] {
        if find(entries, name).is_none() {
            failures.push(format!("{name} missing"));
        }
    }
    result(6, "dual group cross-validation", failures, format!("{} entries agree", entries.len()))
}

pub fn jordan_concreteness() -> CheckResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=5 {
        let p = sp_embedding_jordan_type(n);
        if p != vec![2 * n, 1] {
            failures.push(format!("n={n}: {p:?}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    result(7, "symplectic Jordan type", failures, "(2n,1) for n=1..5".into())
}

/// Every character of Ω, from all generator phase combinations.
pub fn all_characters(ad: &AffineDynkin) -> Vec<Character> {
    let orders: Vec<usize> = ad.factor_groups.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    let mut ks = vec![0usize; orders.len()];
    loop {
        let phases: Vec<Phase> = ks
            .iter()
            .zip(&orders)
            .map(|(&k, &m)| Phase::new(k as i64, m as i64))
            .collect();
        if let Ok(c) = Character::from_generator_phases(ad, &phases) {
            out.push(c);
        }
        let mut i = 0;
        loop {
            if i == ks.len() {
                return out;
            }
            ks[i] += 1;
            if ks[i] < orders[i] {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
    }
}

pub fn twisted_condition(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for e in entries {
        let ad = &e.omega;
        for a in 0..ad.order() {
            for b in 0..ad.order() {
                if chi0_sign(ad, a) * chi0_sign(ad, b) != chi0_sign(ad, ad.compose(a, b)) {
                    failures.push(format!("{}: chi0 is not multiplicative", e.name));
                }
            }
        }
        if !Character::chi0(ad).is_homomorphism(ad) {
            failures.push(format!("{}: chi0 phases are not a homomorphism", e.name));
        }
        let Some(frag) = &e.affine else {
            continue;
        };
        let chi0 = Character::chi0(ad);
        for chi in all_characters(ad) {
            cases += 1;
            let psi = chi.inverse_times(&chi0);
            match twisted_harmonic_exists(&frag.gamma1, ad, &frag.h_action, &chi) {
                Ok(out) => {
                    let predicted = psi.is_trivial_on(&e.omega_h) && !out.s.is_empty();
                    if out.exists != predicted {
                        failures.push(format!(
                            "{}: character {:?} gives {}, Ω_H predicts {predicted}",
                            e.name, chi.phases, out.exists
                        ));
                    }
                }
                Err(err) => failures.push(format!("{}: {err}", e.name)),
            }
        }
    }
    result(8, "chi0 and twisted condition", failures, format!("{cases} character cases"))
}

pub fn quasi_split_equivalence(entries: &[CatalogEntry]) -> CheckResult {
    let mut failures = Vec::new();
    for e in entries {
        let qs = e.involution.quasi_split();
        let full = !e.closed.full_closed_vertices().is_empty();
        if qs != full {
            failures.push(format!("{}: quasi-split {qs}, full closed {full}", e.name));
        }
    }
    result(9, "quasi-split equivalence", failures, format!("{} entries", entries.len()))
}

/// Runs all criteria in order.
pub fn run_all(entries: &[CatalogEntry]) -> Vec<CheckResult> {
    let mut out = vec![
        figure_reproduction(entries),
        dimension_theorem(entries),
        rational_doubling(entries),
        pullback_preservation(entries),
        support_soundness(entries),
        dual_cross_validation(entries),
        jordan_concreteness(),
        twisted_condition(entries),
        quasi_split_equivalence(entries),
    ];
    out.sort_by_key(|r| r.id);
    out
}
