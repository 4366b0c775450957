use stdist::affine::{affine_support_function, twisted_harmonic_exists, AffineOrbitHypergraph};
use stdist::catalog::{builtin, find, CatalogEntry};
use stdist::hypergraph::{isomorphic, HypergraphError};
use stdist::involution::DiagramShape;
use stdist::root_system::Character;

fn entries() -> Vec<CatalogEntry> {
    builtin().unwrap()
}

#[test]
fn root_types_are_sigma_star_equivariant() {
    for e in entries() {
        let inv = &e.involution;
        let star = inv.sigma_star().unwrap();
        let types = inv.classify_simple_roots();
        for (a, &b) in star.iter().enumerate() {
            assert_eq!(types[a], types[b], "{} at {a}", e.name);
        }
    }
}

#[test]
fn quasi_split_diagrams_are_tabulated() {
    for e in entries().iter().filter(|e| e.involution.quasi_split()) {
        for a in 0..e.involution.rank() {
            let d = e.involution.phi_alpha_diagram(a).unwrap();
            assert!(d.black.is_empty(), "{}", e.name);
            assert!(
                matches!(d.shape, DiagramShape::A1 | DiagramShape::A1xA1Swap | DiagramShape::A2Flip),
                "{} at {a}: {:?}",
                e.name,
                d.shape
            );
        }
    }
    let c = entries();
    let pgl5 = find(&c, "PGL5/P(GL2xGL3)").unwrap();
    assert_eq!(pgl5.involution.phi_alpha_diagram(1).unwrap().shape, DiagramShape::A2Flip);
    assert_eq!(pgl5.involution.phi_alpha_diagram(0).unwrap().shape, DiagramShape::A1xA1Swap);
}

#[test]
fn quasi_split_iff_full_closed_vertex() {
    for e in entries() {
        assert_eq!(
            e.involution.quasi_split(),
            !e.closed.full_closed_vertices().is_empty(),
            "{}",
            e.name
        );
    }
}

#[test]
fn mirror_quotient_of_the_symplectic_graph() {
    let c = entries();
    let q = &find(&c, "PSp4/PGL2/mirror").unwrap().closed;
    assert_eq!(q.len(), 7);
    assert_eq!(q.full_closed_vertices().len(), 1);
    assert_eq!(q.harmonic_space().dim(), 1);
}

#[test]
fn product_of_split_orthogonal_with_itself() {
    let c = entries();
    let g = &find(&c, "PGL3/PO3").unwrap().closed;
    let h = g.with_labels(vec!["b1".into(), "b2".into()]).unwrap();
    let p = g.product(&h).unwrap();
    assert_eq!(p.len(), 16);
    assert_eq!(p.harmonic_space().dim(), 1);
}

#[test]
fn split_torus_cover_matches_stored_quotient() {
    let c = entries();
    let e = find(&c, "SL2/Gm").unwrap();
    let frag = e.affine.as_ref().unwrap();
    let aff: &AffineOrbitHypergraph = frag.gamma_aff.as_ref().unwrap();
    assert!(aff.action_is_free());
    let g0 = aff.gamma0(&e.omega).unwrap();
    assert!(isomorphic(&g0, frag.gamma0.as_ref().unwrap()));
    assert!(isomorphic(&aff.gamma1().unwrap(), &frag.gamma1));
    assert_eq!(aff.invariant_harmonic_dim(), g0.harmonic_space().dim());
}

#[test]
fn normalizer_needs_the_sign_character() {
    let c = entries();
    let e = find(&c, "PGL2/N").unwrap();
    assert_eq!(e.omega_h.len(), 2);
    let frag = e.affine.as_ref().unwrap();
    let chi0 = Character::chi0(&e.omega);
    let yes = twisted_harmonic_exists(&frag.gamma1, &e.omega, &frag.h_action, &chi0).unwrap();
    assert!(yes.exists);
    assert!(yes.witness.unwrap().iter().any(|x| !x.is_zero()));
    let triv = Character::trivial(&e.omega);
    let no = twisted_harmonic_exists(&frag.gamma1, &e.omega, &frag.h_action, &triv).unwrap();
    assert!(!no.exists);
    assert!(no.witness.is_none());
}

#[test]
fn split_torus_admits_every_character() {
    let c = entries();
    let e = find(&c, "PGL2/T").unwrap();
    let frag = e.affine.as_ref().unwrap();
    for chi in [Character::trivial(&e.omega), Character::chi0(&e.omega)] {
        assert!(twisted_harmonic_exists(&frag.gamma1, &e.omega, &frag.h_action, &chi).unwrap().exists);
    }
}

#[test]
fn non_full_base_layer_gives_zero_support() {
    let c = entries();
    let e = find(&c, "PGL2/PGL2").unwrap();
    let frag = e.affine.as_ref().unwrap();
    let s = affine_support_function(&frag.gamma1).unwrap();
    assert!(s.basis.is_empty());
    assert!(s.is_zero());
    let out = twisted_harmonic_exists(&frag.gamma1, &e.omega, &frag.h_action, &Character::chi0(&e.omega)).unwrap();
    assert!(!out.exists);
}

#[test]
fn finite_field_operations_on_the_torus_edge() {
    let c = entries();
    let g = &find(&c, "PGL2/T").unwrap().closed;
    let o = g.vertex_index("o").unwrap();
    let (doubled, proj) = g.rational_form_double(o).unwrap();
    assert_eq!(doubled.harmonic_space().dim(), 3);
    assert_eq!(proj.iter().filter(|&&p| p == o).count(), 2);
    let deleted = g.rational_form_delete(0).unwrap();
    let ids: Vec<&str> = deleted.vertices.iter().map(|v| v.id.as_str()).collect();
    assert_eq!(ids, ["o"]);
    assert_eq!(deleted.harmonic_space().dim(), 0);
    assert!(matches!(
        doubled.verify_dimension_theorem(),
        Err(HypergraphError::WrongMode { .. })
    ));
}
