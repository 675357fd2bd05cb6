use fractotal::fixtures;
use fractotal::graph::{cyclic_edge_connectivity, girth, max_degree};

#[test]
fn bundled_fixture_attributes_rederive() {
    for f in fixtures::bundled() {
        assert_eq!(girth(&f.graph), f.girth, "{} girth", f.name);
        assert_eq!(max_degree(&f.graph), f.max_degree, "{} max degree", f.name);
        let cc = cyclic_edge_connectivity(&f.graph).unwrap();
        assert_eq!(cc.size, f.cyclic_connectivity, "{} cyclic connectivity", f.name);
        if let Some(cut) = cc.witness {
            assert_eq!(cut.size(), cc.size.finite().unwrap());
        }
    }
}

#[test]
fn bundled_chi_values_rederive() {
    use fractotal::chi::{fractional_total_chromatic_number, verify_certificate, ChiMode};
    for f in fixtures::bundled() {
        let Some(chi) = &f.chi else { continue };
        let cert = fractional_total_chromatic_number(&f.graph, ChiMode::ColumnGeneration, 0).unwrap();
        assert_eq!(&cert.value, chi, "{}", f.name);
        verify_certificate(&f.graph, &cert).unwrap();
    }
}
