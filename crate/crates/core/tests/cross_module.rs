use num_bigint::BigInt;

use pst_core::cubelike::{decompose_standard, pst_by_sigma, regular_pst_family, ConnectionSet};
use pst_core::families::{pst_complement, pst_self_join, weighted_hypercube};
use pst_core::graphs::{cartesian_product, complement};
use pst_core::hadamard::{catalog, sylvester};
use pst_core::pst::{pst_pairs, PstReport, Verdict};
use pst_core::spectral::{certify, evolve_fidelity, SpectralCertificate};
use pst_core::WeightedGraph;

#[test]
fn certificate_json_round_trip_keeps_verdict() {
    let g = ConnectionSet::parse_items("e1,e2,e3,e1+e2+e3", None).unwrap().build().unwrap();
    let cert = certify(&g, &sylvester(3).unwrap()).unwrap();
    let back = SpectralCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back.eigenvalues(), cert.eigenvalues());
    let r1 = pst_pairs(&cert).unwrap();
    let r2 = pst_pairs(&back).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(PstReport::from_json(&r1.to_json()).unwrap().pairs, r1.pairs);
}

#[test]
fn sigma_rule_matches_certificate_sweep_on_z2_4() {
    let h = sylvester(4).unwrap();
    for mask in (1u64..1 << 15).step_by(97) {
        let c = ConnectionSet::new(4, (1..16u64).filter(|x| mask >> (x - 1) & 1 == 1)).unwrap();
        if c.sigma() == 0 {
            continue;
        }
        let sweep = pst_pairs(&certify(&c.build().unwrap(), &h).unwrap()).unwrap();
        assert_eq!(pst_by_sigma(&c).pairs, sweep.pairs, "C = {c}");
    }
}

#[test]
fn decompose_inverts_build() {
    let c = ConnectionSet::parse_items("0011,0101,1111,1000", None).unwrap();
    let d = decompose_standard(c.build().unwrap().adjacency()).unwrap();
    assert_eq!(d.set, c);
    assert!(!d.loops);
}

#[test]
fn complement_and_self_join_keep_transfer() {
    let cube = certify(&ConnectionSet::basis(3).unwrap().build().unwrap(), &sylvester(3).unwrap()).unwrap();
    let c = pst_complement(&cube).unwrap();
    assert_eq!(c.graph, complement(&cube.graph()).unwrap());
    assert_eq!(c.report.pairs, pst_pairs(&cube).unwrap().pairs);
    let j = pst_self_join(&cube).unwrap();
    assert_eq!(j.graph.n(), 16);
    assert_eq!(j.report.verdict, Verdict::Pst);
}

#[test]
fn weighted_hypercube_partner_transfers() {
    let h = weighted_hypercube(&[BigInt::from(1), BigInt::from(3), BigInt::from(2)]).unwrap();
    // first coordinate is the high bit; the even weight is not flipped
    assert_eq!(h.partner_mask, 0b110);
    let f = evolve_fidelity(&h.construction.graph, std::f64::consts::FRAC_PI_2, 0, h.partner_mask as usize).unwrap();
    assert!(1.0 - f < 1e-9);
}

#[test]
fn cubelike_family_product_has_sylvester_certificate() {
    let (c, g) = regular_pst_family(4, 7).unwrap();
    assert_eq!(c.len(), 7);
    let prod = cartesian_product(&WeightedGraph::complete(2), &g);
    assert!(certify(&prod, &sylvester(5).unwrap()).is_ok());
}

#[test]
fn catalog_twelve_certifies_complete_graph() {
    let cert = certify(&WeightedGraph::complete(12), &catalog(12).unwrap()).unwrap();
    assert!(cert.eigenvalues()[1..].iter().all(|l| l.to_string() == "12"));
    assert_eq!(pst_pairs(&cert).unwrap().verdict, Verdict::Periodic);
}
