use super::*;
use crate::orderanalysis::catalog;

fn entry(name: &str) -> Interpretation {
    catalog::get(name).unwrap()
}

#[test]
fn galaxy_types_on_catalog() {
    let a = Analyzer::new(&entry("omega_plus_omega_star")).unwrap();
    assert_eq!(a.galaxy_type(&[0]).unwrap(), GalaxyType::TypeN);
    assert_eq!(a.galaxy_type(&[1]).unwrap(), GalaxyType::TypeNegN);
    let z = Analyzer::new(&entry("zeta")).unwrap();
    assert_eq!(z.galaxy_type(&[4]).unwrap(), GalaxyType::TypeZ);
    let f = Analyzer::new(&entry("finite5")).unwrap();
    assert_eq!(f.galaxy_type(&[2]).unwrap(), GalaxyType::Finite(5));
    assert!(matches!(f.galaxy_type(&[7]), Err(Error::OutsideDomain(_))));
    let g = Analyzer::new(&entry("growing_boxes")).unwrap();
    assert_eq!(g.galaxy_type(&[3, 1]).unwrap(), GalaxyType::Finite(4));
    assert_eq!(g.galaxy_type(&[3, 9]).unwrap(), GalaxyType::TypeZ);
    assert_eq!(Analyzer::new(&entry("reverse_omega")).unwrap().galaxy_type(&[3]).unwrap(), GalaxyType::TypeNegN);
}

#[test]
fn condensation_examples() {
    let c = condense(&entry("lex_omega2")).unwrap();
    assert_eq!(c.dimension, 1);
    let pts = c.decomposition.enumerate(40);
    assert_eq!(pts, (0..=40).map(|k| vec![k, 0]).collect::<Vec<_>>());
    let c = condense(&entry("omega")).unwrap();
    assert_eq!((c.dimension, c.decomposition.enumerate(40)), (0, vec![vec![0]]));
    let c = condense(&entry("omega_plus_omega_star")).unwrap();
    assert_eq!((c.dimension, c.decomposition.enumerate(40)), (0, vec![vec![0], vec![1]]));
    assert_eq!(condense(&entry("growing_boxes")).unwrap().dimension, 1);
}

#[test]
fn split_z_halves() {
    let c = Analyzer::new(&entry("zeta")).unwrap().condense_with(true).unwrap();
    assert_eq!(c.decomposition.enumerate(40).len(), 2);
}

#[test]
fn ranks() {
    let expect = [
        ("finite5", 0, 5),
        ("omega", 1, 1),
        ("omega_plus_omega_star", 1, 2),
        ("lex_omega2", 2, 1),
        ("growing_boxes", 2, 1),
        ("zeta", 1, 1),
    ];
    for (name, rank, size) in expect {
        let r = vd_rank(&entry(name)).unwrap();
        assert_eq!((r.rank, r.final_size), (rank, size), "{name}");
        assert_eq!(r.chain.len(), r.rank);
    }
}
