use rdm_core::excitation::ExcitationMode;
use rdm_core::harness::config::*;
use rdm_core::LatticeKind;

#[test]
fn parses_flat_file() {
    let cfg = ExperimentConfig::parse(
        "# demo\nkinds = Q, T\nsizes = 8,16\ninstances = 10\nmode = epsilon\nepsilon_grid = 0.01:0.9:5\nseed = 7\n",
    )
    .unwrap();
    assert_eq!(cfg.kinds, vec![LatticeKind::Q, LatticeKind::T]);
    assert_eq!(cfg.sizes, vec![8, 16]);
    assert_eq!(cfg.mode, ExcitationMode::Epsilon);
    assert_eq!(cfg.epsilons.len(), 5);
    assert_eq!(cfg.master_seed, 7);
}

#[test]
fn rejects_bad_values() {
    assert!(ExperimentConfig::parse("sizes = 7").is_err());
    assert!(ExperimentConfig::parse("instances = 0").is_err());
    assert!(ExperimentConfig::parse("colour = blue").is_err());
    assert!(ExperimentConfig::parse("mode = epsilon\nepsilons = 0.2, 0.1").is_err());
}

#[test]
fn hash_ignores_workers_and_output() {
    let a = ExperimentConfig::parse("workers = 1\noutput = a").unwrap();
    let b = ExperimentConfig::parse("workers = 8\noutput = b").unwrap();
    assert_eq!(a.hash(), b.hash());
    let c = ExperimentConfig::parse("seed = 2").unwrap();
    assert_ne!(a.hash(), c.hash());
}
