use std::collections::BTreeSet;

use proxsim::experiments::{observe_all, simulate_all};
use proxsim::features::{build_feature_matrix, build_from_dir, FeatureConfig, FeatureView};
use proxsim::scenario::{generate_dataset, load_dataset, BehaviorClass, Manifest, ScenarioConfig, CSV_COLUMNS};

fn small(per_cell: usize) -> ScenarioConfig {
    ScenarioConfig { scenarios_per_cell: per_cell, ..ScenarioConfig::default() }
}

#[test]
fn ten_per_cell_shape_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(10);
    let manifest = generate_dataset(&cfg, dir.path()).unwrap();
    assert_eq!(manifest.total_scenarios, 90);
    assert_eq!(manifest.total_rows, 77_760);
    assert!(manifest.complete);
    assert_eq!(manifest.cells.len(), 9);
    assert!(manifest.cells.iter().all(|c| c.scenarios == 10 && c.rows == 8_640));

    let (read, scenarios) = load_dataset(dir.path()).unwrap();
    assert_eq!(read, manifest);
    assert_eq!(scenarios.len(), 90);
    assert!(scenarios.iter().all(|s| s.len() == 864));
    let ids: BTreeSet<u64> = scenarios.iter().map(|s| s[0].scenario_id).collect();
    assert_eq!(ids.len(), 90);

    // The CSV holds exactly what an in-memory run observes.
    let clean = simulate_all(&cfg).unwrap();
    let mut memory = observe_all(&clean, cfg.sigma, &cfg).unwrap();
    memory.sort_by_key(|s| s[0].scenario_id);
    let mut from_disk = scenarios.clone();
    from_disk.sort_by_key(|s| s[0].scenario_id);
    assert_eq!(memory, from_disk);

    let header = std::fs::read_to_string(dir.path().join("benign_leo.csv")).unwrap();
    let first = header.lines().next().unwrap();
    assert_eq!(first.split(',').collect::<Vec<_>>(), CSV_COLUMNS);
}

#[test]
fn jammer_state_drives_the_sentinel() {
    let cfg = ScenarioConfig { sigma: 0.0, ..small(2) };
    let scenarios = observe_all(&simulate_all(&cfg).unwrap(), 0.0, &cfg).unwrap();
    for row in scenarios.iter().flatten() {
        if row.jam_state == 0 {
            assert_eq!(row.jsr_db, -400.0);
        } else {
            assert!(row.jsr_db > -400.0 && row.jsr_db.is_finite());
        }
        assert!(row.throughput_mbps >= 0.0);
    }
}

#[test]
fn class_duty_cycles_are_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_dataset(&small(6), dir.path()).unwrap();
    let d = &m.duty_cycles;
    assert!(d.benign < d.covert && d.covert < d.threatening);
    assert!((d.threatening - 0.77).abs() < 0.1);
}

#[test]
fn feature_views_partition_the_columns() {
    let dir = tempfile::tempdir().unwrap();
    generate_dataset(&small(3), dir.path()).unwrap();
    let cfg = FeatureConfig::default();
    let rf = build_from_dir(dir.path(), FeatureView::Rf, &cfg).unwrap();
    let kin = build_from_dir(dir.path(), FeatureView::Kin, &cfg).unwrap();
    let fused = build_from_dir(dir.path(), FeatureView::Fused, &cfg).unwrap();
    let rf_cols: BTreeSet<&String> = rf.columns.iter().collect();
    assert!(kin.columns.iter().all(|c| !rf_cols.contains(c)));
    assert_eq!(fused.n_cols(), rf.n_cols() + kin.n_cols() + cfg.interactions.len());
    for m in [&rf, &kin, &fused] {
        assert_eq!(m.n_rows(), 27 * 864);
        assert!(m.data.iter().all(|v| v.is_finite()));
        for banned in ["jam_state", "class", "scenario_id", "regime", "sjnr_db"] {
            assert!(!m.columns.iter().any(|c| c == banned), "{banned} leaked into {:?}", m.view);
        }
    }
    assert_eq!(rf.labels, fused.labels);
    assert_eq!(kin.groups, fused.groups);
    let classes: BTreeSet<usize> = fused.labels.iter().copied().collect();
    assert_eq!(classes.len(), BehaviorClass::ALL.len());
}

#[test]
fn regeneration_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate_dataset(&small(2), a.path()).unwrap();
    generate_dataset(&small(2), b.path()).unwrap();
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap());
    }
    let (_, scenarios) = load_dataset(a.path()).unwrap();
    let cfg = FeatureConfig::default();
    let m = build_feature_matrix(&scenarios, FeatureView::Fused, &cfg).unwrap();
    let (c1, j1) = m.write(&a.path().join("f")).unwrap();
    let (c2, j2) = m.write(&b.path().join("f")).unwrap();
    assert_eq!(std::fs::read(c1).unwrap(), std::fs::read(c2).unwrap());
    assert_eq!(std::fs::read(j1).unwrap(), std::fs::read(j2).unwrap());
}

#[test]
fn different_seeds_differ() {
    let a = observe_all(&simulate_all(&small(1)).unwrap(), 1.0, &small(1)).unwrap();
    let other = ScenarioConfig { master_seed: 9, ..small(1) };
    let b = observe_all(&simulate_all(&other).unwrap(), 1.0, &other).unwrap();
    assert_ne!(a, b);
}

#[test]
fn incomplete_manifest_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = generate_dataset(&small(1), dir.path()).unwrap();
    m.complete = false;
    m.write(dir.path()).unwrap();
    assert!(matches!(Manifest::read(dir.path()), Err(proxsim::Error::Schema(_))));
}
