use rdm_core::excitation::ExcitationMode;
use rdm_core::harness::records::*;
use rdm_core::LatticeKind;

#[test]
fn csv_round_trip() {
    let r = Record {
        kind: LatticeKind::Q,
        size: 16,
        instance: 3,
        excitation: ExcitationMode::Epsilon,
        epsilon: Some(0.1),
        ground_cost: 12.25,
        delta_e: 0.1 + 0.2,
        loop_index: Some(2),
        s: 14,
        r2: Some(2.5),
        theta2_gauged: Some(1.0 / 3.0),
        theta2_raw: Some(2.0),
        winding: Some((-1, 0)),
        overlap: None,
        distance: None,
    };
    let line = r.to_csv();
    assert_eq!(line.split(',').count(), 16);
    assert_eq!(Record::from_csv(&line).unwrap(), r);
    let summary = Record {
        loop_index: None,
        r2: None,
        theta2_gauged: None,
        theta2_raw: None,
        winding: None,
        overlap: Some(0.75),
        distance: Some(0.25),
        ..r
    };
    assert_eq!(Record::from_csv(&summary.to_csv()).unwrap(), summary);
    assert_eq!(CSV_HEADER.split(',').count(), 16);
}
