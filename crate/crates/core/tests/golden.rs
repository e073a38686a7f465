use mwstab_core::series::{check_golden, SeriesModel};

#[test]
fn engine_matches_golden_expansions() {
    for model in [SeriesModel::A, SeriesModel::B] {
        let report = check_golden(model).unwrap();
        for d in &report.diffs {
            eprintln!("{} {} `{}`: expected {:?}, found {:?}", report.model, d.object, d.key, d.expected, d.found);
        }
        assert!(report.objects_checked > 0 && report.terms_checked > 0);
        assert!(report.passed(), "{} diffs for model {}", report.diffs.len(), report.model);
    }
}

#[test]
fn golden_suite_covers_the_displayed_objects() {
    let a = check_golden(SeriesModel::A).unwrap();
    let b = check_golden(SeriesModel::B).unwrap();
    eprintln!("A: {} objects / {} terms; B: {} objects / {} terms", a.objects_checked, a.terms_checked, b.objects_checked, b.terms_checked);
    assert!(a.objects_checked >= 40);
    assert!(a.terms_checked >= 250);
    assert_eq!(b.objects_checked, 3);
}
