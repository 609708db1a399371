use mapsim_core::analysis::pca;
use mapsim_core::linalg::Matrix;
use mapsim_core::metrics::evaluate;
use mapsim_core::topology::{ArchKind, ArchitectureSpec, FlowParams};
use proptest::prelude::*;

fn reference_table() -> (Matrix, Vec<(ArchKind, char)>) {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (label, (s, f)) in [('A', (0.8, 0.1)), ('B', (0.1, 0.8))] {
        for kind in ArchKind::ALL {
            let spec = ArchitectureSpec::new(kind, 5).unwrap();
            let r = evaluate(spec, FlowParams::new(s, f), 200, 0.8).unwrap().record;
            rows.push([r.total_work, r.dispersion, r.transition_time as f64]);
            labels.push((kind, label));
        }
    }
    (Matrix::from_rows(&rows).unwrap(), labels)
}

fn point(p: &Matrix, i: usize) -> [f64; 2] {
    [p[(i, 0)], p[(i, 1)]]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

#[test]
fn plane_explains_reference_share() {
    let (table, labels) = reference_table();
    let r = pca(&table, labels).unwrap();
    // z-scored reference grid: 0.983598 of the variance.
    assert!((r.explained_by_plane() - 0.9836).abs() < 1e-4, "{}", r.explained_by_plane());
}

#[test]
fn redundant_designs_share_a_point() {
    let (table, labels) = reference_table();
    let r = pca(&table, labels.clone()).unwrap();
    for cfg in ['A', 'B'] {
        let idx: Vec<usize> = [ArchKind::Pa, ArchKind::Pnc, ArchKind::Pdc]
            .iter()
            .map(|k| labels.iter().position(|l| *l == (*k, cfg)).unwrap())
            .collect();
        for &i in &idx[1..] {
            assert!(dist(point(&r.projection, idx[0]), point(&r.projection, i)) <= 1e-9);
        }
    }
}

#[test]
fn sequential_keep_heavy_designs_cluster() {
    let (table, labels) = reference_table();
    let r = pca(&table, labels.clone()).unwrap();
    let at = |k: ArchKind| labels.iter().position(|l| *l == (k, 'A')).unwrap();
    let group: Vec<[f64; 2]> = [ArchKind::Sdo, ArchKind::Sdc, ArchKind::Sno, ArchKind::Snc, ArchKind::Sa]
        .iter()
        .map(|&k| point(&r.projection, at(k)))
        .collect();
    let spread = group
        .iter()
        .flat_map(|a| group.iter().map(move |b| dist(*a, *b)))
        .fold(0.0, f64::max);
    let centroid = [
        group.iter().map(|p| p[0]).sum::<f64>() / 5.0,
        group.iter().map(|p| p[1]).sum::<f64>() / 5.0,
    ];
    let to_pdc = dist(centroid, point(&r.projection, at(ArchKind::Pdc)));
    assert!(spread < to_pdc, "{spread} vs {to_pdc}");
}

#[test]
fn projection_does_not_stretch_distances() {
    let (table, labels) = reference_table();
    let z = mapsim_core::analysis::standardize(&table).data;
    let r = pca(&table, labels).unwrap();
    for i in 0..z.rows() {
        for j in 0..z.rows() {
            let full: f64 = z.row(i).iter().zip(z.row(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!(dist(point(&r.projection, i), point(&r.projection, j)) <= full + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_order_does_not_matter(seed in any::<u64>()) {
        let (table, labels) = reference_table();
        let base = pca(&table, labels.clone()).unwrap();
        let mut order: Vec<usize> = (0..table.rows()).collect();
        let mut state = seed | 1;
        for i in (1..order.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let rows: Vec<Vec<f64>> = order.iter().map(|&i| table.row(i).to_vec()).collect();
        let shuffled = pca(&Matrix::from_rows(&rows).unwrap(), order.clone()).unwrap();
        for (a, b) in base.explained_variance_ratio.iter().zip(&shuffled.explained_variance_ratio) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        for (pos, &orig) in order.iter().enumerate() {
            for c in 0..2 {
                prop_assert!((shuffled.projection[(pos, c)] - base.projection[(orig, c)]).abs() < 1e-9);
            }
        }
    }
}
