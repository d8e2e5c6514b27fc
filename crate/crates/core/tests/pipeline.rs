use epsusy::potential::{format_table, parse_table};
use epsusy::susy::Tolerances;
use epsusy::{
    make_example_v0, transform_potential, verify_chain, verify_theorem, RadialGrid, Sign,
};

fn k_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.05 + 4.95 * i as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn example_passes_every_check() {
    let v = make_example_v0(0.232, 0.944).unwrap();
    let grid = RadialGrid::log_uniform(1e-4, 1.0, 60.0, 6000).unwrap();
    let (t, rep) = verify_theorem(
        &v,
        1.22,
        Sign::Plus,
        &k_grid(40),
        &grid,
        &Tolerances::default(),
    )
    .unwrap();
    assert!(rep.all_pass(), "{rep}");
    assert!(rep.get("D.mixing").is_some());
    assert_eq!(t.spec().l(), [0, 2]);
    assert_eq!(t.spec().nu(), [2, 2]);
}

#[test]
fn coarse_grid_is_caught() {
    let v = make_example_v0(0.232, 0.944).unwrap();
    let grid = RadialGrid::log_uniform(1e-4, 1.0, 60.0, 32).unwrap();
    let (_, rep) = verify_theorem(
        &v,
        1.22,
        Sign::Plus,
        &k_grid(16),
        &grid,
        &Tolerances::default(),
    )
    .unwrap();
    assert!(!rep.all_pass());
    assert!(rep.failures().any(|c| c.name.starts_with('D')), "{rep}");
}

#[test]
fn chain_of_two_passes() {
    let v = make_example_v0(0.232, 0.944).unwrap();
    let grid = RadialGrid::log_uniform(1e-4, 1.0, 60.0, 6000).unwrap();
    let (steps, rep) = verify_chain(
        &v,
        &[1.22, 0.9],
        Sign::Minus,
        &k_grid(30),
        &grid,
        &Tolerances::default(),
    )
    .unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[1].spec().l(), [2, 0]);
    assert!(rep.all_pass(), "{rep}");
}

#[test]
fn v2_table_round_trips() {
    let v = make_example_v0(0.232, 0.944).unwrap();
    let grid = RadialGrid::log_uniform(1e-4, 1.0, 60.0, 3000).unwrap();
    let t = transform_potential(&v, 1.22, Sign::Plus, &grid).unwrap();
    let r = grid.points();
    let values: Vec<_> = r.iter().map(|&x| t.v2.value(x)).collect();
    let back = parse_table(&format_table(t.spec(), r, &values), "round trip").unwrap();
    assert_eq!(back.spec(), t.spec());
    for (x, want) in r.iter().zip(&values) {
        let got = back.value(*x);
        for (a, b) in got.iter().zip(want.iter()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "r = {x}");
        }
    }
}

#[test]
fn opposite_sign_negates_the_coupling() {
    let v = make_example_v0(0.232, 0.944).unwrap();
    let grid = RadialGrid::log_uniform(1e-4, 1.0, 60.0, 3000).unwrap();
    let p = transform_potential(&v, 1.22, Sign::Plus, &grid).unwrap();
    let m = transform_potential(&v, 1.22, Sign::Minus, &grid).unwrap();
    let scale = p
        .v2_values
        .iter()
        .map(|x| x[(0, 1)].abs())
        .fold(0.0, f64::max);
    assert!(scale > 0.1);
    for (a, b) in p.v2_values.iter().zip(&m.v2_values) {
        assert!((a[(0, 1)] + b[(0, 1)]).abs() <= 1e-8 * scale);
        assert!((a[(0, 0)] - b[(0, 0)]).abs() <= 1e-8 * a[(0, 0)].abs().max(1.0));
    }
}
