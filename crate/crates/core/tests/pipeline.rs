mod common;

use covariant_core::compositions::{hardy_littlewood, hardy_littlewood_centered};
use covariant_core::contravariant::hardy_inf_pairing;
use covariant_core::generators::{generate, Params};
use covariant_core::io::{read_carleson_masses, read_field, read_signal, write_field, write_signal};
use covariant_core::norms::{carleson_transform, HalfPlaneMeasure};
use covariant_core::{covariant, Fiducial, FieldAxes, HalfPlaneField, LogAxis, RealGrid, RepIndex, Signal, Vector, C64};
use proptest::prelude::*;

fn through_csv_signal(f: &Signal) -> Signal {
    let mut buf = Vec::new();
    write_signal(f, &mut buf).unwrap();
    read_signal(buf.as_slice()).unwrap()
}

fn through_csv_field(u: &HalfPlaneField) -> HalfPlaneField {
    let mut buf = Vec::new();
    write_field(u, &mut buf).unwrap();
    read_field(buf.as_slice()).unwrap()
}

#[test]
fn transform_then_limit_through_files() {
    let mut params = Params::new();
    params.insert("omega".into(), 1.0);
    params.insert("window".into(), 10.0);
    let grid = RealGrid::new(-60.0, 0.01, 12001).unwrap();
    let f = through_csv_signal(&generate("cos_window", &params, grid).unwrap());
    let axes = FieldAxes::new(LogAxis::new(0.05, 2.0, 3).unwrap(), RealGrid::span(-20.0, 20.0, 0.05).unwrap());
    let p = RepIndex::ONE;
    let u = through_csv_field(&covariant(&Fiducial::builtin("poisson").unwrap(), p, &f, &axes).unwrap());
    assert_eq!(u.p(), Some(1.0));
    let g = hardy_inf_pairing(&Vector::Plus, RepIndex::new(u.p().unwrap()).unwrap(), &u).unwrap().value;
    let g = through_csv_signal(&g);
    for k in 3..g.len() - 3 {
        let x = g.grid().x(k);
        assert!((g.values()[k] - f.interpolate(x)).norm() <= 1e-2, "{x}");
    }
}

#[test]
fn carleson_masses_from_json() {
    let masses = read_carleson_masses(r#"[{"weight": 2, "a": 0.5, "b": 0.0}, {"weight": 1, "a": 3, "b": 1}]"#.as_bytes()).unwrap();
    let mu = HalfPlaneMeasure::new(None, masses).unwrap();
    let axes = FieldAxes::new(LogAxis::new(0.25, 2.0, 6).unwrap(), RealGrid::span(-2.0, 2.0, 0.5).unwrap());
    let r = carleson_transform(&mu, &axes, Some(10.0));
    // At a = 4, b = -0.5 both masses are inside.
    let i = 4;
    let j = 3;
    assert_eq!((axes.a.a(i), axes.b.x(j)), (4.0, -0.5));
    assert_eq!(r.field.get(i, j).re, 3.0 / 4.0);
    assert_eq!(r.is_carleson, Some(true));
}

fn point_masses() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.1f64..5.0, 0.05f64..6.0, -3.0f64..3.0), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn carleson_box_sums_match_direct_counting(masses in point_masses()) {
        let mu = HalfPlaneMeasure::new(None, masses.clone()).unwrap();
        let axes = FieldAxes::new(LogAxis::new(0.1, 1.5, 10).unwrap(), RealGrid::span(-4.0, 4.0, 0.25).unwrap());
        let r = carleson_transform(&mu, &axes, None);
        for i in 0..axes.a.count() {
            let a = axes.a.a(i);
            for j in 0..axes.b.n() {
                let b = axes.b.x(j);
                let inside: f64 = masses.iter().filter(|m| m.1 < a && m.2 > b && m.2 < b + a).map(|m| m.0).sum();
                prop_assert!((r.field.get(i, j).re - inside / a).abs() <= 1e-12 * (1.0 + inside / a));
            }
        }
    }

    #[test]
    fn maximal_function_dominates(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let grid = RealGrid::new(0.0, 0.1, 64).unwrap();
        let vals: Vec<C64> = (0..64).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = Signal::new(grid, vals).unwrap();
        let m = hardy_littlewood(&f);
        let c = hardy_littlewood_centered(&f);
        let oracle = common::maximal_brute_force(f.values(), grid.dx());
        for k in 0..f.len() {
            prop_assert_eq!(m.values()[k].re, oracle[k]);
            prop_assert!(m.values()[k].re + 1e-12 >= c.values()[k].re);
        }
        // The maximal function of a signal bounds its average over the grid.
        let avg = f.abs().integral().re / (grid.x_end() - grid.x0());
        prop_assert!(m.values().iter().all(|v| v.re + 1e-12 >= avg));
    }

    #[test]
    fn field_csv_round_trip_is_exact(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ax = LogAxis::new(rng.gen_range(0.01..1.0), rng.gen_range(1.1..3.0), 4).unwrap();
        let bg = RealGrid::new(rng.gen_range(-5.0..0.0), rng.gen_range(0.01..0.5), 7).unwrap();
        let vals: Vec<C64> = (0..28).map(|_| C64::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e-3..1e-3))).collect();
        let u = HalfPlaneField::new(ax, bg, vals).unwrap();
        let back = through_csv_field(&u);
        prop_assert_eq!(back.values(), u.values());
    }
}
