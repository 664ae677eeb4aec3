//! End-to-end checks through the public API only, exercising the crate the
//! way a downstream binary does: build a layout and grid, fill the power
//! matrix, derive per-slot SIR fields and rate statistics, and drive the
//! optimizers on a small instance.

use uptilt_core::antenna::{ArrayConfig, ElementPattern};
use uptilt_core::geometry::{build_receiver_grid, SiteLayout, Vec2};
use uptilt_core::network::{
    associate, build_sir_field, compute_power_matrix, ecdf, gue_sir, gue_spectral_efficiency,
    rate_metrics, spectral_efficiency,
};
use uptilt_core::optimize::{
    brute_force_oracle, hybrid_ga, local_refine, objective_db, GaParams, LocalSearchParams,
    Scheme, TiltBounds, TiltProblem,
};
use uptilt_core::propagation::{rx_power_dt, rx_power_ut, RadioParams};

fn defaults() -> (RadioParams, ElementPattern, ArrayConfig) {
    (
        RadioParams::default(),
        ElementPattern::default(),
        ArrayConfig::default(),
    )
}

/// A graded tilt profile: steep over the center site, shallower outward.
fn graded_tilts(layout: &SiteLayout) -> Vec<f64> {
    layout
        .sites
        .iter()
        .map(|s| match s.norm() {
            d if d < 1.0 => 80.0,
            d if d < 700.0 => 35.0,
            _ => 20.0,
        })
        .collect()
}

#[test]
fn full_chain_produces_consistent_tables() {
    let (params, pattern, array) = defaults();
    let layout = SiteLayout::build(500.0).unwrap();
    let grid = build_receiver_grid(&layout, 100.0, 200.0).unwrap();
    let tilts = graded_tilts(&layout);

    let pm = compute_power_matrix(&grid, &layout, &tilts, -6.0, true, &params, &pattern, &array)
        .unwrap();
    assert_eq!(pm.n_points(), grid.points.len());
    assert_eq!(pm.n_sites(), 19);

    let field = build_sir_field(&pm);
    assert_eq!(field.sir_us_db.len(), grid.points.len());
    for (us, cs) in field.sir_us_db.iter().zip(&field.sir_cs_db) {
        assert!(
            cs >= us,
            "muting the downtilted sectors must never lower SIR"
        );
    }

    let se_us = spectral_efficiency(
        &field
            .sir_us_db
            .iter()
            .map(|db| 10f64.powf(db / 10.0))
            .collect::<Vec<_>>(),
    );
    let m = rate_metrics(&se_us).unwrap();
    assert!(m.min_se > 0.0 && m.min_se <= m.median_se && m.median_se <= m.sum_se);

    let curve = ecdf(&field.sir_us_db).unwrap();
    assert_eq!(curve.len(), grid.points.len());
    assert_eq!(curve.last().unwrap().1, 1.0);
    for w in curve.windows(2) {
        assert!(w[0].0 <= w[1].0 && w[0].1 < w[1].1);
    }
}

#[test]
fn matrix_entries_match_single_link_calls_with_explicit_wraparound() {
    let (params, pattern, array) = defaults();
    let layout = SiteLayout::build(500.0).unwrap();
    let grid = build_receiver_grid(&layout, 150.0, 150.0).unwrap();
    let tilts = graded_tilts(&layout);
    let pm = compute_power_matrix(&grid, &layout, &tilts, -6.0, true, &params, &pattern, &array)
        .unwrap();

    for (u, p) in grid.points.iter().enumerate() {
        for (b, site) in layout.sites.iter().enumerate() {
            // Independent wraparound: place the receiver in every mirror
            // image of the layout and keep the closest displacement.
            let mut best = *p - *site;
            for t in &layout.wrap_translations {
                let cand = (*p + *t) - *site;
                if cand.norm() < best.norm() {
                    best = cand;
                }
            }
            let want_ut =
                rx_power_ut(best, grid.height, tilts[b], &params, &pattern, &array).unwrap();
            let want_dt =
                rx_power_dt(best, grid.height, -6.0, true, &params, &pattern, &array).unwrap();
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
            assert!(rel(pm.ut(u, b), want_ut) < 1e-12, "ut link ({u},{b})");
            assert!(rel(pm.dt(u, b), want_dt) < 1e-12, "dt link ({u},{b})");
        }
    }
}

#[test]
fn association_serves_the_strongest_composite_site() {
    let (params, pattern, array) = defaults();
    let layout = SiteLayout::build(500.0).unwrap();
    let grid = build_receiver_grid(&layout, 100.0, 200.0).unwrap();
    let tilts = graded_tilts(&layout);
    let pm = compute_power_matrix(&grid, &layout, &tilts, -6.0, true, &params, &pattern, &array)
        .unwrap();
    let assoc = associate(&pm);
    for u in 0..pm.n_points() {
        let best = assoc.serving[u];
        let best_power = pm.ut(u, best).max(pm.dt(u, best));
        for b in 0..pm.n_sites() {
            assert!(pm.ut(u, b).max(pm.dt(u, b)) <= best_power);
        }
        assert_eq!(assoc.serving_power[u], best_power);
    }
}

#[test]
fn optimizers_agree_with_the_exhaustive_oracle_on_a_toy() {
    let (params, pattern, array) = defaults();
    let full = SiteLayout::build(500.0).unwrap();
    let grid = build_receiver_grid(&full, 150.0, 150.0).unwrap();
    let layout = full.truncated(3);
    let problem = TiltProblem::new(
        layout,
        grid,
        -6.0,
        true,
        params,
        pattern,
        array,
        TiltBounds::default(),
        Some(5.0),
    )
    .unwrap();

    let oracle = brute_force_oracle(&problem, 5.0).unwrap();
    let ga = GaParams {
        population: 40,
        generations: 25,
        seed: 7,
        ..GaParams::default()
    };
    let hybrid = hybrid_ga(&problem, &ga, &LocalSearchParams::default()).unwrap();
    assert_eq!(hybrid.scheme, Scheme::HybridGa);
    assert!(hybrid.best_objective_db <= oracle.best_objective_db + 1e-9);
    assert_eq!(
        hybrid.best_objective_db,
        objective_db(&problem, &hybrid.best_tilts).unwrap()
    );

    // Refining the oracle optimum cannot move it.
    let refined = local_refine(&problem, &oracle.best_tilts, &LocalSearchParams::default())
        .unwrap();
    assert_eq!(refined.best_objective_db, oracle.best_objective_db);
}

#[test]
fn ground_user_chain_scales_linearly_in_the_duty_cycle() {
    let (params, pattern, array) = defaults();
    let layout = SiteLayout::build(500.0).unwrap();
    let gue_grid = build_receiver_grid(&layout, 100.0, 1.5).unwrap();
    let tilts = graded_tilts(&layout);
    let sir = gue_sir(
        &gue_grid, &layout, &tilts, -6.0, true, true, &params, &pattern, &array,
    )
    .unwrap();
    assert_eq!(sir.len(), gue_grid.points.len());

    let half = gue_spectral_efficiency(&sir, 0.5).unwrap();
    let quarter = gue_spectral_efficiency(&sir, 0.25).unwrap();
    for (h, q) in half.iter().zip(&quarter) {
        assert!((h - 2.0 * q).abs() <= 1e-12 * h.abs());
    }
    let muted = gue_spectral_efficiency(&sir, 0.0).unwrap();
    assert!(muted.iter().all(|&v| v == 0.0));
}
