use dyson_core::dominance::check_dominance_exact;
use dyson_core::estimators::{estimate_theta, replica_thresholds, Proxy, Side};
use dyson_core::models::{fk_exact_distribution, sample_bernoulli, sample_coupled, sprinkle};
use dyson_core::renorm::{
    calibrate_padding, coarse_graph, good_block_sets, BlockPartition, CoarseGraphSpec,
};
use dyson_core::{EdgeProbFn, Graph, Interval, ModelParams, Seed};

#[test]
fn text_format_round_trip() {
    let g = sample_bernoulli(
        Interval::new(-20, 30).unwrap(),
        &EdgeProbFn::dyson(0.7, 1.5).unwrap(),
        Seed::new(1, 1),
    );
    let back = Graph::from_text(&g.to_text()).unwrap();
    assert_eq!(back.vertices(), g.vertices());
    assert_eq!(back.sorted_edges(), g.sorted_edges());
}

#[test]
fn coupled_graph_at_beta_is_monotone_and_nested() {
    let c = sample_coupled(Interval::with_len(400), 1.5, 2.0, Seed::new(2, 0)).unwrap();
    let mut prev = 0;
    for k in 0..=20 {
        let g = c.graph_at(k as f64 * 0.1);
        assert!(g.edge_count() >= prev);
        prev = g.edge_count();
    }
    assert_eq!(c.graph_at(0.0).edge_count(), 0);
}

#[test]
fn sprinkled_blocks_feed_the_coarse_graph() {
    let v = Interval::with_len(2048);
    let g = sample_bernoulli(v, &EdgeProbFn::dyson(1.0, 1.5).unwrap(), Seed::new(3, 1));
    let h = sample_bernoulli(v, &EdgeProbFn::dyson(0.3, 1.5).unwrap(), Seed::new(3, 2));
    let part = BlockPartition::new(v, 128).unwrap();
    let good = good_block_sets(&g, &h, &part, 0.8).unwrap();
    assert_eq!(good.len(), part.len());
    let idx: Vec<i64> = good.iter().map(|(k, _)| part.block_index(*k)).collect();
    let sets: Vec<Vec<i64>> = good.into_iter().map(|(_, s)| s).collect();
    let spec = CoarseGraphSpec::for_blocks(sets, &idx, 128).unwrap();
    let cg = coarse_graph(&h, &spec).unwrap();
    assert_eq!(cg.vertices().len(), part.len() as u64);
    assert_eq!(cg.clusters().count(), 1);
    let whole = g.union(&h).unwrap().clusters();
    let root = spec.sets()[0][0];
    assert!(spec
        .sets()
        .iter()
        .flatten()
        .all(|&x| whole.same_cluster(root, x)));
}

#[test]
fn sprinkling_adds_edges_only() {
    let g = sample_bernoulli(
        Interval::with_len(500),
        &EdgeProbFn::dyson(0.2, 1.5).unwrap(),
        Seed::new(4, 0),
    );
    let s = sprinkle(&g, 0.2, 1.5, Seed::new(4, 1)).unwrap();
    let se = s.sorted_edges();
    assert!(g.sorted_edges().iter().all(|e| se.binary_search(e).is_ok()));
}

#[test]
fn theta_grows_with_beta_on_both_sides() {
    for side in [Side::OneSided, Side::TwoSided] {
        let lo = estimate_theta(
            &ModelParams::new(1.5, 0.1, 1.0, 0.0).unwrap(),
            side,
            2048,
            20,
            Seed::new(5, 0),
        )
        .unwrap();
        let hi = estimate_theta(
            &ModelParams::new(1.5, 1.0, 1.0, 0.0).unwrap(),
            side,
            2048,
            20,
            Seed::new(5, 0),
        )
        .unwrap();
        assert!(
            hi.mean > 0.9 && lo.mean < 0.05,
            "{side}: {} {}",
            lo.mean,
            hi.mean
        );
    }
}

#[test]
fn one_sided_thresholds_dominate_replica_by_replica() {
    let s = Seed::new(6, 0);
    let one = replica_thresholds(Side::OneSided, 1.5, 512, 3.0, 30, &Proxy::Span, s).unwrap();
    let two = replica_thresholds(Side::TwoSided, 1.5, 512, 3.0, 30, &Proxy::Span, s).unwrap();
    assert!(one.iter().zip(&two).all(|(a, b)| a >= b));
}

#[test]
fn fk_law_increases_with_beta() {
    let v = Interval::with_len(4);
    for q in [1.0, 2.0, 3.5] {
        let lo = fk_exact_distribution(v, &EdgeProbFn::dyson(0.4, 1.5).unwrap(), q).unwrap();
        let hi = fk_exact_distribution(v, &EdgeProbFn::dyson(0.9, 1.5).unwrap(), q).unwrap();
        assert!(check_dominance_exact(&lo, &hi).unwrap().dominated);
        assert!(!check_dominance_exact(&hi, &lo).unwrap().dominated);
    }
}

#[test]
fn padding_search_stops_at_first_success() {
    let p = ModelParams::new(1.5, 2.0, 1.0, 0.2).unwrap();
    let c = calibrate_padding(&p, 64, 0.8, 0.2, 40, 64, Seed::new(7, 0)).unwrap();
    assert_eq!(c.trail.last().unwrap().0, c.l);
    assert!(c.rate > 0.8);
}
