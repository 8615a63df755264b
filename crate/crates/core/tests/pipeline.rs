use xsim_core::adas::DetectorConfig;
use xsim_core::analysis::{
    classify, hypervolume, median, normalize_objectives, xsim_report, XSimCategory, DEFAULT_BIN_WIDTHS,
};
use xsim_core::fitness::{CanonicalEvaluator, ScenarioEvaluator};
use xsim_core::scene::{sample_uniform, translate, FrameSpec, InputSpace, SceneConfig, TestInput};
use xsim_core::search::{nsga2_run, random_search_run, Evaluator, SearchConfig};
use xsim_core::simulator::{simulate, BackendConfig, BackendId, LossyChannelConfig};
use xsim_core::{derive_seed, seeded_rng};

fn evaluator(id: BackendId) -> ScenarioEvaluator {
    ScenarioEvaluator::new(
        SceneConfig::default(),
        BackendConfig::for_id(id),
        DetectorConfig::default(),
    )
}

#[test]
fn search_then_reproduce_on_the_same_backend() {
    let cfg = SearchConfig {
        budget: 60,
        seed: 11,
        ..Default::default()
    };
    let ev = CanonicalEvaluator {
        evaluator: evaluator(BackendId::Alpha),
        seed: 11,
    };
    let res = nsga2_run(&cfg, &InputSpace::default(), &ev).unwrap();
    let pairs: Vec<_> = res
        .final_population
        .iter()
        .map(|i| classify(&i.outcome))
        .filter(|c| c.critical)
        .map(|c| (c.clone(), c))
        .collect();
    assert!(!pairs.is_empty());
    let report = xsim_report(&pairs, "alpha->alpha", DEFAULT_BIN_WIDTHS).unwrap();
    assert!(report
        .rows
        .iter()
        .all(|r| matches!(r.category, XSimCategory::C1a | XSimCategory::C2b)));
}

#[test]
fn canonical_inputs_reach_each_backend_in_its_own_frame() {
    let x = TestInput::new(10.0, 20.0, -3.0, 90.0, 1.5);
    for id in BackendId::ALL {
        let ev = evaluator(id);
        let native = translate(&x, &FrameSpec::CANONICAL, &ev.backend.frame);
        let direct = ev.evaluate(&native, &mut seeded_rng(0)).unwrap();
        let via = CanonicalEvaluator { evaluator: ev, seed: 0 }.evaluate(&x, 0).unwrap();
        assert_eq!(direct, via);
        assert_eq!(via.input, native);
        // Both backends see the pedestrian walk into the car's path.
        assert!(via.ff1 < 1.0, "{id}: ff1 = {}", via.ff1);
    }
}

#[test]
fn backends_disagree_somewhere() {
    let space = InputSpace::default();
    let mut rng = seeded_rng(5);
    let beta = BackendConfig::beta();
    let scene = SceneConfig::default();
    let mut max_gap: f64 = 0.0;
    for _ in 0..50 {
        let x = sample_uniform(&space, &mut rng);
        let a = simulate(&x, &scene, &BackendConfig::alpha()).unwrap();
        let b = simulate(&translate(&x, &FrameSpec::CANONICAL, &beta.frame), &scene, &beta).unwrap();
        let end_a = a.last().ped.pos;
        let end_b = b.last().ped.pos - beta.frame.origin;
        max_gap = max_gap.max((end_a - end_b).norm());
    }
    assert!(max_gap > 0.01);
}

#[test]
fn lossy_channel_preserves_fitness_for_most_scenarios() {
    let space = InputSpace::default();
    let mut rng = seeded_rng(21);
    let clean = evaluator(BackendId::Alpha);
    let lossy = ScenarioEvaluator {
        channel: Some(LossyChannelConfig::default()),
        ..clean
    };
    let mut agree = 0;
    for i in 0..100 {
        let x = sample_uniform(&space, &mut rng);
        let a = clean.evaluate(&x, &mut seeded_rng(0)).unwrap().objectives();
        let b = lossy
            .evaluate(&x, &mut seeded_rng(derive_seed(21, i)))
            .unwrap()
            .objectives();
        if a.iter().zip(&b).all(|(p, q)| (p - q).abs() <= 0.01 + 1e-9) {
            agree += 1;
        }
    }
    assert!(agree >= 95, "{agree}/100");
}

#[test]
fn nsga2_beats_random_search_on_median_hypervolume() {
    let space = InputSpace::default();
    let mut fronts = (Vec::new(), Vec::new());
    for run in 0..6 {
        let seed = derive_seed(99, run);
        let cfg = SearchConfig {
            seed,
            ..Default::default()
        };
        let ev = CanonicalEvaluator {
            evaluator: evaluator(BackendId::Alpha),
            seed,
        };
        let obj = |r: &xsim_core::search::RunResult<_>| -> Vec<[f64; 3]> {
            r.final_front
                .iter()
                .map(|i: &xsim_core::search::Individual<_>| i.objectives)
                .collect()
        };
        fronts.0.push(obj(&nsga2_run(&cfg, &space, &ev).unwrap()));
        fronts.1.push(obj(&random_search_run(&cfg, &space, &ev).unwrap()));
    }
    let all: Vec<[f64; 3]> = fronts.0.iter().chain(&fronts.1).flatten().copied().collect();
    let (_, b) = normalize_objectives(&all).unwrap();
    let median_hv = |fs: &[Vec<[f64; 3]>]| {
        let hv: Vec<f64> = fs
            .iter()
            .map(|f| hypervolume(&f.iter().map(|p| b.normalize(p)).collect::<Vec<_>>(), &[1.0; 3]).unwrap())
            .collect();
        median(&hv)
    };
    assert!(median_hv(&fronts.0) > median_hv(&fronts.1));
}
