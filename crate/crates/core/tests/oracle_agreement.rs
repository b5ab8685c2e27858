use mrm_core::advice::{build_ilp, exact_advice, DEFAULT_NODE_LIMIT};
use mrm_core::benefit::{profiles_for, Welfare};
use mrm_core::gen::tiny::{random_compatibility, random_restrictions, TinyParams};
use mrm_core::maxsa::{solve_maxsa_exact, DEFAULT_BUDGET};
use mrm_core::maxtb::{min_satisfaction_ratio, solve_maxtb};
use mrm_core::mrm::solve_mrm;
use mrm_core::oracle::{
    best_advice, enumerate_solutions, solve_ilp, OracleConfig, DEFAULT_STATE_CAP,
};
use mrm_core::rational::int;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shared_resources() -> TinyParams {
    TinyParams {
        capacity: (1, 3),
        min_rho: 1,
        ..TinyParams::default()
    }
}

#[test]
fn all_objectives_match_on_shared_resources() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let c = random_compatibility(&mut rng, &shared_resources());
        let util = profiles_for(&c, Welfare::Utilitarian);
        let truth = enumerate_solutions(&c, &util, OracleConfig::default()).unwrap();
        assert_eq!(solve_mrm(&c).is_some(), truth.feasible);
        assert_eq!(
            solve_maxtb(&c, &util).unwrap().total_benefit,
            truth.best_benefit
        );
        assert_eq!(
            solve_maxsa_exact(&c, DEFAULT_BUDGET).unwrap().count(),
            truth.best_satisfied
        );
        let raw = profiles_for(&c, Welfare::Rawlsian);
        let out = solve_maxtb(&c, &raw).unwrap();
        let truth = enumerate_solutions(&c, &raw, OracleConfig::default()).unwrap();
        assert_eq!(out.total_benefit, truth.best_benefit);
        assert_eq!(
            min_satisfaction_ratio(&out.solution, c.agents()),
            truth.best_min_ratio
        );
    }
}

#[test]
fn symmetry_pruned_oracle_keeps_optima() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pruned = OracleConfig {
        resource_symmetry: true,
        ..OracleConfig::default()
    };
    for _ in 0..100 {
        let c = random_compatibility(&mut rng, &shared_resources());
        let p = profiles_for(&c, Welfare::Rawlsian);
        let full = enumerate_solutions(&c, &p, OracleConfig::default()).unwrap();
        let fast = enumerate_solutions(&c, &p, pruned).unwrap();
        assert_eq!(full.best_benefit, fast.best_benefit);
        assert_eq!(full.best_min_ratio, fast.best_min_ratio);
        assert_eq!(full.best_satisfied, fast.best_satisfied);
        assert_eq!(full.feasible, fast.feasible);
    }
}

#[test]
fn advice_matches_unpruned_search_and_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = TinyParams {
        agents: (1, 3),
        capacity: (1, 2),
        labels: (0, 3),
        label_cost: (1, 3),
        budget: (0, 4),
        ..TinyParams::default()
    };
    for _ in 0..40 {
        let g = random_restrictions(&mut rng, &p);
        let exact = exact_advice(&g, DEFAULT_NODE_LIMIT).unwrap().satisfied;
        let util = profiles_for(&g.compatibility(), Welfare::Utilitarian);
        assert_eq!(
            best_advice(&g, &util, OracleConfig::default()).unwrap(),
            exact
        );
        let (value, _) = solve_ilp(&build_ilp(&g), DEFAULT_STATE_CAP)
            .unwrap()
            .unwrap();
        assert_eq!(value, int(exact as i64));
    }
}
