use ramsey_core::game::Strategy;
use ramsey_core::painters::PainterSpec;
use ramsey_core::solver::{solve, SolveValue, SolverConfig};
use ramsey_core::strategy::p4::{p4_bound, P4Builder};
use ramsey_core::strategy::pk::{pk_bound, PkBuilder};
use ramsey_core::verify::{exhaustive_verify, randomized_verify, write_witnesses, VerifyStatus};

fn p4(n: usize) -> impl Fn() -> Box<dyn Strategy> + Sync {
    move || Box::new(P4Builder::new(n).unwrap()) as Box<dyn Strategy>
}

#[test]
fn exhaustive_p4_n15_meets_its_bound() {
    let r = exhaustive_verify(&p4(15), 20).unwrap();
    assert_eq!(r.status, VerifyStatus::Pass);
    assert!(r.max_rounds_observed <= p4_bound(15));
    assert!(r.counters["checkpoints"] > 0);
}

#[test]
fn pk_against_many_random_painters() {
    let f = || Box::new(PkBuilder::new(5, 60).unwrap()) as Box<dyn Strategy>;
    let specs = vec!["random:0".parse::<PainterSpec>().unwrap()];
    let r = randomized_verify(&f, &specs, pk_bound(5, 60), 200, 3).unwrap();
    assert_eq!(pk_bound(5, 60), 160);
    assert_eq!(r.status, VerifyStatus::Pass);
    assert_eq!(r.leaves_explored, 200);
}

#[test]
fn pk_against_red_greedy() {
    let f = || Box::new(PkBuilder::new(5, 30).unwrap()) as Box<dyn Strategy>;
    let specs = vec![PainterSpec::RedGreedy];
    let r = randomized_verify(&f, &specs, 110, 1, 0).unwrap();
    assert_eq!(r.status, VerifyStatus::Pass);
    assert!(r.max_rounds_observed <= 110);
}

#[test]
fn witnesses_are_written_to_the_output_directory() {
    let r0 = exhaustive_verify(&p4(10), 13).unwrap();
    let mut r = exhaustive_verify(&p4(10), r0.max_rounds_observed - 1).unwrap();
    assert_eq!(r.status, VerifyStatus::Fail);
    let dir = std::env::temp_dir().join(format!("ramsey-core-witness-{}", std::process::id()));
    write_witnesses(&mut r, &dir).unwrap();
    let path = r.invariant_failures[0].witness_path.clone().unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let t = ramsey_core::game::Transcript::from_json(&text).unwrap();
    assert_eq!(t.rounds, r0.max_rounds_observed);
    ramsey_core::game::replay(&t).unwrap();
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn solver_reproduces_the_p3_formula() {
    for n in 3..=7usize {
        let want = (5 * (n - 1)).div_ceil(4);
        assert_eq!(solve(&SolverConfig::new(3, n)).unwrap().value, SolveValue::Exact(want), "n={n}");
    }
}
