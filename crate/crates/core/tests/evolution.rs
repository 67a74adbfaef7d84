use levy_voigt::stable::stable_on_grid;
use levy_voigt::{
    auto_grid, solve_exact_spectral, solve_stepping, EvolutionProblem, Grid1D, InitialCondition, SpectralOptions,
    StableParams,
};

#[test]
fn semigroup_composition() {
    let grid = auto_grid(1.0, 2.0, 1.0).unwrap();
    let half = EvolutionProblem::new(1.0, 2.0, 0.5, InitialCondition::Delta, grid, 1).unwrap();
    let mid = solve_exact_spectral(&half).unwrap();
    let rest = EvolutionProblem::new(1.0, 2.0, 0.5, InitialCondition::Samples(mid), grid, 1).unwrap();
    let composed = solve_exact_spectral(&rest).unwrap();
    let direct = solve_exact_spectral(&half.with_tau_end(1.0).unwrap()).unwrap();
    let d = composed.sup_distance(&direct);
    assert!(d < 1e-8, "{d:e}");
}

#[test]
fn many_steps_match_one_shot() {
    let p = EvolutionProblem::from_delta(1.0, 1.5, 1.0).unwrap();
    let exact = solve_exact_spectral(&p).unwrap();
    let stepped = solve_stepping(&p.with_steps(1000).unwrap()).unwrap();
    let d = exact.sup_distance(&stepped);
    assert!(d < 1e-9, "{d:e}");
}

#[test]
fn sampled_stable_initial_data() {
    // L_{0.5}(., 1) under D^{0.5} + D^{0.5} for tau = 1 becomes L_{0.5}(., 3)
    let grid = Grid1D::with_spacing(2000.0, 0.02).unwrap();
    let start = stable_on_grid(&StableParams::new(0.5, 1.0).unwrap(), &grid, 1e-9).unwrap();
    let target = stable_on_grid(&StableParams::new(0.5, 3.0).unwrap(), &grid, 1e-9).unwrap();
    let mut p = EvolutionProblem::new(0.5, 0.5, 1.0, InitialCondition::Samples(start), grid, 1).unwrap();
    p.tol = 1e-7;
    p.spectral = SpectralOptions { decay_tol: 1e-5, ..p.spectral };
    let v = solve_exact_spectral(&p).unwrap();
    let d = v.sup_distance(&target);
    assert!(d < 1e-6, "{d:e}");
}
