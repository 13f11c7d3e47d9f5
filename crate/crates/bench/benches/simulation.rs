use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use pensiongame_bench::{barrier_prefs, barriers, base_prefs, bear, bull};
use pensiongame_core::sensitivity::Game;
use pensiongame_core::stochastics::{
    check_game, mc_firm_payoff_g2, mc_payoff_g1, sample_paths, HjbiGrid, PathGrid, Side,
};
use pensiongame_core::{solve_game_one, solve_game_two, wealth_law_g1, Measure};

const SEED: u64 = 42;

fn paths(c: &mut Criterion) {
    let (m, p) = (bull(), base_prefs());
    let sol = solve_game_one(&m, &p).unwrap();
    let law = wealth_law_g1(&sol, &m, &p, Measure::Reference);
    let grid = PathGrid::new(0.0, 1.0 / 252.0, 252, 1_000, SEED).unwrap();
    let mut g = c.benchmark_group("sample_paths");
    g.throughput(Throughput::Elements((grid.n_steps * grid.n_paths) as u64));
    g.bench_function("1000x252", |b| {
        b.iter(|| sample_paths(&law, 1.0, &grid).unwrap())
    });
    g.finish();
}

fn payoffs(c: &mut Criterion) {
    let (mb, p) = (bull(), base_prefs());
    let g1 = solve_game_one(&mb, &p).unwrap();
    // Twenty years simulated, the rest of the payoff from the analytic tail.
    let short = PathGrid::covering(0.0, 20.0, 1.0 / 52.0, 1_000, SEED).unwrap();

    let (mr, q, bar) = (bear(), barrier_prefs(), barriers());
    let g2 = solve_game_two(&mr, &q, &bar).unwrap();
    let barrier = PathGrid::covering(0.0, 200.0, 1.0 / 500.0, 200, SEED).unwrap();

    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("union_payoff_1000_paths_20y", |b| {
        b.iter(|| mc_payoff_g1(&g1, &mb, &p, Side::Union, 1.0, &short, 1.0).unwrap())
    });
    g.bench_function("barrier_payoff_200_paths", |b| {
        b.iter(|| mc_firm_payoff_g2(&g2, &mr, &q, &bar, &barrier).unwrap())
    });
    g.finish();
}

fn hjbi(c: &mut Criterion) {
    let (m, p) = (bull(), base_prefs());
    let grid = HjbiGrid::default();
    let bar = barriers();
    c.bench_function("hjbi_check_game1", |b| {
        b.iter(|| check_game(Game::One, &m, &p, &bar, &grid).unwrap())
    });
}

criterion_group!(benches, paths, payoffs, hjbi);
criterion_main!(benches);
