#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kinopt/harness.hpp"
#include "kinopt/optimizers.hpp"
#include "kinopt/rng.hpp"

using namespace kinopt;

namespace {

RunSpec quad_spec() {
    RunSpec s;
    s.id = "t";
    s.problem.kind = ProblemKind::Quadratic;
    s.problem.dim = 2;
    s.problem.min_eig = 1.0;
    s.problem.max_eig = 4.0;
    s.optimizer = OptimizerKind::CdSplit;
    s.hp.dt = 0.05;
    s.hp.gamma = 1.0;
    s.hp.c = 1.0;
    s.init.mode = InitMode::Ones;
    s.steps = 200;
    return s;
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

const SummaryRow& row_by_id(const std::vector<SummaryRow>& rows,
                            const std::string& id) {
    for (const auto& r : rows)
        if (r.spec_id == id) return r;
    throw std::runtime_error("no summary row with id " + id);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("spec files round-trip through the canonical serialization") {
    FullSpec fs;
    fs.run.id = "demo";
    fs.run.problem.kind = ProblemKind::Quadratic;
    fs.run.problem.dim = 10;
    fs.run.problem.min_eig = 1.0;
    fs.run.problem.max_eig = 10.0;
    fs.run.problem.rotate = true;
    fs.run.problem.seed = 3;
    fs.run.optimizer = OptimizerKind::IkfadSplit;
    fs.run.schedule.kind = ScheduleKind::Constant;
    fs.run.schedule.mu_max = 0.9;
    fs.run.hp.dt = 0.01;
    fs.run.hp.gamma = 2.0;
    fs.run.hp.alpha = 1.0;
    fs.run.hp.rho = 0.5;
    fs.run.hp.c = 0.25;
    fs.run.hp.eps_div = 1e-9;
    fs.run.hp.mu = 0.3;
    fs.run.hp.beta1 = 0.8;
    fs.run.hp.beta2 = 0.99;
    fs.run.init.mode = InitMode::Explicit;
    fs.run.init.x0 = {1.5, -2.0};
    fs.run.init.radius = 2.5;
    fs.run.init.p0 = {0.1};
    fs.run.init.xi0 = {0.2};
    fs.run.init.zeta0 = {0.3};
    fs.run.steps = 123;
    fs.run.seed = 9;
    fs.run.record_stride = 2;
    fs.run.sample_stride = 5;
    fs.run.noise_sigma = 0.1;
    fs.run.converge_tol = 1e-3;
    fs.has_grid = true;
    fs.grid.gammas = {0.1, 1.0};
    fs.grid.dts = {0.01, 0.1};
    fs.grid.metric = GridMetric::BestLoss;
    fs.has_portrait = true;
    fs.portrait = {-1.0, 1.0, -2.0, 2.0, 3, 4, 0.05};
    fs.has_ensemble = true;
    fs.ensemble.n_seeds = 5;
    fs.has_spectrum = true;
    fs.spectrum.trajectory_csv = "out/trajectory.csv";
    fs.spectrum.direction = "axis:1";

    const std::string text = serialize_spec(fs);
    const FullSpec parsed = parse_spec_string(text);
    CHECK(parsed == fs);
    CHECK_EQ(serialize_spec(parsed), text);

    // A minimal spec leaves every optional section off.
    const FullSpec tiny = parse_spec_string("spec.id = mini\n");
    CHECK_EQ(tiny.run.id, "mini");
    CHECK(!tiny.has_grid);
    CHECK(!tiny.has_portrait);
    CHECK(!tiny.has_ensemble);
    CHECK(!tiny.has_spectrum);
    CHECK(parse_spec_string(serialize_spec(tiny)) == tiny);
}

TEST_CASE("spec parser reports offending lines") {
    auto msg = error_of([] { parse_spec_string("spec.id = a\nbogus line\n"); });
    CHECK(msg.find("line 2") != std::string::npos);

    msg = error_of([] { parse_spec_string("no.such.key = 1\n"); });
    CHECK(msg.find("unknown key") != std::string::npos);

    msg = error_of([] { parse_spec_string("spec.id =\n"); });
    CHECK(msg.find("line 1") != std::string::npos);

    CHECK_THROWS_AS(parse_spec_string("hp.dt = fast\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec_string("run.steps = -5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec_string("problem.kind = banana\n"),
                    std::invalid_argument);

    // Comments and blank lines are fine.
    const FullSpec ok = parse_spec_string("# a comment\n\nspec.id = ok\n");
    CHECK_EQ(ok.run.id, "ok");
}

TEST_CASE("initial states resolve modes and broadcasts") {
    RunSpec spec = quad_spec();
    const auto oracle = make_problem(spec);

    SUBCASE("ones and zeros") {
        spec.init.mode = InitMode::Ones;
        OptState s = make_initial_state(spec, *oracle);
        CHECK_EQ(s.x, Vec{1.0, 1.0});
        CHECK_EQ(s.p, Vec{0.0, 0.0});
        CHECK(!s.has_xi());
        spec.init.mode = InitMode::Zeros;
        CHECK_EQ(make_initial_state(spec, *oracle).x, Vec{0.0, 0.0});
    }
    SUBCASE("explicit values broadcast from a single entry") {
        spec.init.mode = InitMode::Explicit;
        spec.init.x0 = {1.5};
        spec.init.p0 = {0.5};
        OptState s = make_initial_state(spec, *oracle);
        CHECK_EQ(s.x, Vec{1.5, 1.5});
        CHECK_EQ(s.p, Vec{0.5, 0.5});
        spec.init.x0 = {1.0, 2.0};
        CHECK_EQ(make_initial_state(spec, *oracle).x, Vec{1.0, 2.0});
        spec.init.x0 = {1.0, 2.0, 3.0};
        const auto msg =
            error_of([&] { make_initial_state(spec, *oracle); });
        CHECK(msg.find("init.x0 has dimension 3") != std::string::npos);
        CHECK(msg.find("needs 2") != std::string::npos);
        spec.init.x0 = {};
        CHECK_THROWS_AS(make_initial_state(spec, *oracle), std::invalid_argument);
    }
    SUBCASE("auxiliary overrides reach optimizers that use them") {
        spec.optimizer = OptimizerKind::IkfadSplit;
        spec.init.xi0 = {2.0};
        OptState s = make_initial_state(spec, *oracle);
        CHECK_EQ(s.xi, Vec{2.0, 2.0});
    }
    SUBCASE("random ball centers on the known minimizer") {
        spec.init.mode = InitMode::RandomBall;
        spec.init.radius = 0.5;
        const OptState a = make_initial_state(spec, *oracle);
        const OptState b = make_initial_state(spec, *oracle);
        CHECK_EQ(a.x, b.x);  // deterministic in the run seed
        CHECK(norm2(a.x) <= 0.5 + 1e-12);  // quadratic minimizer is the origin

        RunSpec other = spec;
        other.seed = 99;
        CHECK(make_initial_state(other, *oracle).x != a.x);

        RunSpec rb = spec;
        rb.problem.kind = ProblemKind::Rosenbrock;
        const auto rosen = make_problem(rb);
        const OptState r = make_initial_state(rb, *rosen);
        CHECK(dist2(r.x, {1.0, 1.0}) <= 0.5 + 1e-12);

        spec.init.radius = -1.0;
        CHECK_THROWS_AS(make_initial_state(spec, *oracle), std::invalid_argument);
    }
}

TEST_CASE("single runs record on the requested grids") {
    RunSpec spec = quad_spec();
    spec.steps = 10;
    spec.record_stride = 3;

    SUBCASE("record stride plus a guaranteed final row") {
        const RunResult r = run_single(spec);
        CHECK_EQ(r.traj.steps,
                 std::vector<std::uint64_t>{0, 3, 6, 9, 10});
        CHECK(r.traj.sample_steps.empty());
        CHECK_EQ(r.summary.spec_id, "t");
        CHECK_EQ(r.summary.optimizer, "cd");
        CHECK_EQ(r.summary.gamma, 1.0);
        CHECK_EQ(r.summary.dt, 0.05);
        CHECK_EQ(r.summary.c, 1.0);
        CHECK(r.summary.wall_ms >= 0.0);
        CHECK_EQ(r.summary.diverged_at, -1);
    }
    SUBCASE("sampled steps get a scalar row too") {
        spec.sample_stride = 4;
        const RunResult r = run_single(spec);
        CHECK_EQ(r.traj.sample_steps, std::vector<std::uint64_t>{0, 4, 8});
        CHECK_EQ(r.traj.steps,
                 std::vector<std::uint64_t>{0, 3, 4, 6, 8, 9, 10});
        REQUIRE(r.traj.samples.size() == 3);
        CHECK(r.traj.samples[1].x.size() == 2);
    }
    SUBCASE("zero steps yields only the initial record") {
        spec.steps = 0;
        const RunResult r = run_single(spec);
        REQUIRE(r.traj.rows() == 1);
        // f(1,1) = (1 + 4)/2 on the {1, 4} spectrum, measured from the optimum
        CHECK_EQ(r.traj.losses[0], 2.5);
        CHECK_EQ(r.summary.final_loss, 2.5);
        CHECK_EQ(r.summary.best_loss, 2.5);
        // Far too few rows for a rate fit.
        CHECK(std::isnan(r.summary.kappa));
        CHECK(std::isnan(r.summary.r2));
    }
    SUBCASE("record_stride zero is rejected") {
        spec.record_stride = 0;
        CHECK_THROWS_AS(run_single(spec), std::invalid_argument);
    }
    SUBCASE("a damped run converges to the minimizer") {
        spec.steps = 2000;
        spec.record_stride = 1;
        const RunResult r = run_single(spec);
        CHECK(!r.diverged);
        CHECK_EQ(r.summary.converged, "true");
        CHECK(dist2(r.final_state.x, {0.0, 0.0}) < 1e-2);
        CHECK(r.summary.kappa > 0.0);
    }
}

TEST_CASE("divergence is caught and truncated") {
    RunSpec spec = quad_spec();
    spec.optimizer = OptimizerKind::LdhdSplit;
    spec.hp.dt = 2.0;  // far beyond stability on the stiff mode
    spec.hp.c = 0.0;
    spec.steps = 400;  // ~15x growth per step needs a few hundred to overflow
    const RunResult r = run_single(spec);
    CHECK(r.diverged);
    CHECK(r.summary.diverged_at >= 1);
    CHECK_EQ(r.summary.converged, "false");
    CHECK(r.final_state.finite());
    for (double v : r.traj.losses) CHECK(std::isfinite(v));
    CHECK(r.traj.rows() >= 1);
}

TEST_CASE("grid sweeps derive momentum and flag invalid cells") {
    RunSpec base = quad_spec();
    base.optimizer = OptimizerKind::MsgdEuler;
    base.steps = 50;
    GridPart grid;
    grid.gammas = {0.5, 40.0};
    grid.dts = {0.01, 0.25};
    grid.metric = GridMetric::FinalLoss;

    const GridResult res = run_gamma_dt_grid(base, grid, 1);
    REQUIRE(res.cells.size() == 4);
    REQUIRE(res.rows.size() == 4);

    CHECK_EQ(res.cells[0].spec_id, "t_g00_d00");
    CHECK_EQ(res.cells[1].spec_id, "t_g00_d01");
    CHECK_EQ(res.cells[2].spec_id, "t_g01_d00");
    CHECK_EQ(res.cells[3].spec_id, "t_g01_d01");
    CHECK_EQ(res.cells[3].gamma_index, 1);
    CHECK_EQ(res.cells[3].dt_index, 1);
    CHECK_EQ(res.cells[2].gamma, 40.0);
    CHECK_EQ(res.cells[2].dt, 0.01);

    // gamma sqrt(dt) <= 1 splits the plane: 0.05 and 0.25 map fine, 4 and 20
    // have no momentum solution.
    CHECK_EQ(res.cells[0].status, "ok");
    CHECK_EQ(res.cells[1].status, "ok");
    CHECK_EQ(res.cells[2].status, "invalid");
    CHECK_EQ(res.cells[3].status, "invalid");
    for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
        CHECK(std::isnan(res.cells[k].metric_value));
        CHECK(!res.cells[k].note.empty());
        CHECK(res.cells[k].note.find(',') == std::string::npos);
        const SummaryRow& row = row_by_id(res.rows, res.cells[k].spec_id);
        CHECK_EQ(row.converged, "invalid");
        CHECK(std::isnan(row.final_loss));
        CHECK(std::isnan(row.kappa));
    }

    for (std::size_t i = 0; i + 1 < res.rows.size(); ++i)
        CHECK(res.rows[i].spec_id < res.rows[i + 1].spec_id);

    // An ok cell reproduces exactly as a hand-built single run.
    RunSpec cell = base;
    cell.id = "t_g00_d01";
    cell.seed = mix_seeds(base.seed, 1);
    cell.hp.gamma = 0.5;
    cell.hp.dt = 0.25;
    cell.hp.mu = mu_gamma_map(0.5, 0.25);
    const RunResult single = run_single(cell);
    const SummaryRow& grow = row_by_id(res.rows, "t_g00_d01");
    CHECK_EQ(single.summary.final_loss, grow.final_loss);
    CHECK_EQ(single.summary.best_loss, grow.best_loss);
    CHECK_EQ(single.summary.converged, grow.converged);
    CHECK_EQ(single.summary.seed, grow.seed);
    CHECK_EQ(res.cells[1].metric_value, grow.final_loss);

    GridPart empty;
    empty.dts = {0.1};
    CHECK_THROWS_AS(run_gamma_dt_grid(base, empty, 1), std::invalid_argument);

    GridPart acc = grid;
    acc.metric = GridMetric::TestAccuracyProxy;
    CHECK_THROWS_AS(run_gamma_dt_grid(base, acc, 1), std::invalid_argument);
}

TEST_CASE("grid statuses include divergence and metric variants") {
    RunSpec base = quad_spec();
    base.optimizer = OptimizerKind::LdhdSplit;
    base.hp.c = 0.0;
    base.steps = 400;  // long enough for the dt = 2 cell to overflow
    GridPart grid;
    grid.gammas = {0.5};
    grid.dts = {0.05, 2.0};
    grid.metric = GridMetric::BestLoss;

    const GridResult res = run_gamma_dt_grid(base, grid, 1);
    REQUIRE(res.cells.size() == 2);
    CHECK_EQ(res.cells[0].status, "ok");
    CHECK_EQ(res.cells[1].status, "diverged");
    CHECK(std::isfinite(res.cells[1].metric_value));  // last finite loss
    const SummaryRow& drow = row_by_id(res.rows, res.cells[1].spec_id);
    CHECK(drow.diverged_at >= 1);
    CHECK_EQ(res.cells[0].metric_value,
             row_by_id(res.rows, res.cells[0].spec_id).best_loss);

    // Held-out accuracy as the sweep metric needs the classifier problem.
    RunSpec toy = quad_spec();
    toy.problem.kind = ProblemKind::ToyClassifier;
    toy.problem.n_examples = 64;
    toy.problem.n_features = 4;
    toy.problem.hidden = 0;
    toy.problem.batch_size = 8;
    toy.problem.seed = 5;
    toy.optimizer = OptimizerKind::CdSplit;
    toy.steps = 80;
    GridPart acc;
    acc.gammas = {1.0};
    acc.dts = {0.05};
    acc.metric = GridMetric::TestAccuracyProxy;
    const GridResult ares = run_gamma_dt_grid(toy, acc, 1);
    REQUIRE(ares.cells.size() == 1);
    CHECK_EQ(ares.cells[0].status, "ok");
    CHECK(ares.cells[0].metric_value >= 0.0);
    CHECK(ares.cells[0].metric_value <= 1.0);
}

TEST_CASE("grid runs are byte-identical across thread counts") {
    RunSpec base = quad_spec();
    base.steps = 100;
    GridPart grid;
    grid.gammas = {0.5, 1.0};
    grid.dts = {0.02, 0.05};

    const GridResult one = run_gamma_dt_grid(base, grid, 1);
    const GridResult two = run_gamma_dt_grid(base, grid, 2);
    std::ostringstream g1, g2, s1, s2;
    write_grid_csv(g1, one);
    write_grid_csv(g2, two);
    write_summary_csv(s1, one.rows);
    write_summary_csv(s2, two.rows);
    CHECK_EQ(g1.str(), g2.str());
    CHECK_EQ(s1.str(), s2.str());
}

TEST_CASE("phase portraits map the starting plane") {
    SUBCASE("input validation") {
        RunSpec bad = quad_spec();
        bad.problem.dim = 3;
        CHECK_THROWS_AS(run_phase_portrait(bad, PortraitPart{}, 1),
                        std::invalid_argument);
        RunSpec toy = quad_spec();
        toy.problem.kind = ProblemKind::ToyClassifier;
        toy.problem.n_examples = 64;
        toy.problem.n_features = 2;
        CHECK_THROWS_AS(run_phase_portrait(toy, PortraitPart{}, 1),
                        std::invalid_argument);
        PortraitPart degenerate;
        degenerate.nx = 0;
        CHECK_THROWS_AS(run_phase_portrait(quad_spec(), degenerate, 1),
                        std::invalid_argument);
    }
    SUBCASE("a single cell at the optimum converges trivially") {
        RunSpec base = quad_spec();
        base.problem.kind = ProblemKind::Rosenbrock;
        base.hp.dt = 0.005;
        base.steps = 100;
        PortraitPart part{1.0, 1.0, 1.0, 1.0, 1, 1, 1e-2};
        const PortraitResult res = run_phase_portrait(base, part, 1);
        REQUIRE(res.cells.size() == 1);
        const PortraitCell& c = res.cells[0];
        CHECK_EQ(c.spec_id, "t_x00_y00");
        CHECK_EQ(c.x0, Vec{1.0, 1.0});
        CHECK(c.metrics.converged);
        CHECK_EQ(c.metrics.overshoot_count, 0);
        CHECK_EQ(c.metrics.path_ratio, 0.0);
        CHECK_EQ(c.diverged_at, -1);
        // starting inside the arrival tolerance cuts the path at sample 0
        CHECK_EQ(c.path.size(), 1);
        CHECK_EQ(c.path[0], Vec{1.0, 1.0});
    }
    SUBCASE("mirror-image starts give mirror-image metrics") {
        RunSpec base = quad_spec();
        base.steps = 300;
        PortraitPart part{-1.0, 1.0, -1.0, 1.0, 3, 3, 1e-2};
        const PortraitResult res = run_phase_portrait(base, part, 1);
        REQUIRE(res.cells.size() == 9);
        // k = 3 ix + iy; the quadratic flow is odd, so cell k and cell 8-k
        // trace exact negations of each other.
        for (std::size_t k = 0; k < 4; ++k) {
            const PortraitCell& a = res.cells[k];
            const PortraitCell& b = res.cells[8 - k];
            CAPTURE(k);
            CHECK_EQ(a.x0[0], -b.x0[0]);
            CHECK_EQ(a.x0[1], -b.x0[1]);
            CHECK_EQ(a.metrics.final_dist, b.metrics.final_dist);
            CHECK_EQ(a.metrics.overshoot_count, b.metrics.overshoot_count);
            CHECK_EQ(a.metrics.path_ratio, b.metrics.path_ratio);
        }
        const PortraitCell& center = res.cells[4];
        CHECK_EQ(center.x0, Vec{0.0, 0.0});
        CHECK(center.metrics.converged);
        CHECK_EQ(center.metrics.path_ratio, 0.0);
        // Paths are decimated to a bounded number of points per cell.
        for (const auto& c : res.cells) CHECK(c.path.size() <= 258);
    }
    SUBCASE("explicit momentum and friction overrides are honored") {
        RunSpec base = quad_spec();
        base.optimizer = OptimizerKind::IkfadSplit;
        base.hp.alpha = 1.0;
        base.hp.rho = 1.0;
        base.steps = 50;
        PortraitPart part{0.5, 0.5, 0.5, 0.5, 1, 1, 1e-2};

        const double plain =
            run_phase_portrait(base, part, 1).cells[0].metrics.final_dist;

        RunSpec with_xi = base;
        with_xi.init.xi0 = {1.0};
        const double seeded =
            run_phase_portrait(with_xi, part, 1).cells[0].metrics.final_dist;
        CHECK(seeded != plain);

        RunSpec zero_xi = base;
        zero_xi.init.xi0 = {0.0};
        const double zeroed =
            run_phase_portrait(zero_xi, part, 1).cells[0].metrics.final_dist;
        CHECK_EQ(zeroed, plain);  // unset and explicit zero are the same start

        RunSpec with_p = base;
        with_p.init.p0 = {0.3};
        const double kicked =
            run_phase_portrait(with_p, part, 1).cells[0].metrics.final_dist;
        CHECK(kicked != plain);
    }
}

TEST_CASE("seed ensembles aggregate across derived seeds") {
    SUBCASE("zero seeds is rejected") {
        CHECK_THROWS_AS(run_seed_ensemble(quad_spec(), 0, 1),
                        std::invalid_argument);
    }
    SUBCASE("deterministic runs collapse to zero spread") {
        RunSpec base = quad_spec();
        base.steps = 40;
        const EnsembleResult res = run_seed_ensemble(base, 4, 1);
        REQUIRE(res.rows.size() == 4);
        CHECK_EQ(res.rows[0].spec_id, "t_s00");
        CHECK_EQ(res.rows[3].spec_id, "t_s03");
        for (std::size_t k = 0; k < 4; ++k)
            CHECK_EQ(res.rows[k].seed, mix_seeds(base.seed, k));
        for (std::size_t k = 1; k < 4; ++k)
            CHECK_EQ(res.rows[k].final_loss, res.rows[0].final_loss);
        REQUIRE(res.steps.size() == 41);
        CHECK_EQ(res.steps.front(), 0);
        CHECK_EQ(res.steps.back(), 40);
        for (double v : res.loss_std) CHECK_EQ(v, 0.0);
        for (double v : res.p_norm_std) CHECK_EQ(v, 0.0);
        REQUIRE(res.stats.size() == 4);
        CHECK_EQ(res.stats[0].metric, "final_loss");
        CHECK_EQ(res.stats[0].stddev, 0.0);
        CHECK_EQ(res.stats[0].mean, res.rows[0].final_loss);
        CHECK_EQ(res.n_diverged, 0);
    }
    SUBCASE("a single seed works and has zero stddev") {
        RunSpec base = quad_spec();
        base.steps = 30;
        const EnsembleResult res = run_seed_ensemble(base, 1, 1);
        REQUIRE(res.rows.size() == 1);
        for (double v : res.loss_std) CHECK_EQ(v, 0.0);
        CHECK_EQ(res.stats[0].stddev, 0.0);
    }
    SUBCASE("gradient noise spreads the ensemble") {
        RunSpec base = quad_spec();
        base.steps = 300;
        base.noise_sigma = 0.1;
        const EnsembleResult res = run_seed_ensemble(base, 3, 1);
        double max_std = 0.0;
        for (double v : res.loss_std) max_std = std::max(max_std, v);
        CHECK(max_std > 0.0);
        CHECK(res.stats[0].stddev > 0.0);
        CHECK(res.rows[0].final_loss != res.rows[1].final_loss);

        std::ostringstream curve, stats;
        write_ensemble_curve_csv(curve, res);
        write_ensemble_stats_csv(stats, res);
        CHECK(curve.str().rfind("step,time,loss_mean,loss_std,p_norm_mean,"
                                "p_norm_std\n", 0) == 0);
        CHECK(stats.str().rfind("metric,mean,stddev\n", 0) == 0);
    }
}

TEST_CASE("trajectory CSVs round-trip bitwise") {
    RunSpec spec = quad_spec();
    spec.optimizer = OptimizerKind::IkfadSplit;
    spec.hp.alpha = 1.0;
    spec.hp.rho = 0.5;
    spec.init.xi0 = {0.7};
    spec.steps = 57;
    spec.record_stride = 5;
    spec.sample_stride = 10;
    const RunResult r = run_single(spec);
    REQUIRE(r.traj.has_xi());
    REQUIRE(!r.traj.samples.empty());

    std::ostringstream os;
    write_trajectory_csv(os, r.traj);
    std::istringstream is(os.str());
    const Trajectory back = read_trajectory_csv(is);

    CHECK_EQ(back.steps, r.traj.steps);
    REQUIRE(back.times.size() == r.traj.times.size());
    for (std::size_t i = 0; i < back.times.size(); ++i) {
        CHECK_EQ(back.times[i], r.traj.times[i]);
        CHECK_EQ(back.losses[i], r.traj.losses[i]);
        CHECK_EQ(back.p_norms[i], r.traj.p_norms[i]);
        CHECK_EQ(back.xi_norms[i], r.traj.xi_norms[i]);
    }
    CHECK_EQ(back.sample_steps, r.traj.sample_steps);
    REQUIRE(back.samples.size() == r.traj.samples.size());
    for (std::size_t i = 0; i < back.samples.size(); ++i) {
        CHECK_EQ(back.samples[i].x, r.traj.samples[i].x);
        CHECK_EQ(back.samples[i].p, r.traj.samples[i].p);
        CHECK_EQ(back.samples[i].xi, r.traj.samples[i].xi);
    }

    // Second-moment optimizers round-trip their zeta column instead.
    RunSpec az = quad_spec();
    az.optimizer = OptimizerKind::AdamBaseline;
    az.hp.dt = 0.01;
    az.steps = 20;
    az.sample_stride = 4;
    const RunResult ar = run_single(az);
    CHECK(!ar.traj.has_xi());
    std::ostringstream aos;
    write_trajectory_csv(aos, ar.traj);
    std::istringstream ais(aos.str());
    const Trajectory aback = read_trajectory_csv(ais);
    CHECK(aback.xi_norms.empty());
    REQUIRE(aback.samples.size() == ar.traj.samples.size());
    for (std::size_t i = 0; i < aback.samples.size(); ++i)
        CHECK_EQ(aback.samples[i].zeta, ar.traj.samples[i].zeta);

    std::istringstream junk("nope\n1,2,3\n");
    CHECK_THROWS_AS(read_trajectory_csv(junk), std::invalid_argument);
}

TEST_CASE("summary CSV masks wall time for byte-identical re-runs") {
    RunSpec spec = quad_spec();
    spec.steps = 80;
    const RunResult a = run_single(spec);
    const RunResult b = run_single(spec);
    std::ostringstream sa, sb;
    write_summary_csv(sa, {a.summary});
    write_summary_csv(sb, {b.summary});
    CHECK_EQ(sa.str(), sb.str());
    CHECK(sa.str().rfind("spec_id,optimizer,gamma,dt,alpha,rho,c,seed,"
                         "final_loss,best_loss,kappa,r2,converged,diverged_at,"
                         "wall_ms\n", 0) == 0);
    // Trailing column is the masked wall time; the divergence step stays
    // empty on clean runs.
    CHECK(sa.str().find(",false,,0\n") != std::string::npos);

    std::ostringstream ta, tb;
    write_trajectory_csv(ta, a.traj);
    write_trajectory_csv(tb, b.traj);
    CHECK_EQ(ta.str(), tb.str());
}

}  // TEST_SUITE
