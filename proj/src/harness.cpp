#include "kinopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kinopt/optimizers.hpp"
#include "kinopt/rng.hpp"

namespace kinopt {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string cell_id(const std::string& base, const char* tag, std::size_t index,
                    std::size_t count) {
    int width = 2;
    for (std::size_t v = 100; count > v; v *= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%s%0*zu", tag, width, index);
    return base + buf;
}

Vec broadcast(const Vec& v, std::size_t n, const char* name) {
    if (v.size() == n) return v;
    if (v.size() == 1) return Vec(n, v[0]);
    throw std::invalid_argument(std::string(name) + " has dimension " +
                                std::to_string(v.size()) + ", problem needs " +
                                std::to_string(n));
}

// Runs f(0..n-1) over a small worker pool; rethrows the first exception.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    threads = std::max(1u, threads);
    if (threads == 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) f(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n) return;
            try {
                f(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::size_t>(threads, n));
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::unique_ptr<GradientOracle> make_problem(const RunSpec& spec) {
    const ProblemSpec& p = spec.problem;
    std::unique_ptr<GradientOracle> oracle;
    switch (p.kind) {
        case ProblemKind::Quadratic:
            oracle = make_log_spaced_quadratic(p.dim, p.min_eig, p.max_eig, p.seed,
                                               p.rotate);
            break;
        case ProblemKind::Rosenbrock:
            oracle = std::make_unique<RosenbrockProblem>(p.a, p.b);
            break;
        case ProblemKind::ToyClassifier:
            oracle = make_toy_classifier(p.n_examples, p.n_features, p.hidden,
                                         p.seed, p.batch_size);
            break;
    }
    if (spec.noise_sigma < 0.0)
        throw std::invalid_argument("noise_sigma must be non-negative");
    oracle->set_noise_sigma(spec.noise_sigma);
    return oracle;
}

OptState make_initial_state(const RunSpec& spec, const GradientOracle& oracle) {
    const std::size_t n = oracle.dim();
    Vec x0;
    switch (spec.init.mode) {
        case InitMode::Ones:
            x0.assign(n, 1.0);
            break;
        case InitMode::Zeros:
            x0.assign(n, 0.0);
            break;
        case InitMode::Explicit:
            if (spec.init.x0.empty())
                throw std::invalid_argument("init.mode = explicit needs init.x0");
            x0 = broadcast(spec.init.x0, n, "init.x0");
            break;
        case InitMode::RandomBall: {
            if (!(spec.init.radius > 0.0))
                throw std::invalid_argument("init.radius must be positive");
            Vec center(n, 0.0);
            if (auto xmin = oracle.minimizer()) center = *xmin;
            Rng rng(mix_seeds(spec.seed ^ 0x5EED1234ABCDEFULL, 7777));
            x0.resize(n);
            double nrm = 0.0;
            for (double& v : x0) {
                v = rng.gaussian();
                nrm += v * v;
            }
            nrm = std::sqrt(nrm);
            const double r = spec.init.radius *
                             std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
            for (std::size_t i = 0; i < n; ++i)
                x0[i] = center[i] + r * x0[i] / nrm;
            break;
        }
    }
    const Vec p0 = spec.init.p0.empty() ? Vec(n, 0.0)
                                        : broadcast(spec.init.p0, n, "init.p0");
    std::optional<Vec> xi0, zeta0;
    if (!spec.init.xi0.empty()) xi0 = broadcast(spec.init.xi0, n, "init.xi0");
    if (!spec.init.zeta0.empty())
        zeta0 = broadcast(spec.init.zeta0, n, "init.zeta0");
    return init_state(spec.optimizer, x0, p0, xi0, zeta0);
}

RunResult run_single(const RunSpec& spec, const GradientOracle& oracle) {
    validate_hyperparams(spec.optimizer, spec.hp, spec.schedule);
    if (spec.record_stride == 0)
        throw std::invalid_argument("record_stride must be positive");
    if (spec.optimizer == OptimizerKind::CdEuler &&
        spec.hp.gamma * spec.hp.dt >= 1.0)
        std::fprintf(stderr,
                     "warning: cd_euler with gamma*dt = %g >= 1 overdamps "
                     "unstably; expect divergence\n",
                     spec.hp.gamma * spec.hp.dt);

    RunResult res;
    OptState s = make_initial_state(spec, oracle);
    const bool track_xi = uses_xi(spec.optimizer);
    Trajectory& traj = res.traj;

    // Losses are recorded relative to the optimum when it is known.
    double fstar = 0.0;
    if (auto xm = oracle.minimizer()) fstar = oracle.value(*xm);

    auto record = [&](const OptState& st, double loss) {
        traj.steps.push_back(st.step_count);
        traj.times.push_back(static_cast<double>(st.step_count) * spec.hp.dt);
        traj.losses.push_back(loss);
        traj.p_norms.push_back(norm2(st.p));
        if (track_xi) traj.xi_norms.push_back(norm2(st.xi));
    };
    auto sample = [&](const OptState& st) {
        traj.sample_steps.push_back(st.step_count);
        traj.samples.push_back(st);
    };

    double loss = oracle.value(s.x) - fstar;
    if (!std::isfinite(loss) || !s.finite())
        throw std::invalid_argument("initial state or loss is not finite");
    record(s, loss);
    if (spec.sample_stride > 0) sample(s);

    double best = loss;
    double final_loss = loss;
    std::uint64_t last_recorded = 0;
    OptState last_finite = s;
    Vec grad(oracle.dim());

    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t n = 0; n < spec.steps; ++n) {
        oracle.stochastic_gradient(s.x, spec.seed, s.step_count, grad);
        step_optimizer(spec.optimizer, s, grad, spec.hp, spec.schedule);
        loss = oracle.value(s.x) - fstar;
        if (!s.finite() || !std::isfinite(loss)) {
            res.diverged = true;
            res.summary.diverged_at = static_cast<std::int64_t>(s.step_count);
            s = last_finite;
            break;
        }
        last_finite = s;
        final_loss = loss;
        best = std::min(best, loss);
        const bool sample_hit =
            spec.sample_stride > 0 && s.step_count % spec.sample_stride == 0;
        // sampled steps also get a scalar row so the CSV stays rectangular
        if (s.step_count % spec.record_stride == 0 || sample_hit) {
            record(s, loss);
            last_recorded = s.step_count;
        }
        if (sample_hit) sample(s);
    }
    const auto t1 = std::chrono::steady_clock::now();

    if (last_recorded != s.step_count) record(s, final_loss);
    res.final_state = s;

    SummaryRow& row = res.summary;
    row.spec_id = spec.id;
    row.optimizer = to_string(spec.optimizer);
    row.gamma = spec.hp.gamma;
    row.dt = spec.hp.dt;
    row.alpha = spec.hp.alpha;
    row.rho = spec.hp.rho;
    row.c = spec.hp.c;
    row.seed = spec.seed;
    row.final_loss = final_loss;
    row.best_loss = best;
    try {
        const RateFit fit = fit_exponential_rate(traj, 0.5);
        row.kappa = fit.kappa;
        row.r2 = fit.r_squared;
    } catch (const std::invalid_argument&) {
        row.kappa = kNan;
        row.r2 = kNan;
    }
    bool converged = false;
    if (!res.diverged) {
        if (auto xmin = oracle.minimizer())
            converged = dist2(s.x, *xmin) < spec.converge_tol;
        else
            converged = final_loss < spec.converge_tol;
    }
    row.converged = converged ? "true" : "false";
    row.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 -
                                                                              t0)
            .count();
    return res;
}

RunResult run_single(const RunSpec& spec) {
    const auto oracle = make_problem(spec);
    return run_single(spec, *oracle);
}

GridResult run_gamma_dt_grid(const RunSpec& base, const GridPart& grid,
                             unsigned threads) {
    if (grid.gammas.empty() || grid.dts.empty())
        throw std::invalid_argument("grid needs non-empty gamma and dt value lists");
    if (grid.metric == GridMetric::TestAccuracyProxy &&
        base.problem.kind != ProblemKind::ToyClassifier)
        throw std::invalid_argument(
            "grid metric test_accuracy_proxy needs the toy classifier problem");

    const auto oracle = make_problem(base);
    const auto* toy = dynamic_cast<const ToyClassifierProblem*>(oracle.get());

    const std::size_t ng = grid.gammas.size(), nd = grid.dts.size();
    const std::size_t n_cells = ng * nd;
    GridResult out;
    out.rows.resize(n_cells);
    out.cells.resize(n_cells);

    parallel_for(n_cells, threads, [&](std::size_t k) {
        const std::size_t gi = k / nd, di = k % nd;
        RunSpec cs = base;
        cs.id = cell_id(cell_id(base.id, "g", gi, ng), "d", di, nd);
        cs.seed = mix_seeds(base.seed, k);
        cs.hp.gamma = grid.gammas[gi];
        cs.hp.dt = grid.dts[di];

        GridCell& cell = out.cells[k];
        cell.spec_id = cs.id;
        cell.gamma_index = gi;
        cell.dt_index = di;
        cell.gamma = cs.hp.gamma;
        cell.dt = cs.hp.dt;

        SummaryRow& row = out.rows[k];
        try {
            if (base.optimizer == OptimizerKind::MsgdEuler)
                cs.hp.mu = mu_gamma_map(cs.hp.gamma, cs.hp.dt);
            const RunResult r = run_single(cs, *oracle);
            row = r.summary;
            cell.status = r.diverged ? "diverged" : "ok";
            switch (grid.metric) {
                case GridMetric::FinalLoss:
                    cell.metric_value = r.summary.final_loss;
                    break;
                case GridMetric::BestLoss:
                    cell.metric_value = r.summary.best_loss;
                    break;
                case GridMetric::TestAccuracyProxy:
                    cell.metric_value = toy->heldout_accuracy(r.final_state.x);
                    break;
            }
        } catch (const std::invalid_argument& e) {
            cell.status = "invalid";
            cell.metric_value = kNan;
            cell.note = e.what();
            std::replace(cell.note.begin(), cell.note.end(), ',', ';');
            row.spec_id = cs.id;
            row.optimizer = to_string(base.optimizer);
            row.gamma = cs.hp.gamma;
            row.dt = cs.hp.dt;
            row.alpha = cs.hp.alpha;
            row.rho = cs.hp.rho;
            row.c = cs.hp.c;
            row.seed = cs.seed;
            row.final_loss = kNan;
            row.best_loss = kNan;
            row.kappa = kNan;
            row.r2 = kNan;
            row.converged = "invalid";
        }
    });

    std::sort(out.rows.begin(), out.rows.end(),
              [](const SummaryRow& a, const SummaryRow& b) {
                  return a.spec_id < b.spec_id;
              });
    return out;
}

PortraitResult run_phase_portrait(const RunSpec& base, const PortraitPart& part,
                                  unsigned threads) {
    const auto oracle = make_problem(base);
    if (oracle->dim() != 2)
        throw std::invalid_argument("phase portraits need a 2-d problem");
    const auto xmin = oracle->minimizer();
    if (!xmin)
        throw std::invalid_argument(
            "phase portraits need a problem with a known minimizer");
    if (part.nx == 0 || part.ny == 0)
        throw std::invalid_argument("portrait grid must be at least 1x1");

    const std::size_t n_cells = part.nx * part.ny;
    PortraitResult out;
    out.rows.resize(n_cells);
    out.cells.resize(n_cells);

    parallel_for(n_cells, threads, [&](std::size_t k) {
        const std::size_t ix = k / part.ny, iy = k % part.ny;
        const double fx = part.nx == 1 ? 0.0
                                       : static_cast<double>(ix) /
                                             static_cast<double>(part.nx - 1);
        const double fy = part.ny == 1 ? 0.0
                                       : static_cast<double>(iy) /
                                             static_cast<double>(part.ny - 1);
        RunSpec cs = base;
        cs.id = cell_id(cell_id(base.id, "x", ix, part.nx), "y", iy, part.ny);
        cs.seed = mix_seeds(base.seed, k);
        cs.init.mode = InitMode::Explicit;
        cs.init.x0 = {part.x_min + fx * (part.x_max - part.x_min),
                      part.y_min + fy * (part.y_max - part.y_min)};
        // Momentum and auxiliaries stay at the base spec's values; when the
        // base spec leaves them unset they start at zero. An all-zero xi pins
        // the adaptive friction at zero forever (the discrete update cannot
        // leave it), so runs that want it active must set init.xi0.
        if (cs.sample_stride == 0)
            cs.sample_stride = std::max<std::uint64_t>(1, cs.steps / 20000);

        const RunResult r = run_single(cs, *oracle);
        out.rows[k] = r.summary;

        // A cell counts as arrived once it first comes within the part
        // tolerance of the minimizer; the polyline and metrics stop there.
        // Without the cut, any underdamped method keeps crossing the
        // minimizer at amplitudes far below tolerance, and those
        // sample-resolution crossings would dominate the overshoot count.
        Trajectory traj = r.traj;
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < traj.samples[i].x.size(); ++j) {
                const double d = traj.samples[i].x[j] - (*xmin)[j];
                d2 += d * d;
            }
            if (d2 < part.tolerance * part.tolerance) {
                traj.samples.resize(i + 1);
                break;
            }
        }

        PortraitCell& cell = out.cells[k];
        cell.spec_id = cs.id;
        cell.ix = ix;
        cell.iy = iy;
        cell.x0 = cs.init.x0;
        cell.diverged_at = r.summary.diverged_at;
        cell.metrics = phase_portrait_metrics(traj, *xmin, part.tolerance);
        const std::size_t n_samp = traj.samples.size();
        const std::size_t stride = n_samp > 256 ? (n_samp + 255) / 256 : 1;
        for (std::size_t i = 0; i < n_samp; i += stride)
            cell.path.push_back(traj.samples[i].x);
        if (n_samp > 1 && (n_samp - 1) % stride != 0)
            cell.path.push_back(traj.samples.back().x);
    });

    std::sort(out.rows.begin(), out.rows.end(),
              [](const SummaryRow& a, const SummaryRow& b) {
                  return a.spec_id < b.spec_id;
              });
    return out;
}

EnsembleResult run_seed_ensemble(const RunSpec& base, std::size_t n_seeds,
                                 unsigned threads) {
    if (n_seeds == 0)
        throw std::invalid_argument("seed ensemble needs at least 1 seed");
    // A deterministic problem with a fixed x0 is allowed: every seed then
    // produces the identical run and all stddevs come out exactly zero.
    const auto oracle = make_problem(base);

    std::vector<RunResult> runs(n_seeds);
    EnsembleResult out;
    out.rows.resize(n_seeds);
    parallel_for(n_seeds, threads, [&](std::size_t k) {
        RunSpec cs = base;
        cs.id = cell_id(base.id, "s", k, n_seeds);
        cs.seed = mix_seeds(base.seed, k);
        runs[k] = run_single(cs, *oracle);
        out.rows[k] = runs[k].summary;
    });

    std::size_t min_rows = runs.front().traj.rows();
    for (const auto& r : runs) {
        min_rows = std::min(min_rows, r.traj.rows());
        if (r.diverged) ++out.n_diverged;
    }
    out.steps.assign(runs.front().traj.steps.begin(),
                     runs.front().traj.steps.begin() + min_rows);
    out.times.assign(runs.front().traj.times.begin(),
                     runs.front().traj.times.begin() + min_rows);
    const double n = static_cast<double>(n_seeds);
    auto curve = [&](auto getter, std::vector<double>& mean_out,
                     std::vector<double>& std_out) {
        mean_out.resize(min_rows);
        std_out.resize(min_rows);
        for (std::size_t i = 0; i < min_rows; ++i) {
            // Accumulate relative to the first run's value so identical runs
            // produce an exactly-zero spread instead of accumulation noise.
            const double base_v = getter(runs.front().traj, i);
            double m = 0.0;
            for (const auto& r : runs) m += getter(r.traj, i) - base_v;
            m = base_v + m / n;
            double v = 0.0;
            for (const auto& r : runs) {
                const double d = getter(r.traj, i) - m;
                v += d * d;
            }
            mean_out[i] = m;
            std_out[i] = n_seeds > 1 ? std::sqrt(v / (n - 1.0)) : 0.0;
        }
    };
    curve([](const Trajectory& t, std::size_t i) { return t.losses[i]; },
          out.loss_mean, out.loss_std);
    curve([](const Trajectory& t, std::size_t i) { return t.p_norms[i]; },
          out.p_norm_mean, out.p_norm_std);

    auto stat = [&](const char* name, auto getter) {
        double base_v = 0.0;
        double m = 0.0;
        std::size_t cnt = 0;
        for (const auto& row : out.rows) {
            const double v = getter(row);
            if (std::isfinite(v)) {
                if (cnt == 0) base_v = v;
                m += v - base_v;
                ++cnt;
            }
        }
        EnsembleStat st;
        st.metric = name;
        if (cnt == 0) {
            st.mean = kNan;
            st.stddev = kNan;
        } else {
            m = base_v + m / static_cast<double>(cnt);
            double v = 0.0;
            for (const auto& row : out.rows) {
                const double x = getter(row);
                if (std::isfinite(x)) {
                    const double d = x - m;
                    v += d * d;
                }
            }
            st.mean = m;
            st.stddev = cnt > 1 ? std::sqrt(v / static_cast<double>(cnt - 1)) : 0.0;
        }
        out.stats.push_back(st);
    };
    stat("final_loss", [](const SummaryRow& r) { return r.final_loss; });
    stat("best_loss", [](const SummaryRow& r) { return r.best_loss; });
    stat("kappa", [](const SummaryRow& r) { return r.kappa; });
    stat("r2", [](const SummaryRow& r) { return r.r2; });
    return out;
}

// ---- serialization ----

namespace {

void write_state_columns(std::ostream& os, const OptState& st) {
    for (double v : st.x) os << ',' << format_double(v);
    for (double v : st.p) os << ',' << format_double(v);
    for (double v : st.xi) os << ',' << format_double(v);
    for (double v : st.zeta) os << ',' << format_double(v);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "step,time,loss,p_norm,xi_norm";
    std::size_t dim = 0;
    bool samp_xi = false, samp_zeta = false;
    if (!traj.samples.empty()) {
        const OptState& first = traj.samples.front();
        dim = first.x.size();
        samp_xi = first.has_xi();
        samp_zeta = first.has_zeta();
        for (std::size_t i = 0; i < dim; ++i) os << ",x" << i;
        for (std::size_t i = 0; i < dim; ++i) os << ",p" << i;
        if (samp_xi)
            for (std::size_t i = 0; i < dim; ++i) os << ",xi" << i;
        if (samp_zeta)
            for (std::size_t i = 0; i < dim; ++i) os << ",zeta" << i;
    }
    os << '\n';
    const std::size_t state_cols =
        dim * (2 + (samp_xi ? 1 : 0) + (samp_zeta ? 1 : 0));
    std::size_t si = 0;  // next sample to emit
    for (std::size_t i = 0; i < traj.rows(); ++i) {
        os << traj.steps[i] << ',' << format_double(traj.times[i]) << ','
           << format_double(traj.losses[i]) << ','
           << format_double(traj.p_norms[i]) << ',';
        if (traj.has_xi()) os << format_double(traj.xi_norms[i]);
        while (si < traj.sample_steps.size() && traj.sample_steps[si] < traj.steps[i])
            ++si;
        if (si < traj.sample_steps.size() && traj.sample_steps[si] == traj.steps[i]) {
            write_state_columns(os, traj.samples[si]);
            ++si;
        } else {
            for (std::size_t c = 0; c < state_cols; ++c) os << ',';
        }
        os << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("empty trajectory file");
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
    }
    if (cols.size() < 5 || cols[0] != "step" || cols[1] != "time" ||
        cols[2] != "loss" || cols[3] != "p_norm" || cols[4] != "xi_norm")
        throw std::invalid_argument(
            "trajectory header must start with step,time,loss,p_norm,xi_norm");
    std::size_t dim = 0, xi_cols = 0, zeta_cols = 0;
    for (std::size_t c = 5; c < cols.size(); ++c) {
        if (cols[c].rfind("x", 0) == 0 && cols[c].rfind("xi", 0) != 0) ++dim;
        else if (cols[c].rfind("xi", 0) == 0) ++xi_cols;
        else if (cols[c].rfind("zeta", 0) == 0) ++zeta_cols;
    }

    Trajectory traj;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        cells.resize(cols.size());  // trailing empties
        traj.steps.push_back(std::stoull(cells[0]));
        traj.times.push_back(std::stod(cells[1]));
        traj.losses.push_back(std::stod(cells[2]));
        traj.p_norms.push_back(std::stod(cells[3]));
        if (!cells[4].empty()) traj.xi_norms.push_back(std::stod(cells[4]));
        if (dim > 0 && !cells[5].empty()) {
            OptState st;
            st.step_count = traj.steps.back();
            std::size_t c = 5;
            st.x.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) st.x[i] = std::stod(cells[c++]);
            st.p.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) st.p[i] = std::stod(cells[c++]);
            if (xi_cols) {
                st.xi.resize(dim);
                for (std::size_t i = 0; i < dim; ++i)
                    st.xi[i] = std::stod(cells[c++]);
            }
            if (zeta_cols) {
                st.zeta.resize(dim);
                for (std::size_t i = 0; i < dim; ++i)
                    st.zeta[i] = std::stod(cells[c++]);
            }
            traj.sample_steps.push_back(st.step_count);
            traj.samples.push_back(std::move(st));
        }
    }
    return traj;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "spec_id,optimizer,gamma,dt,alpha,rho,c,seed,final_loss,best_loss,"
          "kappa,r2,converged,diverged_at,wall_ms\n";
    for (const SummaryRow& r : rows) {
        os << r.spec_id << ',' << r.optimizer << ',' << format_double(r.gamma)
           << ',' << format_double(r.dt) << ',' << format_double(r.alpha) << ','
           << format_double(r.rho) << ',' << format_double(r.c) << ',' << r.seed
           << ',' << format_double(r.final_loss) << ','
           << format_double(r.best_loss) << ',' << format_double(r.kappa) << ','
           << format_double(r.r2) << ',' << r.converged << ',';
        if (r.diverged_at >= 0) os << r.diverged_at;
        // wall_ms is masked to keep re-runs of the same spec byte-identical;
        // the measured time stays available on the in-memory row.
        os << ",0\n";
    }
}

void write_grid_csv(std::ostream& os, const GridResult& grid) {
    os << "spec_id,gamma_index,dt_index,gamma,dt,status,metric_value,note\n";
    for (const GridCell& c : grid.cells) {
        os << c.spec_id << ',' << c.gamma_index << ',' << c.dt_index << ','
           << format_double(c.gamma) << ',' << format_double(c.dt) << ','
           << c.status << ',' << format_double(c.metric_value) << ',' << c.note
           << '\n';
    }
}

void write_portrait_csv(std::ostream& os, const PortraitResult& res) {
    os << "spec_id,x0,y0,converged,overshoot_count,path_ratio,final_dist,"
          "diverged_at\n";
    for (const PortraitCell& c : res.cells) {
        os << c.spec_id << ',' << format_double(c.x0[0]) << ','
           << format_double(c.x0[1]) << ',' << (c.metrics.converged ? "true" : "false")
           << ',' << c.metrics.overshoot_count << ','
           << format_double(c.metrics.path_ratio) << ','
           << format_double(c.metrics.final_dist) << ',';
        if (c.diverged_at >= 0) os << c.diverged_at;
        os << '\n';
    }
}

void write_portrait_paths_csv(std::ostream& os, const PortraitResult& res) {
    os << "spec_id,point,x0,x1\n";
    for (const PortraitCell& c : res.cells)
        for (std::size_t i = 0; i < c.path.size(); ++i)
            os << c.spec_id << ',' << i << ',' << format_double(c.path[i][0])
               << ',' << format_double(c.path[i][1]) << '\n';
}

void write_ensemble_curve_csv(std::ostream& os, const EnsembleResult& res) {
    os << "step,time,loss_mean,loss_std,p_norm_mean,p_norm_std\n";
    for (std::size_t i = 0; i < res.steps.size(); ++i)
        os << res.steps[i] << ',' << format_double(res.times[i]) << ','
           << format_double(res.loss_mean[i]) << ','
           << format_double(res.loss_std[i]) << ','
           << format_double(res.p_norm_mean[i]) << ','
           << format_double(res.p_norm_std[i]) << '\n';
}

void write_ensemble_stats_csv(std::ostream& os, const EnsembleResult& res) {
    os << "metric,mean,stddev\n";
    for (const EnsembleStat& s : res.stats)
        os << s.metric << ',' << format_double(s.mean) << ','
           << format_double(s.stddev) << '\n';
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& rep) {
    os << "frequency,power\n";
    for (std::size_t i = 0; i < rep.freq.size(); ++i)
        os << format_double(rep.freq[i]) << ',' << format_double(rep.power[i])
           << '\n';
}

}  // namespace kinopt
