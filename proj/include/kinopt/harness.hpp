#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "kinopt/analysis.hpp"
#include "kinopt/problems.hpp"
#include "kinopt/specfile.hpp"
#include "kinopt/trajectory.hpp"

namespace kinopt {

// One row of the canonical results table (fixed column order):
// spec_id, optimizer, gamma, dt, alpha, rho, c, seed, final_loss, best_loss,
// kappa, r2, converged, diverged_at, wall_ms
struct SummaryRow {
    std::string spec_id;
    std::string optimizer;
    double gamma = 0.0;
    double dt = 0.0;
    double alpha = 0.0;
    double rho = 0.0;
    double c = 0.0;
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    double best_loss = 0.0;
    double kappa = 0.0;
    double r2 = 0.0;
    std::string converged = "false";  // true | false | invalid
    std::int64_t diverged_at = -1;    // 1-based step of first non-finite state
    double wall_ms = 0.0;
};

struct RunResult {
    Trajectory traj;
    OptState final_state;
    SummaryRow summary;
    bool diverged = false;
};

// Builds the oracle a spec describes (noise_sigma applied for analytic
// problems; the toy classifier is inherently stochastic via minibatches).
std::unique_ptr<GradientOracle> make_problem(const RunSpec& spec);

// Resolves the initial state for the spec's optimizer and problem.
OptState make_initial_state(const RunSpec& spec, const GradientOracle& oracle);

// Runs one optimizer trajectory. steps == 0 yields just the initial record.
// Divergence (non-finite state or loss) stops the run; the last finite state
// and a partial trajectory are kept and flagged.
RunResult run_single(const RunSpec& spec, const GradientOracle& oracle);
RunResult run_single(const RunSpec& spec);

struct GridCell {
    std::string spec_id;
    std::size_t gamma_index = 0, dt_index = 0;
    double gamma = 0.0, dt = 0.0;
    std::string status;  // ok | diverged | invalid
    double metric_value = 0.0;
    std::string note;  // why invalid, when it is
};

struct GridResult {
    std::vector<SummaryRow> rows;  // sorted by spec_id
    std::vector<GridCell> cells;   // row-major: gamma outer, dt inner
};

// Full Cartesian sweep. Momentum-SGD cells derive mu from (gamma, dt) via
// mu_gamma_map and become status "invalid" when the map has no solution;
// diverged cells are recorded, never dropped. Cell seeds are
// mix_seeds(base seed, cell index).
GridResult run_gamma_dt_grid(const RunSpec& base, const GridPart& grid,
                             unsigned threads = 1);

struct PortraitCell {
    std::string spec_id;
    std::size_t ix = 0, iy = 0;
    Vec x0;
    PhaseMetrics metrics;
    std::int64_t diverged_at = -1;
    std::vector<Vec> path;  // decimated sampled positions
};

struct PortraitResult {
    std::vector<SummaryRow> rows;
    std::vector<PortraitCell> cells;
};

// Grid of initial positions on a 2-d problem, zero initial momentum and
// auxiliaries, shared hyperparameters.
PortraitResult run_phase_portrait(const RunSpec& base, const PortraitPart& part,
                                  unsigned threads = 1);

struct EnsembleStat {
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
};

struct EnsembleResult {
    std::vector<SummaryRow> rows;       // one per seed
    std::vector<std::uint64_t> steps;   // common recording grid
    std::vector<double> times;
    std::vector<double> loss_mean, loss_std;
    std::vector<double> p_norm_mean, p_norm_std;
    std::vector<EnsembleStat> stats;
    std::size_t n_diverged = 0;
};

// Repeats the spec's run over n_seeds derived seeds (n_seeds >= 1). With one
// seed, or a deterministic problem and fixed x0, every aggregate stddev is
// exactly zero.
EnsembleResult run_seed_ensemble(const RunSpec& base, std::size_t n_seeds,
                                 unsigned threads = 1);

// ---- serialization ----

// step, time, loss, p_norm, xi_norm, then x/p/xi/zeta component columns on
// rows where a state snapshot was taken.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Reads back a trajectory CSV (scalar columns always; snapshot columns when
// present). Used by the post-hoc spectrum tool.
Trajectory read_trajectory_csv(std::istream& is);

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

void write_grid_csv(std::ostream& os, const GridResult& grid);
void write_portrait_csv(std::ostream& os, const PortraitResult& res);
void write_portrait_paths_csv(std::ostream& os, const PortraitResult& res);
void write_ensemble_curve_csv(std::ostream& os, const EnsembleResult& res);
void write_ensemble_stats_csv(std::ostream& os, const EnsembleResult& res);
void write_spectrum_csv(std::ostream& os, const SpectrumReport& rep);

// %.17g round-trip-exact float formatting used by every writer.
std::string format_double(double v);

}  // namespace kinopt
