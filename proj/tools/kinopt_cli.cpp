// Command-line front end for the kinetic-optimizer benchmark library:
// single runs, gamma/dt grids, phase portraits, seed ensembles, and post-hoc
// spectrum analysis of recorded trajectories.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "kinopt/harness.hpp"
#include "kinopt/optimizers.hpp"

namespace fs = std::filesystem;
using namespace kinopt;

namespace {

struct CommonArgs {
    std::string spec_path;
    std::string out_dir = ".";
    long long seed = 0;
    bool seed_set = false;
    unsigned threads = 1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--spec", args.spec_path, "spec file (key = value lines)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (created if missing)");
    sub->add_option("--seed", args.seed, "override run.seed from the spec")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->add_option("--threads", args.threads, "worker threads for cell sweeps");
}

FullSpec load_spec(const CommonArgs& args) {
    FullSpec spec = parse_spec_file(args.spec_path);
    if (args.seed_set) spec.run.seed = static_cast<std::uint64_t>(args.seed);
    fs::create_directories(args.out_dir);
    return spec;
}

std::ofstream open_out(const CommonArgs& args, const std::string& name) {
    const fs::path p = fs::path(args.out_dir) / name;
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

Vec parse_direction(const std::string& text, std::size_t dim) {
    if (text.rfind("axis:", 0) == 0) {
        const std::size_t k = std::stoul(text.substr(5));
        if (k >= dim)
            throw std::invalid_argument("spectrum.direction axis " +
                                        std::to_string(k) + " out of range for dim " +
                                        std::to_string(dim));
        Vec v(dim, 0.0);
        v[k] = 1.0;
        return v;
    }
    Vec v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != dim)
        throw std::invalid_argument("spectrum.direction has " +
                                    std::to_string(v.size()) +
                                    " components, trajectory has dim " +
                                    std::to_string(dim));
    return v;
}

int cmd_run(const CommonArgs& args) {
    const FullSpec spec = load_spec(args);
    const RunResult res = run_single(spec.run);
    {
        auto f = open_out(args, "trajectory.csv");
        write_trajectory_csv(f, res.traj);
    }
    {
        auto f = open_out(args, "summary.csv");
        write_summary_csv(f, {res.summary});
    }
    std::cout << "run " << res.summary.spec_id << ": optimizer "
              << res.summary.optimizer << ", " << res.final_state.step_count
              << " steps\n"
              << "  final_loss = " << format_double(res.summary.final_loss)
              << "\n  best_loss  = " << format_double(res.summary.best_loss)
              << "\n  kappa      = " << format_double(res.summary.kappa)
              << " (r2 = " << format_double(res.summary.r2) << ")\n"
              << "  converged  = " << res.summary.converged << '\n';
    if (res.diverged) {
        std::cout << "  DIVERGED at step " << res.summary.diverged_at << '\n';
        return 2;
    }
    return 0;
}

int cmd_grid(const CommonArgs& args) {
    const FullSpec spec = load_spec(args);
    if (!spec.has_grid)
        throw std::invalid_argument("spec has no grid.* section");
    const GridResult res = run_gamma_dt_grid(spec.run, spec.grid, args.threads);
    {
        auto f = open_out(args, "summary.csv");
        write_summary_csv(f, res.rows);
    }
    {
        auto f = open_out(args, "grid.csv");
        write_grid_csv(f, res);
    }
    std::size_t ok = 0, diverged = 0, invalid = 0;
    for (const auto& c : res.cells) {
        if (c.status == "ok") ++ok;
        else if (c.status == "diverged") ++diverged;
        else ++invalid;
    }
    std::cout << "grid " << spec.run.id << ": " << res.cells.size() << " cells ("
              << ok << " ok, " << diverged << " diverged, " << invalid
              << " invalid)\n";
    return 0;
}

int cmd_portrait(const CommonArgs& args) {
    const FullSpec spec = load_spec(args);
    if (!spec.has_portrait)
        throw std::invalid_argument("spec has no portrait.* section");
    const PortraitResult res =
        run_phase_portrait(spec.run, spec.portrait, args.threads);
    {
        auto f = open_out(args, "summary.csv");
        write_summary_csv(f, res.rows);
    }
    {
        auto f = open_out(args, "portrait_metrics.csv");
        write_portrait_csv(f, res);
    }
    {
        auto f = open_out(args, "portrait_paths.csv");
        write_portrait_paths_csv(f, res);
    }
    std::size_t converged = 0;
    for (const auto& c : res.cells)
        if (c.metrics.converged) ++converged;
    std::cout << "portrait " << spec.run.id << ": " << converged << '/'
              << res.cells.size() << " cells converged\n";
    return 0;
}

int cmd_ensemble(const CommonArgs& args) {
    const FullSpec spec = load_spec(args);
    if (!spec.has_ensemble)
        throw std::invalid_argument("spec has no ensemble.* section");
    const EnsembleResult res =
        run_seed_ensemble(spec.run, spec.ensemble.n_seeds, args.threads);
    {
        auto f = open_out(args, "summary.csv");
        write_summary_csv(f, res.rows);
    }
    {
        auto f = open_out(args, "ensemble_curve.csv");
        write_ensemble_curve_csv(f, res);
    }
    {
        auto f = open_out(args, "ensemble_stats.csv");
        write_ensemble_stats_csv(f, res);
    }
    std::cout << "ensemble " << spec.run.id << ": " << res.rows.size()
              << " seeds, " << res.n_diverged << " diverged\n";
    for (const auto& s : res.stats)
        std::cout << "  " << s.metric << " = " << format_double(s.mean) << " +- "
                  << format_double(s.stddev) << '\n';
    return 0;
}

int cmd_spectrum(const CommonArgs& args) {
    const FullSpec spec = load_spec(args);
    if (!spec.has_spectrum || spec.spectrum.trajectory_csv.empty())
        throw std::invalid_argument(
            "spec needs spectrum.trajectory pointing at a trajectory CSV");
    std::ifstream f(spec.spectrum.trajectory_csv);
    if (!f)
        throw std::runtime_error("cannot open trajectory: " +
                                 spec.spectrum.trajectory_csv);
    const Trajectory traj = read_trajectory_csv(f);
    if (traj.samples.empty())
        throw std::invalid_argument(
            "trajectory has no state snapshot columns; rerun with "
            "run.sample_stride > 0");
    const std::size_t dim = traj.samples.front().x.size();
    const std::string dir_text =
        spec.spectrum.direction.empty() ? "axis:0" : spec.spectrum.direction;
    const Vec direction = parse_direction(dir_text, dim);
    const SpectrumReport rep = trajectory_spectrum(traj, direction);
    {
        auto out = open_out(args, "spectrum.csv");
        write_spectrum_csv(out, rep);
    }
    {
        auto out = open_out(args, "spectrum_stats.csv");
        out << "metric,value\n";
        out << "peak_ratio," << format_double(rep.peak_ratio) << '\n';
        out << "peak_freq," << format_double(rep.peak_freq) << '\n';
        out << "total_power," << format_double(rep.total_power) << '\n';
        out << "scale," << format_double(rep.scale) << '\n';
        out << "n_used," << rep.n_used << '\n';
    }
    std::cout << "spectrum over " << rep.n_used << " samples: peak_ratio = "
              << format_double(rep.peak_ratio) << " at frequency "
              << format_double(rep.peak_freq) << " cycles/sample\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinetic-energy-regulated optimizer benchmark harness"};
    app.require_subcommand(1);

    CommonArgs run_args, grid_args, portrait_args, ensemble_args, spectrum_args;
    auto* run_cmd = app.add_subcommand("run", "single optimizer trajectory");
    add_common(run_cmd, run_args);
    auto* grid_cmd = app.add_subcommand("grid", "gamma x dt sweep");
    add_common(grid_cmd, grid_args);
    auto* portrait_cmd =
        app.add_subcommand("portrait", "phase portrait over initial positions");
    add_common(portrait_cmd, portrait_args);
    auto* ensemble_cmd =
        app.add_subcommand("ensemble", "repeated runs over derived seeds");
    add_common(ensemble_cmd, ensemble_args);
    auto* spectrum_cmd = app.add_subcommand(
        "spectrum", "power spectrum of a recorded trajectory CSV");
    add_common(spectrum_cmd, spectrum_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (grid_cmd->parsed()) return cmd_grid(grid_args);
        if (portrait_cmd->parsed()) return cmd_portrait(portrait_args);
        if (ensemble_cmd->parsed()) return cmd_ensemble(ensemble_args);
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
