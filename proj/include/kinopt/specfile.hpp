#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kinopt/types.hpp"

namespace kinopt {

enum class ProblemKind { Quadratic, Rosenbrock, ToyClassifier };

std::string to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& name);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::Quadratic;
    // quadratic
    std::size_t dim = 200;
    double min_eig = 1.0;
    double max_eig = 1e4;
    bool rotate = false;
    std::uint64_t seed = 0;
    // rosenbrock
    double a = 1.0;
    double b = 100.0;
    // toy classifier
    std::size_t n_examples = 512;
    std::size_t n_features = 10;
    std::size_t hidden = 0;
    std::size_t batch_size = 32;

    bool operator==(const ProblemSpec&) const = default;
};

enum class InitMode { Ones, Zeros, Explicit, RandomBall };

std::string to_string(InitMode m);
InitMode init_mode_from_string(const std::string& name);

struct InitSpec {
    InitMode mode = InitMode::Ones;
    Vec x0;              // Explicit mode; single entry broadcasts
    double radius = 1.0;  // RandomBall mode
    Vec p0;              // optional; single entry broadcasts; empty = zeros
    Vec xi0;             // optional; single entry broadcasts; empty = zeros
    Vec zeta0;           // optional; single entry broadcasts; empty = zeros

    bool operator==(const InitSpec&) const = default;
};

enum class GridMetric { FinalLoss, BestLoss, TestAccuracyProxy };

std::string to_string(GridMetric m);
GridMetric grid_metric_from_string(const std::string& name);

struct RunSpec {
    std::string id = "run";
    ProblemSpec problem;
    OptimizerKind optimizer = OptimizerKind::CdSplit;
    MomentumSchedule schedule;
    HyperParams hp;
    InitSpec init;
    std::uint64_t steps = 1000;
    std::uint64_t seed = 0;
    std::uint64_t record_stride = 1;
    std::uint64_t sample_stride = 0;  // 0 = no state snapshots
    double noise_sigma = 0.0;         // additive gradient noise (analytic problems)
    double converge_tol = 1e-2;

    bool operator==(const RunSpec&) const = default;
};

struct GridPart {
    std::vector<double> gammas;
    std::vector<double> dts;
    GridMetric metric = GridMetric::FinalLoss;

    bool operator==(const GridPart&) const = default;
};

struct PortraitPart {
    double x_min = -2.0, x_max = 2.0;
    double y_min = -2.0, y_max = 2.0;
    std::size_t nx = 11, ny = 11;
    double tolerance = 1e-2;

    bool operator==(const PortraitPart&) const = default;
};

struct EnsemblePart {
    std::size_t n_seeds = 8;

    bool operator==(const EnsemblePart&) const = default;
};

struct SpectrumPart {
    std::string trajectory_csv;  // path to a previously written trajectory
    std::string direction;       // "axis:<k>" or comma-separated components

    bool operator==(const SpectrumPart&) const = default;
};

// A parsed spec file: the base run plus whichever mode sections were present.
struct FullSpec {
    RunSpec run;
    bool has_grid = false;
    GridPart grid;
    bool has_portrait = false;
    PortraitPart portrait;
    bool has_ensemble = false;
    EnsemblePart ensemble;
    bool has_spectrum = false;
    SpectrumPart spectrum;

    bool operator==(const FullSpec&) const = default;
};

// Line-oriented "dotted.key = value" format; '#' starts a comment, blank
// lines are ignored. Unknown keys and malformed lines raise
// std::invalid_argument with the offending line.
FullSpec parse_spec(std::istream& is);
FullSpec parse_spec_string(const std::string& text);
FullSpec parse_spec_file(const std::string& path);

// Canonical serialization; parse_spec_string(serialize_spec(s)) == s.
std::string serialize_spec(const FullSpec& spec);

}  // namespace kinopt
