#pragma once

#include <cstdint>
#include <optional>

#include "kinopt/oracle.hpp"
#include "kinopt/trajectory.hpp"
#include "kinopt/types.hpp"

namespace kinopt {

// Total energy-like descent certificate
//   g = (f(x) - f*) + 1/2 ||p||^2 + rho/2 ||xi||^2
// with the friction term dropped when the state carries no xi. f* comes from
// the oracle's known minimizer when available; otherwise the supplied
// fallback (default 0) is used and the result is flagged approximate.
struct LyapunovValue {
    double g = 0.0;
    double potential = 0.0;  // f(x) - fstar
    double kinetic = 0.0;    // 1/2 ||p||^2
    double friction = 0.0;   // rho/2 ||xi||^2
    bool fstar_exact = true;
};

LyapunovValue lyapunov_g(const OptState& s, const GradientOracle& oracle, double rho,
                         std::optional<double> fstar_fallback = std::nullopt);

// Least-squares fit of log(loss + ||p||^2 + ||xi||^2) against time over the
// trailing tail_fraction of a trajectory: y ~ log(C) - kappa * t.
struct RateFit {
    double kappa = 0.0;      // decay rate (positive = decaying)
    double log_c = 0.0;      // intercept
    double r_squared = 0.0;  // goodness of fit
    std::size_t n_points = 0;
};

// Throws std::invalid_argument if fewer than 10 usable (strictly positive
// composite, finite) points fall in the window or tail_fraction is outside
// (0, 1].
RateFit fit_exponential_rate(const Trajectory& traj, double tail_fraction = 0.5);

// One-sided power spectrum of the trajectory's sampled positions projected on
// a direction. The projected signal is mean-removed and truncated to its
// leading power-of-two length; power is normalized so that the sum over all
// bins equals the population variance of the analyzed window (scaled by
// 1/scale^2 when a rescale was needed to avoid overflow on divergent runs).
struct SpectrumReport {
    std::vector<double> freq;     // cycles per sample, 0 .. 1/2
    std::vector<double> power;    // same length as freq
    double peak_ratio = 0.0;      // max non-DC bin / total non-DC power
    double peak_freq = 0.0;       // frequency of that bin
    double total_power = 0.0;     // sum of all bins (variance of the window)
    double scale = 1.0;           // signal was divided by this before the DFT
    std::size_t n_used = 0;       // power-of-two window length
};

// Throws std::invalid_argument with fewer than 8 samples or a direction of
// the wrong dimension / zero norm.
SpectrumReport trajectory_spectrum(const Trajectory& traj, const Vec& direction);

// Same, applied to a raw scalar signal (used by the post-hoc CSV tool).
SpectrumReport signal_spectrum(const std::vector<double>& signal);

// Geometry of a sampled path around a known minimizer.
struct PhaseMetrics {
    bool converged = false;       // final sample within tolerance of x_star
    std::uint64_t overshoot_count = 0;  // coordinate sign flips after first approach
    double path_ratio = 0.0;      // total arc length / initial distance
    double final_dist = 0.0;
};

PhaseMetrics phase_portrait_metrics(const Trajectory& traj, const Vec& x_star,
                                    double tolerance = 1e-2);

// Empirically tests the curvature lower bound
//   a (f(x) - f*) + b ||x - x*||^2  <=  (x - x*) . (grad f(x) - grad f(x*))
// at n seeded points in a radius-10 ball around the oracle's minimizer (the
// origin when none is known). Returns false on the first violated point.
bool check_strong_convexity_condition(const GradientOracle& oracle, double a,
                                      double b, std::size_t n_samples,
                                      std::uint64_t seed);

}  // namespace kinopt
