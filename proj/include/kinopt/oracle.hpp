#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "kinopt/vec.hpp"

namespace kinopt {

// A differentiable objective. Deterministic value/gradient plus a seeded
// stochastic gradient: by default the exact gradient with additive Gaussian
// noise of scale noise_sigma per coordinate; data-driven problems override
// stochastic_gradient with minibatch sampling instead.
class GradientOracle {
public:
    virtual ~GradientOracle() = default;

    virtual std::size_t dim() const = 0;
    virtual double value(const Vec& x) const = 0;
    virtual void gradient(const Vec& x, Vec& out) const = 0;

    Vec gradient(const Vec& x) const {
        Vec g(dim());
        gradient(x, g);
        return g;
    }

    // Known minimizer, when the problem has one in closed form.
    virtual std::optional<Vec> minimizer() const { return std::nullopt; }

    // (smallest, largest) curvature over the relevant region, when known.
    virtual std::optional<std::pair<double, double>> curvature_bounds() const {
        return std::nullopt;
    }

    // Unbiased gradient estimate, bit-reproducible in (seed, step).
    virtual void stochastic_gradient(const Vec& x, std::uint64_t seed,
                                     std::uint64_t step, Vec& out) const;

    double noise_sigma() const { return noise_sigma_; }
    void set_noise_sigma(double sigma) { noise_sigma_ = sigma; }
    virtual bool is_stochastic() const { return noise_sigma_ > 0.0; }

private:
    double noise_sigma_ = 0.0;
};

// Free-function form used by the optimizer loop.
inline Vec eval_stochastic_grad(const GradientOracle& oracle, const Vec& x,
                                std::uint64_t seed, std::uint64_t step) {
    Vec g(oracle.dim());
    oracle.stochastic_gradient(x, seed, step, g);
    return g;
}

}  // namespace kinopt
