#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <utility>

#include "kinopt/oracle.hpp"
#include "kinopt/rng.hpp"

namespace kinopt {

// f(x) = 1/2 x^T A x with A = Q diag(lambda) Q^T. Eigenvalues are laid out
// log-uniformly (deterministically) between min_eig and max_eig inclusive;
// Q defaults to the identity and can be a seeded random rotation.
class QuadraticProblem : public GradientOracle {
public:
    // Axis-aligned spectrum.
    QuadraticProblem(std::size_t dim, double min_eig, double max_eig);
    // Rotated spectrum (Haar-ish rotation from Gram-Schmidt on a Gaussian
    // matrix, seeded).
    QuadraticProblem(std::size_t dim, double min_eig, double max_eig,
                     std::uint64_t rotation_seed);

    std::size_t dim() const override { return n_; }
    double value(const Vec& x) const override;
    void gradient(const Vec& x, Vec& out) const override;
    std::optional<Vec> minimizer() const override;
    std::optional<std::pair<double, double>> curvature_bounds() const override;

    const Vec& eigenvalues() const { return lambda_; }
    bool rotated() const { return !q_.empty(); }
    // Unit eigenvector of the largest eigenvalue.
    Vec top_eigen_direction() const;

private:
    std::size_t n_;
    Vec lambda_;  // ascending
    Vec q_;       // dim x dim, column j = eigenvector j (row-major), empty if identity
};

// The 200-dimensional ill-conditioned benchmark quadratic: eigenvalues
// log-spaced over [min_eig, max_eig], optionally rotated.
std::unique_ptr<QuadraticProblem> make_log_spaced_quadratic(
    std::size_t dim = 200, double min_eig = 1.0, double max_eig = 1e4,
    std::uint64_t seed = 0, bool rotate = false);

// The classic banana-valley function
//   f(x, y) = (a - x)^2 + b (y - x^2)^2, minimum at (a, a^2).
class RosenbrockProblem : public GradientOracle {
public:
    explicit RosenbrockProblem(double a = 1.0, double b = 100.0) : a_(a), b_(b) {}

    std::size_t dim() const override { return 2; }
    double value(const Vec& x) const override;
    void gradient(const Vec& x, Vec& out) const override;
    std::optional<Vec> minimizer() const override;

    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_, b_;
};

// Value and gradient in one call (handy for tests and tools).
std::pair<double, Vec> rosenbrock_eval(const Vec& x, double a = 1.0, double b = 100.0);

// Small synthetic binary classification task with logistic loss; parameters
// are either a linear model (hidden == 0) or a one-hidden-layer tanh network.
// The deterministic value/gradient are full-batch means; the stochastic
// gradient is an unbiased minibatch mean (uniform with replacement, keyed by
// (seed, step)).
class ToyClassifierProblem : public GradientOracle {
public:
    ToyClassifierProblem(std::size_t n_examples, std::size_t n_features,
                         std::size_t hidden, std::uint64_t seed,
                         std::size_t batch_size = 32, double label_noise = 0.25);

    // Build from an existing dataset (one row per example, label last).
    ToyClassifierProblem(std::vector<Vec> features, std::vector<double> labels,
                         std::size_t hidden, std::size_t batch_size = 32);

    std::size_t dim() const override { return n_params_; }
    double value(const Vec& w) const override;
    void gradient(const Vec& w, Vec& out) const override;
    void stochastic_gradient(const Vec& w, std::uint64_t seed,
                             std::uint64_t step, Vec& out) const override;
    bool is_stochastic() const override;

    std::size_t n_examples() const { return xs_.size(); }
    std::size_t n_features() const { return n_features_; }
    std::size_t hidden() const { return hidden_; }
    std::size_t batch_size() const { return batch_size_; }
    void set_batch_size(std::size_t b);

    // Fraction of a held-out set classified correctly at threshold 0.5.
    double heldout_accuracy(const Vec& w) const;

    // Loss and gradient of a single example (used by tests).
    double example_loss(const Vec& w, std::size_t i) const;
    void example_gradient(const Vec& w, std::size_t i, Vec& out) const;

    // Dataset round-trip: CSV rows "feature_0,...,feature_{k-1},label".
    void export_dataset_csv(std::ostream& os) const;
    static std::pair<std::vector<Vec>, std::vector<double>> import_dataset_csv(
        std::istream& is);

private:
    double forward(const Vec& w, const Vec& x) const;  // pre-sigmoid logit

    std::vector<Vec> xs_;
    std::vector<double> ys_;  // 0/1 labels
    std::vector<Vec> xs_test_;
    std::vector<double> ys_test_;
    std::size_t n_features_;
    std::size_t hidden_;
    std::size_t n_params_;
    std::size_t batch_size_;
};

std::unique_ptr<ToyClassifierProblem> make_toy_classifier(
    std::size_t n_examples = 512, std::size_t n_features = 10,
    std::size_t hidden = 0, std::uint64_t seed = 1,
    std::size_t batch_size = 32);

}  // namespace kinopt
