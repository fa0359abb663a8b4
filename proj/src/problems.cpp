#include "kinopt/problems.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kinopt {

namespace {

Vec log_spaced(std::size_t dim, double lo, double hi) {
    if (dim == 0) throw std::invalid_argument("dim must be positive");
    if (!(lo > 0.0) || hi < lo)
        throw std::invalid_argument("need 0 < min_eig <= max_eig");
    Vec v(dim);
    if (dim == 1) {
        v[0] = lo;
        return v;
    }
    const double ratio = hi / lo;
    for (std::size_t i = 0; i < dim; ++i)
        v[i] = lo * std::pow(ratio, static_cast<double>(i) /
                                        static_cast<double>(dim - 1));
    v.back() = hi;  // exact endpoint
    return v;
}

// Column-major orthonormal basis from Gram-Schmidt on a seeded Gaussian
// matrix (re-orthogonalized once for numerical hygiene).
Vec random_rotation(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Vec q(n * n);
    for (double& v : q) v = rng.gaussian();
    for (std::size_t j = 0; j < n; ++j) {
        double* col = &q[j * n];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                const double* prev = &q[k * n];
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += col[i] * prev[i];
                for (std::size_t i = 0; i < n; ++i) col[i] -= proj * prev[i];
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += col[i] * col[i];
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12)
            throw std::runtime_error("degenerate rotation draw; use another seed");
        for (std::size_t i = 0; i < n; ++i) col[i] /= nrm;
    }
    return q;
}

}  // namespace

QuadraticProblem::QuadraticProblem(std::size_t dim, double min_eig, double max_eig)
    : n_(dim), lambda_(log_spaced(dim, min_eig, max_eig)) {}

QuadraticProblem::QuadraticProblem(std::size_t dim, double min_eig, double max_eig,
                                   std::uint64_t rotation_seed)
    : n_(dim),
      lambda_(log_spaced(dim, min_eig, max_eig)),
      q_(random_rotation(dim, rotation_seed)) {}

double QuadraticProblem::value(const Vec& x) const {
    double f = 0.0;
    if (q_.empty()) {
        for (std::size_t i = 0; i < n_; ++i) f += lambda_[i] * x[i] * x[i];
    } else {
        for (std::size_t j = 0; j < n_; ++j) {
            const double* col = &q_[j * n_];
            double u = 0.0;
            for (std::size_t i = 0; i < n_; ++i) u += col[i] * x[i];
            f += lambda_[j] * u * u;
        }
    }
    return 0.5 * f;
}

void QuadraticProblem::gradient(const Vec& x, Vec& out) const {
    if (q_.empty()) {
        for (std::size_t i = 0; i < n_; ++i) out[i] = lambda_[i] * x[i];
        return;
    }
    for (std::size_t i = 0; i < n_; ++i) out[i] = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        const double* col = &q_[j * n_];
        double u = 0.0;
        for (std::size_t i = 0; i < n_; ++i) u += col[i] * x[i];
        const double w = lambda_[j] * u;
        for (std::size_t i = 0; i < n_; ++i) out[i] += w * col[i];
    }
}

std::optional<Vec> QuadraticProblem::minimizer() const { return Vec(n_, 0.0); }

std::optional<std::pair<double, double>> QuadraticProblem::curvature_bounds() const {
    return std::make_pair(lambda_.front(), lambda_.back());
}

Vec QuadraticProblem::top_eigen_direction() const {
    Vec v(n_, 0.0);
    if (q_.empty()) {
        v[n_ - 1] = 1.0;
    } else {
        const double* col = &q_[(n_ - 1) * n_];
        for (std::size_t i = 0; i < n_; ++i) v[i] = col[i];
    }
    return v;
}

std::unique_ptr<QuadraticProblem> make_log_spaced_quadratic(std::size_t dim,
                                                            double min_eig,
                                                            double max_eig,
                                                            std::uint64_t seed,
                                                            bool rotate) {
    if (dim < 2)
        throw std::invalid_argument(
            "log-spaced spectrum needs dim >= 2 to include both endpoints");
    if (rotate)
        return std::make_unique<QuadraticProblem>(dim, min_eig, max_eig, seed);
    return std::make_unique<QuadraticProblem>(dim, min_eig, max_eig);
}

double RosenbrockProblem::value(const Vec& x) const {
    const double d = a_ - x[0];
    const double q = x[1] - x[0] * x[0];
    return d * d + b_ * q * q;
}

void RosenbrockProblem::gradient(const Vec& x, Vec& out) const {
    const double q = x[1] - x[0] * x[0];
    out[0] = -2.0 * (a_ - x[0]) - 4.0 * b_ * x[0] * q;
    out[1] = 2.0 * b_ * q;
}

std::optional<Vec> RosenbrockProblem::minimizer() const {
    return Vec{a_, a_ * a_};
}

std::pair<double, Vec> rosenbrock_eval(const Vec& x, double a, double b) {
    RosenbrockProblem p(a, b);
    Vec g(2);
    p.gradient(x, g);
    return {p.value(x), g};
}

ToyClassifierProblem::ToyClassifierProblem(std::size_t n_examples,
                                           std::size_t n_features,
                                           std::size_t hidden, std::uint64_t seed,
                                           std::size_t batch_size,
                                           double label_noise)
    : n_features_(n_features), hidden_(hidden), batch_size_(batch_size) {
    if (n_examples == 0 || n_features == 0)
        throw std::invalid_argument("need at least one example and one feature");
    if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    n_params_ = hidden_ == 0 ? n_features_ : hidden_ * n_features_ + hidden_;
    Rng rng(seed);
    Vec w_true(n_features);
    double nrm = 0.0;
    for (double& v : w_true) {
        v = rng.gaussian();
        nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    for (double& v : w_true) v /= nrm;
    const std::size_t n_test = std::max<std::size_t>(64, n_examples / 4);
    auto draw = [&](std::vector<Vec>& xs, std::vector<double>& ys, std::size_t n) {
        xs.reserve(n);
        ys.reserve(n);
        for (std::size_t e = 0; e < n; ++e) {
            Vec x(n_features);
            for (double& v : x) v = rng.gaussian();
            double margin = 0.0;
            for (std::size_t i = 0; i < n_features; ++i) margin += w_true[i] * x[i];
            margin += label_noise * rng.gaussian();
            xs.push_back(std::move(x));
            ys.push_back(margin > 0.0 ? 1.0 : 0.0);
        }
    };
    draw(xs_, ys_, n_examples);
    draw(xs_test_, ys_test_, n_test);
}

ToyClassifierProblem::ToyClassifierProblem(std::vector<Vec> features,
                                           std::vector<double> labels,
                                           std::size_t hidden,
                                           std::size_t batch_size)
    : xs_(std::move(features)),
      ys_(std::move(labels)),
      hidden_(hidden),
      batch_size_(batch_size) {
    if (xs_.empty()) throw std::invalid_argument("dataset is empty");
    if (xs_.size() != ys_.size())
        throw std::invalid_argument("feature/label count mismatch");
    if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    n_features_ = xs_.front().size();
    for (const Vec& x : xs_)
        if (x.size() != n_features_)
            throw std::invalid_argument("ragged feature rows");
    for (double y : ys_)
        if (y != 0.0 && y != 1.0)
            throw std::invalid_argument("labels must be 0 or 1");
    n_params_ = hidden_ == 0 ? n_features_ : hidden_ * n_features_ + hidden_;
    xs_test_ = xs_;
    ys_test_ = ys_;
}

void ToyClassifierProblem::set_batch_size(std::size_t b) {
    if (b == 0) throw std::invalid_argument("batch_size must be positive");
    batch_size_ = b;
}

double ToyClassifierProblem::forward(const Vec& w, const Vec& x) const {
    if (hidden_ == 0) {
        double z = 0.0;
        for (std::size_t i = 0; i < n_features_; ++i) z += w[i] * x[i];
        return z;
    }
    double z = 0.0;
    for (std::size_t h = 0; h < hidden_; ++h) {
        double a = 0.0;
        const double* row = &w[h * n_features_];
        for (std::size_t i = 0; i < n_features_; ++i) a += row[i] * x[i];
        z += w[hidden_ * n_features_ + h] * std::tanh(a);
    }
    return z;
}

double ToyClassifierProblem::example_loss(const Vec& w, std::size_t i) const {
    const double z = forward(w, xs_[i]);
    // log(1 + e^z) - y z, computed without overflow for large |z|.
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z))
                                    : std::log1p(std::exp(z));
    return softplus - ys_[i] * z;
}

void ToyClassifierProblem::example_gradient(const Vec& w, std::size_t i,
                                            Vec& out) const {
    const Vec& x = xs_[i];
    const double z = forward(w, x);
    const double sigma = 1.0 / (1.0 + std::exp(-z));
    const double dz = sigma - ys_[i];
    if (hidden_ == 0) {
        for (std::size_t k = 0; k < n_features_; ++k) out[k] = dz * x[k];
        return;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
        double a = 0.0;
        const double* row = &w[h * n_features_];
        for (std::size_t k = 0; k < n_features_; ++k) a += row[k] * x[k];
        const double th = std::tanh(a);
        const double w2 = w[hidden_ * n_features_ + h];
        const double dth = dz * w2 * (1.0 - th * th);
        for (std::size_t k = 0; k < n_features_; ++k)
            out[h * n_features_ + k] = dth * x[k];
        out[hidden_ * n_features_ + h] = dz * th;
    }
}

double ToyClassifierProblem::value(const Vec& w) const {
    double total = 0.0;
    for (std::size_t i = 0; i < xs_.size(); ++i) total += example_loss(w, i);
    return total / static_cast<double>(xs_.size());
}

void ToyClassifierProblem::gradient(const Vec& w, Vec& out) const {
    Vec g(n_params_);
    for (double& v : out) v = 0.0;
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        example_gradient(w, i, g);
        for (std::size_t k = 0; k < n_params_; ++k) out[k] += g[k];
    }
    const double inv = 1.0 / static_cast<double>(xs_.size());
    for (double& v : out) v *= inv;
}

void ToyClassifierProblem::stochastic_gradient(const Vec& w, std::uint64_t seed,
                                               std::uint64_t step, Vec& out) const {
    if (batch_size_ >= xs_.size()) {
        gradient(w, out);
        return;
    }
    Rng rng(mix_seeds(seed, step));
    Vec g(n_params_);
    for (double& v : out) v = 0.0;
    for (std::size_t b = 0; b < batch_size_; ++b) {
        const auto idx = static_cast<std::size_t>(rng.uniform() *
                                                  static_cast<double>(xs_.size()));
        example_gradient(w, std::min(idx, xs_.size() - 1), g);
        for (std::size_t k = 0; k < n_params_; ++k) out[k] += g[k];
    }
    const double inv = 1.0 / static_cast<double>(batch_size_);
    for (double& v : out) v *= inv;
}

bool ToyClassifierProblem::is_stochastic() const {
    return batch_size_ < xs_.size() || noise_sigma() > 0.0;
}

double ToyClassifierProblem::heldout_accuracy(const Vec& w) const {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < xs_test_.size(); ++i) {
        const bool predicted_one = forward(w, xs_test_[i]) > 0.0;
        if (predicted_one == (ys_test_[i] > 0.5)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(xs_test_.size());
}

void ToyClassifierProblem::export_dataset_csv(std::ostream& os) const {
    os.precision(17);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        for (double v : xs_[i]) os << v << ',';
        os << ys_[i] << '\n';
    }
}

std::pair<std::vector<Vec>, std::vector<double>>
ToyClassifierProblem::import_dataset_csv(std::istream& is) {
    std::vector<Vec> xs;
    std::vector<double> ys;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Vec row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 2)
            throw std::invalid_argument("dataset rows need features plus a label");
        ys.push_back(row.back());
        row.pop_back();
        xs.push_back(std::move(row));
    }
    return {std::move(xs), std::move(ys)};
}

std::unique_ptr<ToyClassifierProblem> make_toy_classifier(std::size_t n_examples,
                                                          std::size_t n_features,
                                                          std::size_t hidden,
                                                          std::uint64_t seed,
                                                          std::size_t batch_size) {
    return std::make_unique<ToyClassifierProblem>(n_examples, n_features, hidden,
                                                  seed, batch_size);
}

}  // namespace kinopt
