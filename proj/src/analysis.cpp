#include "kinopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinopt/rng.hpp"

namespace kinopt {

LyapunovValue lyapunov_g(const OptState& s, const GradientOracle& oracle, double rho,
                         std::optional<double> fstar_fallback) {
    LyapunovValue out;
    const double f = oracle.value(s.x);
    double fstar = fstar_fallback.value_or(0.0);
    out.fstar_exact = false;
    if (auto xmin = oracle.minimizer()) {
        fstar = oracle.value(*xmin);
        out.fstar_exact = true;
    }
    out.potential = f - fstar;
    double kin = 0.0;
    for (double p : s.p) kin += p * p;
    out.kinetic = 0.5 * kin;
    if (s.has_xi()) {
        double fr = 0.0;
        for (double xi : s.xi) fr += xi * xi;
        out.friction = 0.5 * rho * fr;
    }
    out.g = out.potential + out.kinetic + out.friction;
    return out;
}

RateFit fit_exponential_rate(const Trajectory& traj, double tail_fraction) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw std::invalid_argument("tail_fraction must lie in (0, 1]");
    const std::size_t rows = traj.rows();
    const std::size_t n_tail = static_cast<std::size_t>(
        std::ceil(tail_fraction * static_cast<double>(rows)));
    const std::size_t start = rows - std::min(rows, n_tail);
    std::vector<double> ts, ys;
    for (std::size_t i = start; i < rows; ++i) {
        double y = traj.losses[i] + traj.p_norms[i] * traj.p_norms[i];
        if (traj.has_xi()) y += traj.xi_norms[i] * traj.xi_norms[i];
        if (std::isfinite(y) && y > 0.0) {
            ts.push_back(traj.times[i]);
            ys.push_back(std::log(y));
        }
    }
    if (ts.size() < 10)
        throw std::invalid_argument(
            "rate fit needs at least 10 strictly positive finite points, got " +
            std::to_string(ts.size()));
    const double n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double dt = ts[i] - mt;
        const double dy = ys[i] - my;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    RateFit fit;
    fit.n_points = ts.size();
    if (stt <= 0.0) throw std::invalid_argument("degenerate time axis in rate fit");
    const double slope = sty / stt;
    fit.kappa = -slope;
    fit.log_c = my - slope * mt;
    if (syy <= 0.0) {
        // perfectly constant series: no decay, no explanatory power
        fit.kappa = 0.0;
        fit.r_squared = 0.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double r = ys[i] - (fit.log_c + slope * ts[i]);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

namespace {

// In-place iterative radix-2 FFT (n a power of two).
void fft_radix2(std::vector<double>& re, std::vector<double>& im) {
    const std::size_t n = re.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -two_pi / static_cast<double>(len);
        const double wr = std::cos(ang), wi = std::sin(ang);
        for (std::size_t i = 0; i < n; i += len) {
            double cr = 1.0, ci = 0.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::size_t a = i + k, b = i + k + len / 2;
                const double tr = re[b] * cr - im[b] * ci;
                const double ti = re[b] * ci + im[b] * cr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
                const double ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
        }
    }
}

}  // namespace

SpectrumReport signal_spectrum(const std::vector<double>& signal) {
    if (signal.size() < 8)
        throw std::invalid_argument("spectrum needs at least 8 samples, got " +
                                    std::to_string(signal.size()));
    std::size_t n = 1;
    while (n * 2 <= signal.size()) n *= 2;

    SpectrumReport rep;
    rep.n_used = n;
    std::vector<double> s(signal.begin(), signal.begin() + n);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : s) v -= mean;
    double peak_abs = 0.0;
    for (double v : s) peak_abs = std::max(peak_abs, std::fabs(v));
    if (peak_abs > 1e150) {
        // keep |X|^2 representable on deliberately divergent signals
        rep.scale = peak_abs;
        for (double& v : s) v /= peak_abs;
    }

    std::vector<double> im(n, 0.0);
    fft_radix2(s, im);

    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const std::size_t half = n / 2;
    rep.freq.resize(half + 1);
    rep.power.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        rep.freq[k] = static_cast<double>(k) / static_cast<double>(n);
        const double mag2 = s[k] * s[k] + im[k] * im[k];
        const double one_sided = (k == 0 || k == half) ? 1.0 : 2.0;
        rep.power[k] = one_sided * mag2 / n2;
    }
    double total = 0.0, non_dc = 0.0, best = -1.0;
    std::size_t best_k = 1;
    for (std::size_t k = 0; k <= half; ++k) {
        total += rep.power[k];
        if (k >= 1) {
            non_dc += rep.power[k];
            if (rep.power[k] > best) {
                best = rep.power[k];
                best_k = k;
            }
        }
    }
    rep.total_power = total;
    rep.peak_ratio = non_dc > 0.0 ? best / non_dc : 0.0;
    rep.peak_freq = non_dc > 0.0 ? rep.freq[best_k] : 0.0;
    return rep;
}

SpectrumReport trajectory_spectrum(const Trajectory& traj, const Vec& direction) {
    if (traj.samples.size() < 8)
        throw std::invalid_argument("spectrum needs at least 8 state samples, got " +
                                    std::to_string(traj.samples.size()));
    const std::size_t dim = traj.samples.front().x.size();
    if (direction.size() != dim)
        throw std::invalid_argument("direction dimension mismatch");
    const double nrm = norm2(direction);
    if (!(nrm > 0.0)) throw std::invalid_argument("direction must have nonzero norm");
    for (std::size_t i = 2; i < traj.sample_steps.size(); ++i) {
        if (traj.sample_steps[i] - traj.sample_steps[i - 1] !=
            traj.sample_steps[1] - traj.sample_steps[0])
            throw std::invalid_argument("state samples are not uniformly spaced");
    }
    std::vector<double> sig(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i)
        sig[i] = dot(traj.samples[i].x, direction) / nrm;
    return signal_spectrum(sig);
}

PhaseMetrics phase_portrait_metrics(const Trajectory& traj, const Vec& x_star,
                                    double tolerance) {
    if (traj.samples.empty())
        throw std::invalid_argument("phase metrics need state samples");
    const std::size_t dim = x_star.size();
    if (traj.samples.front().x.size() != dim)
        throw std::invalid_argument("x_star dimension mismatch");

    PhaseMetrics m;
    m.final_dist = dist2(traj.samples.back().x, x_star);
    m.converged = m.final_dist < tolerance;

    const double d0 = dist2(traj.samples.front().x, x_star);
    double arc = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        arc += dist2(traj.samples[i].x, traj.samples[i - 1].x);
    m.path_ratio = d0 > 0.0 ? arc / d0 : 0.0;

    // Overshoots: coordinate sign flips relative to the target, counted only
    // once the path first comes within 10x tolerance of it.
    std::size_t first_near = traj.samples.size();
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (dist2(traj.samples[i].x, x_star) < 10.0 * tolerance) {
            first_near = i;
            break;
        }
    }
    if (first_near < traj.samples.size()) {
        std::vector<int> last_sign(dim, 0);
        for (std::size_t i = first_near; i < traj.samples.size(); ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                const double d = traj.samples[i].x[k] - x_star[k];
                const int sgn = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
                if (sgn != 0) {
                    if (last_sign[k] != 0 && sgn != last_sign[k]) ++m.overshoot_count;
                    last_sign[k] = sgn;
                }
            }
        }
    }
    return m;
}

bool check_strong_convexity_condition(const GradientOracle& oracle, double a,
                                      double b, std::size_t n_samples,
                                      std::uint64_t seed) {
    const std::size_t dim = oracle.dim();
    Vec center(dim, 0.0);
    if (auto xmin = oracle.minimizer()) center = *xmin;
    const double fstar = oracle.value(center);
    Vec gstar(dim);
    oracle.gradient(center, gstar);

    Rng rng(seed);
    Vec x(dim), g(dim);
    for (std::size_t k = 0; k < n_samples; ++k) {
        double nrm = 0.0;
        for (double& v : x) {
            v = rng.gaussian();
            nrm += v * v;
        }
        nrm = std::sqrt(nrm);
        const double r =
            10.0 * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
        for (std::size_t i = 0; i < dim; ++i) x[i] = center[i] + r * x[i] / nrm;

        const double fx = oracle.value(x);
        oracle.gradient(x, g);
        double rhs = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = x[i] - center[i];
            rhs += d * (g[i] - gstar[i]);
            d2 += d * d;
        }
        const double lhs = a * (fx - fstar) + b * d2;
        const double slack = 1e-9 * (std::fabs(fx) + std::fabs(fstar) + 1.0);
        if (lhs > rhs + slack) return false;
    }
    return true;
}

}  // namespace kinopt
