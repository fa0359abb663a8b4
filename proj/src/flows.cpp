#include "kinopt/flows.hpp"

#include <cmath>
#include <stdexcept>

namespace kinopt {

void apply_drift(OptState& s, double dt) {
    for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] += dt * s.p[i];
}

void apply_preconditioned_drift(OptState& s, double dt, double eps) {
    for (std::size_t i = 0; i < s.x.size(); ++i)
        s.x[i] += dt * s.p[i] / std::sqrt(s.zeta[i] + eps);
}

void apply_gradient_kick(OptState& s, const Vec& grad, double dt) {
    for (std::size_t i = 0; i < s.p.size(); ++i) s.p[i] -= dt * grad[i];
}

void apply_friction_exchange(OptState& s, double rho, double dt) {
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        const double p0 = s.p[i];
        const double xi0 = s.xi[i];
        // -expm1 keeps (1 - e^{-2 xi dt}) accurate for small xi dt, which is
        // what makes the per-coordinate p^2 + rho xi^2 conservation tight.
        const double absorbed = -std::expm1(-2.0 * xi0 * dt) * p0 * p0 / rho;
        s.p[i] = std::exp(-xi0 * dt) * p0;
        s.xi[i] = std::sqrt(xi0 * xi0 + absorbed);
    }
}

void apply_cubic_damping(OptState& s, double c, double dt) {
    const double q = 2.0 * c * dt;
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        const double p0 = s.p[i];
        const double arg = q * p0 * p0;
        if (std::isfinite(arg)) {
            s.p[i] = p0 / std::sqrt(1.0 + arg);
        } else {
            // |p| so large that q p^2 overflowed: the +1 is negligible and
            // the decayed momentum saturates at sign(p) / sqrt(2 c dt).
            s.p[i] = std::copysign(1.0 / std::sqrt(q), p0);
        }
    }
}

void apply_coupled_decay(OptState& s, double gamma, double alpha, double dt) {
    const double dp = std::exp(-gamma * dt);
    const double dxi = std::exp(-alpha * dt);
    for (double& p : s.p) p *= dp;
    for (double& xi : s.xi) xi *= dxi;
}

void apply_momentum_decay(OptState& s, double gamma, double dt) {
    const double dp = std::exp(-gamma * dt);
    for (double& p : s.p) p *= dp;
}

void apply_second_moment_average(OptState& s, const Vec& grad, double alpha, double dt) {
    const double decay = std::exp(-alpha * dt);
    // (1 - e^{-alpha dt}) / alpha, with the alpha -> 0 limit dt.
    const double gain = alpha > 0.0 ? -std::expm1(-alpha * dt) / alpha : dt;
    for (std::size_t i = 0; i < s.zeta.size(); ++i)
        s.zeta[i] = decay * s.zeta[i] + gain * grad[i] * grad[i];
}

std::string to_string(SubFlowKind k) {
    switch (k) {
        case SubFlowKind::Drift: return "drift";
        case SubFlowKind::PreconditionedDrift: return "preconditioned_drift";
        case SubFlowKind::GradientKick: return "gradient_kick";
        case SubFlowKind::FrictionExchange: return "friction_exchange";
        case SubFlowKind::CubicDamping: return "cubic_damping";
        case SubFlowKind::CoupledDecay: return "coupled_decay";
        case SubFlowKind::MomentumDecay: return "momentum_decay";
        case SubFlowKind::SecondMomentAverage: return "second_moment_average";
    }
    throw std::logic_error("unknown sub-flow kind");
}

namespace {

// Classic RK4 over n_steps equal substeps for a fixed-size coordinate system
// y' = f(y). F computes the derivative in place.
template <int N, typename F>
void rk4(double (&y)[N], double t_total, int n_steps, F&& deriv) {
    const double h = t_total / n_steps;
    double k1[N], k2[N], k3[N], k4[N], tmp[N];
    for (int s = 0; s < n_steps; ++s) {
        deriv(y, k1);
        for (int i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        deriv(tmp, k2);
        for (int i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        deriv(tmp, k3);
        for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
        deriv(tmp, k4);
        for (int i = 0; i < N; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

constexpr int kRefSubsteps = 1000;

}  // namespace

OptState reference_subflow(SubFlowKind kind, const OptState& s,
                           const SubFlowParams& params, double dt) {
    OptState out = s;
    const std::size_t n = s.x.size();
    switch (kind) {
        case SubFlowKind::Drift:
            for (std::size_t i = 0; i < n; ++i) {
                double y[1] = {s.x[i]};
                const double pi = s.p[i];
                rk4(y, dt, kRefSubsteps,
                    [&](const double*, double* d) { d[0] = pi; });
                out.x[i] = y[0];
            }
            break;
        case SubFlowKind::PreconditionedDrift:
            for (std::size_t i = 0; i < n; ++i) {
                double y[1] = {s.x[i]};
                const double v = s.p[i] / std::sqrt(s.zeta[i] + params.eps);
                rk4(y, dt, kRefSubsteps,
                    [&](const double*, double* d) { d[0] = v; });
                out.x[i] = y[0];
            }
            break;
        case SubFlowKind::GradientKick:
            for (std::size_t i = 0; i < n; ++i) {
                double y[1] = {s.p[i]};
                const double gi = params.grad[i];
                rk4(y, dt, kRefSubsteps,
                    [&](const double*, double* d) { d[0] = -gi; });
                out.p[i] = y[0];
            }
            break;
        case SubFlowKind::FrictionExchange:
            // The closed form freezes the friction coefficient at its entry
            // value; integrate that frozen system: p' = -xi0 p and the
            // conservation transport d(xi^2)/dt = 2 xi0 p^2 / rho.
            for (std::size_t i = 0; i < n; ++i) {
                const double xi0 = s.xi[i];
                double y[2] = {s.p[i], s.xi[i] * s.xi[i]};
                rk4(y, dt, kRefSubsteps, [&](const double* v, double* d) {
                    d[0] = -xi0 * v[0];
                    d[1] = 2.0 * xi0 * v[0] * v[0] / params.rho;
                });
                out.p[i] = y[0];
                out.xi[i] = std::sqrt(y[1]);
            }
            break;
        case SubFlowKind::CubicDamping:
            for (std::size_t i = 0; i < n; ++i) {
                double y[1] = {s.p[i]};
                rk4(y, dt, kRefSubsteps, [&](const double* v, double* d) {
                    d[0] = -params.c * v[0] * v[0] * v[0];
                });
                out.p[i] = y[0];
            }
            break;
        case SubFlowKind::CoupledDecay:
            for (std::size_t i = 0; i < n; ++i) {
                double y[2] = {s.p[i], s.xi[i]};
                rk4(y, dt, kRefSubsteps, [&](const double* v, double* d) {
                    d[0] = -params.gamma * v[0];
                    d[1] = -params.alpha * v[1];
                });
                out.p[i] = y[0];
                out.xi[i] = y[1];
            }
            break;
        case SubFlowKind::MomentumDecay:
            for (std::size_t i = 0; i < n; ++i) {
                double y[1] = {s.p[i]};
                rk4(y, dt, kRefSubsteps, [&](const double* v, double* d) {
                    d[0] = -params.gamma * v[0];
                });
                out.p[i] = y[0];
            }
            break;
        case SubFlowKind::SecondMomentAverage:
            for (std::size_t i = 0; i < n; ++i) {
                double y[1] = {s.zeta[i]};
                const double g2 = params.grad[i] * params.grad[i];
                rk4(y, dt, kRefSubsteps, [&](const double* v, double* d) {
                    d[0] = -params.alpha * v[0] + g2;
                });
                out.zeta[i] = y[0];
            }
            break;
    }
    return out;
}

}  // namespace kinopt
