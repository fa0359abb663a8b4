#include "kinopt/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace kinopt {

void step_ikfad(OptState& s, const Vec& grad, const HyperParams& hp) {
    apply_friction_exchange(s, hp.rho, hp.dt);
    apply_coupled_decay(s, hp.gamma, hp.alpha, hp.dt);
    apply_gradient_kick(s, grad, hp.dt);
    apply_drift(s, hp.dt);
}

void step_cd_split(OptState& s, const Vec& grad, const HyperParams& hp) {
    apply_cubic_damping(s, hp.c, hp.dt);
    apply_momentum_decay(s, hp.gamma, hp.dt);
    apply_gradient_kick(s, grad, hp.dt);
    apply_drift(s, hp.dt);
}

void step_cd_euler(OptState& s, const Vec& grad, const HyperParams& hp) {
    const double dt = hp.dt;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double p0 = s.p[i];
        s.p[i] = (1.0 - hp.gamma * dt) * p0 - hp.c * dt * p0 * p0 * p0 - dt * grad[i];
        s.x[i] += dt * p0;  // drift reads the pre-update momentum
    }
}

void step_cadam(OptState& s, const Vec& grad, const HyperParams& hp) {
    apply_cubic_damping(s, hp.c, hp.dt);
    apply_momentum_decay(s, hp.gamma, hp.dt);
    apply_gradient_kick(s, grad, hp.dt);
    apply_preconditioned_drift(s, hp.dt, hp.eps_div);
    apply_second_moment_average(s, grad, hp.alpha, hp.dt);
}

void step_ldhd_split(OptState& s, const Vec& grad, const HyperParams& hp) {
    apply_momentum_decay(s, hp.gamma, hp.dt);
    apply_gradient_kick(s, grad, hp.dt);
    apply_drift(s, hp.dt);
}

void step_msgd(OptState& s, const Vec& grad, const HyperParams& hp, double mu) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        s.p[i] = mu * s.p[i] + grad[i];
        s.x[i] -= hp.dt * s.p[i];
    }
}

void step_ldhd_euler(OptState& s, const Vec& grad, const HyperParams& hp) {
    const double h = hp.dt;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        s.p[i] = (1.0 - hp.gamma * h) * s.p[i] - h * grad[i];
        s.x[i] += h * s.p[i];  // drift reads the updated momentum
    }
}

void step_adam(OptState& s, const Vec& grad, const HyperParams& hp) {
    const double t = static_cast<double>(s.step_count) + 1.0;
    const double bc1 = 1.0 - std::pow(hp.beta1, t);
    const double bc2 = 1.0 - std::pow(hp.beta2, t);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        s.p[i] = hp.beta1 * s.p[i] + (1.0 - hp.beta1) * grad[i];
        s.zeta[i] = hp.beta2 * s.zeta[i] + (1.0 - hp.beta2) * grad[i] * grad[i];
        const double m_hat = s.p[i] / bc1;
        const double v_hat = s.zeta[i] / bc2;
        s.x[i] -= hp.dt * m_hat / (std::sqrt(v_hat) + hp.eps_div);
    }
}

void step_optimizer(OptimizerKind kind, OptState& s, const Vec& grad,
                    const HyperParams& hp, const MomentumSchedule& sched) {
    switch (kind) {
        case OptimizerKind::IkfadSplit:
            step_ikfad(s, grad, hp);
            break;
        case OptimizerKind::CdSplit:
            step_cd_split(s, grad, hp);
            break;
        case OptimizerKind::CdEuler:
            step_cd_euler(s, grad, hp);
            break;
        case OptimizerKind::CadamSplit:
            step_cadam(s, grad, hp);
            break;
        case OptimizerKind::LdhdSplit:
            step_ldhd_split(s, grad, hp);
            break;
        case OptimizerKind::MsgdEuler:
            step_msgd(s, grad, hp, schedule_mu(sched, s.step_count, hp.mu));
            break;
        case OptimizerKind::AdamBaseline:
            step_adam(s, grad, hp);
            break;
    }
    ++s.step_count;
}

double schedule_mu(const MomentumSchedule& sched, std::uint64_t t, double constant_mu) {
    switch (sched.kind) {
        case ScheduleKind::Constant:
            return constant_mu;
        case ScheduleKind::Sutskever: {
            const double k = static_cast<double>(t / 250 + 1);
            return std::min(1.0 - 0.5 / k, sched.mu_max);
        }
        case ScheduleKind::Nesterov:
            return 1.0 - 3.0 / (static_cast<double>(t) + 5.0);
    }
    throw std::logic_error("unknown schedule kind");
}

double mu_gamma_map(double gamma, double dt) {
    if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    const double damp = gamma * std::sqrt(dt);
    if (damp > 1.0)
        throw std::invalid_argument("no valid momentum coefficient: gamma*sqrt(dt) = " +
                                    std::to_string(damp) + " exceeds 1");
    return 1.0 - damp;
}

}  // namespace kinopt
