#include "kinopt/types.hpp"

#include <stdexcept>

namespace kinopt {

std::string to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::IkfadSplit: return "ikfad";
        case OptimizerKind::CdSplit: return "cd";
        case OptimizerKind::CdEuler: return "cd_euler";
        case OptimizerKind::CadamSplit: return "cadam";
        case OptimizerKind::LdhdSplit: return "ldhd";
        case OptimizerKind::MsgdEuler: return "msgd";
        case OptimizerKind::AdamBaseline: return "adam";
    }
    throw std::logic_error("unknown optimizer kind");
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
    if (name == "ikfad") return OptimizerKind::IkfadSplit;
    if (name == "cd") return OptimizerKind::CdSplit;
    if (name == "cd_euler") return OptimizerKind::CdEuler;
    if (name == "cadam") return OptimizerKind::CadamSplit;
    if (name == "ldhd") return OptimizerKind::LdhdSplit;
    if (name == "msgd") return OptimizerKind::MsgdEuler;
    if (name == "adam") return OptimizerKind::AdamBaseline;
    throw std::invalid_argument("unknown optimizer kind: '" + name + "'");
}

bool uses_xi(OptimizerKind k) { return k == OptimizerKind::IkfadSplit; }

bool uses_zeta(OptimizerKind k) {
    return k == OptimizerKind::CadamSplit || k == OptimizerKind::AdamBaseline;
}

std::string to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::Sutskever: return "sutskever";
        case ScheduleKind::Nesterov: return "nesterov";
    }
    throw std::logic_error("unknown schedule kind");
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
    if (name == "constant") return ScheduleKind::Constant;
    if (name == "sutskever") return ScheduleKind::Sutskever;
    if (name == "nesterov") return ScheduleKind::Nesterov;
    throw std::invalid_argument("unknown momentum schedule: '" + name + "'");
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void validate_hyperparams(OptimizerKind kind, const HyperParams& hp,
                          const MomentumSchedule& sched) {
    require(hp.dt > 0.0, "dt must be positive");
    switch (kind) {
        case OptimizerKind::IkfadSplit:
            require(hp.gamma > 0.0, "gamma must be positive for damped dynamics");
            require(hp.alpha > 0.0, "alpha must be positive");
            require(hp.rho > 0.0, "rho must be positive");
            break;
        case OptimizerKind::CdSplit:
        case OptimizerKind::CdEuler:
            require(hp.gamma > 0.0, "gamma must be positive for damped dynamics");
            require(hp.c >= 0.0, "c must be non-negative");
            break;
        case OptimizerKind::CadamSplit:
            require(hp.gamma > 0.0, "gamma must be positive for damped dynamics");
            require(hp.alpha > 0.0, "alpha must be positive");
            require(hp.c >= 0.0, "c must be non-negative");
            require(hp.eps_div > 0.0, "eps_div must be positive");
            break;
        case OptimizerKind::LdhdSplit:
            require(hp.gamma > 0.0, "gamma must be positive for damped dynamics");
            break;
        case OptimizerKind::MsgdEuler:
            if (sched.kind == ScheduleKind::Constant)
                require(hp.mu >= 0.0 && hp.mu < 1.0, "mu must lie in [0, 1)");
            require(sched.mu_max >= 0.0 && sched.mu_max < 1.0,
                    "mu_max must lie in [0, 1)");
            break;
        case OptimizerKind::AdamBaseline:
            require(hp.beta1 >= 0.0 && hp.beta1 < 1.0, "beta1 must lie in [0, 1)");
            require(hp.beta2 >= 0.0 && hp.beta2 < 1.0, "beta2 must lie in [0, 1)");
            require(hp.eps_div > 0.0, "eps_div must be positive");
            break;
    }
    if (kind != OptimizerKind::MsgdEuler)
        require(sched.kind == ScheduleKind::Constant,
                "momentum schedules apply only to msgd");
}

namespace {

Vec resolve_aux(const std::optional<Vec>& given, std::size_t n, const char* name) {
    if (!given) return Vec(n, 0.0);
    if (given->size() != n)
        throw std::invalid_argument(std::string(name) + " dimension mismatch");
    for (double v : *given)
        if (v < 0.0)
            throw std::invalid_argument(std::string(name) +
                                        " entries must be non-negative");
    return *given;
}

}  // namespace

OptState init_state(OptimizerKind kind, const Vec& x0, const Vec& p0,
                    const std::optional<Vec>& xi0, const std::optional<Vec>& zeta0) {
    if (x0.empty()) throw std::invalid_argument("x0 must be non-empty");
    if (p0.size() != x0.size())
        throw std::invalid_argument("p0 dimension mismatch");
    if (xi0 && !uses_xi(kind))
        throw std::invalid_argument("xi0 supplied but " + to_string(kind) +
                                    " does not use xi");
    if (zeta0 && !uses_zeta(kind))
        throw std::invalid_argument("zeta0 supplied but " + to_string(kind) +
                                    " does not use zeta");
    OptState s;
    s.x = x0;
    s.p = p0;
    if (uses_xi(kind)) s.xi = resolve_aux(xi0, x0.size(), "xi0");
    if (uses_zeta(kind)) s.zeta = resolve_aux(zeta0, x0.size(), "zeta0");
    s.step_count = 0;
    return s;
}

OptState init_state(OptimizerKind kind, const Vec& x0) {
    return init_state(kind, x0, Vec(x0.size(), 0.0));
}

}  // namespace kinopt
