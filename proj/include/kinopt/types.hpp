#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kinopt/vec.hpp"

namespace kinopt {

enum class OptimizerKind {
    IkfadSplit,    // adaptive-friction kinetic descent, operator-split
    CdSplit,       // cubic-damped kinetic descent, operator-split
    CdEuler,       // cubic-damped kinetic descent, explicit Euler
    CadamSplit,    // cubic-damped + second-moment preconditioned, operator-split
    LdhdSplit,     // linearly damped Hamiltonian descent, operator-split
    MsgdEuler,     // classical momentum SGD
    AdamBaseline,  // bias-corrected Adam reference
};

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_kind_from_string(const std::string& name);

// True when the optimizer evolves the adaptive friction vector xi.
bool uses_xi(OptimizerKind k);
// True when the optimizer evolves a second-moment accumulator zeta.
bool uses_zeta(OptimizerKind k);

enum class ScheduleKind { Constant, Sutskever, Nesterov };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(const std::string& name);

struct MomentumSchedule {
    ScheduleKind kind = ScheduleKind::Constant;
    double mu_max = 0.99;  // cap for the ramped schedules

    bool operator==(const MomentumSchedule&) const = default;
};

struct HyperParams {
    double dt = 0.0;        // step size (every optimizer)
    double gamma = 0.0;     // linear friction
    double alpha = 0.0;     // auxiliary relaxation rate (xi / zeta decay)
    double rho = 0.0;       // adaptive-friction inertia
    double c = 0.0;         // cubic damping coefficient
    double eps_div = 1e-8;  // divide-guard for preconditioned steps
    double mu = 0.0;        // momentum coefficient (msgd)
    double beta1 = 0.9;     // first-moment rate (adam)
    double beta2 = 0.999;   // second-moment rate (adam)

    bool operator==(const HyperParams&) const = default;
};

// Throws std::invalid_argument when a field the optimizer actually uses is
// missing or out of range (dt <= 0, gamma <= 0 for the damped dynamics,
// alpha/rho <= 0 where required, c < 0, eps_div <= 0, mu outside [0,1), ...).
void validate_hyperparams(OptimizerKind kind, const HyperParams& hp,
                          const MomentumSchedule& sched = MomentumSchedule{});

struct OptState {
    Vec x;                        // position / parameters
    Vec p;                        // momentum (adam: first moment)
    Vec xi;                       // adaptive friction, empty when unused
    Vec zeta;                     // second-moment accumulator, empty when unused
    std::uint64_t step_count = 0;

    bool has_xi() const { return !xi.empty(); }
    bool has_zeta() const { return !zeta.empty(); }
    bool finite() const {
        return all_finite(x) && all_finite(p) && all_finite(xi) && all_finite(zeta);
    }
};

// Builds the state an optimizer starts from. Auxiliary vectors default to
// zero when the optimizer uses them; supplying one the optimizer does not use
// is an error, as are dimension mismatches or negative xi0/zeta0 entries.
OptState init_state(OptimizerKind kind, const Vec& x0, const Vec& p0,
                    const std::optional<Vec>& xi0 = std::nullopt,
                    const std::optional<Vec>& zeta0 = std::nullopt);

// Convenience: zero initial momentum.
OptState init_state(OptimizerKind kind, const Vec& x0);

}  // namespace kinopt
