#pragma once

#include <string>

#include "kinopt/types.hpp"

namespace kinopt {

// Elementary sub-flow updates used by the operator-split optimizers. Each is
// the closed-form solution of one piece of the damped-Hamiltonian dynamics
// over a window dt, touching only the state components it declares. All act
// coordinatewise.

// x += dt * p
void apply_drift(OptState& s, double dt);

// x += dt * p / sqrt(zeta + eps)   (zeta held fixed)
void apply_preconditioned_drift(OptState& s, double dt, double eps);

// p -= dt * grad
void apply_gradient_kick(OptState& s, const Vec& grad, double dt);

// Momentum decays under the current friction while the friction absorbs the
// dissipated kinetic energy, preserving p^2 + rho * xi^2 per coordinate:
//   p   <- exp(-xi * dt) * p
//   xi  <- sqrt(xi^2 + (1 - exp(-2 * xi * dt)) * p^2 / rho)
// (both right-hand sides read the pre-update p, xi).
void apply_friction_exchange(OptState& s, double rho, double dt);

// p <- p / sqrt(1 + 2 c p^2 dt): exact cubic-damping decay, sign-preserving.
void apply_cubic_damping(OptState& s, double c, double dt);

// p *= exp(-gamma dt), xi *= exp(-alpha dt): the linear decay of both the
// momentum and the adaptive friction.
void apply_coupled_decay(OptState& s, double gamma, double alpha, double dt);

// p *= exp(-gamma dt)
void apply_momentum_decay(OptState& s, double gamma, double dt);

// Exponential moving average of the squared gradient (gradient held fixed):
//   zeta <- exp(-alpha dt) zeta + (1 - exp(-alpha dt)) / alpha * grad^2
void apply_second_moment_average(OptState& s, const Vec& grad, double alpha, double dt);

enum class SubFlowKind {
    Drift,
    PreconditionedDrift,
    GradientKick,
    FrictionExchange,
    CubicDamping,
    CoupledDecay,
    MomentumDecay,
    SecondMomentAverage,
};

std::string to_string(SubFlowKind k);

// Coefficients a sub-flow may need; unused fields are ignored.
struct SubFlowParams {
    double gamma = 0.0;
    double alpha = 0.0;
    double rho = 1.0;
    double c = 0.0;
    double eps = 1e-8;
    Vec grad;  // frozen gradient for GradientKick / SecondMomentAverage
};

// Independent numerical reference: integrates the sub-flow's defining ODE
// (with any frozen coefficients frozen exactly as the closed form freezes
// them) by classic RK4 using 1000 substeps across dt. Used only by tests.
OptState reference_subflow(SubFlowKind kind, const OptState& s,
                           const SubFlowParams& params, double dt);

}  // namespace kinopt
