#pragma once

#include <cstdint>

#include "kinopt/flows.hpp"
#include "kinopt/oracle.hpp"
#include "kinopt/types.hpp"

namespace kinopt {

// One optimizer step. Every step function evaluates the supplied gradient
// exactly once conceptually: the caller evaluates grad at the incoming s.x
// and passes it in, so stochastic gradients are drawn once per step.

// Split composition: friction-exchange, coupled decay, kick, drift.
void step_ikfad(OptState& s, const Vec& grad, const HyperParams& hp);

// Split composition: cubic damping, momentum decay, kick, drift.
void step_cd_split(OptState& s, const Vec& grad, const HyperParams& hp);

// Explicit Euler discretization of the cubic-damped dynamics:
//   p' = (1 - gamma dt) p - c dt p^3 - dt grad;  x' = x + dt * p   (old p)
void step_cd_euler(OptState& s, const Vec& grad, const HyperParams& hp);

// Split composition: cubic damping, momentum decay, kick, preconditioned
// drift (reading the incoming zeta), then the second-moment average of the
// same gradient.
void step_cadam(OptState& s, const Vec& grad, const HyperParams& hp);

// Split composition: momentum decay, kick, drift.
void step_ldhd_split(OptState& s, const Vec& grad, const HyperParams& hp);

// Classical momentum: p' = mu p + grad; x' = x - dt p'.
void step_msgd(OptState& s, const Vec& grad, const HyperParams& hp, double mu);

// Euler discretization of the linearly damped dynamics, drift reads the NEW
// momentum: p' = (1 - gamma h) p - h grad; x' = x + h p'. Exists because the
// momentum-SGD correspondence is stated against exactly this variant.
void step_ldhd_euler(OptState& s, const Vec& grad, const HyperParams& hp);

// Bias-corrected Adam. s.p holds the first moment, s.zeta the second;
// s.step_count must be the number of completed steps (bias correction uses
// step_count + 1).
void step_adam(OptState& s, const Vec& grad, const HyperParams& hp);

// Dispatch one step of `kind`, including schedule lookup for momentum SGD.
// Increments s.step_count.
void step_optimizer(OptimizerKind kind, OptState& s, const Vec& grad,
                    const HyperParams& hp,
                    const MomentumSchedule& sched = MomentumSchedule{});

// Momentum coefficient at integer step t (t = 0 for the first step):
//   Constant  -> constant_mu
//   Sutskever -> min(1 - 0.5 / (floor(t/250) + 1), mu_max)
//   Nesterov  -> 1 - 3 / (t + 5)
double schedule_mu(const MomentumSchedule& sched, std::uint64_t t, double constant_mu);

// Maps damped-dynamics friction gamma to the equivalent momentum coefficient
// mu = 1 - gamma * sqrt(dt), where dt is the momentum-side learning rate.
// Throws std::invalid_argument when gamma * sqrt(dt) > 1 (no valid mu).
double mu_gamma_map(double gamma, double dt);

}  // namespace kinopt
