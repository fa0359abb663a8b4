#include "kinopt/oracle.hpp"

#include "kinopt/rng.hpp"

namespace kinopt {

void GradientOracle::stochastic_gradient(const Vec& x, std::uint64_t seed,
                                         std::uint64_t step, Vec& out) const {
    gradient(x, out);
    if (noise_sigma_ > 0.0) {
        Rng rng(mix_seeds(seed, step));
        for (double& g : out) g += noise_sigma_ * rng.gaussian();
    }
}

}  // namespace kinopt
