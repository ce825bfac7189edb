#pragma once

// Top Lyapunov exponent of products of i.i.d. transfer matrices T_z(j).

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "arborwalk/disorder.hpp"

namespace arborwalk::transfer {

struct LyapunovConfig {
    double r = 0.5;
    std::complex<double> z = 1.0;
    /// Distribution of each omega_j; only its quantile function is used.
    disorder::DisorderField distribution = disorder::DisorderField::uniform_full(0);
    /// If set, every matrix is T_z(alpha, beta, gamma) with these phases.
    std::optional<std::array<double, 3>> fixed_phases;
    std::int64_t matrices = 100'000;
    std::uint64_t seed = 1;
    /// Independent chains; the estimate does not depend on the thread count.
    int chains = 8;
    int batches_per_chain = 10;
    int burn_in = 64;
};

struct LyapunovEstimate {
    double gamma = 0.0;
    double standard_error = 0.0;
    std::int64_t matrices = 0;
    std::vector<double> batch_rates;

    /// gamma exceeds sigmas standard errors.
    bool positive(double sigmas = 5.0) const { return gamma > sigmas * standard_error; }
};

/// Propagates a unit vector through the product, renormalising every 8
/// steps and accumulating log norms in extended precision. Batch means over
/// all chains give the standard error. Throws InputError unless 0 < r < 1
/// and matrices >= 1000.
LyapunovEstimate lyapunov(const LyapunovConfig& config);

}  // namespace arborwalk::transfer
