#pragma once

// Monte Carlo estimates of E |G(x, y; z)|^s over disorder realizations on a
// finite volume, with a fit of log E|G|^s against d(x, y).

#include <cstdint>
#include <vector>

#include "arborwalk/coin.hpp"
#include "arborwalk/disorder.hpp"
#include "arborwalk/local_walk.hpp"

namespace arborwalk::spectral {

struct GreenPair {
    walk::BasisState target;  // x
    walk::BasisState source;  // y
    int distance = 0;         // d(x, y)
};

struct FractionalMomentConfig {
    coin::CoinMatrix coin = coin::identity_coin(3);
    coin::PhaseDecoration boundary_phases = coin::PhaseDecoration::zero(3);
    int q = 3;
    int L = 7;
    tree::Word center;
    double s = 0.2;
    std::vector<walk::Complex> z;
    std::vector<GreenPair> pairs;
    int realizations = 200;
    std::uint64_t seed = 1;
    /// Distribution template; each realization reseeds it.
    disorder::DisorderField disorder = disorder::DisorderField::uniform_full(1);
};

/// 0.98 e^{i lambda} for count equispaced lambda in [0, 2 pi).
std::vector<walk::Complex> default_z_grid(int count = 16, double radius = 0.98);

/// Targets U^{-k} (center (x) a_1), k = 1..L-2, of the free shift, paired
/// with the source center (x) a_1. Along this chain d(x, y) = k.
std::vector<GreenPair> shift_chain_pairs(const tree::Alphabet& alphabet, const tree::Word& center,
                                         int L);

/// One realization: |G|^s for every (pair, z), pair-major. NaN marks a
/// conditioning failure.
struct RealizationSample {
    int index = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;
    int failures = 0;
};

RealizationSample fractional_moment_sample(const FractionalMomentConfig& config, int index);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0;       // max of the regression and Monte Carlo errors
    double regression_se = 0.0;
    double monte_carlo_se = 0.0;
    int points = 0;
    /// slope + 1.96 slope_se
    double upper95() const { return slope + 1.96 * slope_se; }
};

struct FractionalMomentEstimate {
    double s = 0.0;
    std::vector<walk::Complex> z;
    std::vector<GreenPair> pairs;
    int realizations = 0;
    int conditioning_failures = 0;
    /// Indexed [pair][z].
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> standard_error;
    /// z-averaged mean per pair and its standard error.
    std::vector<double> pair_mean;
    std::vector<double> pair_standard_error;
    DecayFit fit;
};

/// Combines samples (any order; they are sorted by index).
FractionalMomentEstimate aggregate_fractional_moments(const FractionalMomentConfig& config,
                                                      std::vector<RealizationSample> samples);

/// Runs all realizations in parallel and aggregates in index order.
FractionalMomentEstimate fractional_moments(const FractionalMomentConfig& config);

}  // namespace arborwalk::spectral
