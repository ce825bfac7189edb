#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arborwalk/errors.hpp"
#include "arborwalk/fractional_moments.hpp"
#include "arborwalk/local_walk.hpp"
#include "shift_resolvent.hpp"

using namespace arborwalk;
using namespace arborwalk::spectral;

namespace {

FractionalMomentConfig small_config(const coin::CoinMatrix& c) {
    FractionalMomentConfig config;
    config.coin = c;
    config.q = 3;
    config.L = 5;
    config.s = 0.2;
    config.z = default_z_grid(4);
    config.pairs = shift_chain_pairs(tree::Alphabet(3), tree::Word{}, config.L);
    config.realizations = 6;
    config.seed = 11;
    return config;
}

}  // namespace

TEST_CASE("the default z grid sits on a circle inside the unit disk") {
    const auto z = default_z_grid(16, 0.98);
    REQUIRE(z.size() == 16);
    for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(std::abs(z[k]) == doctest::Approx(0.98));
        CHECK(std::arg(z[k] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(k) / 16)) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("shift chain targets are backward shift images at distance k") {
    for (int q : {3, 4}) {
        const tree::Alphabet alphabet(q);
        const auto pairs = shift_chain_pairs(alphabet, tree::Word{}, 7);
        REQUIRE(pairs.size() == 5);
        const walk::LocalWalk shift(alphabet, disorder::SiteCoinField(coin::identity_coin(q)));
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            CHECK(pairs[k].distance == static_cast<int>(k) + 1);
            CHECK(pairs[k].source == walk::BasisState{tree::Word{}, 0});
            walk::SparseState psi{{pairs[k].target, 1.0}};
            for (std::size_t n = 0; n <= k; ++n) psi = shift.apply(psi);
            REQUIRE(psi.size() == 1);
            CHECK(psi.begin()->first == pairs[k].source);
        }
    }
}

TEST_CASE("realizations are reproducible and aggregation ignores order") {
    const auto config = small_config(coin::perturb(coin::permutation_coin(coin::cyclic_permutation(3)), 0.05, 1));
    std::vector<RealizationSample> samples;
    for (int r = 0; r < config.realizations; ++r) samples.push_back(fractional_moment_sample(config, r));
    const RealizationSample again = fractional_moment_sample(config, 3);
    CHECK(again.values == samples[3].values);
    CHECK(samples[2].values != samples[3].values);
    const auto forward = aggregate_fractional_moments(config, samples);
    std::reverse(samples.begin(), samples.end());
    const auto backward = aggregate_fractional_moments(config, samples);
    CHECK(forward.pair_mean == backward.pair_mean);
    CHECK(forward.fit.slope == backward.fit.slope);
    const auto parallel = fractional_moments(config);
    CHECK(parallel.pair_mean == forward.pair_mean);
    CHECK(parallel.fit.slope_se == forward.fit.slope_se);
}

TEST_CASE("the walk's Green function matches the closed form for decorated shifts") {
    const coin::PhaseDecoration phi{{0.4, -1.0, 2.1}};
    const auto config = small_config(coin::decorate(coin::identity_coin(3), phi));
    const tree::Alphabet alphabet(3);
    for (int r = 0; r < 3; ++r) {
        const RealizationSample sample = fractional_moment_sample(config, r);
        const walk::FiniteVolume fv =
            walk::build_finite_volume(config.coin, config.boundary_phases, config.disorder.reseeded(sample.seed),
                                      config.center, config.L, alphabet);
        for (std::size_t p = 0; p < config.pairs.size(); ++p) {
            for (std::size_t k = 0; k < config.z.size(); ++k) {
                const auto g = oracle::shift_green(fv, config.pairs[p].target, config.pairs[p].source, config.z[k]);
                CHECK(sample.values[p * config.z.size() + k] ==
                      doctest::Approx(std::pow(std::abs(g), config.s)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("the decay fit recovers an exact exponential profile") {
    FractionalMomentConfig config;
    config.z = {0.5};
    for (int d = 1; d <= 5; ++d) config.pairs.push_back({{}, {}, d});
    std::vector<RealizationSample> samples(4);
    for (int r = 0; r < 4; ++r) {
        samples[static_cast<std::size_t>(r)].index = r;
        for (int d = 1; d <= 5; ++d) samples[static_cast<std::size_t>(r)].values.push_back(std::exp(0.3 - 0.7 * d));
    }
    const auto est = aggregate_fractional_moments(config, samples);
    CHECK(est.fit.slope == doctest::Approx(-0.7));
    CHECK(est.fit.intercept == doctest::Approx(0.3));
    CHECK(est.fit.r2 == doctest::Approx(1.0));
    CHECK(est.fit.slope_se < 1e-7);
    CHECK(est.fit.upper95() < 0.0);
    CHECK(est.fit.points == 5);
}

TEST_CASE("conditioning failures are counted, not fatal") {
    auto config = small_config(coin::identity_coin(3));
    config.z = {0.5, 1.0};
    const RealizationSample s = fractional_moment_sample(config, 0);
    CHECK(s.failures == 1);
    for (std::size_t p = 0; p < config.pairs.size(); ++p) {
        CHECK_FALSE(std::isnan(s.values[p * 2]));
        CHECK(std::isnan(s.values[p * 2 + 1]));
    }
    auto bad = small_config(coin::identity_coin(3));
    bad.s = 1.5;
    CHECK_THROWS_AS(fractional_moments(bad), InputError);
}
