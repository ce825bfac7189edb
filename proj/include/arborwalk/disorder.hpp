#pragma once

// Random phases omega^tau_x and site-dependent coin fields.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "arborwalk/coin.hpp"
#include "arborwalk/tree.hpp"

namespace arborwalk::disorder {

enum class Distribution {
    none,  // omega = 0 everywhere
    uniform_full,
    uniform_interval,
    density_table,
};

/// i.i.d. angles per (vertex, letter). The value at (x, tau) is a pure
/// function of (seed, x, tau), so it does not depend on ball size or on the
/// order of queries.
class DisorderField {
public:
    /// The deterministic field omega = 0.
    DisorderField() = default;

    static DisorderField none();
    static DisorderField uniform_full(std::uint64_t seed);
    /// Uniform on [a, b], b - a in (0, 2 pi].
    static DisorderField uniform_interval(std::uint64_t seed, double a, double b);
    /// Piecewise constant density on [0, 2 pi) with equal-width bins.
    /// Weights need not be normalised but must be non-negative with a
    /// positive total.
    static DisorderField density_table(std::uint64_t seed, std::vector<double> weights);

    Distribution distribution() const { return distribution_; }
    std::uint64_t seed() const { return seed_; }
    bool is_none() const { return distribution_ == Distribution::none; }

    double angle(const tree::Word& x, tree::Letter tau) const;

    /// The field T_z omega: x -> omega_{z x}.
    DisorderField translated(const tree::Word& z, const tree::Alphabet& alphabet) const;

    /// Same distribution, different seed.
    DisorderField reseeded(std::uint64_t seed) const;

    /// Inverse CDF: maps a uniform draw in [0, 1) to an angle.
    double quantile(double u) const;

private:

    Distribution distribution_ = Distribution::none;
    std::uint64_t seed_ = 0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<double> cdf_;
    std::optional<tree::Word> prefix_;
    std::optional<tree::Alphabet> alphabet_;
};

/// Coin matrices C(x): a default, shells around a centre, and per-vertex
/// overrides. Lookup order is override, then the first matching shell,
/// then the default.
class SiteCoinField {
public:
    explicit SiteCoinField(coin::CoinMatrix default_coin);

    int q() const { return default_.q(); }
    const coin::CoinMatrix& default_coin() const { return default_; }

    void set_override(const tree::Word& x, coin::CoinMatrix c);
    /// Coin c at every x with min_distance <= d(x, center) <= max_distance.
    void add_shell(const tree::Word& center, int min_distance, int max_distance,
                   coin::CoinMatrix c);

    const coin::CoinMatrix& at(const tree::Word& x) const;
    bool uniform() const { return overrides_.empty() && shells_.empty(); }

private:
    struct Shell {
        tree::Word center;
        int min_distance;
        int max_distance;
        coin::CoinMatrix coin;
    };

    void check(const coin::CoinMatrix& c) const;

    coin::CoinMatrix default_;
    std::vector<Shell> shells_;
    std::unordered_map<tree::Word, coin::CoinMatrix, tree::WordHash> overrides_;
};

}  // namespace arborwalk::disorder
