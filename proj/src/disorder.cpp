#include "arborwalk/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "arborwalk/errors.hpp"
#include "arborwalk/rng.hpp"

namespace arborwalk::disorder {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

DisorderField DisorderField::none() {
    return DisorderField{};
}

DisorderField DisorderField::uniform_full(std::uint64_t seed) {
    DisorderField f;
    f.distribution_ = Distribution::uniform_full;
    f.seed_ = seed;
    f.lo_ = 0.0;
    f.hi_ = kTwoPi;
    return f;
}

DisorderField DisorderField::uniform_interval(std::uint64_t seed, double a, double b) {
    if (!(b > a) || !(b - a <= kTwoPi + 1e-12) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InputError("uniform interval [a, b] needs a < b and b - a <= 2 pi");
    }
    DisorderField f;
    f.distribution_ = Distribution::uniform_interval;
    f.seed_ = seed;
    f.lo_ = a;
    f.hi_ = b;
    return f;
}

DisorderField DisorderField::density_table(std::uint64_t seed, std::vector<double> weights) {
    if (weights.empty()) {
        throw InputError("density table is empty");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InputError("density table weights must be finite and non-negative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw InputError("density table has no mass");
    }
    DisorderField f;
    f.distribution_ = Distribution::density_table;
    f.seed_ = seed;
    f.cdf_.resize(weights.size() + 1, 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        f.cdf_[k + 1] = f.cdf_[k] + weights[k] / total;
    }
    f.cdf_.back() = 1.0;
    return f;
}

double DisorderField::quantile(double u) const {
    switch (distribution_) {
        case Distribution::none:
            return 0.0;
        case Distribution::uniform_full:
        case Distribution::uniform_interval:
            return lo_ + (hi_ - lo_) * u;
        case Distribution::density_table: {
            const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
            std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
            k = std::clamp<std::size_t>(k, 1, cdf_.size() - 1) - 1;
            // Skip empty bins.
            while (cdf_[k + 1] <= cdf_[k] && k + 2 < cdf_.size()) ++k;
            const double width = kTwoPi / static_cast<double>(cdf_.size() - 1);
            const double frac = (u - cdf_[k]) / (cdf_[k + 1] - cdf_[k]);
            return width * (static_cast<double>(k) + std::clamp(frac, 0.0, 1.0));
        }
    }
    return 0.0;
}

double DisorderField::angle(const tree::Word& x, tree::Letter tau) const {
    if (distribution_ == Distribution::none) {
        return 0.0;
    }
    const tree::Word* site = &x;
    tree::Word shifted;
    if (prefix_) {
        shifted = tree::multiply(*prefix_, x, *alphabet_);
        site = &shifted;
    }
    const std::uint64_t key = static_cast<std::uint64_t>(site->hash());
    const std::uint64_t tail = (static_cast<std::uint64_t>(site->length()) << 8) | tau;
    return quantile(rng::uniform(seed_, key, tail));
}

DisorderField DisorderField::translated(const tree::Word& z, const tree::Alphabet& alphabet) const {
    DisorderField out = *this;
    out.prefix_ = prefix_ ? tree::multiply(*prefix_, z, alphabet) : z;
    out.alphabet_ = alphabet;
    return out;
}

DisorderField DisorderField::reseeded(std::uint64_t seed) const {
    DisorderField out = *this;
    out.seed_ = seed;
    return out;
}

SiteCoinField::SiteCoinField(coin::CoinMatrix default_coin) : default_(std::move(default_coin)) {}

void SiteCoinField::check(const coin::CoinMatrix& c) const {
    if (c.q() != default_.q()) {
        throw InputError("site coin has q=" + std::to_string(c.q()) + ", field has q=" +
                         std::to_string(default_.q()));
    }
}

void SiteCoinField::set_override(const tree::Word& x, coin::CoinMatrix c) {
    check(c);
    overrides_.insert_or_assign(x, std::move(c));
}

void SiteCoinField::add_shell(const tree::Word& center, int min_distance, int max_distance,
                              coin::CoinMatrix c) {
    check(c);
    shells_.push_back({center, min_distance, max_distance, std::move(c)});
}

const coin::CoinMatrix& SiteCoinField::at(const tree::Word& x) const {
    if (!overrides_.empty()) {
        const auto it = overrides_.find(x);
        if (it != overrides_.end()) {
            return it->second;
        }
    }
    for (const Shell& s : shells_) {
        const int d = tree::distance(s.center, x);
        if (d >= s.min_distance && d <= s.max_distance) {
            return s.coin;
        }
    }
    return default_;
}

}  // namespace arborwalk::disorder
