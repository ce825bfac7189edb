#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arborwalk/disorder.hpp"
#include "arborwalk/errors.hpp"
#include "arborwalk/rng.hpp"

using namespace arborwalk;
using namespace arborwalk::disorder;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::vector<tree::Word> sample_words(const tree::Alphabet& alphabet, int count) {
    std::mt19937 gen(5);
    std::uniform_int_distribution<int> len(0, 6), letter(0, alphabet.q() - 1);
    std::vector<tree::Word> out;
    for (int k = 0; k < count; ++k) {
        std::vector<int> raw(static_cast<std::size_t>(len(gen)));
        for (int& a : raw) a = letter(gen);
        out.push_back(tree::reduce(raw, alphabet));
    }
    return out;
}

}  // namespace

TEST_CASE("Philox matches the published known-answer vectors") {
    CHECK(rng::philox4x32({0, 0, 0, 0}, {0, 0}) ==
          rng::Counter{0x6627e8d5U, 0xe169c58dU, 0xbc57ac4cU, 0x9b00dbd8U});
    CHECK(rng::philox4x32({0xffffffffU, 0xffffffffU, 0xffffffffU, 0xffffffffU}, {0xffffffffU, 0xffffffffU}) ==
          rng::Counter{0x408f276dU, 0x41c83b0eU, 0xa20bc7c6U, 0x6d5451fdU});
    CHECK(rng::philox4x32({0x243f6a88U, 0x85a308d3U, 0x13198a2eU, 0x03707344U}, {0xa4093822U, 0x299f31d0U}) ==
          rng::Counter{0xd16cfe09U, 0x94fdccebU, 0x5001e420U, 0x24126ea1U});
}

TEST_CASE("the zero field is identically zero") {
    const tree::Alphabet alphabet(3);
    const DisorderField none;
    for (const auto& w : sample_words(alphabet, 50))
        for (tree::Letter t = 0; t < 3; ++t) CHECK(none.angle(w, t) == 0.0);
}

TEST_CASE("angles are pure functions of seed, vertex and letter") {
    const tree::Alphabet alphabet(4);
    const auto words = sample_words(alphabet, 200);
    const DisorderField a = DisorderField::uniform_full(42);
    const DisorderField b = DisorderField::uniform_full(42);
    const DisorderField c = DisorderField::uniform_full(43);
    int differ = 0;
    for (auto it = words.rbegin(); it != words.rend(); ++it) {
        for (tree::Letter t = 0; t < 4; ++t) {
            CHECK(a.angle(*it, t) == b.angle(*it, t));
            if (a.angle(*it, t) != c.angle(*it, t)) ++differ;
            CHECK(a.angle(*it, t) >= 0.0);
            CHECK(a.angle(*it, t) < kTwoPi);
        }
    }
    CHECK(differ > 700);
    CHECK(a.reseeded(43).angle(words[3], 1) == c.angle(words[3], 1));
}

TEST_CASE("uniform angles have the right first two moments") {
    const tree::Alphabet alphabet(3);
    const DisorderField f = DisorderField::uniform_full(9);
    double sum = 0, sum2 = 0;
    int n = 0;
    const tree::BallIndex ball(alphabet, tree::Word{}, 8);
    for (const auto& w : ball.vertices()) {
        for (tree::Letter t = 0; t < 3; ++t) {
            const double x = f.angle(w, t) / kTwoPi;
            sum += x;
            sum2 += x * x;
            ++n;
        }
    }
    const double mean = sum / n, var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(var == doctest::Approx(1.0 / 12).epsilon(0.05));
}

TEST_CASE("interval and table distributions respect their support") {
    const tree::Alphabet alphabet(3);
    const DisorderField interval = DisorderField::uniform_interval(1, 0.5, 1.0);
    const DisorderField table = DisorderField::density_table(1, {0.0, 1.0, 0.0, 0.0});
    for (const auto& w : sample_words(alphabet, 100)) {
        for (tree::Letter t = 0; t < 3; ++t) {
            CHECK(interval.angle(w, t) >= 0.5);
            CHECK(interval.angle(w, t) <= 1.0);
            CHECK(table.angle(w, t) >= kTwoPi / 4);
            CHECK(table.angle(w, t) <= kTwoPi / 2);
        }
    }
    CHECK(table.quantile(0.0) == doctest::Approx(kTwoPi / 4));
    CHECK(table.quantile(0.5) == doctest::Approx(3 * kTwoPi / 8));
    CHECK(interval.quantile(0.5) == doctest::Approx(0.75));
    CHECK_THROWS_AS(DisorderField::uniform_interval(1, 1.0, 0.5), InputError);
    CHECK_THROWS_AS(DisorderField::density_table(1, {0.0, 0.0}), InputError);
    CHECK_THROWS_AS(DisorderField::density_table(1, {1.0, -1.0}), InputError);
}

TEST_CASE("translated fields read the field at z x") {
    const tree::Alphabet alphabet(3);
    const DisorderField f = DisorderField::uniform_full(77);
    const tree::Word z = tree::parse_word("ab", alphabet);
    const DisorderField g = f.translated(z, alphabet);
    for (const auto& w : sample_words(alphabet, 100))
        for (tree::Letter t = 0; t < 3; ++t)
            CHECK(g.angle(w, t) == f.angle(tree::multiply(z, w, alphabet), t));
    const tree::Word z2 = tree::parse_word("ca", alphabet);
    const DisorderField h = g.translated(z2, alphabet);
    const tree::Word zz = tree::multiply(z, z2, alphabet);
    for (const auto& w : sample_words(alphabet, 20))
        CHECK(h.angle(w, 0) == f.angle(tree::multiply(zz, w, alphabet), 0));
}

TEST_CASE("site coin fields resolve override, then shell, then default") {
    const tree::Alphabet alphabet(3);
    SiteCoinField field(coin::identity_coin(3));
    const coin::CoinMatrix shell = coin::permutation_coin(coin::cyclic_permutation(3));
    const coin::CoinMatrix special = coin::family_q3_localizing(1, 0.5);
    field.add_shell(tree::Word{}, 2, 3, shell);
    const tree::Word x = tree::parse_word("ab", alphabet);
    field.set_override(x, special);
    CHECK_FALSE(field.uniform());
    CHECK(field.at(tree::Word{}).matrix() == coin::identity_coin(3).matrix());
    CHECK(field.at(tree::parse_word("ba", alphabet)).matrix() == shell.matrix());
    CHECK(field.at(tree::parse_word("bab", alphabet)).matrix() == shell.matrix());
    CHECK(field.at(tree::parse_word("baba", alphabet)).matrix() == coin::identity_coin(3).matrix());
    CHECK(field.at(x).matrix() == special.matrix());
    CHECK_THROWS_AS(field.set_override(x, coin::identity_coin(4)), InputError);
}
