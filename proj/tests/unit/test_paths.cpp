#include <doctest.h>

#include <cmath>
#include <random>

#include "arborwalk/errors.hpp"
#include "arborwalk/paths.hpp"
#include "oracles.hpp"

using namespace arborwalk;
using namespace arborwalk::paths;

namespace {

/// Closed walks of length 2n from the root by propagating walk counts.
std::uint64_t closed_by_counting(int q, int n) {
    std::map<oracle::RawWord, std::uint64_t> count{{{}, 1}};
    for (int k = 0; k < 2 * n; ++k) {
        std::map<oracle::RawWord, std::uint64_t> next;
        for (const auto& [w, c] : count) {
            for (int a = 0; a < q; ++a) next[oracle::times(w, a, q)] += c;
        }
        count = std::move(next);
    }
    return count[{}];
}

oracle::Walk::State raw(const BasisState& s) {
    return {oracle::RawWord(s.x.letters().begin(), s.x.letters().end()), s.tau};
}

}  // namespace

TEST_CASE("closed path counts on small trees") {
    CHECK(count_closed(3, 1) == 3);
    CHECK(count_closed(3, 2) == 15);
    CHECK(count_closed(4, 1) == 4);
    CHECK(count_closed(4, 2) == 28);
    for (int q : {3, 4, 5}) {
        for (int n = 1; n <= 5; ++n) {
            CHECK(count_closed(q, n) == closed_by_counting(q, n));
            CHECK(count_closed_by_distance(q, n) == count_closed(q, n));
        }
    }
    CHECK_THROWS_AS(count_closed(3, 9), CapacityError);
}

TEST_CASE("closed path counts grow at the rate 4(q - 1) n^(-3/2)") {
    for (int q : {3, 4}) {
        const int n = 7;
        const double ratio = static_cast<double>(count_closed(q, n + 1)) / static_cast<double>(count_closed(q, n));
        const double predicted = 4.0 * (q - 1) * std::pow(static_cast<double>(n) / (n + 1), 1.5);
        CHECK(std::abs(ratio / predicted - 1.0) < 0.1);
        CHECK(ratio < 4.0 * (q - 1));
        const double earlier = static_cast<double>(count_closed(q, n)) / static_cast<double>(count_closed(q, n - 1));
        CHECK(earlier < ratio);
    }
}

TEST_CASE("path sums equal operator powers") {
    std::mt19937_64 gen(5);
    for (int q : {3, 4}) {
        const tree::Alphabet alphabet(q);
        for (int trial = 0; trial < 50; ++trial) {
            const coin::CoinMatrix c = coin::haar_random(q, gen());
            const auto omega = disorder::DisorderField::uniform_full(gen());
            const oracle::Walk walk{q, c.matrix(), omega};
            const int n = 1 + trial % 6;
            const BasisState source{tree::parse_word(trial % 2 == 0 ? "" : alphabet.name(1), alphabet),
                                    static_cast<tree::Letter>(trial % q)};
            const PathSum ret = amplitude_by_paths(c, omega, source, n);
            CHECK(std::abs(ret.value - walk.amplitude(raw(source), raw(source), n)) < 1e-12);
            CHECK_FALSE(ret.approximate);
            oracle::Walk::Sparse psi{{raw(source), 1.0}};
            for (int k = 0; k < n; ++k) psi = walk.apply(psi);
            int checked = 0;
            for (const auto& [s, v] : psi) {
                if (checked++ > 6) break;
                const BasisState target{oracle::to_word(s.first, alphabet), static_cast<tree::Letter>(s.second)};
                CHECK(std::abs(amplitude_by_paths(c, omega, target, source, n).value - v) < 1e-12);
            }
        }
    }
}

TEST_CASE("the shift never returns") {
    for (int q : {3, 4, 5}) {
        for (int n = 0; n <= 8; ++n) {
            const PathSum s = amplitude_by_paths(coin::identity_coin(q), disorder::DisorderField{},
                                                 BasisState{tree::Word{}, 0}, n);
            CHECK(s.value == Complex(n == 0 ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("propagating q = 4 coins never return") {
    const tree::Alphabet alphabet(4);
    for (auto kind : {coin::Q4Kind::propagating_1, coin::Q4Kind::propagating_2, coin::Q4Kind::propagating_3}) {
        const coin::CoinMatrix c = coin::family_q4(kind, 0.7, 1.1);
        for (int n = 1; n <= 8; ++n) {
            for (tree::Letter tau = 0; tau < 4; ++tau) {
                const PathSum s = amplitude_by_paths(c, disorder::DisorderField::uniform_full(2),
                                                     BasisState{tree::parse_word("aB", alphabet), tau}, n);
                CHECK(s.value == Complex(0.0));
                CHECK(s.contributing_paths == 0);
            }
        }
    }
}

TEST_CASE("path records describe closed weighted paths") {
    const coin::CoinMatrix c = coin::haar_random(3, 21);
    const auto omega = disorder::DisorderField::uniform_full(8);
    PathOptions options;
    options.keep_records = 1'000'000;
    const BasisState source{tree::Word{}, 1};
    const PathSum s = amplitude_by_paths(c, omega, source, 6, options);
    REQUIRE(s.records.size() == s.contributing_paths);
    Complex total = 0.0;
    for (const PathRecord& p : s.records) {
        REQUIRE(p.vertices.size() == 7);
        REQUIRE(p.coins.size() == 7);
        REQUIRE(p.letters.size() == 6);
        CHECK(p.vertices.front() == source.x);
        CHECK(p.vertices.back() == source.x);
        CHECK(p.coins.front() == source.tau);
        CHECK(p.coins.back() == source.tau);
        CHECK(std::abs(p.weight) <= 1.0 + 1e-12);
        int diagonal = 0;
        Complex weight = 1.0;
        for (std::size_t k = 1; k < p.coins.size(); ++k) {
            if (p.coins[k] == p.coins[k - 1]) ++diagonal;
            CHECK(static_cast<int>(p.letters[k - 1]) ==
                  oracle::step(p.coins[k], p.vertices[k - 1].length(), 3));
            weight *= std::polar(1.0, omega.angle(p.vertices[k], p.coins[k])) * c.matrix()(p.coins[k], p.coins[k - 1]);
        }
        CHECK(diagonal == p.diagonal_count);
        CHECK(std::abs(weight - p.weight) < 1e-14);
        total += p.weight;
    }
    CHECK(std::abs(total - s.value) < 1e-12);
    options.prune_below = 0.05;
    options.keep_records = 0;
    const PathSum pruned = amplitude_by_paths(c, omega, source, 6, options);
    CHECK(pruned.approximate);
    CHECK(pruned.records.empty());
    CHECK(pruned.contributing_paths <= s.contributing_paths);
    CHECK_THROWS_AS(amplitude_by_paths(c, omega, source, 9), CapacityError);
}

TEST_CASE("the diagonal audit on small lengths") {
    for (int parity : {0, 1}) {
        const DiagonalAudit one = diagonal_count_audit(3, 1, parity);
        CHECK(one.max_diagonal <= 1);
        CHECK(one.closed_paths == count_closed(3, 1));
        const DiagonalAudit three = diagonal_count_audit(3, 3, parity);
        CHECK(three.max_diagonal <= 3);
        std::uint64_t total = 0;
        for (const auto& [j, count] : three.histogram) total += count;
        CHECK(total == three.closed_paths);
        CHECK(three.closed_paths == count_closed(3, 3));
        CHECK(three.trace_mismatches == 0);
        const DiagonalAudit five = diagonal_count_audit(5, 2, parity);
        CHECK(five.max_diagonal <= 2);
        CHECK(five.trace_mismatches == 0);
    }
    CHECK_THROWS_AS(diagonal_count_audit(4, 2, 0), InputError);
    CHECK_THROWS_AS(diagonal_count_audit(3, 7, 0), CapacityError);
}

TEST_CASE("a reported violation is a genuine closed path") {
    const DiagonalAudit audit = diagonal_count_audit(3, 5, 0, false);
    REQUIRE(audit.violations > 0);
    CHECK(audit.max_diagonal > 5);
    const auto& coins = audit.first_violation_coins;
    const auto& letters = audit.first_violation_letters;
    REQUIRE(coins.size() == 11);
    REQUIRE(letters.size() == 10);
    oracle::RawWord x;
    int diagonal = 0;
    for (std::size_t k = 1; k < coins.size(); ++k) {
        CHECK(static_cast<int>(letters[k - 1]) == oracle::step(coins[k], x.size(), 3));
        x = oracle::times(x, letters[k - 1], 3);
        if (coins[k] == coins[k - 1]) ++diagonal;
    }
    CHECK(x.empty());
    CHECK(coins.back() == coins.front());
    CHECK(diagonal > 5);
    CHECK_THROWS_AS(diagonal_count_audit(3, 5, 0, true), NumericalError);
}
