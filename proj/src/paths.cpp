#include "arborwalk/paths.hpp"

#include <algorithm>
#include <string>

#include "arborwalk/errors.hpp"

namespace arborwalk::paths {

namespace {

void check_q(int q) {
    if (q < 3) throw InputError("q must be at least 3");
}

// Letter appended by the shift from a vertex of the given length parity.
tree::Letter move_letter(const tree::Alphabet& alphabet, tree::Letter sigma, int parity) {
    if (alphabet.even()) return sigma;
    return alphabet.shifted(sigma, 1 + parity);
}

std::uint64_t count_from(const tree::Alphabet& alphabet, std::vector<tree::Letter>& stack,
                         int remaining) {
    if (remaining == 0) return stack.empty() ? 1 : 0;
    std::uint64_t total = 0;
    for (int a = 0; a < alphabet.q(); ++a) {
        const auto letter = static_cast<tree::Letter>(a);
        const bool back = !stack.empty() && stack.back() == alphabet.inverse(letter);
        const std::size_t depth = back ? stack.size() - 1 : stack.size() + 1;
        if (depth > static_cast<std::size_t>(remaining - 1)) continue;
        if (back) {
            stack.pop_back();
            total += count_from(alphabet, stack, remaining - 1);
            stack.push_back(alphabet.inverse(letter));
        } else {
            stack.push_back(letter);
            total += count_from(alphabet, stack, remaining - 1);
            stack.pop_back();
        }
    }
    return total;
}

struct Search {
    const coin::CoinMatrix& c;
    const disorder::DisorderField& disorder;
    const tree::Alphabet alphabet;
    const BasisState& target;
    const PathOptions& options;
    int n;
    PathSum result;
    PathRecord trail;

    void step(const tree::Word& x, tree::Letter tau, Complex weight, int depth, int diagonal) {
        const int remaining = n - depth;
        if (tree::distance(x, target.x) > remaining) return;
        if (remaining == 0) {
            if (tau != target.tau) return;
            result.value += weight;
            ++result.contributing_paths;
            if (result.records.size() < options.keep_records) {
                PathRecord r = trail;
                r.weight = weight;
                r.diagonal_count = diagonal;
                result.records.push_back(std::move(r));
            }
            return;
        }
        for (int s = 0; s < alphabet.q(); ++s) {
            const auto sigma = static_cast<tree::Letter>(s);
            const Complex entry = c(sigma, tau);
            if (entry == Complex{}) continue;
            const tree::Letter letter = move_letter(alphabet, sigma, x.parity());
            const tree::Word y = tree::append(x, letter, alphabet);
            const Complex w = weight * std::polar(1.0, disorder.angle(y, sigma)) * entry;
            if (options.prune_below > 0.0 && std::abs(w) < options.prune_below) {
                result.approximate = true;
                continue;
            }
            trail.vertices.push_back(y);
            trail.coins.push_back(sigma);
            trail.letters.push_back(letter);
            step(y, sigma, w, depth + 1, diagonal + (sigma == tau ? 1 : 0));
            trail.vertices.pop_back();
            trail.coins.pop_back();
            trail.letters.pop_back();
        }
    }
};

// Every coin entry is treated as non-zero, so only the combinatorics count.
struct AuditSearch {
    const tree::Alphabet& alphabet;
    const BasisState& start;
    int length;
    DiagonalAudit& audit;
    std::vector<tree::Letter> coins;
    std::vector<tree::Letter> letters;

    void step(const tree::Word& x, tree::Letter tau, int depth, int diagonal) {
        const int remaining = length - depth;
        if (tree::distance(x, start.x) > remaining) return;
        if (remaining == 0) {
            if (tau != start.tau) return;
            ++audit.closed_paths;
            ++audit.histogram[diagonal];
            audit.max_diagonal = std::max(audit.max_diagonal, diagonal);
            if (diagonal > length / 2) {
                if (audit.violations == 0) {
                    audit.first_violation_coins = coins;
                    audit.first_violation_letters = letters;
                }
                ++audit.violations;
            }
            // Offsets alternate 1, 2 from an even source and 2, 1 from an odd one.
            for (std::size_t k = 0; k < letters.size(); ++k) {
                const int offset =
                    1 + static_cast<int>((k + static_cast<std::size_t>(start.x.parity())) % 2);
                if (alphabet.shifted(letters[k], -offset) != coins[k + 1]) {
                    ++audit.trace_mismatches;
                    break;
                }
            }
            return;
        }
        for (int s = 0; s < alphabet.q(); ++s) {
            const auto sigma = static_cast<tree::Letter>(s);
            const tree::Letter letter = move_letter(alphabet, sigma, x.parity());
            coins.push_back(sigma);
            letters.push_back(letter);
            step(tree::append(x, letter, alphabet), sigma, depth + 1,
                 diagonal + (sigma == tau ? 1 : 0));
            coins.pop_back();
            letters.pop_back();
        }
    }
};

}  // namespace

std::uint64_t count_closed(int q, int n) {
    check_q(q);
    if (n < 0) throw InputError("path length must be non-negative");
    if (2 * n > kClosedCountCap) {
        throw CapacityError("closed path enumeration is capped at length " +
                            std::to_string(kClosedCountCap));
    }
    if (n == 0) return 1;
    const tree::Alphabet alphabet(q);
    std::vector<std::uint64_t> by_first(static_cast<std::size_t>(q), 0);
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < q; ++a) {
        std::vector<tree::Letter> stack{static_cast<tree::Letter>(a)};
        by_first[static_cast<std::size_t>(a)] = count_from(alphabet, stack, 2 * n - 1);
    }
    std::uint64_t total = 0;
    for (std::uint64_t v : by_first) total += v;
    return total;
}

std::uint64_t count_closed_by_distance(int q, int n) {
    check_q(q);
    if (n < 0) throw InputError("path length must be non-negative");
    std::vector<std::uint64_t> f(static_cast<std::size_t>(2 * n + 2), 0);
    f[0] = 1;
    for (int step = 0; step < 2 * n; ++step) {
        std::vector<std::uint64_t> g(f.size(), 0);
        for (std::size_t d = 0; d + 1 < f.size(); ++d) {
            if (f[d] == 0) continue;
            g[d + 1] += f[d] * static_cast<std::uint64_t>(d == 0 ? q : q - 1);
            if (d > 0) g[d - 1] += f[d];
        }
        f.swap(g);
    }
    return f[0];
}

PathSum amplitude_by_paths(const coin::CoinMatrix& c, const disorder::DisorderField& disorder,
                           const BasisState& target, const BasisState& source, int n,
                           const PathOptions& options) {
    if (n < 0) throw InputError("path length must be non-negative");
    if (n > kAmplitudeCap) {
        throw CapacityError("path sums are capped at n = " + std::to_string(kAmplitudeCap));
    }
    const tree::Alphabet alphabet(c.q());
    if (!alphabet.contains(source.tau) || !alphabet.contains(target.tau)) {
        throw InputError("coin state outside the alphabet");
    }
    Search search{c, disorder, alphabet, target, options, n, {}, {}};
    search.trail.vertices.push_back(source.x);
    search.trail.coins.push_back(source.tau);
    search.step(source.x, source.tau, Complex{1.0, 0.0}, 0, 0);
    return search.result;
}

PathSum amplitude_by_paths(const coin::CoinMatrix& c, const disorder::DisorderField& disorder,
                           const BasisState& source, int n, const PathOptions& options) {
    return amplitude_by_paths(c, disorder, source, source, n, options);
}

DiagonalAudit diagonal_count_audit(int q, int n, int source_parity, bool strict) {
    check_q(q);
    if (q % 2 == 0) throw InputError("the diagonal-count audit is defined for odd q");
    if (n < 0) throw InputError("path length must be non-negative");
    if (2 * n > kAuditCap) {
        throw CapacityError("diagonal-count audit is capped at length " + std::to_string(kAuditCap));
    }
    if (source_parity != 0 && source_parity != 1) throw InputError("parity must be 0 or 1");
    const tree::Alphabet alphabet(q);
    const tree::Word source = source_parity == 0 ? tree::Word{} : tree::reduce({0}, alphabet);
    DiagonalAudit audit;
    audit.q = q;
    audit.n = n;
    audit.source_parity = source_parity;
    for (int t = 0; t < q; ++t) {
        const BasisState start{source, static_cast<tree::Letter>(t)};
        AuditSearch search{alphabet, start, 2 * n, audit, {start.tau}, {}};
        search.step(source, start.tau, 0, 0);
    }
    if (strict && audit.violations > 0) {
        std::string trace;
        for (tree::Letter s : audit.first_violation_coins) trace += alphabet.name(s);
        throw NumericalError(std::to_string(audit.violations) + " closed paths of length " +
                             std::to_string(2 * n) + " have more than " + std::to_string(n) +
                             " diagonal coin entries (max " + std::to_string(audit.max_diagonal) +
                             ", e.g. coin trace " + trace + ")");
    }
    return audit;
}

}  // namespace arborwalk::paths
