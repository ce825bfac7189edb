#pragma once

// Brute-force path sums on T_q: an oracle for matrix elements of U^n that
// shares no code with the walk operators.
//
// <target| U^n |source> is the sum over coin sequences sigma_1..sigma_n of
// the product of one-step elements e^{i omega^{sigma}_{y}} C_{sigma, tau}.

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "arborwalk/coin.hpp"
#include "arborwalk/disorder.hpp"
#include "arborwalk/local_walk.hpp"

namespace arborwalk::paths {

using Complex = std::complex<double>;
using walk::BasisState;

inline constexpr int kClosedCountCap = 16;  // largest 2n for count_closed
inline constexpr int kAmplitudeCap = 8;     // largest n for amplitude_by_paths
inline constexpr int kAuditCap = 12;        // largest 2n for the diagonal audit

/// Number of closed vertex paths of length 2n from a fixed vertex of T_q,
/// by depth-first enumeration. Throws CapacityError if 2n > 16.
std::uint64_t count_closed(int q, int n);

/// The same count from the recursion on the distance to the root
/// (q ways out of the root, q - 1 outward and 1 inward elsewhere).
std::uint64_t count_closed_by_distance(int q, int n);

struct PathRecord {
    /// x, x a_{i_1}, x a_{i_1} a_{i_2}, ... (n + 1 vertices)
    std::vector<tree::Word> vertices;
    /// tau, sigma_1, ..., sigma_n
    std::vector<tree::Letter> coins;
    /// Letters a_{i_k} appended at each step.
    std::vector<tree::Letter> letters;
    Complex weight;
    /// Steps using a diagonal coin entry (sigma_k = sigma_{k-1}).
    int diagonal_count = 0;
};

struct PathOptions {
    /// Drop partial paths whose weight modulus falls below this; 0 keeps
    /// every path and the sum is exact.
    double prune_below = 0.0;
    /// Keep up to this many contributing paths in the result.
    std::size_t keep_records = 0;
};

struct PathSum {
    Complex value;
    std::uint64_t contributing_paths = 0;
    bool approximate = false;
    std::vector<PathRecord> records;
};

/// <target| U_omega(C)^n |source>. Throws CapacityError if n > 8.
PathSum amplitude_by_paths(const coin::CoinMatrix& c, const disorder::DisorderField& disorder,
                           const BasisState& target, const BasisState& source, int n,
                           const PathOptions& options = {});

/// <source| U_omega(C)^n |source>.
PathSum amplitude_by_paths(const coin::CoinMatrix& c, const disorder::DisorderField& disorder,
                           const BasisState& source, int n, const PathOptions& options = {});

struct DiagonalAudit {
    int q = 0;
    int n = 0;
    int source_parity = 0;
    std::uint64_t closed_paths = 0;
    int max_diagonal = 0;
    /// diagonal count j -> number of closed (vertex, coin) paths of length 2n
    std::map<int, std::uint64_t> histogram;
    /// Paths whose coin trace breaks the alternating offset pattern.
    std::uint64_t trace_mismatches = 0;
    /// Closed paths with j > n, and the coin and letter traces of the first.
    std::uint64_t violations = 0;
    std::vector<tree::Letter> first_violation_coins;
    std::vector<tree::Letter> first_violation_letters;
};

/// Enumerates every closed (vertex, coin) path of length 2n from a vertex of
/// the given length parity, for all starting coin states, treating every
/// coin entry as non-zero. Throws CapacityError if 2n > 12 and InputError
/// for even q. When strict, a path with j > n raises NumericalError after
/// the enumeration finishes.
DiagonalAudit diagonal_count_audit(int q, int n, int source_parity, bool strict = true);

}  // namespace arborwalk::paths
