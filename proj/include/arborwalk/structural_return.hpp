#pragma once

// Which return times are possible at all, from the zero pattern of a
// site-independent coin. If no closed (vertex, coin) path of length n with
// non-zero weights exists, <x (x) tau| U_omega^n |x (x) tau> = 0 exactly for
// every disorder realization.

#include <vector>

#include "arborwalk/coin.hpp"

namespace arborwalk::paths {

struct ReturnPattern {
    int q = 0;
    int source_parity = 0;
    /// possible[n][tau]: a closed path of length n from x (x) tau exists.
    std::vector<std::vector<bool>> possible;

    bool any(int n) const;
    /// Smallest n >= 1 with a possible return, or -1 up to the horizon.
    int first_return() const;
};

/// Decomposes closed walks on the tree into excursions: one step out, a
/// closed walk one level down, the step back, and a closed walk at the
/// start. Cost is O(N^2 q^3) bit operations.
ReturnPattern structural_returns(const coin::CoinMatrix& c, int source_parity, int N);

}  // namespace arborwalk::paths
