#pragma once

// Finite invariant coordinate subspaces found by orbit closure.

#include <vector>

#include "arborwalk/local_walk.hpp"
#include "arborwalk/walk.hpp"

namespace arborwalk::walk {

struct InvariantBlock {
    /// Vertex carrying the most basis vectors of the block; ties go to odd
    /// length, then to the smaller word.
    tree::Word anchor;
    /// Discovery order: successive images under U first.
    std::vector<BasisState> basis;
    DenseMatrix restriction;
    /// max |<out|U|in>| over in in the block and out outside it.
    double residual = 0.0;

    std::size_t dimension() const { return basis.size(); }
};

/// Closure of {seed} under the supports of U and U*. Throws
/// NotLocalizingError if it exceeds max_dimension.
InvariantBlock orbit_block(const LocalWalk& walk, const BasisState& seed, std::size_t max_dimension);

/// Blocks covering every basis vector x (x) tau with x in the ball. The
/// coin must be a fully localizing permutation (any phases) or have the
/// zero pattern of one of the q=4 localizing families; the dimension bound
/// is 2q.
std::vector<InvariantBlock> localizing_blocks(const coin::CoinMatrix& c,
                                              const disorder::DisorderField& disorder,
                                              const tree::BallIndex& ball);

/// Same without the coin precondition, for arbitrary coin fields.
std::vector<InvariantBlock> localizing_blocks(const LocalWalk& walk, const tree::BallIndex& ball,
                                              std::size_t max_dimension);

}  // namespace arborwalk::walk
