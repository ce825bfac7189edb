#pragma once

// Finite-volume restriction: boundary coins C^Phi_pi at distances L-1, L, L+1
// from an even centre make a ball-supported coordinate subspace H_Lambda
// exactly invariant.

#include <cstdint>
#include <vector>

#include "arborwalk/coin.hpp"
#include "arborwalk/walk.hpp"

namespace arborwalk::walk {

/// (2q/(q-2)) ((q-1)^{L+1} - 1)
std::size_t finite_volume_dimension(int q, int L);

struct FiniteVolume {
    WalkOperator op;  // boundary_restricted, on the ball of radius L + 2
    std::vector<std::size_t> basis;  // indices into op, increasing
    std::vector<std::int64_t> local;  // op index -> position in basis, or -1
    int L = 0;
    /// max |U_ij| over entries joining H_Lambda and its complement, in either
    /// direction (so it bounds both (I-P)UP and (I-P)U*P).
    double invariance_residual = 0.0;

    std::size_t dimension() const { return basis.size(); }
    BasisState state(std::size_t k) const { return op.state(basis[k]); }
    /// Position of a basis state in H_Lambda, or -1.
    std::int64_t find(const BasisState& s) const;

    SparseMatrix restricted_sparse() const;
    /// Throws CapacityError when the dimension exceeds block_dimension_cap().
    DenseMatrix restricted_dense() const;
    /// max |U*U - I| of the restriction.
    double unitarity_residual() const;
};

/// Requires L odd and positive and |center| even.
FiniteVolume build_finite_volume(const coin::CoinMatrix& c, const coin::PhaseDecoration& phi,
                                 const disorder::DisorderField& disorder, const tree::Word& center,
                                 int L, const tree::Alphabet& alphabet);

/// Same, with an arbitrary bulk coin field (the boundary shells are added).
FiniteVolume build_finite_volume(const disorder::SiteCoinField& bulk,
                                 const coin::PhaseDecoration& phi,
                                 const disorder::DisorderField& disorder, const tree::Word& center,
                                 int L, const tree::Alphabet& alphabet);

/// Largest singular value of A - B by power iteration on (A-B)*(A-B).
/// Both operators must live on the same ball.
double operator_norm_difference(const WalkOperator& a, const WalkOperator& b,
                                int iterations = 200);

/// Largest singular value of a sparse matrix by power iteration.
double sparse_norm(const SparseMatrix& m, int iterations = 200);

}  // namespace arborwalk::walk
