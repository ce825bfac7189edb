#pragma once

// The U_omega(C^l_1(r))-cyclic subspace of x_e (x) a on T_3 and the
// seven-diagonal unitary V_omega obtained by restricting the walk to it.
//
// For an even-length anchor x_e the basis is
//   e_{6k+i} = x_e w^k p_i (x) tau_i,  w = cbac,  i = 1..6,
// with (p_i, tau_i) = (e, a), (c, c), (c, a), (c, b), (cb, c), (cb, b).

#include <array>
#include <cstdint>
#include <vector>

#include "arborwalk/coin.hpp"
#include "arborwalk/disorder.hpp"
#include "arborwalk/local_walk.hpp"
#include "arborwalk/walk.hpp"

namespace arborwalk::transfer {

using walk::BasisState;

/// e_j for the given anchor.
BasisState cyclic_state(const tree::Word& anchor, std::int64_t j, const tree::Alphabet& alphabet);

struct CyclicBasis {
    tree::Word anchor;
    std::int64_t j_min = 0;
    std::int64_t j_max = 0;
    /// e_{j_min} .. e_{j_max}, every vertex within the ball.
    std::vector<BasisState> states;
    /// Size of the orbit closure of anchor (x) a inside the ball.
    std::size_t closure_size = 0;

    const BasisState& at(std::int64_t j) const { return states[static_cast<std::size_t>(j - j_min)]; }
    std::int64_t find(const BasisState& s) const;
};

/// Orbit closure of anchor (x) a under the supports of U and U* inside the
/// ball of the given radius around the anchor, checked against e_j: every
/// closure element is some e_j, and every e_j at distance <= radius - 3
/// from the anchor lies in the closure. Throws InputError if the anchor has
/// odd length or the radius is below 4, NumericalError if the check fails.
CyclicBasis build_cyclic_basis(const tree::Word& anchor, int radius);

struct BandUnitaryWindow {
    double r = 0.0;
    std::int64_t j_min = 0;
    std::int64_t j_max = 0;
    std::vector<BasisState> states;
    /// omega_j: the disorder angle at the row state e_j.
    std::vector<double> omega;
    /// Entry (a, b) is <e_{j_min+a}| U_omega |e_{j_min+b}>.
    walk::DenseMatrix matrix;

    std::size_t size() const { return states.size(); }
    walk::Complex element(std::int64_t j, std::int64_t k) const {
        return matrix(j - j_min, k - j_min);
    }
    double phase(std::int64_t j) const { return omega[static_cast<std::size_t>(j - j_min)]; }
    /// max |(V*V - I)_{jk}| over columns at least margin away from both edges.
    double interior_unitarity_residual(int margin = 7) const;
};

/// Restriction of U_omega(Phi C^l_1(r)) to e_{j_min} .. e_{j_max}.
BandUnitaryWindow build_v(double r, const disorder::DisorderField& disorder,
                          const tree::Word& anchor, std::int64_t j_min, std::int64_t j_max,
                          const coin::PhaseDecoration& phi = coin::PhaseDecoration::zero(3));

/// The six angles omega_{6j} .. omega_{6j+5} of a window.
std::array<double, 6> block_omega(const BandUnitaryWindow& v, std::int64_t j);

}  // namespace arborwalk::transfer
