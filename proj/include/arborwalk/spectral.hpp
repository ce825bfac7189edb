#pragma once

// Return amplitudes, Cesaro averages and eigen-decompositions of finite
// unitary blocks.

#include <string>
#include <vector>

#include "arborwalk/finite_volume.hpp"
#include "arborwalk/local_walk.hpp"
#include "arborwalk/walk.hpp"

namespace arborwalk::spectral {

using walk::BasisState;
using walk::Complex;
using walk::DenseMatrix;
using walk::Vector;

struct AmplitudeSeries {
    BasisState source;
    std::vector<Complex> values;  // <source|U^n|source>, n = 0..N
    std::string mode;
};

/// By repeated application on a ball; light-cone mode raises HorizonError
/// past the horizon.
AmplitudeSeries return_amplitudes(const walk::WalkOperator& u, const BasisState& source, int N);
/// On the finite-volume subspace (no horizon).
AmplitudeSeries return_amplitudes(const walk::FiniteVolume& fv, const BasisState& source, int N);
/// Infinite volume, on sparse states (meet in the middle).
AmplitudeSeries return_amplitudes(const walk::LocalWalk& walk, const BasisState& source, int N,
                                  std::size_t cap = walk::kDefaultStateCap);

/// c_M = (1/(M+1)) sum_{n=0}^{M} |value(n)|^2 for M = 0..N.
std::vector<double> wiener_average(const AmplitudeSeries& series, int N);

struct SpectralSummary {
    std::vector<double> eigenphases;  // sorted, in (-pi, pi]
    DenseMatrix eigenvectors;          // column k belongs to eigenphases[k]
    std::vector<double> participation;  // 1 / sum |v_i|^4
    double modulus_deviation = 0.0;     // max | |lambda| - 1 |
    double schur_offdiagonal = 0.0;     // max |T_ij|, i < j

    /// |<phi|v_k>|^2
    std::vector<double> weights(const Vector& phi) const;
    /// sum_k w_k e^{i n theta_k}
    Complex amplitude(const Vector& phi, int n) const;
    /// sum over distinct eigenphases (merged within tol) of the squared
    /// point masses of mu_phi.
    double point_mass_square_sum(const Vector& phi, double tol = 1e-9) const;
    /// The finite-N Cesaro mean predicted from the eigen-data.
    double cesaro_prediction(const Vector& phi, int N) const;
};

/// Complex Schur decomposition of a unitary block. Throws NumericalError
/// (and writes the block to a file named in the message) if the result is
/// not normal, or not unitary, to 1e-8.
SpectralSummary diagonalize_block(const DenseMatrix& u);

}  // namespace arborwalk::spectral
