#pragma once

// Transfer matrices for generalized eigenvectors of the seven-diagonal
// unitary V_omega(C^l_1(r)), q = 3.
//
// Along the cyclic basis e_j the pair (psi(6j+5), psi(6j+6)) is
// T_z(alpha, beta, gamma) (psi(6j-1), psi(6j)) with
// alpha = omega_{6j} + omega_{6j+3}, beta = omega_{6j+1} + omega_{6j+4},
// gamma = omega_{6j+2} + omega_{6j+5}.

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace arborwalk::transfer {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Real4 = Eigen::Matrix4d;

/// T_z(alpha, beta, gamma) for C^l_1(r). Throws SingularParameterError when
/// z = 0, r z^2 e^{-i beta} = 1 or z^2 e^{-i beta} = r, and InputError
/// unless 0 < r < 1.
Matrix2 transfer_matrix(Complex z, double alpha, double beta, double gamma, double r);

/// psi(6j+1), psi(6j+2), psi(6j+3), psi(6j+4) from psi(6j-1), psi(6j).
/// omega holds omega_{6j} .. omega_{6j+5}.
std::array<Complex, 4> interior_coefficients(Complex z, const std::array<double, 6>& omega,
                                             double r, Complex psi_m1, Complex psi_0);

/// Phases (alpha, beta, gamma) of the block omega_{6j} .. omega_{6j+5}.
std::array<double, 3> block_phases(const std::array<double, 6>& omega);

/// Upper triangular R(theta, eta) = [[e^{i theta}, (t/r)(e^{i eta} - e^{i theta})], [0, e^{i eta}]].
Matrix2 quotient_r(double theta, double eta, double r);
/// L(theta, eta) = R(theta, eta)^T.
Matrix2 quotient_l(double theta, double eta, double r);
/// L(theta, eta) R(-theta, -eta)
Matrix2 lr_product(double theta, double eta, double r);
/// 2 (1 + (t/r)^2 (1 - cos(theta - eta)))
double lr_trace_closed_form(double theta, double eta, double r);

/// Real 4x4 image: each entry a becomes [[Re a, Im a], [-Im a, Re a]].
Real4 realify(const Matrix2& m);

/// chi(beta) with e^{-i chi} = (r e^{-i beta} - 1) / (e^{-i beta} - r).
double chi(double beta, double r);

struct T1Decomposition {
    double a = 0.0;  // gamma - chi(beta)
    double b = 0.0;  // -alpha
    Real4 m1, m2, n1, n2;
    /// max |realify(T_1) - (cos A M1 + sin A M2 + cos B N1 + sin B N2)|
    double residual = 0.0;
};

T1Decomposition decompose_t1(double alpha, double beta, double gamma, double r);

}  // namespace arborwalk::transfer
