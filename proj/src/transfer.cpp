#include "arborwalk/transfer.hpp"

#include <cmath>

#include "arborwalk/errors.hpp"

namespace arborwalk::transfer {

namespace {

constexpr double kSingularTolerance = 1e-13;
const Complex kI{0.0, 1.0};

void check_r(double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw InputError("r must lie in (0, 1)");
    }
}

double t_of(double r) {
    return std::sqrt(1.0 - r * r);
}

// z^2 e^{-i beta} - r, checked against both degeneracies.
Complex checked_denominator(Complex z, double beta, double r) {
    if (std::abs(z) <= kSingularTolerance) {
        throw SingularParameterError("transfer matrix needs z != 0");
    }
    const Complex w = z * z * std::exp(-kI * beta);
    if (std::abs(r * w - 1.0) <= kSingularTolerance) {
        throw SingularParameterError("r z^2 e^{-i beta} = 1");
    }
    if (std::abs(w - r) <= kSingularTolerance) {
        throw SingularParameterError("z^2 e^{-i beta} = r");
    }
    return w - r;
}

}  // namespace

Matrix2 transfer_matrix(Complex z, double alpha, double beta, double gamma, double r) {
    check_r(r);
    const double t = t_of(r);
    const Complex den = checked_denominator(z, beta, r);
    const Complex w = z * z * std::exp(-kI * beta);
    const Complex prefactor = (r * w - 1.0) * std::exp(kI * gamma) / (r * z * z * den);
    const Complex corner =
        std::exp(-kI * (alpha + gamma)) * std::pow(z, 4) * den / (r * w - 1.0) + t * t;
    Matrix2 m;
    m << r * r, -t * r, -t * r, corner;
    return prefactor * m;
}

std::array<Complex, 4> interior_coefficients(Complex z, const std::array<double, 6>& omega,
                                             double r, Complex psi_m1, Complex psi_0) {
    check_r(r);
    const double t = t_of(r);
    const double beta = omega[1] + omega[4];
    const Complex den = checked_denominator(z, beta, r);
    const Complex x = r * psi_m1 - t * psi_0;
    return {
        t * std::exp(kI * (omega[2] - omega[4])) * x / den,
        std::exp(kI * omega[2]) * x / z,
        z * std::exp(-kI * omega[0]) * psi_0,
        t * std::exp(kI * omega[2]) * x / (z * den),
    };
}

std::array<double, 3> block_phases(const std::array<double, 6>& omega) {
    return {omega[0] + omega[3], omega[1] + omega[4], omega[2] + omega[5]};
}

Matrix2 quotient_r(double theta, double eta, double r) {
    check_r(r);
    const double t = t_of(r);
    Matrix2 m;
    m << std::exp(kI * theta), (t / r) * (std::exp(kI * eta) - std::exp(kI * theta)), 0.0,
        std::exp(kI * eta);
    return m;
}

Matrix2 quotient_l(double theta, double eta, double r) {
    return quotient_r(theta, eta, r).transpose();
}

Matrix2 lr_product(double theta, double eta, double r) {
    return quotient_l(theta, eta, r) * quotient_r(-theta, -eta, r);
}

double lr_trace_closed_form(double theta, double eta, double r) {
    check_r(r);
    const double t = t_of(r);
    return 2.0 * (1.0 + (t * t) / (r * r) * (1.0 - std::cos(theta - eta)));
}

Real4 realify(const Matrix2& m) {
    Real4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Complex a = m(i, j);
            out.block<2, 2>(2 * i, 2 * j) << a.real(), a.imag(), -a.imag(), a.real();
        }
    }
    return out;
}

double chi(double beta, double r) {
    check_r(r);
    const Complex e = std::exp(-kI * beta);
    return -std::arg((r * e - 1.0) / (e - r));
}

T1Decomposition decompose_t1(double alpha, double beta, double gamma, double r) {
    check_r(r);
    const double t = t_of(r);
    T1Decomposition d;
    d.a = gamma - chi(beta, r);
    d.b = -alpha;
    const double u = t * t / r;
    d.m1 << r, 0, -t, 0,
            0, r, 0, -t,
            -t, 0, u, 0,
            0, -t, 0, u;
    d.m2 << 0, r, 0, -t,
            -r, 0, t, 0,
            0, -t, 0, u,
            t, 0, -u, 0;
    d.n1.setZero();
    d.n1(2, 2) = 1.0 / r;
    d.n1(3, 3) = 1.0 / r;
    d.n2.setZero();
    d.n2(2, 3) = 1.0 / r;
    d.n2(3, 2) = -1.0 / r;
    const Real4 lhs = realify(transfer_matrix(1.0, alpha, beta, gamma, r));
    const Real4 rhs = std::cos(d.a) * d.m1 + std::sin(d.a) * d.m2 + std::cos(d.b) * d.n1 +
                      std::sin(d.b) * d.n2;
    d.residual = (lhs - rhs).cwiseAbs().maxCoeff();
    return d;
}

}  // namespace arborwalk::transfer
