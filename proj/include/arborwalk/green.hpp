#pragma once

// G(x, y; z) = <x|(U - z)^{-1}|y> on a finite unitary block.

#include <memory>

#include "arborwalk/finite_volume.hpp"

namespace arborwalk::walk {

inline constexpr double kCircleGuard = 1e-6;
inline constexpr double kGreenResidualTolerance = 1e-10;

/// Throws ConditioningError if | |z| - 1 | < 1e-6.
void check_off_circle(Complex z);

/// Column of (U - z)^{-1} at `source` by dense LU.
Vector green_dense(const DenseMatrix& u, Complex z, Eigen::Index source);

/// Sparse LU of U - z, reusable for many sources.
class SparseGreen {
public:
    SparseGreen(const SparseMatrix& u, Complex z);
    ~SparseGreen();
    SparseGreen(SparseGreen&&) noexcept;
    SparseGreen& operator=(SparseGreen&&) noexcept;

    Complex z() const { return z_; }
    /// Column at `source`; throws NumericalError if the residual exceeds
    /// 1e-10 ||G||.
    Vector column(Eigen::Index source) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    SparseMatrix shifted_;
    Complex z_;
};

/// G(., source; z) on H_Lambda in the basis order of the finite volume.
Vector green(const FiniteVolume& fv, Complex z, const BasisState& source);

}  // namespace arborwalk::walk
