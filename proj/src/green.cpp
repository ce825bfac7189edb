#include "arborwalk/green.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "arborwalk/errors.hpp"

namespace arborwalk::walk {

namespace {

void check_residual(double residual, double norm) {
    if (!(residual <= kGreenResidualTolerance * std::max(norm, 1.0))) {
        throw NumericalError("Green function residual " + std::to_string(residual) +
                             " exceeds tolerance");
    }
}

}  // namespace

void check_off_circle(Complex z) {
    if (!(std::abs(std::abs(z) - 1.0) >= kCircleGuard)) {
        throw ConditioningError("spectral parameter too close to the unit circle: |z| = " +
                                std::to_string(std::abs(z)));
    }
}

Vector green_dense(const DenseMatrix& u, Complex z, Eigen::Index source) {
    check_off_circle(z);
    if (source < 0 || source >= u.cols()) {
        throw InputError("Green function source outside the block");
    }
    DenseMatrix a = u;
    a.diagonal().array() -= z;
    Vector rhs = Vector::Zero(u.rows());
    rhs[source] = 1.0;
    const Eigen::PartialPivLU<DenseMatrix> lu(a);
    Vector g = lu.solve(rhs);
    check_residual((a * g - rhs).norm(), g.norm());
    return g;
}

struct SparseGreen::Impl {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseGreen::SparseGreen(const SparseMatrix& u, Complex z) : impl_(std::make_unique<Impl>()), z_(z) {
    check_off_circle(z);
    SparseMatrix identity(u.rows(), u.cols());
    identity.setIdentity();
    shifted_ = u - z * identity;
    shifted_.makeCompressed();
    impl_->lu.compute(shifted_);
    if (impl_->lu.info() != Eigen::Success) {
        throw NumericalError("sparse LU factorisation failed: " + impl_->lu.lastErrorMessage());
    }
}

SparseGreen::~SparseGreen() = default;
SparseGreen::SparseGreen(SparseGreen&&) noexcept = default;
SparseGreen& SparseGreen::operator=(SparseGreen&&) noexcept = default;

Vector SparseGreen::column(Eigen::Index source) const {
    if (source < 0 || source >= shifted_.cols()) {
        throw InputError("Green function source outside the block");
    }
    Vector rhs = Vector::Zero(shifted_.rows());
    rhs[source] = 1.0;
    Vector g = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) {
        throw NumericalError("sparse LU solve failed");
    }
    check_residual((shifted_ * g - rhs).norm(), g.norm());
    return g;
}

Vector green(const FiniteVolume& fv, Complex z, const BasisState& source) {
    const std::int64_t k = fv.find(source);
    if (k < 0) {
        throw InputError("Green function source is not in the finite-volume subspace");
    }
    return SparseGreen(fv.restricted_sparse(), z).column(static_cast<Eigen::Index>(k));
}

}  // namespace arborwalk::walk
