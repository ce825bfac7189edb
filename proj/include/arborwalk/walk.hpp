#pragma once

// U_omega(C) assembled on a ball of the tree. Basis vector x (x) tau of the
// ball has dense index vertex_index(x) * q + tau.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arborwalk/local_walk.hpp"
#include "arborwalk/tree.hpp"

namespace arborwalk::walk {

using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class Mode {
    light_cone,
    boundary_restricted,
};

class WalkOperator {
public:
    /// P U P for the ball projector P. In light-cone mode the horizon is the
    /// ball radius.
    WalkOperator(const LocalWalk& generator, tree::BallIndex ball,
                 Mode mode = Mode::light_cone);

    Mode mode() const { return mode_; }
    int q() const { return q_; }
    const tree::BallIndex& ball() const { return ball_; }
    const LocalWalk& generator() const { return generator_; }
    int horizon() const { return ball_.radius(); }
    std::size_t dimension() const { return ball_.size() * static_cast<std::size_t>(q_); }

    std::size_t index(std::size_t vertex, tree::Letter tau) const {
        return vertex * static_cast<std::size_t>(q_) + tau;
    }
    /// Dense index of x (x) tau, or -1 outside the ball.
    std::int64_t find(const BasisState& s) const;
    BasisState state(std::size_t index) const;

    /// Row storage: row i is fed by vertex row_source(i) (or -1) with the q
    /// values row_value(i, tau).
    std::int64_t row_source(std::size_t i) const { return row_source_[i]; }
    Complex row_value(std::size_t i, int tau) const {
        return row_values_[i * static_cast<std::size_t>(q_) + static_cast<std::size_t>(tau)];
    }
    /// Column storage: column j sends to col_target(j, sigma) (or -1).
    std::int64_t col_target(std::size_t j, int sigma) const {
        return col_target_[j * static_cast<std::size_t>(q_) + static_cast<std::size_t>(sigma)];
    }
    Complex col_value(std::size_t j, int sigma) const {
        return col_values_[j * static_cast<std::size_t>(q_) + static_cast<std::size_t>(sigma)];
    }

    /// out = U in. OpenMP row gather.
    void apply(const Vector& in, Vector& out) const;
    /// out = U* in. OpenMP, gathering over column storage.
    void apply_adjoint(const Vector& in, Vector& out) const;
    /// Serial column scatter; reference for apply().
    void apply_serial(const Vector& in, Vector& out) const;
    void apply_adjoint_serial(const Vector& in, Vector& out) const;

    /// U^n v. In light-cone mode throws HorizonError as soon as a step would
    /// push amplitude out of the ball.
    Vector power_apply(Vector v, int n) const;

    /// True if v has non-zero amplitude on a vertex whose column leaves the ball.
    bool touches_boundary(const Vector& v) const;

    SparseMatrix sparse() const;

private:
    LocalWalk generator_;
    tree::BallIndex ball_;
    Mode mode_;
    int q_;
    std::vector<std::int64_t> row_source_;
    std::vector<Complex> row_values_;
    std::vector<std::int64_t> col_target_;
    std::vector<Complex> col_values_;
};

/// The bare shift S on a ball.
WalkOperator build_shift(const tree::Alphabet& alphabet, tree::BallIndex ball);

/// U_omega(C(x)) on a ball in light-cone mode.
WalkOperator build_walk(const disorder::SiteCoinField& coins, const disorder::DisorderField& disorder,
                        tree::BallIndex ball);

struct CovarianceReport {
    double max_residual = 0.0;
    std::size_t compared = 0;
    bool covariant = true;  // max_residual <= 1e-14
};

/// Compares <z x (x) sigma| U_omega |z y (x) tau> with
/// <x (x) sigma| U_{T_z omega} |y (x) tau> for every column y (x) tau of the
/// ball. Odd |z| is allowed and reported, not rejected.
CovarianceReport check_covariance(const coin::CoinMatrix& c, const disorder::DisorderField& disorder,
                                  const tree::Word& z, const tree::BallIndex& ball);

}  // namespace arborwalk::walk
