#include "arborwalk/errors.hpp"
#include "arborwalk/walk.hpp"

namespace arborwalk::walk {

namespace {

void check_sizes(const Vector& in, std::size_t n) {
    if (in.size() != static_cast<Eigen::Index>(n)) {
        throw InputError("vector size does not match operator dimension");
    }
}

}  // namespace

void WalkOperator::apply(const Vector& in, Vector& out) const {
    const std::size_t n = dimension();
    check_sizes(in, n);
    out.resize(static_cast<Eigen::Index>(n));
    const auto qs = static_cast<std::size_t>(q_);
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const std::int64_t v = row_source_[ui];
        Complex acc{};
        if (v >= 0) {
            const Complex* w = &row_values_[ui * qs];
            const Complex* x = in.data() + static_cast<std::size_t>(v) * qs;
            for (std::size_t t = 0; t < qs; ++t) {
                acc += w[t] * x[t];
            }
        }
        out[static_cast<Eigen::Index>(i)] = acc;
    }
}

void WalkOperator::apply_adjoint(const Vector& in, Vector& out) const {
    const std::size_t n = dimension();
    check_sizes(in, n);
    out.resize(static_cast<Eigen::Index>(n));
    const auto qs = static_cast<std::size_t>(q_);
    const auto cols = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < cols; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        Complex acc{};
        for (std::size_t s = 0; s < qs; ++s) {
            const std::int64_t i = col_target_[uj * qs + s];
            if (i >= 0) {
                acc += std::conj(col_values_[uj * qs + s]) * in[static_cast<Eigen::Index>(i)];
            }
        }
        out[static_cast<Eigen::Index>(j)] = acc;
    }
}

void WalkOperator::apply_serial(const Vector& in, Vector& out) const {
    const std::size_t n = dimension();
    check_sizes(in, n);
    out.setZero(static_cast<Eigen::Index>(n));
    const auto qs = static_cast<std::size_t>(q_);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex x = in[static_cast<Eigen::Index>(j)];
        if (x == Complex{}) continue;
        for (std::size_t s = 0; s < qs; ++s) {
            const std::int64_t i = col_target_[j * qs + s];
            if (i >= 0) {
                out[static_cast<Eigen::Index>(i)] += col_values_[j * qs + s] * x;
            }
        }
    }
}

void WalkOperator::apply_adjoint_serial(const Vector& in, Vector& out) const {
    const std::size_t n = dimension();
    check_sizes(in, n);
    out.setZero(static_cast<Eigen::Index>(n));
    const auto qs = static_cast<std::size_t>(q_);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex y = in[static_cast<Eigen::Index>(i)];
        const std::int64_t v = row_source_[i];
        if (y == Complex{} || v < 0) continue;
        for (std::size_t t = 0; t < qs; ++t) {
            out[static_cast<Eigen::Index>(static_cast<std::size_t>(v) * qs + t)] +=
                std::conj(row_values_[i * qs + t]) * y;
        }
    }
}

}  // namespace arborwalk::walk
