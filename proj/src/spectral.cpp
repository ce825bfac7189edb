#include "arborwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "arborwalk/errors.hpp"

namespace arborwalk::spectral {

AmplitudeSeries return_amplitudes(const walk::WalkOperator& u, const BasisState& source, int N) {
    if (N < 0) throw InputError("number of steps must be non-negative");
    const std::int64_t k = u.find(source);
    if (k < 0) throw InputError("source outside the ball");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(u.dimension()));
    v[k] = 1.0;
    AmplitudeSeries out{source, {}, u.mode() == walk::Mode::light_cone ? "light_cone" : "ball"};
    out.values.reserve(static_cast<std::size_t>(N) + 1);
    out.values.push_back(v[k]);
    Vector next;
    for (int n = 1; n <= N; ++n) {
        if (u.mode() == walk::Mode::light_cone && u.touches_boundary(v)) {
            throw HorizonError("return amplitude at n=" + std::to_string(n) +
                               " needs a horizon beyond " + std::to_string(u.horizon()));
        }
        u.apply(v, next);
        v.swap(next);
        out.values.push_back(v[k]);
    }
    return out;
}

AmplitudeSeries return_amplitudes(const walk::FiniteVolume& fv, const BasisState& source, int N) {
    if (N < 0) throw InputError("number of steps must be non-negative");
    const std::int64_t k = fv.find(source);
    if (k < 0) throw InputError("source is not in the finite-volume subspace");
    const walk::SparseMatrix u = fv.restricted_sparse();
    Vector v = Vector::Zero(u.cols());
    v[k] = 1.0;
    AmplitudeSeries out{source, {}, "finite_volume"};
    out.values.reserve(static_cast<std::size_t>(N) + 1);
    out.values.push_back(v[k]);
    for (int n = 1; n <= N; ++n) {
        v = u * v;
        out.values.push_back(v[k]);
    }
    return out;
}

AmplitudeSeries return_amplitudes(const walk::LocalWalk& walk, const BasisState& source, int N,
                                  std::size_t cap) {
    return {source, walk.return_amplitudes(source, N, cap), "sparse_state"};
}

std::vector<double> wiener_average(const AmplitudeSeries& series, int N) {
    if (N < 0 || static_cast<std::size_t>(N) >= series.values.size()) {
        throw InputError("Cesaro average needs amplitudes up to n=" + std::to_string(N));
    }
    std::vector<double> out(static_cast<std::size_t>(N) + 1);
    double sum = 0.0;
    for (int m = 0; m <= N; ++m) {
        sum += std::norm(series.values[static_cast<std::size_t>(m)]);
        out[static_cast<std::size_t>(m)] = sum / static_cast<double>(m + 1);
    }
    return out;
}

std::vector<double> SpectralSummary::weights(const Vector& phi) const {
    const Vector c = eigenvectors.adjoint() * phi;
    std::vector<double> w(static_cast<std::size_t>(c.size()));
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        w[static_cast<std::size_t>(k)] = std::norm(c[k]);
    }
    return w;
}

Complex SpectralSummary::amplitude(const Vector& phi, int n) const {
    const std::vector<double> w = weights(phi);
    Complex s{};
    for (std::size_t k = 0; k < w.size(); ++k) {
        s += w[k] * std::polar(1.0, n * eigenphases[k]);
    }
    return s;
}

double SpectralSummary::point_mass_square_sum(const Vector& phi, double tol) const {
    const std::vector<double> w = weights(phi);
    double total = 0.0;
    std::size_t k = 0;
    while (k < w.size()) {
        double mass = w[k];
        std::size_t l = k + 1;
        while (l < w.size() && eigenphases[l] - eigenphases[l - 1] <= tol) {
            mass += w[l];
            ++l;
        }
        total += mass * mass;
        k = l;
    }
    // Phases near +pi and -pi describe the same point.
    if (w.size() > 1 && eigenphases.back() - eigenphases.front() >= 2.0 * std::numbers::pi - tol) {
        double first = 0.0, last = 0.0;
        std::size_t a = 0;
        while (a < w.size() && eigenphases[a] - eigenphases.front() <= tol) first += w[a++];
        std::size_t b = w.size();
        while (b > a && eigenphases.back() - eigenphases[b - 1] <= tol) last += w[--b];
        total += 2.0 * first * last;
    }
    return total;
}

double SpectralSummary::cesaro_prediction(const Vector& phi, int N) const {
    const std::vector<double> w = weights(phi);
    double sum = 0.0;
    for (int n = 0; n <= N; ++n) {
        Complex a{};
        for (std::size_t k = 0; k < w.size(); ++k) {
            a += w[k] * std::polar(1.0, n * eigenphases[k]);
        }
        sum += std::norm(a);
    }
    return sum / static_cast<double>(N + 1);
}

namespace {

std::string dump_block(const DenseMatrix& u) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("arborwalk_block_" + std::to_string(u.rows()) + "_" +
                       std::to_string(std::hash<double>{}(u.cwiseAbs().sum())) + ".txt");
    std::ofstream out(path);
    out.precision(17);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            out << u(i, j).real() << ' ' << u(i, j).imag() << (j + 1 == u.cols() ? '\n' : ' ');
        }
    }
    return path.string();
}

}  // namespace

SpectralSummary diagonalize_block(const DenseMatrix& u) {
    if (u.rows() != u.cols()) throw InputError("block must be square");
    if (static_cast<std::size_t>(u.rows()) > block_dimension_cap()) {
        throw CapacityError("block dimension " + std::to_string(u.rows()) + " exceeds the cap " +
                            std::to_string(block_dimension_cap()));
    }
    SpectralSummary out;
    const Eigen::Index n = u.rows();
    if (n == 0) return out;
    Eigen::ComplexSchur<DenseMatrix> schur(u);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("Schur decomposition failed; block written to " + dump_block(u));
    }
    const DenseMatrix& t = schur.matrixT();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            out.schur_offdiagonal = std::max(out.schur_offdiagonal, std::abs(t(i, j)));
        }
    }
    if (out.schur_offdiagonal > 1e-8) {
        throw NumericalError("block is not normal (Schur off-diagonal " +
                             std::to_string(out.schur_offdiagonal) + "); written to " + dump_block(u));
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::vector<double> phase(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        phase[static_cast<std::size_t>(k)] = std::arg(t(k, k));
        out.modulus_deviation = std::max(out.modulus_deviation, std::abs(std::abs(t(k, k)) - 1.0));
    }
    if (out.modulus_deviation > 1e-8) {
        throw NumericalError("block is not unitary (eigenvalue modulus off by " +
                             std::to_string(out.modulus_deviation) + "); written to " + dump_block(u));
    }
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return phase[static_cast<std::size_t>(a)] < phase[static_cast<std::size_t>(b)];
    });
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenphases.push_back(phase[static_cast<std::size_t>(src)]);
        out.eigenvectors.col(k) = schur.matrixU().col(src);
        out.participation.push_back(1.0 / out.eigenvectors.col(k).cwiseAbs2().cwiseAbs2().sum());
    }
    return out;
}

}  // namespace arborwalk::spectral
