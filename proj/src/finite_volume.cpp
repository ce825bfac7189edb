#include "arborwalk/finite_volume.hpp"

#include <cmath>
#include <deque>

#include "arborwalk/errors.hpp"
#include "arborwalk/rng.hpp"

namespace arborwalk::walk {

std::size_t finite_volume_dimension(int q, int L) {
    std::size_t power = 1;
    for (int k = 0; k <= L; ++k) {
        power *= static_cast<std::size_t>(q - 1);
    }
    return 2 * static_cast<std::size_t>(q) * (power - 1) / static_cast<std::size_t>(q - 2);
}

std::int64_t FiniteVolume::find(const BasisState& s) const {
    const std::int64_t i = op.find(s);
    return i < 0 ? -1 : local[static_cast<std::size_t>(i)];
}

SparseMatrix FiniteVolume::restricted_sparse() const {
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(basis.size() * static_cast<std::size_t>(op.q()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
        for (int s = 0; s < op.q(); ++s) {
            const std::int64_t i = op.col_target(basis[b], s);
            const Complex value = op.col_value(basis[b], s);
            if (i < 0 || value == Complex{}) continue;
            const std::int64_t a = local[static_cast<std::size_t>(i)];
            if (a >= 0) {
                triplets.emplace_back(static_cast<int>(a), static_cast<int>(b), value);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

DenseMatrix FiniteVolume::restricted_dense() const {
    if (basis.size() > block_dimension_cap()) {
        throw CapacityError("finite-volume dimension " + std::to_string(basis.size()) +
                            " exceeds the block cap " + std::to_string(block_dimension_cap()));
    }
    return DenseMatrix(restricted_sparse());
}

double FiniteVolume::unitarity_residual() const {
    const SparseMatrix u = restricted_sparse();
    SparseMatrix g = SparseMatrix(u.adjoint()) * u;
    double residual = 0.0;
    for (int k = 0; k < g.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(g, k); it; ++it) {
            const Complex expected = it.row() == it.col() ? Complex(1.0) : Complex{};
            residual = std::max(residual, std::abs(it.value() - expected));
        }
    }
    // Diagonal entries missing from the product would mean a zero column.
    for (Eigen::Index k = 0; k < g.rows(); ++k) {
        if (g.coeff(k, k) == Complex{}) residual = std::max(residual, 1.0);
    }
    return residual;
}

FiniteVolume build_finite_volume(const coin::CoinMatrix& c, const coin::PhaseDecoration& phi,
                                 const disorder::DisorderField& disorder, const tree::Word& center,
                                 int L, const tree::Alphabet& alphabet) {
    return build_finite_volume(disorder::SiteCoinField(c), phi, disorder, center, L, alphabet);
}

FiniteVolume build_finite_volume(const disorder::SiteCoinField& bulk,
                                 const coin::PhaseDecoration& phi,
                                 const disorder::DisorderField& disorder, const tree::Word& center,
                                 int L, const tree::Alphabet& alphabet) {
    if (L < 1 || L % 2 == 0) {
        throw InputError("finite-volume radius L must be odd and positive, got " + std::to_string(L));
    }
    if (center.parity() != 0) {
        throw InputError("finite-volume centre must have even length");
    }
    if (bulk.q() != alphabet.q()) {
        throw InputError("coin dimension does not match tree degree");
    }
    disorder::SiteCoinField coins = bulk;
    coins.add_shell(center, L - 1, L + 1,
                    coin::permutation_coin(coin::boundary_permutation(alphabet.q()), phi));

    tree::BallIndex ball(alphabet, center, L + 2);
    FiniteVolume fv{WalkOperator(LocalWalk(alphabet, std::move(coins), disorder), std::move(ball),
                                 Mode::boundary_restricted),
                    {}, {}, L, 0.0};
    const WalkOperator& op = fv.op;
    const std::size_t n = op.dimension();
    const auto q = static_cast<std::size_t>(op.q());

    // Coordinate closure of the vectors supported in the ball of radius L
    // under the supports of U and U*.
    std::vector<char> member(n, 0);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < op.ball().size(); ++v) {
        if (op.ball().distance_to_center(v) > L) break;
        for (std::size_t t = 0; t < q; ++t) {
            const std::size_t i = v * q + t;
            member[i] = 1;
            queue.push_back(i);
        }
    }
    auto visit = [&](std::size_t i) {
        if (op.ball().distance_to_center(i / q) > L + 1) {
            throw NotLocalizingError("finite-volume subspace escapes the distance L+1 shell");
        }
        if (!member[i]) {
            member[i] = 1;
            queue.push_back(i);
        }
    };
    while (!queue.empty()) {
        const std::size_t j = queue.front();
        queue.pop_front();
        for (std::size_t s = 0; s < q; ++s) {
            if (op.col_value(j, static_cast<int>(s)) == Complex{}) continue;
            const std::int64_t i = op.col_target(j, static_cast<int>(s));
            if (i < 0) {
                throw NotLocalizingError("finite-volume subspace escapes the ball");
            }
            visit(static_cast<std::size_t>(i));
        }
        const std::int64_t src = op.row_source(j);
        if (src >= 0) {
            for (std::size_t t = 0; t < q; ++t) {
                if (op.row_value(j, static_cast<int>(t)) != Complex{}) {
                    visit(static_cast<std::size_t>(src) * q + t);
                }
            }
        }
    }

    fv.local.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (member[i]) {
            fv.local[i] = static_cast<std::int64_t>(fv.basis.size());
            fv.basis.push_back(i);
        }
    }
    const std::size_t expected = finite_volume_dimension(alphabet.q(), L);
    if (fv.basis.size() != expected) {
        throw NumericalError("finite-volume dimension " + std::to_string(fv.basis.size()) +
                             " differs from the expected " + std::to_string(expected));
    }

    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < q; ++s) {
            const Complex value = op.col_value(j, static_cast<int>(s));
            if (value == Complex{}) continue;
            const std::int64_t i = op.col_target(j, static_cast<int>(s));
            const bool in_j = member[j] != 0;
            const bool in_i = i >= 0 && member[static_cast<std::size_t>(i)] != 0;
            if (in_i != in_j && (in_j || i >= 0)) {
                residual = std::max(residual, std::abs(value));
            }
        }
    }
    fv.invariance_residual = residual;
    return fv;
}

double sparse_norm(const SparseMatrix& m, int iterations) {
    if (m.cols() == 0) return 0.0;
    Vector v(m.cols());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const auto z = rng::normal_pair(0x6E6F726DULL, 0, static_cast<std::uint64_t>(k));
        v[k] = Complex(z[0], z[1]);
    }
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const Vector w = m * v;
        const Vector u = m.adjoint() * w;
        estimate = std::sqrt(std::abs(v.dot(u)));
        const double nu = u.norm();
        if (nu == 0.0) return 0.0;
        v = u / nu;
    }
    return estimate;
}

double operator_norm_difference(const WalkOperator& a, const WalkOperator& b, int iterations) {
    if (a.dimension() != b.dimension() || !(a.ball().center() == b.ball().center())) {
        throw InputError("operators live on different balls");
    }
    return sparse_norm(SparseMatrix(a.sparse() - b.sparse()), iterations);
}

}  // namespace arborwalk::walk
