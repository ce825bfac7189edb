#include "arborwalk/walk.hpp"

#include <cmath>

#include "arborwalk/errors.hpp"

namespace arborwalk::walk {

WalkOperator::WalkOperator(const LocalWalk& generator, tree::BallIndex ball, Mode mode)
    : generator_(generator), ball_(std::move(ball)), mode_(mode), q_(generator.q()) {
    if (!(ball_.alphabet() == generator_.alphabet())) {
        throw InputError("ball and walk use different tree degrees");
    }
    const std::size_t n = dimension();
    const auto qs = static_cast<std::size_t>(q_);
    row_source_.assign(n, -1);
    row_values_.assign(n * qs, Complex{});
    col_target_.assign(n * qs, -1);
    col_values_.assign(n * qs, Complex{});

    std::vector<Entry> entries;
    for (std::size_t v = 0; v < ball_.size(); ++v) {
        const tree::Word& x = ball_.vertex(v);
        for (int t = 0; t < q_; ++t) {
            const auto tau = static_cast<tree::Letter>(t);
            const std::size_t j = index(v, tau);
            generator_.column(x, tau, entries);
            for (int s = 0; s < q_; ++s) {
                const Entry& e = entries[static_cast<std::size_t>(s)];
                const std::int64_t target = ball_.find(e.x);
                col_values_[j * qs + static_cast<std::size_t>(s)] = e.value;
                if (target >= 0) {
                    const std::size_t i = index(static_cast<std::size_t>(target), e.letter);
                    col_target_[j * qs + static_cast<std::size_t>(s)] = static_cast<std::int64_t>(i);
                    row_source_[i] = static_cast<std::int64_t>(v);
                    row_values_[i * qs + static_cast<std::size_t>(t)] = e.value;
                }
            }
        }
    }
}

std::int64_t WalkOperator::find(const BasisState& s) const {
    const std::int64_t v = ball_.find(s.x);
    return v < 0 ? -1 : static_cast<std::int64_t>(index(static_cast<std::size_t>(v), s.tau));
}

BasisState WalkOperator::state(std::size_t i) const {
    const auto qs = static_cast<std::size_t>(q_);
    return {ball_.vertex(i / qs), static_cast<tree::Letter>(i % qs)};
}

bool WalkOperator::touches_boundary(const Vector& v) const {
    const auto qs = static_cast<std::size_t>(q_);
    for (std::size_t j = 0; j < dimension(); ++j) {
        if (v[static_cast<Eigen::Index>(j)] == Complex{}) continue;
        for (std::size_t s = 0; s < qs; ++s) {
            if (col_target_[j * qs + s] < 0 && col_values_[j * qs + s] != Complex{}) {
                return true;
            }
        }
    }
    return false;
}

Vector WalkOperator::power_apply(Vector v, int n) const {
    if (v.size() != static_cast<Eigen::Index>(dimension())) {
        throw InputError("vector size does not match operator dimension");
    }
    Vector next(v.size());
    for (int step = 0; step < n; ++step) {
        if (mode_ == Mode::light_cone && touches_boundary(v)) {
            throw HorizonError("power " + std::to_string(n) + " exceeds the light-cone horizon " +
                               std::to_string(horizon()) + " (failed at step " +
                               std::to_string(step + 1) + ")");
        }
        apply(v, next);
        v.swap(next);
    }
    return v;
}

SparseMatrix WalkOperator::sparse() const {
    std::vector<Eigen::Triplet<Complex>> triplets;
    const auto qs = static_cast<std::size_t>(q_);
    triplets.reserve(dimension() * qs);
    for (std::size_t j = 0; j < dimension(); ++j) {
        for (std::size_t s = 0; s < qs; ++s) {
            const std::int64_t i = col_target_[j * qs + s];
            const Complex value = col_values_[j * qs + s];
            if (i >= 0 && value != Complex{}) {
                triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), value);
            }
        }
    }
    SparseMatrix m(static_cast<Eigen::Index>(dimension()), static_cast<Eigen::Index>(dimension()));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

WalkOperator build_shift(const tree::Alphabet& alphabet, tree::BallIndex ball) {
    return WalkOperator(LocalWalk(alphabet, disorder::SiteCoinField(coin::identity_coin(alphabet.q()))),
                        std::move(ball));
}

WalkOperator build_walk(const disorder::SiteCoinField& coins, const disorder::DisorderField& disorder,
                        tree::BallIndex ball) {
    const tree::Alphabet alphabet = ball.alphabet();
    return WalkOperator(LocalWalk(alphabet, coins, disorder), std::move(ball));
}

CovarianceReport check_covariance(const coin::CoinMatrix& c, const disorder::DisorderField& disorder,
                                  const tree::Word& z, const tree::BallIndex& ball) {
    if (ball.radius() < 1) {
        throw InputError("covariance check needs a ball of radius at least 1");
    }
    const tree::Alphabet& alphabet = ball.alphabet();
    const disorder::SiteCoinField coins(c);
    const LocalWalk original(alphabet, coins, disorder);
    const LocalWalk translated(alphabet, coins, disorder.translated(z, alphabet));
    const tree::Word z_inv = tree::inverse(z, alphabet);

    CovarianceReport report;
    std::vector<Entry> lhs;
    std::vector<Entry> rhs;
    for (const tree::Word& y : ball.vertices()) {
        const tree::Word zy = tree::multiply(z, y, alphabet);
        for (int t = 0; t < alphabet.q(); ++t) {
            const auto tau = static_cast<tree::Letter>(t);
            original.column(zy, tau, lhs);
            translated.column(y, tau, rhs);
            for (int s = 0; s < alphabet.q(); ++s) {
                const Entry& a = lhs[static_cast<std::size_t>(s)];
                const Entry& b = rhs[static_cast<std::size_t>(s)];
                const tree::Word back = tree::multiply(z_inv, a.x, alphabet);
                double residual;
                if (back == b.x) {
                    residual = std::abs(a.value - b.value);
                } else {
                    // Different targets: both elements appear unmatched.
                    residual = std::max(std::abs(a.value), std::abs(b.value));
                }
                report.max_residual = std::max(report.max_residual, residual);
                ++report.compared;
            }
        }
    }
    report.covariant = report.max_residual <= 1e-14;
    return report;
}

}  // namespace arborwalk::walk
