#include <doctest.h>

#include <cmath>

#include "arborwalk/errors.hpp"
#include "arborwalk/green.hpp"

using namespace arborwalk;
using namespace arborwalk::walk;

namespace {

FiniteVolume volume(int q, int L, std::uint64_t seed) {
    const tree::Alphabet alphabet(q);
    return build_finite_volume(coin::haar_random(q, seed), coin::PhaseDecoration::zero(q),
                               disorder::DisorderField::uniform_full(seed), tree::Word{}, L, alphabet);
}

}  // namespace

TEST_CASE("at z = 0 the resolvent column is the adjoint column") {
    const FiniteVolume fv = volume(3, 3, 1);
    const DenseMatrix u = fv.restricted_dense();
    for (Eigen::Index j : {Eigen::Index{0}, Eigen::Index{5}, u.cols() - 1}) {
        const Vector g = green_dense(u, 0.0, j);
        CHECK((g - u.adjoint().col(j)).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("sparse and dense solves agree and satisfy the resolvent equation") {
    for (int q : {3, 4}) {
        const FiniteVolume fv = volume(q, 3, 7);
        const DenseMatrix u = fv.restricted_dense();
        for (Complex z : {Complex(0.5, 0.3), Complex(0.0, 0.98), Complex(-1.2, 0.4)}) {
            const SparseGreen solver(fv.restricted_sparse(), z);
            for (Eigen::Index j : {Eigen::Index{0}, Eigen::Index{11}}) {
                const Vector a = solver.column(j);
                const Vector b = green_dense(u, z, j);
                CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * b.norm());
                Vector e = Vector::Zero(u.rows());
                e[j] = 1.0;
                CHECK(((u * a - z * a) - e).norm() < 1e-10 * a.norm());
                // Spectral bound for unitary U.
                CHECK(a.norm() <= 1.0 / std::abs(std::abs(z) - 1.0) * (1 + 1e-10));
            }
        }
    }
}

TEST_CASE("the finite-volume Green function is indexed by basis state") {
    const FiniteVolume fv = volume(3, 3, 2);
    const BasisState source{tree::Word{}, 1};
    const Complex z(0.3, -0.6);
    const Vector g = green(fv, z, source);
    const Vector ref = green_dense(fv.restricted_dense(), z, fv.find(source));
    CHECK((g - ref).cwiseAbs().maxCoeff() < 1e-12);
    const tree::Alphabet alphabet(3);
    CHECK_THROWS_AS(green(fv, z, {tree::parse_word("abcabcab", alphabet), 0}), InputError);
}

TEST_CASE("z on or near the unit circle is refused") {
    const FiniteVolume fv = volume(3, 1, 3);
    CHECK_THROWS_AS(check_off_circle(Complex(1.0, 0.0)), ConditioningError);
    CHECK_THROWS_AS(check_off_circle(std::polar(1.0 + 5e-7, 0.4)), ConditioningError);
    CHECK_NOTHROW(check_off_circle(std::polar(1.0 - 2e-6, 0.4)));
    CHECK_THROWS_AS(SparseGreen(fv.restricted_sparse(), Complex(0.0, 1.0)), ConditioningError);
    CHECK_THROWS_AS(green_dense(fv.restricted_dense(), Complex(0.0, -1.0), 0), ConditioningError);
}
