#pragma once

// Coin matrices: the q x q unitary C updating the internal state before the
// shift. Basis order is (a, b, c) for q = 3 and (a, b, a^-1, b^-1) for q = 4,
// so that letter j of the alphabet labels row and column j.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "arborwalk/tree.hpp"

namespace arborwalk::coin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kUnitarityTolerance = 1e-12;
/// Entries at or below this modulus are treated as structural zeros.
inline constexpr double kZeroTolerance = 1e-12;

class CoinMatrix {
public:
    /// Throws InputError unless m is square and unitary to 1e-12.
    explicit CoinMatrix(Matrix m);

    int q() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }
    /// max |(C*C - I)_ij|
    double unitarity_residual() const;
    bool structurally_zero(int row, int col) const {
        return std::abs(m_(row, col)) <= kZeroTolerance;
    }

private:
    Matrix m_;
};

/// Phases phi_{a_1}..phi_{a_q}; acts as the diagonal matrix diag(e^{i phi}).
struct PhaseDecoration {
    std::vector<double> phases;

    static PhaseDecoration zero(int q) { return {std::vector<double>(static_cast<std::size_t>(q), 0.0)}; }
    PhaseDecoration negated() const;
    double mean() const;
};

/// diag(e^{i phi}) C
CoinMatrix decorate(const CoinMatrix& c, const PhaseDecoration& phi);

/// Images pi(tau) for tau = 0..q-1.
using Permutation = std::vector<int>;

/// Parses cycle notation such as "(abc)", "(a)(bc)", "(aA)(bB)",
/// "(a a^-1 b b^-1)" or "(a1 a2 a3)". Unlisted letters are fixed points.
Permutation parse_permutation(std::string_view cycles, const tree::Alphabet& alphabet);
std::string format_permutation(const Permutation& pi, const tree::Alphabet& alphabet);
Permutation identity_permutation(int q);
/// (1 2 ... q)
Permutation cyclic_permutation(int q);
/// (1 q/2+1)(2 q/2+2)...(q/2 q), q even
Permutation pairing_permutation(int q);
/// The boundary permutation: cyclic for odd q, pairing for even q.
Permutation boundary_permutation(int q);

/// Decorated permutation matrix with entries C_{pi(tau),tau} = e^{i phi_{pi(tau)}}.
/// Throws InputError if pi is not a bijection of 0..q-1.
CoinMatrix permutation_coin(const Permutation& pi, const PhaseDecoration& phi);
CoinMatrix permutation_coin(const Permutation& pi);

/// If every column has exactly one non-zero entry, returns the permutation.
std::optional<Permutation> permutation_pattern(const CoinMatrix& c);

CoinMatrix identity_coin(int q);

/// C^d_j(r), j in {1,2,3}, 0 <= r <= 1.
CoinMatrix family_q3_delocalizing(int j, double r);
/// C^l_j(r), j in {1..6}, 0 <= r <= 1.
CoinMatrix family_q3_localizing(int j, double r);

enum class Q4Kind {
    reducing,
    propagating_1,
    propagating_2,
    propagating_3,
    localizing_1,
    localizing_2,
    localizing_3,
    localizing_4,
};

Q4Kind parse_q4_kind(std::string_view name);
std::string q4_kind_name(Q4Kind kind);
/// Two-angle families read (psi, xi); the localizing families read psi only.
CoinMatrix family_q4(Q4Kind kind, double psi, double xi = 0.0);

enum class ShapeTag {
    fully_localizing,
    fully_delocalizing,
    mixed,
    propagating_shape,
    reducing_shape,
    other,
};

struct CoinClass {
    ShapeTag tag = ShapeTag::other;
    /// Name of the permutation list the coin belongs to ("Lambda", "S", "M",
    /// "Pi1", "Pi2"), empty for non-permutation coins.
    std::string permutation_set;
};

std::string shape_tag_name(ShapeTag tag);
CoinClass classify_shape(const CoinMatrix& c);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Haar-distributed unitary from a counter-based stream (fuzz helper).
CoinMatrix haar_random(int q, std::uint64_t seed);

/// C exp(iH) with H Hermitian drawn from the seed and scaled so that
/// ||C exp(iH) - C|| equals the requested distance (< 2).
CoinMatrix perturb(const CoinMatrix& c, double distance, std::uint64_t seed);

}  // namespace arborwalk::coin
