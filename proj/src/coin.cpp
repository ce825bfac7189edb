#include "arborwalk/coin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "arborwalk/errors.hpp"
#include "arborwalk/rng.hpp"

namespace arborwalk::coin {

namespace {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_r(double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw InputError("family parameter r must lie in [0, 1], got " + std::to_string(r));
    }
}

Matrix real3(std::initializer_list<double> rows) {
    Matrix m(3, 3);
    auto it = rows.begin();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m(i, j) = *it++;
        }
    }
    return m;
}

Matrix real4(std::initializer_list<double> rows) {
    Matrix m(4, 4);
    auto it = rows.begin();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m(i, j) = *it++;
        }
    }
    return m;
}

}  // namespace

CoinMatrix::CoinMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw InputError("coin matrix must be square");
    }
    const double residual = unitarity_residual();
    if (!(residual <= kUnitarityTolerance)) {
        throw InputError("coin matrix is not unitary (residual " + std::to_string(residual) + ")");
    }
}

double CoinMatrix::unitarity_residual() const {
    const Matrix g = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
    return max_abs(g);
}

PhaseDecoration PhaseDecoration::negated() const {
    PhaseDecoration out = *this;
    for (double& p : out.phases) {
        p = -p;
    }
    return out;
}

double PhaseDecoration::mean() const {
    double s = 0.0;
    for (double p : phases) {
        s += p;
    }
    return phases.empty() ? 0.0 : s / static_cast<double>(phases.size());
}

CoinMatrix decorate(const CoinMatrix& c, const PhaseDecoration& phi) {
    if (static_cast<int>(phi.phases.size()) != c.q()) {
        throw InputError("phase decoration size does not match q");
    }
    Matrix m = c.matrix();
    for (int i = 0; i < c.q(); ++i) {
        m.row(i) *= std::polar(1.0, phi.phases[static_cast<std::size_t>(i)]);
    }
    return CoinMatrix(std::move(m));
}

Permutation identity_permutation(int q) {
    Permutation pi(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        pi[static_cast<std::size_t>(j)] = j;
    }
    return pi;
}

Permutation cyclic_permutation(int q) {
    Permutation pi(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        pi[static_cast<std::size_t>(j)] = (j + 1) % q;
    }
    return pi;
}

Permutation pairing_permutation(int q) {
    if (q % 2 != 0) {
        throw InputError("pairing permutation requires even q");
    }
    Permutation pi(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        pi[static_cast<std::size_t>(j)] = (j + q / 2) % q;
    }
    return pi;
}

Permutation boundary_permutation(int q) {
    return q % 2 == 0 ? pairing_permutation(q) : cyclic_permutation(q);
}

Permutation parse_permutation(std::string_view text, const tree::Alphabet& alphabet) {
    Permutation pi = identity_permutation(alphabet.q());
    std::vector<bool> seen(static_cast<std::size_t>(alphabet.q()), false);
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    };
    skip_space();
    if (pos == text.size()) {
        throw InputError("empty permutation");
    }
    while (pos < text.size()) {
        if (text[pos] != '(') {
            throw InputError("expected '(' in permutation '" + std::string(text) + "'");
        }
        ++pos;
        std::vector<int> cycle;
        while (true) {
            skip_space();
            if (pos >= text.size()) {
                throw InputError("unterminated cycle in '" + std::string(text) + "'");
            }
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            // A token is a letter name, an aN index, optionally followed by ^-1 or ^{-1}.
            std::size_t end = pos + 1;
            if (text[pos] == 'a' && end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) {
                while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            }
            std::string token(text.substr(pos, end - pos));
            bool inverted = false;
            for (std::string_view suffix : {"^{-1}", "^-1"}) {
                if (text.substr(end, suffix.size()) == suffix) {
                    inverted = true;
                    end += suffix.size();
                    break;
                }
            }
            tree::Letter letter = alphabet.parse_letter(token);
            if (inverted) {
                letter = alphabet.inverse(letter);
            }
            if (seen[letter]) {
                throw InputError("letter repeated in permutation '" + std::string(text) + "'");
            }
            seen[letter] = true;
            cycle.push_back(letter);
            pos = end;
        }
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            pi[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
        }
        skip_space();
    }
    return pi;
}

std::string format_permutation(const Permutation& pi, const tree::Alphabet& alphabet) {
    std::string out;
    std::vector<bool> done(pi.size(), false);
    for (std::size_t start = 0; start < pi.size(); ++start) {
        if (done[start]) continue;
        out += '(';
        std::size_t j = start;
        bool first = true;
        while (!done[j]) {
            done[j] = true;
            if (!first && alphabet.q() > 4) out += ' ';
            out += alphabet.name(static_cast<tree::Letter>(j));
            first = false;
            j = static_cast<std::size_t>(pi[j]);
        }
        out += ')';
    }
    return out;
}

CoinMatrix permutation_coin(const Permutation& pi, const PhaseDecoration& phi) {
    const int q = static_cast<int>(pi.size());
    if (static_cast<int>(phi.phases.size()) != q) {
        throw InputError("phase decoration size does not match permutation size");
    }
    std::vector<bool> hit(pi.size(), false);
    for (int image : pi) {
        if (image < 0 || image >= q || hit[static_cast<std::size_t>(image)]) {
            throw InputError("permutation is not a bijection");
        }
        hit[static_cast<std::size_t>(image)] = true;
    }
    Matrix m = Matrix::Zero(q, q);
    for (int tau = 0; tau < q; ++tau) {
        const int row = pi[static_cast<std::size_t>(tau)];
        m(row, tau) = std::polar(1.0, phi.phases[static_cast<std::size_t>(row)]);
    }
    return CoinMatrix(std::move(m));
}

CoinMatrix permutation_coin(const Permutation& pi) {
    return permutation_coin(pi, PhaseDecoration::zero(static_cast<int>(pi.size())));
}

std::optional<Permutation> permutation_pattern(const CoinMatrix& c) {
    Permutation pi(static_cast<std::size_t>(c.q()), -1);
    for (int tau = 0; tau < c.q(); ++tau) {
        for (int row = 0; row < c.q(); ++row) {
            if (!c.structurally_zero(row, tau)) {
                if (pi[static_cast<std::size_t>(tau)] != -1) {
                    return std::nullopt;
                }
                pi[static_cast<std::size_t>(tau)] = row;
            }
        }
    }
    return pi;  // unitarity makes a one-entry-per-column pattern a bijection
}

CoinMatrix identity_coin(int q) {
    return CoinMatrix(Matrix::Identity(q, q));
}

CoinMatrix family_q3_delocalizing(int j, double r) {
    check_r(r);
    const double t = std::sqrt(1.0 - r * r);
    switch (j) {
        case 1: return CoinMatrix(real3({1, 0, 0, 0, r, t, 0, -t, r}));
        case 2: return CoinMatrix(real3({r, 0, t, 0, 1, 0, -t, 0, r}));
        case 3: return CoinMatrix(real3({r, t, 0, -t, r, 0, 0, 0, 1}));
        default: throw InputError("delocalizing family index must be 1..3");
    }
}

CoinMatrix family_q3_localizing(int j, double r) {
    check_r(r);
    const double t = std::sqrt(1.0 - r * r);
    switch (j) {
        case 1: return CoinMatrix(real3({0, r, t, 1, 0, 0, 0, -t, r}));
        case 2: return CoinMatrix(real3({0, 1, 0, r, 0, t, -t, 0, r}));
        case 3: return CoinMatrix(real3({0, 0, 1, -t, r, 0, r, t, 0}));
        case 4: return CoinMatrix(real3({0, t, r, 0, r, -t, 1, 0, 0}));
        case 5: return CoinMatrix(real3({r, 0, -t, t, 0, r, 0, 1, 0}));
        case 6: return CoinMatrix(real3({r, -t, 0, 0, 0, 1, t, r, 0}));
        default: throw InputError("localizing family index must be 1..6");
    }
}

Q4Kind parse_q4_kind(std::string_view name) {
    static const std::map<std::string, Q4Kind, std::less<>> kKinds = {
        {"reducing", Q4Kind::reducing},         {"propagating_1", Q4Kind::propagating_1},
        {"propagating_2", Q4Kind::propagating_2}, {"propagating_3", Q4Kind::propagating_3},
        {"localizing_1", Q4Kind::localizing_1}, {"localizing_2", Q4Kind::localizing_2},
        {"localizing_3", Q4Kind::localizing_3}, {"localizing_4", Q4Kind::localizing_4},
    };
    const auto it = kKinds.find(name);
    if (it == kKinds.end()) {
        throw InputError("unknown q=4 family kind '" + std::string(name) + "'");
    }
    return it->second;
}

std::string q4_kind_name(Q4Kind kind) {
    switch (kind) {
        case Q4Kind::reducing: return "reducing";
        case Q4Kind::propagating_1: return "propagating_1";
        case Q4Kind::propagating_2: return "propagating_2";
        case Q4Kind::propagating_3: return "propagating_3";
        case Q4Kind::localizing_1: return "localizing_1";
        case Q4Kind::localizing_2: return "localizing_2";
        case Q4Kind::localizing_3: return "localizing_3";
        case Q4Kind::localizing_4: return "localizing_4";
    }
    return "unknown";
}

CoinMatrix family_q4(Q4Kind kind, double psi, double xi) {
    const double cp = std::cos(psi), sp = std::sin(psi);
    const double cx = std::cos(xi), sx = std::sin(xi);
    switch (kind) {
        case Q4Kind::reducing:
            return CoinMatrix(real4({cp, 0, sp, 0, 0, cx, 0, sx, -sp, 0, cp, 0, 0, -sx, 0, cx}));
        case Q4Kind::propagating_1:
            return CoinMatrix(real4({cp, 0, 0, sp, 0, cx, sx, 0, 0, -sx, cx, 0, -sp, 0, 0, cp}));
        case Q4Kind::propagating_2:
            return CoinMatrix(real4({0, cx, 0, sx, cp, 0, sp, 0, 0, -sx, 0, cx, -sp, 0, cp, 0}));
        case Q4Kind::propagating_3:
            return CoinMatrix(real4({cp, sp, 0, 0, -sp, cp, 0, 0, 0, 0, cx, sx, 0, 0, -sx, cx}));
        case Q4Kind::localizing_1:
            return CoinMatrix(real4({0, 0, cp, sp, 0, 0, -sp, cp, 1, 0, 0, 0, 0, 1, 0, 0}));
        case Q4Kind::localizing_2:
            return CoinMatrix(real4({0, 0, 1, 0, 0, 0, 0, 1, cp, sp, 0, 0, -sp, cp, 0, 0}));
        case Q4Kind::localizing_3:
            return CoinMatrix(real4({0, cp, sp, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -sp, cp, 0}));
        case Q4Kind::localizing_4:
            return CoinMatrix(real4({0, 0, 1, 0, cp, 0, 0, sp, -sp, 0, 0, cp, 0, 1, 0, 0}));
    }
    throw InputError("unknown q=4 family kind");
}

std::string shape_tag_name(ShapeTag tag) {
    switch (tag) {
        case ShapeTag::fully_localizing: return "fully_localizing";
        case ShapeTag::fully_delocalizing: return "fully_delocalizing";
        case ShapeTag::mixed: return "mixed";
        case ShapeTag::propagating_shape: return "propagating_shape";
        case ShapeTag::reducing_shape: return "reducing_shape";
        case ShapeTag::other: return "other";
    }
    return "other";
}

namespace {

struct ListedPermutation {
    const char* cycles;
    ShapeTag tag;
    const char* set;
};

// Permutation lists for q = 3 and q = 4 (24 = 5 + 9 + 8 + 2 for q = 4).
constexpr ListedPermutation kListQ3[] = {
    {"(abc)", ShapeTag::fully_localizing, "Lambda"},
    {"(acb)", ShapeTag::fully_localizing, "Lambda"},
    {"(a)(b)(c)", ShapeTag::fully_delocalizing, "S"},
    {"(a)(bc)", ShapeTag::mixed, "M"},
    {"(b)(ac)", ShapeTag::mixed, "M"},
    {"(c)(ab)", ShapeTag::mixed, "M"},
};

constexpr ListedPermutation kListQ4[] = {
    {"(abBA)", ShapeTag::fully_localizing, "Lambda"},
    {"(aAbB)", ShapeTag::fully_localizing, "Lambda"},
    {"(aABb)", ShapeTag::fully_localizing, "Lambda"},
    {"(aBbA)", ShapeTag::fully_localizing, "Lambda"},
    {"(aA)(bB)", ShapeTag::fully_localizing, "Lambda"},
    {"(abAB)", ShapeTag::fully_delocalizing, "S"},
    {"(aBAb)", ShapeTag::fully_delocalizing, "S"},
    {"(ab)(AB)", ShapeTag::propagating_shape, "Pi1"},
    {"(aB)(bA)", ShapeTag::propagating_shape, "Pi1"},
    {"(a)(b)(AB)", ShapeTag::propagating_shape, "Pi1"},
    {"(a)(B)(bA)", ShapeTag::propagating_shape, "Pi1"},
    {"(aB)(b)(A)", ShapeTag::propagating_shape, "Pi1"},
    {"(ab)(A)(B)", ShapeTag::propagating_shape, "Pi1"},
    {"(a)(b)(A)(B)", ShapeTag::propagating_shape, "Pi1"},
    {"(a)(bAB)", ShapeTag::other, "Pi2"},
    {"(a)(bBA)", ShapeTag::other, "Pi2"},
    {"(b)(aAB)", ShapeTag::other, "Pi2"},
    {"(b)(aBA)", ShapeTag::other, "Pi2"},
    {"(A)(abB)", ShapeTag::other, "Pi2"},
    {"(A)(aBb)", ShapeTag::other, "Pi2"},
    {"(B)(abA)", ShapeTag::other, "Pi2"},
    {"(B)(aAb)", ShapeTag::other, "Pi2"},
    {"(a)(bB)(A)", ShapeTag::mixed, "M"},
    {"(aA)(b)(B)", ShapeTag::mixed, "M"},
};

bool zero_on(const CoinMatrix& c, const std::vector<std::pair<int, int>>& positions) {
    return std::all_of(positions.begin(), positions.end(),
                       [&](const auto& p) { return c.structurally_zero(p.first, p.second); });
}

}  // namespace

CoinClass classify_shape(const CoinMatrix& c) {
    const int q = c.q();
    if (const auto pi = permutation_pattern(c)) {
        const tree::Alphabet alphabet(std::max(q, 3));
        auto match = [&](const auto& list) -> std::optional<CoinClass> {
            for (const auto& entry : list) {
                if (parse_permutation(entry.cycles, alphabet) == *pi) {
                    return CoinClass{entry.tag, entry.set};
                }
            }
            return std::nullopt;
        };
        if (q == 3) {
            if (auto hit = match(kListQ3)) return *hit;
        } else if (q == 4) {
            if (auto hit = match(kListQ4)) return *hit;
        } else {
            if (*pi == boundary_permutation(q)) {
                return {ShapeTag::fully_localizing, "Lambda"};
            }
            if ((q % 2 == 1 && *pi == identity_permutation(q)) ||
                (q % 2 == 0 && *pi == cyclic_permutation(q))) {
                return {ShapeTag::fully_delocalizing, "S"};
            }
        }
        return {ShapeTag::other, ""};
    }
    if (q == 4) {
        if (zero_on(c, {{0, 2}, {1, 3}, {2, 0}, {3, 1}})) {
            return {ShapeTag::propagating_shape, ""};
        }
        if (zero_on(c, {{0, 1}, {0, 3}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 0}, {3, 2}})) {
            return {ShapeTag::reducing_shape, ""};
        }
    }
    return {ShapeTag::other, ""};
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

CoinMatrix haar_random(int q, std::uint64_t seed) {
    Matrix g(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            const auto z = rng::normal_pair(seed, 0x4841u, static_cast<std::uint64_t>(i * q + j));
            g(i, j) = Complex(z[0], z[1]);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix qm = qr.householderQ() * Matrix::Identity(q, q);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases of R's diagonal so the distribution is Haar.
    for (int j = 0; j < q; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) {
            qm.col(j) *= d / a;
        }
    }
    // Re-orthonormalise to push the residual to machine precision.
    Eigen::HouseholderQR<Matrix> polish(qm);
    Matrix out = polish.householderQ() * Matrix::Identity(q, q);
    const Matrix rr = polish.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < q; ++j) {
        const Complex d = rr(j, j);
        out.col(j) *= d / std::abs(d);
    }
    return CoinMatrix(std::move(out));
}

CoinMatrix perturb(const CoinMatrix& c, double distance, std::uint64_t seed) {
    if (!(distance >= 0.0 && distance < 2.0)) {
        throw InputError("perturbation distance must lie in [0, 2)");
    }
    const int q = c.q();
    if (distance == 0.0) {
        return c;
    }
    Matrix h(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            const auto z = rng::normal_pair(seed, 0x5045u, static_cast<std::uint64_t>(i * q + j));
            h(i, j) = Complex(z[0], z[1]);
        }
    }
    h = (h + h.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd theta = es.eigenvalues();
    const double top = theta.cwiseAbs().maxCoeff();
    // ||exp(iH) - I|| = 2 sin(max|theta|/2) for |theta| <= pi.
    const double target = 2.0 * std::asin(distance / 2.0);
    theta *= target / top;
    Matrix expih = es.eigenvectors() *
                   theta.unaryExpr([](double x) { return std::polar(1.0, x); }).asDiagonal() *
                   es.eigenvectors().adjoint();
    return CoinMatrix(c.matrix() * expih);
}

}  // namespace arborwalk::coin
