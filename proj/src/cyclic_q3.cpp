#include "arborwalk/cyclic_q3.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "arborwalk/errors.hpp"

namespace arborwalk::transfer {

namespace {

constexpr tree::Letter kA = 0;
constexpr tree::Letter kB = 1;
constexpr tree::Letter kC = 2;

struct Pattern {
    std::initializer_list<int> word;
    tree::Letter tau;
};

const Pattern kPatterns[6] = {
    {{}, kA}, {{kC}, kC}, {{kC}, kA}, {{kC}, kB}, {{kC, kB}, kC}, {{kC, kB}, kB},
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
    return d;
}

}  // namespace

BasisState cyclic_state(const tree::Word& anchor, std::int64_t j, const tree::Alphabet& alphabet) {
    if (alphabet.q() != 3) throw InputError("the cyclic basis is defined for q = 3");
    const std::int64_t k = floor_div(j - 1, 6);
    const auto i = static_cast<std::size_t>(j - 1 - 6 * k);
    const tree::Word w = tree::reduce({kC, kB, kA, kC}, alphabet);
    const tree::Word step = k >= 0 ? w : tree::inverse(w, alphabet);
    tree::Word x = anchor;
    for (std::int64_t n = 0; n < (k >= 0 ? k : -k); ++n) {
        x = tree::multiply(x, step, alphabet);
    }
    x = tree::multiply(x, tree::reduce(kPatterns[i].word, alphabet), alphabet);
    return {x, kPatterns[i].tau};
}

std::int64_t CyclicBasis::find(const BasisState& s) const {
    const auto it = std::find(states.begin(), states.end(), s);
    return it == states.end() ? j_min - 1 : j_min + (it - states.begin());
}

CyclicBasis build_cyclic_basis(const tree::Word& anchor, int radius) {
    if (anchor.parity() != 0) throw InputError("cyclic basis anchor must have even length");
    if (radius < 4) throw InputError("ball radius " + std::to_string(radius) + " is too small for one period");
    const tree::Alphabet alphabet(3);
    const walk::LocalWalk walk(alphabet,
                               disorder::SiteCoinField(coin::family_q3_localizing(1, 0.6)));
    const auto inside = [&](const tree::Word& x) { return tree::distance(anchor, x) <= radius; };

    std::unordered_set<BasisState, walk::BasisStateHash> closure;
    std::deque<BasisState> queue;
    const BasisState seed{anchor, kA};
    closure.insert(seed);
    queue.push_back(seed);
    std::vector<walk::Entry> entries;
    while (!queue.empty()) {
        const BasisState s = queue.front();
        queue.pop_front();
        for (int pass = 0; pass < 2; ++pass) {
            if (pass == 0) {
                walk.column(s.x, s.tau, entries);
            } else {
                walk.row(s.x, s.tau, entries);
            }
            for (const walk::Entry& e : entries) {
                if (e.value == walk::Complex{} || !inside(e.x)) continue;
                BasisState n{e.x, e.letter};
                if (closure.insert(n).second) queue.push_back(std::move(n));
            }
        }
    }

    CyclicBasis out;
    out.anchor = anchor;
    out.closure_size = closure.size();
    std::int64_t hi = 1;
    while (inside(cyclic_state(anchor, hi + 1, alphabet).x)) ++hi;
    std::int64_t lo = 1;
    while (inside(cyclic_state(anchor, lo - 1, alphabet).x)) --lo;
    out.j_min = lo;
    out.j_max = hi;

    std::unordered_map<BasisState, std::int64_t, walk::BasisStateHash> labels;
    const std::int64_t reach = 6 * (radius + 4);
    for (std::int64_t j = lo - reach; j <= hi + reach; ++j) {
        labels.emplace(cyclic_state(anchor, j, alphabet), j);
    }
    for (const BasisState& s : closure) {
        if (!labels.contains(s)) {
            throw NumericalError("orbit closure contains " + tree::format_word(s.x, alphabet) +
                                 " (x) " + alphabet.name(s.tau) + ", which is not in the cyclic sequence");
        }
    }
    for (std::int64_t j = lo; j <= hi; ++j) {
        BasisState s = cyclic_state(anchor, j, alphabet);
        if (tree::distance(anchor, s.x) <= radius - 3 && !closure.contains(s)) {
            throw NumericalError("e_" + std::to_string(j) + " is missing from the orbit closure");
        }
        out.states.push_back(std::move(s));
    }
    return out;
}

double BandUnitaryWindow::interior_unitarity_residual(int margin) const {
    const Eigen::Index n = static_cast<Eigen::Index>(size());
    const Eigen::Index first = margin;
    const Eigen::Index count = n - 2 * margin;
    if (count <= 0) return 0.0;
    const walk::DenseMatrix cols = matrix.middleCols(first, count);
    const walk::DenseMatrix gram = cols.adjoint() * cols;
    return (gram - walk::DenseMatrix::Identity(count, count)).cwiseAbs().maxCoeff();
}

BandUnitaryWindow build_v(double r, const disorder::DisorderField& disorder,
                          const tree::Word& anchor, std::int64_t j_min, std::int64_t j_max,
                          const coin::PhaseDecoration& phi) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("r must lie in (0, 1)");
    if (j_max < j_min) throw InputError("empty window");
    if (anchor.parity() != 0) throw InputError("cyclic basis anchor must have even length");
    const tree::Alphabet alphabet(3);
    const walk::LocalWalk walk(
        alphabet, disorder::SiteCoinField(coin::decorate(coin::family_q3_localizing(1, r), phi)),
        disorder);
    BandUnitaryWindow v;
    v.r = r;
    v.j_min = j_min;
    v.j_max = j_max;
    std::unordered_map<BasisState, Eigen::Index, walk::BasisStateHash> index;
    for (std::int64_t j = j_min; j <= j_max; ++j) {
        BasisState s = cyclic_state(anchor, j, alphabet);
        v.omega.push_back(disorder.angle(s.x, s.tau));
        index.emplace(s, static_cast<Eigen::Index>(j - j_min));
        v.states.push_back(std::move(s));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(v.states.size());
    v.matrix = walk::DenseMatrix::Zero(n, n);
    std::vector<walk::Entry> entries;
    for (Eigen::Index col = 0; col < n; ++col) {
        const BasisState& s = v.states[static_cast<std::size_t>(col)];
        walk.column(s.x, s.tau, entries);
        for (const walk::Entry& e : entries) {
            const auto it = index.find(BasisState{e.x, e.letter});
            if (it != index.end()) v.matrix(it->second, col) = e.value;
        }
    }
    return v;
}

std::array<double, 6> block_omega(const BandUnitaryWindow& v, std::int64_t j) {
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) {
        const std::int64_t row = 6 * j + k;
        if (row < v.j_min || row > v.j_max) throw InputError("block outside the window");
        out[static_cast<std::size_t>(k)] = v.phase(row);
    }
    return out;
}

}  // namespace arborwalk::transfer
