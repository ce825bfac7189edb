#include "arborwalk/blocks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

#include "arborwalk/errors.hpp"

namespace arborwalk::walk {

namespace {

bool matches_localizing_family(const coin::CoinMatrix& c) {
    if (c.q() != 4) return false;
    for (auto kind : {coin::Q4Kind::localizing_1, coin::Q4Kind::localizing_2,
                      coin::Q4Kind::localizing_3, coin::Q4Kind::localizing_4}) {
        const coin::CoinMatrix generic = coin::family_q4(kind, 0.7);
        bool inside = true;
        for (int i = 0; i < 4 && inside; ++i) {
            for (int j = 0; j < 4 && inside; ++j) {
                if (generic.structurally_zero(i, j) && !c.structurally_zero(i, j)) inside = false;
            }
        }
        if (inside) return true;
    }
    return false;
}

tree::Word pick_anchor(const std::vector<BasisState>& basis) {
    std::map<tree::Word, int> count;
    for (const BasisState& s : basis) {
        ++count[s.x];
    }
    const tree::Word* best = nullptr;
    int best_count = -1;
    for (const auto& [x, k] : count) {
        const bool better = k > best_count ||
                            (k == best_count && x.parity() == 1 && best->parity() == 0);
        if (better) {
            best = &x;
            best_count = k;
        }
    }
    return *best;
}

}  // namespace

InvariantBlock orbit_block(const LocalWalk& walk, const BasisState& seed, std::size_t max_dimension) {
    std::vector<BasisState> order;
    std::unordered_set<BasisState, BasisStateHash> seen;
    std::deque<BasisState> queue;
    std::vector<Entry> entries;

    auto add = [&](BasisState s) {
        if (seen.insert(s).second) {
            if (seen.size() > max_dimension) {
                throw NotLocalizingError("orbit of the seed exceeds dimension " +
                                         std::to_string(max_dimension));
            }
            order.push_back(s);
            queue.push_back(std::move(s));
        }
    };

    // Follow the forward orbit first so that permutation blocks come out
    // as a cycle of successive images.
    BasisState cursor = seed;
    add(seed);
    while (true) {
        walk.column(cursor.x, cursor.tau, entries);
        const auto nonzero = std::count_if(entries.begin(), entries.end(),
                                           [](const Entry& e) { return e.value != Complex{}; });
        if (nonzero != 1) break;
        const auto it = std::find_if(entries.begin(), entries.end(),
                                     [](const Entry& e) { return e.value != Complex{}; });
        BasisState next{it->x, it->letter};
        if (seen.contains(next)) break;
        add(next);
        cursor = std::move(next);
    }

    while (!queue.empty()) {
        const BasisState s = queue.front();
        queue.pop_front();
        walk.column(s.x, s.tau, entries);
        for (const Entry& e : entries) {
            if (e.value != Complex{}) add({e.x, e.letter});
        }
        walk.row(s.x, s.tau, entries);
        for (const Entry& e : entries) {
            if (e.value != Complex{}) add({e.x, e.letter});
        }
    }

    InvariantBlock block;
    block.basis = std::move(order);
    block.anchor = pick_anchor(block.basis);
    const auto d = static_cast<Eigen::Index>(block.basis.size());
    block.restriction = DenseMatrix::Zero(d, d);
    std::map<BasisState, Eigen::Index> position;
    for (Eigen::Index k = 0; k < d; ++k) {
        position.emplace(block.basis[static_cast<std::size_t>(k)], k);
    }
    for (Eigen::Index b = 0; b < d; ++b) {
        const BasisState& s = block.basis[static_cast<std::size_t>(b)];
        walk.column(s.x, s.tau, entries);
        for (const Entry& e : entries) {
            const auto it = position.find({e.x, e.letter});
            if (it != position.end()) {
                block.restriction(it->second, b) += e.value;
            } else {
                block.residual = std::max(block.residual, std::abs(e.value));
            }
        }
    }
    return block;
}

std::vector<InvariantBlock> localizing_blocks(const LocalWalk& walk, const tree::BallIndex& ball,
                                              std::size_t max_dimension) {
    std::vector<InvariantBlock> blocks;
    std::unordered_set<BasisState, BasisStateHash> covered;
    for (const tree::Word& x : ball.vertices()) {
        for (int t = 0; t < walk.q(); ++t) {
            BasisState s{x, static_cast<tree::Letter>(t)};
            if (covered.contains(s)) continue;
            InvariantBlock block = orbit_block(walk, s, max_dimension);
            covered.insert(block.basis.begin(), block.basis.end());
            blocks.push_back(std::move(block));
        }
    }
    return blocks;
}

std::vector<InvariantBlock> localizing_blocks(const coin::CoinMatrix& c,
                                              const disorder::DisorderField& disorder,
                                              const tree::BallIndex& ball) {
    const coin::CoinClass cls = coin::classify_shape(c);
    if (cls.tag != coin::ShapeTag::fully_localizing && !matches_localizing_family(c)) {
        throw NotLocalizingError("coin is neither a fully localizing permutation nor a q=4 "
                                 "localizing family member");
    }
    const LocalWalk walk(ball.alphabet(), disorder::SiteCoinField(c), disorder);
    return localizing_blocks(walk, ball, 2 * static_cast<std::size_t>(c.q()));
}

}  // namespace arborwalk::walk
