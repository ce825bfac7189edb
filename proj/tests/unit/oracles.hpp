#pragma once

// Reference implementations written directly from the definitions, sharing
// no code with the library beyond the disorder field and coin entries.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "arborwalk/coin.hpp"
#include "arborwalk/disorder.hpp"
#include "arborwalk/tree.hpp"

namespace oracle {

using Complex = std::complex<double>;
using RawWord = std::vector<int>;

inline int inv(int a, int q) { return q % 2 == 0 ? (a + q / 2) % q : a; }

inline RawWord times(RawWord w, int a, int q) {
    if (!w.empty() && w.back() == inv(a, q)) {
        w.pop_back();
    } else {
        w.push_back(a);
    }
    return w;
}

/// Letter appended by the shift from a vertex of length `length` in coin
/// state sigma.
inline int step(int sigma, std::size_t length, int q) {
    if (q % 2 == 0) return sigma;
    return (sigma + (length % 2 == 0 ? 1 : 2)) % q;
}

inline arborwalk::tree::Word to_word(const RawWord& w, const arborwalk::tree::Alphabet& alphabet) {
    return arborwalk::tree::reduce(std::span<const int>(w.data(), w.size()), alphabet);
}

/// Every reduced word of length <= radius, breadth first.
inline std::vector<RawWord> ball(int q, int radius) {
    std::vector<RawWord> out{{}};
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (static_cast<int>(out[k].size()) == radius) continue;
        for (int a = 0; a < q; ++a) {
            if (!out[k].empty() && out[k].back() == inv(a, q)) continue;
            RawWord w = out[k];
            w.push_back(a);
            out.push_back(w);
        }
    }
    return out;
}

/// Sparse U_omega(C) on states (word, letter): column (x, tau) maps to
/// sum_sigma e^{i omega^sigma_y} C_{sigma tau} (y, sigma), y = x step(sigma).
struct Walk {
    int q;
    arborwalk::coin::Matrix c;
    arborwalk::disorder::DisorderField omega;

    using State = std::pair<RawWord, int>;
    using Sparse = std::map<State, Complex>;

    Sparse apply(const Sparse& psi) const {
        const arborwalk::tree::Alphabet alphabet(q);
        Sparse out;
        for (const auto& [s, v] : psi) {
            for (int sigma = 0; sigma < q; ++sigma) {
                if (c(sigma, s.second) == 0.0) continue;
                const RawWord y = times(s.first, step(sigma, s.first.size(), q), q);
                const double w = omega.angle(to_word(y, alphabet), static_cast<arborwalk::tree::Letter>(sigma));
                out[{y, sigma}] += std::polar(1.0, w) * c(sigma, s.second) * v;
            }
        }
        return out;
    }

    Complex amplitude(const State& target, const State& source, int n) const {
        Sparse psi{{source, 1.0}};
        for (int k = 0; k < n; ++k) psi = apply(psi);
        const auto it = psi.find(target);
        return it == psi.end() ? Complex(0.0) : it->second;
    }
};

}  // namespace oracle
