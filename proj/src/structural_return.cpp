#include "arborwalk/structural_return.hpp"

#include <cstdint>

#include "arborwalk/errors.hpp"

namespace arborwalk::paths {

bool ReturnPattern::any(int n) const {
    for (bool b : possible[static_cast<std::size_t>(n)]) {
        if (b) return true;
    }
    return false;
}

int ReturnPattern::first_return() const {
    for (std::size_t n = 1; n < possible.size(); ++n) {
        if (any(static_cast<int>(n))) return static_cast<int>(n);
    }
    return -1;
}

ReturnPattern structural_returns(const coin::CoinMatrix& c, int source_parity, int N) {
    const int q = c.q();
    if (q > 32) throw InputError("structural return analysis supports q <= 32");
    if (N < 0) throw InputError("horizon must be non-negative");
    if (source_parity != 0 && source_parity != 1) throw InputError("parity must be 0 or 1");
    const tree::Alphabet alphabet(q);
    const auto letter = [&](int sigma, int parity) {
        return alphabet.even() ? sigma : static_cast<int>(alphabet.shifted(static_cast<tree::Letter>(sigma), 1 + parity));
    };
    using Mask = std::uint32_t;
    // closer[p][rho][l]: coin states sigma' reachable from rho whose step
    // from parity p is the letter l^-1.
    std::vector<Mask> closer(static_cast<std::size_t>(2 * q * q), 0);
    const auto closer_at = [&](int p, int rho, int l) -> Mask& {
        return closer[static_cast<std::size_t>((p * q + rho) * q + l)];
    };
    for (int p = 0; p < 2; ++p) {
        for (int rho = 0; rho < q; ++rho) {
            for (int s = 0; s < q; ++s) {
                if (c.structurally_zero(s, rho)) continue;
                const int l = alphabet.inverse(static_cast<tree::Letter>(letter(s, p)));
                closer_at(p, rho, l) |= Mask{1} << s;
            }
        }
    }
    // e[h][p][tau]: end states of closed walks of length 2h from parity p.
    const int half = N / 2;
    std::vector<std::vector<Mask>> e(static_cast<std::size_t>(half + 1),
                                     std::vector<Mask>(static_cast<std::size_t>(2 * q), 0));
    const auto at = [&](int h, int p, int tau) -> Mask& {
        return e[static_cast<std::size_t>(h)][static_cast<std::size_t>(p * q + tau)];
    };
    for (int p = 0; p < 2; ++p) {
        for (int tau = 0; tau < q; ++tau) at(0, p, tau) = Mask{1} << tau;
    }
    for (int h = 1; h <= half; ++h) {
        for (int p = 0; p < 2; ++p) {
            for (int tau = 0; tau < q; ++tau) {
                Mask out = 0;
                for (int s = 0; s < q; ++s) {
                    if (c.structurally_zero(s, tau)) continue;
                    const int l = letter(s, p);
                    for (int h1 = 0; h1 < h; ++h1) {
                        const Mask inner = at(h1, 1 - p, s);
                        Mask closers = 0;
                        for (int rho = 0; rho < q; ++rho) {
                            if (inner & (Mask{1} << rho)) closers |= closer_at(1 - p, rho, l);
                        }
                        for (int s2 = 0; s2 < q; ++s2) {
                            if (closers & (Mask{1} << s2)) out |= at(h - 1 - h1, p, s2);
                        }
                    }
                }
                at(h, p, tau) = out;
            }
        }
    }
    ReturnPattern pattern;
    pattern.q = q;
    pattern.source_parity = source_parity;
    pattern.possible.assign(static_cast<std::size_t>(N + 1), std::vector<bool>(static_cast<std::size_t>(q), false));
    for (int n = 0; n <= N; n += 2) {
        for (int tau = 0; tau < q; ++tau) {
            pattern.possible[static_cast<std::size_t>(n)][static_cast<std::size_t>(tau)] =
                (at(n / 2, source_parity, tau) >> tau) & 1U;
        }
    }
    return pattern;
}

}  // namespace arborwalk::paths
