#include "arborwalk/local_walk.hpp"

#include "arborwalk/errors.hpp"

namespace arborwalk::walk {

LocalWalk::LocalWalk(const tree::Alphabet& alphabet, disorder::SiteCoinField coins,
                     disorder::DisorderField disorder)
    : alphabet_(alphabet), coins_(std::move(coins)), disorder_(std::move(disorder)) {
    if (coins_.q() != alphabet_.q()) {
        throw InputError("coin dimension " + std::to_string(coins_.q()) +
                         " does not match tree degree " + std::to_string(alphabet_.q()));
    }
}

tree::Word LocalWalk::row_source(const tree::Word& y, tree::Letter sigma) const {
    if (alphabet_.even()) {
        return tree::append(y, alphabet_.inverse(sigma), alphabet_);
    }
    const int k = y.parity() == 1 ? 1 : 2;
    return tree::append(y, alphabet_.shifted(sigma, k), alphabet_);
}

void LocalWalk::column(const tree::Word& x, tree::Letter tau, std::vector<Entry>& out) const {
    out.clear();
    const coin::CoinMatrix& c = coins_.at(x);
    const int parity = x.parity();
    for (int s = 0; s < q(); ++s) {
        const auto sigma = static_cast<tree::Letter>(s);
        tree::Word y = tree::append(x, step_letter(sigma, parity), alphabet_);
        const double phase = disorder_.angle(y, sigma);
        const Complex value = std::polar(1.0, phase) * c(s, tau);
        out.push_back({std::move(y), sigma, value});
    }
}

void LocalWalk::row(const tree::Word& y, tree::Letter sigma, std::vector<Entry>& out) const {
    out.clear();
    const tree::Word x = row_source(y, sigma);
    const coin::CoinMatrix& c = coins_.at(x);
    const Complex phase = std::polar(1.0, disorder_.angle(y, sigma));
    for (int t = 0; t < q(); ++t) {
        out.push_back({x, static_cast<tree::Letter>(t), phase * c(sigma, t)});
    }
}

Complex LocalWalk::element(const BasisState& target, const BasisState& source) const {
    if (row_source(target.x, target.tau) != source.x) {
        return {0.0, 0.0};
    }
    const Complex phase = std::polar(1.0, disorder_.angle(target.x, target.tau));
    return phase * coins_.at(source.x)(target.tau, source.tau);
}

SparseState LocalWalk::apply(const SparseState& psi, std::size_t cap) const {
    SparseState out;
    out.reserve(psi.size() * static_cast<std::size_t>(q()));
    std::vector<Entry> col;
    for (const auto& [state, amp] : psi) {
        if (amp == Complex{}) continue;
        column(state.x, state.tau, col);
        for (Entry& e : col) {
            if (e.value == Complex{}) continue;
            out[BasisState{std::move(e.x), e.letter}] += e.value * amp;
        }
        if (out.size() > cap) {
            throw CapacityError("sparse state exceeds " + std::to_string(cap) + " entries");
        }
    }
    return out;
}

SparseState LocalWalk::apply_adjoint(const SparseState& psi, std::size_t cap) const {
    // Column (x, tau) of U* is the conjugate of row (x, tau) of U.
    SparseState out;
    out.reserve(psi.size() * static_cast<std::size_t>(q()));
    std::vector<Entry> r;
    for (const auto& [state, amp] : psi) {
        if (amp == Complex{}) continue;
        row(state.x, state.tau, r);
        for (Entry& e : r) {
            if (e.value == Complex{}) continue;
            out[BasisState{std::move(e.x), e.letter}] += std::conj(e.value) * amp;
        }
        if (out.size() > cap) {
            throw CapacityError("sparse state exceeds " + std::to_string(cap) + " entries");
        }
    }
    return out;
}

std::vector<Complex> LocalWalk::return_amplitudes(const BasisState& phi, int N,
                                                  std::size_t cap) const {
    if (N < 0) {
        throw InputError("number of steps must be non-negative");
    }
    const int forward = (N + 1) / 2;
    const int backward = N / 2;
    std::vector<SparseState> f(static_cast<std::size_t>(forward) + 1);
    std::vector<SparseState> b(static_cast<std::size_t>(backward) + 1);
    f[0][phi] = 1.0;
    b[0][phi] = 1.0;
    for (int m = 1; m <= forward; ++m) {
        f[static_cast<std::size_t>(m)] = apply(f[static_cast<std::size_t>(m) - 1], cap);
    }
    for (int k = 1; k <= backward; ++k) {
        b[static_cast<std::size_t>(k)] = apply_adjoint(b[static_cast<std::size_t>(k) - 1], cap);
    }
    std::vector<Complex> out(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        const int k = n / 2;
        out[static_cast<std::size_t>(n)] =
            inner(b[static_cast<std::size_t>(k)], f[static_cast<std::size_t>(n - k)]);
    }
    return out;
}

Complex inner(const SparseState& a, const SparseState& b) {
    Complex s{};
    if (a.size() <= b.size()) {
        for (const auto& [state, va] : a) {
            const auto it = b.find(state);
            if (it != b.end()) s += std::conj(va) * it->second;
        }
    } else {
        for (const auto& [state, vb] : b) {
            const auto it = a.find(state);
            if (it != a.end()) s += std::conj(it->second) * vb;
        }
    }
    return s;
}

double norm_squared(const SparseState& a) {
    double s = 0.0;
    for (const auto& [state, v] : a) {
        s += std::norm(v);
    }
    return s;
}

}  // namespace arborwalk::walk
