#pragma once

// Matrix elements of U_omega(C) computed on the fly, without a ball.
//
// U (x (x) tau) = sum_sigma e^{i omega^sigma_y} C(x)_{sigma tau} y (x) sigma,
// y = x . step(sigma, |x|), where step(sigma) = sigma for even q and
// a_{sigma+1} (|x| even) or a_{sigma+2} (|x| odd) for odd q.

#include <complex>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "arborwalk/disorder.hpp"
#include "arborwalk/tree.hpp"

namespace arborwalk::walk {

using Complex = std::complex<double>;

struct BasisState {
    tree::Word x;
    tree::Letter tau = 0;

    bool operator==(const BasisState& other) const = default;
    auto operator<=>(const BasisState& other) const = default;
};

struct BasisStateHash {
    std::size_t operator()(const BasisState& s) const {
        return s.x.hash() * 31U + s.tau;
    }
};

struct Entry {
    tree::Word x;
    tree::Letter letter = 0;
    Complex value;
};

using SparseState = std::unordered_map<BasisState, Complex, BasisStateHash>;

inline constexpr std::size_t kDefaultStateCap = 20'000'000;

class LocalWalk {
public:
    LocalWalk(const tree::Alphabet& alphabet, disorder::SiteCoinField coins,
              disorder::DisorderField disorder = {});

    const tree::Alphabet& alphabet() const { return alphabet_; }
    const disorder::SiteCoinField& coins() const { return coins_; }
    const disorder::DisorderField& disorder() const { return disorder_; }
    int q() const { return alphabet_.q(); }

    /// Letter the shift appends to a vertex of the given length parity when
    /// the coin state is sigma.
    tree::Letter step_letter(tree::Letter sigma, int parity) const {
        if (alphabet_.even()) {
            return sigma;
        }
        return alphabet_.shifted(sigma, parity == 0 ? 1 : 2);
    }

    /// The unique vertex x whose column feeds row (y, sigma).
    tree::Word row_source(const tree::Word& y, tree::Letter sigma) const;

    /// The q entries of U (x (x) tau), in order sigma = 0..q-1.
    void column(const tree::Word& x, tree::Letter tau, std::vector<Entry>& out) const;
    /// The q entries <y (x) sigma| U |x (x) tau>, tau = 0..q-1, all with the
    /// same source vertex x = row_source(y, sigma).
    void row(const tree::Word& y, tree::Letter sigma, std::vector<Entry>& out) const;

    Complex element(const BasisState& target, const BasisState& source) const;

    /// U psi and U* psi on sparse states. Throws CapacityError when the
    /// support would exceed the cap.
    SparseState apply(const SparseState& psi, std::size_t cap = kDefaultStateCap) const;
    SparseState apply_adjoint(const SparseState& psi, std::size_t cap = kDefaultStateCap) const;

    /// <phi|U^n|phi> for n = 0..N, computed as <U^{*k} phi | U^{n-k} phi>
    /// with k = floor(n/2), so supports only grow to radius about N/2.
    std::vector<Complex> return_amplitudes(const BasisState& phi, int N,
                                           std::size_t cap = kDefaultStateCap) const;

private:
    tree::Alphabet alphabet_;
    disorder::SiteCoinField coins_;
    disorder::DisorderField disorder_;
};

/// <a|b> over sparse states.
Complex inner(const SparseState& a, const SparseState& b);
double norm_squared(const SparseState& a);

}  // namespace arborwalk::walk
