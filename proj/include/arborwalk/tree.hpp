#pragma once

// Word algebra on the homogeneous tree T_q.
//
// Vertices are reduced words over q letters encoded as 0..q-1. For even q the
// letters pair up as generators of a free group, letter j having inverse
// j + q/2 (mod q). For odd q every letter is an involution. The neighbour of
// x through letter a is reduce(x a); translations act by left
// multiplication.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace arborwalk::tree {

using Letter = std::uint8_t;

class Alphabet {
public:
    explicit Alphabet(int q);

    int q() const { return q_; }
    bool even() const { return q_ % 2 == 0; }
    Letter inverse(Letter a) const { return inverse_[a]; }
    bool contains(int a) const { return a >= 0 && a < q_; }

    /// Letter j + k (mod q), the cyclic successor used by the odd-q shift.
    Letter shifted(Letter a, int k) const {
        return static_cast<Letter>(((a + k) % q_ + q_) % q_);
    }

    /// Display name: a,b,c for q=3; a,b,A,B (A = a^-1) for q=4; a1..aq otherwise.
    std::string name(Letter a) const;
    /// Inverse of name(); also accepts a1..aq and a^-1 style tokens.
    Letter parse_letter(std::string_view token) const;

    bool operator==(const Alphabet& other) const { return q_ == other.q_; }

private:
    int q_;
    std::vector<Letter> inverse_;
};

class Word {
public:
    Word() = default;

    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int parity() const { return static_cast<int>(letters_.size() & 1U); }
    std::span<const Letter> letters() const { return letters_; }
    Letter back() const { return letters_.back(); }

    bool operator==(const Word& other) const = default;
    auto operator<=>(const Word& other) const = default;

    std::size_t hash() const;

private:
    friend Word reduce(std::span<const int> raw, const Alphabet& alphabet);
    friend Word append(const Word& w, Letter a, const Alphabet& alphabet);
    friend Word multiply(const Word& x, const Word& y, const Alphabet& alphabet);
    friend Word inverse(const Word& w, const Alphabet& alphabet);

    std::vector<Letter> letters_;
};

struct WordHash {
    std::size_t operator()(const Word& w) const { return w.hash(); }
};

/// Reduced form of a raw letter sequence. Throws InputError on letters
/// outside 0..q-1.
Word reduce(std::span<const int> raw, const Alphabet& alphabet);
Word reduce(std::initializer_list<int> raw, const Alphabet& alphabet);

/// Reduced product w a.
Word append(const Word& w, Letter a, const Alphabet& alphabet);

/// Reduced product x y.
Word multiply(const Word& x, const Word& y, const Alphabet& alphabet);

Word inverse(const Word& w, const Alphabet& alphabet);

/// The q neighbours reduce(w a_j), in letter order.
std::vector<Word> neighbors(const Word& w, const Alphabet& alphabet);

/// Graph distance, the length of reduce(x^-1 y).
int distance(const Word& x, const Word& y);

std::string format_word(const Word& w, const Alphabet& alphabet);
/// Parses "e", "", "ab", "a.b.A" or "a1.a2" style words.
Word parse_word(std::string_view text, const Alphabet& alphabet);

/// 1 + q((q-1)^L - 1)/(q-2): the number of vertices within distance L.
std::size_t ball_size(int q, int radius);

inline constexpr std::size_t kDefaultBallCap = 4'000'000;

/// Dense indexing of the ball of radius L around a centre. Vertices are
/// listed breadth first; within a shell, in lexicographic order of the
/// letter path from the centre.
class BallIndex {
public:
    BallIndex(const Alphabet& alphabet, Word center, int radius,
              std::size_t cap = kDefaultBallCap);

    const Alphabet& alphabet() const { return alphabet_; }
    const Word& center() const { return center_; }
    int radius() const { return radius_; }
    std::size_t size() const { return vertices_.size(); }

    const Word& vertex(std::size_t index) const { return vertices_[index]; }
    int distance_to_center(std::size_t index) const { return distance_[index]; }
    int length_parity(std::size_t index) const { return vertices_[index].parity(); }

    /// Index of a vertex, or -1 if outside the ball.
    std::int64_t find(const Word& w) const;
    bool contains(const Word& w) const { return find(w) >= 0; }

    const std::vector<Word>& vertices() const { return vertices_; }

private:
    Alphabet alphabet_;
    Word center_;
    int radius_;
    std::vector<Word> vertices_;
    std::vector<int> distance_;
    std::unordered_map<Word, std::uint32_t, WordHash> index_;
};

inline BallIndex enumerate_ball(const Word& center, int radius, const Alphabet& alphabet,
                                std::size_t cap = kDefaultBallCap) {
    return BallIndex(alphabet, center, radius, cap);
}

}  // namespace arborwalk::tree
