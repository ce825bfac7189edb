#include "arborwalk/tree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "arborwalk/errors.hpp"

namespace arborwalk::tree {

Alphabet::Alphabet(int q) : q_(q) {
    if (q < 3 || q > 64) {
        throw InputError("tree degree q must satisfy 3 <= q <= 64, got " + std::to_string(q));
    }
    inverse_.resize(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        inverse_[static_cast<std::size_t>(j)] =
            even() ? static_cast<Letter>((j + q / 2) % q) : static_cast<Letter>(j);
    }
}

std::string Alphabet::name(Letter a) const {
    if (q_ == 3) {
        return std::string(1, static_cast<char>('a' + a));
    }
    if (q_ == 4) {
        static constexpr const char* kNames[] = {"a", "b", "A", "B"};
        return kNames[a];
    }
    return "a" + std::to_string(a + 1);
}

Letter Alphabet::parse_letter(std::string_view token) const {
    if (token.empty()) {
        throw InputError("empty letter token");
    }
    if (token.size() > 1 && token.front() == 'a' &&
        std::all_of(token.begin() + 1, token.end(), [](char c) { return std::isdigit(c); })) {
        const int j = std::stoi(std::string(token.substr(1)));
        if (j < 1 || j > q_) {
            throw InputError("letter index out of range: " + std::string(token));
        }
        return static_cast<Letter>(j - 1);
    }
    if (q_ == 3 && token.size() == 1 && token[0] >= 'a' && token[0] <= 'c') {
        return static_cast<Letter>(token[0] - 'a');
    }
    if (q_ == 4) {
        if (token == "a") return 0;
        if (token == "b") return 1;
        if (token == "A" || token == "a^-1") return 2;
        if (token == "B" || token == "b^-1") return 3;
    }
    throw InputError("unknown letter '" + std::string(token) + "' for q=" + std::to_string(q_));
}

std::size_t Word::hash() const {
    // FNV-1a over the packed letters, length folded in.
    std::uint64_t h = 1469598103934665603ULL ^ letters_.size();
    for (Letter a : letters_) {
        h ^= a;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

Word reduce(std::span<const int> raw, const Alphabet& alphabet) {
    Word w;
    for (int a : raw) {
        if (!alphabet.contains(a)) {
            throw InputError("letter " + std::to_string(a) + " not in alphabet of size " +
                             std::to_string(alphabet.q()));
        }
        const auto letter = static_cast<Letter>(a);
        if (!w.letters_.empty() && w.letters_.back() == alphabet.inverse(letter)) {
            w.letters_.pop_back();
        } else {
            w.letters_.push_back(letter);
        }
    }
    return w;
}

Word reduce(std::initializer_list<int> raw, const Alphabet& alphabet) {
    return reduce(std::span<const int>(raw.begin(), raw.size()), alphabet);
}

Word append(const Word& w, Letter a, const Alphabet& alphabet) {
    Word out = w;
    if (!out.letters_.empty() && out.letters_.back() == alphabet.inverse(a)) {
        out.letters_.pop_back();
    } else {
        out.letters_.push_back(a);
    }
    return out;
}

Word multiply(const Word& x, const Word& y, const Alphabet& alphabet) {
    Word out = x;
    for (Letter a : y.letters_) {
        if (!out.letters_.empty() && out.letters_.back() == alphabet.inverse(a)) {
            out.letters_.pop_back();
        } else {
            out.letters_.push_back(a);
        }
    }
    return out;
}

Word inverse(const Word& w, const Alphabet& alphabet) {
    Word out;
    out.letters_.reserve(w.letters_.size());
    for (auto it = w.letters_.rbegin(); it != w.letters_.rend(); ++it) {
        out.letters_.push_back(alphabet.inverse(*it));
    }
    return out;
}

std::vector<Word> neighbors(const Word& w, const Alphabet& alphabet) {
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(alphabet.q()));
    for (int j = 0; j < alphabet.q(); ++j) {
        out.push_back(append(w, static_cast<Letter>(j), alphabet));
    }
    return out;
}

int distance(const Word& x, const Word& y) {
    // Both words are reduced, so x^-1 y cancels exactly their common prefix.
    const auto lx = x.letters();
    const auto ly = y.letters();
    std::size_t common = 0;
    while (common < lx.size() && common < ly.size() && lx[common] == ly[common]) {
        ++common;
    }
    return static_cast<int>(lx.size() + ly.size() - 2 * common);
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
    if (w.empty()) {
        return "e";
    }
    std::string out;
    const bool compact = alphabet.q() <= 4;
    for (Letter a : w.letters()) {
        if (!compact && !out.empty()) {
            out += '.';
        }
        out += alphabet.name(a);
    }
    return out;
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
    std::vector<int> raw;
    if (text.empty() || text == "e") {
        return Word{};
    }
    const bool dotted = text.find('.') != std::string_view::npos ||
                        text.find(' ') != std::string_view::npos ||
                        text.find("a^") != std::string_view::npos ||
                        text.find("b^") != std::string_view::npos || alphabet.q() > 4;
    if (dotted) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find_first_of(". ", start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            if (end > start) {
                raw.push_back(alphabet.parse_letter(text.substr(start, end - start)));
            }
            start = end + 1;
        }
    } else {
        for (char c : text) {
            raw.push_back(alphabet.parse_letter(std::string_view(&c, 1)));
        }
    }
    return reduce(raw, alphabet);
}

std::size_t ball_size(int q, int radius) {
    std::size_t total = 1;
    std::size_t shell = static_cast<std::size_t>(q);
    for (int l = 1; l <= radius; ++l) {
        total += shell;
        shell *= static_cast<std::size_t>(q - 1);
    }
    return total;
}

BallIndex::BallIndex(const Alphabet& alphabet, Word center, int radius, std::size_t cap)
    : alphabet_(alphabet), center_(std::move(center)), radius_(radius) {
    if (radius < 0) {
        throw InputError("ball radius must be non-negative");
    }
    // Guard the closed-form count before touching memory.
    std::size_t expected = 1;
    std::size_t shell = static_cast<std::size_t>(alphabet.q());
    for (int l = 1; l <= radius; ++l) {
        expected += shell;
        if (expected > cap) {
            throw CapacityError("ball of radius " + std::to_string(radius) + " for q=" +
                                std::to_string(alphabet.q()) + " exceeds the vertex cap " +
                                std::to_string(cap));
        }
        shell *= static_cast<std::size_t>(alphabet.q() - 1);
    }
    vertices_.reserve(expected);
    distance_.reserve(expected);
    index_.reserve(expected);

    vertices_.push_back(center_);
    distance_.push_back(0);
    index_.emplace(center_, 0U);
    for (std::size_t head = 0; head < vertices_.size(); ++head) {
        const int d = distance_[head];
        if (d == radius) {
            break;
        }
        for (int j = 0; j < alphabet.q(); ++j) {
            Word next = append(vertices_[head], static_cast<Letter>(j), alphabet);
            if (index_.contains(next)) {
                continue;  // the parent
            }
            index_.emplace(next, static_cast<std::uint32_t>(vertices_.size()));
            vertices_.push_back(std::move(next));
            distance_.push_back(d + 1);
        }
    }
}

std::int64_t BallIndex::find(const Word& w) const {
    const auto it = index_.find(w);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

}  // namespace arborwalk::tree
