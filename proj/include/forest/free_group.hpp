#pragma once

/* Exact calculus in a finite-rank free group F_n and its automorphism group.
 *
 * Letters are nonzero signed indices: +i is the basis element x_i, -i its
 * inverse.  Words are kept freely reduced at all times.  Automorphisms store
 * images of the basis together with images under the inverse, so inversion is
 * O(1) and composition needs no word-problem search.
 *
 * Composition convention used throughout: compose(f, g) means "first f, then
 * g".  Under abelianization this reverses: ab(compose(f, g)) = ab(g) * ab(f).
 */

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace forest {

class Letter {
public:
    Letter() : v_(1) {}
    explicit Letter(int32_t signed_index);
    static Letter make(int index, int sign);

    int index() const { return v_ > 0 ? v_ : -v_; }
    int sign() const { return v_ > 0 ? 1 : -1; }
    int32_t value() const { return v_; }
    Letter inverse() const { return Letter(-v_); }

    friend auto operator<=>(const Letter&, const Letter&) = default;

private:
    int32_t v_;
};

class ReducedWord {
public:
    ReducedWord() = default;
    /* Frees-reduces the input (stack cancellation). */
    explicit ReducedWord(std::span<const Letter> letters);
    explicit ReducedWord(std::initializer_list<int32_t> signed_indices);
    static ReducedWord identity() { return ReducedWord(); }
    static ReducedWord generator(Letter x);

    bool empty() const { return letters_.empty(); }
    size_t length() const { return letters_.size(); }
    Letter at(size_t i) const { return letters_[i]; }
    const std::vector<Letter>& letters() const { return letters_; }

    ReducedWord inverse() const;
    ReducedWord operator*(const ReducedWord& rhs) const;  // concatenate + reduce
    ReducedWord operator*(Letter rhs) const;

    /* Exponent-sum vector over ranks 1..rank. */
    std::vector<int64_t> exponent_vector(int rank) const;

    /* "1 -2 1"; identity serializes to the empty string. */
    std::string str() const;
    static ReducedWord parse(const std::string& text);

    friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
    friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;

private:
    std::vector<Letter> letters_;
    void push_reduce(Letter x);
};

/* A Whitehead move <A, m>: every a in A maps to a*m; A is a set of letters
 * not containing m or m^-1.  <A, m^-1> is the inverse move. */
struct WhiteheadMove {
    std::vector<Letter> set;  // sorted by value, no duplicates
    Letter multiplier;

    WhiteheadMove(std::vector<Letter> A, Letter m);
    WhiteheadMove inverse() const { return WhiteheadMove(set, multiplier.inverse()); }
    bool contains(Letter x) const;
};

class Automorphism {
public:
    static Automorphism identity(int rank);
    /* The automorphism of the move <A, m>:
     *   x_i in A only:        x_i -> x_i m
     *   x_i^-1 in A only:     x_i -> m^-1 x_i
     *   both in A:            x_i -> m^-1 x_i m
     * and all other basis letters fixed. */
    static Automorphism whitehead(const WhiteheadMove& move, int rank);
    /* Basis images with precomputed inverse images; throws if the pair does
     * not define mutually inverse endomorphisms. */
    Automorphism(int rank, std::vector<ReducedWord> forward, std::vector<ReducedWord> inverse);

    int rank() const { return rank_; }
    const ReducedWord& forward_image(int i) const { return forward_[i - 1]; }
    const ReducedWord& inverse_image(int i) const { return inverse_[i - 1]; }

    ReducedWord apply(const ReducedWord& w) const;
    ReducedWord apply_inverse(const ReducedWord& w) const;

    /* "first this, then g" */
    Automorphism then(const Automorphism& g) const;
    Automorphism inverse() const;

    bool is_identity() const;
    /* Column i = exponent vector of the image of x_i (row-major rank x rank). */
    std::vector<std::vector<int64_t>> abelianization() const;

    std::string str() const;  // images joined by ';', e.g. "1 -2; 2"

    friend bool operator==(const Automorphism&, const Automorphism&) = default;

private:
    Automorphism() : rank_(0) {}
    int rank_;
    std::vector<ReducedWord> forward_;
    std::vector<ReducedWord> inverse_;
};

inline Automorphism compose(const Automorphism& f, const Automorphism& g) { return f.then(g); }

}  // namespace forest
