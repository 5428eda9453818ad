#include "forest/free_group.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace forest {

Letter::Letter(int32_t signed_index) : v_(signed_index) {
    if (v_ == 0)
        throw std::invalid_argument("Letter: index must be nonzero");
}

Letter Letter::make(int index, int sign) {
    if (index <= 0 || (sign != 1 && sign != -1))
        throw std::invalid_argument("Letter::make: need index>0 and sign +-1");
    return Letter(sign > 0 ? index : -index);
}

ReducedWord::ReducedWord(std::span<const Letter> letters) {
    letters_.reserve(letters.size());
    for (Letter x : letters)
        push_reduce(x);
}

ReducedWord::ReducedWord(std::initializer_list<int32_t> signed_indices) {
    letters_.reserve(signed_indices.size());
    for (int32_t v : signed_indices)
        push_reduce(Letter(v));
}

ReducedWord ReducedWord::generator(Letter x) {
    ReducedWord w;
    w.letters_.push_back(x);
    return w;
}

void ReducedWord::push_reduce(Letter x) {
    if (!letters_.empty() && letters_.back() == x.inverse())
        letters_.pop_back();
    else
        letters_.push_back(x);
}

ReducedWord ReducedWord::inverse() const {
    ReducedWord w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        w.letters_.push_back(it->inverse());  // already reduced
    return w;
}

ReducedWord ReducedWord::operator*(const ReducedWord& rhs) const {
    ReducedWord w = *this;
    w.letters_.reserve(w.letters_.size() + rhs.letters_.size());
    for (Letter x : rhs.letters_)
        w.push_reduce(x);
    return w;
}

ReducedWord ReducedWord::operator*(Letter rhs) const {
    ReducedWord w = *this;
    w.push_reduce(rhs);
    return w;
}

std::vector<int64_t> ReducedWord::exponent_vector(int rank) const {
    std::vector<int64_t> v(rank, 0);
    for (Letter x : letters_) {
        if (x.index() > rank)
            throw std::out_of_range("exponent_vector: letter index exceeds rank");
        v[x.index() - 1] += x.sign();
    }
    return v;
}

std::string ReducedWord::str() const {
    std::string s;
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(letters_[i].value());
    }
    return s;
}

ReducedWord ReducedWord::parse(const std::string& text) {
    ReducedWord w;
    std::istringstream in(text);
    long long v;
    while (in >> v) {
        if (v == 0 || v < INT32_MIN || v > INT32_MAX)
            throw std::invalid_argument("ReducedWord::parse: bad letter " + std::to_string(v));
        w.push_reduce(Letter(static_cast<int32_t>(v)));
    }
    if (!in.eof()) {
        std::string junk;
        in.clear();
        in >> junk;
        throw std::invalid_argument("ReducedWord::parse: unexpected token '" + junk + "'");
    }
    return w;
}

WhiteheadMove::WhiteheadMove(std::vector<Letter> A, Letter m) : set(std::move(A)), multiplier(m) {
    if (set.empty())
        throw std::invalid_argument("WhiteheadMove: empty set");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (Letter x : set)
        if (x.index() == m.index())
            throw std::invalid_argument("WhiteheadMove: set meets {m, m^-1}");
}

bool WhiteheadMove::contains(Letter x) const {
    return std::binary_search(set.begin(), set.end(), x);
}

Automorphism Automorphism::identity(int rank) {
    if (rank < 1)
        throw std::invalid_argument("Automorphism::identity: rank must be positive");
    Automorphism a;
    a.rank_ = rank;
    a.forward_.reserve(rank);
    for (int i = 1; i <= rank; ++i)
        a.forward_.push_back(ReducedWord::generator(Letter(i)));
    a.inverse_ = a.forward_;
    return a;
}

Automorphism Automorphism::whitehead(const WhiteheadMove& move, int rank) {
    Automorphism a = identity(rank);
    Letter m = move.multiplier;
    for (Letter x : move.set)
        if (x.index() > rank)
            throw std::invalid_argument("Automorphism::whitehead: set letter exceeds rank");
    if (m.index() > rank)
        throw std::invalid_argument("Automorphism::whitehead: multiplier exceeds rank");
    for (int i = 1; i <= rank; ++i) {
        if (i == m.index())
            continue;
        const bool pos = move.contains(Letter(i));
        const bool neg = move.contains(Letter(-i));
        ReducedWord img;
        if (pos && neg)
            img = ReducedWord::generator(m.inverse()) * Letter(i) * m;
        else if (pos)
            img = ReducedWord::generator(Letter(i)) * m;
        else if (neg)
            img = ReducedWord::generator(m.inverse()) * Letter(i);
        else
            continue;
        a.forward_[i - 1] = img;
    }
    /* inverse move: same set, inverted multiplier */
    Letter mi = m.inverse();
    for (int i = 1; i <= rank; ++i) {
        if (i == m.index())
            continue;
        const bool pos = move.contains(Letter(i));
        const bool neg = move.contains(Letter(-i));
        ReducedWord img;
        if (pos && neg)
            img = ReducedWord::generator(mi.inverse()) * Letter(i) * mi;
        else if (pos)
            img = ReducedWord::generator(Letter(i)) * mi;
        else if (neg)
            img = ReducedWord::generator(mi.inverse()) * Letter(i);
        else
            continue;
        a.inverse_[i - 1] = img;
    }
    return a;
}

Automorphism::Automorphism(int rank, std::vector<ReducedWord> forward, std::vector<ReducedWord> inverse)
    : rank_(rank), forward_(std::move(forward)), inverse_(std::move(inverse)) {
    if (rank_ < 1 || forward_.size() != static_cast<size_t>(rank_) ||
        inverse_.size() != static_cast<size_t>(rank_))
        throw std::invalid_argument("Automorphism: image count must equal rank");
    for (int i = 1; i <= rank_; ++i) {
        if (apply(inverse_[i - 1]) != ReducedWord::generator(Letter(i)) ||
            apply_inverse(forward_[i - 1]) != ReducedWord::generator(Letter(i)))
            throw std::invalid_argument("Automorphism: images are not mutually inverse");
    }
}

static ReducedWord substitute(const std::vector<ReducedWord>& images, const ReducedWord& w) {
    ReducedWord out;
    for (Letter x : w.letters()) {
        const ReducedWord& img = images[x.index() - 1];
        out = (x.sign() > 0) ? out * img : out * img.inverse();
    }
    return out;
}

ReducedWord Automorphism::apply(const ReducedWord& w) const {
    for (Letter x : w.letters())
        if (x.index() > rank_)
            throw std::out_of_range("Automorphism::apply: letter exceeds rank");
    return substitute(forward_, w);
}

ReducedWord Automorphism::apply_inverse(const ReducedWord& w) const {
    for (Letter x : w.letters())
        if (x.index() > rank_)
            throw std::out_of_range("Automorphism::apply_inverse: letter exceeds rank");
    return substitute(inverse_, w);
}

Automorphism Automorphism::then(const Automorphism& g) const {
    if (rank_ != g.rank_)
        throw std::invalid_argument("Automorphism::then: rank mismatch");
    Automorphism h;
    h.rank_ = rank_;
    h.forward_.reserve(rank_);
    h.inverse_.reserve(rank_);
    for (int i = 0; i < rank_; ++i) {
        h.forward_.push_back(substitute(g.forward_, forward_[i]));
        h.inverse_.push_back(substitute(inverse_, g.inverse_[i]));
    }
    return h;
}

Automorphism Automorphism::inverse() const {
    Automorphism a;
    a.rank_ = rank_;
    a.forward_ = inverse_;
    a.inverse_ = forward_;
    return a;
}

bool Automorphism::is_identity() const {
    for (int i = 1; i <= rank_; ++i)
        if (forward_[i - 1] != ReducedWord::generator(Letter(i)))
            return false;
    return true;
}

std::vector<std::vector<int64_t>> Automorphism::abelianization() const {
    std::vector<std::vector<int64_t>> m(rank_, std::vector<int64_t>(rank_, 0));
    for (int i = 1; i <= rank_; ++i) {
        auto col = forward_[i - 1].exponent_vector(rank_);
        for (int r = 0; r < rank_; ++r)
            m[r][i - 1] = col[r];
    }
    return m;
}

std::string Automorphism::str() const {
    std::string s;
    for (int i = 0; i < rank_; ++i) {
        if (i) s += "; ";
        s += forward_[i].str();
    }
    return s;
}

}  // namespace forest
