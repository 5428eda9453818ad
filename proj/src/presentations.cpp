#include "forest/presentations.hpp"

#include <stdexcept>

namespace forest {

StnGenerator::StnGenerator(Letter x_, int j_) : x(x_), j(j_) {
    if (j <= 0)
        throw std::invalid_argument("StnGenerator: second index must be positive");
    if (x.index() == j)
        throw std::invalid_argument("StnGenerator: components share a basis index");
}

StnFactor stn_factor(Letter x, Letter y) {
    return {StnGenerator(x, y.index()), y.sign()};
}

StnWord operator*(const StnWord& a, const StnWord& b) {
    StnWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

StnWord inverse(const StnWord& w) {
    StnWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back(it->inverse());
    return out;
}

Automorphism phi(const StnWord& w, int rank) {
    Automorphism a = Automorphism::identity(rank);
    for (const StnFactor& f : w) {
        if (f.exp != 1 && f.exp != -1)
            throw std::invalid_argument("phi: factor exponent must be +-1");
        WhiteheadMove m({f.gen.x}, Letter(f.exp > 0 ? f.gen.j : -f.gen.j));
        a = a.then(Automorphism::whitehead(m, rank));
    }
    return a;
}

static std::vector<Letter> all_letters(int rank) {
    std::vector<Letter> ls;
    ls.reserve(2 * rank);
    for (int i = 1; i <= rank; ++i) {
        ls.push_back(Letter(i));
        ls.push_back(Letter(-i));
    }
    return ls;
}

static StnWord commutator(const StnWord& a, const StnWord& b) {
    return a * b * inverse(a) * inverse(b);
}

static std::string lstr(Letter x) { return std::to_string(x.value()); }

std::vector<Relator> stn_relators(int rank) {
    if (rank < 2)
        throw std::invalid_argument("stn_relators: rank must be at least 2");
    std::vector<Relator> out;
    const auto letters = all_letters(rank);

    /* commute: [<<x,y>>, <<x2,y2>>] = 1 when x2 != y^{+-1}, x2 != x, x != y2^{+-1} */
    for (Letter x : letters)
        for (Letter y : letters) {
            if (x.index() == y.index())
                continue;
            for (Letter x2 : letters) {
                if (x2.index() == y.index() || x2 == x)
                    continue;
                for (Letter y2 : letters) {
                    if (x2.index() == y2.index() || x.index() == y2.index())
                        continue;
                    Relator r;
                    r.family = "commute";
                    r.instance = "x=" + lstr(x) + ",y=" + lstr(y) + ",x2=" + lstr(x2) +
                                 ",y2=" + lstr(y2);
                    r.lhs = commutator({stn_factor(x, y)}, {stn_factor(x2, y2)});
                    out.push_back(std::move(r));
                }
            }
        }

    /* compose: [<<x,y>>, <<y,z>>] = <<x,z>> when x != z^{+-1} */
    for (Letter x : letters)
        for (Letter y : letters) {
            if (x.index() == y.index())
                continue;
            for (Letter z : letters) {
                if (y.index() == z.index() || x.index() == z.index())
                    continue;
                Relator r;
                r.family = "compose";
                r.instance = "x=" + lstr(x) + ",y=" + lstr(y) + ",z=" + lstr(z);
                r.lhs = commutator({stn_factor(x, y)}, {stn_factor(y, z)});
                r.rhs = {stn_factor(x, z)};
                out.push_back(std::move(r));
            }
        }

    /* braid: <<y,x>> <<x^-1,y>> <<y^-1,x^-1>> = <<y^-1,x^-1>> <<x,y^-1>> <<y,x>> */
    for (Letter x : letters)
        for (Letter y : letters) {
            if (x.index() == y.index())
                continue;
            Relator r;
            r.family = "braid";
            r.instance = "x=" + lstr(x) + ",y=" + lstr(y);
            r.lhs = StnWord{stn_factor(y, x), stn_factor(x.inverse(), y),
                            stn_factor(y.inverse(), x.inverse())};
            r.rhs = StnWord{stn_factor(y.inverse(), x.inverse()), stn_factor(x, y.inverse()),
                            stn_factor(y, x)};
            out.push_back(std::move(r));
        }

    return out;
}

/* ---- the swap group ----------------------------------------------------- */

static WWord wg(int i, int j, bool left, int exp = 1) { return {WFactor{{i, j, left}, exp}}; }

static WWord operator*(const WWord& a, const WWord& b) {
    WWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

static WWord winv(const WWord& w) {
    WWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back({it->gen, -it->exp});
    return out;
}

std::vector<WRelator> w_relators(int rank) {
    if (rank < 2)
        throw std::invalid_argument("w_relators: rank must be at least 2");
    std::vector<WRelator> out;
    auto idx4 = [&](auto&& fn) {
        for (int i = 1; i <= rank; ++i)
            for (int j = 1; j <= rank; ++j)
                for (int k = 1; k <= rank; ++k)
                    for (int l = 1; l <= rank; ++l)
                        if (i != j && i != k && i != l && j != k && j != l && k != l)
                            fn(i, j, k, l);
    };
    auto idx3 = [&](auto&& fn) {
        for (int i = 1; i <= rank; ++i)
            for (int j = 1; j <= rank; ++j)
                for (int k = 1; k <= rank; ++k)
                    if (i != j && i != k && j != k)
                        fn(i, j, k);
    };
    auto inst = [](std::initializer_list<int> v) {
        std::string s;
        const char* names[] = {"i", "j", "k", "l"};
        int t = 0;
        for (int x : v) {
            if (t) s += ',';
            s += names[t++];
            s += '=';
            s += std::to_string(x);
        }
        return s;
    };
    auto add = [&out](std::string family, std::string instance, WWord lhs, WWord rhs = {}) {
        out.push_back({std::move(family), std::move(instance), std::move(lhs), std::move(rhs)});
    };

    for (bool left : {true, false}) {
        const char* fl = left ? "L" : "R";
        /* disjoint generators commute */
        idx4([&](int i, int j, int k, int l) {
            add(std::string("commute-") + fl, inst({i, j, k, l}),
                wg(i, j, left) * wg(k, l, left) * wg(i, j, left, -1) * wg(k, l, left, -1));
        });
    }
    idx3([&](int i, int j, int k) {
        add("chain-L", inst({i, j, k}),
            wg(i, j, true) * wg(i, k, true) * wg(i, j, false, -1) * wg(j, k, true));
        add("chain-R", inst({i, j, k}),
            wg(i, j, false) * wg(i, k, false) * wg(i, j, true, -1) * wg(j, k, false));
        add("conjugate-L", inst({i, j, k}),
            wg(i, j, true) * wg(k, i, false) * wg(i, j, true, -1) * wg(k, j, true));
        add("conjugate-R", inst({i, j, k}),
            wg(i, j, false) * wg(k, i, true) * wg(i, j, false, -1) * wg(k, j, false));
        add("transfer-L", inst({i, j, k}),
            wg(i, j, false) * wg(j, k, true) * wg(i, j, true, -1) * wg(i, k, true, -1));
        add("transfer-R", inst({i, j, k}),
            wg(i, j, true) * wg(j, k, false) * wg(i, j, false, -1) * wg(i, k, false, -1));
        add("shift-L", inst({i, j, k}),
            wg(i, j, true) * wg(k, j, true) * wg(i, j, true, -1) * wg(k, i, true, -1));
        add("shift-R", inst({i, j, k}),
            wg(i, j, false) * wg(k, j, false) * wg(i, j, false, -1) * wg(k, i, false, -1));
    });
    for (int i = 1; i <= rank; ++i)
        for (int j = 1; j <= rank; ++j)
            if (i != j)
                add("sides-equal", inst({i, j}), wg(i, j, true), wg(i, j, false));
    return out;
}

/* L_ij = <<x_i^-1, x_j^-1>>, R_ij = <<x_i, x_j^-1>> */
static StnWord L(int i, int j) { return {stn_factor(Letter(-i), Letter(-j))}; }
static StnWord R(int i, int j) { return {stn_factor(Letter(i), Letter(-j))}; }

StnWord w_left(int i, int j) { return inverse(R(i, j)) * inverse(L(j, i)) * L(i, j); }
StnWord w_right(int i, int j) { return L(i, j) * R(j, i) * inverse(R(i, j)); }

StnWord i_map(const WWord& w) {
    StnWord out;
    for (const WFactor& f : w) {
        StnWord img = f.gen.left ? w_left(f.gen.i, f.gen.j) : w_right(f.gen.i, f.gen.j);
        if (f.exp == -1)
            img = inverse(img);
        else if (f.exp != 1)
            throw std::invalid_argument("i_map: factor exponent must be +-1");
        out = out * img;
    }
    return out;
}

/* ---- triangular subgroups ----------------------------------------------- */

StnWord triangular_embed(const TriangularGenerator& g) {
    switch (g.kind) {
        case TriKind::StrictPos:
            return {stn_factor(Letter(g.i), Letter(g.j))};
        case TriKind::StrictNeg:
            return {stn_factor(Letter(-g.i), Letter(g.j))};
        case TriKind::Conjugating:
            return {stn_factor(Letter(-g.i), Letter(g.j)), stn_factor(Letter(g.i), Letter(g.j))};
    }
    throw std::logic_error("triangular_embed: bad kind");
}

Automorphism triangular_automorphism(const TriangularGenerator& g, int rank) {
    switch (g.kind) {
        case TriKind::StrictPos:
            return Automorphism::whitehead(WhiteheadMove({Letter(g.i)}, Letter(g.j)), rank);
        case TriKind::StrictNeg:
            return Automorphism::whitehead(WhiteheadMove({Letter(-g.i)}, Letter(g.j)), rank);
        case TriKind::Conjugating:
            return Automorphism::whitehead(WhiteheadMove({Letter(g.i), Letter(-g.i)}, Letter(g.j)),
                                           rank);
    }
    throw std::logic_error("triangular_automorphism: bad kind");
}

std::vector<TriangularGenerator> strict_triangular_generators(const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    std::vector<int> pos(n + 1, -1);
    for (int p = 0; p < n; ++p) {
        int v = order[p];
        if (v < 1 || v > n || pos[v] != -1)
            throw std::invalid_argument("strict_triangular_generators: order must permute 1..n");
        pos[v] = p;
    }
    std::vector<TriangularGenerator> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j && pos[i] > pos[j]) {
                out.push_back({TriKind::StrictPos, i, j});
                out.push_back({TriKind::StrictNeg, i, j});
            }
    return out;
}

std::vector<TriangularGenerator> conjugating_generators(int rank) {
    std::vector<TriangularGenerator> out;
    for (int i = 1; i <= rank; ++i)
        for (int j = 1; j <= rank; ++j)
            if (i != j)
                out.push_back({TriKind::Conjugating, i, j});
    return out;
}

/* ---- verification -------------------------------------------------------- */

PresentationReport verify_stn_presentation(int rank) {
    PresentationReport rep;
    rep.rank = rank;
    for (const Relator& r : stn_relators(rank)) {
        ++rep.relators_checked;
        Automorphism l = phi(r.lhs, rank), rr = phi(r.rhs, rank);
        if (!(l == rr))
            rep.failures.push_back({r.family, r.instance, l.then(rr.inverse()).str()});
    }
    return rep;
}

PresentationReport verify_w_presentation(int rank) {
    PresentationReport rep;
    rep.rank = rank;
    for (const WRelator& r : w_relators(rank)) {
        ++rep.relators_checked;
        Automorphism l = phi(i_map(r.lhs), rank), rr = phi(i_map(r.rhs), rank);
        if (!(l == rr))
            rep.failures.push_back({r.family, r.instance, l.then(rr.inverse()).str()});
    }
    return rep;
}

PresentationReport verify_w_realizations(int rank) {
    PresentationReport rep;
    rep.rank = rank;
    for (int i = 1; i <= rank; ++i)
        for (int j = 1; j <= rank; ++j) {
            if (i == j)
                continue;
            ++rep.relators_checked;
            Automorphism l = phi(w_left(i, j), rank), r = phi(w_right(i, j), rank);
            if (!(l == r))
                rep.failures.push_back({"realization",
                                        "i=" + std::to_string(i) + ",j=" + std::to_string(j),
                                        l.then(r.inverse()).str()});
        }
    return rep;
}

}  // namespace forest
