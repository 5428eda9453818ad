/* Python bindings for the colored-graph cell-complex library: free-group
 * automorphisms, graph canonicalization, cell enumeration, exact homology,
 * the theta counting map, and the verification suites. */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "forest/cache.hpp"
#include "forest/complex.hpp"
#include "forest/free_group.hpp"
#include "forest/graph.hpp"
#include "forest/homology.hpp"
#include "forest/presentations.hpp"
#include "forest/snf.hpp"
#include "forest/theta.hpp"
#include "forest/verify.hpp"

namespace py = pybind11;
using namespace forest;

namespace {

std::vector<Letter> to_letters(const std::vector<int>& signed_indices) {
    std::vector<Letter> letters;
    letters.reserve(signed_indices.size());
    for (int v : signed_indices) letters.emplace_back(v);
    return letters;
}

std::vector<int> from_word(const ReducedWord& w) {
    std::vector<int> out;
    out.reserve(w.length());
    for (const Letter& x : w.letters()) out.push_back(x.value());
    return out;
}

ReducedWord to_word(const std::vector<int>& signed_indices) {
    auto letters = to_letters(signed_indices);
    return ReducedWord(std::span<const Letter>(letters));
}

py::object exact_int(const mpz_class& v) {
    return py::module_::import("builtins").attr("int")(v.get_str());
}

py::list matrix_rows(const SparseIntMatrix& m) {
    std::vector<std::vector<long long>> dense(
        static_cast<std::size_t>(m.rows),
        std::vector<long long>(static_cast<std::size_t>(m.cols), 0));
    for (const auto& e : m.entries) dense[e.row][e.col] = static_cast<long long>(e.value.get_si());
    py::list rows;
    for (const auto& row : dense) rows.append(py::cast(row));
    return rows;
}

py::dict presentation_dict(const PresentationReport& rep) {
    py::dict out;
    out["rank"] = rep.rank;
    out["relators_checked"] = rep.relators_checked;
    py::list failures;
    for (const auto& f : rep.failures) {
        py::dict entry;
        entry["family"] = f.family;
        entry["instance"] = f.instance;
        entry["image"] = f.image;
        failures.append(entry);
    }
    out["failures"] = failures;
    return out;
}

std::vector<std::vector<Cell>> levels_for(int rank, int max_dim, int threads,
                                          double budget_seconds) {
    EnumerationOptions opts;
    opts.threads = threads;
    opts.budget_seconds = budget_seconds;
    return enumerate_cells(rank, max_dim, opts);
}

}  // namespace

PYBIND11_MODULE(_forest, m) {
    m.doc() = "colored-graph cell complexes: enumeration, exact homology, theta, verification";

    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    m.def(
        "reduce", [](const std::vector<int>& word) { return from_word(to_word(word)); },
        py::arg("word"), "Freely reduce a word given as signed generator indices.");

    py::class_<Automorphism>(m, "Automorphism")
        .def_static("identity", &Automorphism::identity, py::arg("rank"))
        .def_static(
            "whitehead",
            [](const std::vector<int>& set, int multiplier, int rank) {
                return Automorphism::whitehead(WhiteheadMove(to_letters(set), Letter(multiplier)),
                                               rank);
            },
            py::arg("set"), py::arg("multiplier"), py::arg("rank"),
            "The move sending each letter of `set` to itself times `multiplier`.")
        .def_property_readonly("rank", &Automorphism::rank)
        .def(
            "apply", [](const Automorphism& f, const std::vector<int>& w) {
                return from_word(f.apply(to_word(w)));
            },
            py::arg("word"))
        .def(
            "apply_inverse",
            [](const Automorphism& f, const std::vector<int>& w) {
                return from_word(f.apply_inverse(to_word(w)));
            },
            py::arg("word"))
        .def(
            "image", [](const Automorphism& f, int i) { return from_word(f.forward_image(i)); },
            py::arg("generator"), "Image of generator i (1-based).")
        .def("then", &Automorphism::then, py::arg("g"), "First this, then g.")
        .def("inverse", &Automorphism::inverse)
        .def("is_identity", &Automorphism::is_identity)
        .def("__eq__", [](const Automorphism& a, const Automorphism& b) { return a == b; })
        .def("__str__", &Automorphism::str)
        .def("__repr__",
             [](const Automorphism& f) { return "Automorphism(" + f.str() + ")"; });

    py::class_<ColoredGraph>(m, "ColoredGraph")
        .def(py::init([](int rank, int vertices,
                         const std::vector<std::tuple<int, int, int>>& edges) {
                 std::vector<Edge> es;
                 es.reserve(edges.size());
                 for (const auto& [init, term, color] : edges) es.push_back({init, term, color});
                 return ColoredGraph(rank, vertices, std::move(es));
             }),
             py::arg("rank"), py::arg("vertices"), py::arg("edges"),
             "Edges are (init, term, color) triples; colors are 1-based.")
        .def_static("parse", &ColoredGraph::parse, py::arg("text"))
        .def_property_readonly("rank", &ColoredGraph::rank)
        .def_property_readonly("vertex_count", &ColoredGraph::vertex_count)
        .def_property_readonly("edge_count", &ColoredGraph::edge_count)
        .def_property_readonly("dimension", &ColoredGraph::dimension)
        .def_property_readonly("edges",
                               [](const ColoredGraph& g) {
                                   std::vector<std::tuple<int, int, int>> out;
                                   out.reserve(g.edges().size());
                                   for (const Edge& e : g.edges())
                                       out.emplace_back(e.init, e.term, e.color);
                                   return out;
                               })
        .def("validate",
             [](const ColoredGraph& g) {
                 std::vector<std::pair<std::string, std::string>> out;
                 for (const auto& d : validate(g)) out.emplace_back(d.check, d.detail);
                 return out;
             })
        .def("is_valid", [](const ColoredGraph& g) { return is_valid(g); })
        .def("canonical_key", [](const ColoredGraph& g) { return canonicalize(g).key; })
        .def("canonical", [](const ColoredGraph& g) { return canonicalize(g).graph; })
        .def("__eq__", [](const ColoredGraph& a, const ColoredGraph& b) { return a == b; })
        .def("__str__", &ColoredGraph::str)
        .def("__repr__", [](const ColoredGraph& g) { return "ColoredGraph(" + g.str() + ")"; });

    m.def(
        "enumerate_cells",
        [](int rank, int max_dim, int threads, double budget_seconds) {
            std::vector<std::vector<Cell>> levels;
            {
                py::gil_scoped_release release;
                levels = levels_for(rank, max_dim, threads, budget_seconds);
            }
            std::vector<std::vector<std::string>> keys(levels.size());
            for (std::size_t d = 0; d < levels.size(); ++d)
                for (const Cell& c : levels[d]) keys[d].push_back(c.key);
            return keys;
        },
        py::arg("rank"), py::arg("max_dim"), py::arg("threads") = 1,
        py::arg("budget_seconds") = 0.0,
        "Canonical cell keys grouped by dimension 0..max_dim.");

    m.def(
        "boundary_chain",
        [](const std::string& key) {
            auto canon = canonicalize(ColoredGraph::parse(key));
            return boundary_chain(canon.graph);
        },
        py::arg("cell"), "Signed face chain of the cell, as {canonical key: coefficient}.");

    m.def(
        "homology",
        [](int rank, int degree, int threads) {
            HomologyResult h;
            {
                py::gil_scoped_release release;
                auto levels = levels_for(rank, degree + 1, threads, 0.0);
                h = complex_homology(levels, degree, threads);
            }
            py::dict out;
            out["rank"] = rank;
            out["degree"] = degree;
            out["betti"] = h.betti;
            py::list torsion;
            for (const auto& d : h.torsion) torsion.append(exact_int(d));
            out["torsion"] = torsion;
            return out;
        },
        py::arg("rank"), py::arg("degree"), py::arg("threads") = 1,
        "Integral homology of the quotient complex in one degree.");

    m.def(
        "theta",
        [](int rank, int threads) {
            std::vector<Chain> reps;
            SparseIntMatrix mat;
            {
                py::gil_scoped_release release;
                auto levels = levels_for(rank, 3, threads, 0.0);
                reps = homology_representatives(levels, 2, threads);
                mat = theta_on_homology(reps, rank);
            }
            py::dict out;
            out["rank"] = rank;
            out["betti_2"] = static_cast<long long>(reps.size());
            out["matrix"] = matrix_rows(mat);
            out["abs_det"] =
                mat.rows == mat.cols ? exact_int(abs_determinant(mat)) : py::object(py::none());
            return out;
        },
        py::arg("rank"), py::arg("threads") = 1,
        "Theta on degree-2 homology: counts of theta-cored cells per loop color.");

    m.def(
        "theta_of_chain",
        [](const std::map<std::string, long long>& chain, int rank) {
            return theta_of_chain(chain, rank);
        },
        py::arg("chain"), py::arg("rank"));

    m.def("verify_stn_presentation",
          [](int rank) { return presentation_dict(verify_stn_presentation(rank)); },
          py::arg("rank"));
    m.def("verify_w_presentation",
          [](int rank) { return presentation_dict(verify_w_presentation(rank)); },
          py::arg("rank"));
    m.def("verify_w_realizations",
          [](int rank) { return presentation_dict(verify_w_realizations(rank)); },
          py::arg("rank"));

    m.def(
        "verify_lemmas",
        [](int rank, int max_dim, int threads) {
            LemmaReport report;
            {
                py::gil_scoped_release release;
                auto levels = levels_for(rank, max_dim, threads, 0.0);
                report = verify_lemmas(levels, threads);
            }
            py::dict out;
            for (const auto& [name, counts] : report) {
                py::dict entry;
                entry["checked"] = counts.checked;
                entry["violations"] = counts.violations;
                out[py::str(name)] = entry;
            }
            return out;
        },
        py::arg("rank"), py::arg("max_dim") = 3, py::arg("threads") = 1,
        "Structural lemma checks over all cells up to max_dim; violations must be empty.");
}
