/* forest: enumerate colored-graph cells, compute exact integral homology,
 * evaluate the theta counting map, and verify structural lemmas and group
 * presentations.  Reports are deterministic for fixed inputs (independent of
 * --threads); timing_ms is the only run-dependent field. */

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "forest/cache.hpp"
#include "forest/complex.hpp"
#include "forest/graph.hpp"
#include "forest/homology.hpp"
#include "forest/presentations.hpp"
#include "forest/snf.hpp"
#include "forest/theta.hpp"
#include "forest/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using forest::Cell;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;           // command ran; every check passed
constexpr int kExitCheckFailed = 1;  // command ran; some verification failed
constexpr int kExitError = 2;        // operational failure (I/O, bad input, inconsistency)
constexpr int kExitBudget = 3;       // --budget-seconds exhausted

// Above this many top-level cells the boundary is streamed into checked
// 64-bit columns instead of arbitrary-precision ones, and theta is read off
// the cycle lattice instead of explicit representatives (same invariants, a
// canonical basis instead of a representative-indexed one).
constexpr std::size_t kLeanCellThreshold = 200000;

struct Options {
    int rank = 0;
    int dim = 3;     // cells --dim / verify lemmas --max-dim
    int degree = 0;  // homology --degree
    int threads = 1;
    double budget_seconds = 0.0;
    std::string cache_flag;
    std::string graph_file;
    bool json_out = false;
};

std::optional<std::filesystem::path> cache_dir(const Options& o) {
    if (!o.cache_flag.empty()) return std::filesystem::path(o.cache_flag);
    if (const char* env = std::getenv("FOREST_CACHE"); env != nullptr && *env != '\0')
        return std::filesystem::path(env);
    return std::nullopt;
}

forest::EnumerationOptions enum_options(const Options& o) {
    forest::EnumerationOptions opts;
    opts.threads = o.threads;
    opts.budget_seconds = o.budget_seconds;
    opts.progress = [](int dim, std::size_t count) {
        std::cerr << "dimension " << dim << ": " << count << " cells\n";
    };
    return opts;
}

long long ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

std::vector<long long> level_counts(const std::vector<std::vector<Cell>>& levels) {
    std::vector<long long> counts;
    counts.reserve(levels.size());
    for (const auto& level : levels) counts.push_back(static_cast<long long>(level.size()));
    return counts;
}

/* Exact integers in reports: a JSON number when it fits 64 bits, decimal text
 * otherwise. */
json exact_json(const mpz_class& v) {
    if (v.fits_slong_p()) return static_cast<long long>(v.get_si());
    return v.get_str();
}

json torsion_json(const std::vector<mpz_class>& torsion) {
    json arr = json::array();
    for (const auto& d : torsion) arr.push_back(exact_json(d));
    return arr;
}

json dense_matrix_json(const forest::SparseIntMatrix& m) {
    std::vector<std::vector<json>> dense(
        static_cast<std::size_t>(m.rows),
        std::vector<json>(static_cast<std::size_t>(m.cols), json(0)));
    for (const auto& e : m.entries) dense[e.row][e.col] = exact_json(e.value);
    json rows = json::array();
    for (auto& row : dense) rows.push_back(std::move(row));
    return rows;
}

void emit_json(const json& report) { std::cout << report.dump(2) << "\n"; }

void print_counts(const std::vector<long long>& counts) {
    for (std::size_t d = 0; d < counts.size(); ++d)
        std::cout << "  dimension " << d << ": " << counts[d] << "\n";
}

int run_cells(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    auto result = forest::enumerate_with_cache(o.rank, o.dim, cache_dir(o), enum_options(o));
    auto counts = level_counts(result.levels);
    long long total = std::accumulate(counts.begin(), counts.end(), 0LL);

    json report;
    report["command"] = "cells";
    report["version"] = kVersion;
    report["rank"] = o.rank;
    report["max_dim"] = o.dim;
    report["cells"] = counts;
    report["total"] = total;
    report["cache_hits"] = result.cache_hits;
    report["cache_writes"] = result.cache_writes;
    report["timing_ms"] = ms_since(start);
    if (o.json_out) {
        emit_json(report);
    } else {
        std::cout << "rank " << o.rank << " cells through dimension " << o.dim << "\n";
        print_counts(counts);
        std::cout << "total " << total << "\n";
        std::cout << "cache hits " << result.cache_hits << ", writes " << result.cache_writes
                  << "\n";
    }
    return kExitOk;
}

int run_homology(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    auto result = forest::enumerate_with_cache(o.rank, o.degree + 1, cache_dir(o), enum_options(o));
    const auto& levels = result.levels;

    forest::HomologyResult h;
    if (levels[o.degree + 1].size() > kLeanCellThreshold) {
        h = forest::complex_homology_lean(levels, o.degree, o.threads);
    } else {
        forest::SparseIntMatrix d_down =
            o.degree == 0
                ? forest::SparseIntMatrix(0, static_cast<int>(levels[0].size()))
                : forest::boundary_matrix(levels[o.degree - 1], levels[o.degree], o.threads);
        forest::SparseIntMatrix d_up =
            forest::boundary_matrix(levels[o.degree], levels[o.degree + 1], o.threads);

        if (auto bad = forest::nonzero_composition(d_down, d_up)) {
            std::cerr << "error: boundary maps fail to compose to zero at degree " << o.degree
                      << ": d(d(" << levels[o.degree + 1][bad->second].key
                      << ")) has a nonzero coefficient on " << levels[o.degree - 1][bad->first].key
                      << "\n";
            return kExitError;
        }
        h = forest::homology(o.degree, static_cast<long long>(levels[o.degree].size()), d_down,
                             d_up);
    }

    json report;
    report["command"] = "homology";
    report["version"] = kVersion;
    report["rank"] = o.rank;
    report["degree"] = o.degree;
    report["betti"] = h.betti;
    report["torsion"] = torsion_json(h.torsion);
    report["cells"] = level_counts(levels);
    report["cache_hits"] = result.cache_hits;
    report["timing_ms"] = ms_since(start);
    if (o.json_out) {
        emit_json(report);
    } else {
        std::cout << "H_" << o.degree << " at rank " << o.rank << ": betti " << h.betti
                  << ", torsion ";
        if (h.torsion.empty()) {
            std::cout << "none\n";
        } else {
            for (std::size_t i = 0; i < h.torsion.size(); ++i)
                std::cout << (i ? " " : "") << h.torsion[i].get_str();
            std::cout << "\n";
        }
        print_counts(level_counts(levels));
    }
    return kExitOk;
}

int run_theta(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    auto result = forest::enumerate_with_cache(o.rank, 3, cache_dir(o), enum_options(o));
    long long betti2 = 0;
    forest::SparseIntMatrix m(o.rank, 0);
    const char* basis = "representatives";
    if (result.levels[3].size() > kLeanCellThreshold) {
        betti2 = forest::complex_homology_lean(result.levels, 2, o.threads).betti;
        m = forest::theta_on_homology_lean(result.levels, o.rank, betti2, o.threads);
        basis = "lattice";
    } else {
        auto reps = forest::homology_representatives(result.levels, 2, o.threads);
        betti2 = static_cast<long long>(reps.size());
        m = forest::theta_on_homology(reps, o.rank);
    }
    bool square = m.rows == m.cols;

    json report;
    report["command"] = "theta";
    report["version"] = kVersion;
    report["rank"] = o.rank;
    report["betti_2"] = betti2;
    report["basis"] = basis;
    report["matrix"] = dense_matrix_json(m);
    report["abs_det"] = square ? exact_json(forest::abs_determinant(m)) : json(nullptr);
    report["cells"] = level_counts(result.levels);
    report["cache_hits"] = result.cache_hits;
    report["timing_ms"] = ms_since(start);
    if (o.json_out) {
        emit_json(report);
    } else {
        std::cout << "theta on degree-2 homology at rank " << o.rank << "\n";
        std::cout << "  betti_2 " << betti2 << "\n";
        std::cout << "  matrix (" << m.rows << "x" << m.cols << "):\n";
        auto dense = dense_matrix_json(m);
        for (const auto& row : dense) {
            std::cout << "   ";
            for (const auto& v : row) std::cout << " " << v.dump();
            std::cout << "\n";
        }
        if (square)
            std::cout << "  |det| " << forest::abs_determinant(m).get_str() << "\n";
        else
            std::cout << "  |det| undefined (not square)\n";
    }
    return kExitOk;
}

void append_failures(json& arr, const char* suite, const forest::PresentationReport& rep) {
    for (const auto& f : rep.failures) {
        json entry;
        entry["suite"] = suite;
        entry["family"] = f.family;
        entry["instance"] = f.instance;
        entry["image"] = f.image;
        arr.push_back(entry);
    }
}

int run_verify_presentations(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    auto stn = forest::verify_stn_presentation(o.rank);
    auto w = forest::verify_w_presentation(o.rank);
    auto real = forest::verify_w_realizations(o.rank);

    long long checked = stn.relators_checked + w.relators_checked + real.relators_checked;
    json failures = json::array();
    append_failures(failures, "stn", stn);
    append_failures(failures, "w", w);
    append_failures(failures, "w-realizations", real);

    json report;
    report["command"] = "verify-presentations";
    report["version"] = kVersion;
    report["rank"] = o.rank;
    report["relators_checked"] = checked;
    report["stn_checked"] = stn.relators_checked;
    report["w_checked"] = w.relators_checked;
    report["realizations_checked"] = real.relators_checked;
    report["failures"] = failures;
    report["timing_ms"] = ms_since(start);
    if (o.json_out) {
        emit_json(report);
    } else {
        std::cout << "presentations at rank " << o.rank << ": " << checked
                  << " relator instances checked, " << failures.size() << " failure(s)\n";
        for (const auto& f : failures)
            std::cout << "  FAIL " << f["suite"].get<std::string>() << " "
                      << f["family"].get<std::string>() << " " << f["instance"].get<std::string>()
                      << " -> " << f["image"].get<std::string>() << "\n";
    }
    return failures.empty() ? kExitOk : kExitCheckFailed;
}

int run_verify_lemmas(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    auto result = forest::enumerate_with_cache(o.rank, o.dim, cache_dir(o), enum_options(o));
    auto report = forest::verify_lemmas(result.levels, o.threads);

    // The report keyed by the named graph lemmas; the half-edge multiplicity
    // check runs alongside and counts toward the exit code.
    static const char* kNamedChecks[] = {"maxtree", "conn",        "lemma1",
                                         "or",      "order",       "faces-count",
                                         "trivial-automorphisms"};
    json checks;
    for (const char* name : kNamedChecks) {
        const auto& counts = report.at(name);
        json entry;
        entry["checked"] = counts.checked;
        entry["violations"] = counts.violations;
        checks[name] = entry;
    }
    bool all_clean = true;
    for (const auto& [name, counts] : report) {
        if (!counts.violations.empty()) {
            all_clean = false;
            for (const auto& v : counts.violations)
                std::cerr << "violation [" << name << "] " << v << "\n";
        }
    }

    json out;
    out["command"] = "verify-lemmas";
    out["version"] = kVersion;
    out["rank"] = o.rank;
    out["max_dim"] = o.dim;
    out["cells"] = level_counts(result.levels);
    out["checks"] = checks;
    out["cache_hits"] = result.cache_hits;
    out["timing_ms"] = ms_since(start);
    if (o.json_out) {
        emit_json(out);
    } else {
        std::cout << "graph lemmas at rank " << o.rank << " through dimension " << o.dim << "\n";
        for (const char* name : kNamedChecks) {
            const auto& counts = report.at(name);
            std::cout << "  " << name << ": " << counts.checked << " checked, "
                      << counts.violations.size() << " violation(s)\n";
        }
    }
    return all_clean ? kExitOk : kExitCheckFailed;
}

int run_verify_theta(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    auto result = forest::enumerate_with_cache(o.rank, 3, cache_dir(o), enum_options(o));
    const auto& levels = result.levels;

    bool boundary_zero = true;
    std::string offender;
    for (const Cell& c : levels[3]) {
        auto v = forest::theta_of_chain(forest::boundary_chain(c.graph), o.rank);
        for (long long entry : v) {
            if (entry != 0) {
                boundary_zero = false;
                offender = c.key;
                break;
            }
        }
        if (!boundary_zero) break;
    }

    long long betti2 = 0;
    forest::SparseIntMatrix m(o.rank, 0);
    if (levels[3].size() > kLeanCellThreshold) {
        betti2 = forest::complex_homology_lean(levels, 2, o.threads).betti;
        m = forest::theta_on_homology_lean(levels, o.rank, betti2, o.threads);
    } else {
        auto reps = forest::homology_representatives(levels, 2, o.threads);
        betti2 = static_cast<long long>(reps.size());
        m = forest::theta_on_homology(reps, o.rank);
    }
    bool square = m.rows == m.cols;
    mpz_class det = square ? forest::abs_determinant(m) : mpz_class(0);
    bool det_ok = square && det == 1;

    json report;
    report["command"] = "verify-theta";
    report["version"] = kVersion;
    report["rank"] = o.rank;
    report["three_cells"] = static_cast<long long>(levels[3].size());
    report["theta_boundary_zero"] = boundary_zero;
    if (!boundary_zero) report["offending_cell"] = offender;
    report["betti_2"] = betti2;
    report["abs_det"] = square ? exact_json(det) : json(nullptr);
    report["cache_hits"] = result.cache_hits;
    report["timing_ms"] = ms_since(start);
    if (o.json_out) {
        emit_json(report);
    } else {
        std::cout << "theta at rank " << o.rank << ": boundary images "
                  << (boundary_zero ? "all vanish" : "DO NOT vanish") << " over "
                  << levels[3].size() << " three-cells\n";
        if (!boundary_zero) std::cout << "  offending cell " << offender << "\n";
        std::cout << "  betti_2 " << betti2 << ", |det| "
                  << (square ? det.get_str() : std::string("undefined")) << "\n";
    }
    return (boundary_zero && det_ok) ? kExitOk : kExitCheckFailed;
}

int run_boundary(const Options& o) {
    std::ifstream in(o.graph_file);
    if (!in) {
        std::cerr << "error: cannot open graph file " << o.graph_file << "\n";
        return kExitError;
    }
    json cells = json::array();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        forest::ColoredGraph g(1, 1, {});
        try {
            g = forest::ColoredGraph::parse(line);
        } catch (const std::exception& e) {
            std::cerr << "error: " << o.graph_file << ":" << lineno << ": " << e.what() << "\n";
            return kExitError;
        }
        auto problems = forest::validate(g);
        if (!problems.empty()) {
            for (const auto& d : problems)
                std::cerr << "error: " << o.graph_file << ":" << lineno << ": " << d.check << ": "
                          << d.detail << "\n";
            return kExitError;
        }
        auto canon = forest::canonicalize(g);
        auto bd = forest::boundary_chain(canon.graph);
        json faces = json::object();
        for (const auto& [key, coeff] : bd) faces[key] = coeff;
        json entry;
        entry["cell"] = canon.key;
        entry["dim"] = canon.graph.dimension();
        entry["boundary"] = faces;
        cells.push_back(entry);
        if (!o.json_out) {
            std::cout << "cell " << canon.key << " (dimension " << canon.graph.dimension()
                      << ")\n";
            for (const auto& [key, coeff] : bd)
                std::cout << "  " << (coeff >= 0 ? "+" : "") << coeff << " " << key << "\n";
        }
    }
    if (o.json_out) emit_json(cells);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"colored-graph cell complexes: enumeration, exact homology, theta, verification"};
    app.require_subcommand(1);
    Options o;

    auto add_rank = [&o](CLI::App* cmd) {
        cmd->add_option("--rank", o.rank, "rank of the graphs (number of colors)")
            ->required()
            ->check(CLI::Range(1, 9));
    };
    auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 256));
        cmd->add_option("--budget-seconds", o.budget_seconds,
                        "abort enumeration after this many seconds (0 = unbounded)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--cache", o.cache_flag,
                        "cache directory for enumerated levels (default: $FOREST_CACHE)");
        cmd->add_flag("--json", o.json_out, "machine-readable report on stdout");
    };

    auto* cells = app.add_subcommand("cells", "enumerate cells up to a dimension");
    add_rank(cells);
    cells->add_option("--dim", o.dim, "highest dimension to enumerate")
        ->required()
        ->check(CLI::Range(0, 16));
    add_common(cells);

    auto* homology = app.add_subcommand("homology", "integral homology of the cell complex");
    add_rank(homology);
    homology->add_option("--degree", o.degree, "homology degree")
        ->required()
        ->check(CLI::Range(0, 16));
    add_common(homology);

    auto* theta = app.add_subcommand("theta", "theta counting map on degree-2 homology");
    add_rank(theta);
    add_common(theta);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->require_subcommand(1);
    auto* vp = verify->add_subcommand("presentations",
                                      "relators map to the identity automorphism");
    add_rank(vp);
    vp->add_flag("--json", o.json_out, "machine-readable report on stdout");
    auto* vl = verify->add_subcommand("lemmas", "structural graph lemmas over enumerated cells");
    add_rank(vl);
    vl->add_option("--max-dim", o.dim, "highest cell dimension to check")
        ->check(CLI::Range(0, 16));
    add_common(vl);
    auto* vt = verify->add_subcommand("theta", "theta vanishes on boundaries; unimodularity");
    add_rank(vt);
    add_common(vt);

    auto* boundary = app.add_subcommand("boundary", "boundary chains of serialized graphs");
    boundary->add_option("--graph", o.graph_file, "file with one graph serialization per line")
        ->required();
    boundary->add_flag("--json", o.json_out, "machine-readable report on stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cells->parsed()) return run_cells(o);
        if (homology->parsed()) return run_homology(o);
        if (theta->parsed()) return run_theta(o);
        if (verify->parsed()) {
            if (vp->parsed()) return run_verify_presentations(o);
            if (vl->parsed()) return run_verify_lemmas(o);
            if (vt->parsed()) return run_verify_theta(o);
        }
        if (boundary->parsed()) return run_boundary(o);
    } catch (const forest::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "; partial cache files were removed\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::cerr << "error: no command\n";
    return kExitError;
}
