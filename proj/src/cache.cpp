#include "forest/cache.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace forest {

std::filesystem::path level_path(const std::filesystem::path& dir, int rank, int dim) {
    return dir / ("cells-n" + std::to_string(rank) + "-d" + std::to_string(dim) + ".jsonl");
}

std::optional<std::vector<Cell>> load_level(const std::filesystem::path& dir, int rank, int dim,
                                            int version) {
    std::ifstream in(level_path(dir, rank, dim));
    if (!in)
        return std::nullopt;
    std::string line;
    if (!std::getline(in, line))
        return std::nullopt;
    long long count = 0;
    try {
        auto header = nlohmann::json::parse(line);
        if (header.value("format_version", -1) != version || header.value("rank", -1) != rank ||
            header.value("dim", -1) != dim)
            return std::nullopt;
        count = header.value("count", -1LL);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    if (count < 0)
        return std::nullopt;
    std::vector<Cell> level;
    level.reserve(static_cast<std::size_t>(count));
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            level.emplace_back(ColoredGraph::parse(line));
        } catch (const std::exception&) {
            return std::nullopt;
        }
        // the stored key must round-trip and keep the sorted level order
        if (level.back().key != line ||
            (level.size() > 1 && !(level[level.size() - 2].key < line)))
            return std::nullopt;
    }
    if (static_cast<long long>(level.size()) != count)
        return std::nullopt;
    return level;
}

void store_level(const std::filesystem::path& dir, int rank, int dim,
                 const std::vector<Cell>& level, int version) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::filesystem::path path = level_path(dir, rank, dim);
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write cache file " + path.string());
    nlohmann::ordered_json header;
    header["format_version"] = version;
    header["rank"] = rank;
    header["dim"] = dim;
    header["count"] = level.size();
    out << header.dump() << '\n';
    for (const Cell& cell : level)
        out << cell.key << '\n';
    out.flush();
    if (!out)
        throw std::runtime_error("cannot write cache file " + path.string());
}

CachedEnumeration enumerate_with_cache(int rank, int max_dim,
                                       const std::optional<std::filesystem::path>& dir,
                                       const EnumerationOptions& opts) {
    if (rank < 1 || max_dim < 0)
        throw std::invalid_argument("rank must be >= 1 and max_dim >= 0");
    auto start = std::chrono::steady_clock::now();
    CachedEnumeration out;
    std::vector<std::filesystem::path> written;
    try {
        for (int dim = 0; dim <= max_dim; ++dim) {
            if (dir) {
                if (auto cached = load_level(*dir, rank, dim)) {
                    ++out.cache_hits;
                    if (opts.progress)
                        opts.progress(dim, cached->size());
                    out.levels.push_back(std::move(*cached));
                    continue;
                }
            }
            std::vector<Cell> level;
            if (dim == 0) {
                std::vector<Edge> rose;
                for (int c = 1; c <= rank; ++c)
                    rose.push_back({0, 0, c});
                level.push_back(Cell(canonicalize(ColoredGraph(rank, 1, std::move(rose))).graph));
                if (opts.progress)
                    opts.progress(0, 1);
            } else {
                EnumerationOptions step = opts;
                if (opts.budget_seconds > 0) {
                    double elapsed =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
                    step.budget_seconds = opts.budget_seconds - elapsed;
                    if (step.budget_seconds <= 0)
                        throw BudgetExceeded(
                            "enumeration exceeded the time budget at dimension " +
                            std::to_string(dim));
                }
                level = expand_level(out.levels.back(), step);
            }
            if (dir) {
                store_level(*dir, rank, dim, level);
                written.push_back(level_path(*dir, rank, dim));
                ++out.cache_writes;
            }
            out.levels.push_back(std::move(level));
        }
    } catch (const BudgetExceeded&) {
        std::error_code ec;
        for (const auto& path : written)
            std::filesystem::remove(path, ec);
        throw;
    }
    return out;
}

}  // namespace forest
