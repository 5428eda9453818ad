#pragma once

/* Disk cache for enumerated cell levels: one file per (rank, dimension), a
 * JSON header line carrying the format version and the expected line count,
 * then one canonical graph serialization per line.  A missing, stale, or
 * damaged file is a miss and gets recomputed; failure to WRITE is an error. */

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forest/complex.hpp"

namespace forest {

inline constexpr int kCacheFormatVersion = 1;

std::filesystem::path level_path(const std::filesystem::path& dir, int rank, int dim);

/* The cached level, or nullopt when absent/invalid; `version` exists to let
 * tests exercise staleness. */
std::optional<std::vector<Cell>> load_level(const std::filesystem::path& dir, int rank, int dim,
                                            int version = kCacheFormatVersion);

/* Throws std::runtime_error when the directory or file cannot be written. */
void store_level(const std::filesystem::path& dir, int rank, int dim,
                 const std::vector<Cell>& level, int version = kCacheFormatVersion);

struct CachedEnumeration {
    std::vector<std::vector<Cell>> levels;
    int cache_hits = 0;    // levels loaded from disk
    int cache_writes = 0;  // levels written to disk this run
};

/* enumerate_cells with a read-through cache: cached levels are loaded, the
 * rest computed and (when `dir` is set) stored.  On BudgetExceeded every file
 * written by this run is removed before the exception propagates, so a cache
 * never holds a partial result. */
CachedEnumeration enumerate_with_cache(int rank, int max_dim,
                                       const std::optional<std::filesystem::path>& dir,
                                       const EnumerationOptions& opts = {});

}  // namespace forest
