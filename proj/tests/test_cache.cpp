#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "forest/cache.hpp"
#include "forest/complex.hpp"

using namespace forest;
namespace fs = std::filesystem;

namespace {

/* Fresh directory under the system temp root, removed on scope exit. */
struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("forest-cache-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::vector<std::string> keys_of(const std::vector<Cell>& level) {
    std::vector<std::string> keys;
    for (const Cell& c : level) keys.push_back(c.key);
    return keys;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("level paths name rank and dimension") {
    CHECK(level_path("/x", 3, 2) == fs::path("/x/cells-n3-d2.jsonl"));
    CHECK(level_path("rel", 12, 0) == fs::path("rel/cells-n12-d0.jsonl"));
}

TEST_CASE("store and load round-trip a level") {
    TempDir dir;
    auto levels = enumerate_cells(2, 2);
    for (int d = 0; d <= 2; ++d) {
        store_level(dir.path, 2, d, levels[d]);
        auto back = load_level(dir.path, 2, d);
        REQUIRE(back.has_value());
        CHECK(keys_of(*back) == keys_of(levels[d]));
    }
}

TEST_CASE("missing file is a miss") {
    TempDir dir;
    CHECK_FALSE(load_level(dir.path, 2, 1).has_value());
    CHECK_FALSE(load_level(dir.path / "nonexistent-subdir", 2, 1).has_value());
}

TEST_CASE("version bump invalidates a stored level") {
    TempDir dir;
    auto levels = enumerate_cells(2, 1);
    store_level(dir.path, 2, 1, levels[1], 7);
    CHECK(load_level(dir.path, 2, 1, 7).has_value());
    CHECK_FALSE(load_level(dir.path, 2, 1, 8).has_value());
    CHECK_FALSE(load_level(dir.path, 2, 1, kCacheFormatVersion - 1).has_value());
}

TEST_CASE("wrong rank or dimension in the header is a miss") {
    TempDir dir;
    auto levels = enumerate_cells(2, 1);
    store_level(dir.path, 2, 1, levels[1]);
    // File content is keyed by its own header, so asking under another
    // (rank, dim) never matches even if someone renames the file.
    fs::copy_file(level_path(dir.path, 2, 1), level_path(dir.path, 3, 1));
    CHECK_FALSE(load_level(dir.path, 3, 1).has_value());
    fs::copy_file(level_path(dir.path, 2, 1), level_path(dir.path, 2, 2));
    CHECK_FALSE(load_level(dir.path, 2, 2).has_value());
}

TEST_CASE("damaged files are misses, not errors") {
    TempDir dir;
    auto levels = enumerate_cells(2, 1);

    SUBCASE("garbage header") {
        std::ofstream(level_path(dir.path, 2, 1)) << "not json\nn=2;V=1;E=1:0:0,2:0:0\n";
        CHECK_FALSE(load_level(dir.path, 2, 1).has_value());
    }
    SUBCASE("garbage body line") {
        store_level(dir.path, 2, 1, levels[1]);
        std::string text = slurp(level_path(dir.path, 2, 1));
        auto pos = text.find('\n');
        std::ofstream(level_path(dir.path, 2, 1))
            << text.substr(0, pos + 1) << "E=garbage\n" << text.substr(pos + 1);
        CHECK_FALSE(load_level(dir.path, 2, 1).has_value());
    }
    SUBCASE("count mismatch") {
        store_level(dir.path, 2, 1, levels[1]);
        std::string text = slurp(level_path(dir.path, 2, 1));
        auto pos = text.find('\n');
        std::ofstream(level_path(dir.path, 2, 1)) << text.substr(0, pos + 1);
        CHECK_FALSE(load_level(dir.path, 2, 1).has_value());
    }
    SUBCASE("unsorted body") {
        REQUIRE(levels[1].size() >= 2);
        std::vector<Cell> swapped = levels[1];
        std::swap(swapped.front(), swapped.back());
        // store_level writes what it is given; the loader rejects disorder.
        store_level(dir.path, 2, 1, swapped);
        CHECK_FALSE(load_level(dir.path, 2, 1).has_value());
    }
    SUBCASE("empty file") {
        std::ofstream(level_path(dir.path, 2, 1));
        CHECK_FALSE(load_level(dir.path, 2, 1).has_value());
    }
}

TEST_CASE("write failure throws") {
    auto levels = enumerate_cells(2, 0);
    CHECK_THROWS_AS(store_level("/proc/forest-denied", 2, 0, levels[0]), std::runtime_error);
}

TEST_CASE("cached enumeration: cold run writes, warm run hits") {
    TempDir dir;
    auto truth = enumerate_cells(3, 2);

    auto cold = enumerate_with_cache(3, 2, dir.path);
    CHECK(cold.cache_hits == 0);
    CHECK(cold.cache_writes == 3);
    REQUIRE(cold.levels.size() == 3);
    for (int d = 0; d <= 2; ++d) CHECK(keys_of(cold.levels[d]) == keys_of(truth[d]));

    std::string before = slurp(level_path(dir.path, 3, 2));
    auto warm = enumerate_with_cache(3, 2, dir.path);
    CHECK(warm.cache_hits == 3);
    CHECK(warm.cache_writes == 0);
    for (int d = 0; d <= 2; ++d) CHECK(keys_of(warm.levels[d]) == keys_of(truth[d]));
    CHECK(slurp(level_path(dir.path, 3, 2)) == before);
}

TEST_CASE("cached enumeration without a directory computes everything") {
    auto result = enumerate_with_cache(2, 2, std::nullopt);
    CHECK(result.cache_hits == 0);
    CHECK(result.cache_writes == 0);
    CHECK(result.levels[2].size() == enumerate_cells(2, 2)[2].size());
}

TEST_CASE("a deleted or damaged level is recomputed and rewritten") {
    TempDir dir;
    enumerate_with_cache(3, 2, dir.path);

    SUBCASE("deleted middle level") {
        fs::remove(level_path(dir.path, 3, 1));
        auto rerun = enumerate_with_cache(3, 2, dir.path);
        CHECK(rerun.cache_hits == 2);
        CHECK(rerun.cache_writes == 1);
        CHECK(load_level(dir.path, 3, 1).has_value());
    }
    SUBCASE("poisoned top level") {
        std::ofstream(level_path(dir.path, 3, 2)) << "junk\n";
        auto rerun = enumerate_with_cache(3, 2, dir.path);
        CHECK(rerun.cache_hits == 2);
        CHECK(rerun.cache_writes == 1);
        auto healed = load_level(dir.path, 3, 2);
        REQUIRE(healed.has_value());
        CHECK(healed->size() == enumerate_cells(3, 2)[2].size());
    }
}

TEST_CASE("deeper request reuses shallow levels") {
    TempDir dir;
    enumerate_with_cache(2, 1, dir.path);
    auto deeper = enumerate_with_cache(2, 2, dir.path);
    CHECK(deeper.cache_hits == 2);
    CHECK(deeper.cache_writes == 1);
    CHECK(deeper.levels[2].size() == enumerate_cells(2, 2)[2].size());
}

TEST_CASE("budget overrun removes everything written this run") {
    TempDir dir;
    EnumerationOptions opts;
    opts.budget_seconds = 1e-4;
    CHECK_THROWS_AS(enumerate_with_cache(4, 3, dir.path, opts), BudgetExceeded);
    int leftover = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir.path)) ++leftover;
    CHECK(leftover == 0);
}

TEST_CASE("budget overrun keeps levels cached by earlier runs") {
    TempDir dir;
    enumerate_with_cache(4, 1, dir.path);  // dims 0 and 1 cached without a budget
    EnumerationOptions opts;
    opts.budget_seconds = 0.05;  // enough to load the cache, not to build dim 2
    try {
        enumerate_with_cache(4, 3, dir.path, opts);
        // A very fast machine might finish; then the cache simply holds more.
        CHECK(load_level(dir.path, 4, 2).has_value());
    } catch (const BudgetExceeded&) {
        CHECK(load_level(dir.path, 4, 0).has_value());
        CHECK(load_level(dir.path, 4, 1).has_value());
        CHECK_FALSE(load_level(dir.path, 4, 2).has_value());
    }
}

TEST_CASE("rejects nonsense arguments") {
    CHECK_THROWS_AS(enumerate_with_cache(0, 1, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_with_cache(2, -1, std::nullopt), std::invalid_argument);
}
