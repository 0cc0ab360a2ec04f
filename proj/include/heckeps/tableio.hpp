#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "heckeps/arithmetic_tables.hpp"
#include "heckeps/tau_table.hpp"

namespace heckeps {

// CSV schema: header "n,tau,lambda", tau as exact decimal integer, lambda
// with 17 significant digits.
void export_tau_csv(const TauTable& table, const std::filesystem::path& path);

// Import validates tau(1) = 1, the exact Deligne bound, and lambda within
// one ulp of tau(n) n^{-11/2}; throws on any violation.
TauTable import_tau_csv(const std::filesystem::path& path);

// Sidecar schema: "n,von_mangoldt,moebius,divisors".
void export_arith_csv(const ArithmeticTables& tables, const std::filesystem::path& path);
ArithmeticTables import_arith_csv(const std::filesystem::path& path);

uint64_t fnv1a64_file(const std::filesystem::path& path);

struct CacheManifest {
    std::string kind;  // "tau" or "arith"
    uint64_t limit = 0;
    std::string content_hash;  // fnv1a64, hex
    std::string built_at;      // ISO-8601 UTC
};

// Builds both tables at `limit`, writes tau.csv / arith.csv plus a
// manifest.json into `dir`.
CacheManifest cache_tables(uint64_t limit, const std::filesystem::path& dir,
                           unsigned threads = 1);

struct CachedTables {
    TauTable tau;
    ArithmeticTables arith;
};

// Loads the cache when the manifest limit is >= limit and the hashes match;
// otherwise rebuilds (and rewrites the cache, superseding the manifest).
CachedTables load_or_build_tables(uint64_t limit, const std::filesystem::path& dir,
                                  unsigned threads = 1);

// Cache directory resolution: HECKEPS_CACHE env var, else ".heckeps_cache".
std::filesystem::path default_cache_dir();

} // namespace heckeps
