#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "ntos/arith.hpp"

namespace ntos::cache {

// Cache file layout (little-endian):
//   magic "NTOS" | format version (u32, =1) | limit (u64) | count (u64)
//   followed by count ascending u64 primes.
inline constexpr char kMagic[4] = {'N', 'T', 'O', 'S'};
inline constexpr uint32_t kFormatVersion = 1;

// Writes via a temp file in the same directory plus rename, so a crashed run
// cannot leave a half-written cache behind.
void save_table(const std::filesystem::path& path, const arith::PrimeTable& table);

// Validates magic, version, monotonicity and count; throws precondition_error
// with a descriptive message on any mismatch.
arith::PrimeTable load_table(const std::filesystem::path& path);

using WarnFn = std::function<void(const std::string&)>;

// Loads any cached table whose limit covers `limit` (truncating the view),
// otherwise sieves and caches. Corrupt caches are rebuilt with a warning; an
// unwritable cache_dir degrades to sieving without caching.
arith::PrimeTable load_or_build_table(uint64_t limit, const std::filesystem::path& cache_dir,
                                      const arith::SieveOptions& sieve_options = {},
                                      const WarnFn& warn = {});

}  // namespace ntos::cache
