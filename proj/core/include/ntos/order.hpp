#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ntos/arith.hpp"
#include "ntos/int128.hpp"

namespace ntos::order {

using arith::Factorization;
using arith::PrimeTable;

// Smallest d >= 1 with a^d == 1 (mod p). Requires p prime, p not dividing a;
// fact_pm1 is the factorization of p-1.
uint64_t multiplicative_order(uint64_t a, uint64_t p, const Factorization& fact_pm1);

// Smallest generator of (Z/pZ)*, found by testing candidates 2, 3, 4, ...
// with the factored-order criterion g^((p-1)/q) != 1 for every prime q | p-1.
uint64_t find_generator(uint64_t p, const Factorization& fact_pm1);

// For a fixed prime p: d -> #{a in [1, p-1] : ord_a = d}. Keys are exactly
// the divisors of p-1 and each count equals phi(d).
struct OrderSpectrum {
    uint64_t p = 0;
    std::map<uint64_t, uint64_t> entries;
};

// For p <= enumerate_bound the spectrum is built by computing the order of
// every residue; above it the cyclic-group formula (count = phi(d)) is used.
// Both paths agree wherever both run.
OrderSpectrum order_spectrum(uint64_t p, const Factorization& fact_pm1,
                             uint64_t enumerate_bound = 10'000);

// #{a in [1, y) : a^d == 1 (mod p)} for d | p-1, counting every lift below y
// of the d roots in [1, p-1].
uint64_t count_roots(uint64_t p, uint64_t d, uint64_t y, const Factorization& fact_pm1);

// Exact rational num/den in lowest terms.
struct Rational {
    u128 num = 0;
    u128 den = 1;
    bool operator==(const Rational&) const = default;
    long double to_long_double() const {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }
};

// alpha(n) = (1/n) sum_{d|n} d phi(d), the average order of elements of a
// cyclic group of size n. Exact.
Rational alpha(const Factorization& fact);

// sum_{d|n} d phi(d), exact.
u128 divisor_order_sum(const Factorization& fact);

// Per-prime aggregates over a in [1, y] with p not dividing a:
//   recip_sum   = sum 1/ord_a(p)      (compensated double, a ascending)
//   count_above = #{a : ord_a(p) > threshold}
//   order_sum   = sum ord_a(p)        (exact 128-bit)
// recip_small/recip_large split recip_sum at the decomposition cut when one
// is configured (both zero otherwise).
struct PrimeOrderStats {
    uint64_t p = 0;
    double recip_sum = 0.0;
    uint64_t count_above = 0;
    u128 order_sum = 0;
    double recip_small = 0.0;
    double recip_large = 0.0;
};

struct OrderRectangleSummary {
    uint64_t x = 0;
    uint64_t y = 0;
    double threshold = 0.0;
    double decompose_cut = 0.0;
    std::vector<PrimeOrderStats> per_prime;  // ascending p

    // Compensated total of per-prime reciprocal sums, primes ascending.
    double total_recip() const;
    u128 total_count_above() const;
    u128 total_order_sum() const;
};

struct RectangleOptions {
    double threshold = 0.0;      // count orders strictly above this
    double decompose_cut = 0.0;  // 0 disables the recip_small/recip_large split
    u128 work_budget = static_cast<u128>(1'000'000'000) * 1'000;  // x*y cap, 1e12
    unsigned threads = 0;                                         // 0 = hardware
    // Orders of a <= y are read off a full walk of the cyclic group when
    // p <= sweep_factor * y; beyond that per-residue order computations win.
    uint64_t sweep_factor = 32;
};

// The inner double sums over a <= y, p <= x. The periodicity path (full
// periods of the order table for p <= y, generator sweep above) is exact and
// the float accumulation replays the naive (p ascending, a ascending)
// compensated order, so results are bit-identical to the naive double loop
// at every scale and for every worker count.
OrderRectangleSummary rectangle_summary(uint64_t x, uint64_t y, const RectangleOptions& options,
                                        const PrimeTable& table);

// Order of every residue 1..min(p-1, cap), by walking powers of a generator.
// ords[r] is left untouched for residues > cap; index 0 unused.
void order_table_upto(uint64_t p, const Factorization& fact_pm1, uint64_t cap,
                      std::vector<uint32_t>& ords);

}  // namespace ntos::order
