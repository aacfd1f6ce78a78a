#include "ntos/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "ntos/errors.hpp"

namespace ntos::arith {

std::span<const uint64_t> PrimeTable::range_upto(uint64_t x) const {
    if (x > limit)
        throw precondition_error("PrimeTable::range_upto: x exceeds table limit");
    auto it = std::upper_bound(primes.begin(), primes.end(), x);
    return {primes.data(), static_cast<std::size_t>(it - primes.begin())};
}

namespace {

// Plain odd-only sieve for the base primes up to sqrt(limit).
std::vector<uint64_t> small_primes_upto(uint64_t n) {
    std::vector<uint64_t> out;
    if (n < 2) return out;
    out.push_back(2);
    std::vector<uint8_t> is_prime((n + 1) / 2, 1);  // index i <-> 2i+1
    for (uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= n; ++i) {
        if (!is_prime[i]) continue;
        const uint64_t p = 2 * i + 1;
        for (uint64_t j = (p * p - 1) / 2; j < is_prime.size(); j += p) is_prime[j] = 0;
    }
    for (uint64_t i = 1; 2 * i + 1 <= n; ++i)
        if (is_prime[i]) out.push_back(2 * i + 1);
    return out;
}

// Sieve the odd numbers in [low, high] (both odd-aligned bounds handled by
// the caller) and append the primes found.
void sieve_block(uint64_t low, uint64_t high, std::size_t segment_size,
                 const std::vector<uint64_t>& base, std::vector<uint64_t>& out) {
    std::vector<uint8_t> seg(segment_size);
    for (uint64_t seg_low = low; seg_low <= high; seg_low += 2 * segment_size) {
        const uint64_t seg_high = std::min(high, seg_low + 2 * segment_size - 2);
        const std::size_t used = static_cast<std::size_t>((seg_high - seg_low) / 2 + 1);
        std::fill(seg.begin(), seg.begin() + used, uint8_t{1});
        for (std::size_t bi = 1; bi < base.size(); ++bi) {  // skip 2
            const uint64_t p = base[bi];
            if (p * p > seg_high) break;
            uint64_t start = std::max(p * p, ((seg_low + p - 1) / p) * p);
            if ((start & 1) == 0) start += p;
            for (uint64_t m = start; m <= seg_high; m += 2 * p)
                seg[static_cast<std::size_t>((m - seg_low) / 2)] = 0;
        }
        for (std::size_t i = 0; i < used; ++i)
            if (seg[i]) out.push_back(seg_low + 2 * i);
    }
}

}  // namespace

PrimeTable sieve_primes(uint64_t limit, const SieveOptions& options) {
    if (limit < 2) throw precondition_error("sieve_primes: limit must be >= 2");

    // pi(x) < 1.26 x/log x for x > 16; reject builds whose output list alone
    // would blow the budget.
    const double est = limit < 32 ? 16.0 : 1.26 * double(limit) / std::log(double(limit));
    if (est * 8.0 > double(options.memory_budget_bytes))
        throw resource_error("sieve_primes: limit exceeds configured memory budget");

    const uint64_t root = static_cast<uint64_t>(std::sqrt(double(limit))) + 1;
    const std::vector<uint64_t> base = small_primes_upto(std::min(root, limit));

    PrimeTable table;
    table.limit = limit;
    table.primes.push_back(2);
    if (limit == 2) return table;

    const uint64_t lo = 3;
    const uint64_t hi = limit % 2 ? limit : limit - 1;  // largest odd <= limit

    unsigned workers = options.threads == 0
                           ? std::max(1u, std::thread::hardware_concurrency())
                           : options.threads;
    const uint64_t span = hi >= lo ? (hi - lo) / 2 + 1 : 0;  // odd count
    if (workers <= 1 || span < 4 * options.segment_size) {
        sieve_block(lo, hi, options.segment_size, base, table.primes);
    } else {
        // Partition the odd range into per-worker blocks aligned to segment
        // boundaries; concatenation in block order reproduces the sequential
        // output exactly.
        std::vector<std::vector<uint64_t>> parts(workers);
        const uint64_t per = ((span + workers - 1) / workers + options.segment_size - 1) /
                             options.segment_size * options.segment_size;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const uint64_t first = lo + 2 * per * w;
            if (first > hi) break;
            const uint64_t last = std::min(hi, first + 2 * per - 2);
            pool.emplace_back([&, w, first, last] {
                sieve_block(first, last, options.segment_size, base, parts[w]);
            });
        }
        for (auto& t : pool) t.join();
        for (auto& part : parts)
            table.primes.insert(table.primes.end(), part.begin(), part.end());
    }
    return table;
}

Factorization factor(uint64_t n, const PrimeTable& table) {
    if (n < 1) throw precondition_error("factor: n must be >= 1");
    Factorization f;
    f.n = n;
    uint64_t m = n;
    for (uint64_t p : table.primes) {
        if (static_cast<u128>(p) * p > m) break;
        if (m % p) continue;
        uint32_t e = 0;
        do {
            m /= p;
            ++e;
        } while (m % p == 0);
        f.factors.push_back({p, e});
    }
    if (m > 1) {
        // Cofactor above the last tried prime. It is prime provided every
        // prime <= sqrt(m) was tried, i.e. table.limit^2 >= m.
        if (m > table.limit && static_cast<u128>(table.limit) * table.limit < m)
            throw precondition_error("factor: table too small to certify cofactor primality");
        f.factors.push_back({m, 1});
    }
    return f;
}

int mobius(const Factorization& f) {
    for (const auto& pf : f.factors)
        if (pf.exponent >= 2) return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

int mobius(uint64_t n, const PrimeTable& table) { return mobius(factor(n, table)); }

uint64_t euler_phi(const Factorization& f) {
    uint64_t phi = 1;
    for (const auto& [p, e] : f.factors) {
        phi *= p - 1;
        for (uint32_t i = 1; i < e; ++i) phi *= p;
    }
    return phi;
}

uint64_t tau(const Factorization& f) {
    uint64_t t = 1;
    for (const auto& pf : f.factors) t *= pf.exponent + 1;
    return t;
}

uint32_t omega(const Factorization& f) { return static_cast<uint32_t>(f.factors.size()); }

std::vector<uint64_t> divisors(const Factorization& f, uint64_t cap) {
    if (tau(f) > cap) throw resource_error("divisors: divisor count exceeds cap");
    std::vector<uint64_t> divs{1};
    for (const auto& [p, e] : f.factors) {
        const std::size_t base_count = divs.size();
        uint64_t pk = 1;
        for (uint32_t i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base_count; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::vector<std::pair<uint64_t, uint64_t>> divisors_with_phi(const Factorization& f,
                                                             uint64_t cap) {
    if (tau(f) > cap) throw resource_error("divisors_with_phi: divisor count exceeds cap");
    std::vector<std::pair<uint64_t, uint64_t>> divs{{1, 1}};
    for (const auto& [p, e] : f.factors) {
        const std::size_t base_count = divs.size();
        uint64_t pk = 1, phi_pk = 1;
        for (uint32_t i = 1; i <= e; ++i) {
            phi_pk = pk * (p - 1);
            pk *= p;
            for (std::size_t j = 0; j < base_count; ++j)
                divs.push_back({divs[j].first * pk, divs[j].second * phi_pk});
        }
    }
    return divs;
}

uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t modulus) {
    return static_cast<uint64_t>(static_cast<u128>(a) * b % modulus);
}

uint64_t mod_pow(int64_t base, uint64_t exponent, uint64_t modulus) {
    if (modulus < 2) throw precondition_error("mod_pow: modulus must be >= 2");
    int64_t r = base % static_cast<int64_t>(modulus);
    uint64_t b = static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(modulus) : r);
    uint64_t acc = 1 % modulus;
    while (exponent) {
        if (exponent & 1) acc = mod_mul(acc, b, modulus);
        b = mod_mul(b, b, modulus);
        exponent >>= 1;
    }
    return acc;
}

uint64_t prime_count_in_ap(uint64_t x, uint64_t d, const PrimeTable& table) {
    if (d < 1) throw precondition_error("prime_count_in_ap: d must be >= 1");
    auto primes = table.range_upto(x);
    if (d == 1) return primes.size();
    uint64_t count = 0;
    for (uint64_t p : primes) count += (p - 1) % d == 0;
    return count;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    if (a == 0) return b;
    if (b == 0) return a;
    const int shift = std::countr_zero(a | b);
    a >>= std::countr_zero(a);
    while (b) {
        b >>= std::countr_zero(b);
        if (a > b) std::swap(a, b);
        b -= a;
    }
    return a << shift;
}

MontgomeryContext::MontgomeryContext(uint64_t modulus) : n_(modulus) {
    if (modulus < 3 || modulus % 2 == 0)
        throw precondition_error("MontgomeryContext: modulus must be odd and >= 3");
    // Newton iteration for n^-1 mod 2^64, then negate.
    uint64_t inv = modulus;
    for (int i = 0; i < 5; ++i) inv *= 2 - modulus * inv;
    ninv_ = ~inv + 1;
    r1_ = static_cast<uint64_t>((u128{1} << 64) % n_);
    r2_ = static_cast<uint64_t>(static_cast<u128>(r1_) * r1_ % n_);
}

uint64_t MontgomeryContext::pow(uint64_t base_mont, uint64_t exponent) const {
    uint64_t acc = r1_;
    uint64_t b = base_mont;
    while (exponent) {
        if (exponent & 1) acc = mul(acc, b);
        b = mul(b, b);
        exponent >>= 1;
    }
    return acc;
}

}  // namespace ntos::arith
