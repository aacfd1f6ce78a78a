#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ntos/int128.hpp"

namespace ntos::arith {

// All primes up to `limit`, ascending. Immutable after construction and safe
// to share across workers.
struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;

    // Primes p <= x as a view into the table. Requires x <= limit.
    std::span<const uint64_t> range_upto(uint64_t x) const;
    // pi(x) for x <= limit.
    uint64_t count_upto(uint64_t x) const { return range_upto(x).size(); }
};

struct SieveOptions {
    // Odd-entry segment size; 2^18 bytes keeps a segment inside L2.
    std::size_t segment_size = std::size_t{1} << 18;
    // Refuse sieves whose prime list would exceed this budget.
    uint64_t memory_budget_bytes = uint64_t{4} << 30;
    unsigned threads = 1;
};

PrimeTable sieve_primes(uint64_t limit, const SieveOptions& options = {});

struct PrimeFactor {
    uint64_t prime;
    uint32_t exponent;
    bool operator==(const PrimeFactor&) const = default;
};

// n as a sorted list of (prime, exponent) pairs. factors is empty for n = 1.
struct Factorization {
    uint64_t n = 1;
    std::vector<PrimeFactor> factors;

    uint64_t value() const { return n; }
    bool operator==(const Factorization&) const = default;
};

// Trial division over the table. A cofactor that survives all primes
// <= sqrt(n) is itself prime and is appended; if the table cannot certify
// that (limit^2 < cofactor), this throws precondition_error.
Factorization factor(uint64_t n, const PrimeTable& table);

// mu(n): 0 if n has a square factor, else (-1)^omega(n).
int mobius(const Factorization& f);
int mobius(uint64_t n, const PrimeTable& table);

// prod p^(e-1)(p-1)
uint64_t euler_phi(const Factorization& f);
// prod (e+1)
uint64_t tau(const Factorization& f);
// number of distinct prime factors
uint32_t omega(const Factorization& f);

// All divisors of n, ascending. Throws resource_error when the divisor count
// exceeds `cap`.
std::vector<uint64_t> divisors(const Factorization& f, uint64_t cap = uint64_t{1} << 20);

// Divisors paired with their Euler phi, unsorted (generation order).
// Cheaper than divisors() + factor() per divisor when phi is all that is
// needed downstream.
std::vector<std::pair<uint64_t, uint64_t>> divisors_with_phi(const Factorization& f,
                                                             uint64_t cap = uint64_t{1} << 20);

// base^exponent mod modulus with double-width intermediate products.
// modulus >= 2; negative bases are reduced into [0, modulus).
uint64_t mod_pow(int64_t base, uint64_t exponent, uint64_t modulus);
uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t modulus);

// #{p <= x : p prime, p == 1 (mod d)}. Requires table.limit >= x.
uint64_t prime_count_in_ap(uint64_t x, uint64_t d, const PrimeTable& table);

uint64_t gcd_u64(uint64_t a, uint64_t b);

// Montgomery multiplication context for a fixed odd modulus. The sweep over
// a full multiplicative group does one modular multiply per element, and a
// hardware divide there dominates everything else, so the hot loops use this.
class MontgomeryContext {
public:
    explicit MontgomeryContext(uint64_t modulus);

    uint64_t modulus() const { return n_; }
    uint64_t to_mont(uint64_t x) const { return mul(x % n_, r2_); }
    uint64_t from_mont(uint64_t x) const { return reduce(x); }
    uint64_t one() const { return r1_; }

    // (a * b * R^-1) mod n for a, b in Montgomery form.
    uint64_t mul(uint64_t a, uint64_t b) const {
        return reduce(static_cast<u128>(a) * b);
    }

    uint64_t pow(uint64_t base_mont, uint64_t exponent) const;

private:
    uint64_t reduce(u128 t) const {
        uint64_t m = static_cast<uint64_t>(t) * ninv_;
        uint64_t u = static_cast<uint64_t>((t + static_cast<u128>(m) * n_) >> 64);
        return u >= n_ ? u - n_ : u;
    }

    uint64_t n_;     // odd modulus
    uint64_t ninv_;  // -n^-1 mod 2^64
    uint64_t r1_;    // R mod n
    uint64_t r2_;    // R^2 mod n
};

}  // namespace ntos::arith
