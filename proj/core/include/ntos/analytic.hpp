#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "ntos/arith.hpp"

namespace ntos::analytic {

using arith::Factorization;
using arith::PrimeTable;
using BigRational = boost::multiprecision::cpp_rational;

// Euler-Mascheroni constant, 30 digits (standard reference value).
inline constexpr long double kEulerGamma = 0.577215664901532860606512090082L;

// A numerical constant together with a rigorous bound on the truncation
// error. `value` lies within tail_bound of the untruncated quantity.
struct ConstantValue {
    long double value = 0.0L;
    long double tail_bound = 0.0L;
    std::string meta;  // human-readable truncation point
};

// zeta(2) = pi^2/6 and zeta(6) = pi^6/945 in closed form; zeta(3) by an
// alternating series with the first omitted term as tail bound.
ConstantValue zeta2();
ConstantValue zeta3();
ConstantValue zeta6();

// zeta(2) zeta(3) / zeta(6) ~ 1.9435964368
ConstantValue zeta_ratio();

// sum_{p <= truncation} log p / (p^2 - p + 1), with a Chebyshev-bounded
// prime tail.
ConstantValue prime_log_sum(const PrimeTable& table, uint64_t truncation);

// C1(k) = zeta_ratio * prod_{p|k} (1 + (p-1)/(p^2-p+1)), squarefree k only.
ConstantValue c1_of_k(const Factorization& fact);

// C2(k) = C1(k) (gamma - S - sum_{p|k} (p-1) p log p / (p^2-p+1)) where S is
// a precomputed prime_log_sum. Tail bounds propagate by the product rule.
ConstantValue c2_of_k(const Factorization& fact, const ConstantValue& prime_sum);

// prod_{p <= truncation} (1 - p/(p^3-1)) ~ 0.5759599689 (Stephens' constant)
ConstantValue stephens_c(const PrimeTable& table, uint64_t truncation);

// The coefficient of log log x in the average reciprocal-order main term:
//   2 gamma - 2 S + sum_k (mu(k)/k^2) C1(k) (log k - 2 sum_{p|k} (p-1)p log p/(p^2-p+1))
// k-sum truncated at k_truncation, prime sums at prime_truncation.
ConstantValue loglog_coefficient(const PrimeTable& table, uint64_t k_truncation = 1'000'000,
                                 uint64_t prime_truncation = 1'000'000);

// Li(x) = int_2^x dt/log t by adaptive quadrature (relative error ~1e-10).
double log_integral(double x);

// Both sides of the divisor-count rearrangement
//   sum_{d<x} (phi(d)/d) pi(x;d,1) = sum_{k<x} (mu(k)/k) sum_{p<=x, p=1(k)} tau((p-1)/k)
// as exact rationals. Equality is the caller's oracle.
std::pair<BigRational, BigRational> tau_identity_check(uint64_t x, const PrimeTable& table);

}  // namespace ntos::analytic
