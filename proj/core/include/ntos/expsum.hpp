#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ntos/arith.hpp"

namespace ntos::expsum {

using arith::Factorization;

// The unique subgroup of order d of (Z/pZ)*, i.e. all solutions of
// a^d == 1 (mod p), ascending. Requires d | p-1.
std::vector<uint64_t> subgroup_elements(uint64_t p, uint64_t d, const Factorization& fact_pm1);

// sum_{a in H} exp(2 pi i k a / p), compensated accumulation. The phase
// argument (k a mod p) is reduced in exact integer arithmetic first.
std::complex<double> exp_sum(uint64_t p, std::span<const uint64_t> subgroup, int64_t k);

struct SubgroupSumProfile {
    uint64_t p = 0;
    uint64_t d = 0;
    double max_abs = 0.0;    // max over k in [1, p-1] of |sum_{a in H} e(k a / p)|
    double normalized = 0.0;  // max_abs / d
};

struct MaxSumOptions {
    // Operation-pair cap on p*d; the coset reduction, when enabled, brings
    // the actual work down to ~p evaluations.
    uint64_t work_budget = 1'000'000'000;
    // |S(k)| is constant on cosets kH, so one representative per coset
    // suffices. The direct path exists as an oracle for the reduction.
    bool coset_reduction = true;
};

SubgroupSumProfile max_subgroup_sum(uint64_t p, uint64_t d, const Factorization& fact_pm1,
                                    const MaxSumOptions& options = {});

// N/(M+1) + sum_{m=1..M} weyl_sums[m-1]/m, the Erdos-Turan discrepancy bound
// with c1 = c2 = 1.
double erdos_turan_bound(uint64_t n_points, uint64_t m_terms, std::span<const double> weyl_sums);

// Exact sup over intervals (a,b), 0 <= a < b <= 1, of
// | #{points in (a,b)} - (b-a) N |, via endpoint scan at sample points.
double true_discrepancy(std::span<const double> points);

struct CountingProbe {
    uint64_t exact = 0;  // #{a in [1,y) : a^d == 1 (p)}
    double main = 0.0;   // (y/p) d
    double error = 0.0;  // exact - main
};

CountingProbe counting_probe(uint64_t p, uint64_t d, uint64_t y, const Factorization& fact_pm1);

}  // namespace ntos::expsum
