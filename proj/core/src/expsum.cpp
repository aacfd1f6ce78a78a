#include "ntos/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ntos/errors.hpp"
#include "ntos/kahan.hpp"
#include "ntos/order.hpp"

namespace ntos::expsum {

std::vector<uint64_t> subgroup_elements(uint64_t p, uint64_t d, const Factorization& fact_pm1) {
    if (d == 0 || (p - 1) % d != 0)
        throw precondition_error("subgroup_elements: d must divide p-1");
    std::vector<uint64_t> elems;
    elems.reserve(d);
    if (p == 2 || d == 1) {
        elems.push_back(1);
        return elems;
    }
    const uint64_t g = order::find_generator(p, fact_pm1);
    const uint64_t h = arith::mod_pow(static_cast<int64_t>(g), (p - 1) / d, p);
    uint64_t cur = 1;
    for (uint64_t j = 0; j < d; ++j) {
        elems.push_back(cur);
        cur = arith::mod_mul(cur, h, p);
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

std::complex<double> exp_sum(uint64_t p, std::span<const uint64_t> subgroup, int64_t k) {
    const double two_pi_over_p = 2.0 * std::numbers::pi / static_cast<double>(p);
    const uint64_t kr = static_cast<uint64_t>(((k % static_cast<int64_t>(p)) +
                                               static_cast<int64_t>(p))) %
                        p;
    KahanSum<double> re, im;
    for (uint64_t a : subgroup) {
        const uint64_t phase = arith::mod_mul(kr, a, p);
        const double theta = two_pi_over_p * static_cast<double>(phase);
        re.add(std::cos(theta));
        im.add(std::sin(theta));
    }
    return {re.value(), im.value()};
}

namespace {

double abs_exp_sum(uint64_t p, std::span<const uint64_t> subgroup, uint64_t k) {
    const std::complex<double> s = exp_sum(p, subgroup, static_cast<int64_t>(k));
    return std::abs(s);
}

}  // namespace

SubgroupSumProfile max_subgroup_sum(uint64_t p, uint64_t d, const Factorization& fact_pm1,
                                    const MaxSumOptions& options) {
    if (d == 0 || (p - 1) % d != 0)
        throw precondition_error("max_subgroup_sum: d must divide p-1");
    const arith::u128 pairs = options.coset_reduction
                                  ? static_cast<arith::u128>(p)
                                  : static_cast<arith::u128>(p) * d;
    if (pairs > options.work_budget)
        throw resource_error("max_subgroup_sum: p*d exceeds work budget");

    SubgroupSumProfile profile;
    profile.p = p;
    profile.d = d;
    const std::vector<uint64_t> subgroup = subgroup_elements(p, d, fact_pm1);

    double best = 0.0;
    if (!options.coset_reduction || p == 2 || d == p - 1) {
        for (uint64_t k = 1; k < p; ++k) best = std::max(best, abs_exp_sum(p, subgroup, k));
    } else {
        // |S(kh)| = |S(k)| for h in H, so representatives g^i of the
        // (p-1)/d cosets of H cover every value.
        const uint64_t g = order::find_generator(p, fact_pm1);
        const uint64_t cosets = (p - 1) / d;
        uint64_t rep = 1;
        for (uint64_t i = 0; i < cosets; ++i) {
            best = std::max(best, abs_exp_sum(p, subgroup, rep));
            rep = arith::mod_mul(rep, g, p);
        }
    }
    profile.max_abs = best;
    profile.normalized = best / static_cast<double>(d);
    return profile;
}

double erdos_turan_bound(uint64_t n_points, uint64_t m_terms, std::span<const double> weyl_sums) {
    if (m_terms < 1) throw precondition_error("erdos_turan_bound: M must be >= 1");
    if (weyl_sums.size() < m_terms)
        throw precondition_error("erdos_turan_bound: need M Weyl sums");
    KahanSum<double> bound;
    bound.add(static_cast<double>(n_points) / static_cast<double>(m_terms + 1));
    for (uint64_t m = 1; m <= m_terms; ++m)
        bound.add(weyl_sums[m - 1] / static_cast<double>(m));
    return bound.value();
}

double true_discrepancy(std::span<const double> points) {
    if (points.empty()) throw precondition_error("true_discrepancy: empty point list");
    const double n = static_cast<double>(points.size());

    // Critical endpoint values: 0, 1, and the distinct sample points.
    std::vector<double> vals(points.begin(), points.end());
    vals.push_back(0.0);
    vals.push_back(1.0);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    // closed_le[i] = #points <= vals[i]; open_lt[i] = #points < vals[i].
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = vals.size();
    std::vector<std::size_t> le(m), lt(m);
    for (std::size_t i = 0; i < m; ++i) {
        le[i] = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), vals[i]) - sorted.begin());
        lt[i] = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), vals[i]) - sorted.begin());
    }

    // Excess is approached by closed intervals [u, v] shrunk from outside
    // (count = points in [u, v], length -> v - u); deficiency by the open
    // interval (u, v) itself (count = points strictly inside).
    double disc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double len = vals[j] - vals[i];
            const double closed = static_cast<double>(le[j] - lt[i]);
            const double open = static_cast<double>(lt[j] > le[i] ? lt[j] - le[i] : 0);
            disc = std::max(disc, closed - len * n);
            disc = std::max(disc, len * n - open);
        }
    }
    return disc;
}

CountingProbe counting_probe(uint64_t p, uint64_t d, uint64_t y, const Factorization& fact_pm1) {
    CountingProbe probe;
    probe.exact = order::count_roots(p, d, y, fact_pm1);
    probe.main = static_cast<double>(y) / static_cast<double>(p) * static_cast<double>(d);
    probe.error = static_cast<double>(probe.exact) - probe.main;
    return probe;
}

}  // namespace ntos::expsum
