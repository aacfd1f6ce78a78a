#include "ntos/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "ntos/analytic.hpp"
#include "ntos/arith.hpp"
#include "ntos/errors.hpp"
#include "ntos/expsum.hpp"
#include "ntos/experiments.hpp"
#include "ntos/kahan.hpp"
#include "ntos/order.hpp"

namespace ntos::verify {

namespace {

using arith::Factorization;
using arith::PrimeTable;
using arith::u128;

struct Scale {
    uint64_t identity_bound;       // n, d sweep bound
    uint64_t spectrum_bound;       // primes for the spectrum check
    std::vector<uint64_t> tau_xs;  // tau-identity sizes
    uint64_t oracle_x;             // rectangle oracle bounds
    uint64_t oracle_y;
    uint64_t stephens_lo;
    uint64_t stephens_hi;
    std::vector<uint64_t> trend_xs;  // T1 trend x values
    uint64_t t3_x, t3_y;
    uint64_t luca_x;
    int parseval_pairs;
    uint64_t et_prime_bound;
    uint64_t counting_bound;
    uint64_t table_limit;
};

Scale full_scale() {
    return {10'000,
            10'000,
            {10, 100, 1'000, 10'000},
            300,
            100,
            100'000,
            10'000'000,
            {10'000, 100'000, 1'000'000},
            100'000,
            1'000,
            100'000,
            50,
            500,
            10'000,
            10'000'000};
}

Scale quick_scale() {
    return {1'000,
            1'000,
            {10, 100},
            60,
            25,
            10'000,
            100'000,
            {1'000, 10'000},
            10'000,
            100,
            10'000,
            10,
            100,
            1'000,
            100'000};
}

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately use the slowest possible textbook
// definitions and share nothing with the optimized paths they check.

// Order by repeated multiplication: the count of steps until a^t == 1.
uint64_t naive_order(uint64_t a, uint64_t p) {
    const uint64_t r = a % p;
    uint64_t v = r;
    uint64_t t = 1;
    while (v != 1) {
        v = arith::mod_mul(v, r, p);
        ++t;
    }
    return t;
}

// The naive double loop over a for one prime, same accumulation protocol
// (compensated, a ascending) as the optimized path.
order::PrimeOrderStats naive_prime_stats(uint64_t p, uint64_t y, double threshold,
                                         double decompose_cut) {
    order::PrimeOrderStats st;
    st.p = p;
    KahanSum<double> rs, rs_small, rs_large;
    u128 osum = 0;
    uint64_t cnt = 0;
    for (uint64_t a = 1; a <= y; ++a) {
        if (a % p == 0) continue;
        const uint64_t l = naive_order(a, p);
        rs.add(1.0 / static_cast<double>(l));
        if (static_cast<double>(l) > threshold) ++cnt;
        osum += l;
        if (decompose_cut > 0.0) {
            if (static_cast<double>(l) < decompose_cut)
                rs_small.add(1.0 / static_cast<double>(l));
            else
                rs_large.add(1.0 / static_cast<double>(l));
        }
    }
    st.recip_sum = rs.value();
    st.count_above = cnt;
    st.order_sum = osum;
    st.recip_small = rs_small.value();
    st.recip_large = rs_large.value();
    return st;
}

bool stats_equal(const order::PrimeOrderStats& a, const order::PrimeOrderStats& b) {
    return a.p == b.p && a.recip_sum == b.recip_sum && a.count_above == b.count_above &&
           a.order_sum == b.order_sum && a.recip_small == b.recip_small &&
           a.recip_large == b.recip_large;
}

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------

CheckResult criterion_identities(const Scale& sc, const PrimeTable& table) {
    const auto start = Clock::now();
    CheckResult r{1, "exact identity suite", true, "", 0.0};

    uint64_t checked = 0;
    for (uint64_t n = 1; n <= sc.identity_bound && r.pass; ++n) {
        const Factorization f = arith::factor(n, table);
        // sum_{d|n} phi(d) = n
        uint64_t phi_sum = 0;
        for (const auto& [d, phi] : arith::divisors_with_phi(f)) phi_sum += phi;
        if (phi_sum != n) {
            r.pass = false;
            r.detail = format("sum phi(d) over d|%llu gave %llu", n, phi_sum);
            break;
        }
        // sum_{d'|d} mu(d/d') d' = phi(d)
        int64_t mu_sum = 0;
        for (uint64_t dp : arith::divisors(f))
            mu_sum += arith::mobius(n / dp, table) * static_cast<int64_t>(dp);
        if (mu_sum != static_cast<int64_t>(arith::euler_phi(f))) {
            r.pass = false;
            r.detail = format("Mobius inversion failed at d=%llu", n);
            break;
        }
        ++checked;
    }

    if (r.pass) {
        for (uint64_t p : table.range_upto(sc.spectrum_bound)) {
            if (p >= sc.spectrum_bound) break;
            const Factorization f = arith::factor(p - 1, table);
            const auto spec = order::order_spectrum(p, f, sc.spectrum_bound);
            uint64_t total = 0;
            for (const auto& [d, phi] : arith::divisors_with_phi(f)) {
                auto it = spec.entries.find(d);
                if (it == spec.entries.end() || it->second != phi) {
                    r.pass = false;
                    r.detail = format("spectrum count != phi(d) at p=%llu d=%llu", p, d);
                    break;
                }
                total += phi;
            }
            if (!r.pass) break;
            if (spec.entries.size() != arith::divisors_with_phi(f).size() || total != p - 1) {
                r.pass = false;
                r.detail = format("spectrum keys or total wrong at p=%llu", p);
                break;
            }
        }
    }
    if (r.pass)
        r.detail = format("divisor identities for n,d <= %llu; spectra for p < %llu",
                          sc.identity_bound, sc.spectrum_bound);
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_tau_identity(const Scale& sc, const PrimeTable& table) {
    const auto start = Clock::now();
    CheckResult r{2, "tau-divisor identity", true, "", 0.0};
    for (uint64_t x : sc.tau_xs) {
        const auto [lhs, rhs] = analytic::tau_identity_check(x, table);
        if (lhs != rhs) {
            r.pass = false;
            r.detail = format("sides differ at x=%llu", x);
            break;
        }
    }
    if (r.pass) r.detail = format("both sides equal as exact rationals, %zu sizes", sc.tau_xs.size());
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_rectangle_oracle(const Scale& sc, const PrimeTable& table,
                                       unsigned threads) {
    const auto start = Clock::now();
    CheckResult r{3, "rectangle summary vs naive oracle", true, "", 0.0};
    const double threshold = 10.5;
    const double cut = 7.0;

    // Oracle record lists at x = oracle_x for every y; the naive loop is
    // per-prime, so records for smaller x are exact prefixes.
    const auto primes = table.range_upto(sc.oracle_x);
    uint64_t combos = 0;
    for (uint64_t y = 1; y <= sc.oracle_y && r.pass; ++y) {
        std::vector<order::PrimeOrderStats> oracle;
        oracle.reserve(primes.size());
        for (uint64_t p : primes) oracle.push_back(naive_prime_stats(p, y, threshold, cut));

        for (uint64_t x = 2; x <= sc.oracle_x && r.pass; ++x) {
            order::RectangleOptions opt;
            opt.threshold = threshold;
            opt.decompose_cut = cut;
            // Alternate worker counts; results must not depend on them.
            opt.threads = (x + y) % 3 == 0 ? threads : 1;
            const auto summary = order::rectangle_summary(x, y, opt, table);
            const std::size_t expect = table.range_upto(x).size();
            if (summary.per_prime.size() != expect) {
                r.pass = false;
                r.detail = format("prime count mismatch at x=%llu", x);
                break;
            }
            for (std::size_t i = 0; i < expect; ++i) {
                if (!stats_equal(summary.per_prime[i], oracle[i])) {
                    r.pass = false;
                    r.detail = format("record differs at x=%llu y=%llu p=%llu", x, y,
                                      oracle[i].p);
                    break;
                }
            }
            ++combos;
        }
    }
    if (r.pass) r.detail = format("bit-identical on %llu (x,y) combinations", combos);
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_constants(const Scale& sc, const PrimeTable& table) {
    const auto start = Clock::now();
    CheckResult r{4, "constants", true, "", 0.0};

    const auto lo = analytic::stephens_c(table, sc.stephens_lo);
    const auto hi = analytic::stephens_c(table, sc.stephens_hi);
    const long double diff = std::abs(lo.value - hi.value);
    if (diff > lo.tail_bound + hi.tail_bound) {
        r.pass = false;
        r.detail = format("truncation bracket violated: |%.12Lg - %.12Lg| > tails", lo.value,
                          hi.value);
    }

    if (r.pass && !((void)0, sc.stephens_hi < 10'000'000)) {
        if (std::abs(static_cast<double>(hi.value) - 0.5759599689) > 1e-8) {
            r.pass = false;
            r.detail = format("stephens_c(1e7) = %.12Lg outside 0.5759599689 +- 1e-8", hi.value);
        }
    }

    if (r.pass) {
        // Independent route: log-sum exponentiation.
        KahanSum<long double> logsum;
        for (uint64_t p : table.range_upto(sc.stephens_hi)) {
            const long double pl = static_cast<long double>(p);
            logsum.add(std::log1p(-pl / (pl * pl * pl - 1.0L)));
        }
        const long double via_logs = std::exp(logsum.value());
        if (std::abs(via_logs - hi.value) > 1e-12L) {
            r.pass = false;
            r.detail = format("product and log-sum paths differ by %.3Lg",
                              std::abs(via_logs - hi.value));
        }
    }

    if (r.pass) {
        const auto ratio = analytic::zeta_ratio();
        if (std::abs(static_cast<double>(ratio.value) - 1.9435964368) > 1e-9) {
            r.pass = false;
            r.detail = format("zeta_ratio = %.12Lg outside 1.9435964368 +- 1e-9", ratio.value);
        }
    }

    if (r.pass)
        r.detail = format("stephens_c brackets at %llu/%llu agree; values pinned",
                          sc.stephens_lo, sc.stephens_hi);
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_t1_trend(const Scale& sc, const PrimeTable& table, unsigned threads) {
    const auto start = Clock::now();
    CheckResult r{5, "average reciprocal order trend", true, "", 0.0};
    std::vector<double> residuals;
    std::string values;
    for (uint64_t x : sc.trend_xs) {
        const double xd = static_cast<double>(x);
        const uint64_t y =
            static_cast<uint64_t>(std::ceil(xd / (std::log(xd) * std::log(std::log(xd))))) * 4;
        experiments::RunOptions opt;
        opt.threads = threads;
        const auto report = experiments::run_t1(x, y, table, opt);
        residuals.push_back(report.residual);
        values += format(" x=%llu: residual=%.4f", x, report.residual);
        if (std::abs(report.residual) > 5.0) {
            r.pass = false;
            r.detail = format("|residual| > 5 at x=%llu (%.4f)", x, report.residual);
        }
    }
    if (r.pass && residuals.size() >= 3) {
        bool strictly_growing = true;
        for (std::size_t i = 1; i < residuals.size(); ++i)
            strictly_growing = strictly_growing &&
                               std::abs(residuals[i]) > std::abs(residuals[i - 1]);
        if (strictly_growing) {
            r.pass = false;
            r.detail = "|residual| grows monotonically with x:" + values;
        }
    }
    if (r.pass) r.detail = "band |residual| <= 5 holds:" + values;
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_t3_ratio(const Scale& sc, const PrimeTable& table, unsigned threads) {
    const auto start = Clock::now();
    CheckResult r{6, "average order ratio", true, "", 0.0};
    experiments::RunOptions opt;
    opt.threads = threads;
    const auto t3 = experiments::run_t3(sc.t3_x, sc.t3_y, table, opt);
    const double ratio = t3.empirical / t3.main_term;
    if (!(ratio >= 0.85 && ratio <= 1.15)) {
        r.pass = false;
        r.detail = format("empirical/(c Li(x^2)) = %.4f outside [0.85, 1.15]", ratio);
    } else {
        const auto c11 = experiments::run_c11(sc.t3_x, sc.t3_y, table, opt);
        const double ratio11 = c11.empirical / c11.main_term;
        if (!(ratio11 >= 0.85 && ratio11 <= 1.15)) {
            r.pass = false;
            r.detail = format("per-prime form ratio %.4f outside [0.85, 1.15]", ratio11);
        } else {
            r.detail = format("ratios %.4f (Li form), %.4f (cx/2 form)", ratio, ratio11);
        }
    }
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_t2_sanity(const Scale& sc, const PrimeTable& table, unsigned threads) {
    const auto start = Clock::now();
    CheckResult r{7, "threshold count sanity", true, "", 0.0};
    experiments::RunOptions opt;
    opt.threads = threads;
    const auto psi = experiments::PsiSpec::parse("log3");
    const auto report = experiments::run_t2(sc.t3_x, sc.t3_y, psi, table, opt);
    const double pi_x = report.main_term;
    const double xd = static_cast<double>(sc.t3_x);
    const double allowance = 3.0 * xd * std::log(xd) / psi.evaluate(xd);
    if (!(report.empirical <= pi_x)) {
        r.pass = false;
        r.detail = format("empirical %.2f exceeds pi(x) %.0f", report.empirical, pi_x);
    } else if (!(pi_x - report.empirical <= allowance)) {
        r.pass = false;
        r.detail = format("pi(x) - empirical = %.2f > 3 x log x / psi = %.2f",
                          pi_x - report.empirical, allowance);
    } else {
        r.detail = format("empirical %.2f within [pi(x) - %.2f, pi(x)]", report.empirical,
                          allowance);
    }
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_luca(const Scale& sc, const PrimeTable& table) {
    const auto start = Clock::now();
    CheckResult r{8, "average element order probe", true, "", 0.0};
    const auto probe = experiments::luca_average_probe(sc.luca_x, table);
    const double err = std::abs(probe.empirical - probe.c);
    if (err > 0.02) {
        r.pass = false;
        r.detail = format("|empirical - c| = %.5f > 0.02", err);
    } else {
        r.detail = format("empirical %.6f vs c %.6f (|diff| = %.5f)", probe.empirical, probe.c,
                          err);
    }
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_expsum_suite(const Scale& sc, const PrimeTable& table) {
    const auto start = Clock::now();
    CheckResult r{9, "exponential sum suite", true, "", 0.0};

    // Parseval over seeded random (p, d): sum_k |S_H(k)|^2 = p |H|.
    std::mt19937_64 rng(0x5eed);
    const auto small_primes = table.range_upto(10'000);
    for (int trial = 0; trial < sc.parseval_pairs && r.pass; ++trial) {
        const uint64_t p =
            small_primes[std::uniform_int_distribution<std::size_t>(1, small_primes.size() -
                                                                           1)(rng)];
        const Factorization f = arith::factor(p - 1, table);
        const auto divs = arith::divisors(f);
        std::vector<uint64_t> usable;
        for (uint64_t d : divs)
            if (p * d <= 4'000'000) usable.push_back(d);
        const uint64_t d =
            usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)];
        const auto subgroup = expsum::subgroup_elements(p, d, f);
        KahanSum<double> parseval;
        for (uint64_t k = 0; k < p; ++k)
            parseval.add(std::norm(expsum::exp_sum(p, subgroup, static_cast<int64_t>(k))));
        const double expected = static_cast<double>(p) * static_cast<double>(d);
        if (std::abs(parseval.value() - expected) > 1e-6 * expected) {
            r.pass = false;
            r.detail = format("Parseval off at p=%llu d=%llu: %.6f vs %.6f", p, d,
                              parseval.value(), expected);
        }
    }

    // Complete sums: the full group at p not dividing k gives exactly -1.
    if (r.pass) {
        for (uint64_t p : table.range_upto(2'000)) {
            if (p == 2) continue;
            const Factorization f = arith::factor(p - 1, table);
            const auto full = expsum::subgroup_elements(p, p - 1, f);
            for (uint64_t k : {uint64_t{1}, uint64_t{2}, p - 1}) {
                const auto s = expsum::exp_sum(p, full, static_cast<int64_t>(k % p));
                if (std::abs(s.real() + 1.0) > 1e-10 || std::abs(s.imag()) > 1e-10) {
                    r.pass = false;
                    r.detail = format("complete sum at p=%llu k=%llu is not -1", p, k);
                    break;
                }
            }
            if (!r.pass) break;
        }
    }

    // Discrepancy never exceeds its Erdos-Turan bound, for every subgroup
    // sequence and every M in [1, p-1].
    if (r.pass) {
        for (uint64_t p : table.range_upto(sc.et_prime_bound)) {
            if (p >= sc.et_prime_bound || p == 2) continue;
            const Factorization f = arith::factor(p - 1, table);
            for (uint64_t d : arith::divisors(f)) {
                const auto subgroup = expsum::subgroup_elements(p, d, f);
                std::vector<double> points;
                points.reserve(subgroup.size());
                for (uint64_t a : subgroup)
                    points.push_back(static_cast<double>(a) / static_cast<double>(p));
                const double disc = expsum::true_discrepancy(points);

                std::vector<double> weyl(p - 1);
                for (uint64_t m = 1; m < p; ++m)
                    weyl[m - 1] = std::abs(expsum::exp_sum(p, subgroup,
                                                           static_cast<int64_t>(m)));
                double prefix = 0.0;
                const double n_pts = static_cast<double>(points.size());
                for (uint64_t m = 1; m < p; ++m) {
                    prefix += weyl[m - 1] / static_cast<double>(m);
                    const double bound = n_pts / static_cast<double>(m + 1) + prefix;
                    if (disc > bound + 1e-9) {
                        r.pass = false;
                        r.detail = format("discrepancy %.6f > ET bound %.6f at p=%llu d=%llu M=%llu",
                                          disc, bound, p, d, m);
                        break;
                    }
                }
                // Spot-check against the public formula evaluation.
                const double via_fn = expsum::erdos_turan_bound(points.size(), p - 1, weyl);
                if (r.pass && disc > via_fn + 1e-9) {
                    r.pass = false;
                    r.detail = format("discrepancy exceeds erdos_turan_bound at p=%llu d=%llu", p,
                                      d);
                }
                if (!r.pass) break;
            }
            if (!r.pass) break;
        }
    }

    if (r.pass)
        r.detail = format("Parseval (%d pairs), complete sums, ET inequality below %llu",
                          sc.parseval_pairs, sc.et_prime_bound);
    r.seconds = elapsed(start);
    return r;
}

CheckResult criterion_counting_exactness(const Scale& sc, const PrimeTable& table) {
    const auto start = Clock::now();
    CheckResult r{10, "full-period counting exactness", true, "", 0.0};
    uint64_t probes = 0;
    for (uint64_t p : table.range_upto(sc.counting_bound)) {
        if (p >= sc.counting_bound) break;
        const Factorization f = arith::factor(p - 1, table);
        for (uint64_t d : arith::divisors(f)) {
            const auto probe = expsum::counting_probe(p, d, p, f);
            if (probe.error != 0.0 || probe.exact != d) {
                r.pass = false;
                r.detail = format("error nonzero at p=%llu d=%llu", p, d);
                break;
            }
            ++probes;
        }
        if (!r.pass) break;
    }
    if (r.pass) r.detail = format("error identically 0 for %llu (p, d) probes at y=p", probes);
    r.seconds = elapsed(start);
    return r;
}

}  // namespace

std::vector<CheckResult> run_acceptance(const VerifyOptions& options) {
    const Scale sc = options.quick ? quick_scale() : full_scale();
    arith::SieveOptions sieve_opts;
    sieve_opts.threads = options.threads;
    const PrimeTable table = arith::sieve_primes(sc.table_limit, sieve_opts);

    std::vector<CheckResult> results;
    results.push_back(criterion_identities(sc, table));
    results.push_back(criterion_tau_identity(sc, table));
    results.push_back(criterion_rectangle_oracle(sc, table, options.threads));
    results.push_back(criterion_constants(sc, table));
    results.push_back(criterion_t1_trend(sc, table, options.threads));
    results.push_back(criterion_t3_ratio(sc, table, options.threads));
    results.push_back(criterion_t2_sanity(sc, table, options.threads));
    results.push_back(criterion_luca(sc, table));
    results.push_back(criterion_expsum_suite(sc, table));
    results.push_back(criterion_counting_exactness(sc, table));
    return results;
}

}  // namespace ntos::verify
