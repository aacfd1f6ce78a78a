#include "ntos/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ntos/errors.hpp"
#include "ntos/kahan.hpp"

namespace ntos::analytic {

namespace mp = boost::multiprecision;

ConstantValue zeta2() {
    const long double pi = std::numbers::pi_v<long double>;
    return {pi * pi / 6.0L, 1e-18L, "closed form pi^2/6"};
}

ConstantValue zeta6() {
    const long double pi = std::numbers::pi_v<long double>;
    const long double pi2 = pi * pi;
    return {pi2 * pi2 * pi2 / 945.0L, 1e-18L, "closed form pi^6/945"};
}

ConstantValue zeta3() {
    // Apery-accelerated alternating series
    //   zeta(3) = (5/2) sum_{n>=1} (-1)^(n-1) / (n^3 binom(2n,n)),
    // terms decrease, so the first omitted term bounds the tail.
    long double binom = 2.0L;  // binom(2n, n) at n = 1
    long double sum = 0.0L;
    long double term = 0.0L;
    int n = 1;
    for (; n <= 64; ++n) {
        term = 1.0L / (static_cast<long double>(n) * n * n * binom);
        sum += (n % 2 ? term : -term);
        if (term < 1e-24L) break;
        binom = binom * 2.0L * (2 * n + 1) / (n + 1);
    }
    return {2.5L * sum, 2.5L * term, "alternating series, " + std::to_string(n) + " terms"};
}

ConstantValue zeta_ratio() {
    const ConstantValue z2 = zeta2(), z3 = zeta3(), z6 = zeta6();
    const long double value = z2.value * z3.value / z6.value;
    // Relative tails add for products and quotients.
    const long double rel =
        z2.tail_bound / z2.value + z3.tail_bound / z3.value + z6.tail_bound / z6.value;
    return {value, value * rel + 1e-18L, "zeta(2) zeta(3) / zeta(6)"};
}

namespace {

// int_T^inf dt / (t^2 - t + 1), closed form.
long double integral_inv_quadratic(long double T) {
    const long double s = std::sqrt(3.0L);
    return (2.0L / s) * (std::numbers::pi_v<long double> / 2.0L -
                         std::atan((2.0L * T - 1.0L) / s));
}

}  // namespace

ConstantValue prime_log_sum(const PrimeTable& table, uint64_t truncation) {
    if (truncation < 2) throw precondition_error("prime_log_sum: truncation must be >= 2");
    if (table.limit < truncation)
        throw precondition_error("prime_log_sum: table does not reach truncation");

    KahanSum<long double> sum;
    for (uint64_t p : table.range_upto(truncation)) {
        const long double pl = static_cast<long double>(p);
        sum.add(std::log(pl) / (pl * pl - pl + 1.0L));
    }

    // Prime tail by partial summation against theta(t), with the
    // Rosser-Schoenfeld bounds theta(t) < 1.01624 t (all t > 0) and
    // theta(t) > 0.84 t (t >= 101):
    //   sum_{p>T} log p / (p^2-p+1) <= (c2 - c1) T g(T) + c2 int_T^inf g,
    // g(t) = 1/(t^2-t+1).
    const long double T = static_cast<long double>(truncation);
    const long double c2 = 1.01624L;
    const long double c1 = truncation >= 101 ? 0.84L : 0.0L;
    const long double gT = 1.0L / (T * T - T + 1.0L);
    const long double tail = (c2 - c1) * T * gT + c2 * integral_inv_quadratic(T);

    return {sum.value(), tail, "primes <= " + std::to_string(truncation)};
}

ConstantValue c1_of_k(const Factorization& fact) {
    for (const auto& pf : fact.factors)
        if (pf.exponent >= 2)
            throw precondition_error("c1_of_k: k must be squarefree");
    const ConstantValue ratio = zeta_ratio();
    long double prod = 1.0L;
    for (const auto& pf : fact.factors) {
        const long double p = static_cast<long double>(pf.prime);
        prod *= 1.0L + (p - 1.0L) / (p * p - p + 1.0L);
    }
    return {ratio.value * prod, ratio.tail_bound * prod,
            "zeta_ratio times local factors at k=" + std::to_string(fact.n)};
}

ConstantValue c2_of_k(const Factorization& fact, const ConstantValue& prime_sum) {
    const ConstantValue c1 = c1_of_k(fact);
    long double local = 0.0L;
    for (const auto& pf : fact.factors) {
        const long double p = static_cast<long double>(pf.prime);
        local += (p - 1.0L) * p * std::log(p) / (p * p - p + 1.0L);
    }
    const long double inner = kEulerGamma - prime_sum.value - local;
    const long double inner_tail = prime_sum.tail_bound;
    // Interval product rule: tail(ab) <= |a| tail(b) + |b| tail(a) + tail(a) tail(b).
    const long double tail = std::abs(c1.value) * inner_tail +
                             std::abs(inner) * c1.tail_bound + c1.tail_bound * inner_tail;
    return {c1.value * inner, tail, "C1(k) (gamma - S - local), k=" + std::to_string(fact.n)};
}

ConstantValue stephens_c(const PrimeTable& table, uint64_t truncation) {
    if (truncation < 2) throw precondition_error("stephens_c: truncation must be >= 2");
    if (table.limit < truncation)
        throw precondition_error("stephens_c: table does not reach truncation");

    long double prod = 1.0L;
    for (uint64_t p : table.range_upto(truncation)) {
        const long double pl = static_cast<long double>(p);
        prod *= 1.0L - pl / (pl * pl * pl - 1.0L);
    }

    // Truncated product overshoots (all omitted factors are < 1):
    //   c = prod_T * exp(-L),  L = sum_{p>T} -log(1 - u_p),  u_p = p/(p^3-1).
    // -log(1-u) <= u/(1-u) and u_p <= cT / p^2 with cT = 1/(1 - T^-3), so
    //   L <= kappa sum_{p>T} 1/p^2,  kappa = cT / (1 - u_max).
    // sum_{p>T} 1/p^2 <= 2.51012 / (T log T) for T >= 11 by partial summation
    // against pi(t) < 1.25506 t/log t; below that the full integer sum bound
    // 1/T is used.
    const long double T = static_cast<long double>(truncation);
    const long double cT = 1.0L / (1.0L - 1.0L / (T * T * T));
    const long double u_max = cT / (T * T);
    const long double kappa = cT / (1.0L - u_max);
    const long double sum_inv_sq = truncation >= 11 ? 2.51012L / (T * std::log(T)) : 1.0L / T;
    const long double L = kappa * sum_inv_sq;
    const long double tail = prod * (L < 50.0L ? -std::expm1(-L) : 1.0L);

    return {prod, tail, "primes <= " + std::to_string(truncation)};
}

ConstantValue loglog_coefficient(const PrimeTable& table, uint64_t k_truncation,
                                 uint64_t prime_truncation) {
    const uint64_t T = std::min<uint64_t>(prime_truncation, table.limit);
    const ConstantValue S = prime_log_sum(table, T);
    const ConstantValue R = zeta_ratio();
    const uint64_t K = k_truncation;

    // Smallest-prime-factor sieve drives the k-loop.
    std::vector<uint32_t> spf(K + 1, 0);
    for (uint64_t i = 2; i <= K; ++i) {
        if (spf[i] != 0) continue;
        for (uint64_t j = i; j <= K; j += i)
            if (spf[j] == 0) spf[j] = static_cast<uint32_t>(i);
    }

    // ksum_raw = sum_k (mu(k)/k^2) A(k) (log k - 2 B(k)), the zeta ratio
    // factored out; only squarefree k contribute.
    KahanSum<long double> ksum_raw;
    for (uint64_t k = 2; k <= K; ++k) {
        uint64_t m = k;
        long double A = 1.0L, B = 0.0L;
        int sign = 1;
        bool squarefree = true;
        while (m > 1) {
            const uint64_t q = spf[m];
            m /= q;
            if (m % q == 0) {
                squarefree = false;
                break;
            }
            const long double ql = static_cast<long double>(q);
            const long double denom = ql * ql - ql + 1.0L;
            A *= 1.0L + (ql - 1.0L) / denom;
            B += (ql - 1.0L) * ql * std::log(ql) / denom;
            sign = -sign;
        }
        if (!squarefree) continue;
        const long double kl = static_cast<long double>(k);
        ksum_raw.add(sign * A * (std::log(kl) - 2.0L * B) / (kl * kl));
    }

    const long double value = 2.0L * kEulerGamma - 2.0L * S.value + R.value * ksum_raw.value();

    // |summand| <= (sigma(k)/k) log k / k^2 and sigma(k)/k <= e^gamma lnln k
    // + 0.6483/lnln k (Robin, unconditional, k >= 3); lnln k <= ln k then
    // gives the integral-comparison tail below.
    const long double lnK = std::log(static_cast<long double>(K));
    const long double lnlnK = std::log(lnK);
    const long double e_gamma = std::exp(kEulerGamma);
    const long double ktail_raw =
        e_gamma * (lnK * lnK + 2.0L * lnK + 2.0L) / static_cast<long double>(K) +
        (0.6483L / lnlnK) * (lnK + 1.0L) / static_cast<long double>(K);
    const long double tail = 2.0L * S.tail_bound + R.tail_bound * std::abs(ksum_raw.value()) +
                             R.value * ktail_raw;

    return {value, tail,
            "k <= " + std::to_string(K) + ", primes <= " + std::to_string(T)};
}

namespace {

// Adaptive Simpson on f over [a, b].
template <class F>
long double adaptive_simpson(F f, long double a, long double b, long double fa, long double fm,
                             long double fb, long double whole, long double eps, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
    const long double flm = f(lm), frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const long double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0L * eps)
        return left + right + delta / 15.0L;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5L * eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5L * eps, depth - 1);
}

}  // namespace

double log_integral(double x) {
    if (!(x > 2.0)) throw domain_error("log_integral: x must be > 2");
    // Substituting t = e^u turns int_2^x dt/log t into int_{log 2}^{log x}
    // e^u/u du, which adaptive Simpson handles without clustering.
    const auto f = [](long double u) { return std::exp(u) / u; };
    const long double a = std::log(2.0L);
    const long double b = std::log(static_cast<long double>(x));
    const long double fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    const long double eps = std::abs(whole) * 1e-12L + 1e-15L;
    return static_cast<double>(adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 48));
}

std::pair<BigRational, BigRational> tau_identity_check(uint64_t x, const PrimeTable& table) {
    if (x < 2) throw precondition_error("tau_identity_check: x must be >= 2");
    if (x > 200'000) throw resource_error("tau_identity_check: x above configured bound");
    if (table.limit < x) throw precondition_error("tau_identity_check: table.limit < x");

    const auto primes = table.range_upto(x);

    // Per-divisor prime counts and tau-weighted counts in one pass over the
    // divisor lattices of p-1 (every divisor of p-1 is < x automatically).
    std::vector<uint64_t> ap_count(x, 0);   // ap_count[d] = pi(x; d, 1)
    std::vector<uint64_t> tau_count(x, 0);  // tau_count[k] = sum_{p=1(k)} tau((p-1)/k)
    for (uint64_t p : primes) {
        const Factorization f = arith::factor(p - 1, table);
        // Enumerate divisors k | p-1 along with tau((p-1)/k).
        std::vector<std::pair<uint64_t, uint64_t>> divs{{1, tau(f)}};
        for (const auto& [q, e] : f.factors) {
            const std::size_t base_count = divs.size();
            uint64_t qk = 1;
            for (uint32_t i = 1; i <= e; ++i) {
                qk *= q;
                for (std::size_t j = 0; j < base_count; ++j) {
                    // k gains q^i; tau of the complement loses i slots.
                    const uint64_t k = divs[j].first * qk;
                    const uint64_t t = divs[j].second / (e + 1) * (e + 1 - i);
                    divs.push_back({k, t});
                }
            }
        }
        for (const auto& [k, t] : divs) {
            ap_count[k] += 1;
            tau_count[k] += t;
        }
    }

    // phi and mu sieves up to x-1.
    std::vector<uint64_t> phi(x);
    for (uint64_t i = 0; i < x; ++i) phi[i] = i;
    for (uint64_t i = 2; i < x; ++i)
        if (phi[i] == i)  // i prime
            for (uint64_t j = i; j < x; j += i) phi[j] -= phi[j] / i;
    std::vector<int8_t> mu(x, 1);
    {
        std::vector<uint8_t> is_comp(x, 0);
        std::vector<uint64_t> pr;
        for (uint64_t i = 2; i < x; ++i) {
            if (!is_comp[i]) {
                pr.push_back(i);
                mu[i] = -1;
            }
            for (uint64_t p : pr) {
                if (i * p >= x) break;
                is_comp[i * p] = 1;
                if (i % p == 0) {
                    mu[i * p] = 0;
                    break;
                }
                mu[i * p] = static_cast<int8_t>(-mu[i]);
            }
        }
    }

    // Common denominator lcm(1..x-1); both sides become integer sums.
    mp::cpp_int lcm = 1;
    for (uint64_t d = 2; d < x; ++d) {
        const mp::cpp_int g = mp::gcd(lcm, mp::cpp_int(d));
        lcm = lcm / g * d;
    }

    mp::cpp_int lhs = 0;
    for (uint64_t d = 1; d < x; ++d) {
        if (ap_count[d] == 0) continue;
        lhs += (lcm / d) * (phi[d] * ap_count[d]);
    }
    mp::cpp_int rhs = 0;
    for (uint64_t k = 1; k < x; ++k) {
        if (mu[k] == 0 || tau_count[k] == 0) continue;
        const mp::cpp_int term = (lcm / k) * tau_count[k];
        if (mu[k] > 0)
            rhs += term;
        else
            rhs -= term;
    }

    return {BigRational(lhs, lcm), BigRational(rhs, lcm)};
}

}  // namespace ntos::analytic
