#include "ntos/order.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "ntos/errors.hpp"
#include "ntos/kahan.hpp"

namespace ntos::order {

using arith::MontgomeryContext;
using arith::mod_pow;

uint64_t multiplicative_order(uint64_t a, uint64_t p, const Factorization& fact_pm1) {
    a %= p;
    if (a == 0) throw precondition_error("multiplicative_order: undefined for p | a");
    if (p == 2) return 1;

    // Peel each prime power q^e || p-1: the q-part of the order is the
    // exponent needed to bring a^((p-1)/q^e) to 1 by repeated q-th powers.
    const MontgomeryContext mont(p);
    const uint64_t am = mont.to_mont(a);
    const uint64_t one = mont.one();
    uint64_t ord = 1;
    for (const auto& [q, e] : fact_pm1.factors) {
        uint64_t qe = 1;
        for (uint32_t i = 0; i < e; ++i) qe *= q;
        uint64_t b = mont.pow(am, (p - 1) / qe);
        while (b != one) {
            b = mont.pow(b, q);
            ord *= q;
        }
    }
    return ord;
}

uint64_t find_generator(uint64_t p, const Factorization& fact_pm1) {
    if (p == 2) return 1;
    const MontgomeryContext mont(p);
    const uint64_t one = mont.one();
    for (uint64_t g = 2; g < p; ++g) {
        const uint64_t gm = mont.to_mont(g);
        bool ok = true;
        for (const auto& pf : fact_pm1.factors) {
            if (mont.pow(gm, (p - 1) / pf.prime) == one) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw precondition_error("find_generator: no generator found (p not prime?)");
}

OrderSpectrum order_spectrum(uint64_t p, const Factorization& fact_pm1,
                             uint64_t enumerate_bound) {
    OrderSpectrum spec;
    spec.p = p;
    if (p <= enumerate_bound) {
        for (uint64_t a = 1; a < p; ++a) ++spec.entries[multiplicative_order(a, p, fact_pm1)];
    } else {
        for (const auto& [d, phi] : arith::divisors_with_phi(fact_pm1)) spec.entries[d] = phi;
    }
    return spec;
}

namespace {

// The d roots of a^d == 1 (mod p): powers of g^((p-1)/d).
std::vector<uint64_t> roots_of_unity(uint64_t p, uint64_t d, const Factorization& fact_pm1) {
    std::vector<uint64_t> roots;
    roots.reserve(d);
    if (p == 2 || d == 1) {
        roots.push_back(1);
        return roots;
    }
    const uint64_t g = find_generator(p, fact_pm1);
    const uint64_t h = mod_pow(static_cast<int64_t>(g), (p - 1) / d, p);
    uint64_t cur = 1;
    for (uint64_t j = 0; j < d; ++j) {
        roots.push_back(cur);
        cur = arith::mod_mul(cur, h, p);
    }
    return roots;
}

}  // namespace

uint64_t count_roots(uint64_t p, uint64_t d, uint64_t y, const Factorization& fact_pm1) {
    if (d == 0 || (p - 1) % d != 0)
        throw precondition_error("count_roots: d must divide p-1");
    if (y < 1) throw precondition_error("count_roots: y must be >= 1");
    uint64_t count = 0;
    for (uint64_t s : roots_of_unity(p, d, fact_pm1)) {
        // lifts of s below y: s, s+p, s+2p, ...
        if (s < y) count += 1 + (y - 1 - s) / p;
    }
    return count;
}

u128 divisor_order_sum(const Factorization& fact) {
    u128 sum = 0;
    for (const auto& [d, phi] : arith::divisors_with_phi(fact))
        sum += static_cast<u128>(d) * phi;
    return sum;
}

Rational alpha(const Factorization& fact) {
    Rational r;
    r.num = divisor_order_sum(fact);
    r.den = fact.n;
    const u128 g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

void order_table_upto(uint64_t p, const Factorization& fact_pm1, uint64_t cap,
                      std::vector<uint32_t>& ords) {
    if (p == 2) {
        if (cap >= 1) ords[1] = 1;
        return;
    }
    const uint64_t g = find_generator(p, fact_pm1);
    const MontgomeryContext mont(p);
    const uint64_t gm = mont.to_mont(g);
    const uint64_t pm1 = p - 1;
    // Walk g^j for j = 0..p-2; ord(g^j) = (p-1)/gcd(j, p-1). Multiplying a
    // plain-domain value by a Montgomery-domain constant keeps the walk in
    // the plain domain with a single reduction per step, and the gcd is only
    // evaluated for elements that land at or below the cap.
    uint64_t cur = 1;
    for (uint64_t j = 0; j < pm1; ++j) {
        if (j) cur = mont.mul(cur, gm);
        if (cur <= cap)
            ords[cur] = static_cast<uint32_t>(pm1 / arith::gcd_u64(j, pm1));
    }
}

namespace {

struct Scratch {
    std::vector<uint32_t> ords;
    std::vector<double> recip;
};

PrimeOrderStats accumulate_prime(uint64_t p, uint64_t y, const RectangleOptions& opt,
                                 const PrimeTable& table, Scratch& scratch) {
    PrimeOrderStats st;
    st.p = p;
    const uint64_t cap = std::min(p - 1, y);

    if (scratch.ords.size() < cap + 1) scratch.ords.resize(cap + 1);
    if (scratch.recip.size() < cap + 1) scratch.recip.resize(cap + 1);
    const Factorization pm1 = arith::factor(p - 1, table);

    if (p <= opt.sweep_factor * y || p - 1 <= cap) {
        order_table_upto(p, pm1, cap, scratch.ords);
    } else {
        // Sparse regime: per-residue order computations for a <= y only.
        for (uint64_t a = 1; a <= cap; ++a)
            scratch.ords[a] = static_cast<uint32_t>(multiplicative_order(a, p, pm1));
    }

    // Replay of the naive a-ascending accumulation; the reciprocal table
    // keeps the inner loop divide-free.
    const uint32_t* ords = scratch.ords.data();
    double* recip = scratch.recip.data();
    for (uint64_t r = 1; r <= cap; ++r) recip[r] = 1.0 / ords[r];

    KahanSum<double> rs, rs_small, rs_large;
    const bool split = opt.decompose_cut > 0.0;
    u128 osum = 0;
    uint64_t cnt = 0;
    uint64_t r = 0;
    for (uint64_t a = 1; a <= y; ++a) {
        if (++r == p) {
            r = 0;
            continue;  // p | a: order undefined, pair skipped
        }
        const uint32_t l = ords[r];
        rs.add(recip[r]);
        if (static_cast<double>(l) > opt.threshold) ++cnt;
        osum += l;
        if (split) {
            if (static_cast<double>(l) < opt.decompose_cut)
                rs_small.add(recip[r]);
            else
                rs_large.add(recip[r]);
        }
    }
    st.recip_sum = rs.value();
    st.count_above = cnt;
    st.order_sum = osum;
    st.recip_small = rs_small.value();
    st.recip_large = rs_large.value();
    return st;
}

}  // namespace

double OrderRectangleSummary::total_recip() const {
    KahanSum<double> total;
    for (const auto& st : per_prime) total.add(st.recip_sum);
    return total.value();
}

u128 OrderRectangleSummary::total_count_above() const {
    u128 total = 0;
    for (const auto& st : per_prime) total += st.count_above;
    return total;
}

u128 OrderRectangleSummary::total_order_sum() const {
    u128 total = 0;
    for (const auto& st : per_prime) total += st.order_sum;
    return total;
}

OrderRectangleSummary rectangle_summary(uint64_t x, uint64_t y, const RectangleOptions& options,
                                        const PrimeTable& table) {
    if (y < 1) throw precondition_error("rectangle_summary: y must be >= 1");
    if (table.limit < x) throw precondition_error("rectangle_summary: table.limit < x");
    if (static_cast<u128>(x) * y > options.work_budget)
        throw resource_error("rectangle_summary: x*y exceeds work budget");

    const auto primes = table.range_upto(x);

    OrderRectangleSummary summary;
    summary.x = x;
    summary.y = y;
    summary.threshold = options.threshold;
    summary.decompose_cut = options.decompose_cut;
    summary.per_prime.resize(primes.size());

    unsigned workers = options.threads == 0
                           ? std::max(1u, std::thread::hardware_concurrency())
                           : options.threads;
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(primes.size(), 1)));

    if (workers <= 1) {
        Scratch scratch;
        for (std::size_t i = 0; i < primes.size(); ++i)
            summary.per_prime[i] = accumulate_prime(primes[i], y, options, table, scratch);
        return summary;
    }

    // Dynamic chunks over the prime index; each slot is written by exactly
    // one worker, so the merged result is independent of scheduling.
    std::atomic<std::size_t> next{0};
    const std::size_t chunk = 8;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            Scratch scratch;
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= primes.size()) break;
                const std::size_t end = std::min(primes.size(), begin + chunk);
                for (std::size_t i = begin; i < end; ++i)
                    summary.per_prime[i] = accumulate_prime(primes[i], y, options, table, scratch);
            }
        });
    }
    for (auto& t : pool) t.join();
    return summary;
}

}  // namespace ntos::order
