#include "ntos/experiments.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "ntos/analytic.hpp"
#include "ntos/errors.hpp"
#include "ntos/kahan.hpp"

namespace ntos::experiments {

double PsiSpec::evaluate(double x) const {
    const double lx = std::log(x);
    switch (preset) {
        case Preset::log2loglog:
            // Clamp the inner logarithm at e: equal to log^2 x log log x for
            // x >= e^e, positive and increasing everywhere on [2, inf).
            return lx * lx * std::log(std::max(lx, std::exp(1.0)));
        case Preset::log3:
            return lx * lx * lx;
        case Preset::power:
            return std::pow(x, exponent);
    }
    return 0.0;
}

std::string PsiSpec::to_string() const {
    switch (preset) {
        case Preset::log2loglog:
            return "log2loglog";
        case Preset::log3:
            return "log3";
        case Preset::power: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "power:%g", exponent);
            return buf;
        }
    }
    return "";
}

PsiSpec PsiSpec::parse(const std::string& text) {
    PsiSpec spec;
    if (text == "log2loglog") {
        spec.preset = Preset::log2loglog;
    } else if (text == "log3") {
        spec.preset = Preset::log3;
    } else if (text.rfind("power:", 0) == 0) {
        spec.preset = Preset::power;
        spec.exponent = std::stod(text.substr(6));
        if (!(spec.exponent > 0.0 && spec.exponent < 1.0))
            throw precondition_error("PsiSpec: power exponent must lie in (0, 1)");
    } else {
        throw precondition_error("PsiSpec: unknown preset '" + text + "'");
    }
    return spec;
}

std::string to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["theorem"] = r.theorem;
    j["x"] = r.x;
    j["y"] = r.y;
    if (r.psi_spec)
        j["psi_spec"] = *r.psi_spec;
    else
        j["psi_spec"] = nullptr;
    j["empirical"] = r.empirical;
    j["main_term"] = r.main_term;
    j["secondary_term"] = r.secondary_term;
    j["residual"] = r.residual;
    if (r.decomposition.empty()) {
        j["decomposition"] = nullptr;
    } else {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& [label, value] : r.decomposition)
            parts.push_back({{"label", label}, {"value", value}});
        j["decomposition"] = parts;
    }
    return j.dump(2);
}

std::string to_csv(const ExperimentReport& r) {
    std::string out =
        "theorem,x,y,psi_spec,empirical,main_term,secondary_term,residual,decomposition\n";
    char buf[512];
    std::string decomp;
    for (const auto& [label, value] : r.decomposition) {
        std::snprintf(buf, sizeof buf, "%s=%.17g", label.c_str(), value);
        if (!decomp.empty()) decomp += ";";
        decomp += buf;
    }
    std::snprintf(buf, sizeof buf, "%s,%llu,%llu,%s,%.17g,%.17g,%.17g,%.17g,%s\n",
                  r.theorem.c_str(), static_cast<unsigned long long>(r.x),
                  static_cast<unsigned long long>(r.y),
                  r.psi_spec ? r.psi_spec->c_str() : "", r.empirical, r.main_term,
                  r.secondary_term, r.residual, decomp.c_str());
    out += buf;
    return out;
}

namespace {

void check_bounds(uint64_t x, uint64_t y, const PrimeTable& table) {
    if (y < 2 || y > x)
        throw precondition_error("experiment: bounds must satisfy 2 <= y <= x");
    if (table.limit < x) throw precondition_error("experiment: table.limit < x");
}

order::RectangleOptions rect_options(const RunOptions& options, double threshold,
                                     double decompose_cut) {
    order::RectangleOptions ro;
    ro.threshold = threshold;
    ro.decompose_cut = decompose_cut;
    ro.threads = options.threads;
    ro.work_budget = options.work_budget;
    return ro;
}

}  // namespace

ExperimentReport run_t1(uint64_t x, uint64_t y, const PrimeTable& table,
                        const RunOptions& options) {
    check_bounds(x, y, table);
    const double cut = options.decompose ? std::pow(static_cast<double>(x),
                                                    options.decompose_exponent)
                                         : 0.0;
    const auto summary =
        order::rectangle_summary(x, y, rect_options(options, 0.0, cut), table);

    ExperimentReport r;
    r.theorem = "T1";
    r.x = x;
    r.y = y;
    r.empirical = summary.total_recip() / static_cast<double>(y);
    r.main_term = std::log(static_cast<double>(x));
    const auto c = analytic::loglog_coefficient(
        table, 1'000'000, std::min<uint64_t>(1'000'000, table.limit));
    r.secondary_term =
        static_cast<double>(c.value) * std::log(std::log(static_cast<double>(x)));
    r.residual = r.empirical - r.main_term - r.secondary_term;
    if (options.decompose) {
        KahanSum<double> small, large;
        for (const auto& st : summary.per_prime) {
            small.add(st.recip_small);
            large.add(st.recip_large);
        }
        char label[64];
        std::snprintf(label, sizeof label, "order<x^%g", options.decompose_exponent);
        r.decomposition.emplace_back(label, small.value() / static_cast<double>(y));
        std::snprintf(label, sizeof label, "order>=x^%g", options.decompose_exponent);
        r.decomposition.emplace_back(label, large.value() / static_cast<double>(y));
    }
    return r;
}

ExperimentReport run_t2(uint64_t x, uint64_t y, const PsiSpec& psi, const PrimeTable& table,
                        const RunOptions& options) {
    check_bounds(x, y, table);
    const double threshold = static_cast<double>(x) / psi.evaluate(static_cast<double>(x));
    const auto summary =
        order::rectangle_summary(x, y, rect_options(options, threshold, 0.0), table);

    ExperimentReport r;
    r.theorem = "T2";
    r.x = x;
    r.y = y;
    r.psi_spec = psi.to_string();
    r.empirical = static_cast<double>(static_cast<long double>(summary.total_count_above()) /
                                      static_cast<long double>(y));
    r.main_term = static_cast<double>(table.count_upto(x));
    r.secondary_term = 0.0;
    r.residual = r.empirical - r.main_term - r.secondary_term;
    const double lx = std::log(static_cast<double>(x));
    r.decomposition.emplace_back("order_threshold", threshold);
    r.decomposition.emplace_back("effective_error_bound",
                                 static_cast<double>(x) * lx / psi.evaluate(static_cast<double>(x)));
    r.decomposition.emplace_back("unmodeled_residual", r.residual);
    return r;
}

namespace {

// Shared by run_t3 and run_c11: the exact order total over the rectangle.
arith::u128 order_total(uint64_t x, uint64_t y, const PrimeTable& table,
                        const RunOptions& options) {
    const auto summary =
        order::rectangle_summary(x, y, rect_options(options, 0.0, 0.0), table);
    return summary.total_order_sum();
}

}  // namespace

ExperimentReport run_t3(uint64_t x, uint64_t y, const PrimeTable& table,
                        const RunOptions& options) {
    check_bounds(x, y, table);
    const arith::u128 total = order_total(x, y, table, options);

    ExperimentReport r;
    r.theorem = "T3";
    r.x = x;
    r.y = y;
    r.empirical = static_cast<double>(static_cast<long double>(total) /
                                      static_cast<long double>(y));
    const auto c = analytic::stephens_c(table, std::min<uint64_t>(10'000'000, table.limit));
    const double li_x2 = analytic::log_integral(static_cast<double>(x) * static_cast<double>(x));
    r.main_term = static_cast<double>(c.value) * li_x2;
    r.secondary_term = 0.0;
    r.residual = r.empirical - r.main_term - r.secondary_term;
    r.decomposition.emplace_back("stephens_c", static_cast<double>(c.value));
    r.decomposition.emplace_back("li_x_squared", li_x2);
    r.decomposition.emplace_back("ratio_to_main", r.empirical / r.main_term);
    return r;
}

ExperimentReport run_c11(uint64_t x, uint64_t y, const PrimeTable& table,
                         const RunOptions& options) {
    check_bounds(x, y, table);
    const arith::u128 total = order_total(x, y, table, options);
    const double pi_x = static_cast<double>(table.count_upto(x));

    ExperimentReport r;
    r.theorem = "C1.1";
    r.x = x;
    r.y = y;
    r.empirical = static_cast<double>(static_cast<long double>(total) /
                                      static_cast<long double>(y) / pi_x);
    const auto c = analytic::stephens_c(table, std::min<uint64_t>(10'000'000, table.limit));
    r.main_term = 0.5 * static_cast<double>(c.value) * static_cast<double>(x);
    r.secondary_term = 0.0;
    r.residual = r.empirical - r.main_term - r.secondary_term;
    r.decomposition.emplace_back("ratio_to_main", r.empirical / r.main_term);
    return r;
}

LucaProbe luca_average_probe(uint64_t x, const PrimeTable& table) {
    if (table.limit < x) throw precondition_error("luca_average_probe: table.limit < x");
    KahanSum<long double> sum;
    uint64_t count = 0;
    for (uint64_t p : table.range_upto(x)) {
        if (p >= x) break;  // strictly p < x
        const auto fact = arith::factor(p - 1, table);
        const order::Rational a = order::alpha(fact);
        sum.add(a.to_long_double() / static_cast<long double>(p - 1));
        ++count;
    }
    LucaProbe probe;
    probe.empirical =
        count ? static_cast<double>(sum.value() / static_cast<long double>(count)) : 0.0;
    probe.c = static_cast<double>(
        analytic::stephens_c(table, std::min<uint64_t>(10'000'000, table.limit)).value);
    return probe;
}

HarmonicApProbe harmonic_ap_probe(uint64_t x, uint64_t d, const PrimeTable& table) {
    if (table.limit < x) throw precondition_error("harmonic_ap_probe: table.limit < x");
    if (d < 1) throw precondition_error("harmonic_ap_probe: d must be >= 1");
    KahanSum<long double> sum;
    for (uint64_t p : table.range_upto(x)) {
        if (p >= x) break;
        if ((p - 1) % d == 0) sum.add(1.0L / static_cast<long double>(p));
    }
    HarmonicApProbe probe;
    probe.sum = static_cast<double>(sum.value());
    const double phi_d = static_cast<double>(arith::euler_phi(arith::factor(d, table)));
    probe.predicted = std::log(std::log(static_cast<double>(x))) / phi_d;
    return probe;
}

}  // namespace ntos::experiments
