#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ntos/arith.hpp"
#include "ntos/order.hpp"

namespace ntos::experiments {

using arith::PrimeTable;

// Order-threshold shaping function presets for the threshold-count
// experiment. The log2loglog preset clamps its inner logarithm at e so the
// evaluated function stays positive and increasing on all of [2, inf).
struct PsiSpec {
    enum class Preset { log2loglog, log3, power };
    Preset preset = Preset::log3;
    double exponent = 0.5;  // only for Preset::power

    double evaluate(double x) const;
    std::string to_string() const;
    static PsiSpec parse(const std::string& text);  // "log2loglog" | "log3" | "power:0.4"
};

struct ExperimentReport {
    std::string theorem;  // "T1" | "T2" | "T3" | "C1.1"
    uint64_t x = 0;
    uint64_t y = 0;
    std::optional<std::string> psi_spec;
    double empirical = 0.0;
    double main_term = 0.0;
    double secondary_term = 0.0;
    double residual = 0.0;  // empirical - main_term - secondary_term, exactly as stored
    std::vector<std::pair<std::string, double>> decomposition;
};

// JSON object mirroring the report field-for-field with snake_case keys.
std::string to_json(const ExperimentReport& report);
// Single CSV row (plus header) with 17-significant-digit floats.
std::string to_csv(const ExperimentReport& report);

struct RunOptions {
    unsigned threads = 0;  // 0 = hardware
    bool decompose = false;
    double decompose_exponent = 0.25;  // cut orders at x^this for the T1 split
    arith::u128 work_budget = static_cast<arith::u128>(1'000'000'000) * 1'000;
};

// Average reciprocal order: empirical (1/y) sum_{a<=y} sum_{p<=x} 1/ord
// against log x + C log log x.
ExperimentReport run_t1(uint64_t x, uint64_t y, const PrimeTable& table,
                        const RunOptions& options = {});

// Threshold count: empirical (1/y) #{(a,p) : ord > x/psi(x)} against pi(x).
ExperimentReport run_t2(uint64_t x, uint64_t y, const PsiSpec& psi, const PrimeTable& table,
                        const RunOptions& options = {});

// Average order: empirical (1/y) sum ord against c Li(x^2).
ExperimentReport run_t3(uint64_t x, uint64_t y, const PrimeTable& table,
                        const RunOptions& options = {});

// Per-prime normalization of the average order: empirical/pi(x) against c x / 2.
ExperimentReport run_c11(uint64_t x, uint64_t y, const PrimeTable& table,
                         const RunOptions& options = {});

struct LucaProbe {
    double empirical = 0.0;  // (1/pi(x)) sum_{p<x} alpha(p-1)/(p-1)
    double c = 0.0;          // Stephens constant at the table's truncation
};

LucaProbe luca_average_probe(uint64_t x, const PrimeTable& table);

struct HarmonicApProbe {
    double sum = 0.0;        // sum_{p<x, p=1(d)} 1/p
    double predicted = 0.0;  // log log x / phi(d)
};

HarmonicApProbe harmonic_ap_probe(uint64_t x, uint64_t d, const PrimeTable& table);

}  // namespace ntos::experiments
