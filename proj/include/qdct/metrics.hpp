#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace qdct {

/// Abstract unit costs: addition, multiplication, division, comparison and
/// the LOAD of a stored record. Defaults are the smallest values that
/// satisfy t_m >= 25 t_a, t_d = 2 t_m, t_c <= t_a / 25 and t_l = 0.
struct CostModel {
    double t_a = 1.0;
    double t_m = 25.0;
    double t_d = 50.0;
    double t_c = 0.04;
    double t_l = 0.0;

    constexpr bool consistent() const
    {
        return t_a >= 0 && t_m >= 25.0 * t_a && t_d == 2.0 * t_m && t_c <= t_a / 25.0 && t_l == 0.0;
    }
};

constexpr unsigned ceil_log2(std::uint64_t n) { return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1)); }

/// Parallel inner product of length 2^bits: one multiply layer then a
/// binary adder tree of depth bits.
constexpr double inner_product_time_bits(unsigned bits, const CostModel& m) { return m.t_m + bits * m.t_a; }

constexpr double inner_product_time(std::uint64_t n, const CostModel& m)
{
    return inner_product_time_bits(ceil_log2(n), m);
}

/// One G_DCT step: LOAD and its inverse, the inner-product oracle and its
/// inverse (inner product plus squaring), and the two window comparisons.
constexpr double gdct_iteration_time_bits(unsigned bits, const CostModel& m)
{
    return 2.0 * m.t_l + 2.0 * (inner_product_time_bits(bits, m) + m.t_m) + 2.0 * m.t_c;
}

constexpr double gdct_iteration_time(std::uint64_t n, const CostModel& m)
{
    return gdct_iteration_time_bits(ceil_log2(n), m);
}

static_assert(CostModel{}.consistent());
static_assert(inner_product_time_bits(100, CostModel{}) <= 5.0 * CostModel{}.t_m);
static_assert(gdct_iteration_time_bits(100, CostModel{}) <= 13.0 * CostModel{}.t_m);

struct OpCounts {
    std::uint64_t inner_products = 0;   // fresh (uncached) coefficient evaluations
    std::uint64_t predicate_evals = 0;  // every window test, cached or not
    std::uint64_t gdct_iterations = 0;
    std::uint64_t measurements = 0;
};

/// Shared sink for operation counts; safe for concurrent increments.
class OpCounters {
public:
    void add_inner_products(std::uint64_t n) { inner_products_.fetch_add(n, std::memory_order_relaxed); }
    void add_predicate_evals(std::uint64_t n) { predicate_evals_.fetch_add(n, std::memory_order_relaxed); }
    void add_gdct_iterations(std::uint64_t n) { gdct_iterations_.fetch_add(n, std::memory_order_relaxed); }
    void add_measurements(std::uint64_t n) { measurements_.fetch_add(n, std::memory_order_relaxed); }

    OpCounts snapshot() const;

private:
    std::atomic<std::uint64_t> inner_products_{0};
    std::atomic<std::uint64_t> predicate_evals_{0};
    std::atomic<std::uint64_t> gdct_iterations_{0};
    std::atomic<std::uint64_t> measurements_{0};
};

struct ScalingTrial {
    std::uint64_t domain = 0;     // M, the number of searchable indices
    std::uint64_t solutions = 0;  // t
    double iterations = 0.0;      // G_DCT applications used by the search
};

enum class ScalingAxis {
    domain,  // fit against M
    side,    // fit against sqrt(M), i.e. N for an N x N search
};

struct ScalingPoint {
    double size = 0.0;
    std::uint64_t domain = 0;
    std::size_t trials = 0;
    double mean_iterations = 0.0;
    double constant = 0.0;  // mean_iterations / sqrt(M / t)
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double exponent = 0.0;
    double intercept = 0.0;  // natural-log intercept of the fit
    double ci_low = 0.0;
    double ci_high = 0.0;
    double claimed = 0.0;
    double tolerance = 0.0;
    double max_constant = 0.0;
    bool pass = false;
};

/// Log-log least squares of mean iterations against size, at one fixed t.
/// Throws std::invalid_argument with fewer than three distinct sizes or
/// when the trials mix different solution counts.
ScalingReport scaling_report(std::span<const ScalingTrial> trials, ScalingAxis axis, double claimed_exponent,
                             double tolerance = 0.1);

}  // namespace qdct
