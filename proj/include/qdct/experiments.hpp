#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qdct/driver.hpp"
#include "qdct/metrics.hpp"

namespace qdct {

/// First eight gray levels of the first row of the reference photograph.
inline constexpr std::array<double, 8> kExampleSignal{156, 159, 158, 155, 158, 156, 159, 158};

/// Published squared coefficients of kExampleSignal (5 significant digits).
inline constexpr std::array<double, 8> kExampleSquaredCoefficients{1.9814e5, 0.51531, 1.5063, 0.95824,
                                                                   3.125,    2.5846,  2.7437, 4.4418};

struct Checkpoint {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double rel_tolerance = 0.0;
    bool pass = false;
    std::string expected_text;  // set-valued checkpoints
    std::string actual_text;
};

/// Ledger state right before the search that follows the k-th acceptance.
struct StepState {
    double delta_e = 0.0;
    double ratio = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::size_t> solution_set;  // exhaustive enumeration of the window
};

struct WorkedExample {
    double epsilon = 0.0;
    int readout_digits = 0;
    std::uint64_t seed = 0;
    std::vector<double> squared_coefficients;  // exact
    RunReport report;
    std::vector<StepState> steps;
    std::vector<std::size_t> accepted_order;
    bool selected_six_then_seven = false;
    std::vector<Checkpoint> checks;

    bool pass() const;
};

/// Runs QDCT1 on kExampleSignal and evaluates the published checkpoints
/// that the trace reaches.
WorkedExample run_worked_example(std::uint64_t seed, double epsilon, int readout_digits);

struct BenchOptions {
    std::vector<std::size_t> sizes;  // M for 1-D, N for N x N
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    bool two_d = false;
    unsigned threads = 0;  // 0 uses hardware concurrency
};

struct BenchResult {
    std::vector<ScalingTrial> trials;
    std::size_t failures = 0;
    ScalingReport report;
};

/// Seeded single-solution searches per size; fits the iteration count.
BenchResult bench_scaling(const BenchOptions& opts);

}  // namespace qdct
