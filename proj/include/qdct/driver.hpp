#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "qdct/amplitude.hpp"
#include "qdct/boyer.hpp"
#include "qdct/dct.hpp"
#include "qdct/metrics.hpp"
#include "qdct/rng.hpp"

namespace qdct {

struct DriverOptions {
    SearchConfig search;
    std::size_t n_max_repetition = 10;
    /// Precision of the coefficient readout register: squared coefficients
    /// are rounded to this many significant decimal digits before they are
    /// compared or subtracted. 0 keeps full double precision.
    int readout_digits = 0;
    /// Run the second QDCT2 pass on the exact G = D F instead of the sparse
    /// G selected by the first pass.
    bool exact_g_phase2 = false;
    OpCounters* counters = nullptr;
};

struct Coefficient {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Selected coefficients of a rows x cols result (cols == 1 for 1-D).
struct SparseCoefficients {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Coefficient> entries;

    Matrix densify() const;
    double energy() const;
};

/// Residual-energy bookkeeping for the adaptive selection loop.
class EnergyLedger {
public:
    enum class Verdict { accepted, repeated, exhausted };

    EnergyLedger(double total_energy, std::size_t slots, std::size_t n_max_repetition, double epsilon);

    double total_energy() const { return total_; }
    double delta_e() const { return delta_e_; }
    std::size_t n_solutions() const { return n_solutions_; }
    std::size_t slots() const { return slots_; }
    double epsilon() const { return epsilon_; }
    double ratio() const { return total_ > 0.0 ? delta_e_ / total_ : 0.0; }
    bool active() const { return total_ > 0.0 && ratio() >= epsilon_; }
    std::size_t repeat_count(std::size_t index) const;

    /// alpha = dE / (slots - nS), beta = dE.
    ThresholdWindow window() const;

    /// Books one verified search result at `index` with squared value `value_sq`.
    Verdict record(std::size_t index, double value_sq);

private:
    double total_;
    double delta_e_;
    std::size_t slots_;
    std::size_t n_max_repetition_;
    double epsilon_;
    std::size_t n_solutions_ = 0;
    std::unordered_map<std::size_t, std::size_t> repeat_counts_;
};

enum class RoundAction { accepted, repeated, fallback_repeat, fallback_not_found };

const char* to_string(RoundAction action);

struct RoundRecord {
    std::size_t round = 0;
    double delta_e = 0.0;  // ledger state when the round started
    double ratio = 0.0;
    std::size_t solutions = 0;
    ThresholdWindow window;
    SearchOutcome outcome;
    RoundAction action = RoundAction::accepted;
};

struct RunReport {
    SparseCoefficients accepted;
    bool fell_back = false;
    std::size_t rounds = 0;
    std::uint64_t oracle_calls = 0;
    double total_energy = 0.0;
    double delta_e = 0.0;
    double final_ratio = 0.0;  // residual energy / total energy
    std::vector<RoundRecord> trace;
};

/// Search over rows x cols candidate coefficients with one value source.
/// The 1-D and both 2-D passes are instances of this.
struct SelectionProblem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double total_energy = 0.0;
    double m_cap = 0.0;
    std::function<double(std::size_t)> coefficient;  // flat index -> exact value
    std::function<Matrix()> classical;               // full result for fallback
};

/// One verified search in `window` (Subroutine 1/2 skeleton).
SearchOutcome find_in_window(const SelectionProblem& problem, const ThresholdWindow& window,
                             const DriverOptions& opts, SeededRng& rng);

/// The adaptive loop: shrink the window as energy is captured, count
/// repeats, fall back to the classical result when the search stalls.
RunReport select_coefficients(const SelectionProblem& problem, double epsilon, const DriverOptions& opts,
                              SeededRng& rng);

/// Finds one index i with window.alpha <= (D_i . f)^2 <= window.beta.
SearchOutcome subroutine1(std::span<const double> f, const DctMatrix& d, const ThresholdWindow& window,
                          const DriverOptions& opts, SeededRng& rng);

RunReport qdct1(std::span<const double> f, double epsilon, const DriverOptions& opts, SeededRng& rng);

/// Finds one (i, j) with window.alpha <= (D_i . f_j)^2 <= window.beta, f_j
/// the j-th column of F. The flat outcome index is i * N + j.
SearchOutcome subroutine2(const Matrix& f, const DctMatrix& d, const ThresholdWindow& window,
                          const DriverOptions& opts, SeededRng& rng);

struct Qdct2Report {
    RunReport g_pass;  // selection of G = D F
    RunReport c_pass;  // selection of C = G D^T
    SparseCoefficients coefficients;
    bool fell_back = false;
    double total_energy = 0.0;
    double final_ratio = 0.0;  // 1 - retained / ||F||^2
    std::uint64_t oracle_calls = 0;
};

/// Per-pass threshold so that two passes together retain >= (1 - epsilon).
double qdct2_pass_epsilon(double epsilon);

Qdct2Report qdct2(const Matrix& f, double epsilon, const DriverOptions& opts, SeededRng& rng);

/// Rounds to `digits` significant decimal digits; digits <= 0 is identity.
double round_significant(double x, int digits);

}  // namespace qdct
