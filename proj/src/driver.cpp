#include "qdct/driver.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace qdct {

Matrix SparseCoefficients::densify() const
{
    Matrix out(rows, cols);
    for (const auto& e : entries) out(e.row, e.col) = e.value;
    return out;
}

double SparseCoefficients::energy() const
{
    double sum = 0.0;
    for (const auto& e : entries) sum += e.value * e.value;
    return sum;
}

EnergyLedger::EnergyLedger(double total_energy, std::size_t slots, std::size_t n_max_repetition, double epsilon)
    : total_(total_energy), delta_e_(total_energy), slots_(slots), n_max_repetition_(n_max_repetition),
      epsilon_(epsilon)
{
    if (!(total_energy >= 0.0)) throw std::invalid_argument("energy ledger: total energy must be nonnegative");
    if (slots == 0) throw std::invalid_argument("energy ledger: no coefficient slots");
    if (!(epsilon > 0.0)) throw std::invalid_argument("energy ledger: epsilon must be positive");
    if (n_max_repetition == 0) throw std::invalid_argument("energy ledger: nMaxRepetition must be positive");
}

std::size_t EnergyLedger::repeat_count(std::size_t index) const
{
    const auto it = repeat_counts_.find(index);
    return it == repeat_counts_.end() ? 0 : it->second;
}

ThresholdWindow EnergyLedger::window() const
{
    const std::size_t open = n_solutions_ < slots_ ? slots_ - n_solutions_ : 1;
    // Absolute round-off scale of delta_e after up to `slots` subtractions.
    const double slack = 4.0 * static_cast<double>(slots_) * DBL_EPSILON * total_;
    return ThresholdWindow::make(delta_e_ / static_cast<double>(open), delta_e_, slack);
}

EnergyLedger::Verdict EnergyLedger::record(std::size_t index, double value_sq)
{
    std::size_t& count = repeat_counts_[index];
    if (count == 0) {
        count = 1;
        ++n_solutions_;
        delta_e_ = std::max(0.0, delta_e_ - value_sq);
        // Every slot taken: the remainder is round-off by energy conservation.
        if (n_solutions_ == slots_) delta_e_ = 0.0;
        return Verdict::accepted;
    }
    if (count < n_max_repetition_) {
        ++count;
        return Verdict::repeated;
    }
    return Verdict::exhausted;
}

const char* to_string(RoundAction action)
{
    switch (action) {
    case RoundAction::accepted: return "accepted";
    case RoundAction::repeated: return "repeated";
    case RoundAction::fallback_repeat: return "fallback-repeat";
    case RoundAction::fallback_not_found: return "fallback-not-found";
    }
    return "?";
}

double round_significant(double x, int digits)
{
    if (digits <= 0 || x == 0.0 || !std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

SearchOutcome find_in_window(const SelectionProblem& problem, const ThresholdWindow& window,
                             const DriverOptions& opts, SeededRng& rng)
{
    const std::size_t domain = problem.rows * problem.cols;
    const int digits = opts.readout_digits;
    auto readout = [&problem, digits](std::size_t index) {
        const double exact = problem.coefficient(index);
        if (digits <= 0) return exact;
        return std::copysign(std::sqrt(round_significant(exact * exact, digits)), exact);
    };
    MarkPredicate predicate(domain, readout, window, opts.counters);
    SearchConfig cfg = opts.search;
    if (cfg.m_cap <= 0.0) cfg.m_cap = problem.m_cap;
    return boyer_find(predicate, domain, cfg, rng, opts.counters);
}

namespace {

void apply_fallback(RunReport& report, const SelectionProblem& problem)
{
    const Matrix full = problem.classical();
    report.fell_back = true;
    report.accepted.entries.clear();
    for (std::size_t r = 0; r < full.rows(); ++r)
        for (std::size_t c = 0; c < full.cols(); ++c) report.accepted.entries.push_back({r, c, full(r, c)});
    report.delta_e = std::max(0.0, report.total_energy - report.accepted.energy());
}

}  // namespace

RunReport select_coefficients(const SelectionProblem& problem, double epsilon, const DriverOptions& opts,
                              SeededRng& rng)
{
    if (!(epsilon > 0.0)) throw std::invalid_argument("selection: epsilon must be positive");
    const std::size_t domain = problem.rows * problem.cols;

    RunReport report;
    report.accepted.rows = problem.rows;
    report.accepted.cols = problem.cols;
    report.total_energy = problem.total_energy;
    if (problem.total_energy <= 0.0) return report;

    EnergyLedger ledger(problem.total_energy, domain, opts.n_max_repetition, epsilon);
    while (ledger.active()) {
        RoundRecord rec;
        rec.round = report.rounds + 1;
        rec.delta_e = ledger.delta_e();
        rec.ratio = ledger.ratio();
        rec.solutions = ledger.n_solutions();
        rec.window = ledger.window();
        rec.outcome = find_in_window(problem, rec.window, opts, rng);
        ++report.rounds;
        report.oracle_calls += rec.outcome.oracle_calls;

        if (!rec.outcome.found) {
            rec.action = RoundAction::fallback_not_found;
            report.trace.push_back(rec);
            apply_fallback(report, problem);
            break;
        }
        const double v = rec.outcome.value;
        switch (ledger.record(rec.outcome.index, v * v)) {
        case EnergyLedger::Verdict::accepted:
            rec.action = RoundAction::accepted;
            report.accepted.entries.push_back(
                {rec.outcome.index / problem.cols, rec.outcome.index % problem.cols, v});
            break;
        case EnergyLedger::Verdict::repeated:
            rec.action = RoundAction::repeated;
            break;
        case EnergyLedger::Verdict::exhausted:
            rec.action = RoundAction::fallback_repeat;
            break;
        }
        report.trace.push_back(rec);
        if (rec.action == RoundAction::fallback_repeat) {
            apply_fallback(report, problem);
            break;
        }
    }
    if (!report.fell_back) report.delta_e = ledger.delta_e();
    report.final_ratio = report.delta_e / report.total_energy;
    return report;
}

SearchOutcome subroutine1(std::span<const double> f, const DctMatrix& d, const ThresholdWindow& window,
                          const DriverOptions& opts, SeededRng& rng)
{
    if (f.size() != d.size()) throw std::invalid_argument("subroutine1: signal length does not match transform size");
    SelectionProblem problem;
    problem.rows = d.size();
    problem.cols = 1;
    problem.m_cap = std::sqrt(static_cast<double>(d.size()));
    problem.coefficient = [&](std::size_t i) { return dot(d.row(i), f); };
    return find_in_window(problem, window, opts, rng);
}

RunReport qdct1(std::span<const double> f, double epsilon, const DriverOptions& opts, SeededRng& rng)
{
    if (f.empty()) throw std::invalid_argument("qdct1: empty signal");
    const DctMatrix d(f.size());
    SelectionProblem problem;
    problem.rows = f.size();
    problem.cols = 1;
    problem.total_energy = energy(f);
    problem.m_cap = std::sqrt(static_cast<double>(f.size()));
    problem.coefficient = [&](std::size_t i) { return dot(d.row(i), f); };
    problem.classical = [&] { return Matrix(f.size(), 1, dct1d(f, d)); };
    return select_coefficients(problem, epsilon, opts, rng);
}

namespace {

void check_square(const Matrix& f, const DctMatrix& d, const char* what)
{
    if (!f.square() || f.rows() != d.size()) {
        throw std::invalid_argument(std::string(what) + ": input must be " + std::to_string(d.size()) + "x" +
                                    std::to_string(d.size()));
    }
}

/// g_ij = D_i . f_j over the columns of F.
SelectionProblem g_problem(const DctMatrix& d, const std::vector<Vector>& columns, double total)
{
    const std::size_t n = d.size();
    SelectionProblem p;
    p.rows = n;
    p.cols = n;
    p.total_energy = total;
    p.m_cap = static_cast<double>(n);
    p.coefficient = [&d, &columns, n](std::size_t idx) { return dot(d.row(idx / n), columns[idx % n]); };
    p.classical = [&d, &columns, n] {
        Matrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = dot(d.row(i), columns[j]);
        return g;
    };
    return p;
}

}  // namespace

SearchOutcome subroutine2(const Matrix& f, const DctMatrix& d, const ThresholdWindow& window,
                          const DriverOptions& opts, SeededRng& rng)
{
    check_square(f, d, "subroutine2");
    std::vector<Vector> columns;
    for (std::size_t j = 0; j < f.cols(); ++j) columns.push_back(f.column(j));
    return find_in_window(g_problem(d, columns, energy(f)), window, opts, rng);
}

double qdct2_pass_epsilon(double epsilon)
{
    if (!(epsilon > 0.0)) throw std::invalid_argument("qdct2: epsilon must be positive");
    return epsilon >= 1.0 ? epsilon : 1.0 - std::sqrt(1.0 - epsilon);
}

Qdct2Report qdct2(const Matrix& f, double epsilon, const DriverOptions& opts, SeededRng& rng)
{
    if (!f.square() || f.rows() == 0) throw std::invalid_argument("qdct2: input must be a non-empty square matrix");
    const std::size_t n = f.rows();
    const DctMatrix d(n);
    const double pass_eps = qdct2_pass_epsilon(epsilon);

    Qdct2Report out;
    out.total_energy = energy(f);

    std::vector<Vector> columns;
    for (std::size_t j = 0; j < n; ++j) columns.push_back(f.column(j));
    out.g_pass = select_coefficients(g_problem(d, columns, out.total_energy), pass_eps, opts, rng);

    Matrix g = out.g_pass.accepted.densify();
    if (opts.exact_g_phase2) g = multiply(d.matrix(), f);

    // c_pq = G_p . D_q, i.e. C = G D^T. ||G D^T||^2 = ||G||^2 by orthogonality.
    SelectionProblem c_problem;
    c_problem.rows = n;
    c_problem.cols = n;
    c_problem.total_energy = energy(g);
    c_problem.m_cap = static_cast<double>(n);
    c_problem.coefficient = [&g, &d, n](std::size_t idx) { return dot(g.row(idx / n), d.row(idx % n)); };
    c_problem.classical = [&g, &d] { return multiply(g, transpose(d.matrix())); };
    out.c_pass = select_coefficients(c_problem, pass_eps, opts, rng);

    out.coefficients = out.c_pass.accepted;
    out.fell_back = out.g_pass.fell_back || out.c_pass.fell_back;
    out.oracle_calls = out.g_pass.oracle_calls + out.c_pass.oracle_calls;
    if (out.total_energy > 0.0) {
        out.final_ratio = std::max(0.0, 1.0 - out.coefficients.energy() / out.total_energy);
    }
    return out;
}

}  // namespace qdct
