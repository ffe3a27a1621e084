#include "qdct/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qdct/boyer.hpp"
#include "qdct/dct.hpp"
#include "qdct/rng.hpp"

namespace qdct {

bool WorkedExample::pass() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Checkpoint& c) { return c.pass; });
}

namespace {

Checkpoint value_check(std::string name, double expected, double actual, double rel_tol)
{
    const double err = expected == 0.0 ? std::abs(actual) : std::abs(actual - expected) / std::abs(expected);
    return {std::move(name), expected, actual, rel_tol, err <= rel_tol, {}, {}};
}

std::string join(const std::vector<std::size_t>& xs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out + "}";
}

Checkpoint set_check(std::string name, std::vector<std::size_t> expected, std::vector<std::size_t> actual)
{
    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    Checkpoint c;
    c.name = std::move(name);
    c.expected = static_cast<double>(expected.size());
    c.actual = static_cast<double>(actual.size());
    c.pass = expected == actual;
    c.expected_text = join(expected);
    c.actual_text = join(actual);
    return c;
}

}  // namespace

WorkedExample run_worked_example(std::uint64_t seed, double epsilon, int readout_digits)
{
    WorkedExample ex;
    ex.epsilon = epsilon;
    ex.readout_digits = readout_digits;
    ex.seed = seed;

    const std::size_t n = kExampleSignal.size();
    const DctMatrix d(n);
    const Vector coeffs = dct1d(kExampleSignal, d);
    std::vector<double> readout(n);
    for (std::size_t i = 0; i < n; ++i) {
        ex.squared_coefficients.push_back(coeffs[i] * coeffs[i]);
        readout[i] = round_significant(coeffs[i] * coeffs[i], readout_digits);
    }

    DriverOptions opts;
    opts.readout_digits = readout_digits;
    SeededRng rng(seed);
    ex.report = qdct1(kExampleSignal, epsilon, opts, rng);

    auto solutions_in = [&](const ThresholdWindow& w) {
        std::vector<std::size_t> set;
        for (std::size_t i = 0; i < n; ++i)
            if (w.contains(std::sqrt(readout[i]))) set.push_back(i);
        return set;
    };

    // Ledger state before the first search and after every acceptance.
    const auto& trace = ex.report.trace;
    for (std::size_t r = 0; r < trace.size(); ++r) {
        const bool starts_step = r == 0 || trace[r - 1].action == RoundAction::accepted;
        if (starts_step) {
            ex.steps.push_back({trace[r].delta_e, trace[r].ratio, trace[r].window.alpha, trace[r].window.beta,
                                solutions_in(trace[r].window)});
        }
        if (trace[r].action == RoundAction::accepted) ex.accepted_order.push_back(trace[r].outcome.index);
    }
    if (!ex.report.fell_back && !trace.empty() && trace.back().action == RoundAction::accepted) {
        const double de = ex.report.delta_e;
        const std::size_t open = n - ex.accepted_order.size();
        const double alpha = open > 0 ? de / static_cast<double>(open) : de;
        ex.steps.push_back({de, ex.report.final_ratio, alpha, de, {}});
    }
    ex.selected_six_then_seven =
        ex.accepted_order.size() >= 3 && ex.accepted_order[1] == 6 && ex.accepted_order[2] == 7;

    constexpr double tol = 1e-3;
    auto& checks = ex.checks;
    checks.push_back(value_check("norm_sq", 198151.0, energy(kExampleSignal), 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        checks.push_back(value_check("c_sq[" + std::to_string(i) + "]", kExampleSquaredCoefficients[i],
                                     ex.squared_coefficients[i], tol));
    }
    if (!ex.steps.empty()) {
        checks.push_back(value_check("A.delta_e", 198151.0, ex.steps[0].delta_e, tol));
        checks.push_back(value_check("A.alpha", 24768.875, ex.steps[0].alpha, tol));
        checks.push_back(set_check("A.solutions", {0}, ex.steps[0].solution_set));
    }
    if (!ex.accepted_order.empty()) {
        checks.push_back(set_check("A.output", {0}, {ex.accepted_order[0]}));
    }
    if (ex.steps.size() > 1 && ex.accepted_order.size() > 1) {
        checks.push_back(value_check("B.delta_e", 11.0, ex.steps[1].delta_e, tol));
        checks.push_back(value_check("B.ratio", 5.55132e-5, ex.steps[1].ratio, tol));
        checks.push_back(value_check("B.alpha", 1.57143, ex.steps[1].alpha, tol));
        checks.push_back(set_check("B.solutions", {4, 5, 6, 7}, ex.steps[1].solution_set));
    }
    if (ex.selected_six_then_seven && ex.steps.size() > 3) {
        checks.push_back(value_check("C.delta_e", 8.2563, ex.steps[2].delta_e, tol));
        checks.push_back(value_check("C.ratio", 4.16667e-5, ex.steps[2].ratio, tol));
        checks.push_back(value_check("C.alpha", 1.37605, ex.steps[2].alpha, tol));
        checks.push_back(set_check("C.solutions", {2, 4, 5, 6, 7}, ex.steps[2].solution_set));
        checks.push_back(value_check("final.delta_e", 3.8145, ex.steps[3].delta_e, tol));
        checks.push_back(value_check("final.ratio", 1.92505e-5, ex.steps[3].ratio, tol));
    }

    Checkpoint guarantee;
    guarantee.name = "final_ratio_below_epsilon";
    guarantee.expected = epsilon;
    guarantee.actual = ex.report.final_ratio;
    guarantee.pass = ex.report.fell_back || ex.report.final_ratio < epsilon || ex.report.total_energy == 0.0;
    checks.push_back(guarantee);

    double accepted_sq = 0.0;
    for (const auto& e : ex.report.accepted.entries) accepted_sq += e.value * e.value;
    Checkpoint ledger;
    ledger.name = "ledger_identity";
    ledger.expected = ex.report.total_energy - accepted_sq;
    ledger.actual = ex.report.delta_e;
    ledger.pass = std::abs(ledger.expected - ledger.actual) <= 1e-9 * ex.report.total_energy;
    checks.push_back(ledger);
    return ex;
}

BenchResult bench_scaling(const BenchOptions& opts)
{
    if (opts.sizes.size() < 3) throw std::invalid_argument("bench_scaling: need at least three sizes");
    if (opts.trials == 0) throw std::invalid_argument("bench_scaling: trials must be positive");

    BenchResult result;
    for (const std::size_t size : opts.sizes) {
        if (size < 2) throw std::invalid_argument("bench_scaling: sizes must be at least 2");
        SeededRng signal_rng(derive_seed(opts.seed, size, 0xfeed));
        std::vector<double> values;
        if (opts.two_d) {
            Matrix f(size, size);
            for (double& v : f.values()) v = std::floor(signal_rng.uniform01() * 256.0);
            const Matrix g = multiply(build_dct_matrix(size).matrix(), f);
            values.assign(g.values().begin(), g.values().end());
        } else {
            std::vector<double> f(size);
            for (double& v : f) v = std::floor(signal_rng.uniform01() * 256.0);
            for (std::size_t u = 0; u < size; ++u) values.push_back(dct_coefficient(f, u));
        }
        // Window pinned to the largest squared coefficient: one solution.
        double peak = 0.0;
        for (double v : values) peak = std::max(peak, v * v);
        const ThresholdWindow window = ThresholdWindow::make(peak, peak);
        const std::size_t t = static_cast<std::size_t>(
            std::count_if(values.begin(), values.end(), [&](double v) { return window.contains(v); }));
        const std::size_t domain = values.size();

        SearchConfig cfg;
        cfg.m_cap = opts.two_d ? static_cast<double>(size) : std::sqrt(static_cast<double>(domain));

        std::vector<SearchOutcome> outcomes(opts.trials);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < opts.trials; i = next++) {
                auto predicate = MarkPredicate::from_values(values, window);
                SeededRng rng(derive_seed(opts.seed, size, i + 1));
                outcomes[i] = boyer_find(predicate, domain, cfg, rng);
            }
        };
        unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
            worker();
        }
        for (const auto& o : outcomes) {
            result.trials.push_back({domain, t, static_cast<double>(o.total_iterations)});
            if (!o.found) ++result.failures;
        }
    }
    result.report = scaling_report(result.trials, opts.two_d ? ScalingAxis::side : ScalingAxis::domain,
                                   opts.two_d ? 1.0 : 0.5);
    return result;
}

}  // namespace qdct
