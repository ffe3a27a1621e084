#include "qdct/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qdct {

OpCounts OpCounters::snapshot() const
{
    return {inner_products_.load(), predicate_evals_.load(), gdct_iterations_.load(), measurements_.load()};
}

ScalingReport scaling_report(std::span<const ScalingTrial> trials, ScalingAxis axis, double claimed_exponent,
                             double tolerance)
{
    if (trials.empty()) throw std::invalid_argument("scaling_report: no trials");
    const std::uint64_t t = trials.front().solutions;
    if (t == 0) throw std::invalid_argument("scaling_report: solution count must be positive");

    std::map<std::uint64_t, std::pair<double, std::size_t>> sums;
    for (const auto& trial : trials) {
        if (trial.solutions != t) throw std::invalid_argument("scaling_report: trials mix solution counts");
        auto& [sum, count] = sums[trial.domain];
        sum += trial.iterations;
        ++count;
    }
    if (sums.size() < 3) throw std::invalid_argument("scaling_report: need at least three distinct sizes");

    ScalingReport report;
    report.claimed = claimed_exponent;
    report.tolerance = tolerance;
    for (const auto& [domain, acc] : sums) {
        ScalingPoint p;
        p.domain = domain;
        p.size = axis == ScalingAxis::domain ? static_cast<double>(domain) : std::sqrt(static_cast<double>(domain));
        p.trials = acc.second;
        p.mean_iterations = acc.first / static_cast<double>(acc.second);
        p.constant = p.mean_iterations / std::sqrt(static_cast<double>(domain) / static_cast<double>(t));
        report.max_constant = std::max(report.max_constant, p.constant);
        report.points.push_back(p);
    }

    const double n = static_cast<double>(report.points.size());
    double sx = 0, sy = 0;
    for (const auto& p : report.points) {
        if (p.mean_iterations <= 0) throw std::invalid_argument("scaling_report: mean iterations must be positive");
        sx += std::log(p.size);
        sy += std::log(p.mean_iterations);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& p : report.points) {
        const double dx = std::log(p.size) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.mean_iterations) - my);
    }
    report.exponent = sxy / sxx;
    report.intercept = my - report.exponent * mx;

    double sse = 0;
    for (const auto& p : report.points) {
        const double r = std::log(p.mean_iterations) - (report.intercept + report.exponent * std::log(p.size));
        sse += r * r;
    }
    const double dof = n - 2.0;
    const double stderr_slope = std::sqrt(sse / dof / sxx);
    const double tq = boost::math::quantile(boost::math::students_t(dof), 0.975);
    report.ci_low = report.exponent - tq * stderr_slope;
    report.ci_high = report.exponent + tq * stderr_slope;
    report.pass = std::abs(report.exponent - claimed_exponent) <= tolerance;
    return report;
}

}  // namespace qdct
