#include "qdct/amplitude.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdct {

ThresholdWindow ThresholdWindow::make(double alpha, double beta, double slack)
{
    if (!(alpha >= 0.0) || !(beta >= alpha) || !(slack >= 0.0)) {
        throw std::invalid_argument("threshold window: need 0 <= alpha <= beta, got alpha=" + std::to_string(alpha) +
                                    " beta=" + std::to_string(beta));
    }
    return {alpha, beta, slack};
}

MarkPredicate::MarkPredicate(std::size_t domain, ValueFn value_fn, ThresholdWindow window, OpCounters* counters)
    : value_fn_(std::move(value_fn)), window_(window), counters_(counters), cached_(domain, 0.0), known_(domain, 0)
{
    if (domain == 0) throw std::invalid_argument("mark predicate: empty domain");
}

MarkPredicate MarkPredicate::from_values(std::vector<double> values, ThresholdWindow window, OpCounters* counters)
{
    const std::size_t n = values.size();
    MarkPredicate p(n, nullptr, window, counters);
    p.cached_ = std::move(values);
    p.known_.assign(n, 1);
    return p;
}

double MarkPredicate::value(std::size_t index)
{
    if (index >= cached_.size()) throw std::out_of_range("mark predicate: index out of range");
    if (!known_[index]) {
        cached_[index] = value_fn_(index);
        known_[index] = 1;
        ++fresh_;
        if (counters_) counters_->add_inner_products(1);
    }
    return cached_[index];
}

bool MarkPredicate::operator()(std::size_t index)
{
    ++raw_;
    if (counters_) counters_->add_predicate_evals(1);
    return window_.contains(value(index));
}

AmplitudeState::AmplitudeState(std::vector<double> amplitudes) : amps_(std::move(amplitudes))
{
    if (amps_.empty()) throw std::invalid_argument("amplitude state: dimension must be positive");
}

double AmplitudeState::norm_squared() const
{
    double sum = 0.0;
    for (double a : amps_) sum += a * a;
    return sum;
}

AmplitudeState uniform_state(std::size_t dim)
{
    if (dim == 0) throw std::invalid_argument("uniform_state: dimension must be positive");
    return AmplitudeState(std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

void apply_phase_oracle(AmplitudeState& state, MarkPredicate& predicate)
{
    if (state.dim() != predicate.domain()) {
        throw std::invalid_argument("phase oracle: state has " + std::to_string(state.dim()) +
                                    " amplitudes, predicate covers " + std::to_string(predicate.domain()));
    }
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (predicate(i)) amps[i] = -amps[i];
    }
}

void apply_diffusion(AmplitudeState& state)
{
    auto amps = state.amplitudes();
    double sum = 0.0;
    for (double a : amps) sum += a;
    const double twice_mean = 2.0 * sum / static_cast<double>(amps.size());
    for (double& a : amps) a = twice_mean - a;
}

void gdct_iterate(AmplitudeState& state, MarkPredicate& predicate, std::size_t j, OpCounters* counters)
{
    for (std::size_t step = 0; step < j; ++step) {
        apply_phase_oracle(state, predicate);
        apply_diffusion(state);
    }
    if (counters) counters->add_gdct_iterations(j);
}

double success_probability(std::size_t M, std::size_t t, std::size_t j)
{
    if (M == 0) throw std::invalid_argument("success_probability: M must be positive");
    if (t > M) throw std::invalid_argument("success_probability: t exceeds M");
    if (t == 0) return 0.0;
    const double half_theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(M)));
    const double s = std::sin(static_cast<double>(2 * j + 1) * half_theta);
    return s * s;
}

double marked_probability(const AmplitudeState& state, MarkPredicate& predicate)
{
    if (state.dim() != predicate.domain()) throw std::invalid_argument("marked_probability: dimension mismatch");
    double p = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (predicate.window().contains(predicate.value(i))) p += amps[i] * amps[i];
    }
    return p;
}

std::size_t measure(const AmplitudeState& state, SeededRng& rng)
{
    const double u = rng.uniform01();
    const auto amps = state.amplitudes();
    double cumulative = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = amps[i] * amps[i];
        if (p == 0.0) continue;
        cumulative += p;
        last_nonzero = i;
        if (u < cumulative) return i;
    }
    // u landed in the round-off gap above the final cumulative sum.
    return last_nonzero;
}

}  // namespace qdct
