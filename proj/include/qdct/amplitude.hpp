#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qdct/metrics.hpp"
#include "qdct/rng.hpp"

namespace qdct {

/// Acceptance interval [alpha, beta] on squared coefficient values.
/// `slack` widens both ends by an absolute amount; drivers set it to the
/// round-off scale of their energy ledger so that a coefficient holding
/// exactly the residual energy is not lost to the last ulp.
struct ThresholdWindow {
    double alpha = 0.0;
    double beta = 0.0;
    double slack = 0.0;

    static ThresholdWindow make(double alpha, double beta, double slack = 0.0);

    bool contains(double value) const
    {
        const double sq = value * value;
        return alpha - slack <= sq && sq <= beta + slack;
    }
};

/// The marking function f(i) = [alpha <= v(i)^2 <= beta]. The composed
/// LOAD / inner-product / compare / uncompute chain acts on the index
/// register as a pure phase flip, so it is evaluated here as one classical
/// function of the index. Values are computed lazily and cached; each cache
/// miss counts as one inner product.
///
/// Not thread-safe: a predicate belongs to one search.
class MarkPredicate {
public:
    using ValueFn = std::function<double(std::size_t)>;

    MarkPredicate(std::size_t domain, ValueFn value_fn, ThresholdWindow window, OpCounters* counters = nullptr);

    /// Predicate over precomputed values; no inner products are charged.
    static MarkPredicate from_values(std::vector<double> values, ThresholdWindow window,
                                     OpCounters* counters = nullptr);

    std::size_t domain() const { return cached_.size(); }
    const ThresholdWindow& window() const { return window_; }

    double value(std::size_t index);
    bool operator()(std::size_t index);

    std::size_t fresh_evaluations() const { return fresh_; }
    std::size_t raw_evaluations() const { return raw_; }

private:
    ValueFn value_fn_;
    ThresholdWindow window_;
    OpCounters* counters_;
    std::vector<double> cached_;
    std::vector<char> known_;
    std::size_t fresh_ = 0;
    std::size_t raw_ = 0;
};

/// Real amplitudes over the index register (M = N or N^2 entries).
class AmplitudeState {
public:
    explicit AmplitudeState(std::vector<double> amplitudes);

    std::size_t dim() const { return amps_.size(); }
    std::span<const double> amplitudes() const { return amps_; }
    std::span<double> amplitudes() { return amps_; }
    double norm_squared() const;

private:
    std::vector<double> amps_;
};

AmplitudeState uniform_state(std::size_t dim);

/// Negates the amplitude of every marked index.
void apply_phase_oracle(AmplitudeState& state, MarkPredicate& predicate);

/// Inversion about the mean, 2|xi><xi| - I.
void apply_diffusion(AmplitudeState& state);

/// j rounds of diffusion after phase oracle.
void gdct_iterate(AmplitudeState& state, MarkPredicate& predicate, std::size_t j, OpCounters* counters = nullptr);

/// sin^2((2j+1) theta / 2) with theta = 2 asin(sqrt(t/M)).
double success_probability(std::size_t M, std::size_t t, std::size_t j);

/// Total probability on the marked set.
double marked_probability(const AmplitudeState& state, MarkPredicate& predicate);

/// Inverse-CDF sample from |a_i|^2 using one uniform draw. The state is
/// left untouched; callers discard it afterwards.
std::size_t measure(const AmplitudeState& state, SeededRng& rng);

}  // namespace qdct
