#include "qdct/boyer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdct {

void SearchConfig::validate() const
{
    if (!(lambda > 1.0 && lambda < 4.0 / 3.0)) {
        throw std::invalid_argument("search config: lambda must lie strictly between 1 and 4/3");
    }
}

double SearchConfig::cap_for(std::size_t M) const
{
    return m_cap > 0.0 ? m_cap : std::sqrt(static_cast<double>(M));
}

std::size_t SearchConfig::rounds_for(std::size_t M) const
{
    if (max_rounds > 0) return max_rounds;
    const double cap = std::max(1.0, cap_for(M));
    return static_cast<std::size_t>(std::ceil(std::log(cap) / std::log(lambda))) + 30;
}

SearchOutcome boyer_find(MarkPredicate& predicate, std::size_t M, const SearchConfig& cfg, SeededRng& rng,
                         OpCounters* counters)
{
    cfg.validate();
    if (M == 0) throw std::invalid_argument("boyer_find: empty domain");
    if (predicate.domain() != M) throw std::invalid_argument("boyer_find: predicate domain does not match M");

    const double cap = cfg.cap_for(M);
    const std::size_t rounds = cfg.rounds_for(M);

    SearchOutcome out;
    double m = 1.0;
    for (std::size_t round = 1; round <= rounds; ++round) {
        out.rounds = round;
        const auto width = static_cast<std::uint64_t>(std::max(1.0, std::ceil(m)));
        const std::uint64_t j = rng.uniform_below(width);

        AmplitudeState state = uniform_state(M);
        gdct_iterate(state, predicate, j, counters);
        out.total_iterations += j;
        out.oracle_calls += j + 1;

        const std::size_t index = measure(state, rng);
        ++out.measurements;
        if (counters) counters->add_measurements(1);

        if (predicate(index)) {
            out.found = true;
            out.index = index;
            out.value = predicate.value(index);
            return out;
        }
        m = std::min(cfg.lambda * m, cap);
    }
    return out;
}

double expected_iterations_bound(std::size_t M, std::size_t t)
{
    if (t == 0) throw std::invalid_argument("expected_iterations_bound: undefined for t = 0");
    if (t > M) throw std::invalid_argument("expected_iterations_bound: t exceeds M");
    return std::sqrt(static_cast<double>(M) / static_cast<double>(t));
}

}  // namespace qdct
