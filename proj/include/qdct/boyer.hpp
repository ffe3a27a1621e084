#pragma once

#include <cstddef>
#include <cstdint>

#include "qdct/amplitude.hpp"
#include "qdct/metrics.hpp"
#include "qdct/rng.hpp"

namespace qdct {

struct SearchConfig {
    double lambda = 6.0 / 5.0;  // schedule growth, strictly inside (1, 4/3)
    double m_cap = 0.0;         // schedule ceiling; <= 0 selects sqrt(M)
    std::size_t max_rounds = 0; // 0 selects ceil(log_lambda(m_cap)) + 30

    void validate() const;
    double cap_for(std::size_t M) const;
    std::size_t rounds_for(std::size_t M) const;
};

struct SearchOutcome {
    bool found = false;
    std::size_t index = 0;
    double value = 0.0;
    std::size_t rounds = 0;
    std::uint64_t total_iterations = 0;
    /// Phase-oracle applications plus one coefficient readout per round.
    std::uint64_t oracle_calls = 0;
    std::uint64_t measurements = 0;
};

/// Search with an unknown number of marked indices: draw j uniformly from
/// {0, ..., ceil(m) - 1}, run j iterations from the uniform state, measure,
/// verify, and grow m <- min(lambda m, m_cap) on failure.
SearchOutcome boyer_find(MarkPredicate& predicate, std::size_t M, const SearchConfig& cfg, SeededRng& rng,
                         OpCounters* counters = nullptr);

/// sqrt(M / t), the reference curve for expected iterations.
double expected_iterations_bound(std::size_t M, std::size_t t);

}  // namespace qdct
