#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chmm {

// Discrete left-right HMM. Only self-loops and hops to the next state are
// allowed: transition[i][j] == 0 for j < i and j > i + 1. Observation
// symbols are 0-based in [0, n_symbols). The initial distribution is pinned
// to state 0; gestures always start from rest, so the start information
// lives in the emission matrix instead of pi.
struct DiscreteHmm {
    int n_states = 0;
    int n_symbols = 0;
    std::vector<std::vector<double>> transition;  // n_states x n_states
    std::vector<std::vector<double>> emission;    // n_states x n_symbols
    std::vector<double> initial;                  // length n_states

    bool operator==(const DiscreteHmm&) const = default;
};

struct TrainingReport {
    std::vector<double> log_likelihood_history;  // natural log, one entry per E-step
    int iterations_run = 0;                      // re-estimation updates applied
    bool converged = false;
};

struct BaumWelchOptions {
    int max_iterations = 500;
    double tolerance = 1e-6;       // stop when total log-likelihood improves by less
    double emission_floor = 1e-6;  // keeps unseen symbols scoreable at runtime
};

// Row-stochastic random init honoring the left-right zero pattern.
// Deterministic for a fixed seed. Throws std::invalid_argument on
// non-positive dimensions.
DiscreteHmm init_left_right(int n_states, int n_symbols, std::uint64_t seed);

// ln P(observations | hmm) via the scaled forward recursion. Returns
// -infinity for impossible sequences; never underflows for long inputs.
// Throws std::invalid_argument on an empty sequence or out-of-range symbol.
double forward_log_likelihood(const DiscreteHmm& hmm, std::span<const int> observations);

// Multi-sequence Baum-Welch re-estimation. Expected counts are accumulated
// over all sequences before normalizing. Structural zeros of the left-right
// pattern survive exactly; emission rows are floored and renormalized after
// each update. pi is not re-estimated.
std::pair<DiscreteHmm, TrainingReport> baum_welch(const DiscreteHmm& hmm,
                                                  const std::vector<std::vector<int>>& sequences,
                                                  const BaumWelchOptions& options = {});

// Every violated invariant with its location; empty result means valid.
std::vector<std::string> validate_hmm(const DiscreteHmm& hmm);

}  // namespace chmm
