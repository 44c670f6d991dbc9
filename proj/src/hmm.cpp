#include "chmm/hmm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "chmm/rng.hpp"

namespace chmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_symbols(const DiscreteHmm& hmm, std::span<const int> seq) {
    if (seq.empty()) {
        throw std::invalid_argument("observation sequence is empty");
    }
    for (int s : seq) {
        if (s < 0 || s >= hmm.n_symbols) {
            throw std::invalid_argument("observation symbol " + std::to_string(s) +
                                        " outside [0, " + std::to_string(hmm.n_symbols) + ")");
        }
    }
}

// One scaled forward pass. Fills alpha (T x N, row-normalized) and the
// per-step scale sums; returns ln P or -inf if the sequence is impossible.
double scaled_forward(const DiscreteHmm& hmm, std::span<const int> seq,
                      std::vector<std::vector<double>>* alpha_out,
                      std::vector<double>* scale_out) {
    const int n = hmm.n_states;
    const auto t_len = static_cast<std::size_t>(seq.size());
    std::vector<std::vector<double>> alpha(t_len, std::vector<double>(n, 0.0));
    std::vector<double> scale(t_len, 0.0);

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        alpha[0][i] = hmm.initial[i] * hmm.emission[i][seq[0]];
        total += alpha[0][i];
    }
    if (total <= 0.0) {
        return kNegInf;
    }
    scale[0] = total;
    for (int i = 0; i < n; ++i) {
        alpha[0][i] /= total;
    }

    double log_prob = std::log(total);
    for (std::size_t t = 1; t < t_len; ++t) {
        total = 0.0;
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            // Left-right: only j-1 and j feed state j.
            const int lo = j > 0 ? j - 1 : 0;
            for (int i = lo; i <= j; ++i) {
                sum += alpha[t - 1][i] * hmm.transition[i][j];
            }
            alpha[t][j] = sum * hmm.emission[j][seq[t]];
            total += alpha[t][j];
        }
        if (total <= 0.0) {
            return kNegInf;
        }
        scale[t] = total;
        for (int j = 0; j < n; ++j) {
            alpha[t][j] /= total;
        }
        log_prob += std::log(total);
    }

    if (alpha_out) *alpha_out = std::move(alpha);
    if (scale_out) *scale_out = std::move(scale);
    return log_prob;
}

struct ExpectedCounts {
    std::vector<std::vector<double>> trans_num;  // N x N
    std::vector<double> trans_den;               // N
    std::vector<std::vector<double>> emit_num;   // N x M
    std::vector<double> emit_den;                // N

    explicit ExpectedCounts(const DiscreteHmm& hmm)
        : trans_num(hmm.n_states, std::vector<double>(hmm.n_states, 0.0)),
          trans_den(hmm.n_states, 0.0),
          emit_num(hmm.n_states, std::vector<double>(hmm.n_symbols, 0.0)),
          emit_den(hmm.n_states, 0.0) {}
};

// E-step over one sequence: scaled forward/backward, gamma/xi accumulation.
// Returns the sequence log-likelihood.
double accumulate(const DiscreteHmm& hmm, std::span<const int> seq, ExpectedCounts& counts) {
    const int n = hmm.n_states;
    const auto t_len = static_cast<std::size_t>(seq.size());

    std::vector<std::vector<double>> alpha;
    std::vector<double> scale;
    const double log_prob = scaled_forward(hmm, seq, &alpha, &scale);
    if (!std::isfinite(log_prob)) {
        throw std::runtime_error("training sequence has zero probability under the current model");
    }

    // Backward pass with the forward scale factors.
    std::vector<std::vector<double>> beta(t_len, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        beta[t_len - 1][i] = 1.0 / scale[t_len - 1];
    }
    for (std::size_t t = t_len - 1; t-- > 0;) {
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            const int hi = i + 1 < n ? i + 1 : n - 1;
            for (int j = i; j <= hi; ++j) {
                sum += hmm.transition[i][j] * hmm.emission[j][seq[t + 1]] * beta[t + 1][j];
            }
            beta[t][i] = sum / scale[t];
        }
    }

    // gamma_t(i) = alpha_t(i) * beta_t(i) * scale_t; xi needs no extra
    // normalization under this scaling convention.
    for (std::size_t t = 0; t < t_len; ++t) {
        for (int i = 0; i < n; ++i) {
            const double gamma = alpha[t][i] * beta[t][i] * scale[t];
            counts.emit_num[i][seq[t]] += gamma;
            counts.emit_den[i] += gamma;
            if (t + 1 < t_len) {
                counts.trans_den[i] += gamma;
                const int hi = i + 1 < n ? i + 1 : n - 1;
                for (int j = i; j <= hi; ++j) {
                    counts.trans_num[i][j] +=
                        alpha[t][i] * hmm.transition[i][j] * hmm.emission[j][seq[t + 1]] * beta[t + 1][j];
                }
            }
        }
    }
    return log_prob;
}

void floor_and_normalize_emissions(DiscreteHmm& hmm, double floor) {
    for (auto& row : hmm.emission) {
        double sum = 0.0;
        for (double& v : row) {
            if (v < floor) v = floor;
            sum += v;
        }
        for (double& v : row) {
            v /= sum;
        }
    }
}

}  // namespace

DiscreteHmm init_left_right(int n_states, int n_symbols, std::uint64_t seed) {
    if (n_states < 1 || n_symbols < 1) {
        throw std::invalid_argument("n_states and n_symbols must be positive");
    }
    Rng rng(derive_seed(seed, 0x686d6dULL));
    DiscreteHmm hmm;
    hmm.n_states = n_states;
    hmm.n_symbols = n_symbols;
    hmm.transition.assign(n_states, std::vector<double>(n_states, 0.0));
    hmm.emission.assign(n_states, std::vector<double>(n_symbols, 0.0));
    hmm.initial.assign(n_states, 0.0);
    hmm.initial[0] = 1.0;

    // Draws in [1, 2) keep normalized entries bounded away from zero.
    for (int i = 0; i < n_states; ++i) {
        if (i + 1 < n_states) {
            const double self = rng.uniform(1.0, 2.0);
            const double hop = rng.uniform(1.0, 2.0);
            hmm.transition[i][i] = self / (self + hop);
            hmm.transition[i][i + 1] = hop / (self + hop);
        } else {
            hmm.transition[i][i] = 1.0;
        }
    }
    for (int i = 0; i < n_states; ++i) {
        double sum = 0.0;
        for (int k = 0; k < n_symbols; ++k) {
            hmm.emission[i][k] = rng.uniform(1.0, 2.0);
            sum += hmm.emission[i][k];
        }
        for (int k = 0; k < n_symbols; ++k) {
            hmm.emission[i][k] /= sum;
        }
    }
    return hmm;
}

double forward_log_likelihood(const DiscreteHmm& hmm, std::span<const int> observations) {
    check_symbols(hmm, observations);
    return scaled_forward(hmm, observations, nullptr, nullptr);
}

std::pair<DiscreteHmm, TrainingReport> baum_welch(const DiscreteHmm& hmm,
                                                  const std::vector<std::vector<int>>& sequences,
                                                  const BaumWelchOptions& options) {
    if (sequences.empty()) {
        throw std::invalid_argument("training collection is empty");
    }
    for (const auto& seq : sequences) {
        check_symbols(hmm, seq);
    }
    if (options.max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be positive");
    }
    if (options.tolerance <= 0.0) {
        throw std::invalid_argument("tolerance must be positive");
    }

    DiscreteHmm model = hmm;
    TrainingReport report;

    auto e_step = [&](ExpectedCounts& counts) {
        double total = 0.0;
        for (const auto& seq : sequences) {
            total += accumulate(model, seq, counts);
        }
        return total;
    };

    auto m_step = [&](const ExpectedCounts& counts) {
        const int n = model.n_states;
        for (int i = 0; i < n; ++i) {
            if (counts.trans_den[i] > 0.0) {
                double row_sum = 0.0;
                const int hi = i + 1 < n ? i + 1 : n - 1;
                for (int j = i; j <= hi; ++j) {
                    model.transition[i][j] = counts.trans_num[i][j] / counts.trans_den[i];
                    row_sum += model.transition[i][j];
                }
                // Kill fp drift so rows stay stochastic to tight tolerance.
                if (row_sum > 0.0) {
                    for (int j = i; j <= hi; ++j) {
                        model.transition[i][j] /= row_sum;
                    }
                }
            }
            // A state with no expected visits keeps its previous row.
            if (counts.emit_den[i] > 0.0) {
                for (int k = 0; k < model.n_symbols; ++k) {
                    model.emission[i][k] = counts.emit_num[i][k] / counts.emit_den[i];
                }
            }
        }
        floor_and_normalize_emissions(model, options.emission_floor);
    };

    ExpectedCounts counts(model);
    double ll_prev = e_step(counts);
    report.log_likelihood_history.push_back(ll_prev);

    for (int it = 0; it < options.max_iterations; ++it) {
        m_step(counts);
        ++report.iterations_run;

        counts = ExpectedCounts(model);
        const double ll = e_step(counts);
        report.log_likelihood_history.push_back(ll);
        if (ll - ll_prev < options.tolerance) {
            report.converged = true;
            break;
        }
        ll_prev = ll;
    }
    return {std::move(model), std::move(report)};
}

std::vector<std::string> validate_hmm(const DiscreteHmm& hmm) {
    std::vector<std::string> issues;
    const int n = hmm.n_states;
    const int m = hmm.n_symbols;
    if (n < 1) issues.push_back("n_states must be >= 1");
    if (m < 1) issues.push_back("n_symbols must be >= 1");
    if (static_cast<int>(hmm.transition.size()) != n) {
        issues.push_back("transition has " + std::to_string(hmm.transition.size()) +
                         " rows, expected " + std::to_string(n));
        return issues;
    }
    if (static_cast<int>(hmm.emission.size()) != n) {
        issues.push_back("emission has " + std::to_string(hmm.emission.size()) +
                         " rows, expected " + std::to_string(n));
        return issues;
    }
    if (static_cast<int>(hmm.initial.size()) != n) {
        issues.push_back("initial has length " + std::to_string(hmm.initial.size()) +
                         ", expected " + std::to_string(n));
        return issues;
    }

    constexpr double kTol = 1e-12;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(hmm.transition[i].size()) != n) {
            issues.push_back("transition row " + std::to_string(i) + " has wrong length");
            continue;
        }
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = hmm.transition[i][j];
            if (!(v >= 0.0 && v <= 1.0)) {
                issues.push_back("transition[" + std::to_string(i) + "][" + std::to_string(j) +
                                 "] = " + std::to_string(v) + " outside [0, 1]");
            }
            if ((j < i || j > i + 1) && v != 0.0) {
                issues.push_back("left-right structure violated at transition[" + std::to_string(i) +
                                 "][" + std::to_string(j) + "] = " + std::to_string(v));
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kTol) {
            issues.push_back("transition row " + std::to_string(i) + " sums to " + std::to_string(sum));
        }
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(hmm.emission[i].size()) != m) {
            issues.push_back("emission row " + std::to_string(i) + " has wrong length");
            continue;
        }
        double sum = 0.0;
        for (int k = 0; k < m; ++k) {
            const double v = hmm.emission[i][k];
            if (!(v >= 0.0 && v <= 1.0)) {
                issues.push_back("emission[" + std::to_string(i) + "][" + std::to_string(k) +
                                 "] = " + std::to_string(v) + " outside [0, 1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kTol) {
            issues.push_back("emission row " + std::to_string(i) + " sums to " + std::to_string(sum));
        }
    }
    double pi_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = hmm.initial[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            issues.push_back("initial[" + std::to_string(i) + "] = " + std::to_string(v) +
                             " outside [0, 1]");
        }
        pi_sum += v;
    }
    if (std::abs(pi_sum - 1.0) > kTol) {
        issues.push_back("initial sums to " + std::to_string(pi_sum));
    }
    return issues;
}

}  // namespace chmm
