#include "chmm/vq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chmm/rng.hpp"

namespace chmm {

namespace {

double dist2(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

int nearest(std::span<const Vec3> centers, const Vec3& v) {
    int best = 0;
    double best_d = dist2(centers[0], v);
    for (std::size_t j = 1; j < centers.size(); ++j) {
        const double d = dist2(centers[j], v);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

struct LloydResult {
    std::vector<Vec3> centers;
    double inertia = 0.0;
    std::vector<double> inertia_history;
};

LloydResult lloyd(std::span<const Vec3> data, int k, std::uint64_t seed, int max_iterations) {
    const std::size_t n = data.size();
    Rng rng(seed);

    // k distinct data points as initial centers (partial Fisher-Yates).
    std::vector<std::size_t> index(n);
    for (std::size_t i = 0; i < n; ++i) index[i] = i;
    for (int j = 0; j < k; ++j) {
        const auto pick = j + static_cast<std::size_t>(rng.below(n - j));
        std::swap(index[j], index[pick]);
    }
    LloydResult result;
    result.centers.reserve(k);
    for (int j = 0; j < k; ++j) {
        result.centers.push_back(data[index[j]]);
    }

    std::vector<int> assignment(n, -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int a = nearest(result.centers, data[i]);
            inertia += dist2(result.centers[a], data[i]);
            if (a != assignment[i]) {
                assignment[i] = a;
                changed = true;
            }
        }
        result.inertia = inertia;
        result.inertia_history.push_back(inertia);
        if (!changed) {
            break;
        }

        std::vector<Vec3> sums(k, Vec3{0.0, 0.0, 0.0});
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int a = assignment[i];
            sums[a][0] += data[i][0];
            sums[a][1] += data[i][1];
            sums[a][2] += data[i][2];
            ++sizes[a];
        }
        for (int j = 0; j < k; ++j) {
            if (sizes[j] > 0) {
                result.centers[j] = {sums[j][0] / sizes[j], sums[j][1] / sizes[j],
                                     sums[j][2] / sizes[j]};
            } else {
                // Re-seed a dead cluster to the point farthest from its old
                // center so k stays constant.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = dist2(result.centers[j], data[i]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                result.centers[j] = data[far];
            }
        }
    }
    return result;
}

}  // namespace

Codebook kmeans_fit(std::span<const Vec3> vectors, int k, std::uint64_t seed, int restarts,
                    int max_iterations, KmeansReport* report) {
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    if (vectors.size() < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("need at least k = " + std::to_string(k) + " vectors, got " +
                                    std::to_string(vectors.size()));
    }
    if (restarts < 1 || max_iterations < 1) {
        throw std::invalid_argument("restarts and max_iterations must be positive");
    }
    for (const auto& v : vectors) {
        if (!all_finite(v)) {
            throw std::invalid_argument("input vector with non-finite component");
        }
    }

    LloydResult best;
    int best_restart = -1;
    if (report) {
        report->inertia_histories.clear();
    }
    for (int r = 0; r < restarts; ++r) {
        LloydResult run = lloyd(vectors, k, derive_seed(seed, 0x6b6d0000ULL + r), max_iterations);
        if (report) {
            report->inertia_histories.push_back(run.inertia_history);
        }
        if (best_restart < 0 || run.inertia < best.inertia) {
            best = std::move(run);
            best_restart = r;
        }
    }
    if (report) {
        report->best_restart = best_restart;
    }

    Codebook codebook;
    codebook.centers = std::move(best.centers);
    codebook.inertia = best.inertia;
    return codebook;
}

int quantize(const Codebook& codebook, const Vec3& v) {
    if (codebook.centers.empty()) {
        throw std::invalid_argument("codebook is empty");
    }
    if (!all_finite(v)) {
        throw std::invalid_argument("cannot quantize non-finite vector");
    }
    return nearest(codebook.centers, v);
}

std::vector<int> quantize_sequence(const Codebook& codebook, const MotionSequence& motion) {
    std::vector<int> symbols;
    symbols.reserve(motion.samples.size());
    for (const auto& sample : motion.samples) {
        symbols.push_back(quantize(codebook, sample.omega));
    }
    return symbols;
}

std::vector<std::string> validate_codebook(const Codebook& codebook) {
    std::vector<std::string> issues;
    if (codebook.centers.empty()) {
        issues.push_back("codebook has no centers");
    }
    for (std::size_t j = 0; j < codebook.centers.size(); ++j) {
        if (!all_finite(codebook.centers[j])) {
            issues.push_back("center " + std::to_string(j) + " has a non-finite coordinate");
        }
    }
    if (!(codebook.inertia >= 0.0) || !std::isfinite(codebook.inertia)) {
        issues.push_back("inertia must be finite and non-negative");
    }
    return issues;
}

}  // namespace chmm
