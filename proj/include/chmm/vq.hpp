#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chmm/types.hpp"

namespace chmm {

// K cluster centers over 3-D angular-velocity space. Symbol j means
// "nearest center is centers[j]". The codebook size doubles as the HMM
// alphabet size (M = K).
struct Codebook {
    std::vector<Vec3> centers;
    double inertia = 0.0;  // final sum of squared distances over the fit data

    int k() const { return static_cast<int>(centers.size()); }

    bool operator==(const Codebook&) const = default;
};

struct KmeansReport {
    // Inertia after each assignment step, one history per restart.
    std::vector<std::vector<double>> inertia_histories;
    int best_restart = -1;
};

// Lloyd's algorithm with seeded restarts; the codebook with the lowest
// inertia wins (ties: lowest restart index). Initial centers are k distinct
// data points sampled uniformly. A cluster that loses all members is
// re-seeded to the point farthest from its previous center.
Codebook kmeans_fit(std::span<const Vec3> vectors, int k, std::uint64_t seed, int restarts = 5,
                    int max_iterations = 100, KmeansReport* report = nullptr);

// Index of the nearest center by Euclidean distance; exact ties go to the
// lowest index. Throws std::invalid_argument on non-finite input.
int quantize(const Codebook& codebook, const Vec3& v);

std::vector<int> quantize_sequence(const Codebook& codebook, const MotionSequence& motion);

std::vector<std::string> validate_codebook(const Codebook& codebook);

}  // namespace chmm
