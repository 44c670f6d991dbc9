#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chmm {

using Vec3 = std::array<double, 3>;

inline double norm2(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline bool all_finite(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

// Gesture class labels. 1..7 are simple gestures recognized from a single
// buffered window; 8..9 are complex gestures recognized from a queue of
// simple-gesture outcomes.
enum class GestureLabel : int {
    BeingIdle = 1,
    RotatingLeft = 2,
    RotatingRight = 3,
    TiltingUpward = 4,
    TiltingDownward = 5,
    LeaningLeft = 6,
    LeaningRight = 7,
    Shaking = 8,
    Nodding = 9,
};

inline constexpr int kNumLabels = 9;
inline constexpr int kNumSimpleLabels = 7;

inline constexpr int to_int(GestureLabel l) { return static_cast<int>(l); }

inline constexpr bool is_simple(GestureLabel l) { return to_int(l) <= 7; }
inline constexpr bool is_complex(GestureLabel l) { return to_int(l) >= 8; }

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedVersionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

GestureLabel label_from_int(int value);          // throws ValidationError outside 1..9
std::string_view gesture_name(GestureLabel l);   // "BeingIdle", "RotatingLeft", ...
std::string_view gesture_abbrev(GestureLabel l); // "BI", "RL", ...

// Accepts a numeric label, a full name or an abbreviation ("2", "RotatingLeft", "RL").
std::optional<GestureLabel> parse_label(std::string_view text);

// One 3-axis head angular velocity reading (rad/s) at a frame index.
// omega = (yaw rate, pitch rate, roll rate).
struct AngularVelocitySample {
    std::int64_t frame = 0;
    Vec3 omega{0.0, 0.0, 0.0};
};

struct MotionSequence {
    std::vector<AngularVelocitySample> samples;
    double sample_rate_hz = 75.0;

    bool operator==(const MotionSequence&) const;
    std::size_t size() const { return samples.size(); }
};

inline bool operator==(const AngularVelocitySample& a, const AngularVelocitySample& b) {
    return a.frame == b.frame && a.omega == b.omega;
}

struct LabeledGesture {
    GestureLabel label = GestureLabel::BeingIdle;
    MotionSequence motion;
    std::string id;

    bool operator==(const LabeledGesture&) const = default;
};

struct Dataset {
    std::vector<LabeledGesture> items;
    std::string provenance;

    bool operator==(const Dataset&) const = default;
};

// Frame indices strictly increasing, finite omegas, positive rate.
std::vector<std::string> validate_motion(const MotionSequence& m);

}  // namespace chmm
