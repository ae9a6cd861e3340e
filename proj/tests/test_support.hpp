#pragma once

#include "teleop/core/params.hpp"

#include <random>

namespace teleop::testing {

// Fixed-seed generator so every run samples the same cases.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234u);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec4 random_within_limits(const ArmModel& m) {
  Vec4 q;
  for (int i = 0; i < 4; ++i) q[i] = uniform(m.q_min[i], m.q_max[i]);
  return q;
}

inline Vec4 random_vec4(double scale) {
  return Vec4(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
              uniform(-scale, scale));
}

}  // namespace teleop::testing
