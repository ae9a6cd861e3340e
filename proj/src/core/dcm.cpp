#include "teleop/core/dcm.hpp"

#include <cmath>
#include <stdexcept>

namespace teleop {

double natural_frequency(double h, double g) {
  if (!(h > 0.0) || !(g > 0.0)) {
    throw std::domain_error("natural_frequency: height and gravity must be positive");
  }
  return std::sqrt(g / h);
}

DcmValue dcm(double theta, double thetadot, double omega) {
  if (!(omega > 0.0)) throw std::domain_error("dcm: omega must be positive");
  return {theta + thetadot / omega, omega};
}

}  // namespace teleop
