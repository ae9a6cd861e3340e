#pragma once

namespace teleop {

struct DcmValue {
  double xi = 0.0;     // rad
  double omega = 0.0;  // 1/s
};

// sqrt(g/h). Throws std::domain_error for non-positive h or g.
double natural_frequency(double h, double g);

// Divergent component of motion xi = theta + thetadot/omega.
// Throws std::domain_error for omega <= 0.
DcmValue dcm(double theta, double thetadot, double omega);

}  // namespace teleop
