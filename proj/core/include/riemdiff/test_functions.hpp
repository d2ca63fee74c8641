#pragma once

#include <cstdint>
#include <vector>

namespace riemdiff {

// Smooth periodic space-time weight
//   phi(t, x) = c0 + amp cos(2 pi (k1 x1 + k2 x2) + phase) cos(omega t + tphase).
struct SpaceTimeTest {
  double c0 = 1.0;
  double amp = 0.0;
  int k1 = 0;
  int k2 = 0;
  double phase = 0.0;
  double omega = 0.0;
  double tphase = 0.0;

  double operator()(double t, double x1, double x2) const noexcept;
};

// Smooth bump compactly supported in (a, b) subset (0, 1):
//   theta(xi) = sin^4(pi (xi - a) / (b - a)) inside, 0 outside.
struct XiBump {
  double a = 0.1;
  double b = 0.9;

  double operator()(double xi) const noexcept;
  double derivative(double xi) const noexcept;
};

struct KineticTest {
  SpaceTimeTest phi;
  XiBump theta;
};

// Deterministic batteries drawn from a seeded mt19937_64. The first space-time
// weight is always phi = 1.
std::vector<SpaceTimeTest> space_time_battery(std::uint64_t seed, int count = 5);
std::vector<KineticTest> kinetic_battery(std::uint64_t seed, int count = 5);

}  // namespace riemdiff
