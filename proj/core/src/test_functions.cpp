#include "riemdiff/test_functions.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace riemdiff {

double SpaceTimeTest::operator()(double t, double x1, double x2) const noexcept {
  const double arg = 2.0 * std::numbers::pi * (k1 * x1 + k2 * x2) + phase;
  return c0 + amp * std::cos(arg) * std::cos(omega * t + tphase);
}

double XiBump::operator()(double xi) const noexcept {
  if (xi <= a || xi >= b) return 0.0;
  const double s = std::sin(std::numbers::pi * (xi - a) / (b - a));
  return s * s * s * s;
}

double XiBump::derivative(double xi) const noexcept {
  if (xi <= a || xi >= b) return 0.0;
  const double k = std::numbers::pi / (b - a);
  const double arg = k * (xi - a);
  const double s = std::sin(arg);
  return 4.0 * s * s * s * std::cos(arg) * k;
}

std::vector<SpaceTimeTest> space_time_battery(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> wave(0, 2);
  std::vector<SpaceTimeTest> out;
  out.push_back(SpaceTimeTest{});
  while (static_cast<int>(out.size()) < count) {
    SpaceTimeTest f;
    f.c0 = 0.5 + unit(rng);
    f.amp = 0.25 + 0.5 * unit(rng);
    f.k1 = 1 + wave(rng) % 2;
    f.k2 = wave(rng);
    f.phase = 2.0 * std::numbers::pi * unit(rng);
    f.omega = 10.0 * unit(rng);
    f.tphase = 2.0 * std::numbers::pi * unit(rng);
    out.push_back(f);
  }
  return out;
}

std::vector<KineticTest> kinetic_battery(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto phis = space_time_battery(seed, count);
  std::vector<KineticTest> out;
  for (const auto& phi : phis) {
    XiBump theta;
    theta.a = 0.05 + 0.25 * unit(rng);
    theta.b = 0.7 + 0.25 * unit(rng);
    out.push_back({phi, theta});
  }
  return out;
}

}  // namespace riemdiff
