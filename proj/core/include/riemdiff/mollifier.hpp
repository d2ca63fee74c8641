#pragma once

#include <vector>

#include "riemdiff/grid.hpp"

namespace riemdiff {

// Polynomial bump profiles of unit mass:
//   omega2(s) = 315/256 (1 - s^2)^4              on (-1, 1)
//   omega1(s) = 2 omega2(2 s + 1)                on (-1, 0)
double omega2(double s) noexcept;
double omega1(double s) noexcept;

enum class KernelShape { symmetric, one_sided };

// Discrete kernel rho_eps sampled at integer offsets and renormalised to
// unit sum. Applying it computes F_i <- sum_k weights[k] F_{i - (first + k)},
// the discrete form of (F * rho)(t) = int F(s) rho(t - s) ds; the one-sided
// kernel therefore looks ahead.
struct Kernel1D {
  int first = 0;
  std::vector<double> weights;
};
// Throws ConfigError when eps < 2 step.
Kernel1D make_kernel(KernelShape shape, double eps, double step);

// Periodic convolution in x with the product kernel along every axis.
ScalarField mollify_x(const ScalarField& f, double eps, KernelShape shape = KernelShape::symmetric);

// Apply a kernel along a strided line of `count` samples; indices outside
// [0, count) are clamped (constant extension).
void convolve_clamped(const Kernel1D& k, const double* in, double* out, int count, std::ptrdiff_t stride);

// (t, x) mollification of a uniformly spaced time series: one-sided omega1 in
// t, symmetric omega2 in x.
std::vector<ScalarField> mollify_tx(const std::vector<ScalarField>& series, double dt, double eps);

}  // namespace riemdiff
