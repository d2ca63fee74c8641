#include "riemdiff/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riemdiff/error.hpp"

namespace riemdiff {

double omega2(double s) noexcept {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return 315.0 / 256.0 * q * q * q * q;
}

double omega1(double s) noexcept { return 2.0 * omega2(2.0 * s + 1.0); }

Kernel1D make_kernel(KernelShape shape, double eps, double step) {
  if (!(eps >= 2.0 * step * (1.0 - 1e-12))) {
    throw ConfigError("mollifier scale " + std::to_string(eps) + " is narrower than two cells of " +
                      std::to_string(step));
  }
  const int reach = static_cast<int>(std::ceil(eps / step));
  Kernel1D k;
  k.first = -reach;
  double sum = 0.0;
  for (int j = -reach; j <= reach; ++j) {
    const double s = j * step / eps;
    const double w = shape == KernelShape::symmetric ? omega2(s) : omega1(s);
    k.weights.push_back(w);
    sum += w;
  }
  for (double& w : k.weights) w /= sum;
  // trim zero tails
  while (!k.weights.empty() && k.weights.back() == 0.0) k.weights.pop_back();
  std::size_t lead = 0;
  while (lead < k.weights.size() && k.weights[lead] == 0.0) ++lead;
  k.weights.erase(k.weights.begin(), k.weights.begin() + static_cast<std::ptrdiff_t>(lead));
  k.first += static_cast<int>(lead);
  return k;
}

void convolve_clamped(const Kernel1D& k, const double* in, double* out, int count, std::ptrdiff_t stride) {
  for (int i = 0; i < count; ++i) {
    double s = 0.0;
    for (std::size_t q = 0; q < k.weights.size(); ++q) {
      const int src = std::clamp(i - (k.first + static_cast<int>(q)), 0, count - 1);
      s += k.weights[q] * in[src * stride];
    }
    out[i * stride] = s;
  }
}

ScalarField mollify_x(const ScalarField& f, double eps, KernelShape shape) {
  const ChartGrid& grid = f.grid();
  const Kernel1D k = make_kernel(shape, eps, grid.h());
  ScalarField cur = f;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    ScalarField next(grid);
    for (std::size_t node = 0; node < grid.size(); ++node) {
      double s = 0.0;
      for (std::size_t q = 0; q < k.weights.size(); ++q) {
        s += k.weights[q] * cur(grid.shift(node, axis, -(k.first + static_cast<int>(q))));
      }
      next(node) = s;
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<ScalarField> mollify_tx(const std::vector<ScalarField>& series, double dt, double eps) {
  if (series.empty()) return {};
  const Kernel1D kt = make_kernel(KernelShape::one_sided, eps, dt);
  const int count = static_cast<int>(series.size());
  const std::size_t nodes = series.front().size();
  std::vector<double> line(static_cast<std::size_t>(count)), res(static_cast<std::size_t>(count));
  std::vector<ScalarField> out(series.size(), ScalarField(series.front().grid()));
  for (std::size_t node = 0; node < nodes; ++node) {
    for (int i = 0; i < count; ++i) line[static_cast<std::size_t>(i)] = series[static_cast<std::size_t>(i)](node);
    convolve_clamped(kt, line.data(), res.data(), count, 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)](node) = res[static_cast<std::size_t>(i)];
  }
  for (auto& f : out) f = mollify_x(f, eps);
  return out;
}

}  // namespace riemdiff
