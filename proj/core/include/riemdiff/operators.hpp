#pragma once

#include <span>

#include "riemdiff/grid.hpp"
#include "riemdiff/metric.hpp"

namespace riemdiff {

// Coordinate derivatives d_i v by second-order central differences.
OneFormField differential(const ScalarField& v);

// (grad v)^j = g^ij d_i v
VectorField gradient(const ScalarField& v, const MetricField& metric);

// d_k X^k + Gamma^j_kj X^k, evaluated as (1/sqrt|g|) D_k (sqrt|g| X^k) so that
// sum_x sqrt|g| div X vanishes and curl-type fields built from central
// differences are exactly divergence free.
ScalarField div_vector(const VectorField& x, const MetricField& metric);

// g^ij d_i w_j - Gamma^k_il g^il w_k
ScalarField div_oneform(const OneFormField& w, const MetricField& metric);

// (Div T)_i = d_j T^j_i + Gamma^j_jl T^l_i - Gamma^l_ji T^j_l
OneFormField div_tensor11(const Tensor11Field& t, const MetricField& metric);

// Div Div T in the expanded eight-term coordinate form; second derivatives
// use the 3-point stencil on the diagonal and the 4-corner cross stencil.
ScalarField divdiv_tensor11(const Tensor11Field& t, const MetricField& metric);

// Conservative Laplace-Beltrami operator. Diagonal fluxes live on cell faces
// with the face coefficient averaged from the two adjacent nodes; the mixed
// term is assembled cell by cell from a bilinear form. The discrete operator
// is symmetric in the sqrt|g| h^d inner product and sums to zero against it.
ScalarField laplace_beltrami(const ScalarField& v, const MetricField& metric);

// (T^T)^k_i = g^kl T^m_l g_mi
Tensor11Field transpose11(const Tensor11Field& t, const MetricField& metric);
// Same, for one node; `t` and `out` hold d*d components and must not alias.
void transpose_at(const MetricField& metric, std::size_t node, std::span<const double> t,
                  std::span<double> out) noexcept;

// |w|^2_g = g^ij w_i w_j
ScalarField oneform_norm_sq(const OneFormField& w, const MetricField& metric);

// sum_x v sqrt|g| h^d
double integrate(const ScalarField& v, const MetricField& metric);
// Same with |v|.
double integrate_abs(const ScalarField& v, const MetricField& metric);

VectorField sharp(const OneFormField& w, const MetricField& metric);
OneFormField flat(const VectorField& x, const MetricField& metric);

}  // namespace riemdiff
