#pragma once

#include <span>
#include <vector>

#include "hflag/grid.hpp"

namespace hflag {

// In-place centred transform along one axis of a row-major array:
//   out_m = weight * sum_k in_k exp(sign * 2 pi i a_k b_m)
// where a_k are the nodes of `src` and b_m the nodes of `dst`. The two axes
// must be mutually dual (same count, spacing product 1/N).
void centered_dft_axis(std::span<Complex> data, const std::vector<std::size_t>& dims,
                       std::size_t axis, const Axis& src, const Axis& dst, int sign,
                       double weight);

// One-dimensional convenience form.
std::vector<Complex> centered_dft(std::span<const Complex> in, const Axis& src, const Axis& dst,
                                  int sign, double weight);

}  // namespace hflag
