#include "hflag/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "hflag/error.hpp"

namespace hflag {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Complex phase(double cycles) {
  const double a = 2.0 * std::numbers::pi * cycles;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

void centered_dft_axis(std::span<Complex> data, const std::vector<std::size_t>& dims,
                       std::size_t axis, const Axis& src, const Axis& dst, int sign,
                       double weight) {
  if (axis >= dims.size()) throw DimensionError("transform axis out of range");
  const std::size_t n = dims[axis];
  if (src.count() != n || dst.count() != n) throw DimensionError("axis count mismatch");
  const double product = src.spacing() * dst.spacing() * static_cast<double>(n);
  if (std::abs(product - 1.0) > 1e-12) throw DimensionError("axes are not mutually dual");
  if (sign != 1 && sign != -1) throw DomainError("transform sign must be +1 or -1");

  std::vector<std::size_t> strides(dims.size(), 1);
  std::size_t total = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    strides[i] = total;
    total *= dims[i];
  }
  if (data.size() != total) throw DimensionError("data size does not match dims");

  const double s = static_cast<double>(sign);
  std::vector<Complex> pre(n), post(n);
  for (std::size_t k = 0; k < n; ++k) {
    pre[k] = phase(s * static_cast<double>(k) * src.spacing() * dst.node(0));
    post[k] = weight * phase(s * src.node(0) * dst.node(k));
  }
  const std::size_t st = strides[axis];
  for (std::size_t f = 0; f < total; ++f) data[f] *= pre[(f / st) % n];

  std::vector<fftw_iodim> loops;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i == axis || dims[i] == 1) continue;
    loops.push_back({static_cast<int>(dims[i]), static_cast<int>(strides[i]),
                     static_cast<int>(strides[i])});
  }
  fftw_iodim dim{static_cast<int>(n), static_cast<int>(st), static_cast<int>(st)};
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_guru_dft(1, &dim, static_cast<int>(loops.size()), loops.data(), ptr, ptr,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericalError("FFT planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  for (std::size_t f = 0; f < total; ++f) data[f] *= post[(f / st) % n];
}

std::vector<Complex> centered_dft(std::span<const Complex> in, const Axis& src, const Axis& dst,
                                  int sign, double weight) {
  std::vector<Complex> out(in.begin(), in.end());
  centered_dft_axis(out, {out.size()}, 0, src, dst, sign, weight);
  return out;
}

}  // namespace hflag
