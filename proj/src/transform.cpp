#include "hflag/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hflag/error.hpp"
#include "hflag/fft.hpp"
#include "hflag/parallel.hpp"

namespace hflag {

namespace {

std::vector<std::size_t> dims_of(const SampledField& f) {
  std::vector<std::size_t> d;
  for (const auto& a : f.axes()) d.push_back(a.count());
  return d;
}

Complex cis(double cycles) {
  const double a = 2.0 * std::numbers::pi * cycles;
  return {std::cos(a), std::sin(a)};
}

SampledField switch_axes(const SampledField& f, const std::vector<std::size_t>& which,
                         Domain from) {
  auto axes = f.axes();
  auto domains = f.domains();
  for (std::size_t a : which) {
    if (a >= f.rank()) throw DimensionError("axis " + std::to_string(a) + " out of range");
    if (domains[a] != from)
      throw DomainError("axis " + std::to_string(a) + " is already in the target domain");
    axes[a] = axes[a].dual();
    domains[a] = from == Domain::Spatial ? Domain::Spectral : Domain::Spatial;
  }
  SampledField out(axes, domains);
  std::copy(f.values().begin(), f.values().end(), out.values().begin());
  const auto dims = dims_of(f);
  const int sign = from == Domain::Spatial ? -1 : 1;
  for (std::size_t a : which) {
    const Axis& src = f.axis(a);
    centered_dft_axis(out.values(), dims, a, src, src.dual(), sign, src.spacing());
  }
  return out;
}

std::vector<std::size_t> all_axes(const SampledField& f) {
  std::vector<std::size_t> r(f.rank());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = i;
  return r;
}

// t-partial transform unless the central axis is already spectral.
SampledField to_central_frequency(const SampledField& f) {
  if (f.domain(kCentralAxis) == Domain::Spectral) return f;
  return partial_fourier(f, {kCentralAxis});
}

}  // namespace

SampledField fourier(const SampledField& f) { return switch_axes(f, all_axes(f), Domain::Spatial); }

SampledField inverse_fourier(const SampledField& f) {
  return switch_axes(f, all_axes(f), Domain::Spectral);
}

SampledField partial_fourier(const SampledField& f, const std::vector<std::size_t>& axes) {
  return switch_axes(f, axes, Domain::Spatial);
}

SampledField inverse_partial_fourier(const SampledField& f, const std::vector<std::size_t>& axes) {
  return switch_axes(f, axes, Domain::Spectral);
}

double l2_norm(const SampledField& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return std::sqrt(s * f.weight());
}

double max_abs_difference(const SampledField& a, const SampledField& b) {
  if (!a.same_layout(b)) throw DimensionError("fields have different layouts");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void require_group_field(const SampledField& f, const char* what) {
  if (f.rank() != 3 || !f.all(Domain::Spatial))
    throw DimensionError(std::string(what) + ": expected a group-side field with axes (x, y, t)");
}

SampledField star_involution(const SampledField& f) {
  require_group_field(f, "star_involution");
  SampledField s = partial_fourier(f, {kCentralAxis});
  SampledField r(s.axes(), s.domains());
  const Axis& ax = s.axis(0);
  const Axis& ay = s.axis(1);
  const Axis& al = s.axis(2);
  for (std::size_t i = 0; i < ax.count(); ++i)
    for (std::size_t j = 0; j < ay.count(); ++j)
      for (std::size_t l = 0; l < al.count(); ++l) {
        const Complex v = s.at(ax.reflect_index(i), ay.reflect_index(j), l);
        r.at(i, j, l) = cis(-al.node(l) * ax.node(i) * ay.node(j)) * std::conj(v);
      }
  return inverse_partial_fourier(r, {kCentralAxis});
}

SampledField convolve(const SampledField& f, const SampledField& g, int jobs) {
  require_group_field(f, "convolve");
  require_group_field(g, "convolve");
  if (!f.same_layout(g)) throw DimensionError("convolve: fields live on different grids");
  const SampledField fs = partial_fourier(f, {kCentralAxis});
  const SampledField gs = partial_fourier(g, {kCentralAxis});
  SampledField hs(fs.axes(), fs.domains());
  const Axis& ax = fs.axis(0);
  const Axis& ay = fs.axis(1);
  const Axis& al = fs.axis(2);
  const std::size_t nx = ax.count(), ny = ay.count(), nl = al.count();
  const double cell = ax.spacing() * ay.spacing();

  // Bound on each fiber of the result: cell * ||f^l||_1 * ||g^l||_inf. Fibers whose
  // bound is below double rounding of the largest one are left at zero.
  std::vector<double> bound(nl, 0.0);
  for (std::size_t l = 0; l < nl; ++l) {
    double l1 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        l1 += std::abs(fs.at(i, j, l));
        linf = std::max(linf, std::abs(gs.at(i, j, l)));
      }
    bound[l] = cell * l1 * linf;
  }
  const double cutoff = 1e-17 * *std::max_element(bound.begin(), bound.end());

  parallel_for(nl, jobs, [&](std::size_t l) {
    if (bound[l] == 0.0 || bound[l] < cutoff) return;
    const double lambda = al.node(l);
    std::vector<Complex> a(nx * ny), b(nx * ny), h(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        a[i * ny + j] = fs.at(i, j, l);
        b[i * ny + j] = gs.at(i, j, l);
      }
    // phase[i'][j''] = exp(-2 pi i lambda x_i' y_j'')
    std::vector<Complex> phase(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) phase[i * ny + j] = cis(-lambda * ax.node(i) * ay.node(j));
    // h(i, j) += c(ip, jp) * b(di, dj) * phase(ip, dj) with dj = j - jp wrapped;
    // for fixed (ip, i) the j-sum is a cyclic shift of tmp = b(di, .) * phase(ip, .).
    std::vector<Complex> tmp(ny);
    for (std::size_t ip = 0; ip < nx; ++ip) {
      const Complex* arow = &a[ip * ny];
      const Complex* prow = &phase[ip * ny];
      for (std::size_t i = 0; i < nx; ++i) {
        const Complex* brow = &b[ax.difference_index(i, ip) * ny];
        for (std::size_t d = 0; d < ny; ++d) tmp[d] = brow[d] * prow[d];
        Complex* hrow = &h[i * ny];
        for (std::size_t jp = 0; jp < ny; ++jp) {
          const Complex c = cell * arow[jp];
          if (c == Complex{}) continue;
          // dj = (j - jp + ny/2) mod ny: j in [0, split) maps to dj = j + offset
          const std::size_t offset = (ny + ny / 2 - jp) % ny;
          const std::size_t split = ny - offset;
          for (std::size_t j = 0; j < split; ++j) hrow[j] += c * tmp[j + offset];
          for (std::size_t j = split; j < ny; ++j) hrow[j] += c * tmp[j - split];
        }
      }
    }
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) hs.at(i, j, l) = h[i * ny + j];
  });
  return inverse_partial_fourier(hs, {kCentralAxis});
}

SampledField lambda_filter(const SampledField& f, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("lambda_filter: eps must lie in (0, 1]");
  if (f.rank() != 3) throw DimensionError("lambda_filter: expected axes (x, y, t)");
  const bool spatial = f.domain(kCentralAxis) == Domain::Spatial;
  SampledField s = to_central_frequency(f);
  const Axis& al = s.axis(kCentralAxis);
  const std::size_t st = s.stride(kCentralAxis);
  for (std::size_t q = 0; q < s.size(); ++q) {
    const double mu = std::abs(al.node((q / st) % al.count()));
    if (mu < eps || mu > 1.0 / eps) s[q] = 0.0;
  }
  return spatial ? inverse_partial_fourier(s, {kCentralAxis}) : s;
}

SampledField identity_spike(const Axis& x, const Axis& y, const Axis& t) {
  SampledField f = SampledField::group(x, y, t);
  f.at(x.count() / 2, y.count() / 2, t.count() / 2) = 1.0 / f.weight();
  return f;
}

SampledField central_slice(const SampledField& f, double lambda) {
  if (f.rank() != 3) throw DimensionError("central_slice: expected axes (x, y, t)");
  const SampledField s = to_central_frequency(f);
  const Axis& al = s.axis(kCentralAxis);
  const auto l = al.index_of(lambda);
  if (!l) throw DomainError("lambda " + std::to_string(lambda) + " is not a central-frequency bin");
  SampledField r({s.axis(0), s.axis(1)}, {s.domain(0), s.domain(1)});
  for (std::size_t i = 0; i < s.axis(0).count(); ++i)
    for (std::size_t j = 0; j < s.axis(1).count(); ++j) r[r.flat({i, j})] = s.at(i, j, *l);
  return r;
}

double slice_energy(const SampledField& f, double lambda) {
  const double n = l2_norm(central_slice(f, lambda));
  return n * n;
}

}  // namespace hflag
