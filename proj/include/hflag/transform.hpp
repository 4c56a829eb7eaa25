#pragma once

#include <vector>

#include "hflag/grid.hpp"

namespace hflag {

// Euclidean Fourier transform F f(w) = int f(x) e^{-2 pi i x.w} dx on all axes.
// Discrete Plancherel holds exactly: l2_norm(fourier(f)) == l2_norm(f).
SampledField fourier(const SampledField& f);
SampledField inverse_fourier(const SampledField& f);

// Transform only the listed axes. Axes already in the target domain are an error.
SampledField partial_fourier(const SampledField& f, const std::vector<std::size_t>& axes);
SampledField inverse_partial_fourier(const SampledField& f, const std::vector<std::size_t>& axes);

// sqrt(sum |f|^2 * cell volume)
double l2_norm(const SampledField& f);

double max_abs_difference(const SampledField& a, const SampledField& b);

// Fields on H^1 use axes (x, y, t); index of the central axis.
inline constexpr std::size_t kCentralAxis = 2;

// f*(h) = conj f(h^{-1}). Values off the t-grid come from band-limited
// interpolation in t; the (x, y) reflection wraps periodically.
SampledField star_involution(const SampledField& f);

// Group convolution (f * g)(h) = int f(h') g(h'^{-1} h) dh', computed fiberwise
// in the central frequency lambda as a twisted convolution over (x, y).
SampledField convolve(const SampledField& f, const SampledField& g, int jobs = 1);

// Keep the central-frequency bins with eps <= |lambda| <= 1/eps.
SampledField lambda_filter(const SampledField& f, double eps);

// Unit point mass at the identity, sampled as 1/cell-volume at the origin node.
SampledField identity_spike(const Axis& x, const Axis& y, const Axis& t);

// Central-frequency slice F_t f(., ., lambda) for a grid bin lambda; the result has
// axes (x, y) on the spatial side. Throws DomainError for off-grid lambda.
SampledField central_slice(const SampledField& f, double lambda);

// int int |F_t f(x, y, lambda)|^2 dx dy
double slice_energy(const SampledField& f, double lambda);

// Check a field is a group-side H^1 field and throw otherwise.
void require_group_field(const SampledField& f, const char* what);

}  // namespace hflag
