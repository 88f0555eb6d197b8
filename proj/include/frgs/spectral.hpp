#pragma once

#include "frgs/field.hpp"

namespace frgs {

/// (-Laplace)^alpha f through the Fourier multiplier |xi|^(2 alpha).
/// Input real, multiplier even, so the result is real by construction;
/// the unpaired Nyquist mode uses |xi| from its negative index.
Field apply_fractional_laplacian(const Field& f, double alpha);

/// (I + tau (-Laplace)^alpha)^{-1} f, i.e. division by 1 + tau |xi|^(2 alpha)
/// in Fourier space.
Field apply_resolvent(const Field& f, double tau, double alpha);

/// Squared homogeneous Sobolev seminorm: sum_xi |xi|^(2 alpha) |fhat(xi)|^2
/// with the normalization that makes Parseval exact on the grid.
double sobolev_seminorm_sq(const Field& f, double alpha);

/// Spectral-side L2 mass (Parseval counterpart of lebesgue_norm(f,2)^2).
double l2_norm_sq_spectral(const Field& f);

/// Rectangle-rule L^p norm: (h^N sum |f|^p)^(1/p). Requires p >= 1.
double lebesgue_norm(const Field& f, double p);

/// lebesgue_norm(f, 2)^2.
double mass(const Field& f);

/// h^N sum f*g.
double inner_product(const Field& f, const Field& g);

/// Samples the trigonometric interpolant of f at lambda*x for every node x.
/// Requires 0 < lambda <= 1 (expanding dilations); the target points always
/// stay inside the box.
Field resample_scaled(const Field& f, double lambda);

/// Contracting lattice dilation by an integer factor k >= 1:
/// g(x) = k^(N/2) f(k x) with samples taken node-exactly and zero outside
/// the central window where k x leaves the box.
Field dilate_lattice(const Field& f, int k);

}  // namespace frgs
