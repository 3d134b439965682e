#pragma once

// Regularized singular integrals of the radiation-pressure cross-term
// correlator.
//
// The time kernel is K(u) = (u^2 + a) / (u^2 - b^2)^3 with u = t1 - t2. It has
// third-order poles on the light cone u = +-b. Integrals across the poles are
// defined as the average of the Im b > 0 and Im b < 0 prescriptions, which is
// the Hadamard finite part. The large-tau closed form, its residue building
// blocks, and two numeric routes (contour indentation, eps-displacement with
// Richardson extrapolation) all use this definition.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "radpress/quadrature.hpp"

namespace radpress {

// Transverse geometry of a pair of points on the mirror:
//   a = (z1 - z2)^2 - (y1 - y2)^2,   b^2 = (y1 - y2)^2 + (z1 - z2)^2.
// Invariants: b >= 0 and |a| <= b^2.
class SeparationParams {
public:
  // Throws DomainError when b < 0 or |a| > b^2 (beyond rounding slack).
  static SeparationParams from_ab(double a, double b);
  static SeparationParams from_transverse(double dy, double dz);

  double a() const { return a_; }
  double b() const { return b_; }

  // The y <-> z relabeling of the same pair: a -> -a, b unchanged.
  SeparationParams swapped() const { return SeparationParams(-a_, b_); }

private:
  SeparationParams(double a, double b) : a_(a), b_(b) {}
  double a_;
  double b_;
};

enum class PoleSign { upper, lower };        // Im b > 0 / Im b < 0
enum class ExponentSign { positive, negative }; // e^{+i w u} / e^{-i w u}

enum class PoleTreatment {
  contour_indent,      // exact semicircle detour around u = b, real part
  epsilon_richardson,  // b -> b + i eps, eps -> 0 by Richardson extrapolation
};

struct QuadratureControl {
  // Quadrature nodes per oscillation period 2 pi / w. Each panel carries 15
  // Kronrod nodes, so the default (300) means panels of period / 20.
  double nodes_per_period = 300.0;
  double rel_tol = 1e-11;
  // Radius of the contour detour, as a fraction of min(b, 1/w, distance to
  // the interval end). Any value in (0, 1) gives the same integral.
  double indent_fraction = 0.25;
  PoleTreatment pole_treatment = PoleTreatment::contour_indent;
  std::size_t max_panels = 4'000'000;
};

// Minimum nodes per period accepted by the numeric routes.
inline constexpr double kMinNodesPerPeriod = 20.0;

// Large-tau closed form of J (linear in tau):
//   J = (2 pi tau / 32 b^5) {[b^2 (b^2 + a) w^2 + b^2 - 3a] sin(bw)
//                            + w b (3a - b^2) cos(bw)}.
// Throws DegenerateSeparationError for b = 0.
double j_closed_form(const SeparationParams &sep, double omega, double tau);

// g(x) = [(1 + x^2) sin x - x cos x] / x^3, the closed-form bracket averaged
// over the separation angle (a -> 0) and divided by x^3; g(0) = 4/3.
double angle_averaged_bracket(double x);

// Closed form with the removable b -> 0 singularity handled by a series; used
// by the area integrators, which legitimately reach b = 0. Requires a = 0
// (angle-averaged kernel) when b is small.
double j_closed_form_angle_averaged(double b, double omega, double tau);

// One of the four residue contributions
//   (upper, +):  pi i  d^2/du^2 [(u^2+a)/(u+b)^3 e^{+iwu}] at u = +b
//   (upper, -): -pi i  d^2/du^2 [(u^2+a)/(u-b)^3 e^{-iwu}] at u = -b
//   (lower, -): -pi i  d^2/du^2 [(u^2+a)/(u+b)^3 e^{-iwu}] at u = +b
//   (lower, +):  pi i  d^2/du^2 [(u^2+a)/(u-b)^3 e^{+iwu}] at u = -b
// Throws DegenerateSeparationError for b = 0.
std::complex<double> residue_term(PoleSign pole, ExponentSign exponent,
                                  const SeparationParams &sep, double omega);

// J = (tau / 8) * sum of the four residue terms (real part).
double j_from_residues(const SeparationParams &sep, double omega, double tau);

// Finite-tau double integral
//   J(tau) = int_0^tau dt1 int_0^tau dt2 K(t1 - t2) cos(w t1) cos(w t2)
// reduced to a single u-integral and evaluated with the pole treatment in
// `ctl`. Throws DegenerateSeparationError for b = 0 and AccuracyError when
// the control under-resolves the oscillation or the pole sits on the
// integration boundary.
double j_numeric_oracle(const SeparationParams &sep, double omega, double tau,
                        const QuadratureControl &ctl = {});

// Same double integral with a smooth switching window W(t) on [t0, t1]:
//   int int W(t1) W(t2) K(t1 - t2) cos(w t1) cos(w t2) dt1 dt2.
// W must vanish with its first two derivatives at both ends. Unlike the
// rectangular route this also accepts b = 0 (a must then be 0 and the kernel
// is 1/u^4, a fourth-order pole at u = 0).
struct SmoothWindow {
  std::function<double(double)> value;
  double t0 = 0.0;
  double t1 = 0.0;
};
double j_numeric_windowed(const SeparationParams &sep, double omega,
                          const SmoothWindow &window,
                          const QuadratureControl &ctl = {});

// Envelope F(t, t') sampled on a square grid t_i = t0 + i * step (same nodes
// on both axes), row-major values[i * n + j] = F(t_i, t'_j).
struct KernelSample {
  double t0 = 0.0;
  double step = 0.0;
  std::size_t n = 0;
  std::vector<double> values;

  static KernelSample from_function(const std::function<double(double, double)> &f,
                                    double t0, double t1, std::size_t n);
  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

struct QuarticControl {
  // Allowed |F| in the three outermost rows/columns relative to max |F|.
  double boundary_tolerance = 1e-8;
};

// Regularized int int F(t,t') / (t - t')^4 dt dt', evaluated through
//   1/(t-t')^4 = -(1/12) d^2/dt^2 d^2/dt'^2 ln (t-t')^2
// as -(1/12) int int ln (t-t')^2 d_t^2 d_t'^2 F dt dt'. The fourth derivative
// is taken by 4th-order finite differences; the log kernel is integrated
// exactly against piecewise-linear interpolants (product trapezoid).
// Throws ContractError when F does not vanish at the grid boundary.
double regularized_quartic_integral(const KernelSample &sample,
                                    const QuarticControl &ctl = {});

} // namespace radpress
