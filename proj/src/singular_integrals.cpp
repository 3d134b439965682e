#include "radpress/singular_integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "radpress/errors.hpp"

namespace radpress {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require_nondegenerate(double b, const char *who) {
  if (!(b > 0.0)) {
    std::ostringstream os;
    os << who << ": degenerate separation b = " << b
       << " (coincident transverse points; integrate over the area first)";
    throw DegenerateSeparationError(os.str());
  }
}

void require_finite(double v, const char *what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

double max_panel_for(double omega, const QuadratureControl &ctl) {
  if (!(ctl.nodes_per_period >= kMinNodesPerPeriod)) {
    std::ostringstream os;
    os << "quadrature grid too coarse: " << ctl.nodes_per_period
       << " nodes per period, need at least " << kMinNodesPerPeriod;
    throw AccuracyError(os.str());
  }
  if (omega <= 0.0) return std::numeric_limits<double>::infinity();
  const double period = 2.0 * kPi / omega;
  return 15.0 * period / ctl.nodes_per_period;
}

quad::Control to_quad(double omega, const QuadratureControl &ctl) {
  quad::Control q;
  q.rel_tol = ctl.rel_tol;
  q.max_panel = max_panel_for(omega, ctl);
  q.max_panels = ctl.max_panels;
  return q;
}

// sin(z)/z, stable near 0.
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Weight left after integrating cos(w t1) cos(w t2) over v = t1 + t2 on the
// square [0,tau]^2 at fixed u = t1 - t2 >= 0 (both halves u >= 0, u < 0):
//   (tau - u) cos(w u) + cos(w tau) (tau - u) sinc(w (tau - u)).
cplx rectangular_weight(cplx u, double omega, double tau) {
  const cplx rem = tau - u;
  return rem * std::cos(omega * u) + std::cos(omega * tau) * rem * sinc(omega * rem);
}

template <class T>
T time_kernel(T u, double a, T b) {
  const T d = u * u - b * b;
  return (u * u + a) / (d * d * d);
}

double j_rectangular_indent(const SeparationParams &sep, double omega,
                            double tau, const QuadratureControl &ctl) {
  const double a = sep.a();
  const double b = sep.b();
  const quad::Control q = to_quad(omega, ctl);

  auto f = [&](double u) {
    return time_kernel(u, a, b) * rectangular_weight(cplx(u, 0.0), omega, tau).real();
  };

  const double gap = std::abs(tau - b);
  if (gap <= 1e-9 * tau) {
    std::ostringstream os;
    os << "j_numeric_oracle: pole u = b = " << b
       << " sits on the integration boundary tau = " << tau;
    throw AccuracyError(os.str());
  }
  if (b > tau) {
    return quad::integrate(f, 0.0, tau, q).value;
  }

  double radius = std::min(b, gap);
  if (omega > 0.0) radius = std::min(radius, 1.0 / omega);
  radius *= std::clamp(ctl.indent_fraction, 1e-6, 0.9);

  const std::array<double, 2> left = {0.0, b - radius};
  const std::array<double, 2> right = {b + radius, tau};
  const double real_part = quad::integrate(f, std::span<const double>(left), q).value +
                           quad::integrate(f, std::span<const double>(right), q).value;

  // Upper semicircle from b - r to b + r (theta: pi -> 0). The lower detour
  // is its complex conjugate, so the average of both is its real part.
  auto arc = [&](double theta) {
    const cplx e = std::polar(1.0, theta);
    const cplx u = b + radius * e;
    const cplx du = cplx(0.0, 1.0) * radius * e;
    return time_kernel(u, a, cplx(b, 0.0)) * rectangular_weight(u, omega, tau) * du;
  };
  quad::Control qa;
  qa.rel_tol = ctl.rel_tol;
  qa.max_panels = ctl.max_panels;
  const cplx arc_value = -quad::integrate(arc, 0.0, kPi, qa).value;
  return real_part + arc_value.real();
}

double j_rectangular_epsilon(const SeparationParams &sep, double omega,
                             double tau, const QuadratureControl &ctl) {
  const double a = sep.a();
  const double b = sep.b();
  quad::Control q = to_quad(omega, ctl);
  // The extrapolation error (~1e-9) dominates well before this tolerance.
  q.rel_tol = std::max(ctl.rel_tol, 1e-10);

  double scale = b;
  if (omega > 0.0) scale = std::min(scale, 1.0 / omega);
  if (b < tau) scale = std::min(scale, tau - b);
  const double eps0 = 0.05 * scale;

  // The real part of the displaced kernel is odd about u = b to leading
  // order, so the pole neighbourhood is folded onto s = |u - b| before
  // integrating; otherwise the two sides cancel at the 1/eps^2 scale.
  const double fold = 0.5 * scale;
  constexpr int kLevels = 6;
  std::array<double, kLevels> values{};
  for (int k = 0; k < kLevels; ++k) {
    const double eps = eps0 / std::pow(2.0, k);
    const cplx bc(b, eps);
    auto f = [&](double u) {
      return (time_kernel(cplx(u, 0.0), a, bc) *
              rectangular_weight(cplx(u, 0.0), omega, tau))
          .real();
    };
    if (b >= tau) {
      values[k] = quad::integrate(f, 0.0, tau, q).value;
      continue;
    }
    auto folded = [&](double s) { return f(b + s) + f(b - s); };
    std::vector<double> sp = {0.0};
    for (double m : {1.0, 4.0, 32.0}) {
      if (m * eps < fold) sp.push_back(m * eps);
    }
    sp.push_back(fold);
    // Each side alone is of order |f(b + eps)| eps; the folded sum cannot be
    // resolved below rounding of that size.
    quad::Control qf = q;
    qf.abs_tol = 1e-12 * std::abs(f(b + eps)) * eps;
    const std::array<double, 2> left = {0.0, b - fold};
    const std::array<double, 2> right = {b + fold, tau};
    values[k] = quad::integrate(f, std::span<const double>(left), q).value +
                quad::integrate(folded, std::span<const double>(sp), qf).value +
                quad::integrate(f, std::span<const double>(right), q).value;
  }
  // Richardson table for a power series in eps with all integer orders.
  for (int order = 1; order < kLevels; ++order) {
    const double factor = std::pow(2.0, order);
    for (int k = kLevels - 1; k >= order; --k) {
      values[k] = (factor * values[k] - values[k - 1]) / (factor - 1.0);
    }
  }
  return values[kLevels - 1];
}

// Fourth-order central difference of a scalar function.
template <class F>
double derivative(F &&f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// int_0^d f(s) ds for an even integrand whose subtracted form cancels badly
// near s = 0. The sliver [0, s_c] uses f ~ A + B s^2 fitted at s_c and 2 s_c.
template <class F>
double integrate_even_from_zero(F &&f, double d, const quad::Control &q) {
  const double sc = 0.05 * d;
  const double f1 = f(sc);
  const double f2 = f(2.0 * sc);
  const double bcoef = (f2 - f1) / (3.0 * sc * sc);
  const double acoef = f1 - bcoef * sc * sc;
  const double sliver = sc * (acoef + bcoef * sc * sc / 3.0);
  return sliver + quad::integrate(f, sc, d, q).value;
}

} // namespace

SeparationParams SeparationParams::from_ab(double a, double b) {
  require_finite(a, "separation a");
  require_finite(b, "separation b");
  if (b < 0.0) {
    throw DomainError("separation b must be non-negative");
  }
  const double b2 = b * b;
  if (std::abs(a) > b2 * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream os;
    os << "separation |a| = " << std::abs(a) << " exceeds b^2 = " << b2;
    throw DomainError(os.str());
  }
  return SeparationParams(std::clamp(a, -b2, b2), b);
}

SeparationParams SeparationParams::from_transverse(double dy, double dz) {
  require_finite(dy, "dy");
  require_finite(dz, "dz");
  return SeparationParams(dz * dz - dy * dy, std::hypot(dy, dz));
}

double j_closed_form(const SeparationParams &sep, double omega, double tau) {
  require_nondegenerate(sep.b(), "j_closed_form");
  const double a = sep.a();
  const double b = sep.b();
  const double b2 = b * b;
  const double x = b * omega;
  const double bracket = (b2 * (b2 + a) * omega * omega + b2 - 3.0 * a) * std::sin(x) +
                         omega * b * (3.0 * a - b2) * std::cos(x);
  return 2.0 * kPi * tau / (32.0 * std::pow(b, 5)) * bracket;
}

double angle_averaged_bracket(double x) {
  if (std::abs(x) < 0.05) {
    // Coefficient of x^(2k+1) in the numerator, divided by x^3.
    double term_sum = 0.0;
    double x2k = 1.0; // x^(2k-2)
    double fact_2km1 = 1.0; // (2k-1)!
    for (int k = 1; k <= 6; ++k) {
      if (k > 1) fact_2km1 *= (2.0 * k - 2.0) * (2.0 * k - 1.0);
      const double fact_2k = fact_2km1 * (2.0 * k);
      const double fact_2kp1 = fact_2k * (2.0 * k + 1.0);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double c = sign / fact_2kp1 - sign / fact_2k - sign / fact_2km1;
      term_sum += c * x2k;
      x2k *= x * x;
    }
    return term_sum;
  }
  return ((1.0 + x * x) * std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double j_closed_form_angle_averaged(double b, double omega, double tau) {
  if (b < 0.0) throw DomainError("separation b must be non-negative");
  return 2.0 * kPi * tau / 32.0 * omega * omega * omega * angle_averaged_bracket(b * omega);
}

std::complex<double> residue_term(PoleSign pole, ExponentSign exponent,
                                  const SeparationParams &sep, double omega) {
  require_nondegenerate(sep.b(), "residue_term");
  const double a = sep.a();
  const double b = sep.b();
  const double kappa = (exponent == ExponentSign::positive) ? 1.0 : -1.0;

  // Evaluation point and the partner factor (u + shift)^-3.
  double at = 0.0;
  double shift = 0.0;
  double prefactor = 0.0;
  if (pole == PoleSign::upper && exponent == ExponentSign::positive) {
    at = b, shift = b, prefactor = 1.0;
  } else if (pole == PoleSign::upper && exponent == ExponentSign::negative) {
    at = -b, shift = -b, prefactor = -1.0;
  } else if (pole == PoleSign::lower && exponent == ExponentSign::negative) {
    at = b, shift = b, prefactor = -1.0;
  } else {
    at = -b, shift = -b, prefactor = 1.0;
  }

  const double u = at;
  const double n0 = u * u + a;
  const double n1 = 2.0 * u;
  const double n2 = 2.0;
  const double s = u + shift;
  const double p0 = 1.0 / (s * s * s);
  const double p1 = -3.0 * p0 / s;
  const double p2 = 12.0 * p0 / (s * s);
  const cplx e0 = std::polar(1.0, kappa * omega * u);
  const cplx e1 = cplx(0.0, kappa * omega) * e0;
  const cplx e2 = -omega * omega * e0;

  const cplx second = n2 * p0 * e0 + n0 * p2 * e0 + n0 * p0 * e2 +
                      2.0 * (n1 * p1 * e0 + n1 * p0 * e1 + n0 * p1 * e1);
  return prefactor * kPi * cplx(0.0, 1.0) * second;
}

double j_from_residues(const SeparationParams &sep, double omega, double tau) {
  const cplx sum = residue_term(PoleSign::upper, ExponentSign::positive, sep, omega) +
                   residue_term(PoleSign::upper, ExponentSign::negative, sep, omega) +
                   residue_term(PoleSign::lower, ExponentSign::negative, sep, omega) +
                   residue_term(PoleSign::lower, ExponentSign::positive, sep, omega);
  return tau / 8.0 * sum.real();
}

double j_numeric_oracle(const SeparationParams &sep, double omega, double tau,
                        const QuadratureControl &ctl) {
  require_nondegenerate(sep.b(), "j_numeric_oracle");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive");
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw DomainError("omega must be non-negative");
  }
  switch (ctl.pole_treatment) {
  case PoleTreatment::contour_indent:
    return j_rectangular_indent(sep, omega, tau, ctl);
  case PoleTreatment::epsilon_richardson:
    return j_rectangular_epsilon(sep, omega, tau, ctl);
  }
  return 0.0;
}

double j_numeric_windowed(const SeparationParams &sep, double omega,
                          const SmoothWindow &window,
                          const QuadratureControl &ctl) {
  if (!window.value || !(window.t1 > window.t0)) {
    throw DomainError("j_numeric_windowed: window needs a callable and t1 > t0");
  }
  if (!(omega >= 0.0)) throw DomainError("omega must be non-negative");
  const double a = sep.a();
  const double b = sep.b();
  const double t0 = window.t0;
  const double t1 = window.t1;
  const double length = t1 - t0;
  // The autocorrelation is re-divided by u^4 near the origin, so it needs to
  // be close to machine precision.
  quad::Control q = to_quad(omega, ctl);
  q.rel_tol = std::min(ctl.rel_tol, 1e-14);

  auto g = [&](double t) {
    if (t <= t0 || t >= t1) return 0.0;
    return window.value(t) * std::cos(omega * t);
  };
  // Autocorrelation c(u) = int g(t) g(t - u) dt, even in u.
  auto corr = [&](double u) {
    u = std::abs(u);
    if (u >= length) return 0.0;
    auto integrand = [&](double t) { return g(t) * g(t - u); };
    return quad::integrate(integrand, t0 + u, t1, q).value;
  };
  const double c0 = corr(0.0);
  if (c0 == 0.0) return 0.0;
  q.abs_tol = 1e-13 * c0;

  double scale = length;
  if (omega > 0.0) scale = std::min(scale, 1.0 / omega);
  // J ~ c0 / l^3 with l the shorter of the pole distance and the period.
  const double ell = b > 0.0 ? std::min(b, scale) : scale;
  quad::Control qn = to_quad(omega, ctl);
  qn.rel_tol = std::max(ctl.rel_tol, 1e-9);
  qn.abs_tol = 1e-10 * c0 / (ell * ell * ell);

  if (b == 0.0) {
    if (a != 0.0) throw DomainError("b = 0 requires a = 0");
    // FP int_{-L}^{L} c(u) / u^4 du, symmetric subtraction at u = 0.
    const double hstep = 1e-4 * scale;
    auto gprime = [&](double t) { return derivative(g, t, hstep); };
    auto gp2 = [&](double t) {
      const double d = gprime(t);
      return d * d;
    };
    const double c2 = -quad::integrate(gp2, t0, t1, qn).value;
    const double d = 0.25 * scale;
    auto near = [&](double s) {
      return (corr(s) - c0 - 0.5 * c2 * s * s) / (s * s * s * s);
    };
    auto far = [&](double u) { return corr(u) / (u * u * u * u); };
    const double inner = integrate_even_from_zero(near, d, qn) -
                         c0 / (3.0 * d * d * d) - 0.5 * c2 / d;
    const double outer = quad::integrate(far, d, length, qn).value;
    return 2.0 * (inner + outer);
  }

  // b > 0: J = 2 FP int_0^L K(u) c(u) du with a third-order pole at u = b.
  auto full = [&](double u) { return time_kernel(u, a, b) * corr(u); };
  if (b >= length) {
    return 2.0 * quad::integrate(full, 0.0, length, qn).value;
  }
  const double d = 0.25 * std::min({scale, b, length - b});
  auto h = [&](double u) { return (u * u + a) / std::pow(u + b, 3) * corr(u); };
  const double h1 = derivative(h, b, 0.05 * d);
  auto paired = [&](double s) {
    return (h(b + s) - h(b - s) - 2.0 * h1 * s) / (s * s * s);
  };
  const std::array<double, 2> left = {0.0, b - d};
  const std::array<double, 2> right = {b + d, length};
  const double value = quad::integrate(full, std::span<const double>(left), qn).value +
                       integrate_even_from_zero(paired, d, qn) - 2.0 * h1 / d +
                       quad::integrate(full, std::span<const double>(right), qn).value;
  return 2.0 * value;
}

KernelSample KernelSample::from_function(
    const std::function<double(double, double)> &f, double t0, double t1,
    std::size_t n) {
  if (n < 8 || !(t1 > t0)) {
    throw DomainError("KernelSample needs n >= 8 nodes and t1 > t0");
  }
  KernelSample s;
  s.t0 = t0;
  s.n = n;
  s.step = (t1 - t0) / static_cast<double>(n - 1);
  s.values.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + s.step * static_cast<double>(i);
    for (std::size_t j = 0; j < n; ++j) {
      s.values[i * n + j] = f(t, t0 + s.step * static_cast<double>(j));
    }
  }
  return s;
}

double regularized_quartic_integral(const KernelSample &sample,
                                    const QuarticControl &ctl) {
  const std::size_t n = sample.n;
  const double h = sample.step;
  if (n < 8 || sample.values.size() != n * n || !(h > 0.0)) {
    throw DomainError("regularized_quartic_integral: malformed kernel sample");
  }

  double peak = 0.0;
  for (double v : sample.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;

  double edge = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t idx : {k, n - 1 - k}) {
        edge = std::max({edge, std::abs(sample.at(idx, m)), std::abs(sample.at(m, idx))});
      }
    }
  }
  if (edge > ctl.boundary_tolerance * peak) {
    std::ostringstream os;
    os << "regularization contract violated: envelope reaches " << edge / peak
       << " of its peak within three nodes of the boundary (tolerance "
       << ctl.boundary_tolerance << ")";
    throw ContractError(os.str());
  }

  // Second derivative along one axis, 4th-order stencil, zero outside.
  auto second_diff = [n, h](const std::vector<double> &in, bool along_rows) {
    std::vector<double> out(n * n, 0.0);
    const double inv = 1.0 / (12.0 * h * h);
    auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
      if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(n) ||
          j >= static_cast<std::ptrdiff_t>(n)) {
        return 0.0;
      }
      return in[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
    };
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
        double v = 0.0;
        if (along_rows) {
          v = -at(i - 2, j) + 16 * at(i - 1, j) - 30 * at(i, j) + 16 * at(i + 1, j) -
              at(i + 2, j);
        } else {
          v = -at(i, j - 2) + 16 * at(i, j - 1) - 30 * at(i, j) + 16 * at(i, j + 1) -
              at(i, j + 2);
        }
        out[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = v * inv;
      }
    }
    return out;
  };
  const std::vector<double> d4 = second_diff(second_diff(sample.values, true), false);

  // Diagonal sums S_k = sum_{i - j = k} d4(i, j), k in [-(n-1), n-1].
  std::vector<double> diag(2 * n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      diag[i + n - 1 - j] += d4[i * n + j];
    }
  }

  // Product-integration weights: int ln((t - t_j)^2) phi_i(t) dt for the hat
  // function phi_i, = 2h [ln h + m_{i-j}], m_k = G(k+1) - 2G(k) + G(k-1),
  // G(y) = y^2 ln|y| / 2 - 3 y^2 / 4.
  auto G = [](double y) {
    if (y == 0.0) return 0.0;
    return 0.5 * y * y * std::log(std::abs(y)) - 0.75 * y * y;
  };
  double total = 0.0;
  const double log_h = std::log(h);
  for (std::size_t idx = 0; idx < diag.size(); ++idx) {
    const double k = static_cast<double>(idx) - static_cast<double>(n - 1);
    const double m = G(k + 1.0) - 2.0 * G(k) + G(k - 1.0);
    total += 2.0 * h * (log_h + m) * diag[idx];
  }
  // Outer trapezoid weight h.
  return -(1.0 / 12.0) * h * total;
}

} // namespace radpress
