#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "radpress/errors.hpp"
#include "radpress/singular_integrals.hpp"
#include "test_support.hpp"

using namespace radpress;
using test_support::rel_diff;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// 2 pi i Res_{u=p} of (u^2 + a) e^{i k w u} / (u^2 - b^2)^3, by the trapezoid
// rule on a circle around the pole (spectrally accurate for analytic f).
cplx contour_residue(double a, double b, double k, double w, double p) {
  const int n = 256;
  const double r = 0.5 * b;
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx e = std::polar(1.0, 2.0 * kPi * j / n);
    const cplx u = p + r * e;
    const cplx f = (u * u + a) * std::exp(cplx(0.0, k * w) * u) / std::pow(u * u - b * b, 3);
    sum += f * cplx(0.0, 1.0) * r * e;
  }
  return sum * (2.0 * kPi / n);
}

// Same residue from the 5-point second difference of (u - p)^3 f = (u^2 + a) e^{ikwu} / (u + p)^3.
cplx fd_residue(double a, double b, double k, double w, double p) {
  (void)b;
  auto h = [&](double u) {
    return (u * u + a) * std::exp(cplx(0.0, k * w * u)) / std::pow(u + p, 3);
  };
  const double step = 2e-3;
  const cplx d2 = (-h(p + 2 * step) + 16.0 * h(p + step) - 30.0 * h(p) + 16.0 * h(p - step) -
                   h(p - 2 * step)) /
                  (12.0 * step * step);
  return 2.0 * kPi * cplx(0.0, 1.0) * 0.5 * d2;
}

// Size of the individual terms of the closed form, for rounding-level gates.
double closed_form_scale(double a, double b, double w, double tau) {
  const double t1 = std::abs(b * b * (b * b + a) * w * w + b * b - 3 * a);
  const double t2 = std::abs(w * b * (3 * a - b * b));
  return 2 * kPi * tau / (32 * std::pow(b, 5)) * (t1 + t2);
}

// FP int c(u)/u^4 as the eps -> 0 limit of Re int c(u) / (u + i eps)^4, for
// the Gaussian autocorrelation c(u) = sqrt(pi) e^{-u^2/4}; composite Simpson
// in u, Neville extrapolation in eps.
double ieps_gaussian_oracle() {
  const std::array<double, 5> eps = {0.16, 0.08, 0.04, 0.02, 0.01};
  std::array<double, 5> val{};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double e = eps[k];
    const double e2 = e * e;
    const double length = 30.0;
    const int n = 2 * static_cast<int>(std::ceil(length / (e / 100.0)));
    const double h = 2.0 * length / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double u = -length + h * i;
      const double u2 = u * u;
      const double kernel = (u2 * u2 - 6.0 * u2 * e2 + e2 * e2) / std::pow(u2 + e2, 4);
      const double f = std::sqrt(kPi) * std::exp(-0.25 * u2) * kernel;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += w * f;
    }
    val[k] = s * h / 3.0;
  }
  for (std::size_t level = 1; level < eps.size(); ++level) {
    for (std::size_t k = eps.size() - 1; k >= level; --k) {
      val[k] = (eps[k - level] * val[k] - eps[k] * val[k - 1]) / (eps[k - level] - eps[k]);
    }
  }
  return val.back();
}

} // namespace

TEST_SUITE("closed form") {
  TEST_CASE("direct substitution at a = 0, b = 1, w = 1") {
    const double expected = 200.0 * kPi / 32.0 * (2.0 * std::sin(1.0) - std::cos(1.0));
    const double got = j_closed_form(SeparationParams::from_ab(0.0, 1.0), 1.0, 100.0);
    CHECK(rel_diff(got, expected) < 1e-14);
  }

  TEST_CASE("vanishes at zero frequency") {
    CHECK(j_closed_form(SeparationParams::from_ab(0.5, 1.0), 0.0, 50.0) == 0.0);
  }

  TEST_CASE("linear in tau") {
    const auto sep = SeparationParams::from_ab(-0.2, 0.7);
    CHECK(rel_diff(j_closed_form(sep, 1.3, 20.0), 2.0 * j_closed_form(sep, 1.3, 10.0)) < 1e-14);
  }

  TEST_CASE("coincident points are rejected") {
    const auto sep = SeparationParams::from_ab(0.0, 0.0);
    CHECK_THROWS_AS(j_closed_form(sep, 1.0, 1.0), DegenerateSeparationError);
    CHECK_THROWS_AS(j_from_residues(sep, 1.0, 1.0), DegenerateSeparationError);
    CHECK_THROWS_AS(j_numeric_oracle(sep, 1.0, 10.0), DegenerateSeparationError);
  }

  TEST_CASE("separation parameters outside |a| <= b^2 are rejected") {
    CHECK_THROWS_AS(SeparationParams::from_ab(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(SeparationParams::from_ab(0.0, -1.0), DomainError);
  }

  TEST_CASE("angle average equals the a = 0 value since J is linear in a") {
    for (double b : {0.05, 0.3, 1.0, 4.0}) {
      const double avg = j_closed_form_angle_averaged(b, 1.7, 3.0);
      const double direct = j_closed_form(SeparationParams::from_ab(0.0, b), 1.7, 3.0);
      CHECK(rel_diff(avg, direct) < 1e-12);
    }
    CHECK(angle_averaged_bracket(0.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    // Both evaluation branches against the direct formula in extended precision.
    for (long double x : {0.01L, 0.049L, 0.051L, 0.7L, 6.0L}) {
      const long double direct =
          ((1 + x * x) * std::sin(x) - x * std::cos(x)) / (x * x * x);
      CHECK(rel_diff(angle_averaged_bracket(static_cast<double>(x)), static_cast<double>(direct)) <
            1e-12);
    }
  }
}

TEST_SUITE("residues") {
  TEST_CASE("each term is +-2 pi i times a contour residue") {
    const double a = 0.3, b = 0.9, w = 2.0;
    const auto sep = SeparationParams::from_ab(a, b);
    struct Case {
      PoleSign pole;
      ExponentSign exponent;
      double k;
      double p;
      double sign;
    };
    const std::array<Case, 4> cases = {{
        {PoleSign::upper, ExponentSign::positive, 1.0, b, 1.0},
        {PoleSign::upper, ExponentSign::negative, -1.0, -b, -1.0},
        {PoleSign::lower, ExponentSign::positive, 1.0, -b, 1.0},
        {PoleSign::lower, ExponentSign::negative, -1.0, b, -1.0},
    }};
    for (const auto &c : cases) {
      const cplx term = residue_term(c.pole, c.exponent, sep, w);
      const cplx oracle = c.sign * contour_residue(a, b, c.k, w, c.p);
      CHECK(std::abs(term - oracle) < 1e-12 * std::abs(oracle));
      const cplx fd = c.sign * fd_residue(a, b, c.k, w, c.p);
      CHECK(std::abs(term - fd) < 1e-7 * std::abs(oracle));
    }
  }

  TEST_CASE("removable numerator zero at a = -b^2, w = 0 stays finite") {
    const double b = 1.1;
    const auto sep = SeparationParams::from_ab(-b * b, b);
    const cplx term = residue_term(PoleSign::upper, ExponentSign::positive, sep, 0.0);
    CHECK(std::isfinite(term.real()));
    CHECK(std::isfinite(term.imag()));
    // d^2/du^2 [(u - b)/(u + b)^2] at u = b is -4/(2b)^3.
    const double d2 = -4.0 / std::pow(2.0 * b, 3);
    CHECK(std::abs(term - cplx(0.0, kPi * d2)) < 1e-12);
  }

  TEST_CASE("assembly reproduces the closed form at a = 0, b = 1, w = 1 for any tau") {
    const auto sep = SeparationParams::from_ab(0.0, 1.0);
    for (double tau : {0.5, 7.0, 1234.5}) {
      CHECK(rel_diff(j_from_residues(sep, 1.0, tau), j_closed_form(sep, 1.0, tau)) < 1e-13);
    }
  }

  TEST_CASE("property: assembly matches the closed form to rounding for random draws") {
    for (int i = 0; i < 100; ++i) {
      const double b = test_support::uniform(0.1, 10.0);
      const double a = test_support::uniform(-1.0, 1.0) * b * b;
      const double w = test_support::uniform(0.0, 10.0);
      const auto sep = SeparationParams::from_ab(a, b);
      const double tau = 3.0;
      const double gap = std::abs(j_from_residues(sep, w, tau) - j_closed_form(sep, w, tau));
      CHECK(gap <= 1e-12 * closed_form_scale(a, b, w, tau));
    }
  }
}

TEST_SUITE("numeric oracle") {
  TEST_CASE("finite-tau gap is a bounded constant, so J/tau converges") {
    const auto sep = SeparationParams::from_ab(0.3, 0.9);
    const double w = 2.0;
    double first_gap = 0.0;
    for (double tau : {200.0, 500.0, 5000.0}) {
      const double gap = j_numeric_oracle(sep, w, tau) - j_closed_form(sep, w, tau);
      if (first_gap == 0.0) first_gap = gap;
      CHECK(std::abs(gap) < 2.0 * std::abs(first_gap));
    }
  }

  TEST_CASE("property: relative gap below 1e-2 at w tau = 1e3 and 1e-3 at 1e4") {
    const std::array<std::array<double, 3>, 3> points = {{{0.0, 1.0, 1.0},
                                                          {0.3, 0.9, 2.0},
                                                          {-0.5, 1.2, 0.8}}};
    for (const auto &p : points) {
      const auto sep = SeparationParams::from_ab(p[0], p[1]);
      const double w = p[2];
      CHECK(rel_diff(j_numeric_oracle(sep, w, 1e3 / w), j_closed_form(sep, w, 1e3 / w)) < 1e-2);
      CHECK(rel_diff(j_numeric_oracle(sep, w, 1e4 / w), j_closed_form(sep, w, 1e4 / w)) < 1e-3);
    }
  }

  TEST_CASE("zero frequency leaves only the finite-part boundary constant") {
    // 2 FP int_0^tau (tau - u) u^2/(u^2 - 1)^3 du = 1/2 + 1/(3 tau^2) + O(tau^-4).
    const auto sep = SeparationParams::from_ab(0.0, 1.0);
    const double tau = 500.0;
    const double got = j_numeric_oracle(sep, 0.0, tau);
    CHECK(rel_diff(got, 0.5 + 1.0 / (3.0 * tau * tau)) < 1e-8);
    CHECK(std::abs(got) / tau < 1e-2);
  }

  TEST_CASE("contour indent and eps-Richardson routes agree") {
    const auto sep = SeparationParams::from_ab(0.3, 0.9);
    QuadratureControl eps;
    eps.pole_treatment = PoleTreatment::epsilon_richardson;
    const double indent = j_numeric_oracle(sep, 2.0, 100.0);
    const double richardson = j_numeric_oracle(sep, 2.0, 100.0, eps);
    CHECK(rel_diff(richardson, indent) < 1e-7);
  }

  TEST_CASE("depends only on (a, b): relabelled transverse coordinates agree") {
    const double dy = 0.4, dz = 0.7;
    const auto base = SeparationParams::from_transverse(dy, dz);
    const double ref = j_numeric_oracle(base, 1.5, 50.0);
    for (auto sep : {SeparationParams::from_transverse(-dy, dz),
                     SeparationParams::from_transverse(dy, -dz),
                     SeparationParams::from_ab(dz * dz - dy * dy, std::hypot(dy, dz))}) {
      CHECK(rel_diff(j_numeric_oracle(sep, 1.5, 50.0), ref) < 1e-12);
    }
    // Exchanging the transverse axes flips the sign of a.
    const auto swapped = SeparationParams::from_transverse(dz, dy);
    CHECK(swapped.a() == doctest::Approx(base.swapped().a()).epsilon(1e-15));
    CHECK(swapped.b() == doctest::Approx(base.swapped().b()).epsilon(1e-15));
  }

  TEST_CASE("under-resolved control blocks are rejected") {
    QuadratureControl coarse;
    coarse.nodes_per_period = 5.0;
    CHECK_THROWS_AS(j_numeric_oracle(SeparationParams::from_ab(0.0, 1.0), 1.0, 10.0, coarse),
                    AccuracyError);
  }
}

TEST_SUITE("quartic regularization") {
  TEST_CASE("zero envelope gives zero") {
    const auto s = KernelSample::from_function([](double, double) { return 0.0; }, 0.0, 1.0, 32);
    CHECK(regularized_quartic_integral(s) == 0.0);
  }

  TEST_CASE("gaussian product envelope matches the i-eps oracle") {
    const double oracle = ieps_gaussian_oracle();
    CHECK(rel_diff(oracle, kPi / 6.0) < 1e-6);
    const auto s = KernelSample::from_function(
        [](double t, double u) { return std::exp(-0.5 * t * t) * std::exp(-0.5 * u * u); }, -9.0,
        9.0, 401);
    CHECK(rel_diff(regularized_quartic_integral(s), oracle) < 1e-3);
  }

  TEST_CASE("envelope that reaches the sampled boundary is rejected") {
    const auto s = KernelSample::from_function([](double, double) { return 1.0; }, 0.0, 1.0, 32);
    CHECK_THROWS_AS(regularized_quartic_integral(s), ContractError);
  }

  TEST_CASE("windowed oscillating envelope matches the windowed quadrature") {
    const double w = 3.0, t0 = 0.0, t1 = 6.0;
    auto window = [=](double t) {
      if (t <= t0 || t >= t1) return 0.0;
      return std::pow(std::sin(kPi * (t - t0) / (t1 - t0)), 6);
    };
    const double reference =
        j_numeric_windowed(SeparationParams::from_ab(0.0, 0.0), w, SmoothWindow{window, t0, t1});
    const auto s = KernelSample::from_function(
        [&](double t, double u) { return window(t) * std::cos(w * t) * window(u) * std::cos(w * u); },
        t0, t1, 801);
    CHECK(rel_diff(regularized_quartic_integral(s, QuarticControl{1e-4}), reference) < 1e-3);
  }
}

TEST_SUITE("windowed quadrature") {
  TEST_CASE("growth rate with plateau length equals the closed-form rate") {
    const auto sep = SeparationParams::from_ab(0.3, 0.9);
    const double w = 2.0, edge = 10.0;
    auto make = [&](double plateau) {
      const double end = plateau + 2.0 * edge;
      auto ramp = [=](double x) {
        if (x >= edge) return 1.0;
        const double y = x / edge;
        return y * y * y * (10.0 - 15.0 * y + 6.0 * y * y);
      };
      return SmoothWindow{[=](double t) {
                            if (t <= 0.0 || t >= end) return 0.0;
                            return ramp(t) * ramp(end - t);
                          },
                          0.0, end};
    };
    // Edge contributions cancel in the difference.
    const double slope =
        (j_numeric_windowed(sep, w, make(80.0)) - j_numeric_windowed(sep, w, make(40.0))) / 40.0;
    CHECK(rel_diff(slope, j_closed_form(sep, w, 1.0)) < 1e-4);
  }
}
