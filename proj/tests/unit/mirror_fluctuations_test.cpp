#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "radpress/errors.hpp"
#include "radpress/field_modes.hpp"
#include "radpress/mirror_fluctuations.hpp"
#include "radpress/singular_integrals.hpp"
#include "test_support.hpp"

using namespace radpress;
using test_support::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact damped radial integral: int_0^inf e^{-alpha u} [(1+u^2) sin u - u cos u]/u^2 du.
double abel_exact(double alpha) {
  return 1.0 / (1.0 + alpha * alpha) + 1.0 - alpha * std::atan(1.0 / alpha);
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Direct 4D polar quadrature of int_A int_A J(a, b) over two disks, with the
// separation built from the transverse coordinates of each point.
double double_disk_direct(double radius, double omega, double tau) {
  std::vector<double> x1, w1, x2, w2;
  gauss_legendre(48, x1, w1);
  gauss_legendre(41, x2, w2);
  const int na = 96, nb = 89;
  double total = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double r1 = 0.5 * radius * (x1[i] + 1.0);
    const double wr1 = 0.5 * radius * w1[i] * r1;
    for (int a = 0; a < na; ++a) {
      const double t1 = 2.0 * kPi * a / na;
      const double y1 = r1 * std::cos(t1), z1 = r1 * std::sin(t1);
      for (std::size_t j = 0; j < x2.size(); ++j) {
        const double r2 = 0.5 * radius * (x2[j] + 1.0);
        const double wr2 = 0.5 * radius * w2[j] * r2;
        for (int b = 0; b < nb; ++b) {
          const double t2 = 2.0 * kPi * (b + 0.5) / nb;
          const double dy = y1 - r2 * std::cos(t2);
          const double dz = z1 - r2 * std::sin(t2);
          const double j_value =
              j_closed_form(SeparationParams::from_transverse(dy, dz), omega, tau);
          total += wr1 * wr2 * j_value;
        }
      }
    }
  }
  return total * (2.0 * kPi / na) * (2.0 * kPi / nb);
}

BeamSpec beam_for(double omega, double rho, const MirrorSpec &mirror) {
  return BeamSpec::make(omega, rho, mirror.area());
}

} // namespace

TEST_SUITE("photon counting") {
  TEST_CASE("single-mirror momentum dispersion") {
    CHECK(delta_p2_photon_counting(LightState::coherent(1.0, 10.0)) == doctest::Approx(400.0));
    CHECK(delta_p2_photon_counting(LightState::coherent(2.0, 5.0)) == doctest::Approx(400.0));
    CHECK(delta_p2_photon_counting(LightState::coherent(3.0, 0.0)) == 0.0);
  }

  TEST_CASE("number states are routed elsewhere") {
    CHECK_THROWS_AS(delta_p2_photon_counting(LightState::number(1.0, 4)), PreconditionError);
  }

  TEST_CASE("velocity dispersion: value, vacuum, and mass scaling") {
    const auto mirror = MirrorSpec::make(1.0, 1.0 / std::sqrt(kPi));
    CHECK(rel_diff(delta_v2_coherent(beam_for(1.0, 1.0, mirror), mirror, 1.0), 4.0) < 1e-14);
    CHECK(delta_v2_coherent(beam_for(1.0, 0.0, mirror), mirror, 1.0) == 0.0);
    const auto heavy = MirrorSpec::make(2.0, 1.0 / std::sqrt(kPi));
    CHECK(rel_diff(delta_v2_coherent(beam_for(1.0, 1.0, heavy), heavy, 1.0), 1.0) < 1e-14);
  }

  TEST_CASE("box-mode beam carries rho = 2 C^2 |z|^2") {
    const auto mode = BoxMode::make(2.0, 4.0);
    const auto beam = BeamSpec::from_box_mode(mode, 3.0, 1.5);
    CHECK(rel_diff(beam.energy_density(), 2.0 * (2.0 / 8.0) * 9.0) < 1e-14);
  }

  TEST_CASE("wavepacket route recovers 4 w^2 |z|^2") {
    for (double w0 : {1.0, 3.0}) {
      const double z2 = 7.0;
      const double overlap = overlap_integral_at_mirror(Wavepacket::make(w0, 0.04 * w0));
      const double expected = delta_p2_photon_counting(LightState::coherent(w0, std::sqrt(z2)));
      CHECK(rel_diff(z2 * overlap * overlap, expected) < 2e-3);
    }
  }

  TEST_CASE("property: integrated dispersions do not depend on the phase") {
    const double ref = delta_p2_photon_counting(LightState::coherent(1.5, 2.0, 0.0));
    for (double phi : {kPi / 4.0, kPi / 2.0}) {
      const auto s = LightState::coherent(1.5, 2.0, phi);
      CHECK(delta_p2_photon_counting(s) == ref);
      CHECK(variance_decomposition(s).cross == ref);
    }
  }
}

TEST_SUITE("stress tensor") {
  TEST_CASE("finite disk at wR = 50, w tau = 1e3 within 2% of photon counting") {
    const auto mirror = MirrorSpec::make(1.0, 50.0);
    const auto beam = beam_for(1.0, 1.0, mirror);
    const double st = delta_v2_stress_tensor(beam, mirror, 1e3);
    CHECK(rel_diff(st, delta_v2_coherent(beam, mirror, 1e3)) < 0.02);
  }

  TEST_CASE("finite disk at wR = 200, w tau = 1e4 within 0.5%") {
    const auto mirror = MirrorSpec::make(1.0, 200.0);
    const auto beam = beam_for(1.0, 1.0, mirror);
    const double st = delta_v2_stress_tensor(beam, mirror, 1e4);
    CHECK(rel_diff(st, delta_v2_coherent(beam, mirror, 1e4)) < 0.005);
  }

  TEST_CASE("radial overlap reduction matches a direct four-dimensional quadrature") {
    const double omega = 1.0, radius = 2.0, tau = 1.0, rho = 1.0, m = 1.0;
    const auto mirror = MirrorSpec::make(m, radius);
    AreaControl open;
    open.min_omega_radius = 0.0;
    open.min_omega_tau = 0.0;
    const double st = delta_v2_stress_tensor(beam_for(omega, rho, mirror), mirror, tau, open);
    const double direct = 16.0 * rho / (kPi * kPi * m * m) * double_disk_direct(radius, omega, tau);
    CHECK(rel_diff(st, direct) < 1e-3);
  }

  TEST_CASE("large-disk limit reproduces photon counting") {
    const auto mirror = MirrorSpec::make(1.0, 1.0 / std::sqrt(kPi));
    const auto beam = beam_for(1.0, 1.0, mirror);
    CHECK(rel_diff(delta_v2_stress_tensor_asymptotic(beam, mirror, 1.0), 4.0) < 1e-8);
  }

  TEST_CASE("regime and area preconditions") {
    const auto mirror = MirrorSpec::make(1.0, 10.0);
    CHECK_THROWS_AS(delta_v2_stress_tensor(beam_for(1.0, 1.0, mirror), mirror, 1e3), RegimeError);
    const auto big = MirrorSpec::make(1.0, 60.0);
    CHECK_THROWS_AS(delta_v2_stress_tensor(beam_for(1.0, 1.0, big), big, 10.0), RegimeError);
    CHECK_THROWS_AS(delta_v2_stress_tensor(BeamSpec::make(1.0, 1.0, 1.0), big, 1e3),
                    PreconditionError);
  }
}

TEST_SUITE("spatial integral") {
  TEST_CASE("exact damped radial integral") {
    for (double alpha : {0.05, 0.2, 1.0, 3.0}) {
      CHECK(rel_diff(abel_damped_radial_integral(alpha), abel_exact(alpha)) < 1e-10);
    }
  }

  TEST_CASE("alpha-extrapolated radial integral equals 2") {
    const AbelResult r = abel_radial_integral();
    CHECK(std::abs(r.value - 2.0) < 1e-6);
    CHECK(r.extrapolation_error < 1e-6);
  }

  TEST_CASE("finite disk approaches 2 pi w A") {
    const double omega = 1.0;
    for (double radius : {50.0, 200.0}) {
      const double area = kPi * radius * radius;
      const double value = spatial_integral_I(omega, radius);
      CHECK(rel_diff(value, 2.0 * kPi * omega * area) < 0.02);
    }
    const double r1 = spatial_integral_I(1.0, 50.0) / (2.0 * kPi * kPi * 2500.0);
    const double r2 = spatial_integral_I(1.0, 200.0) / (2.0 * kPi * kPi * 40000.0);
    CHECK(std::abs(r2 - 1.0) < std::abs(r1 - 1.0));
  }

  TEST_CASE("zero frequency and small disks") {
    CHECK(spatial_integral_I(0.0, 3.0) == 0.0);
    CHECK_THROWS_AS(spatial_integral_I(1.0, 0.5), RegimeError);
  }

  TEST_CASE("radial integrand is the bracket over r^2") {
    for (double r : {0.3, 2.0, 17.0}) {
      const double w = 1.4;
      const double u = w * r;
      const double expected = ((1.0 + u * u) * std::sin(u) - u * std::cos(u)) / (r * r);
      CHECK(rel_diff(radial_integrand(w, r), expected) < 1e-12);
    }
  }
}

TEST_SUITE("number states") {
  TEST_CASE("n = 3, w = 1 terms") {
    const auto t = number_state_terms(3, 1.0);
    CHECK(t.normal_ordered == -12.0);
    CHECK(t.cross == 12.0);
    CHECK(t.total == 0.0);
  }

  TEST_CASE("property: total cancels exactly for n in 0..20 and any w") {
    for (std::uint64_t n = 0; n <= 20; ++n) {
      const double w = test_support::uniform(0.0, 50.0);
      const auto t = number_state_terms(n, w);
      CHECK(t.total == 0.0);
      CHECK(t.normal_ordered == -t.cross);
      CHECK(rel_diff(t.cross, 4.0 * static_cast<double>(n) * w * w) < 1e-15);
    }
  }

  TEST_CASE("dropped oscillatory integrals are O(1 / w tau)") {
    const auto check = validate_number_state_drop(10, 1.0, 1e3);
    CHECK(check.ratio < 1e-2);
    CHECK(check.ratio <= check.bound * (1.0 + 1e-9));
    CHECK(rel_diff(check.ratio, std::abs(std::sin(1e3)) / 1e3) < 1e-6);
    CHECK(check.dispersion_ratio < 1e-4);
  }

  TEST_CASE("variance decomposition") {
    const auto coh = variance_decomposition(LightState::coherent(1.0, 2.0));
    CHECK(coh.normal_ordered == 0.0);
    CHECK(coh.cross == doctest::Approx(16.0));
    CHECK_FALSE(coh.vacuum_included);
    const auto num = variance_decomposition(LightState::number(1.0, 4));
    CHECK(num.normal_ordered == -16.0);
    CHECK(num.cross == 16.0);
    const auto vac = variance_decomposition(LightState::coherent(1.0, 0.0));
    CHECK(vac.normal_ordered == 0.0);
    CHECK(vac.cross == 0.0);
  }
}

TEST_SUITE("position dispersion") {
  TEST_CASE("double time integral of K min(t, t') oracle") {
    // <dx^2> = int_0^tau int_0^tau <v(t) v(t')> with <v v> = K min(t, t').
    const int n = 2000;
    const double tau = 1.0, k = 1.0, h = tau / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sum += k * std::min((i + 0.5) * h, (j + 0.5) * h);
    }
    const double oracle = sum * h * h;
    CHECK(std::abs(delta_x2_from_rate(k, tau) - oracle) < 1e-6);
    CHECK(delta_x2_from_rate(1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("tau^3 scaling and vanishing rate") {
    CHECK(rel_diff(delta_x2_from_rate(2.5, 4.0), 8.0 * delta_x2_from_rate(2.5, 2.0)) < 1e-14);
    CHECK(delta_x2_from_rate(0.0, 3.0) == 0.0);
  }

  TEST_CASE("property: second tau-derivative equals 2 K tau") {
    const auto mirror = MirrorSpec::make(1.3, 1.0);
    const auto beam = beam_for(0.7, 2.0, mirror);
    const double k = delta_v2_coherent(beam, mirror, 1.0);
    for (double tau : {0.1, 0.5, 1.0, 3.0, 10.0}) {
      const double h = 1e-3 * tau;
      auto x2 = [&](double t) { return delta_x2(beam, mirror, t).dx2; };
      const double d2 =
          (-x2(tau + 2 * h) + 16 * x2(tau + h) - 30 * x2(tau) + 16 * x2(tau - h) - x2(tau - 2 * h)) /
          (12 * h * h);
      CHECK(rel_diff(d2, 2.0 * k * tau) < 1e-6);
    }
  }

  TEST_CASE("both conventions are labelled") {
    const auto mirror = MirrorSpec::make(1.0, 1.0 / std::sqrt(kPi));
    const auto d = delta_x2(beam_for(1.0, 1.0, mirror), mirror, 1.0);
    CHECK(d.convention == "exact-coefficient");
    CHECK(d.order_of_magnitude_convention == "order-of-magnitude");
    CHECK(rel_diff(d.dx2, 4.0 / 3.0) < 1e-14);
    CHECK(rel_diff(d.dx_rp_order_of_magnitude, 1.0) < 1e-14);
  }
}
