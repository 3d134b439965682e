#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "radpress/errors.hpp"
#include "radpress/field_modes.hpp"
#include "test_support.hpp"

using namespace radpress;
using test_support::rel_diff;
using test_support::uniform;

namespace {

constexpr double kPi = std::numbers::pi;

// Empty-space two-point function written out independently.
double empty_term(const SpacetimePoint &p1, const SpacetimePoint &p2, double z2_sign) {
  const double dt = p1.t - p2.t;
  const double dx = p1.x - p2.x;
  const double dy = p1.y - p2.y;
  const double dz = p1.z - z2_sign * p2.z;
  const double r2 = dx * dx + dy * dy + dz * dz;
  const double denom = std::pow(dt * dt - r2, 3);
  return (dt * dt + r2 - 2.0 * dz * dz) / (kPi * kPi * denom);
}

SpacetimePoint random_point() {
  return {uniform(-3.0, 3.0), uniform(-2.0, 2.0), uniform(-2.0, 2.0), uniform(-2.0, 2.0)};
}

bool near_light_cone(const SpacetimePoint &p1, const SpacetimePoint &p2) {
  const double dt2 = std::pow(p1.t - p2.t, 2);
  const double dx2 = std::pow(p1.x - p2.x, 2) + std::pow(p1.y - p2.y, 2);
  const double e = std::abs(dt2 - dx2 - std::pow(p1.z - p2.z, 2));
  const double i = std::abs(dt2 - dx2 - std::pow(p1.z + p2.z, 2));
  return std::min(e, i) < 1e-3;
}

} // namespace

TEST_SUITE("box mode") {
  TEST_CASE("value at the mirror at t = 0") {
    const auto mode = BoxMode::make(1.0, 1.0);
    const auto b = mode_B(mode, {0.0, 0.0, 0.0, 0.0});
    CHECK(b.real() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
    CHECK(b.imag() == 0.0);
  }

  TEST_CASE("standing-wave node at x = pi / (2 w)") {
    const auto mode = BoxMode::make(2.5, 3.0);
    for (double t : {0.0, 0.3, 11.0}) {
      CHECK(std::abs(mode_B(mode, {t, kPi / 5.0, 0.0, 0.0})) < 1e-15);
    }
  }

  TEST_CASE("modulus at the mirror is 2 w / V for all t") {
    const auto mode = BoxMode::make(1.7, 0.4);
    for (double t : {0.0, 0.9, -4.2, 100.0}) {
      CHECK(rel_diff(std::norm(mode_B(mode, {t, 0.0, 0.0, 0.0})), 2.0 * 1.7 / 0.4) < 1e-14);
    }
  }

  TEST_CASE("invalid mode parameters are rejected") {
    CHECK_THROWS_AS(BoxMode::make(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(BoxMode::make(1.0, 0.0), DomainError);
  }
}

TEST_SUITE("vacuum two-point function") {
  TEST_CASE("equal times with separation along x") {
    const double d = 0.8;
    const double got = vacuum_two_point({0.0, 0.0, 0.0, 0.0}, {0.0, d, 0.0, 0.0}, false);
    CHECK(rel_diff(got, -1.0 / (kPi * kPi * std::pow(d, 4))) < 1e-14);
  }

  TEST_CASE("on the mirror plane the image term equals the empty term") {
    const SpacetimePoint p1{0.2, 0.1, 0.5, 0.0};
    const SpacetimePoint p2{1.9, -0.3, 0.1, 0.0};
    const double empty = vacuum_two_point(p1, p2, false);
    CHECK(vacuum_two_point(p1, p2, true) == 2.0 * empty);
  }

  TEST_CASE("decays as dt^-4 at fixed spatial separation") {
    const SpacetimePoint p1{0.0, 0.0, 0.3, 0.2};
    const double t = 1e3;
    const double ratio = vacuum_two_point(p1, {2.0 * t, 0.4, 0.0, 0.0}, false) /
                         vacuum_two_point(p1, {t, 0.4, 0.0, 0.0}, false);
    CHECK(rel_diff(ratio, 1.0 / 16.0) < 1e-5);
  }

  TEST_CASE("light-like separations raise") {
    CHECK_THROWS_AS(vacuum_two_point({0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, false),
                    SingularSeparationError);
    CHECK_THROWS_AS(vacuum_two_point({0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, false),
                    SingularSeparationError);
  }

  TEST_CASE("property: matches the written-out formula, image term included") {
    for (int i = 0; i < 200; ++i) {
      const auto p1 = random_point();
      const auto p2 = random_point();
      if (near_light_cone(p1, p2)) continue;
      const double expected = empty_term(p1, p2, 1.0) + empty_term(p1, p2, -1.0);
      CHECK(rel_diff(vacuum_two_point(p1, p2, true), expected) < 1e-11);
    }
  }

  TEST_CASE("property: mirror-reflecting both points leaves the value unchanged") {
    for (int i = 0; i < 200; ++i) {
      auto p1 = random_point();
      auto p2 = random_point();
      if (near_light_cone(p1, p2)) continue;
      const double before = vacuum_two_point(p1, p2, true);
      p1.z = -p1.z;
      p2.z = -p2.z;
      CHECK(rel_diff(vacuum_two_point(p1, p2, true), before) < 1e-12);
    }
  }
}

TEST_SUITE("coherent-state correlators") {
  const auto mode = BoxMode::make(1.3, 2.0);

  TEST_CASE("vacuum amplitude gives zero") {
    const SpacetimePoint p{0.3, 0.1, 0.0, 0.0};
    CHECK(normal_ordered_BB(mode, {0.0, 0.0}, p, p) == 0.0);
    CHECK(cross_term_Txx(mode, {0.0, 0.0}, p, {1.0, 0.2, 0.7, 0.0}) == 0.0);
  }

  TEST_CASE("coincident points at the origin give 16 C^2 |z|^2") {
    const double c = mode.normalization();
    const SpacetimePoint o{0.0, 0.0, 0.0, 0.0};
    CHECK(rel_diff(normal_ordered_BB(mode, {3.0, 0.0}, o, o), 16.0 * c * c * 9.0) < 1e-14);
  }

  TEST_CASE("quarter-period phase shift at t = 0 gives zero") {
    const SpacetimePoint o{0.0, 0.0, 0.0, 0.0};
    CHECK(std::abs(normal_ordered_BB(mode, {3.0, kPi / 2.0}, o, o)) < 1e-14);
  }

  TEST_CASE("property: cross term factorizes into the two written-out factors") {
    const double c = mode.normalization();
    const double w = mode.omega();
    for (int i = 0; i < 200; ++i) {
      const auto p1 = random_point();
      const auto p2 = random_point();
      if (near_light_cone(p1, p2)) continue;
      const CoherentAmplitude z{uniform(0.0, 4.0), uniform(0.0, 2.0 * kPi)};
      const double bb = 16.0 * c * c * z.magnitude * z.magnitude * std::cos(w * p1.x) *
                        std::cos(w * p2.x) * std::cos(w * p1.t - z.phase) *
                        std::cos(w * p2.t - z.phase);
      const double vac = empty_term(p1, p2, 1.0) + empty_term(p1, p2, -1.0);
      CHECK(std::abs(normal_ordered_BB(mode, z, p1, p2) - bb) < 1e-12 * 16.0 * c * c *
                                                                     z.magnitude * z.magnitude);
      CHECK(rel_diff(cross_term_Txx(mode, z, p1, p2), normal_ordered_BB(mode, z, p1, p2) * vac) <
            1e-11);
    }
  }
}

TEST_SUITE("wavepacket overlap") {
  TEST_CASE("narrow packet at w0 = 1 gives 2 w0") {
    CHECK(rel_diff(overlap_integral_at_mirror(Wavepacket::make(1.0, 0.05)), 2.0) < 1e-3);
  }

  TEST_CASE("w0 = 5 gives 10") {
    CHECK(rel_diff(overlap_integral_at_mirror(Wavepacket::make(5.0, 0.25)), 10.0) < 1e-3);
  }

  TEST_CASE("incident-only content is a quarter of the full result") {
    const auto p = Wavepacket::make(2.0, 0.1);
    CHECK(rel_diff(overlap_integral_at_mirror(p, PacketContent::incident_only), 0.25 * 4.0) <
          1e-3);
  }

  TEST_CASE("the four pieces are equal at the mirror") {
    const auto pieces = overlap_pieces_at_mirror(Wavepacket::make(3.0, 0.1, 2.5));
    CHECK(rel_diff(pieces.reflected, pieces.incident) < 1e-10);
    CHECK(rel_diff(pieces.incident_reflected, pieces.incident) < 1e-10);
    CHECK(rel_diff(pieces.reflected_incident, pieces.incident) < 1e-10);
  }

  TEST_CASE("property: linear in w0 with slope 2") {
    const std::array<double, 5> w0 = {0.5, 1.0, 2.0, 4.0, 8.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double w : w0) {
      const double y = overlap_integral_at_mirror(Wavepacket::make(w, 0.04 * w));
      sx += w, sy += y, sxx += w * w, sxy += w * y;
    }
    const double n = static_cast<double>(w0.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(rel_diff(slope, 2.0) < 1e-3);
  }

  TEST_CASE("broad or mis-normalized packets violate the contract") {
    CHECK_THROWS_AS(Wavepacket::make(1.0, 0.2), ContractError);
    const auto bad = Wavepacket::with_amplitude(1.0, 0.05, 1.0, 1.0);
    CHECK_THROWS_AS(overlap_integral_at_mirror(bad), ContractError);
  }

  TEST_CASE("separated bounces each see the single-bounce overlap") {
    const auto p = Wavepacket::make(1.0, 0.05);
    const double support = 2.0 * p.half_width();
    const auto windows = bounce_window_overlaps(p, 3, 3.0 * support, 1.5 * support);
    REQUIRE(windows.size() == 3);
    for (double v : windows) CHECK(rel_diff(v, 2.0) < 1e-3);
  }
}
