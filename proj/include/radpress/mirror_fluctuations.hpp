#pragma once

// Single-mirror radiation-pressure dispersions by two routes: photon counting
// and the stress-tensor cross term (J integrated over the illuminated disk),
// plus the number-state decomposition and the position dispersion.
// Natural units throughout (hbar = c = 1, Lorentz-Heaviside).

#include <cstdint>
#include <string>

#include "radpress/field_modes.hpp"

namespace radpress {

enum class StateKind { coherent, number };

class LightState {
public:
  static LightState coherent(double omega, double magnitude, double phase = 0.0);
  static LightState number(double omega, std::uint64_t photons);

  StateKind kind() const { return kind_; }
  double omega() const { return omega_; }
  // |z| for a coherent state; sqrt(n) for a number state.
  double magnitude() const { return magnitude_; }
  std::uint64_t photons() const { return photons_; }
  double phase() const { return phase_; }
  double mean_photons() const;

private:
  LightState() = default;
  StateKind kind_ = StateKind::coherent;
  double omega_ = 0.0;
  double magnitude_ = 0.0;
  std::uint64_t photons_ = 0;
  double phase_ = 0.0;
};

class MirrorSpec {
public:
  static MirrorSpec make(double mass, double spot_radius);

  double mass() const { return mass_; }
  double spot_radius() const { return radius_; }
  double area() const { return area_; }

private:
  MirrorSpec(double mass, double radius, double area)
      : mass_(mass), radius_(radius), area_(area) {}
  double mass_;
  double radius_;
  double area_;
};

class BeamSpec {
public:
  static BeamSpec make(double omega, double energy_density, double area);
  // rho = w |z|^2 / V = 2 C^2 |z|^2 for an occupied box mode.
  static BeamSpec from_box_mode(const BoxMode &mode, double magnitude, double area);

  double omega() const { return omega_; }
  double energy_density() const { return rho_; }
  double area() const { return area_; }
  double power() const { return area_ * rho_; }

private:
  BeamSpec(double omega, double rho, double area)
      : omega_(omega), rho_(rho), area_(area) {}
  double omega_;
  double rho_;
  double area_;
};

// 4 w^2 <n>. Throws PreconditionError for number states (see
// number_state_terms).
double delta_p2_photon_counting(const LightState &state);
// Same from a beam: 4 w A rho tau (<n> = A rho tau / w photons in the window).
double delta_p2_photon_counting(const BeamSpec &beam, double tau);

// 4 w A rho tau / m^2.
double delta_v2_coherent(const BeamSpec &beam, const MirrorSpec &mirror, double tau);

struct AreaControl {
  double rel_tol = 1e-10;
  double nodes_per_period = 300.0;
  // Regime gates for the finite-disk evaluation.
  double min_omega_radius = 50.0;
  double min_omega_tau = 1e3;
};

// Cross-term route: (32 C^2 |z|^2 / pi^2 m^2) int da1 int da2 J over the
// illuminated disk, with C^2 |z|^2 = rho / 2. The double-disk integral is
// reduced exactly to a radial integral over the separation r with the
// disk-overlap area as weight; J is the large-tau closed form averaged over
// the separation angle. Throws RegimeError below the regime gates.
double delta_v2_stress_tensor(const BeamSpec &beam, const MirrorSpec &mirror,
                              double tau, const AreaControl &ctl = {});

// R -> infinity limit of the same route, with the radial integral taken by
// Abel regularization. Valid at any R; used where the disk is too small for
// the finite-disk evaluation.
double delta_v2_stress_tensor_asymptotic(const BeamSpec &beam,
                                         const MirrorSpec &mirror, double tau);

// int_A da1 int_A da2 of the J bracket / b^5, normalized so that it tends to
// 2 pi w A as wR -> infinity (half the full double-disk integral; see the
// README). Requires wR >= 1 unless w = 0.
double spatial_integral_I(double omega, double radius, const AreaControl &ctl = {});

// [(1 + w^2 r^2) sin(wr) - wr cos(wr)] / r^2.
double radial_integrand(double omega, double r);

struct AbelControl {
  double alpha0 = 0.2;
  int levels = 6;
  double rel_tol = 1e-13;
};

struct AbelResult {
  double value = 0.0;
  // Difference between the last two extrapolation levels.
  double extrapolation_error = 0.0;
};

// int_0^inf [(1 + u^2) sin u - u cos u] / u^2 e^{-alpha u} du, alpha -> 0 by
// Richardson extrapolation. Tends to 2.
AbelResult abel_radial_integral(const AbelControl &ctl = {});
// The damped integral at one alpha > 0.
double abel_damped_radial_integral(double alpha, double rel_tol = 1e-13);

struct NumberStateTerms {
  double normal_ordered = 0.0;
  double cross = 0.0;
  double total = 0.0;
};

// (-4 n w^2, +4 n w^2, 0); the oscillating B^2 integrals are dropped.
NumberStateTerms number_state_terms(std::uint64_t n, double omega);

// Validation of the rotating-wave drop in the number-state normal-ordered
// term: |int_0^tau B^2 dt| against int_0^tau |B|^2 dt at the mirror.
struct DroppedIntegralCheck {
  double dropped = 0.0;
  double kept = 0.0;
  double ratio = 0.0;           // dropped / kept, |sin w tau| / (w tau)
  double bound = 0.0;           // 1 / (w tau)
  double dispersion_ratio = 0.0; // (n - 1)/2 ratio^2, effect on the dispersion
};
DroppedIntegralCheck validate_number_state_drop(std::uint64_t n, double omega,
                                                double tau);

struct VarianceDecomposition {
  double normal_ordered = 0.0;
  double cross = 0.0;
  // The pure vacuum term is never included.
  bool vacuum_included = false;
};
VarianceDecomposition variance_decomposition(const LightState &state);

// Position dispersion of a free mirror starting at rest,
// d^2 <dx^2>/dtau^2 = 2 <dv^2> with <dv^2> = K tau, K = 4 w A rho / m^2.
struct PositionDispersion {
  double dx2 = 0.0;                  // K tau^3 / 3
  std::string convention = "exact-coefficient";
  double dx_rp_order_of_magnitude = 0.0; // sqrt(w P) tau^{3/2} / m
  std::string order_of_magnitude_convention = "order-of-magnitude";
};
PositionDispersion delta_x2(const BeamSpec &beam, const MirrorSpec &mirror, double tau);
// The same from the rate K directly.
double delta_x2_from_rate(double k, double tau);

} // namespace radpress
