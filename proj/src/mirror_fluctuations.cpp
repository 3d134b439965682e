#include "radpress/mirror_fluctuations.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "radpress/errors.hpp"
#include "radpress/quadrature.hpp"
#include "radpress/singular_integrals.hpp"

namespace radpress {

namespace {

constexpr double kPi = std::numbers::pi;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }
bool nonnegative_finite(double v) { return v >= 0.0 && std::isfinite(v); }

void require_positive(double v, const char *what) {
  if (!positive_finite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite (got " << v << ")";
    throw DomainError(os.str());
  }
}

// Area of the intersection of two disks of radius R whose centres are r apart.
double disk_overlap(double r, double radius) {
  if (r >= 2.0 * radius) return 0.0;
  const double half = 0.5 * r;
  return 2.0 * radius * radius * std::acos(half / radius) -
         half * std::sqrt(std::max(0.0, 4.0 * radius * radius - r * r));
}

// int_A da1 int_A da2 f(|x1 - x2|) = int_0^{2R} 2 pi r overlap(r) f(r) dr
template <class F>
double double_disk_integral(F &&f, double omega, double radius, const AreaControl &ctl) {
  quad::Control q;
  q.rel_tol = ctl.rel_tol;
  if (omega > 0.0) q.max_panel = 15.0 * (2.0 * kPi / omega) / ctl.nodes_per_period;
  auto integrand = [&](double r) { return 2.0 * kPi * r * disk_overlap(r, radius) * f(r); };
  return quad::integrate(integrand, 0.0, 2.0 * radius, q).value;
}

void require_matching_area(const BeamSpec &beam, const MirrorSpec &mirror) {
  if (std::abs(beam.area() - mirror.area()) > 1e-12 * mirror.area()) {
    std::ostringstream os;
    os << "beam area " << beam.area() << " differs from the illuminated spot area "
       << mirror.area();
    throw PreconditionError(os.str());
  }
}

} // namespace

LightState LightState::coherent(double omega, double magnitude, double phase) {
  if (!nonnegative_finite(omega)) throw DomainError("LightState: omega must be non-negative");
  if (!nonnegative_finite(magnitude)) {
    throw DomainError("LightState: |z| must be non-negative");
  }
  if (!std::isfinite(phase)) throw DomainError("LightState: phase must be finite");
  LightState s;
  s.kind_ = StateKind::coherent;
  s.omega_ = omega;
  s.magnitude_ = magnitude;
  s.phase_ = phase;
  return s;
}

LightState LightState::number(double omega, std::uint64_t photons) {
  if (!nonnegative_finite(omega)) throw DomainError("LightState: omega must be non-negative");
  LightState s;
  s.kind_ = StateKind::number;
  s.omega_ = omega;
  s.photons_ = photons;
  s.magnitude_ = std::sqrt(static_cast<double>(photons));
  return s;
}

double LightState::mean_photons() const {
  if (kind_ == StateKind::number) return static_cast<double>(photons_);
  return magnitude_ * magnitude_;
}

MirrorSpec MirrorSpec::make(double mass, double spot_radius) {
  require_positive(mass, "mirror mass");
  require_positive(spot_radius, "spot radius");
  return MirrorSpec(mass, spot_radius, kPi * spot_radius * spot_radius);
}

BeamSpec BeamSpec::make(double omega, double energy_density, double area) {
  if (!nonnegative_finite(omega)) throw DomainError("beam omega must be non-negative");
  if (!nonnegative_finite(energy_density)) {
    throw DomainError("beam energy density must be non-negative");
  }
  require_positive(area, "beam area");
  return BeamSpec(omega, energy_density, area);
}

BeamSpec BeamSpec::from_box_mode(const BoxMode &mode, double magnitude, double area) {
  const double c = mode.normalization();
  return make(mode.omega(), 2.0 * c * c * magnitude * magnitude, area);
}

double delta_p2_photon_counting(const LightState &state) {
  if (state.kind() != StateKind::coherent) {
    throw PreconditionError(
        "delta_p2_photon_counting: number states transfer a fixed momentum; "
        "use number_state_terms");
  }
  return 4.0 * state.omega() * state.omega() * state.mean_photons();
}

double delta_p2_photon_counting(const BeamSpec &beam, double tau) {
  require_positive(tau, "tau");
  return 4.0 * beam.omega() * beam.area() * beam.energy_density() * tau;
}

double delta_v2_coherent(const BeamSpec &beam, const MirrorSpec &mirror, double tau) {
  require_positive(tau, "tau");
  const double m = mirror.mass();
  return 4.0 * beam.omega() * beam.area() * beam.energy_density() * tau / (m * m);
}

double delta_v2_stress_tensor(const BeamSpec &beam, const MirrorSpec &mirror,
                              double tau, const AreaControl &ctl) {
  require_positive(tau, "tau");
  require_matching_area(beam, mirror);
  const double omega = beam.omega();
  const double radius = mirror.spot_radius();
  if (omega * radius < ctl.min_omega_radius) {
    std::ostringstream os;
    os << "delta_v2_stress_tensor: wR = " << omega * radius << " is below "
       << ctl.min_omega_radius
       << "; the finite-disk result is outside its asymptotic regime";
    throw RegimeError(os.str());
  }
  if (omega * tau < ctl.min_omega_tau) {
    std::ostringstream os;
    os << "delta_v2_stress_tensor: w tau = " << omega * tau << " is below "
       << ctl.min_omega_tau << "; the large-tau closed form for J does not apply";
    throw RegimeError(os.str());
  }
  auto j = [&](double r) { return j_closed_form_angle_averaged(r, omega, tau); };
  const double area_integral = double_disk_integral(j, omega, radius, ctl);
  const double m = mirror.mass();
  // 32 C^2 |z|^2 / (pi^2 m^2) with 2 C^2 |z|^2 = rho.
  const double prefactor = 16.0 * beam.energy_density() / (kPi * kPi * m * m);
  return prefactor * area_integral;
}

double delta_v2_stress_tensor_asymptotic(const BeamSpec &beam,
                                         const MirrorSpec &mirror, double tau) {
  require_positive(tau, "tau");
  require_matching_area(beam, mirror);
  const double m = mirror.mass();
  // Full double-disk integral of J for R -> infinity:
  //   (2 pi tau / 32) * 2 pi w A * int_0^inf u g(u) du.
  const double radial = abel_radial_integral().value;
  const double area_integral =
      2.0 * kPi * tau / 32.0 * 2.0 * kPi * beam.omega() * mirror.area() * radial;
  return 16.0 * beam.energy_density() / (kPi * kPi * m * m) * area_integral;
}

double spatial_integral_I(double omega, double radius, const AreaControl &ctl) {
  if (!nonnegative_finite(omega)) throw DomainError("omega must be non-negative");
  require_positive(radius, "spot radius");
  if (omega == 0.0) return 0.0;
  if (omega * radius < 1.0) {
    std::ostringstream os;
    os << "spatial_integral_I: wR = " << omega * radius << " < 1";
    throw RegimeError(os.str());
  }
  auto bracket = [&](double r) {
    return omega * omega * omega * angle_averaged_bracket(omega * r);
  };
  return 0.5 * double_disk_integral(bracket, omega, radius, ctl);
}

double radial_integrand(double omega, double r) {
  // u^3 g(u) / r^2 with u = w r
  return omega * omega * omega * r * angle_averaged_bracket(omega * r);
}

double abel_damped_radial_integral(double alpha, double rel_tol) {
  require_positive(alpha, "alpha");
  // e^{-40} is below double resolution relative to the O(1) result.
  const double upper = 40.0 / alpha;
  quad::Control q;
  q.rel_tol = rel_tol;
  q.max_panel = 2.0 * kPi / 20.0;
  auto f = [alpha](double u) { return radial_integrand(1.0, u) * std::exp(-alpha * u); };
  return quad::integrate(f, 0.0, upper, q).value;
}

AbelResult abel_radial_integral(const AbelControl &ctl) {
  if (ctl.levels < 2 || !positive_finite(ctl.alpha0)) {
    throw DomainError("abel_radial_integral: need alpha0 > 0 and at least two levels");
  }
  std::vector<double> values(static_cast<std::size_t>(ctl.levels));
  for (int k = 0; k < ctl.levels; ++k) {
    values[static_cast<std::size_t>(k)] =
        abel_damped_radial_integral(ctl.alpha0 / std::pow(2.0, k), ctl.rel_tol);
  }
  // The damped integral is analytic in alpha; eliminate orders 1, 2, ...
  double last = values.back();
  double before = values[values.size() - 2];
  for (int order = 1; order < ctl.levels; ++order) {
    const double factor = std::pow(2.0, order);
    for (int k = ctl.levels - 1; k >= order; --k) {
      const auto i = static_cast<std::size_t>(k);
      values[i] = (factor * values[i] - values[i - 1]) / (factor - 1.0);
    }
    before = last;
    last = values.back();
  }
  return {last, std::abs(last - before)};
}

NumberStateTerms number_state_terms(std::uint64_t n, double omega) {
  if (!nonnegative_finite(omega)) throw DomainError("omega must be non-negative");
  const double kept = 4.0 * static_cast<double>(n) * omega * omega;
  return {-kept, kept, 0.0};
}

DroppedIntegralCheck validate_number_state_drop(std::uint64_t n, double omega,
                                                double tau) {
  require_positive(omega, "omega");
  require_positive(tau, "tau");
  const BoxMode mode = BoxMode::make(omega, 1.0);
  quad::Control q;
  q.rel_tol = 1e-12;
  q.max_panel = 15.0 * (2.0 * kPi / omega) / 300.0;
  auto square = [&](double t) {
    const std::complex<double> b = mode_B(mode, {t, 0.0, 0.0, 0.0});
    return b * b;
  };
  auto modulus = [&](double t) { return std::norm(mode_B(mode, {t, 0.0, 0.0, 0.0})); };
  DroppedIntegralCheck check;
  check.dropped = std::abs(quad::integrate(square, 0.0, tau, q).value);
  check.kept = quad::integrate(modulus, 0.0, tau, q).value;
  check.ratio = check.dropped / check.kept;
  check.bound = 1.0 / (omega * tau);
  const double pairs = n > 0 ? 0.5 * static_cast<double>(n - 1) : 0.0;
  check.dispersion_ratio = pairs * check.ratio * check.ratio;
  return check;
}

VarianceDecomposition variance_decomposition(const LightState &state) {
  VarianceDecomposition out;
  switch (state.kind()) {
  case StateKind::coherent:
    // <:T T:> factorizes for a coherent state, so the normal-ordered term
    // cancels against the squared mean.
    out.normal_ordered = 0.0;
    out.cross = delta_p2_photon_counting(state);
    return out;
  case StateKind::number: {
    const NumberStateTerms terms = number_state_terms(state.photons(), state.omega());
    out.normal_ordered = terms.normal_ordered;
    out.cross = terms.cross;
    return out;
  }
  }
  throw PreconditionError("variance_decomposition: unsupported state kind");
}

double delta_x2_from_rate(double k, double tau) {
  if (!nonnegative_finite(k)) throw DomainError("velocity-dispersion rate must be >= 0");
  require_positive(tau, "tau");
  return k * tau * tau * tau / 3.0;
}

PositionDispersion delta_x2(const BeamSpec &beam, const MirrorSpec &mirror, double tau) {
  require_positive(tau, "tau");
  const double m = mirror.mass();
  const double k = 4.0 * beam.omega() * beam.area() * beam.energy_density() / (m * m);
  PositionDispersion out;
  out.dx2 = delta_x2_from_rate(k, tau);
  out.dx_rp_order_of_magnitude =
      std::sqrt(beam.omega() * beam.power()) * std::pow(tau, 1.5) / m;
  return out;
}

} // namespace radpress
