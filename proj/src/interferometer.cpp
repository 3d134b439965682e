#include "radpress/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "radpress/errors.hpp"

namespace radpress {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

using cplx = std::complex<double>;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void require_positive(double v, const char *what) {
  if (!positive_finite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite (got " << v << ")";
    throw DomainError(os.str());
  }
}

double single_bounce(const LightState &state) {
  if (state.kind() != StateKind::coherent) {
    throw PreconditionError("interferometer: the input state must be coherent");
  }
  return delta_p2_photon_counting(state);
}

// i^n for integer n, exact.
cplx i_power(int n) {
  switch (((n % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

// Coefficients k, c of dx_total^2 = k P + c / P.
struct BudgetCoefficients {
  double k;
  double c;
};

BudgetCoefficients coefficients(double omega, double mass, double tau, double bounces,
                                RadiationPressureConvention convention) {
  double k = bounces * bounces * omega * tau * tau * tau / (mass * mass);
  if (convention == RadiationPressureConvention::exact_coefficient) k *= 4.0 / 3.0;
  const double c = 1.0 / (4.0 * bounces * bounces * omega * tau);
  return {k, c};
}

} // namespace

ReciprocityReport check_reciprocity(const BeamSplitterAmplitudes &a) {
  ReciprocityReport rep;
  rep.modulus_residual = std::max(std::abs(std::abs(a.r) - std::abs(a.r_prime)),
                                  std::abs(std::abs(a.t) - std::abs(a.t_prime)));
  rep.energy_residual = std::abs(std::norm(a.r) + std::norm(a.t) - 1.0);
  rep.phase_residual = std::abs(a.r_prime * std::conj(a.t) + std::conj(a.r) * a.t_prime);
  rep.modulus_ok = rep.modulus_residual < kReciprocityTolerance;
  rep.energy_ok = rep.energy_residual < kReciprocityTolerance;
  rep.phase_ok = rep.phase_residual < kReciprocityTolerance;
  return rep;
}

BeamSplitter BeamSplitter::make(const BeamSplitterAmplitudes &amplitudes) {
  const ReciprocityReport rep = check_reciprocity(amplitudes);
  if (!rep.passed()) {
    std::ostringstream os;
    os << "beam splitter violates the Stokes relations: modulus residual "
       << rep.modulus_residual << ", energy residual " << rep.energy_residual
       << ", phase residual " << rep.phase_residual;
    throw PreconditionError(os.str());
  }
  return BeamSplitter(amplitudes);
}

BeamSplitter BeamSplitter::fifty_fifty(int n) {
  if (n % 2 == 0) {
    throw PreconditionError("fifty_fifty: the phase index n must be odd");
  }
  const double s = 1.0 / std::sqrt(2.0);
  const cplx r = s * i_power(n);
  const cplx t{s, 0.0};
  return make({r, t, r, t});
}

PhaseDifference phase_difference(const BeamSplitterAmplitudes &a) {
  const double half = 0.5;
  if (std::abs(std::norm(a.r) - half) > kReciprocityTolerance ||
      std::abs(std::norm(a.t) - half) > kReciprocityTolerance) {
    throw PreconditionError("phase_difference: splitter is not 50-50");
  }
  const ReciprocityReport rep = check_reciprocity(a);
  if (!rep.passed()) {
    std::ostringstream os;
    os << "phase_difference: Stokes relations fail (phase residual "
       << rep.phase_residual << ")";
    throw PreconditionError(os.str());
  }
  double delta = std::arg(a.r) - std::arg(a.t);
  delta = std::fmod(delta, 2.0 * kPi);
  if (delta < 0.0) delta += 2.0 * kPi;
  const double quarter = 0.5 * kPi;
  long n = std::lround(delta / quarter);
  const double residual = std::abs(delta - static_cast<double>(n) * quarter);
  n %= 4;
  if (n % 2 == 0 || residual > kReciprocityTolerance) {
    std::ostringstream os;
    os << "phase_difference: delta = " << delta << " is not an odd multiple of pi/2";
    throw PreconditionError(os.str());
  }
  return {delta, static_cast<int>(n), residual};
}

DelayLine DelayLine::make(std::uint32_t bounces, double arm_length, double window,
                          bool spots_overlap) {
  if (bounces < 1) throw DomainError("delay line needs at least one bounce");
  require_positive(arm_length, "arm length");
  require_positive(window, "window");
  if (!(window < 2.0 * arm_length)) {
    throw DomainError("delay line window must be shorter than the round trip 2L");
  }
  return DelayLine(bounces, arm_length, window, spots_overlap);
}

double delay_line_delta_p2(const LightState &state, const DelayLine &line) {
  const double b = static_cast<double>(line.bounces());
  // Whether the spots overlap on the mirror does not enter.
  return b * b * single_bounce(state);
}

double delay_line_delta_p2(const LightState &state, const DelayLine &line,
                           const Wavepacket &packet) {
  single_bounce(state);
  const std::vector<double> windows =
      bounce_window_overlaps(packet, line.bounces(), 2.0 * line.arm_length(), line.window());
  double sum = 0.0;
  for (double w : windows) sum += w;
  return state.mean_photons() * sum * sum;
}

FabryPerot FabryPerot::make(std::complex<double> input_reflection) {
  const double r2 = std::norm(input_reflection);
  if (!std::isfinite(r2) || !(std::abs(input_reflection) < 1.0)) {
    std::ostringstream os;
    os << "Fabry-Perot input mirror needs |R| < 1 (got |R| = "
       << std::abs(input_reflection) << ")";
    throw InvalidCavityError(os.str());
  }
  const double b = r2 == 0.0 ? 0.0 : kLn2 / std::log(1.0 / r2);
  return FabryPerot(input_reflection, b);
}

FabryPerotResult fabry_perot_delta_p2(const LightState &state, const FabryPerot &cavity) {
  const double single = single_bounce(state);
  const double r2 = cavity.reflectivity();
  FabryPerotResult out;
  out.effective_bounces = cavity.effective_bounces();
  const double gain = 1.0 / (1.0 - r2);
  out.exact_factor = gain * gain;
  const double ratio = out.effective_bounces / kLn2;
  out.asymptotic_factor = ratio * ratio;
  out.delta_p2 = out.exact_factor * single;
  out.delta_p2_asymptotic = out.asymptotic_factor * single;
  return out;
}

ArmDispersions arm_dispersions_and_correlation(const LightState &state,
                                               const BeamSplitterAmplitudes &amplitudes,
                                               std::uint32_t bounces) {
  const PhaseDifference phase = phase_difference(amplitudes);
  const double single = single_bounce(state);
  const double b = static_cast<double>(bounces);
  // The classification fixes e^{i delta} = i^n exactly.
  const cplx e = i_power(phase.n);
  ArmDispersions out;
  out.per_arm_factor = 0.25 * ((1.0 + e) * (1.0 + std::conj(e))).real();
  out.correlation_factor = 0.25 * ((1.0 + e) * (1.0 + e)).real();
  const double scale = b * b * single;
  out.dp1 = out.per_arm_factor * scale;
  out.dp2 = out.per_arm_factor * scale;
  out.correlation = out.correlation_factor * scale;
  out.difference = out.dp1 + out.dp2 - 2.0 * out.correlation;
  return out;
}

std::string to_string(RadiationPressureConvention convention) {
  switch (convention) {
  case RadiationPressureConvention::order_of_magnitude: return "order-of-magnitude";
  case RadiationPressureConvention::exact_coefficient: return "exact-coefficient";
  }
  return "unknown";
}

double optimal_power(double omega, double mass, double tau, double bounces) {
  require_positive(omega, "omega");
  require_positive(mass, "mass");
  require_positive(tau, "tau");
  require_positive(bounces, "bounces");
  return mass / (2.0 * omega * tau * tau * bounces * bounces);
}

NoiseBudget noise_budget(double power, double omega, double mass, double tau,
                         double bounces, RadiationPressureConvention convention) {
  require_positive(power, "power");
  NoiseBudget nb;
  nb.p_opt = optimal_power(omega, mass, tau, bounces);
  nb.power = power;
  nb.omega = omega;
  nb.mass = mass;
  nb.tau = tau;
  nb.bounces = bounces;
  nb.convention = convention;
  nb.dx_rp = bounces * std::sqrt(omega * power) * std::pow(tau, 1.5) / mass;
  if (convention == RadiationPressureConvention::exact_coefficient) {
    nb.dx_rp *= 2.0 / std::sqrt(3.0);
    nb.p_opt *= std::sqrt(3.0) / 2.0;
  }
  nb.dx_pc = 1.0 / (2.0 * bounces * std::sqrt(omega * power * tau));
  nb.dx_total = std::hypot(nb.dx_rp, nb.dx_pc);
  nb.dx_sql = std::sqrt(tau / mass);
  return nb;
}

PowerOptimum optimize_power(double omega, double mass, double tau, double bounces,
                            const SearchControl &ctl) {
  PowerOptimum out;
  out.p_opt_analytic = optimal_power(omega, mass, tau, bounces);
  if (ctl.convention == RadiationPressureConvention::exact_coefficient) {
    out.p_opt_analytic *= std::sqrt(3.0) / 2.0;
  }
  if (!positive_finite(ctl.power_lo) || !positive_finite(ctl.power_hi) ||
      !(ctl.power_hi > ctl.power_lo)) {
    throw SearchError("optimize_power: bracket must satisfy 0 < lo < hi");
  }
  const BudgetCoefficients co = coefficients(omega, mass, tau, bounces, ctl.convention);
  auto objective = [&](double log_p) {
    const double p = std::exp(log_p);
    return co.k * p + co.c / p;
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(ctl.power_lo);
  double hi = std::log(ctl.power_hi);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  int it = 0;
  while (hi - lo > ctl.rel_tol * std::max(1.0, std::abs(0.5 * (lo + hi))) &&
         it < ctl.max_iterations) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
    ++it;
  }
  const double best = 0.5 * (lo + hi);
  const double edge = std::log(10.0);
  if (best - std::log(ctl.power_lo) < edge || std::log(ctl.power_hi) - best < edge) {
    std::ostringstream os;
    os << "optimize_power: minimum at P = " << std::exp(best)
       << " lies within a factor 10 of the bracket [" << ctl.power_lo << ", "
       << ctl.power_hi << "]";
    throw SearchError(os.str());
  }
  out.p_opt_numeric = std::exp(best);
  out.iterations = it;
  return out;
}

} // namespace radpress
