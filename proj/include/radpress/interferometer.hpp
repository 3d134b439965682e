#pragma once

// Beam-splitter algebra, delay-line and Fabry-Perot bounce laws, arm
// correlations behind a 50-50 splitter, and the interferometer noise budget.
// Natural units throughout.

#include <complex>
#include <cstdint>
#include <string>

#include "radpress/field_modes.hpp"
#include "radpress/mirror_fluctuations.hpp"

namespace radpress {

// Amplitudes for a beam incident from either side: r, t from side one,
// r', t' from side two.
struct BeamSplitterAmplitudes {
  std::complex<double> r;
  std::complex<double> t;
  std::complex<double> r_prime;
  std::complex<double> t_prime;
};

inline constexpr double kReciprocityTolerance = 1e-12;

struct ReciprocityReport {
  // max(||r| - |r'||, ||t| - |t'||)
  double modulus_residual = 0.0;
  // ||r|^2 + |t|^2 - 1|
  double energy_residual = 0.0;
  // |r' t* + r* t'|
  double phase_residual = 0.0;
  bool modulus_ok = false;
  bool energy_ok = false;
  bool phase_ok = false;
  bool passed() const { return modulus_ok && energy_ok && phase_ok; }
};

ReciprocityReport check_reciprocity(const BeamSplitterAmplitudes &amplitudes);

// A splitter that satisfies the Stokes relations by construction.
class BeamSplitter {
public:
  // Throws PreconditionError when the reciprocity check fails.
  static BeamSplitter make(const BeamSplitterAmplitudes &amplitudes);
  // r = r' = e^{i n pi/2} / sqrt 2, t = t' = 1 / sqrt 2 for odd n.
  static BeamSplitter fifty_fifty(int n = 1);

  const BeamSplitterAmplitudes &amplitudes() const { return amplitudes_; }

private:
  explicit BeamSplitter(const BeamSplitterAmplitudes &a) : amplitudes_(a) {}
  BeamSplitterAmplitudes amplitudes_;
};

struct PhaseDifference {
  double delta = 0.0; // phi_r - phi_t reduced to [0, 2 pi)
  int n = 0;          // delta = n pi / 2 with n in {1, 3}
  double residual = 0.0;
};

// Throws PreconditionError unless |r| = |t| = 1/sqrt 2, the Stokes relations
// hold and delta is an odd multiple of pi/2, all to kReciprocityTolerance.
PhaseDifference phase_difference(const BeamSplitterAmplitudes &amplitudes);

class DelayLine {
public:
  // bounces >= 1, arm_length > 0, 0 < window < 2 * arm_length.
  static DelayLine make(std::uint32_t bounces, double arm_length, double window,
                        bool spots_overlap = false);

  std::uint32_t bounces() const { return bounces_; }
  double arm_length() const { return arm_length_; }
  double window() const { return window_; }
  bool spots_overlap() const { return spots_overlap_; }

private:
  DelayLine(std::uint32_t b, double l, double w, bool o)
      : bounces_(b), arm_length_(l), window_(w), spots_overlap_(o) {}
  std::uint32_t bounces_;
  double arm_length_;
  double window_;
  bool spots_overlap_;
};

// b^2 * 4 w^2 |z|^2. Throws PreconditionError for number states.
double delay_line_delta_p2(const LightState &state, const DelayLine &line);
// Same through the wavepacket overlaps: |z|^2 (sum of per-window integrals)^2
// with the packet arriving once per round trip 2L.
double delay_line_delta_p2(const LightState &state, const DelayLine &line,
                           const Wavepacket &packet);

class FabryPerot {
public:
  // Throws InvalidCavityError unless |R| < 1.
  static FabryPerot make(std::complex<double> input_reflection);

  std::complex<double> input_reflection() const { return reflection_; }
  double reflectivity() const { return std::norm(reflection_); }
  // b' = ln 2 / ln(1 / |R|^2); 0 for R = 0.
  double effective_bounces() const { return effective_bounces_; }

private:
  FabryPerot(std::complex<double> r, double b) : reflection_(r), effective_bounces_(b) {}
  std::complex<double> reflection_;
  double effective_bounces_;
};

struct FabryPerotResult {
  double exact_factor = 0.0;      // 1 / (1 - |R|^2)^2
  double asymptotic_factor = 0.0; // (b' / ln 2)^2
  double effective_bounces = 0.0;
  double delta_p2 = 0.0;            // exact_factor * 4 w^2 |z|^2
  double delta_p2_asymptotic = 0.0; // asymptotic_factor * 4 w^2 |z|^2
};

FabryPerotResult fabry_perot_delta_p2(const LightState &state, const FabryPerot &cavity);

struct ArmDispersions {
  double dp1 = 0.0;
  double dp2 = 0.0;
  double correlation = 0.0;
  double difference = 0.0; // dp1 + dp2 - 2 correlation
  // Interference factors 1/4 Re[(1 + e^{i delta})(1 + e^{-i delta})] and
  // 1/4 Re[(1 + e^{i delta})^2].
  double per_arm_factor = 0.0;
  double correlation_factor = 0.0;
};

// Coherent light in one port, vacuum in the other, b bounces in each arm.
// Throws PreconditionError for a non-reciprocal or non-50-50 splitter.
ArmDispersions arm_dispersions_and_correlation(const LightState &state,
                                               const BeamSplitterAmplitudes &amplitudes,
                                               std::uint32_t bounces);

enum class RadiationPressureConvention {
  order_of_magnitude, // dx_rp = b sqrt(w P) tau^{3/2} / m
  exact_coefficient,  // dx_rp^2 = (4/3) b^2 w P tau^3 / m^2
};

std::string to_string(RadiationPressureConvention convention);

struct NoiseBudget {
  double power = 0.0;
  double omega = 0.0;
  double mass = 0.0;
  double tau = 0.0;
  double bounces = 0.0;
  RadiationPressureConvention convention = RadiationPressureConvention::order_of_magnitude;

  double dx_rp = 0.0;
  double dx_pc = 0.0;    // 1 / (2 b sqrt(w P tau))
  double dx_total = 0.0; // sqrt(dx_rp^2 + dx_pc^2)
  double p_opt = 0.0;    // minimizer of dx_total for this convention
  double dx_sql = 0.0;   // sqrt(tau / m)
};

// Throws DomainError for non-positive inputs.
NoiseBudget noise_budget(double power, double omega, double mass, double tau,
                         double bounces,
                         RadiationPressureConvention convention =
                             RadiationPressureConvention::order_of_magnitude);

// m / (2 w tau^2 b^2), the minimizer in the order-of-magnitude convention.
double optimal_power(double omega, double mass, double tau, double bounces);

struct SearchControl {
  double power_lo = 1e-60;
  double power_hi = 1e60;
  double rel_tol = 1e-12; // on ln P
  int max_iterations = 500;
  RadiationPressureConvention convention = RadiationPressureConvention::order_of_magnitude;
};

struct PowerOptimum {
  double p_opt_numeric = 0.0;
  double p_opt_analytic = 0.0;
  int iterations = 0;
};

// Golden-section search in ln P for the minimum of dx_rp^2 + dx_pc^2. Throws
// SearchError when the bracket is invalid or the minimum lands within a
// factor of 10 of either end.
PowerOptimum optimize_power(double omega, double mass, double tau, double bounces,
                            const SearchControl &ctl = {});

} // namespace radpress
