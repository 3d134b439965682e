#include "radpress/cli/reports.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "radpress/mc_oracle.hpp"
#include "radpress/mirror_fluctuations.hpp"

namespace radpress::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGate = 3.0; // standard errors

// Factors from natural (seconds-based) to SI output units.
struct OutputUnits {
  bool si = true;
  double momentum = 1.0; // kg m / s per natural unit
  double velocity = 1.0;
  double length = 1.0;
  double power = 1.0;
  double mass = 1.0;

  explicit OutputUnits(UnitSystem system) : si(system == UnitSystem::si) {
    if (!si) return;
    momentum = UnitContext::momentum_to_si(1.0);
    velocity = UnitContext::velocity_to_si(1.0);
    length = UnitContext::length_to_si(1.0);
    power = UnitContext::power_to_si(1.0);
    mass = UnitContext::mass_to_si(1.0);
  }

  Json labels() const {
    if (si) {
      return {{"omega", "rad/s"},       {"power", "W"},          {"mass", "kg"},
              {"tau", "s"},             {"length", "m"},         {"delta_p2", "kg^2 m^2 s^-2"},
              {"delta_v2", "m^2 s^-2"}, {"delta_x2", "m^2"},     {"dx", "m"}};
    }
    return {{"omega", "1/s"},    {"power", "1/s^2"}, {"mass", "1/s"},
            {"tau", "s"},        {"length", "s"},    {"delta_p2", "1/s^2"},
            {"delta_v2", "1"},   {"delta_x2", "s^2"}, {"dx", "s"}};
  }
};

std::string unit_name(UnitSystem u) { return u == UnitSystem::si ? "si" : "natural"; }

Json natural_echo(const NaturalInputs &in, const Requirements &need) {
  Json j = Json::object();
  if (need.omega) j["omega"] = in.omega;
  if (need.power) j["power"] = in.power;
  if (need.mass) j["mass"] = in.mass;
  if (need.tau) j["tau"] = in.tau;
  if (need.spot_radius) j["spot_radius"] = in.spot_radius;
  if (need.arm_length) {
    j["arm_length"] = in.arm_length;
    j["window"] = in.window;
  }
  return j;
}

Json ratio_or_null(double num, double den) {
  if (den == 0.0) return nullptr;
  return num / den;
}

LightState coherent_from_power(const NaturalInputs &in) {
  // <n> = P tau / w photons in the window.
  const double photons = in.power * in.tau / in.omega;
  return LightState::coherent(in.omega, std::sqrt(photons));
}

Table sweep_table(const RunConfig &cfg, const NaturalInputs &in) {
  if (cfg.sweep_points < 2) throw InputError("--sweep-points must be at least 2");
  const OutputUnits units(cfg.units);
  const double b = static_cast<double>(cfg.bounces);
  const double p_opt = noise_budget(1.0, in.omega, in.mass, in.tau, b, cfg.convention).p_opt;
  Table t;
  t.header = {"power", "dx_rp", "dx_pc", "dx_total", "dx_sql", "convention"};
  const std::size_t n = cfg.sweep_points;
  for (std::size_t i = 0; i < n; ++i) {
    // Four decades centred on P_opt; an odd count puts P_opt on the grid.
    const double exponent = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    const double p = p_opt * std::pow(10.0, exponent);
    const NoiseBudget nb = noise_budget(p, in.omega, in.mass, in.tau, b, cfg.convention);
    t.rows.push_back({p * units.power, nb.dx_rp * units.length, nb.dx_pc * units.length,
                      nb.dx_total * units.length, nb.dx_sql * units.length,
                      to_string(cfg.convention)});
  }
  return t;
}

Json mc_check(const std::string &name, double statistic, double target, double se) {
  const double z = se > 0.0 ? (statistic - target) / se : (statistic == target ? 0.0 : INFINITY);
  Json j;
  j["name"] = name;
  j["statistic"] = statistic;
  j["target"] = target;
  j["standard_error"] = se;
  j["z"] = std::isfinite(z) ? Json(z) : Json(nullptr);
  j["gate"] = kGate;
  j["passed"] = std::abs(z) < kGate;
  return j;
}

} // namespace

Report run_single_mirror(const RunConfig &cfg) {
  const Requirements need{true, true, true, true, true, false};
  const NaturalInputs in = resolve(cfg, need);
  const OutputUnits units(cfg.units);
  const double area = kPi * in.spot_radius * in.spot_radius;
  const BeamSpec beam = BeamSpec::make(in.omega, in.power / area, area);
  const MirrorSpec mirror = MirrorSpec::make(in.mass, in.spot_radius);

  const double dp2 = delta_p2_photon_counting(beam, in.tau);
  const double dv2 = delta_v2_coherent(beam, mirror, in.tau);
  const PositionDispersion dx = delta_x2(beam, mirror, in.tau);

  std::string method = "finite-disk";
  double dv2_st = 0.0;
  try {
    dv2_st = delta_v2_stress_tensor(beam, mirror, in.tau);
  } catch (const RegimeError &) {
    method = "asymptotic-area";
    dv2_st = delta_v2_stress_tensor_asymptotic(beam, mirror, in.tau);
  }
  const double m2 = in.mass * in.mass;
  const double dx2_st = delta_x2_from_rate(dv2_st / in.tau, in.tau);

  const double p2 = units.momentum * units.momentum;
  const double v2 = units.velocity * units.velocity;
  const double l2 = units.length * units.length;

  Json j;
  j["report"] = "single-mirror";
  j["unit_system"] = unit_name(cfg.units);
  j["convention"] = dx.convention;
  j["dx_rp_convention"] = dx.order_of_magnitude_convention;
  j["inputs_natural"] = natural_echo(in, need);
  j["mean_photons"] = in.power * in.tau / in.omega;
  j["photon_counting"] = {{"delta_p2", dp2 * p2}, {"delta_v2", dv2 * v2}, {"delta_x2", dx.dx2 * l2}};
  j["stress_tensor"] = {{"method", method},
                        {"delta_p2", dv2_st * m2 * p2},
                        {"delta_v2", dv2_st * v2},
                        {"delta_x2", dx2_st * l2}};
  j["route_agreement"] = ratio_or_null(dv2_st, dv2);
  j["dx_rp_order_of_magnitude"] = dx.dx_rp_order_of_magnitude * units.length;
  j["units"] = units.labels();
  return {j, true};
}

Report run_delay_line(const RunConfig &cfg) {
  const Requirements need{true, true, false, true, false, true};
  const NaturalInputs in = resolve(cfg, need);
  const OutputUnits units(cfg.units);
  const LightState state = coherent_from_power(in);
  const DelayLine line = DelayLine::make(cfg.bounces, in.arm_length, in.window, cfg.spots_overlap);
  const double single = delta_p2_photon_counting(state);
  const double total = delay_line_delta_p2(state, line);
  const double p2 = units.momentum * units.momentum;

  Json j;
  j["report"] = "delay-line";
  j["unit_system"] = unit_name(cfg.units);
  j["inputs_natural"] = natural_echo(in, need);
  j["bounces"] = cfg.bounces;
  j["spots_overlap"] = cfg.spots_overlap;
  j["mean_photons"] = state.mean_photons();
  j["delta_p2_single_bounce"] = single * p2;
  j["delta_p2"] = total * p2;
  j["scaling_factor"] = ratio_or_null(total, single);
  if (cfg.mass) {
    const double m = (cfg.units == UnitSystem::si) ? UnitContext::mass_to_natural(*cfg.mass)
                                                  : *cfg.mass;
    if (!(m > 0.0)) throw InputError("--mass must be positive");
    j["delta_v2"] = total / (m * m) * units.velocity * units.velocity;
  }
  j["units"] = units.labels();
  return {j, true};
}

Report run_fabry_perot(const RunConfig &cfg) {
  const Requirements need{true, true, false, true, false, false};
  const NaturalInputs in = resolve(cfg, need);
  if (!cfg.cavity_r2) throw InputError("missing required input --cavity-r2");
  const double r2 = *cfg.cavity_r2;
  if (!(r2 >= 0.0) || !std::isfinite(r2)) throw InputError("--cavity-r2 must be >= 0");
  const OutputUnits units(cfg.units);
  const LightState state = coherent_from_power(in);
  const FabryPerot cavity = FabryPerot::make(std::sqrt(r2));
  const FabryPerotResult fp = fabry_perot_delta_p2(state, cavity);
  const double p2 = units.momentum * units.momentum;

  Json j;
  j["report"] = "fabry-perot";
  j["unit_system"] = unit_name(cfg.units);
  j["inputs_natural"] = natural_echo(in, need);
  j["cavity_r2"] = r2;
  j["effective_bounces"] = fp.effective_bounces;
  j["exact_factor"] = fp.exact_factor;
  j["asymptotic_factor"] = fp.asymptotic_factor;
  j["asymptotic_relative_gap"] = ratio_or_null(fp.exact_factor - fp.asymptotic_factor,
                                               fp.exact_factor);
  j["mean_photons"] = state.mean_photons();
  j["delta_p2_single_bounce"] = delta_p2_photon_counting(state) * p2;
  j["delta_p2"] = fp.delta_p2 * p2;
  j["delta_p2_asymptotic"] = fp.delta_p2_asymptotic * p2;
  j["units"] = units.labels();
  return {j, true};
}

Report run_budget(const RunConfig &cfg) {
  if (cfg.sweep) return run_sweep(cfg);
  const Requirements need{true, true, true, true, false, false};
  const NaturalInputs in = resolve(cfg, need);
  if (!(in.power > 0.0)) throw InputError("--power must be positive for a noise budget");
  const OutputUnits units(cfg.units);
  const double b = static_cast<double>(cfg.bounces);
  const NoiseBudget nb = noise_budget(in.power, in.omega, in.mass, in.tau, b, cfg.convention);
  SearchControl search;
  search.convention = cfg.convention;
  const PowerOptimum opt = optimize_power(in.omega, in.mass, in.tau, b, search);
  const NoiseBudget at_opt = noise_budget(nb.p_opt, in.omega, in.mass, in.tau, b, cfg.convention);

  Json j;
  j["report"] = "budget";
  j["unit_system"] = unit_name(cfg.units);
  j["convention"] = to_string(cfg.convention);
  j["inputs_natural"] = natural_echo(in, need);
  j["bounces"] = cfg.bounces;
  j["dx_rp"] = nb.dx_rp * units.length;
  j["dx_pc"] = nb.dx_pc * units.length;
  j["dx_total"] = nb.dx_total * units.length;
  j["dx_sql"] = nb.dx_sql * units.length;
  j["p_opt"] = nb.p_opt * units.power;
  j["p_opt_numeric"] = opt.p_opt_numeric * units.power;
  j["at_p_opt"] = {{"dx_rp", at_opt.dx_rp * units.length},
                   {"dx_pc", at_opt.dx_pc * units.length},
                   {"dx_total", at_opt.dx_total * units.length},
                   {"dx_sql", at_opt.dx_sql * units.length}};
  j["units"] = units.labels();
  return {j, true};
}

Report run_sweep(const RunConfig &cfg) {
  const Requirements need{true, false, true, true, false, false};
  const NaturalInputs in = resolve(cfg, need);
  return {sweep_table(cfg, in), true};
}

Report run_mc_validate(const RunConfig &cfg) {
  McConfig mc;
  mc.samples = cfg.samples;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  mc.bounces = cfg.bounces;
  mc.mean_photons = cfg.mean_photons.value_or(100.0);
  if (!(mc.mean_photons >= 0.0) || !std::isfinite(mc.mean_photons)) {
    throw InputError("--mean-photons must be non-negative");
  }
  if (cfg.omega || cfg.wavelength) {
    mc.omega = resolve(cfg, Requirements{true, false, false, false, false, false}).omega;
  }

  const CoherentMcResult coh = simulate_coherent(mc);
  const auto n = static_cast<std::uint64_t>(std::llround(mc.mean_photons));
  const NumberMcResult num = simulate_number_state(n, mc.omega, mc.bounces, mc.samples);
  const SplitMcResult split = simulate_split_arms(mc);

  Json checks = Json::array();
  checks.push_back(mc_check("coherent_variance", coh.variance.value, coh.target_variance,
                            coh.variance.standard_error));

  Json number;
  number["name"] = "number_state_variance";
  number["statistic"] = num.variance;
  number["target"] = 0.0;
  number["mean"] = num.mean;
  number["target_mean"] = num.target_mean;
  const bool mean_exact =
      std::abs(num.mean - num.target_mean) <= 1e-12 * std::max(1.0, std::abs(num.target_mean));
  number["passed"] = num.variance == 0.0 && mean_exact;
  checks.push_back(number);

  Json arms = mc_check("split_covariance", split.covariance.value, 0.0,
                       split.covariance.standard_error);
  const double rho_gate = kGate / std::sqrt(static_cast<double>(split.samples));
  arms["correlation"] = split.correlation;
  arms["correlation_gate"] = rho_gate;
  const Json v1 = mc_check("arm1_variance", split.variance1.value, split.target_variance,
                           split.variance1.standard_error);
  const Json v2 = mc_check("arm2_variance", split.variance2.value, split.target_variance,
                           split.variance2.standard_error);
  arms["arm_variances"] = Json::array({v1, v2});
  arms["passed"] = arms["passed"].get<bool>() && std::abs(split.correlation) < rho_gate &&
                   v1["passed"].get<bool>() && v2["passed"].get<bool>();
  checks.push_back(arms);

  bool passed = true;
  for (const auto &c : checks) passed = passed && c["passed"].get<bool>();

  Json warnings = Json::array();
  for (const auto &w : coh.warnings) warnings.push_back(w);

  Json j;
  j["report"] = "mc-validate";
  j["model"] = "photon-counting Monte Carlo; stress-tensor results are covered through the "
               "equivalence of the two routes, not simulated independently";
  j["seed"] = cfg.seed;
  j["samples"] = mc.samples;
  j["mean_photons"] = mc.mean_photons;
  j["omega"] = mc.omega;
  j["bounces"] = mc.bounces;
  j["checks"] = checks;
  j["warnings"] = warnings;
  j["passed"] = passed;
  return {j, passed};
}

Report run(const RunConfig &cfg) {
  if (cfg.subcommand == "single-mirror") return run_single_mirror(cfg);
  if (cfg.subcommand == "delay-line") return run_delay_line(cfg);
  if (cfg.subcommand == "fabry-perot") return run_fabry_perot(cfg);
  if (cfg.subcommand == "budget") return run_budget(cfg);
  if (cfg.subcommand == "mc-validate") return run_mc_validate(cfg);
  if (cfg.subcommand == "sweep") return run_sweep(cfg);
  throw InputError("unknown subcommand '" + cfg.subcommand + "'");
}

std::string render(const Report &report, OutputFormat format) {
  if (const Table *t = std::get_if<Table>(&report.body)) return to_csv_text(*t);
  const Json &j = std::get<Json>(report.body);
  if (format == OutputFormat::csv) return to_csv_text(flatten(j));
  return to_json_text(j);
}

} // namespace radpress::cli
