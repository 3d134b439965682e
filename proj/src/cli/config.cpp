#include "radpress/cli/config.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace radpress::cli {

namespace {

constexpr double kPi = std::numbers::pi;

double require(const std::optional<double> &v, const char *flag, bool allow_zero = false) {
  if (!v) throw InputError(std::string("missing required input --") + flag);
  const bool ok = std::isfinite(*v) && (allow_zero ? *v >= 0.0 : *v > 0.0);
  if (!ok) {
    std::ostringstream os;
    os << "--" << flag << " must be " << (allow_zero ? "non-negative" : "positive")
       << " (got " << *v << ")";
    throw InputError(os.str());
  }
  return *v;
}

void fill(std::optional<double> &slot, double value) {
  if (!slot) slot = value;
}

} // namespace

void apply_preset(RunConfig &cfg) {
  if (cfg.preset.empty()) return;
  double radius = 0.0;
  double tau = 0.0;
  if (cfg.preset == "demo") {
    radius = 1.0 / std::sqrt(kPi); // unit area
    tau = 1.0;
  } else if (cfg.preset == "wr50") {
    radius = 50.0;
    tau = 1e3;
  } else if (cfg.preset == "wr200") {
    radius = 200.0;
    tau = 1e4;
  } else {
    throw InputError("unknown preset '" + cfg.preset + "' (expected demo, wr50 or wr200)");
  }
  // w = 1, rho = 1, m = 1 in natural units.
  cfg.units = UnitSystem::natural;
  fill(cfg.omega, 1.0);
  fill(cfg.spot_radius, radius);
  fill(cfg.power, kPi * radius * radius);
  fill(cfg.mass, 1.0);
  fill(cfg.tau, tau);
}

NaturalInputs resolve(const RunConfig &cfg, const Requirements &need) {
  const bool si = cfg.units == UnitSystem::si;
  NaturalInputs in;
  if (need.omega) {
    if (cfg.omega && cfg.wavelength) {
      throw InputError("give either --omega or --wavelength, not both");
    }
    if (cfg.omega) {
      in.omega = require(cfg.omega, "omega");
    } else if (cfg.wavelength) {
      const double lambda = require(cfg.wavelength, "wavelength");
      in.omega = si ? UnitContext::omega_from_wavelength(lambda) : 2.0 * kPi / lambda;
    } else {
      throw InputError("missing required input --wavelength (or --omega)");
    }
  }
  if (need.power) {
    const double p = require(cfg.power, "power", true);
    in.power = si ? UnitContext::power_to_natural(p) : p;
  }
  if (need.mass) {
    const double m = require(cfg.mass, "mass");
    in.mass = si ? UnitContext::mass_to_natural(m) : m;
  }
  if (need.tau) in.tau = require(cfg.tau, "tau");
  if (need.spot_radius) {
    const double r = require(cfg.spot_radius, "spot-radius");
    in.spot_radius = si ? UnitContext::length_to_natural(r) : r;
  }
  if (need.arm_length) {
    const double l = require(cfg.arm_length, "arm-length");
    in.arm_length = si ? UnitContext::length_to_natural(l) : l;
    // The window is a time in both systems; default to half the round trip.
    in.window = cfg.window ? require(cfg.window, "window") : in.arm_length;
  }
  return in;
}

OutputFormat parse_format(const std::string &text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw InputError("--format must be csv or json (got '" + text + "')");
}

UnitSystem parse_units(const std::string &text) {
  if (text == "si") return UnitSystem::si;
  if (text == "natural") return UnitSystem::natural;
  throw InputError("--units must be si or natural (got '" + text + "')");
}

RadiationPressureConvention parse_convention(const std::string &text) {
  if (text == "order-of-magnitude") return RadiationPressureConvention::order_of_magnitude;
  if (text == "exact-coefficient") return RadiationPressureConvention::exact_coefficient;
  throw InputError("--convention must be order-of-magnitude or exact-coefficient (got '" +
                   text + "')");
}

} // namespace radpress::cli
