#include "radpress/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radpress/errors.hpp"

namespace radpress {

namespace {

constexpr double c = UnitContext::kSpeedOfLight;
constexpr double hbar = UnitContext::kHbar;

double finite(double v, const char *what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
  return v;
}

} // namespace

double UnitContext::length_to_natural(double metres) { return finite(metres, "length") / c; }
double UnitContext::length_to_si(double seconds) { return finite(seconds, "length") * c; }

double UnitContext::mass_to_natural(double kilograms) {
  return finite(kilograms, "mass") * (c * c / hbar);
}
double UnitContext::mass_to_si(double inverse_seconds) {
  return finite(inverse_seconds, "mass") / (c * c / hbar);
}

double UnitContext::power_to_natural(double watts) { return finite(watts, "power") / hbar; }
double UnitContext::power_to_si(double natural) { return finite(natural, "power") * hbar; }

double UnitContext::momentum_to_natural(double si) {
  return finite(si, "momentum") * (c / hbar);
}
double UnitContext::momentum_to_si(double natural) {
  return finite(natural, "momentum") / (c / hbar);
}

double UnitContext::velocity_to_natural(double si) { return finite(si, "velocity") / c; }
double UnitContext::velocity_to_si(double natural) { return finite(natural, "velocity") * c; }

double UnitContext::omega_from_wavelength(double metres) {
  if (!(metres > 0.0) || !std::isfinite(metres)) {
    throw DomainError("wavelength must be positive and finite");
  }
  return 2.0 * std::numbers::pi * c / metres;
}

} // namespace radpress
