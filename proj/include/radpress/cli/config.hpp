#pragma once

// Run configuration shared by every subcommand, and its resolution into
// natural-unit physical inputs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "radpress/errors.hpp"
#include "radpress/interferometer.hpp"
#include "radpress/units.hpp"

namespace radpress::cli {

enum class OutputFormat { json, csv };

// Bad user input; the CLI maps it to exit status 2.
class InputError : public Error {
public:
  using Error::Error;
};

struct RunConfig {
  std::string subcommand;
  UnitSystem units = UnitSystem::si;
  std::string preset;

  // Physical inputs in the active unit system. omega is accepted in rad/s in
  // both systems; wavelength is converted with w = 2 pi c / wavelength.
  std::optional<double> power;
  std::optional<double> wavelength;
  std::optional<double> omega;
  std::optional<double> mass;
  std::optional<double> tau;
  std::optional<double> spot_radius;
  std::optional<double> cavity_r2;
  std::optional<double> arm_length;
  std::optional<double> window;
  bool spots_overlap = false;
  std::uint32_t bounces = 1;

  // Monte Carlo.
  std::optional<double> mean_photons;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;

  // Output.
  OutputFormat format = OutputFormat::json;
  std::string out;
  std::size_t sweep_points = 41;
  bool sweep = false;
  RadiationPressureConvention convention = RadiationPressureConvention::order_of_magnitude;
};

// Physical inputs converted to natural units (seconds-based, see units.hpp).
struct NaturalInputs {
  double omega = 0.0;
  double power = 0.0;
  double mass = 0.0;
  double tau = 0.0;
  double spot_radius = 0.0;
  double arm_length = 0.0;
  double window = 0.0;
};

// Fills unset inputs from a named preset ("demo", "wr50", "wr200"). Presets
// switch the run to natural units. Throws InputError for unknown names.
void apply_preset(RunConfig &cfg);

// Which inputs a subcommand needs.
struct Requirements {
  bool omega = false;
  bool power = false;
  bool mass = false;
  bool tau = false;
  bool spot_radius = false;
  bool arm_length = false;
};

// Validates and converts; missing or non-positive required inputs raise
// InputError. Power may be zero.
NaturalInputs resolve(const RunConfig &cfg, const Requirements &need);

OutputFormat parse_format(const std::string &text);
UnitSystem parse_units(const std::string &text);
RadiationPressureConvention parse_convention(const std::string &text);

} // namespace radpress::cli
