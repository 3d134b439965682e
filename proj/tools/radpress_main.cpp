#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>

#include "radpress/cli/reports.hpp"

namespace {

using radpress::cli::InputError;
using radpress::cli::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;

// Raw flag values; strings are parsed after the config file is merged.
struct Flags {
  RunConfig cfg;
  std::string units = "si";
  std::string format = "json";
  std::string convention = "order-of-magnitude";
  std::string config_path;
};

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  if (key.rfind("--", 0) == 0) key.erase(0, 2);
  return key;
}

template <typename T> T as(const nlohmann::json &v, const std::string &key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception &) {
    throw InputError("config key '" + key + "' has the wrong type");
  }
}

// Keys present in the file fill any flag the user did not pass explicitly.
void merge_config_file(Flags &f, const std::map<std::string, CLI::Option *> &options) {
  std::ifstream in(f.config_path);
  if (!in) throw InputError("cannot open config file '" + f.config_path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw InputError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config file must hold a flat JSON object");

  RunConfig &c = f.cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string key = normalize_key(it.key());
    const auto opt = options.find(key);
    if (opt == options.end()) throw InputError("unknown config key '" + it.key() + "'");
    if (opt->second->count() > 0) continue;
    const nlohmann::json &v = it.value();
    if (v.is_object() || v.is_array()) {
      throw InputError("config key '" + it.key() + "' must be a scalar");
    }
    if (key == "units") f.units = as<std::string>(v, key);
    else if (key == "format") f.format = as<std::string>(v, key);
    else if (key == "convention") f.convention = as<std::string>(v, key);
    else if (key == "preset") c.preset = as<std::string>(v, key);
    else if (key == "out") c.out = as<std::string>(v, key);
    else if (key == "power") c.power = as<double>(v, key);
    else if (key == "wavelength") c.wavelength = as<double>(v, key);
    else if (key == "omega") c.omega = as<double>(v, key);
    else if (key == "mass") c.mass = as<double>(v, key);
    else if (key == "tau") c.tau = as<double>(v, key);
    else if (key == "spot-radius") c.spot_radius = as<double>(v, key);
    else if (key == "cavity-r2") c.cavity_r2 = as<double>(v, key);
    else if (key == "arm-length") c.arm_length = as<double>(v, key);
    else if (key == "window") c.window = as<double>(v, key);
    else if (key == "mean-photons") c.mean_photons = as<double>(v, key);
    else if (key == "spots-overlap") c.spots_overlap = as<bool>(v, key);
    else if (key == "sweep") c.sweep = as<bool>(v, key);
    else if (key == "bounces") c.bounces = as<std::uint32_t>(v, key);
    else if (key == "samples") c.samples = as<std::size_t>(v, key);
    else if (key == "seed") c.seed = as<std::uint64_t>(v, key);
    else if (key == "sweep-points") c.sweep_points = as<std::size_t>(v, key);
    else if (key == "threads") c.threads = as<unsigned>(v, key);
    else throw InputError("config key '" + it.key() + "' is not supported in files");
  }
}

void report_failures(const radpress::cli::Report &report) {
  const auto *j = std::get_if<radpress::cli::Json>(&report.body);
  if (j == nullptr || !j->contains("checks")) return;
  for (const auto &check : (*j)["checks"]) {
    if (check["passed"].get<bool>()) continue;
    std::cerr << "radpress: check failed: " << check["name"].get<std::string>()
              << " statistic=" << radpress::cli::format_number(check["statistic"].get<double>())
              << " target=" << radpress::cli::format_number(check["target"].get<double>())
              << '\n';
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum radiation-pressure fluctuations and interferometer noise budgets"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  RunConfig &c = f.cfg;
  std::map<std::string, CLI::Option *> options;
  auto track = [&](CLI::Option *opt, const std::string &name) { options[name] = opt; };

  track(app.add_option("--units", f.units, "Unit system: si or natural")
            ->check(CLI::IsMember({"si", "natural"})),
        "units");
  track(app.add_option("--power", c.power, "Laser power (W, or 1/s^2 natural)"), "power");
  track(app.add_option("--wavelength", c.wavelength, "Wavelength (m, or s natural)"),
        "wavelength");
  track(app.add_option("--omega", c.omega, "Angular frequency in rad/s"), "omega");
  track(app.add_option("--mass", c.mass, "Mirror mass (kg, or 1/s natural)"), "mass");
  track(app.add_option("--tau", c.tau, "Integration time in s"), "tau");
  track(app.add_option("--bounces", c.bounces, "Number of bounces b")->check(CLI::PositiveNumber),
        "bounces");
  track(app.add_option("--cavity-r2", c.cavity_r2, "Cavity mirror reflectivity |R|^2"),
        "cavity-r2");
  track(app.add_option("--spot-radius", c.spot_radius, "Mirror spot radius (m, or s natural)"),
        "spot-radius");
  track(app.add_option("--arm-length", c.arm_length, "Delay-line arm length (m, or s natural)"),
        "arm-length");
  track(app.add_option("--window", c.window, "Detection window in s"), "window");
  track(app.add_flag("--spots-overlap", c.spots_overlap, "Delay-line spots overlap on the mirror"),
        "spots-overlap");
  track(app.add_option("--format", f.format, "Output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"})),
        "format");
  track(app.add_option("--out", c.out, "Write output to this path instead of stdout"), "out");
  track(app.add_option("--seed", c.seed, "Monte Carlo seed"), "seed");
  track(app.add_option("--samples", c.samples, "Monte Carlo sample count"), "samples");
  track(app.add_option("--mean-photons", c.mean_photons, "Monte Carlo mean photon number"),
        "mean-photons");
  track(app.add_option("--threads", c.threads, "Monte Carlo worker threads (0 = hardware)"),
        "threads");
  track(app.add_option("--sweep-points", c.sweep_points, "Points in the power sweep"),
        "sweep-points");
  track(app.add_flag("--sweep", c.sweep, "Emit the power sweep table from budget"), "sweep");
  track(app.add_option("--convention", f.convention,
                       "Radiation-pressure convention: order-of-magnitude or exact-coefficient"),
        "convention");
  track(app.add_option("--preset", c.preset, "Natural-unit preset: demo, wr50 or wr200"),
        "preset");
  app.add_option("--config", f.config_path, "Flat JSON file of flag values; flags win");

  const std::pair<const char *, const char *> subcommands[] = {
      {"single-mirror", "Momentum, velocity and position dispersion of one mirror, both routes"},
      {"delay-line", "Dispersion for a b-bounce delay line"},
      {"fabry-perot", "Exact and asymptotic cavity enhancement for a given |R|^2"},
      {"budget", "Radiation-pressure and shot noise, optimal power, standard quantum limit"},
      {"mc-validate", "Monte Carlo photon-counting checks of the analytic dispersions"},
      {"sweep", "Noise budget over a logarithmic power grid around the optimum"},
  };
  for (const auto &[name, help] : subcommands) {
    app.add_subcommand(name, help)->callback([&c, name] { c.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (!f.config_path.empty()) merge_config_file(f, options);
    c.units = radpress::cli::parse_units(f.units);
    c.convention = radpress::cli::parse_convention(f.convention);
    const auto format = radpress::cli::parse_format(f.format);
    radpress::cli::apply_preset(c);

    const radpress::cli::Report report = radpress::cli::run(c);
    const std::string text = radpress::cli::render(report, format);
    if (c.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(c.out, std::ios::binary);
      if (!out) throw InputError("cannot write '" + c.out + "'");
      out << text;
    }
    if (!report.passed) {
      report_failures(report);
      return kExitValidation;
    }
    return kExitOk;
  } catch (const radpress::Error &e) {
    std::cerr << "radpress: " << e.what() << '\n';
    return kExitInput;
  }
}
