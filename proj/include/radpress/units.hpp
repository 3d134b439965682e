#pragma once

// SI <-> natural units (hbar = c = 1). Time keeps its SI unit, the second, so
// every natural quantity is a power of s:
//   length  L      -> L / c            [s]
//   mass    m      -> m c^2 / hbar     [1/s]
//   power   P      -> P / hbar         [1/s^2]
//   momentum p     -> p c / hbar       [1/s]
//   velocity v     -> v / c            [1]
//   angular frequency w stays in rad/s.

namespace radpress {

enum class UnitSystem { si, natural };

struct UnitContext {
  // CODATA 2018 exact values.
  static constexpr double kSpeedOfLight = 299'792'458.0;       // m/s
  static constexpr double kHbar = 1.054'571'817e-34;           // J s

  static double length_to_natural(double metres);
  static double length_to_si(double seconds);
  static double mass_to_natural(double kilograms);
  static double mass_to_si(double inverse_seconds);
  static double power_to_natural(double watts);
  static double power_to_si(double natural);
  static double momentum_to_natural(double si);
  static double momentum_to_si(double natural);
  static double velocity_to_natural(double si);
  static double velocity_to_si(double natural);

  // w = 2 pi c / wavelength
  static double omega_from_wavelength(double metres);
};

} // namespace radpress
