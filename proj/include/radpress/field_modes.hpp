#pragma once

// Single-mode field quantities near a perfectly reflecting mirror: the
// standing-wave B_z mode, vacuum two-point functions with an image term,
// coherent-state normal-ordered products and wavepacket overlaps.
//
// Two coordinate conventions coexist on purpose. The standing mode has its
// mirror at x = 0; the two-point functions put the mirror plane at z = 0.

#include <complex>
#include <cstddef>
#include <vector>

namespace radpress {

struct SpacetimePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Box-normalized mode of frequency omega in volume V, C = sqrt(omega / 2V).
class BoxMode {
public:
  static BoxMode make(double omega, double volume);

  double omega() const { return omega_; }
  double volume() const { return volume_; }
  double normalization() const { return c_; }

private:
  BoxMode(double omega, double volume, double c)
      : omega_(omega), volume_(volume), c_(c) {}
  double omega_;
  double volume_;
  double c_;
};

// Coherent-state amplitude z = |z| e^{i phase} of a single mode.
struct CoherentAmplitude {
  double magnitude = 0.0;
  double phase = 0.0;
};

// B_z(t, x) = -2 C cos(w x) e^{-i w t}, mirror at x = 0.
std::complex<double> mode_B(const BoxMode &mode, const SpacetimePoint &p);

// Relative tolerance for the light-cone test |dt^2 - |dx|^2| < tol * scale^2.
inline constexpr double kLightConeTolerance = 1e-9;

// Vacuum <B_z(p1) B_z(p2)> in empty space,
//   [dt^2 + |dx|^2 - 2 dz^2] / (pi^2 [dt^2 - |dx|^2]^3),
// plus the image term (z2 -> -z2) when with_mirror is set. Mirror at z = 0.
// Throws SingularSeparationError on (or within tolerance of) the light cone.
double vacuum_two_point(const SpacetimePoint &p1, const SpacetimePoint &p2,
                        bool with_mirror);

// <:B_z(p1) B_z(p2):> in the coherent state,
//   16 C^2 |z|^2 cos(w t1 + phase) cos(w t2 + phase) cos(w x1) cos(w x2).
double normal_ordered_BB(const BoxMode &mode, const CoherentAmplitude &z,
                         const SpacetimePoint &p1, const SpacetimePoint &p2);

// The cross term of <:T_xx::T_xx:> for points on the mirror: the coherent
// normal-ordered product times the vacuum two-point function with image.
double cross_term_Txx(const BoxMode &mode, const CoherentAmplitude &z,
                      const SpacetimePoint &p1, const SpacetimePoint &p2);

// Gaussian wavepacket moving along x with uniform transverse profile over
// area A:
//   u_I(t, x) = N exp(-sigma^2 (t - x)^2 / 2) exp(-i w0 (t - x)),
// normalized so that int |u_I|^2 d^3x = w0 / 2. The reflected piece is
// u_R(t, x) = u_I(t, -x). The envelope is truncated at |t - x| = 8 / sigma.
class Wavepacket {
public:
  // Largest accepted sigma / w0.
  static constexpr double kMaxRelativeBandwidth = 0.1;
  static constexpr double kTruncation = 8.0;
  static constexpr double kNormTolerance = 1e-6;

  // Normalized packet; throws DomainError on bad inputs and ContractError
  // if sigma / w0 exceeds kMaxRelativeBandwidth or the numeric norm misses.
  static Wavepacket make(double omega0, double sigma, double area = 1.0);

  // Packet with a caller-chosen amplitude N, unchecked; used to exercise the
  // normalization contract downstream.
  static Wavepacket with_amplitude(double omega0, double sigma, double area,
                                   double amplitude);

  double omega0() const { return omega0_; }
  double sigma() const { return sigma_; }
  double area() const { return area_; }
  double amplitude() const { return amplitude_; }
  double half_width() const { return kTruncation / sigma_; }

  std::complex<double> incident(double t, double x) const;
  std::complex<double> reflected(double t, double x) const;

  // int |u_I|^2 d^3x at t = 0, by quadrature over the truncated support.
  double numeric_norm() const;

private:
  Wavepacket(double omega0, double sigma, double area, double amplitude)
      : omega0_(omega0), sigma_(sigma), area_(area), amplitude_(amplitude) {}
  double omega0_;
  double sigma_;
  double area_;
  double amplitude_;
};

// Time-area integrals at the mirror (x = 0) of the four pieces of |u_0|^2
// with u_0 = u_I + u_R.
struct OverlapPieces {
  double incident = 0.0;        // |u_I|^2
  double reflected = 0.0;       // |u_R|^2
  double incident_reflected = 0.0; // Re u_I u_R^*
  double reflected_incident = 0.0; // Re u_I^* u_R
  double total() const {
    return incident + reflected + incident_reflected + reflected_incident;
  }
};

// Throws ContractError when the packet fails its normalization.
OverlapPieces overlap_pieces_at_mirror(const Wavepacket &packet);

enum class PacketContent { incident_and_reflected, incident_only };

// int dt da |u_0|^2 at the mirror; 2 w0 for a normalized packet with both
// pieces, w0 / 2 for the incident piece alone.
double overlap_integral_at_mirror(
    const Wavepacket &packet,
    PacketContent content = PacketContent::incident_and_reflected);

// A train of `bounces` copies of the packet arriving every `round_trip`,
// integrated over a window of length `window` centred on each arrival.
// Requires window < round_trip and a window wide enough for the truncated
// packet. Returns the per-window integrals.
std::vector<double> bounce_window_overlaps(const Wavepacket &packet,
                                           std::size_t bounces,
                                           double round_trip, double window);

} // namespace radpress
