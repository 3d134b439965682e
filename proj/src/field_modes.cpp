#include "radpress/field_modes.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "radpress/errors.hpp"
#include "radpress/quadrature.hpp"

namespace radpress {

namespace {

constexpr double kPi = std::numbers::pi;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

double empty_space_term(double dt, double dx, double dy, double dz) {
  const double dt2 = dt * dt;
  const double r2 = dx * dx + dy * dy + dz * dz;
  const double interval = dt2 - r2;
  const double scale2 = dt2 + r2;
  if (std::abs(interval) <= kLightConeTolerance * scale2 || scale2 == 0.0) {
    std::ostringstream os;
    os << "vacuum_two_point: points are light-like separated (dt^2 - |dx|^2 = "
       << interval << " at scale^2 = " << scale2
       << "); use the regularized integrators";
    throw SingularSeparationError(os.str());
  }
  return (dt2 + r2 - 2.0 * dz * dz) / (kPi * kPi * interval * interval * interval);
}

} // namespace

BoxMode BoxMode::make(double omega, double volume) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw DomainError("BoxMode: omega must be non-negative");
  }
  if (!positive_finite(volume)) throw DomainError("BoxMode: volume must be positive");
  return BoxMode(omega, volume, std::sqrt(omega / (2.0 * volume)));
}

std::complex<double> mode_B(const BoxMode &mode, const SpacetimePoint &p) {
  const double w = mode.omega();
  return -2.0 * mode.normalization() * std::cos(w * p.x) * std::polar(1.0, -w * p.t);
}

double vacuum_two_point(const SpacetimePoint &p1, const SpacetimePoint &p2,
                        bool with_mirror) {
  const double dt = p1.t - p2.t;
  const double dx = p1.x - p2.x;
  const double dy = p1.y - p2.y;
  double value = empty_space_term(dt, dx, dy, p1.z - p2.z);
  if (with_mirror) value += empty_space_term(dt, dx, dy, p1.z + p2.z);
  return value;
}

double normal_ordered_BB(const BoxMode &mode, const CoherentAmplitude &z,
                         const SpacetimePoint &p1, const SpacetimePoint &p2) {
  // <z| :B(1) B(2): |z> = (z B1 + z* B1*)(z B2 + z* B2*)
  const std::complex<double> amp = std::polar(z.magnitude, z.phase);
  return 4.0 * (amp * mode_B(mode, p1)).real() * (amp * mode_B(mode, p2)).real();
}

double cross_term_Txx(const BoxMode &mode, const CoherentAmplitude &z,
                      const SpacetimePoint &p1, const SpacetimePoint &p2) {
  return normal_ordered_BB(mode, z, p1, p2) * vacuum_two_point(p1, p2, true);
}

Wavepacket Wavepacket::make(double omega0, double sigma, double area) {
  if (!positive_finite(omega0) || !positive_finite(sigma) || !positive_finite(area)) {
    throw DomainError("Wavepacket: omega0, sigma and area must be positive");
  }
  if (sigma / omega0 > kMaxRelativeBandwidth) {
    std::ostringstream os;
    os << "Wavepacket: sigma/omega0 = " << sigma / omega0
       << " exceeds the sharply-peaked limit " << kMaxRelativeBandwidth;
    throw ContractError(os.str());
  }
  // int exp(-sigma^2 s^2) ds = sqrt(pi) / sigma
  const double n2 = omega0 * sigma / (2.0 * area * std::sqrt(kPi));
  Wavepacket packet(omega0, sigma, area, std::sqrt(n2));
  const double norm = packet.numeric_norm();
  const double target = 0.5 * omega0;
  if (std::abs(norm - target) > kNormTolerance * target) {
    std::ostringstream os;
    os << "Wavepacket: numeric norm " << norm << " misses w0/2 = " << target;
    throw ContractError(os.str());
  }
  return packet;
}

Wavepacket Wavepacket::with_amplitude(double omega0, double sigma, double area,
                                      double amplitude) {
  if (!positive_finite(omega0) || !positive_finite(sigma) || !positive_finite(area)) {
    throw DomainError("Wavepacket: omega0, sigma and area must be positive");
  }
  return Wavepacket(omega0, sigma, area, amplitude);
}

std::complex<double> Wavepacket::incident(double t, double x) const {
  const double s = t - x;
  if (std::abs(s) > half_width()) return {0.0, 0.0};
  const double envelope = amplitude_ * std::exp(-0.5 * sigma_ * sigma_ * s * s);
  return envelope * std::polar(1.0, -omega0_ * s);
}

std::complex<double> Wavepacket::reflected(double t, double x) const {
  return incident(t, -x);
}

double Wavepacket::numeric_norm() const {
  auto density = [this](double x) { return std::norm(incident(0.0, x)); };
  quad::Control q;
  q.rel_tol = 1e-12;
  return area_ * quad::integrate(density, -half_width(), half_width(), q).value;
}

OverlapPieces overlap_pieces_at_mirror(const Wavepacket &packet) {
  const double norm = packet.numeric_norm();
  const double target = 0.5 * packet.omega0();
  if (std::abs(norm - target) > Wavepacket::kNormTolerance * target) {
    std::ostringstream os;
    os << "overlap_integral_at_mirror: packet norm " << norm
       << " is not w0/2 = " << target;
    throw ContractError(os.str());
  }
  quad::Control q;
  q.rel_tol = 1e-12;
  const double lo = -packet.half_width();
  const double hi = packet.half_width();
  auto integrate = [&](auto &&f) {
    return packet.area() * quad::integrate(f, lo, hi, q).value;
  };
  OverlapPieces pieces;
  pieces.incident = integrate([&](double t) { return std::norm(packet.incident(t, 0.0)); });
  pieces.reflected = integrate([&](double t) { return std::norm(packet.reflected(t, 0.0)); });
  pieces.incident_reflected = integrate([&](double t) {
    return (packet.incident(t, 0.0) * std::conj(packet.reflected(t, 0.0))).real();
  });
  pieces.reflected_incident = integrate([&](double t) {
    return (std::conj(packet.incident(t, 0.0)) * packet.reflected(t, 0.0)).real();
  });
  return pieces;
}

double overlap_integral_at_mirror(const Wavepacket &packet, PacketContent content) {
  const OverlapPieces pieces = overlap_pieces_at_mirror(packet);
  if (content == PacketContent::incident_only) return pieces.incident;
  return pieces.total();
}

std::vector<double> bounce_window_overlaps(const Wavepacket &packet,
                                           std::size_t bounces,
                                           double round_trip, double window) {
  if (bounces == 0) throw DomainError("bounce_window_overlaps: need at least one bounce");
  if (!positive_finite(round_trip) || !positive_finite(window) || !(window < round_trip)) {
    throw DomainError("bounce_window_overlaps: need 0 < window < round_trip");
  }
  if (window < 2.0 * packet.half_width()) {
    std::ostringstream os;
    os << "bounce_window_overlaps: window " << window
       << " is shorter than the packet support " << 2.0 * packet.half_width();
    throw ContractError(os.str());
  }
  // Make sure the packet itself honours the normalization contract.
  overlap_pieces_at_mirror(packet);

  auto train = [&](double t) {
    std::complex<double> u{0.0, 0.0};
    for (std::size_t k = 0; k < bounces; ++k) {
      const double shifted = t - round_trip * static_cast<double>(k);
      u += packet.incident(shifted, 0.0) + packet.reflected(shifted, 0.0);
    }
    return std::norm(u);
  };
  quad::Control q;
  q.rel_tol = 1e-12;
  std::vector<double> out;
  out.reserve(bounces);
  for (std::size_t k = 0; k < bounces; ++k) {
    const double centre = round_trip * static_cast<double>(k);
    // The window is wider than the support, so split at the support edges to
    // keep the quadrature off the truncation kinks.
    const std::array<double, 4> bp = {centre - 0.5 * window, centre - packet.half_width(),
                                      centre + packet.half_width(), centre + 0.5 * window};
    out.push_back(packet.area() * quad::integrate(train, std::span<const double>(bp), q).value);
  }
  return out;
}

} // namespace radpress
