#pragma once

// Seeded Monte Carlo of the photon-counting picture. Each sample draws a
// photon count and converts it to the momentum 2 b w n delivered to the
// mirror. This models photon counting only; it checks the stress-tensor
// results through the equivalence of the two routes, not as an independent
// field simulation.
//
// Samples are processed in fixed-size chunks; chunk k draws from its own
// generator seeded by mixing (seed, k). Statistics are reduced in chunk
// order, so the output depends on (seed, config) only, never on the number
// of worker threads.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace radpress {

inline constexpr std::size_t kAcceptanceSamples = 10'000;
inline constexpr std::size_t kMcChunkSize = 1 << 16;

struct McConfig {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double mean_photons = 100.0; // lambda
  double omega = 1.0;
  std::uint32_t bounces = 1;
  // Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

struct CoherentMcResult {
  McEstimate mean;
  McEstimate variance;
  double target_variance = 0.0; // 4 b^2 w^2 lambda
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

struct NumberMcResult {
  double mean = 0.0;
  double variance = 0.0;
  double target_mean = 0.0; // 2 b w n
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

struct SplitMcResult {
  McEstimate variance1;
  McEstimate variance2;
  McEstimate covariance;
  double correlation = 0.0;
  double target_variance = 0.0; // 2 b^2 w^2 lambda per arm
  std::size_t samples = 0;
  std::vector<std::string> warnings;
};

// Draws n ~ Poisson(lambda), p = 2 b w n. Throws DomainError for lambda < 0.
CoherentMcResult simulate_coherent(const McConfig &cfg);

// Every sample transfers exactly 2 b w n.
NumberMcResult simulate_number_state(std::uint64_t n, double omega, std::uint32_t bounces,
                                     std::size_t samples);

// N ~ Poisson(lambda) split binomially (N, 1/2) between two arms.
SplitMcResult simulate_split_arms(const McConfig &cfg);

// Exposed for distribution tests: one Poisson draw per call from a
// generator seeded with `seed`.
std::vector<std::uint64_t> poisson_draws(double lambda, std::size_t count, std::uint64_t seed);

} // namespace radpress
