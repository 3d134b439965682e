#include "radpress/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "radpress/errors.hpp"

namespace radpress {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::size_t chunk) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(chunk));
}

// Uniform on the open interval (0, 1) with 53 random bits.
double uniform(std::mt19937_64 &rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// ln k!, from a table below 256 and Stirling's series above (error < 1e-16
// relative there). std::lgamma writes the global signgam, which is a race
// between workers.
class LogFactorial {
public:
  LogFactorial() {
    table_[0] = 0.0;
    for (std::size_t k = 1; k < table_.size(); ++k) {
      table_[k] = table_[k - 1] + std::log(static_cast<double>(k));
    }
  }
  double operator()(std::uint64_t k) const {
    if (k < table_.size()) return table_[k];
    const double x = static_cast<double>(k) + 1.0;
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return (x - 0.5) * std::log(x) - x + 0.91893853320467274178 +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
  }

private:
  std::array<double, 256> table_{};
};

const LogFactorial &log_factorial() {
  static const LogFactorial instance;
  return instance;
}

// Poisson sampler: sequential inversion for small lambda, Hormann's PTRS
// transformed rejection otherwise (exact, no normal approximation).
class PoissonSampler {
public:
  explicit PoissonSampler(double lambda) : lambda_(lambda) {
    if (lambda_ < 30.0) {
      exp_neg_ = std::exp(-lambda_);
      return;
    }
    const double slam = std::sqrt(lambda_);
    log_lambda_ = std::log(lambda_);
    b_ = 0.931 + 2.53 * slam;
    a_ = -0.059 + 0.02483 * b_;
    inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
    v_r_ = 0.9277 - 3.6224 / (b_ - 2.0);
  }

  std::uint64_t operator()(std::mt19937_64 &rng) const {
    if (lambda_ == 0.0) return 0;
    if (lambda_ < 30.0) return inversion(rng);
    return ptrs(rng);
  }

private:
  std::uint64_t inversion(std::mt19937_64 &rng) const {
    const double u = uniform(rng);
    std::uint64_t k = 0;
    double p = exp_neg_;
    double cdf = p;
    // The tail beyond k = 1000 has probability far below 2^-53 for lambda < 30.
    while (u > cdf && k < 1000) {
      ++k;
      p *= lambda_ / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  std::uint64_t ptrs(std::mt19937_64 &rng) const {
    const LogFactorial &lf = log_factorial();
    for (;;) {
      const double u = uniform(rng) - 0.5;
      const double v = uniform(rng);
      const double us = 0.5 - std::abs(u);
      const double kf = std::floor((2.0 * a_ / us + b_) * u + lambda_ + 0.43);
      if (us >= 0.07 && v <= v_r_) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const auto k = static_cast<std::uint64_t>(kf);
      const double lhs = std::log(v) + std::log(inv_alpha_) - std::log(a_ / (us * us) + b_);
      const double rhs = -lambda_ + kf * log_lambda_ - lf(k);
      if (lhs <= rhs) return k;
    }
  }

  double lambda_;
  double exp_neg_ = 0.0;
  double log_lambda_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
  double inv_alpha_ = 0.0;
  double v_r_ = 0.0;
};

// Binomial(n, 1/2) as the popcount of n random bits.
std::uint64_t fair_binomial(std::uint64_t n, std::mt19937_64 &rng) {
  std::uint64_t count = 0;
  while (n >= 64) {
    count += static_cast<std::uint64_t>(std::popcount(rng()));
    n -= 64;
  }
  if (n > 0) {
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    count += static_cast<std::uint64_t>(std::popcount(rng() & mask));
  }
  return count;
}

// Runs body(begin, end, rng) for every fixed-size chunk on worker threads.
template <class Body>
void for_each_chunk(std::size_t samples, std::uint64_t seed, unsigned threads, Body &&body) {
  const std::size_t chunks = (samples + kMcChunkSize - 1) / kMcChunkSize;
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      std::mt19937_64 rng(chunk_seed(seed, c));
      const std::size_t begin = c * kMcChunkSize;
      const std::size_t end = std::min(samples, begin + kMcChunkSize);
      body(begin, end, rng);
    }
  };
  if (workers <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto &t : pool) t.join();
}

class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0; // unbiased
  double fourth = 0.0;   // central fourth moment
};

Moments moments(const std::vector<std::uint64_t> &counts, double scale) {
  const double n = static_cast<double>(counts.size());
  CompensatedSum s1;
  for (std::uint64_t c : counts) s1.add(scale * static_cast<double>(c));
  const double mean = s1.value() / n;
  CompensatedSum s2;
  CompensatedSum s4;
  for (std::uint64_t c : counts) {
    const double d = scale * static_cast<double>(c) - mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  return {mean, s2.value() / (n - 1.0), s4.value() / n};
}

// Standard error of the sample variance, sqrt((m4 - s^4 (n-3)/(n-1)) / n).
double variance_standard_error(const Moments &m, double n) {
  const double v = m.variance;
  return std::sqrt(std::max(0.0, (m.fourth - v * v * (n - 3.0) / (n - 1.0)) / n));
}

void require_samples(std::size_t samples) {
  if (samples < 2) throw DomainError("Monte Carlo needs at least two samples");
}

void check_config(const McConfig &cfg) {
  require_samples(cfg.samples);
  if (!(cfg.mean_photons >= 0.0) || !std::isfinite(cfg.mean_photons)) {
    throw DomainError("mean photon number must be non-negative and finite");
  }
  if (!(cfg.omega >= 0.0) || !std::isfinite(cfg.omega)) {
    throw DomainError("omega must be non-negative and finite");
  }
  if (cfg.bounces < 1) throw DomainError("bounces must be at least 1");
}

std::vector<std::string> sample_warnings(std::size_t samples) {
  if (samples >= kAcceptanceSamples) return {};
  std::ostringstream os;
  os << "samples = " << samples << " is below acceptance-grade sample count ("
     << kAcceptanceSamples << ")";
  return {os.str()};
}

} // namespace

std::vector<std::uint64_t> poisson_draws(double lambda, std::size_t count, std::uint64_t seed) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("Poisson mean must be non-negative and finite");
  }
  const PoissonSampler sampler(lambda);
  std::mt19937_64 rng(chunk_seed(seed, 0));
  std::vector<std::uint64_t> out(count);
  for (auto &k : out) k = sampler(rng);
  return out;
}

CoherentMcResult simulate_coherent(const McConfig &cfg) {
  check_config(cfg);
  const PoissonSampler sampler(cfg.mean_photons);
  std::vector<std::uint64_t> counts(cfg.samples);
  for_each_chunk(cfg.samples, cfg.seed, cfg.threads,
                 [&](std::size_t begin, std::size_t end, std::mt19937_64 &rng) {
                   for (std::size_t i = begin; i < end; ++i) counts[i] = sampler(rng);
                 });
  const double kick = 2.0 * static_cast<double>(cfg.bounces) * cfg.omega;
  const double n = static_cast<double>(cfg.samples);
  const Moments m = moments(counts, kick);

  CoherentMcResult out;
  out.samples = cfg.samples;
  out.mean = {m.mean, std::sqrt(m.variance / n)};
  out.variance = {m.variance, variance_standard_error(m, n)};
  out.target_variance = kick * kick * cfg.mean_photons;
  out.warnings = sample_warnings(cfg.samples);
  return out;
}

NumberMcResult simulate_number_state(std::uint64_t photons, double omega,
                                     std::uint32_t bounces, std::size_t samples) {
  require_samples(samples);
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be non-negative");
  if (bounces < 1) throw DomainError("bounces must be at least 1");
  // A number state has no count fluctuations: every sample sees n photons.
  const std::vector<std::uint64_t> counts(samples, photons);
  const double kick = 2.0 * static_cast<double>(bounces) * omega;
  const Moments m = moments(counts, kick);
  NumberMcResult out;
  out.samples = samples;
  out.mean = m.mean;
  out.variance = m.variance;
  out.target_mean = kick * static_cast<double>(photons);
  out.warnings = sample_warnings(samples);
  return out;
}

SplitMcResult simulate_split_arms(const McConfig &cfg) {
  check_config(cfg);
  const PoissonSampler sampler(cfg.mean_photons);
  std::vector<std::uint64_t> arm1(cfg.samples);
  std::vector<std::uint64_t> arm2(cfg.samples);
  for_each_chunk(cfg.samples, cfg.seed, cfg.threads,
                 [&](std::size_t begin, std::size_t end, std::mt19937_64 &rng) {
                   for (std::size_t i = begin; i < end; ++i) {
                     const std::uint64_t total = sampler(rng);
                     arm1[i] = fair_binomial(total, rng);
                     arm2[i] = total - arm1[i];
                   }
                 });
  const double kick = 2.0 * static_cast<double>(cfg.bounces) * cfg.omega;
  const double n = static_cast<double>(cfg.samples);
  const Moments m1 = moments(arm1, kick);
  const Moments m2 = moments(arm2, kick);

  CompensatedSum cov;
  CompensatedSum cov2;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const double d1 = kick * static_cast<double>(arm1[i]) - m1.mean;
    const double d2 = kick * static_cast<double>(arm2[i]) - m2.mean;
    cov.add(d1 * d2);
    cov2.add(d1 * d1 * d2 * d2);
  }
  const double c = cov.value() / (n - 1.0);
  const double m22 = cov2.value() / n;

  SplitMcResult out;
  out.samples = cfg.samples;
  out.variance1 = {m1.variance, variance_standard_error(m1, n)};
  out.variance2 = {m2.variance, variance_standard_error(m2, n)};
  out.covariance = {c, std::sqrt(std::max(0.0, (m22 - c * c) / n))};
  const double denom = std::sqrt(m1.variance * m2.variance);
  out.correlation = denom > 0.0 ? c / denom : 0.0;
  out.target_variance = 0.5 * kick * kick * cfg.mean_photons;
  out.warnings = sample_warnings(cfg.samples);
  return out;
}

} // namespace radpress
