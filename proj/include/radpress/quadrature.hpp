#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature over real intervals, for real or
// complex integrands. Panels are bisected globally by largest error estimate;
// the panel list is reduced in interval order so results are reproducible
// bit-for-bit for a given (integrand, interval, control).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "radpress/errors.hpp"

namespace radpress::quad {

struct Control {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  // Upper bound on the width of the initial panels. Oscillatory callers set
  // this to a fraction of the period.
  double max_panel = std::numeric_limits<double>::infinity();
  std::size_t max_panels = 4'000'000;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes kNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(const T &v) {
  return std::abs(v);
}

template <class T>
struct Panel {
  double lo;
  double hi;
  T value;
  double error;
  bool refinable;
};

template <class T, class F>
Panel<T> gk15(F &f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  double absolute = magnitude(fc) * kKronrodWeights[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const T left = f(center - dx);
    const T right = f(center + dx);
    const T sum = left + right;
    kronrod += sum * kKronrodWeights[j];
    absolute += (magnitude(left) + magnitude(right)) * kKronrodWeights[j];
    if (j % 2 == 1) {
      gauss += sum * kGaussWeights[j / 2];
    }
  }
  kronrod *= half;
  gauss *= half;
  absolute *= std::abs(half);
  // Below this the estimate is rounding noise; bisecting cannot help.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absolute;
  const double estimate = magnitude(kronrod - gauss);
  if (estimate <= roundoff) return {lo, hi, kronrod, roundoff, false};
  return {lo, hi, kronrod, estimate, true};
}

// Neumaier-compensated accumulation; complex values compensate per component.
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

inline double accumulate(const std::vector<Panel<double>> &panels) {
  CompensatedSum s;
  for (const auto &p : panels) s.add(p.value);
  return s.value();
}

inline std::complex<double> accumulate(
    const std::vector<Panel<std::complex<double>>> &panels) {
  CompensatedSum re;
  CompensatedSum im;
  for (const auto &p : panels) {
    re.add(p.value.real());
    im.add(p.value.imag());
  }
  return {re.value(), im.value()};
}

} // namespace detail

// Integrate f over the union of consecutive intervals [bp[i], bp[i+1]].
// Breakpoints must be non-decreasing; integrable endpoint singularities are
// fine (nodes never touch panel ends), interior ones must be breakpoints.
template <class F>
auto integrate(F &&f, std::span<const double> breakpoints, const Control &ctl)
    -> Result<std::decay_t<std::invoke_result_t<F &, double>>> {
  using T = std::decay_t<std::invoke_result_t<F &, double>>;
  using PanelT = detail::Panel<T>;

  Result<T> result;
  if (breakpoints.size() < 2) return result;

  std::vector<PanelT> panels;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i];
    const double hi = breakpoints[i + 1];
    if (!(hi > lo)) continue;
    std::size_t pieces = 1;
    if (std::isfinite(ctl.max_panel) && ctl.max_panel > 0.0) {
      pieces = static_cast<std::size_t>(std::ceil((hi - lo) / ctl.max_panel));
      pieces = std::max<std::size_t>(pieces, 1);
    }
    if (panels.size() + pieces > ctl.max_panels) {
      std::ostringstream os;
      os << "quadrature: " << pieces << " initial panels on [" << lo << ", "
         << hi << "] exceed the panel budget " << ctl.max_panels;
      throw AccuracyError(os.str());
    }
    const double width = (hi - lo) / static_cast<double>(pieces);
    for (std::size_t k = 0; k < pieces; ++k) {
      const double a = lo + width * static_cast<double>(k);
      const double b = (k + 1 == pieces) ? hi : a + width;
      panels.push_back(detail::gk15<T>(f, a, b));
    }
  }
  result.evaluations = 15 * panels.size();

  auto by_error = [&panels](std::size_t l, std::size_t r) {
    if (panels[l].error != panels[r].error) return panels[l].error < panels[r].error;
    return l > r;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)>
      queue(by_error);

  // Error carried by panels that bisection can still improve. Floored panels
  // are rounding-limited, so they count in the report but not in the loop.
  double total_error = 0.0;
  double refinable_error = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    total_error += panels[i].error;
    if (panels[i].refinable) refinable_error += panels[i].error;
    queue.push(i);
  }
  T total = detail::accumulate(panels);

  auto tolerance = [&]() {
    return std::max(ctl.abs_tol, ctl.rel_tol * detail::magnitude(total));
  };

  while (total_error > tolerance() && refinable_error > tolerance()) {
    while (!queue.empty() && !panels[queue.top()].refinable) queue.pop();
    if (queue.empty()) break;
    if (panels.size() >= ctl.max_panels) {
      std::ostringstream os;
      os << "quadrature did not converge: error estimate " << total_error
         << " vs tolerance " << tolerance() << " after " << panels.size()
         << " panels on [" << breakpoints.front() << ", " << breakpoints.back()
         << "]";
      throw AccuracyError(os.str());
    }
    const std::size_t worst = queue.top();
    queue.pop();
    const PanelT old = panels[worst];
    const double mid = 0.5 * (old.lo + old.hi);
    if (!(mid > old.lo && mid < old.hi)) {
      // Interval cannot be split further in double precision.
      std::ostringstream os;
      os << "quadrature: panel [" << old.lo << ", " << old.hi
         << "] exhausted floating-point resolution with error " << old.error;
      throw AccuracyError(os.str());
    }
    panels[worst] = detail::gk15<T>(f, old.lo, mid);
    panels.push_back(detail::gk15<T>(f, mid, old.hi));
    result.evaluations += 30;
    total_error += panels[worst].error + panels.back().error - old.error;
    refinable_error -= old.error;
    for (const PanelT *p : {&panels[worst], &panels.back()}) {
      if (p->refinable) refinable_error += p->error;
    }
    total += panels[worst].value + panels.back().value - old.value;
    queue.push(worst);
    queue.push(panels.size() - 1);
  }

  std::sort(panels.begin(), panels.end(),
            [](const PanelT &l, const PanelT &r) { return l.lo < r.lo; });
  result.value = detail::accumulate(panels);
  result.error = 0.0;
  for (const auto &p : panels) result.error += p.error;
  result.panels = panels.size();
  return result;
}

template <class F>
auto integrate(F &&f, double lo, double hi, const Control &ctl = {}) {
  const std::array<double, 2> bp = {lo, hi};
  return integrate(std::forward<F>(f), std::span<const double>(bp), ctl);
}

} // namespace radpress::quad
