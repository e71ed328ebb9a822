#include "copulaband/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "copulaband/error.hpp"

namespace copulaband {
namespace {

constexpr double kClampLo = 1e-10;
constexpr double kClampHi = 1.0 - 1e-10;
constexpr double kDensityFloor = 1e-300;

// Sum over runs of equal values of t(t-1)/2, for a sorted range.
template <class Eq>
std::uint64_t tied_pairs(std::size_t n, Eq equal) {
  std::uint64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<std::uint64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return total + static_cast<std::uint64_t>(run) * (run - 1) / 2;
}

// Stable merge sort of `a` counting pairs i < j with a[i] > a[j].
std::uint64_t sort_counting_inversions(std::vector<double>& a) {
  std::vector<double> buf(a.size());
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < a.size(); width *= 2) {
    for (std::size_t lo = 0; lo < a.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, a.size());
      const std::size_t hi = std::min(lo + 2 * width, a.size());
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (a[j] < a[i]) {
          swaps += mid - i;
          buf[k++] = a[j++];
        } else {
          buf[k++] = a[i++];
        }
      }
      while (i < mid) buf[k++] = a[i++];
      while (j < hi) buf[k++] = a[j++];
    }
    a.swap(buf);
  }
  return swaps;
}

}  // namespace

double empirical_kendall_tau(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "Kendall tau: columns differ in length");
  const std::size_t n = x.size();
  require(n >= 2, "Kendall tau needs at least 2 observations");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  const std::uint64_t ties_x = tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b]; });
  const std::uint64_t ties_xy =
      tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b] && ys[a] == ys[b]; });
  const std::uint64_t swaps = sort_counting_inversions(ys);
  const std::uint64_t ties_y = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double numerator = total - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                           static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  return numerator / total;
}

double empirical_kendall_tau(const PseudoSample& sample) { return empirical_kendall_tau(sample.u(), sample.v()); }

LogLikelihood log_likelihood(const CopulaModel& model, const PseudoSample& sample) {
  LogLikelihood out;
  if (model.family() == Family::independence) return out;
  const double log_floor = std::log(kDensityFloor);
  const auto us = sample.u();
  const auto vs = sample.v();
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double u = std::clamp(us[i], kClampLo, kClampHi);
    const double v = std::clamp(vs[i], kClampLo, kClampHi);
    const double ld = log_density(model, u, v);
    if (!(ld >= log_floor)) {
      out.value += log_floor;
      ++out.floored;
    } else {
      out.value += ld;
    }
  }
  return out;
}

std::vector<Family> default_fit_families() { return {Family::clayton, Family::gumbel, Family::frank}; }

FitReport fit_families(const PseudoSample& sample, std::span<const Family> families) {
  require(!families.empty(), "fit_families: no families requested");
  FitReport report;
  report.tau_hat = empirical_kendall_tau(sample);
  for (Family f : families) {
    FitRow row;
    row.family = f;
    if (f == Family::independence) {
      row.applicable = true;
    } else if (tau_attainable(f, report.tau_hat)) {
      row.applicable = true;
      row.theta = theta_from_tau(f, report.tau_hat);
    }
    if (row.applicable) {
      const LogLikelihood ll = log_likelihood(CopulaModel(f, row.theta), sample);
      row.log_likelihood = ll.value;
      row.floored = ll.floored;
    }
    report.rows.push_back(row);
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const FitRow& a, const FitRow& b) {
    if (a.applicable != b.applicable) return a.applicable;
    return a.applicable && a.log_likelihood > b.log_likelihood;
  });
  if (!report.rows.front().applicable) {
    fail(ErrorCategory::input, "no requested family can represent the sample Kendall tau");
  }
  report.selected = report.rows.front().family;
  return report;
}

}  // namespace copulaband
