#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "copulaband/families.hpp"
#include "copulaband/margins.hpp"

namespace copulaband {

/// Kendall's tau-a: (concordant - discordant) / C(n,2), pairs tied in either
/// coordinate counted as neither. O(n log n) via Knight's merge-sort count.
double empirical_kendall_tau(const PseudoSample& sample);
double empirical_kendall_tau(std::span<const double> x, std::span<const double> y);

struct LogLikelihood {
  double value = 0.0;
  /// Terms whose density fell below 1e-300 and were floored there.
  std::size_t floored = 0;
};

/// sum_i log c(u_i, v_i), coordinates clamped to [1e-10, 1 - 1e-10] first.
LogLikelihood log_likelihood(const CopulaModel& model, const PseudoSample& sample);

struct FitRow {
  Family family = Family::independence;
  bool applicable = false;  // tau_hat attainable by the family
  double theta = 0.0;
  double log_likelihood = 0.0;
  std::size_t floored = 0;
};

struct FitReport {
  double tau_hat = 0.0;
  std::vector<FitRow> rows;  // applicable rows by log-likelihood descending, then inapplicable
  Family selected = Family::independence;
};

/// Tau-inversion fit of each family, ranked by log-likelihood. Throws
/// Error(input) if no family can represent tau_hat.
FitReport fit_families(const PseudoSample& sample, std::span<const Family> families);

/// Clayton, Gumbel, Frank.
std::vector<Family> default_fit_families();

}  // namespace copulaband
