#pragma once

#include <cstdint>
#include <vector>

namespace uniwalk::testing {

double median(std::vector<double> values);

/// Adjusted Rand index between two labelings of the same points.
double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// One-sided Monte-Carlo permutation p-value for a negative Spearman trend:
/// fraction of y-permutations with rho at most the observed one.
double permutation_pvalue_negative(const std::vector<double>& x, const std::vector<double>& y,
                                   std::size_t permutations, std::uint64_t rng_seed);

} // namespace uniwalk::testing
