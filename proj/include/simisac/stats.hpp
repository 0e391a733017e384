// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace simisac {

double mean(const std::vector<double>& xs);
double median(std::vector<double> xs);
// Linear-interpolated percentile, p in [0, 100].
double percentile(std::vector<double> xs, double p);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, Student-t approximation
};

SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace simisac
