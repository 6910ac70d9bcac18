#ifndef MFSPIN_STATS_HPP
#define MFSPIN_STATS_HPP

#include <cstdint>
#include <vector>

#include "mfspin/linalg.hpp"

namespace mfspin {

// Neumaier compensated accumulator; keeps 1e6..1e8 term sums accurate to
// a few ulps, which the normalization and moment invariants rely on.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double mean(const Vec& xs);
double sample_std(const Vec& xs); // unbiased (n-1); throws NumericalError for n < 2

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
double chi_square_cdf(double x, double dof);
double chi_square_quantile(double p, double dof);

// Pearson goodness-of-fit of observed counts against exact cell
// probabilities. Adjacent cells are pooled until every bin has expected
// count >= min_expected; dof = bins - 1.
struct GofResult {
    double statistic;
    std::size_t dof;
};
GofResult pearson_gof(const Vec& probs, const std::vector<std::uint64_t>& counts,
                      double min_expected = 5.0);

} // namespace mfspin

#endif
