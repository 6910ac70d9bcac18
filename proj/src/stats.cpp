#include "mfspin/stats.hpp"

#include <cmath>
#include <limits>

#include "mfspin/errors.hpp"

namespace mfspin {

double mean(const Vec& xs) {
    if (xs.empty()) throw NumericalError("mean of empty sample");
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

double sample_std(const Vec& xs) {
    if (xs.size() < 2) throw NumericalError("sample_std needs at least two values");
    const double mu = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - mu) * (x - mu));
    return std::sqrt(s.value() / static_cast<double>(xs.size() - 1));
}

// Series for P(a,x) when x < a+1, continued fraction for Q(a,x) otherwise.
// Standard Lentz/series pair; accurate to ~1e-14 over the dof range we use.
static double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericalError("incomplete gamma series failed to converge");
}

static double gamma_q_contfrac(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericalError("incomplete gamma continued fraction failed to converge");
}

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x))
        throw NumericalError("regularized_gamma_p: invalid arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double chi_square_cdf(double x, double dof) {
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double p, double dof) {
    if (!(p > 0.0) || !(p < 1.0)) throw NumericalError("chi_square_quantile: p outside (0,1)");
    if (!(dof > 0.0)) throw NumericalError("chi_square_quantile: dof must be positive");
    // Bracket the root, then bisect; the CDF is monotone so this is robust
    // for any dof we care about and converges to full double precision.
    double lo = 0.0;
    double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
    while (chi_square_cdf(hi, dof) < p) {
        hi *= 2.0;
        if (hi > 1e12) throw NumericalError("chi_square_quantile: bracket failed");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (chi_square_cdf(mid, dof) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

GofResult pearson_gof(const Vec& probs, const std::vector<std::uint64_t>& counts,
                      double min_expected) {
    if (probs.size() != counts.size())
        throw ValidationError("pearson_gof: probs and counts length mismatch");
    if (probs.empty()) throw ValidationError("pearson_gof: empty input");

    CompensatedSum total_acc;
    for (std::uint64_t c : counts) total_acc.add(static_cast<double>(c));
    const double total = total_acc.value();
    if (total <= 0.0) throw ValidationError("pearson_gof: zero total count");

    // Pool adjacent cells left to right until expected >= min_expected;
    // a trailing underfull bin is merged into its predecessor.
    std::vector<double> exp_bins;
    std::vector<double> obs_bins;
    double e_acc = 0.0, o_acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        e_acc += probs[i] * total;
        o_acc += static_cast<double>(counts[i]);
        if (e_acc >= min_expected) {
            exp_bins.push_back(e_acc);
            obs_bins.push_back(o_acc);
            e_acc = 0.0;
            o_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (exp_bins.empty()) {
            exp_bins.push_back(e_acc);
            obs_bins.push_back(o_acc);
        } else {
            exp_bins.back() += e_acc;
            obs_bins.back() += o_acc;
        }
    }
    if (exp_bins.size() < 2)
        throw NumericalError("pearson_gof: fewer than two bins after pooling");

    CompensatedSum stat;
    for (std::size_t i = 0; i < exp_bins.size(); ++i) {
        const double d = obs_bins[i] - exp_bins[i];
        stat.add(d * d / exp_bins[i]);
    }
    return GofResult{stat.value(), exp_bins.size() - 1};
}

} // namespace mfspin
