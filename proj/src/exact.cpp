#include "mfspin/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfspin/errors.hpp"
#include "mfspin/stats.hpp"

namespace mfspin {

namespace {

double log_choose(std::int64_t n, std::int64_t c) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(c) + 1.0) -
           std::lgamma(static_cast<double>(n - c) + 1.0);
}

std::int64_t checked_cell_count(const MsParams& p, std::int64_t budget) {
    std::int64_t cells = 1;
    // each factor is bounded by the budget before multiplying, so the
    // running product stays far from int64 overflow
    for (std::int64_t n : p.group_sizes) {
        if (n > budget - 1 || (cells *= n + 1) > budget)
            throw ResourceError("magnetization grid exceeds the cell budget of " +
                                std::to_string(budget) + " cells");
    }
    return cells;
}

void normalize(MagnetizationDistribution& dist) {
    double shift = -std::numeric_limits<double>::infinity();
    for (double lw : dist.log_weights) shift = std::max(shift, lw);
    dist.probabilities.assign(dist.log_weights.size(), 0.0);
    CompensatedSum z;
    for (std::size_t i = 0; i < dist.log_weights.size(); ++i) {
        const double w = std::exp(dist.log_weights[i] - shift);
        dist.probabilities[i] = w;
        z.add(w);
    }
    const double total = z.value();
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("distribution normalization failed");
    for (double& p : dist.probabilities) p /= total;
}

} // namespace

CellCursor::CellCursor(const MagnetizationDistribution& dist)
    : dist_(&dist),
      counts_(dist.species_count(), 0),
      m_(dist.species_count()) {
    for (std::size_t l = 0; l < m_.size(); ++l) m_[l] = dist.axis_m[l][0];
}

bool CellCursor::advance() {
    // lexicographic order, last group fastest
    for (std::size_t l = counts_.size(); l-- > 0;) {
        if (counts_[l] < dist_->model.group_sizes[l]) {
            ++counts_[l];
            m_[l] = dist_->axis_m[l][static_cast<std::size_t>(counts_[l])];
            return true;
        }
        counts_[l] = 0;
        m_[l] = dist_->axis_m[l][0];
    }
    return false;
}

MagnetizationDistribution ms_distribution(const MsParams& params, std::int64_t cell_budget) {
    validate(params);
    const std::size_t k = params.species_count();
    const std::int64_t cells = checked_cell_count(params, cell_budget);
    const double n_total = static_cast<double>(params.total_spins());
    const FractionVector alpha = fractions_of(params);

    MagnetizationDistribution dist;
    dist.model = params;
    dist.axis_m.resize(k);

    // Per-axis tables: magnetization, log-binomial, and alpha_l * m_l.
    std::vector<Vec> axis_lb(k), axis_am(k);
    for (std::size_t l = 0; l < k; ++l) {
        const std::int64_t n = params.group_sizes[l];
        dist.axis_m[l].resize(static_cast<std::size_t>(n) + 1);
        axis_lb[l].resize(static_cast<std::size_t>(n) + 1);
        axis_am[l].resize(static_cast<std::size_t>(n) + 1);
        for (std::int64_t c = 0; c <= n; ++c) {
            const double m = static_cast<double>(2 * c - n) / static_cast<double>(n);
            dist.axis_m[l][static_cast<std::size_t>(c)] = m;
            axis_lb[l][static_cast<std::size_t>(c)] = log_choose(n, c);
            axis_am[l][static_cast<std::size_t>(c)] = alpha[l] * m;
        }
    }

    dist.log_weights.resize(static_cast<std::size_t>(cells));
    std::vector<std::int64_t> c(k, 0);
    for (std::size_t cell = 0;; ++cell) {
        double lb = 0.0;
        for (std::size_t l = 0; l < k; ++l) lb += axis_lb[l][static_cast<std::size_t>(c[l])];
        // -H = N (1/2 <J D_a m, D_a m> + <h, D_a m>)
        double quad = 0.0, lin = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            const double al = axis_am[l][static_cast<std::size_t>(c[l])];
            lin += params.field_vector[l] * al;
            for (std::size_t s = 0; s < k; ++s)
                quad += params.coupling_matrix[l][s] * al *
                        axis_am[s][static_cast<std::size_t>(c[s])];
        }
        dist.log_weights[cell] = lb + n_total * (0.5 * quad + lin);

        std::size_t l = k;
        while (l-- > 0) {
            if (c[l] < params.group_sizes[l]) {
                ++c[l];
                break;
            }
            c[l] = 0;
        }
        if (l == static_cast<std::size_t>(-1)) break;
    }

    normalize(dist);
    return dist;
}

MagnetizationDistribution cw_distribution(const CwParams& params) {
    validate(params);
    return ms_distribution(as_multispecies(params));
}

ExactMoments exact_moments(const MagnetizationDistribution& dist) {
    const std::size_t k = dist.species_count();

    std::vector<CompensatedSum> mean_acc(k);
    {
        CellCursor cur(dist);
        std::size_t cell = 0;
        do {
            const double p = dist.probabilities[cell++];
            for (std::size_t l = 0; l < k; ++l) mean_acc[l].add(p * cur.magnetization()[l]);
        } while (cur.advance());
    }
    Vec mu(k);
    for (std::size_t l = 0; l < k; ++l) mu[l] = mean_acc[l].value();

    // Second pass on centered products; chi_N at large N is a difference of
    // nearly equal numbers, so the covariance is accumulated directly.
    std::vector<CompensatedSum> cov_acc(k * k);
    {
        CellCursor cur(dist);
        std::size_t cell = 0;
        Vec d(k);
        do {
            const double p = dist.probabilities[cell++];
            for (std::size_t l = 0; l < k; ++l) d[l] = cur.magnetization()[l] - mu[l];
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t s = l; s < k; ++s) cov_acc[l * k + s].add(p * d[l] * d[s]);
        } while (cur.advance());
    }

    ExactMoments mom;
    mom.mean = mu;
    mom.second = zeros(k, k);
    mom.finite_size_chi = zeros(k, k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = l; s < k; ++s) {
            const double cov = cov_acc[l * k + s].value();
            mom.second[l][s] = mom.second[s][l] = cov + mu[l] * mu[s];
            mom.finite_size_chi[l][s] = static_cast<double>(dist.model.group_sizes[s]) * cov;
            mom.finite_size_chi[s][l] = static_cast<double>(dist.model.group_sizes[l]) * cov;
        }
    return mom;
}

MagnetizationDistribution restrict_to_well(const MagnetizationDistribution& dist,
                                           const MeanFieldSolution& solution) {
    if (!solution.stable)
        throw ValidationError("restrict_to_well: solution must be stable");
    const std::size_t k = dist.species_count();
    if (solution.magnetization.size() != k)
        throw ValidationError("restrict_to_well: dimension mismatch");

    const FractionVector alpha = fractions_of(dist.model);
    const Mat& j = dist.model.coupling_matrix;
    const Vec& h = dist.model.field_vector;

    std::vector<MeanFieldSolution> sols =
        (k == 1) ? solve_cw(j[0][0], h[0]) : solve_ms(alpha, j, h);
    std::vector<Vec> stable;
    std::size_t target = static_cast<std::size_t>(-1);
    for (const MeanFieldSolution& s : sols) {
        if (!s.stable) continue;
        if (max_abs_diff(s.magnetization, solution.magnetization) < 1e-6)
            target = stable.size();
        stable.push_back(s.magnetization);
    }
    if (target == static_cast<std::size_t>(-1))
        throw ValidationError("restrict_to_well: solution is not a stable fixed point "
                              "of this model");
    if (stable.size() == 1) return dist; // single basin covers the whole grid

    MagnetizationDistribution out = dist;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    CellCursor cur(dist);
    std::size_t cell = 0;
    Vec m(k), t(k);
    do {
        m = cur.magnetization();
        // damped iteration to the attracting fixed point of this basin
        for (int it = 0; it < 100000; ++it) {
            double step = 0.0;
            for (std::size_t l = 0; l < k; ++l) {
                double u = h[l];
                for (std::size_t s = 0; s < k; ++s) u += j[l][s] * alpha[s] * m[s];
                t[l] = 0.5 * m[l] + 0.5 * std::tanh(u);
                step = std::max(step, std::abs(t[l] - m[l]));
            }
            m = t;
            if (step < 1e-11) break;
        }
        // nearest stable solution; tie goes to the lexicographically larger
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < stable.size(); ++i) {
            const double d = euclidean_distance(m, stable[i]);
            if (d < best_d - 1e-12) {
                best = i;
                best_d = d;
            } else if (std::abs(d - best_d) <= 1e-12 && stable[i] > stable[best]) {
                best = i;
            }
        }
        if (best != target) out.log_weights[cell] = neg_inf;
        ++cell;
    } while (cur.advance());

    bool any = false;
    for (double lw : out.log_weights)
        if (lw != neg_inf) { any = true; break; }
    if (!any) throw NumericalError("restrict_to_well: empty well");
    normalize(out);
    return out;
}

ExactMoments brute_force_moments(const MsParams& params) {
    validate(params);
    const std::int64_t n = params.total_spins();
    if (n > 20)
        throw ResourceError("brute force enumeration limited to 20 spins, got " +
                            std::to_string(n));
    const std::size_t k = params.species_count();

    // group label of every spin, in block order
    std::vector<std::size_t> group(static_cast<std::size_t>(n));
    {
        std::size_t i = 0;
        for (std::size_t l = 0; l < k; ++l)
            for (std::int64_t c = 0; c < params.group_sizes[l]; ++c) group[i++] = l;
    }

    std::vector<CompensatedSum> mean_acc(k);
    std::vector<CompensatedSum> second_acc(k * k);
    CompensatedSum z;
    std::vector<int> sigma(static_cast<std::size_t>(n));
    Vec m(k);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::int64_t i = 0; i < n; ++i)
            sigma[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;

        // literal per-spin double sum, diagonal terms included
        double pair = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t q = 0; q < n; ++q)
                pair += params.coupling_matrix[group[static_cast<std::size_t>(i)]]
                                              [group[static_cast<std::size_t>(q)]] *
                        sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(q)];
        double field = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
            field += params.field_vector[group[static_cast<std::size_t>(i)]] *
                     sigma[static_cast<std::size_t>(i)];
        const double neg_h = pair / (2.0 * static_cast<double>(n)) + field;
        const double w = std::exp(neg_h);

        std::size_t i0 = 0;
        for (std::size_t l = 0; l < k; ++l) {
            std::int64_t s = 0;
            for (std::int64_t c = 0; c < params.group_sizes[l]; ++c)
                s += sigma[i0 + static_cast<std::size_t>(c)];
            m[l] = static_cast<double>(s) / static_cast<double>(params.group_sizes[l]);
            i0 += static_cast<std::size_t>(params.group_sizes[l]);
        }

        z.add(w);
        for (std::size_t l = 0; l < k; ++l) {
            mean_acc[l].add(w * m[l]);
            for (std::size_t s = 0; s < k; ++s) second_acc[l * k + s].add(w * m[l] * m[s]);
        }
    }

    const double zz = z.value();
    ExactMoments mom;
    mom.mean.resize(k);
    mom.second = zeros(k, k);
    mom.finite_size_chi = zeros(k, k);
    for (std::size_t l = 0; l < k; ++l) mom.mean[l] = mean_acc[l].value() / zz;
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = 0; s < k; ++s) {
            mom.second[l][s] = second_acc[l * k + s].value() / zz;
            mom.finite_size_chi[l][s] =
                static_cast<double>(params.group_sizes[s]) *
                (mom.second[l][s] - mom.mean[l] * mom.mean[s]);
        }
    return mom;
}

ExactMoments brute_force_moments(const CwParams& params) {
    return brute_force_moments(as_multispecies(params));
}

} // namespace mfspin
