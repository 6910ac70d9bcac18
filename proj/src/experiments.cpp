#include "mfspin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfspin/errors.hpp"
#include "mfspin/exact.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/rng.hpp"
#include "mfspin/stats.hpp"

namespace mfspin {

PowerLawFit powerlaw_fit(const Vec& xs, const Vec& ys) {
    if (xs.size() != ys.size()) throw ValidationError("powerlaw_fit: length mismatch");
    if (xs.size() < 3) throw ValidationError("powerlaw_fit: need at least 3 points");
    const std::size_t n = xs.size();
    Vec lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw NumericalError("powerlaw_fit: inputs must be strictly positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    const double mx = mean(lx), my = mean(ly);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw NumericalError("powerlaw_fit: all x equal");
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (my + slope * (lx[i] - mx));
        ss_res += r * r;
    }
    PowerLawFit fit;
    fit.exponent = slope;
    fit.amplitude = std::exp(my - slope * mx);
    // zero-residual convention: a constant (or exactly fitted) y gives R^2 = 1
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return fit;
}

SizeScalingStudy size_scaling_study(double coupling, double field,
                                    const std::vector<std::int64_t>& sizes) {
    if (sizes.empty()) throw ValidationError("size_scaling_study: no sizes given");
    const MeanFieldSolution limit = unique_stable_solution({1.0}, {{coupling}}, {field});
    SizeScalingStudy study;
    study.m_limit = limit.magnetization[0];
    study.chi_limit = chi_cw(coupling, limit).scalar();

    for (std::int64_t n : sizes) {
        const ExactMoments mom = exact_moments(cw_distribution({n, coupling, field}));
        SizeScalingRow row;
        row.n = n;
        row.m_n = mom.mean[0];
        row.chi_n = mom.finite_size_chi[0][0];
        row.abs_err_m = std::abs(row.m_n - study.m_limit);
        row.abs_err_chi = std::abs(row.chi_n - study.chi_limit);
        study.rows.push_back(row);
    }

    Vec ns, errs_m, errs_chi;
    for (const SizeScalingRow& r : study.rows) {
        ns.push_back(static_cast<double>(r.n));
        errs_m.push_back(r.abs_err_m);
        errs_chi.push_back(r.abs_err_chi);
    }
    // corrections at rounding level (J = 0) make a log-log fit meaningless
    if (*std::min_element(errs_m.begin(), errs_m.end()) > 1e-14)
        study.m_fit = powerlaw_fit(ns, errs_m);
    if (*std::min_element(errs_chi.begin(), errs_chi.end()) > 1e-14)
        study.chi_fit = powerlaw_fit(ns, errs_chi);
    return study;
}

SampleScalingStudy sample_scaling_study(const CwParams& params,
                                        const std::vector<std::uint64_t>& m_list,
                                        std::uint64_t replicates, std::uint64_t base_seed) {
    if (replicates < 2)
        throw ValidationError("sample_scaling_study: replicate std needs R >= 2");
    if (m_list.empty()) throw ValidationError("sample_scaling_study: no sample sizes");
    const MagnetizationDistribution dist = cw_distribution(params);

    SampleScalingStudy study;
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        const EstimationResult res =
            estimate_parameters(dist, m_list[i], replicates, splitmix64_at(base_seed, i));
        SampleScalingRow row;
        row.sample_count = m_list[i];
        row.std_m_exp = res.replicate_std.m_exp[0];
        row.std_chi_exp = res.replicate_std.chi_exp[0][0];
        study.rows.push_back(row);
    }

    Vec ms, std_m, std_chi;
    for (const SampleScalingRow& r : study.rows) {
        ms.push_back(static_cast<double>(r.sample_count));
        std_m.push_back(r.std_m_exp);
        std_chi.push_back(r.std_chi_exp);
    }
    study.m_fit = powerlaw_fit(ms, std_m);
    study.chi_fit = powerlaw_fit(ms, std_chi);
    return study;
}

namespace {

SweepCase make_case(std::int64_t case_id, const MsParams& params, EstimationResult res) {
    SweepCase c;
    c.case_id = case_id;
    c.params = params;
    c.j_distance = frobenius_distance(res.replicate_mean.j_exp, params.coupling_matrix);
    c.h_distance = euclidean_distance(res.replicate_mean.h_exp, params.field_vector);
    const std::size_t k = params.species_count();
    double pct = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
        for (std::size_t s = 0; s < k; ++s) {
            const double truth = params.coupling_matrix[l][s];
            if (std::abs(truth) >= 1e-6)
                pct = std::max(pct, 100.0 * std::abs(res.replicate_mean.j_exp[l][s] - truth) /
                                        std::abs(truth));
        }
        const double truth = params.field_vector[l];
        if (std::abs(truth) >= 1e-6)
            pct = std::max(pct, 100.0 * std::abs(res.replicate_mean.h_exp[l] - truth) /
                                    std::abs(truth));
    }
    c.max_pct_error = pct;
    c.result = std::move(res);
    return c;
}

} // namespace

std::vector<SweepCase> cw_recovery_sweep(const Vec& coupling_list, double field,
                                         std::int64_t n_spins, std::uint64_t sample_count,
                                         std::uint64_t replicates, std::uint64_t base_seed) {
    if (coupling_list.empty()) throw ValidationError("cw_recovery_sweep: empty grid");
    std::vector<SweepCase> out;
    for (std::size_t i = 0; i < coupling_list.size(); ++i) {
        const std::int64_t case_id = static_cast<std::int64_t>(i) + 1;
        const CwParams params{n_spins, coupling_list[i], field};
        validate(params);
        unique_stable_solution({1.0}, {{params.coupling}}, {params.field}); // regime check
        const MagnetizationDistribution dist = cw_distribution(params);
        EstimationResult res = estimate_parameters(
            dist, sample_count, replicates,
            splitmix64_at(base_seed, static_cast<std::uint64_t>(case_id)));
        out.push_back(make_case(case_id, as_multispecies(params), std::move(res)));
    }
    return out;
}

std::vector<SweepCase> ms_case_sweep(const std::vector<MsParams>& cases,
                                     std::uint64_t sample_count, std::uint64_t replicates,
                                     std::uint64_t base_seed) {
    if (cases.empty()) throw ValidationError("ms_case_sweep: empty case list");
    std::vector<SweepCase> out;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::int64_t case_id = static_cast<std::int64_t>(i) + 1;
        validate(cases[i]);
        const MagnetizationDistribution dist = ms_distribution(cases[i]);
        EstimationResult res = estimate_parameters(
            dist, sample_count, replicates,
            splitmix64_at(base_seed, static_cast<std::uint64_t>(case_id)));
        out.push_back(make_case(case_id, cases[i], std::move(res)));
    }
    return out;
}

std::vector<MsParams> canonical_case_list() {
    const std::vector<std::int64_t> sizes = {1000, 1000};
    const FractionVector alpha = {0.5, 0.5};
    const MsParams case1{sizes, {{1.2, 0.98}, {0.98, 0.8}}, {0.1, 0.2}};
    const MsParams case18{sizes, {{0.6, -0.8}, {-0.8, 0.9}}, {-0.2, -0.3}};

    // fixed generation stream; the list is a compile-time-stable artifact
    constexpr std::uint64_t kSeed = 424242;
    std::uint64_t counter = 0;
    const auto draw = [&](double lo, double hi) {
        return lo + (hi - lo) * uniform_at(kSeed, counter++);
    };

    std::vector<MsParams> cases;
    for (int id = 1; id <= 20; ++id) {
        if (id == 1) { cases.push_back(case1); continue; }
        if (id == 18) { cases.push_back(case18); continue; }
        for (;;) {
            MsParams c;
            c.group_sizes = sizes;
            const double j11 = draw(0.55, 1.2);
            const double j22 = draw(0.55, 1.2);
            const double j12 = draw(-0.6, 1.1);
            c.coupling_matrix = {{j11, j12}, {j12, j22}};
            c.field_vector = {draw(-0.3, 0.3), draw(-0.3, 0.3)};
            // keep entries identifiable and the regime unambiguous
            if (std::abs(j12) < 0.2) continue;
            if (std::abs(c.field_vector[0]) < 0.05 || std::abs(c.field_vector[1]) < 0.05)
                continue;
            const std::vector<MeanFieldSolution> sols =
                solve_ms(alpha, c.coupling_matrix, c.field_vector);
            std::size_t stable = 0;
            double radius = 1.0;
            for (const MeanFieldSolution& s : sols)
                if (s.stable) {
                    ++stable;
                    radius = s.jacobian_radius;
                }
            if (stable != 1 || radius > 0.9) continue;
            cases.push_back(std::move(c));
            break;
        }
    }
    return cases;
}

} // namespace mfspin
