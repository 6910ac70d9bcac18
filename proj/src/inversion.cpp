#include "mfspin/inversion.hpp"

#include <cmath>

#include "mfspin/errors.hpp"
#include "mfspin/sampling.hpp"
#include "mfspin/stats.hpp"

namespace mfspin {

EmpiricalMoments ms_moments_from_sample(const MagnetizationSample& sample,
                                        const std::vector<std::int64_t>& group_sizes) {
    const std::size_t k = group_sizes.size();
    if (sample.species != k)
        throw ValidationError("sample species count does not match group sizes");
    const std::size_t m_count = sample.draw_count();
    if (m_count == 0) throw ValidationError("empty sample");
    const double inv_m = 1.0 / static_cast<double>(m_count);

    EmpiricalMoments out;
    out.m_exp.resize(k);
    for (std::size_t l = 0; l < k; ++l) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < m_count; ++i) acc.add(sample.at(i, l));
        out.m_exp[l] = acc.value() * inv_m;
    }
    // centered accumulation; algebraically identical to the raw
    // second-moment formula but immune to the large-N cancellation
    out.chi_exp = zeros(k, k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = l; s < k; ++s) {
            CompensatedSum acc;
            for (std::size_t i = 0; i < m_count; ++i)
                acc.add((sample.at(i, l) - out.m_exp[l]) * (sample.at(i, s) - out.m_exp[s]));
            const double cov = acc.value() * inv_m;
            out.chi_exp[l][s] = static_cast<double>(group_sizes[s]) * cov;
            out.chi_exp[s][l] = static_cast<double>(group_sizes[l]) * cov;
        }
    out.p_exp.resize(k);
    for (std::size_t l = 0; l < k; ++l) out.p_exp[l] = 1.0 - out.m_exp[l] * out.m_exp[l];
    return out;
}

std::pair<double, double> cw_moments_from_sample(const MagnetizationSample& sample,
                                                 std::int64_t n_spins) {
    if (sample.species != 1) throw ValidationError("expected a single-population sample");
    const EmpiricalMoments mom = ms_moments_from_sample(sample, {n_spins});
    return {mom.m_exp[0], mom.chi_exp[0][0]};
}

InversionOutput ms_invert(const Vec& m_exp, const Mat& chi_exp, const FractionVector& alpha) {
    const std::size_t k = m_exp.size();
    if (chi_exp.size() != k || alpha.size() != k)
        throw ValidationError("ms_invert: dimension mismatch");
    for (double m : m_exp)
        if (!(std::abs(m) < 1.0))
            throw NumericalError("degenerate magnetization |m_exp| >= 1, field unidentifiable");

    Mat chi_inv;
    try {
        chi_inv = gauss_jordan_inverse(chi_exp);
    } catch (const NumericalError&) {
        throw NumericalError("degenerate susceptibility: chi_exp is singular");
    }

    InversionOutput out;
    out.j_exp = zeros(k, k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = 0; s < k; ++s) {
            const double p_inv = (l == s) ? 1.0 / (1.0 - m_exp[l] * m_exp[l]) : 0.0;
            out.j_exp[l][s] = (p_inv - chi_inv[l][s]) / alpha[s];
        }
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = l + 1; s < k; ++s) {
            out.asymmetry = std::max(out.asymmetry,
                                     std::abs(out.j_exp[l][s] - out.j_exp[s][l]));
            const double avg = 0.5 * (out.j_exp[l][s] + out.j_exp[s][l]);
            out.j_exp[l][s] = out.j_exp[s][l] = avg;
        }

    out.h_exp.resize(k);
    for (std::size_t l = 0; l < k; ++l) {
        double field = std::atanh(m_exp[l]);
        for (std::size_t s = 0; s < k; ++s) field -= alpha[s] * out.j_exp[l][s] * m_exp[s];
        out.h_exp[l] = field;
    }
    return out;
}

std::pair<double, double> cw_invert(double m_exp, double chi_exp) {
    if (!(std::abs(m_exp) < 1.0))
        throw NumericalError("degenerate magnetization |m_exp| >= 1, field unidentifiable");
    if (!(chi_exp >= 1e-14))
        throw NumericalError("degenerate susceptibility: chi_exp must be positive");
    const InversionOutput out = ms_invert({m_exp}, {{chi_exp}}, {1.0});
    return {out.j_exp[0][0], out.h_exp[0]};
}

namespace {

// entrywise replicate aggregation
Estimate aggregate(const std::vector<Estimate>& reps, bool want_std) {
    const std::size_t k = reps.front().m_exp.size();
    const std::size_t r = reps.size();
    Estimate out;
    out.m_exp.assign(k, 0.0);
    out.h_exp.assign(k, 0.0);
    out.chi_exp = zeros(k, k);
    out.j_exp = zeros(k, k);
    Vec buf(r);
    const auto reduce = [&](auto getter) {
        for (std::size_t i = 0; i < r; ++i) buf[i] = getter(reps[i]);
        return want_std ? sample_std(buf) : mean(buf);
    };
    for (std::size_t l = 0; l < k; ++l) {
        out.m_exp[l] = reduce([&](const Estimate& e) { return e.m_exp[l]; });
        out.h_exp[l] = reduce([&](const Estimate& e) { return e.h_exp[l]; });
        for (std::size_t s = 0; s < k; ++s) {
            out.chi_exp[l][s] = reduce([&](const Estimate& e) { return e.chi_exp[l][s]; });
            out.j_exp[l][s] = reduce([&](const Estimate& e) { return e.j_exp[l][s]; });
        }
    }
    out.asymmetry = reduce([](const Estimate& e) { return e.asymmetry; });
    return out;
}

} // namespace

EstimationResult estimate_parameters(const MagnetizationDistribution& dist,
                                     std::uint64_t sample_count, std::uint64_t replicate_count,
                                     std::uint64_t base_seed,
                                     const std::optional<MeanFieldSolution>& well) {
    if (replicate_count < 1) throw ValidationError("replicate count must be >= 1");

    // restrict once, not per replicate
    const MagnetizationDistribution* src = &dist;
    MagnetizationDistribution restricted;
    if (well) {
        restricted = restrict_to_well(dist, *well);
        src = &restricted;
    }

    const FractionVector alpha = fractions_of(src->model);
    EstimationResult result;
    for (std::uint64_t seed : replicate_seeds(base_seed, replicate_count)) {
        SamplerConfig cfg;
        cfg.sample_count = sample_count;
        cfg.seed = seed;
        const MagnetizationSample draw = sample(*src, cfg);
        const EmpiricalMoments mom = ms_moments_from_sample(draw, src->model.group_sizes);
        const InversionOutput inv = ms_invert(mom.m_exp, mom.chi_exp, alpha);
        Estimate e;
        e.m_exp = mom.m_exp;
        e.chi_exp = mom.chi_exp;
        e.j_exp = inv.j_exp;
        e.h_exp = inv.h_exp;
        e.asymmetry = inv.asymmetry;
        result.replicates.push_back(std::move(e));
    }
    result.replicate_mean = aggregate(result.replicates, false);
    if (result.replicates.size() >= 2)
        result.replicate_std = aggregate(result.replicates, true);
    return result;
}

std::int64_t estimated_degrees_of_freedom(std::int64_t k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    return k * (k + 3) / 2;
}

} // namespace mfspin
