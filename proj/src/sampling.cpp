#include "mfspin/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "mfspin/errors.hpp"
#include "mfspin/rng.hpp"
#include "mfspin/stats.hpp"

namespace mfspin {

MagnetizationSample sample(const MagnetizationDistribution& dist, const SamplerConfig& config) {
    if (config.sample_count < 1)
        throw ValidationError("sample_count must be >= 1");
    const MagnetizationDistribution* src = &dist;
    MagnetizationDistribution restricted;
    if (config.well) {
        restricted = restrict_to_well(dist, *config.well);
        src = &restricted;
    }

    const std::size_t cells = src->cell_count();
    Vec cdf(cells);
    CompensatedSum acc;
    for (std::size_t i = 0; i < cells; ++i) {
        acc.add(src->probabilities[i]);
        cdf[i] = acc.value();
    }
    cdf.back() = 1.0; // guard against accumulated rounding at the far end

    // flat index -> magnetization vector, decoded on demand
    const std::size_t k = src->species_count();
    std::vector<std::size_t> stride(k, 1);
    for (std::size_t l = k - 1; l-- > 0;)
        stride[l] = stride[l + 1] *
                    (static_cast<std::size_t>(src->model.group_sizes[l + 1]) + 1);

    MagnetizationSample out;
    out.species = k;
    out.values.resize(static_cast<std::size_t>(config.sample_count) * k);
    for (std::uint64_t i = 0; i < config.sample_count; ++i) {
        const double u = uniform_at(config.seed, i);
        const std::size_t cell = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        std::size_t rest = cell;
        for (std::size_t l = 0; l < k; ++l) {
            const std::size_t c = rest / stride[l];
            rest %= stride[l];
            out.values[static_cast<std::size_t>(i) * k + l] = src->axis_m[l][c];
        }
    }
    return out;
}

std::vector<std::uint64_t> replicate_seeds(std::uint64_t base_seed, std::uint64_t count) {
    if (count < 1) throw ValidationError("replicate count must be >= 1");
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
    for (std::uint64_t r = 0; r < count; ++r)
        seeds[static_cast<std::size_t>(r)] = splitmix64_at(base_seed, r);
    return seeds;
}

std::vector<std::vector<int>> expand_to_spins(const MagnetizationSample& s,
                                              const std::vector<std::int64_t>& group_sizes) {
    validate(s, group_sizes);
    std::int64_t n = 0;
    for (std::int64_t g : group_sizes) n += g;
    if (n > 10000) throw ResourceError("spin expansion is for small systems only");

    std::vector<std::vector<int>> out;
    out.reserve(s.draw_count());
    for (std::size_t i = 0; i < s.draw_count(); ++i) {
        std::vector<int> sigma;
        sigma.reserve(static_cast<std::size_t>(n));
        for (std::size_t l = 0; l < s.species; ++l) {
            const double nl = static_cast<double>(group_sizes[l]);
            const std::int64_t up =
                static_cast<std::int64_t>(std::llround(0.5 * (s.at(i, l) * nl + nl)));
            for (std::int64_t q = 0; q < group_sizes[l]; ++q)
                sigma.push_back(q < up ? 1 : -1);
        }
        out.push_back(std::move(sigma));
    }
    return out;
}

} // namespace mfspin
