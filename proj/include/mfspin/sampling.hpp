#ifndef MFSPIN_SAMPLING_HPP
#define MFSPIN_SAMPLING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mfspin/exact.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/model.hpp"

namespace mfspin {

// M i.i.d. draws from an exact distribution; the seed fully determines the
// output. A well forces restrict_to_well before sampling.
struct SamplerConfig {
    std::uint64_t sample_count = 1;
    std::uint64_t seed = 0;
    std::optional<MeanFieldSolution> well;
};

// Inverse-CDF sampling with binary search over the cumulative table. Draw i
// uses the counter-indexed uniform for (seed, i), so the sequence is
// reproducible regardless of how draws are partitioned across workers.
MagnetizationSample sample(const MagnetizationDistribution& dist, const SamplerConfig& config);

// Distinct deterministic per-replicate seeds derived from one base seed.
std::vector<std::uint64_t> replicate_seeds(std::uint64_t base_seed, std::uint64_t count);

// Expands magnetization draws into explicit +-1 spin configurations (first
// spins of each group up). Interoperability helper for small N only.
std::vector<std::vector<int>> expand_to_spins(const MagnetizationSample& s,
                                              const std::vector<std::int64_t>& group_sizes);

} // namespace mfspin

#endif
