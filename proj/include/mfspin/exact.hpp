#ifndef MFSPIN_EXACT_HPP
#define MFSPIN_EXACT_HPP

#include <cstdint>
#include <vector>

#include "mfspin/linalg.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/model.hpp"

namespace mfspin {

inline constexpr std::int64_t kDefaultCellBudget = 100000000;

// Exact equilibrium distribution of the group-magnetization vector on its
// lattice: (N+1) points for one population, a prod(N_l + 1) grid for k.
// Cells are ordered lexicographically in the up-spin counts (last group
// fastest). probabilities = normalized exp(log_weights), computed with a
// max shift so no finite N overflows.
struct MagnetizationDistribution {
    MsParams model;               // k = 1 for the single-population case
    std::vector<Vec> axis_m;      // axis_m[l][c] = (2c - N_l)/N_l
    Vec log_weights;              // unnormalized, one per cell
    Vec probabilities;            // normalized, one per cell

    std::size_t species_count() const { return model.species_count(); }
    std::size_t cell_count() const { return probabilities.size(); }
};

// Walks cells in storage order, exposing the current count/magnetization
// vector without re-decoding the flat index each step.
class CellCursor {
public:
    explicit CellCursor(const MagnetizationDistribution& dist);
    const std::vector<std::int64_t>& counts() const { return counts_; }
    const Vec& magnetization() const { return m_; }
    bool advance(); // false once past the last cell

private:
    const MagnetizationDistribution* dist_;
    std::vector<std::int64_t> counts_;
    Vec m_;
};

// mean_l = w(m_l); second_ls = w(m_l m_s); chi_N entries
// N_s (w(m_l m_s) - w(m_l) w(m_s)).
struct ExactMoments {
    Vec mean;
    Mat second;
    Mat finite_size_chi;
};

MagnetizationDistribution cw_distribution(const CwParams& params);
MagnetizationDistribution ms_distribution(const MsParams& params,
                                          std::int64_t cell_budget = kDefaultCellBudget);

ExactMoments exact_moments(const MagnetizationDistribution& dist);

// Conditional distribution on the basin of one stable solution. Cells are
// assigned by running the damped mean-field map to convergence and matching
// the nearest stable solution (ties to the lexicographically larger one, so
// m = 0 at zero field lands in the positive well).
MagnetizationDistribution restrict_to_well(const MagnetizationDistribution& dist,
                                           const MeanFieldSolution& solution);

// Independent oracle: literal summation of exp(-H) over all 2^N spin
// configurations with the per-spin double-sum Hamiltonian.
ExactMoments brute_force_moments(const MsParams& params);
ExactMoments brute_force_moments(const CwParams& params);

} // namespace mfspin

#endif
