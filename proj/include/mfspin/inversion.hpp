#ifndef MFSPIN_INVERSION_HPP
#define MFSPIN_INVERSION_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mfspin/exact.hpp"
#include "mfspin/linalg.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/model.hpp"

namespace mfspin {

// Empirical sufficient statistics of one M-sample.
struct EmpiricalMoments {
    Vec m_exp;
    Mat chi_exp;
    Vec p_exp; // diagonal of P_exp = diag(1 - m_exp^2)
};

// Inferred parameters from one M-sample; asymmetry is the max entrywise
// deviation of the raw coupling estimate from its transpose, recorded
// before symmetrization.
struct Estimate {
    Vec m_exp;
    Mat chi_exp;
    Mat j_exp;
    Vec h_exp;
    double asymmetry = 0.0;
};

// Replicate-resolved estimation output; std fields are empty until at
// least two replicates exist.
struct EstimationResult {
    std::vector<Estimate> replicates;
    Estimate replicate_mean;
    Estimate replicate_std;
};

std::pair<double, double> cw_moments_from_sample(const MagnetizationSample& sample,
                                                 std::int64_t n_spins);

// j_exp = 1/(1 - m^2) - 1/chi ; h_exp = atanh(m) - j_exp m.
std::pair<double, double> cw_invert(double m_exp, double chi_exp);

EmpiricalMoments ms_moments_from_sample(const MagnetizationSample& sample,
                                        const std::vector<std::int64_t>& group_sizes);

struct InversionOutput {
    Mat j_exp;
    Vec h_exp;
    double asymmetry = 0.0;
};

// J_exp = (P^-1 - chi^-1) D_alpha^-1, symmetrized by averaging with its
// transpose; h_l = atanh(m_l) - sum_s alpha_s J_ls m_s.
InversionOutput ms_invert(const Vec& m_exp, const Mat& chi_exp, const FractionVector& alpha);

// Full pipeline: R replicate samples of size M from the exact distribution,
// moments and inversion per replicate, entrywise mean/std across replicates.
EstimationResult estimate_parameters(const MagnetizationDistribution& dist,
                                     std::uint64_t sample_count, std::uint64_t replicate_count,
                                     std::uint64_t base_seed,
                                     const std::optional<MeanFieldSolution>& well = {});

// Number of independent inferred quantities: k(k+3)/2.
std::int64_t estimated_degrees_of_freedom(std::int64_t k);

} // namespace mfspin

#endif
