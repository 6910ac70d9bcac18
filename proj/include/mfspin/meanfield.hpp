#ifndef MFSPIN_MEANFIELD_HPP
#define MFSPIN_MEANFIELD_HPP

#include <cstdint>
#include <vector>

#include "mfspin/linalg.hpp"
#include "mfspin/model.hpp"

namespace mfspin {

// Fixed point of the self-consistency map with stability classification.
// stable requires spectral radius strictly below 1; radii within 1e-9 of 1
// are flagged marginal instead.
struct MeanFieldSolution {
    Vec magnetization;
    double residual = 0.0;
    bool stable = false;
    bool marginal = false;
    double jacobian_radius = 0.0;
};

// dm_l/dh_s at a stable solution; 1x1 for the single-population model.
struct SusceptibilityMatrix {
    Mat chi;
    double scalar() const { return chi[0][0]; }
};

struct SolverOptions {
    double damping = 0.5;
    double update_tol = 1e-14;
    std::int64_t max_iterations = 1000000;
    double dedup_tol = 1e-8;
};

// All fixed points of m = tanh(J m + h), ordered by magnetization.
std::vector<MeanFieldSolution> solve_cw(double coupling, double field,
                                        const SolverOptions& opts = {});

// Fixed points of m_l = tanh(sum_s J_ls alpha_s m_s + h_l) reached by damped
// iteration from the 3^k seed grid {-0.9, 0, 0.9}^k, Newton-polished and
// deduplicated; ordered lexicographically.
std::vector<MeanFieldSolution> solve_ms(const FractionVector& alpha, const Mat& coupling,
                                        const Vec& field, const SolverOptions& opts = {});

// chi = (1 - m^2) / (1 - J(1 - m^2)).
SusceptibilityMatrix chi_cw(double coupling, const MeanFieldSolution& solution);

// chi = (I - P J D_alpha)^{-1} P with P = diag(1 - m_l^2).
SusceptibilityMatrix chi_ms(const FractionVector& alpha, const Mat& coupling,
                            const MeanFieldSolution& solution);

// Convenience: the unique stable solution, or an error when the solution is
// not unique among stable ones (used by regime-checked pipelines).
MeanFieldSolution unique_stable_solution(const FractionVector& alpha, const Mat& coupling,
                                         const Vec& field, const SolverOptions& opts = {});

} // namespace mfspin

#endif
