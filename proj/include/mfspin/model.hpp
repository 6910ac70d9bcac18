#ifndef MFSPIN_MODEL_HPP
#define MFSPIN_MODEL_HPP

#include <cstdint>
#include <vector>

#include "mfspin/linalg.hpp"

namespace mfspin {

// Single-population model: N spins, uniform coupling J, external field h.
// Inverse temperature is absorbed into J and h.
struct CwParams {
    std::int64_t n_spins = 0;
    double coupling = 0.0;
    double field = 0.0;

    bool operator==(const CwParams&) const = default;
};

// k-species block model: group sizes N_1..N_k, reduced symmetric coupling
// matrix J (k x k), per-group field vector h.
struct MsParams {
    std::vector<std::int64_t> group_sizes;
    Mat coupling_matrix;
    Vec field_vector;

    std::size_t species_count() const { return group_sizes.size(); }
    std::int64_t total_spins() const;

    bool operator==(const MsParams&) const = default;
};

// Population fractions alpha_l = N_l / N (the diagonal of D_alpha).
using FractionVector = Vec;

const CwParams& validate(const CwParams& p);
const MsParams& validate(const MsParams& p);

FractionVector fractions_of(const MsParams& p);

// View a single-population model as k=1 so the k-species code paths apply.
MsParams as_multispecies(const CwParams& p);

// M magnetization vectors of dimension k, stored row-major. Configurations
// enter the estimators only through these group magnetizations.
struct MagnetizationSample {
    std::size_t species = 1;
    Vec values; // M * species entries, draw-major

    std::size_t draw_count() const { return species == 0 ? 0 : values.size() / species; }
    double at(std::size_t draw, std::size_t group) const { return values[draw * species + group]; }
};

// Checks shape and that every entry is an attainable lattice value
// (2c - N_l)/N_l for integer c in [0, N_l].
const MagnetizationSample& validate(const MagnetizationSample& s,
                                    const std::vector<std::int64_t>& group_sizes);

} // namespace mfspin

#endif
