#include "mfspin/model.hpp"

#include <cmath>
#include <string>

#include "mfspin/errors.hpp"

namespace mfspin {

std::int64_t MsParams::total_spins() const {
    std::int64_t n = 0;
    for (std::int64_t g : group_sizes) n += g;
    return n;
}

const CwParams& validate(const CwParams& p) {
    if (p.n_spins < 1)
        throw ValidationError("n_spins must be >= 1, got " + std::to_string(p.n_spins));
    if (!std::isfinite(p.coupling))
        throw ValidationError("coupling must be finite");
    if (!std::isfinite(p.field))
        throw ValidationError("field must be finite");
    return p;
}

const MsParams& validate(const MsParams& p) {
    const std::size_t k = p.group_sizes.size();
    if (k < 1) throw ValidationError("at least one group required");
    for (std::size_t l = 0; l < k; ++l)
        if (p.group_sizes[l] < 1)
            throw ValidationError("group size " + std::to_string(l + 1) + " must be >= 1");
    if (p.coupling_matrix.size() != k)
        throw ValidationError("coupling matrix must be k x k");
    for (std::size_t l = 0; l < k; ++l) {
        if (p.coupling_matrix[l].size() != k)
            throw ValidationError("coupling matrix must be k x k");
        for (std::size_t s = 0; s < k; ++s)
            if (!std::isfinite(p.coupling_matrix[l][s]))
                throw ValidationError("coupling matrix entries must be finite");
    }
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = l + 1; s < k; ++s)
            if (p.coupling_matrix[l][s] != p.coupling_matrix[s][l])
                throw ValidationError("coupling matrix symmetry violated at (" +
                                      std::to_string(l + 1) + "," + std::to_string(s + 1) + ")");
    for (std::size_t l = 0; l < k; ++l)
        if (!(p.coupling_matrix[l][l] > 0.0))
            throw ValidationError("diagonal coupling " + std::to_string(l + 1) +
                                  " must be positive");
    if (p.field_vector.size() != k)
        throw ValidationError("field vector must have k entries");
    for (double h : p.field_vector)
        if (!std::isfinite(h)) throw ValidationError("field entries must be finite");
    return p;
}

FractionVector fractions_of(const MsParams& p) {
    const double total = static_cast<double>(p.total_spins());
    FractionVector alpha(p.group_sizes.size());
    for (std::size_t l = 0; l < alpha.size(); ++l)
        alpha[l] = static_cast<double>(p.group_sizes[l]) / total;
    return alpha;
}

MsParams as_multispecies(const CwParams& p) {
    return MsParams{{p.n_spins}, {{p.coupling}}, {p.field}};
}

const MagnetizationSample& validate(const MagnetizationSample& s,
                                    const std::vector<std::int64_t>& group_sizes) {
    if (s.species != group_sizes.size())
        throw ValidationError("sample species count does not match group sizes");
    if (s.species == 0 || s.values.size() % s.species != 0)
        throw ValidationError("sample storage is not a whole number of draws");
    if (s.values.empty()) throw ValidationError("sample must contain at least one draw");
    const std::size_t m = s.draw_count();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < s.species; ++l) {
            const double v = s.at(i, l);
            const double n = static_cast<double>(group_sizes[l]);
            if (!(v >= -1.0 && v <= 1.0))
                throw ValidationError("magnetization outside [-1, 1]");
            // v = (2c - N)/N for integer c
            const double c = 0.5 * (v * n + n);
            if (std::abs(c - std::round(c)) > 1e-9 * n)
                throw ValidationError("magnetization off the lattice of its group");
        }
    }
    return s;
}

} // namespace mfspin
