#include "mfspin/meanfield.hpp"

#include <algorithm>
#include <cmath>

#include "mfspin/errors.hpp"

namespace mfspin {

namespace {

constexpr double kMarginalBand = 1e-9;

void classify(MeanFieldSolution& s, double radius) {
    s.jacobian_radius = radius;
    s.marginal = std::abs(radius - 1.0) <= kMarginalBand;
    s.stable = !s.marginal && radius < 1.0;
}

// ---- single population -------------------------------------------------

double cw_map(double j, double h, double m) { return std::tanh(j * m + h); }

// g(m) = tanh(Jm + h) - m; g(-1) > 0, g(+1) < 0, so every root is interior
// and a sign scan catches them all (the map has at most three fixed points).
double cw_res(double j, double h, double m) { return cw_map(j, h, m) - m; }

double polish_cw(double j, double h, double m) {
    for (int it = 0; it < 50; ++it) {
        const double t = std::tanh(j * m + h);
        const double g = t - m;
        const double dg = j * (1.0 - t * t) - 1.0;
        if (dg == 0.0) break;
        const double next = m - g / dg;
        if (!(next > -1.0 && next < 1.0)) break;
        if (std::abs(next - m) < 1e-16) { m = next; break; }
        m = next;
    }
    return m;
}

// ---- k species ---------------------------------------------------------

Vec ms_map(const FractionVector& alpha, const Mat& j, const Vec& h, const Vec& m) {
    const std::size_t k = m.size();
    Vec out(k);
    for (std::size_t l = 0; l < k; ++l) {
        double u = h[l];
        for (std::size_t s = 0; s < k; ++s) u += j[l][s] * alpha[s] * m[s];
        out[l] = std::tanh(u);
    }
    return out;
}

double ms_residual(const FractionVector& alpha, const Mat& j, const Vec& h, const Vec& m) {
    const Vec t = ms_map(alpha, j, h, m);
    double r = 0.0;
    for (std::size_t l = 0; l < m.size(); ++l) r = std::max(r, std::abs(t[l] - m[l]));
    return r;
}

// Newton step on G(m) = tanh(J D_a m + h) - m; skipped when the Jacobian
// turns singular (marginal point).
bool newton_polish_ms(const FractionVector& alpha, const Mat& j, const Vec& h, Vec& m) {
    const std::size_t k = m.size();
    for (int it = 0; it < 60; ++it) {
        const Vec t = ms_map(alpha, j, h, m);
        Vec g(k);
        double gnorm = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            g[l] = t[l] - m[l];
            gnorm = std::max(gnorm, std::abs(g[l]));
        }
        if (gnorm < 1e-15) return true;
        Mat jac(k, Vec(k));
        for (std::size_t l = 0; l < k; ++l) {
            const double p = 1.0 - t[l] * t[l];
            for (std::size_t s = 0; s < k; ++s)
                jac[l][s] = p * j[l][s] * alpha[s] - (l == s ? 1.0 : 0.0);
        }
        Vec delta;
        try {
            Vec rhs(k);
            for (std::size_t l = 0; l < k; ++l) rhs[l] = -g[l];
            delta = solve_linear(jac, rhs);
        } catch (const NumericalError&) {
            return false;
        }
        double step = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            m[l] += delta[l];
            if (m[l] >= 1.0) m[l] = 1.0 - 1e-15;
            if (m[l] <= -1.0) m[l] = -1.0 + 1e-15;
            step = std::max(step, std::abs(delta[l]));
        }
        if (step < 1e-16) return true;
    }
    return true;
}

double radius_at(const FractionVector& alpha, const Mat& j, const Vec& m) {
    Vec p(m.size());
    for (std::size_t l = 0; l < m.size(); ++l) p[l] = 1.0 - m[l] * m[l];
    return spectral_radius_pjd(p, j, alpha);
}

} // namespace

std::vector<MeanFieldSolution> solve_cw(double coupling, double field,
                                        const SolverOptions& opts) {
    if (!std::isfinite(coupling) || !std::isfinite(field))
        throw ValidationError("solve_cw: parameters must be finite");

    // Dense sign scan + bisection finds every root, including the repelling
    // interior one that damped iteration cannot reach.
    constexpr int kScan = 8192;
    Vec roots;
    double prev_m = -1.0 + 1e-12;
    double prev_g = cw_res(coupling, field, prev_m);
    for (int i = 1; i <= kScan; ++i) {
        const double m = -1.0 + 2.0 * static_cast<double>(i) / kScan -
                         (i == kScan ? 1e-12 : 0.0);
        const double g = cw_res(coupling, field, m);
        if (g == 0.0) {
            roots.push_back(m);
        } else if (prev_g * g < 0.0) {
            double lo = prev_m, hi = m;
            double glo = prev_g;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const double gm = cw_res(coupling, field, mid);
                if (gm == 0.0) { lo = hi = mid; break; }
                if (glo * gm < 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push_back(polish_cw(coupling, field, 0.5 * (lo + hi)));
        }
        prev_m = m;
        prev_g = g;
    }

    std::sort(roots.begin(), roots.end());
    Vec dedup;
    for (double r : roots)
        if (dedup.empty() || std::abs(r - dedup.back()) > opts.dedup_tol) dedup.push_back(r);

    std::vector<MeanFieldSolution> out;
    for (double m : dedup) {
        MeanFieldSolution s;
        s.magnetization = {m};
        s.residual = std::abs(cw_res(coupling, field, m));
        classify(s, std::abs(coupling * (1.0 - m * m)));
        if (s.residual >= 1e-12)
            throw NumericalError("solve_cw: root refinement stalled, residual " +
                                 std::to_string(s.residual));
        out.push_back(std::move(s));
    }
    if (out.empty()) throw NumericalError("solve_cw: no fixed point located");
    return out;
}

std::vector<MeanFieldSolution> solve_ms(const FractionVector& alpha, const Mat& coupling,
                                        const Vec& field, const SolverOptions& opts) {
    const std::size_t k = alpha.size();
    if (k == 0 || coupling.size() != k || field.size() != k)
        throw ValidationError("solve_ms: dimension mismatch");

    // Seed grid {-0.9, 0, 0.9}^k.
    std::vector<Vec> candidates;
    const double levels[3] = {-0.9, 0.0, 0.9};
    std::size_t total = 1;
    for (std::size_t l = 0; l < k; ++l) total *= 3;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vec m(k);
        std::size_t t = idx;
        for (std::size_t l = 0; l < k; ++l) {
            m[l] = levels[t % 3];
            t /= 3;
        }

        bool converged = false;
        for (std::int64_t it = 0; it < opts.max_iterations; ++it) {
            const Vec t2 = ms_map(alpha, coupling, field, m);
            double step = 0.0;
            for (std::size_t l = 0; l < k; ++l) {
                const double next = (1.0 - opts.damping) * m[l] + opts.damping * t2[l];
                step = std::max(step, std::abs(next - m[l]));
                m[l] = next;
            }
            if (step < opts.update_tol) { converged = true; break; }
        }
        if (!converged) continue; // seed in a cycling region; others cover it
        newton_polish_ms(alpha, coupling, field, m);
        if (ms_residual(alpha, coupling, field, m) < 1e-12) candidates.push_back(m);
    }
    if (candidates.empty())
        throw NumericalError("solve_ms: no seed converged within the iteration budget");

    std::sort(candidates.begin(), candidates.end());
    std::vector<Vec> dedup;
    for (const Vec& c : candidates) {
        bool dup = false;
        for (const Vec& d : dedup)
            if (max_abs_diff(c, d) <= opts.dedup_tol) { dup = true; break; }
        if (!dup) dedup.push_back(c);
    }

    std::vector<MeanFieldSolution> out;
    for (const Vec& m : dedup) {
        MeanFieldSolution s;
        s.magnetization = m;
        s.residual = ms_residual(alpha, coupling, field, m);
        classify(s, radius_at(alpha, coupling, m));
        out.push_back(std::move(s));
    }
    return out;
}

SusceptibilityMatrix chi_cw(double coupling, const MeanFieldSolution& solution) {
    const double m = solution.magnetization.at(0);
    const double p = 1.0 - m * m;
    const double denom = 1.0 - coupling * p;
    if (std::abs(denom) < 1e-12)
        throw NumericalError("chi_cw: at criticality, susceptibility diverges");
    return SusceptibilityMatrix{{{p / denom}}};
}

SusceptibilityMatrix chi_ms(const FractionVector& alpha, const Mat& coupling,
                            const MeanFieldSolution& solution) {
    const std::size_t k = alpha.size();
    const Vec& m = solution.magnetization;
    if (m.size() != k || coupling.size() != k)
        throw ValidationError("chi_ms: dimension mismatch");
    Mat a = identity(k);
    for (std::size_t l = 0; l < k; ++l) {
        const double p = 1.0 - m[l] * m[l];
        for (std::size_t s = 0; s < k; ++s) a[l][s] -= p * coupling[l][s] * alpha[s];
    }
    Mat inv = gauss_jordan_inverse(a); // throws at criticality
    SusceptibilityMatrix chi{zeros(k, k)};
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t s = 0; s < k; ++s)
            chi.chi[l][s] = inv[l][s] * (1.0 - m[s] * m[s]);
    return chi;
}

MeanFieldSolution unique_stable_solution(const FractionVector& alpha, const Mat& coupling,
                                         const Vec& field, const SolverOptions& opts) {
    std::vector<MeanFieldSolution> sols;
    if (alpha.size() == 1 && std::abs(alpha[0] - 1.0) < 1e-15)
        sols = solve_cw(coupling[0][0], field[0], opts);
    else
        sols = solve_ms(alpha, coupling, field, opts);
    const MeanFieldSolution* found = nullptr;
    std::size_t stable_count = 0;
    for (const MeanFieldSolution& s : sols)
        if (s.stable) {
            ++stable_count;
            found = &s;
        }
    if (stable_count != 1)
        throw NumericalError("expected a unique stable solution, found " +
                             std::to_string(stable_count));
    return *found;
}

} // namespace mfspin
