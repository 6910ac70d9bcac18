#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfspin/errors.hpp"
#include "mfspin/exact.hpp"
#include "mfspin/inversion.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/sampling.hpp"

using namespace mfspin;

namespace {

MagnetizationSample make_sample(std::size_t species, std::vector<double> values) {
    MagnetizationSample s;
    s.species = species;
    s.values = std::move(values);
    return s;
}

} // namespace

TEST_CASE("empirical moments on hand-built samples") {
    {
        // constant sample: zero variance
        const auto [m, chi] = cw_moments_from_sample(make_sample(1, {0.5, 0.5, 0.5, 0.5}), 4);
        CHECK(m == doctest::Approx(0.5));
        CHECK(chi == doctest::Approx(0.0));
    }
    {
        // {-1, +1} with N = 1: mean 0, biased variance 1, chi = N var = 1
        const auto [m, chi] = cw_moments_from_sample(make_sample(1, {-1.0, 1.0}), 1);
        CHECK(m == doctest::Approx(0.0));
        CHECK(chi == doctest::Approx(1.0));
    }
    {
        // two species: chi_ls = N_s cov_ls, so the matrix is weighted-symmetric;
        // draws (0.5, 1), (-0.5, -1), (0, 0) give cov_12 = 1/3
        const auto mom = ms_moments_from_sample(
            make_sample(2, {0.5, 1.0, -0.5, -1.0, 0.0, 0.0}), {4, 2});
        CHECK(mom.m_exp[0] == doctest::Approx(0.0));
        CHECK(mom.m_exp[1] == doctest::Approx(0.0));
        CHECK(mom.chi_exp[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(mom.chi_exp[1][0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
        const double a1 = 4.0 / 6.0, a2 = 2.0 / 6.0;
        CHECK(a1 * mom.chi_exp[0][1] == doctest::Approx(a2 * mom.chi_exp[1][0]).epsilon(1e-14));
        CHECK(mom.p_exp[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("scalar inversion on exact mean-field inputs") {
    {
        // free spins: m = tanh(h), chi = 1 - m^2  =>  J = 0, h recovered
        const double m = std::tanh(0.1);
        const auto [j, h] = cw_invert(m, 1.0 - m * m);
        CHECK(j == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(h == doctest::Approx(0.1).epsilon(1e-13));
    }
    {
        // symmetric phase: m = 0, chi = 1/(1 - J)
        const auto [j, h] = cw_invert(0.0, 2.5);
        CHECK(j == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(h == doctest::Approx(0.0));
    }
}

TEST_CASE("analytic round-trip: solve -> chi -> invert recovers the parameters") {
    {
        const MeanFieldSolution sol = unique_stable_solution({1.0}, {{0.6}}, {0.1});
        const double chi = chi_cw(0.6, sol).scalar();
        const auto [j, h] = cw_invert(sol.magnetization[0], chi);
        CHECK(j == doctest::Approx(0.6).epsilon(1e-11));
        CHECK(h == doctest::Approx(0.1).epsilon(1e-11));
    }
    {
        const FractionVector alpha = {0.5, 0.5};
        const Mat j_true = {{1.2, 0.98}, {0.98, 0.8}};
        const Vec h_true = {0.1, 0.2};
        const MeanFieldSolution sol = unique_stable_solution(alpha, j_true, h_true);
        const Mat chi = chi_ms(alpha, j_true, sol).chi;
        const InversionOutput inv = ms_invert(sol.magnetization, chi, alpha);
        CHECK(max_abs_diff(inv.j_exp, j_true) < 1e-10);
        CHECK(max_abs_diff(inv.h_exp, h_true) < 1e-10);
        // analytic inputs: the pre-symmetrization estimate is already symmetric
        CHECK(inv.asymmetry < 1e-10);
    }
}

TEST_CASE("multi-species inversion with one species reduces to the scalar formulas") {
    const auto [j, h] = cw_invert(0.3, 1.4);
    const InversionOutput inv = ms_invert({0.3}, {{1.4}}, {1.0});
    CHECK(inv.j_exp[0][0] == doctest::Approx(j).epsilon(1e-14));
    CHECK(inv.h_exp[0] == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("inversion output is symmetric and covariant under relabeling and sign flips") {
    const FractionVector alpha = {0.3, 0.7};
    const Vec m = {0.25, -0.4};
    const Mat chi = {{1.3, 0.21}, {0.49, 1.1}}; // weighted-symmetric: 0.3*0.21 != ... any chi works
    const InversionOutput inv = ms_invert(m, chi, alpha);
    CHECK(inv.j_exp[0][1] == doctest::Approx(inv.j_exp[1][0]));

    // exchanging the two groups permutes all outputs
    const InversionOutput swapped =
        ms_invert({m[1], m[0]}, {{chi[1][1], chi[1][0]}, {chi[0][1], chi[0][0]}},
                  {alpha[1], alpha[0]});
    CHECK(swapped.j_exp[0][0] == doctest::Approx(inv.j_exp[1][1]).epsilon(1e-12));
    CHECK(swapped.j_exp[0][1] == doctest::Approx(inv.j_exp[0][1]).epsilon(1e-12));
    CHECK(swapped.h_exp[0] == doctest::Approx(inv.h_exp[1]).epsilon(1e-12));

    // m -> -m flips the fields and preserves the couplings
    const InversionOutput flipped = ms_invert({-m[0], -m[1]}, chi, alpha);
    CHECK(flipped.j_exp[0][1] == doctest::Approx(inv.j_exp[0][1]).epsilon(1e-12));
    CHECK(flipped.h_exp[0] == doctest::Approx(-inv.h_exp[0]).epsilon(1e-12));
    CHECK(flipped.h_exp[1] == doctest::Approx(-inv.h_exp[1]).epsilon(1e-12));
}

TEST_CASE("degenerate inputs raise numerical errors") {
    CHECK_THROWS_AS((void)cw_invert(1.0, 0.5), NumericalError);
    CHECK_THROWS_AS((void)cw_invert(0.2, 0.0), NumericalError);
    CHECK_THROWS_AS((void)ms_invert({0.5, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5}),
                    NumericalError);
    // singular susceptibility
    CHECK_THROWS_AS((void)ms_invert({0.1, 0.1}, {{1.0, 1.0}, {1.0, 1.0}}, {0.5, 0.5}),
                    NumericalError);
}

TEST_CASE("full estimation pipeline is deterministic and centers on the truth") {
    const CwParams p{100, 0.6, 0.1};
    const auto d = cw_distribution(p);
    const EstimationResult r1 = estimate_parameters(d, 2000, 5, 4242);
    const EstimationResult r2 = estimate_parameters(d, 2000, 5, 4242);
    REQUIRE(r1.replicates.size() == 5);
    CHECK(r1.replicate_mean.j_exp[0][0] == r2.replicate_mean.j_exp[0][0]);
    CHECK(r1.replicate_std.h_exp[0] == r2.replicate_std.h_exp[0]);
    // loose sanity window; the acceptance harness pins the tight statistical bounds
    CHECK(std::abs(r1.replicate_mean.j_exp[0][0] - 0.6) < 0.3);
    CHECK(std::abs(r1.replicate_mean.h_exp[0] - 0.1) < 0.1);
    CHECK(r1.replicate_std.j_exp[0][0] > 0.0);

    // single replicate: no std block
    const EstimationResult r3 = estimate_parameters(d, 500, 1, 4242);
    CHECK(r3.replicates.size() == 1);
    CHECK(r3.replicate_std.j_exp.empty());
}

TEST_CASE("estimation from a restricted well targets the conditioned moments") {
    const auto d = cw_distribution(CwParams{60, 1.5, 0.0});
    const auto sols = solve_cw(1.5, 0.0);
    const EstimationResult r = estimate_parameters(d, 5000, 4, 99, sols[2]);
    // all draws sit in the positive well, so the magnetization estimate is
    // near the positive branch rather than the symmetric zero
    CHECK(r.replicate_mean.m_exp[0] > 0.5);
}

TEST_CASE("estimated degrees of freedom count the independent parameters") {
    CHECK(estimated_degrees_of_freedom(1) == 2);
    CHECK(estimated_degrees_of_freedom(2) == 5);
    CHECK(estimated_degrees_of_freedom(3) == 9);
    CHECK_THROWS_AS((void)estimated_degrees_of_freedom(0), ValidationError);
}
