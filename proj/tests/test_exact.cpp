#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfspin/errors.hpp"
#include "mfspin/exact.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/rng.hpp"
#include "mfspin/stats.hpp"

using namespace mfspin;

namespace {

double prob_sum(const MagnetizationDistribution& d) {
    CompensatedSum s;
    for (double p : d.probabilities) s.add(p);
    return s.value();
}

} // namespace

TEST_CASE("single spin: coupling term is constant, distribution is Bernoulli(tanh h)") {
    {
        const auto d = cw_distribution(CwParams{1, 0.6, 0.0});
        REQUIRE(d.cell_count() == 2);
        CHECK(d.probabilities[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(d.probabilities[1] == doctest::Approx(0.5).epsilon(1e-14));
    }
    {
        const auto mom = exact_moments(cw_distribution(CwParams{1, 0.6, 0.2}));
        CHECK(mom.mean[0] == doctest::Approx(std::tanh(0.2)).epsilon(1e-14));
        const double var = 1.0 - std::tanh(0.2) * std::tanh(0.2);
        CHECK(mom.finite_size_chi[0][0] == doctest::Approx(var).epsilon(1e-13));
    }
}

TEST_CASE("two free spins: counting measure {1/4, 1/2, 1/4}") {
    // J must be positive for validation; Jm^2 terms scale out at J -> small?  No:
    // use the closed form instead.  At N=2 the weights are binom * exp(J m^2),
    // so J = ln 2 makes all three cells equally likely.
    const auto d = cw_distribution(CwParams{2, std::log(2.0), 0.0});
    REQUIRE(d.cell_count() == 3);
    for (double p : d.probabilities) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("independent spins at J -> 0+: product Bernoulli, any N") {
    // diagonal coupling must be positive, so approach the free case with a
    // negligible J and compare against the iid closed form
    const std::int64_t n = 37;
    const double h = 0.1;
    const auto mom = exact_moments(cw_distribution(CwParams{n, 1e-13, h}));
    CHECK(mom.mean[0] == doctest::Approx(std::tanh(h)).epsilon(1e-11));
    CHECK(mom.finite_size_chi[0][0] ==
          doctest::Approx(1.0 - std::tanh(h) * std::tanh(h)).epsilon(1e-10));
}

TEST_CASE("probabilities normalize, including a million-cell grid") {
    CHECK(prob_sum(cw_distribution(CwParams{10, 1.2, 0.3})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prob_sum(cw_distribution(CwParams{1000000, 0.6, 0.1})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    MsParams p{{60, 40}, {{1.2, 0.98}, {0.98, 0.8}}, {0.1, 0.2}};
    CHECK(prob_sum(ms_distribution(p)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cell order is lexicographic with the last group fastest") {
    MsParams p{{2, 1}, {{1.0, 0.1}, {0.1, 1.0}}, {0.0, 0.0}};
    const auto d = ms_distribution(p);
    REQUIRE(d.cell_count() == 6);
    CellCursor cur(d);
    std::vector<std::vector<std::int64_t>> seen;
    do {
        seen.push_back(cur.counts());
    } while (cur.advance());
    REQUIRE(seen.size() == 6);
    CHECK(seen[0] == std::vector<std::int64_t>{0, 0});
    CHECK(seen[1] == std::vector<std::int64_t>{0, 1});
    CHECK(seen[2] == std::vector<std::int64_t>{1, 0});
    CHECK(seen[5] == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("spin-flip symmetry at h = 0") {
    {
        const auto d = cw_distribution(CwParams{9, 1.3, 0.0});
        for (std::size_t c = 0; c < d.cell_count(); ++c)
            CHECK(d.probabilities[c] ==
                  doctest::Approx(d.probabilities[d.cell_count() - 1 - c]).epsilon(1e-13));
        const auto mom = exact_moments(d);
        CHECK(std::abs(mom.mean[0]) < 1e-14);
    }
    {
        MsParams p{{4, 5}, {{1.1, -0.4}, {-0.4, 0.9}}, {0.0, 0.0}};
        const auto d = ms_distribution(p);
        const auto mom = exact_moments(d);
        CHECK(std::abs(mom.mean[0]) < 1e-14);
        CHECK(std::abs(mom.mean[1]) < 1e-14);
        // P(c1, c2) = P(N1-c1, N2-c2); cells are lexicographic so the flip is a
        // full reversal of the flattened array
        for (std::size_t c = 0; c < d.cell_count(); ++c)
            CHECK(d.probabilities[c] ==
                  doctest::Approx(d.probabilities[d.cell_count() - 1 - c]).epsilon(1e-13));
    }
}

TEST_CASE("finite-size susceptibility: positive diagonal and weighted symmetry") {
    MsParams p{{30, 70}, {{1.2, 0.98}, {0.98, 0.8}}, {0.1, 0.2}};
    const auto mom = exact_moments(ms_distribution(p));
    const FractionVector alpha = fractions_of(p);
    CHECK(mom.finite_size_chi[0][0] > 0.0);
    CHECK(mom.finite_size_chi[1][1] > 0.0);
    CHECK(alpha[0] * mom.finite_size_chi[0][1] ==
          doctest::Approx(alpha[1] * mom.finite_size_chi[1][0]).epsilon(1e-10));
    // second moments must be consistent with mean and covariance
    const double n2 = static_cast<double>(p.group_sizes[1]);
    const double cov = mom.finite_size_chi[0][1] / n2;
    CHECK(mom.second[0][1] == doctest::Approx(cov + mom.mean[0] * mom.mean[1]).epsilon(1e-12));
}

TEST_CASE("frozen moments at N=6, J=1.2, h=0.3") {
    const auto mom = exact_moments(cw_distribution(CwParams{6, 1.2, 0.3}));
    CHECK(mom.mean[0] == doctest::Approx(0.697487946908171).epsilon(1e-13));
    CHECK(mom.finite_size_chi[0][0] == doctest::Approx(1.2147700839526672).epsilon(1e-13));
}

TEST_CASE("zero cross-coupling factorizes the joint distribution") {
    // with J_12 = 0 the groups decouple into scalar models with coupling
    // alpha_l J_ll and the same fields
    MsParams joint{{4, 3}, {{1.0, 0.0}, {0.0, 0.8}}, {0.1, -0.2}};
    const auto d = ms_distribution(joint);
    const double a1 = 4.0 / 7.0, a2 = 3.0 / 7.0;
    const auto d1 = cw_distribution(CwParams{4, a1 * 1.0, 0.1});
    const auto d2 = cw_distribution(CwParams{3, a2 * 0.8, -0.2});
    for (std::size_t c1 = 0; c1 <= 4; ++c1)
        for (std::size_t c2 = 0; c2 <= 3; ++c2)
            CHECK(d.probabilities[c1 * 4 + c2] ==
                  doctest::Approx(d1.probabilities[c1] * d2.probabilities[c2])
                      .epsilon(1e-12));
}

TEST_CASE("agrees with literal configuration enumeration on random small systems") {
    std::uint64_t ctr = 0;
    const std::uint64_t seed = 20240817;
    const auto u = [&] { return uniform_at(seed, ctr++); };
    for (int trial = 0; trial < 8; ++trial) {
        MsParams p;
        if (trial % 2 == 0) {
            p.group_sizes = {1 + static_cast<std::int64_t>(u() * 10.0)};
            p.coupling_matrix = {{0.3 + u()}};
            p.field_vector = {(u() - 0.5)};
        } else {
            const std::int64_t n1 = 1 + static_cast<std::int64_t>(u() * 5.0);
            const std::int64_t n2 = 1 + static_cast<std::int64_t>(u() * 4.0);
            p.group_sizes = {n1, n2};
            const double j12 = 2.0 * u() - 1.0;
            p.coupling_matrix = {{0.3 + u(), j12}, {j12, 0.3 + u()}};
            p.field_vector = {u() - 0.5, u() - 0.5};
        }
        const auto fast = exact_moments(ms_distribution(p));
        const auto slow = brute_force_moments(p);
        CHECK(max_abs_diff(fast.mean, slow.mean) < 1e-10);
        CHECK(max_abs_diff(fast.second, slow.second) < 1e-10);
        CHECK(max_abs_diff(fast.finite_size_chi, slow.finite_size_chi) < 1e-10);
    }
}

TEST_CASE("finite-size moments approach the mean-field limit monotonically (small grid)") {
    const MeanFieldSolution sol = unique_stable_solution({1.0}, {{0.6}}, {0.1});
    const double m_inf = sol.magnetization[0];
    double prev_m = -2.0;
    for (std::int64_t n : {100, 200, 500}) {
        const auto mom = exact_moments(cw_distribution(CwParams{n, 0.6, 0.1}));
        CHECK(mom.mean[0] > prev_m);
        CHECK(mom.mean[0] < m_inf); // approaches the limit from below here
        prev_m = mom.mean[0];
    }
}

TEST_CASE("well restriction is the identity when a single stable solution exists") {
    const auto d = cw_distribution(CwParams{50, 0.6, 0.1});
    const MeanFieldSolution sol = unique_stable_solution({1.0}, {{0.6}}, {0.1});
    const auto r = restrict_to_well(d, sol);
    REQUIRE(r.cell_count() == d.cell_count());
    for (std::size_t c = 0; c < d.cell_count(); ++c)
        CHECK(r.probabilities[c] == doctest::Approx(d.probabilities[c]).epsilon(1e-14));
}

TEST_CASE("well restriction splits the symmetric double well") {
    const auto d = cw_distribution(CwParams{8, 1.5, 0.0});
    const auto sols = solve_cw(1.5, 0.0);
    REQUIRE(sols.size() == 3);
    const auto pos = restrict_to_well(d, sols[2]);
    const auto neg = restrict_to_well(d, sols[0]);
    CHECK(prob_sum(pos) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(prob_sum(neg) == doctest::Approx(1.0).epsilon(1e-13));
    const auto pm = exact_moments(pos);
    const auto nm = exact_moments(neg);
    // the m = 0 cell joins the positive well by the tie rule, so the negative
    // well's conditional mean is NOT the mirror of the positive one
    CHECK(pm.mean[0] == doctest::Approx(0.7240159179969862).epsilon(1e-12));
    CHECK(nm.mean[0] == doctest::Approx(-0.7840511252942535).epsilon(1e-12));
    // the wells partition the lattice: every cell lands in exactly one
    for (std::size_t c = 0; c < d.cell_count(); ++c) {
        const bool in_pos = pos.probabilities[c] > 0.0;
        const bool in_neg = neg.probabilities[c] > 0.0;
        CHECK(in_pos != in_neg);
    }
}

TEST_CASE("well restriction rejects non-solutions and unstable points") {
    const auto d = cw_distribution(CwParams{8, 1.5, 0.0});
    const auto sols = solve_cw(1.5, 0.0);
    CHECK_THROWS_AS((void)restrict_to_well(d, sols[1]), ValidationError); // unstable
    MeanFieldSolution fake = sols[2];
    fake.magnetization = {0.5}; // not a fixed point
    CHECK_THROWS_AS((void)restrict_to_well(d, fake), ValidationError);
}

TEST_CASE("cell budget guards the grid size") {
    CHECK_THROWS_AS((void)cw_distribution(CwParams{200000000, 0.6, 0.1}), ResourceError);
    MsParams p{{100000, 100000}, {{1.0, 0.1}, {0.1, 1.0}}, {0.0, 0.0}};
    CHECK_THROWS_AS((void)ms_distribution(p), ResourceError);
}

TEST_CASE("configuration enumeration refuses systems past 20 spins") {
    CHECK_THROWS_AS((void)brute_force_moments(CwParams{21, 0.6, 0.1}), ResourceError);
    MsParams p{{11, 10}, {{1.0, 0.1}, {0.1, 1.0}}, {0.0, 0.0}};
    CHECK_THROWS_AS((void)brute_force_moments(p), ResourceError);
    CHECK_NOTHROW((void)brute_force_moments(CwParams{20, 0.6, 0.1}));
}
