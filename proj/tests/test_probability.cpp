#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "qmp/errors.hpp"
#include "qmp/probability.hpp"

using namespace qmp;

TEST_CASE("bad-measurement probability at the worked instance") {
    CHECK(p_bad(1024, 5) == doctest::Approx(0.00506304389).epsilon(1e-8));
    CHECK(p_bad_at(1024, 5, 11) == doctest::Approx(0.00141973825).epsilon(1e-8));
}

TEST_CASE("integer-iteration form complements the success probability exactly") {
    for (uint64_t N : {64u, 256u, 1024u}) {
        for (uint64_t m : {uint64_t(1), uint64_t(5), N / 4, N / 2}) {
            for (int i = 0; i <= 20; ++i) {
                CHECK(std::fabs(p_bad_at(N, m, i) -
                                (1.0 - success_probability(N, m, double(i)))) < 1e-12);
            }
        }
    }
}

TEST_CASE("finite form matches the fraction limit identically") {
    for (uint64_t N : {64u, 256u, 4096u}) {
        for (uint64_t m = 1; m < N; m += N / 8) {
            CHECK(std::fabs(p_bad(N, m) - p_bad_limit(double(m) / double(N))) < 1e-12);
        }
    }
}

TEST_CASE("domain policy") {
    CHECK(success_probability(1024, 0, 3.0) == 0.0);
    CHECK(p_bad(1024, 0) == 1.0);
    CHECK_THROWS_AS(success_probability(8, 9, 1.0), DomainError);
    CHECK_THROWS_AS(success_probability(0, 0, 1.0), DomainError);
    CHECK_THROWS_AS(p_bad_limit(0.0), DomainError);
    CHECK_THROWS_AS(p_bad_limit(1.5), DomainError);
}

TEST_CASE("all probabilities are clamped into the unit interval") {
    for (double r = 0.001; r < 1.0; r += 0.0007) {
        const double pb = p_bad_limit(r);
        CHECK(pb >= 0.0);
        CHECK(pb <= 1.0);
        const double tree = p_any_bad_tree(r, 11);
        CHECK(tree >= 0.0);
        CHECK(tree <= 1.0);
    }
    for (uint64_t m = 0; m <= 256; m += 3) {
        const double pb = p_bad(256, m);
        CHECK(pb >= 0.0);
        CHECK(pb <= 1.0);
    }
}

TEST_CASE("bad probability grows with the solution fraction on the fit domain") {
    double prev = p_bad_limit(kLinearDomainLo);
    for (double x = kLinearDomainLo + 1e-3; x <= kLinearDomainHi + 1e-12; x += 1e-3) {
        const double cur = p_bad_limit(x);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

TEST_CASE("compound tree and path forms") {
    CHECK(p_any_bad_tree(0.3, 0) == 0.0);
    CHECK(p_any_bad_tree(0.3, 1) == doctest::Approx(p_bad_limit(0.3)).epsilon(1e-12));
    const double pb = p_bad_limit(0.42);
    CHECK(p_any_bad_tree(0.42, 7) ==
          doctest::Approx(1.0 - std::pow(1.0 - pb, 7)).epsilon(1e-12));
    CHECK(p_any_bad_path(0.42, 7) ==
          doctest::Approx(p_any_bad_tree(0.42, 7)).epsilon(1e-12));
}

TEST_CASE("oracle error rates fold into the good-state probability") {
    const OracleErrorRates clean{0.0, 0.0};
    CHECK(p_good_with_errors(1024, 5, clean) ==
          doctest::Approx(1.0 - p_bad(1024, 5)).epsilon(1e-12));
    const OracleErrorRates noisy{0.2, 0.1};
    // (-1 + q + v) P(E) + 1 - q with P(E) = p_bad
    const double pe = p_bad(1024, 5);
    CHECK(p_good_with_errors(1024, 5, noisy) ==
          doctest::Approx((-1.0 + 0.2 + 0.1) * pe + 1.0 - 0.2).epsilon(1e-12));
    CHECK(p_good_limit(0.3, clean) == doctest::Approx(1.0 - p_bad_limit(0.3)).epsilon(1e-12));
    const double g = p_good_limit(0.3, noisy);
    CHECK(p_any_bad_tree_err(0.3, 4, noisy) ==
          doctest::Approx(1.0 - std::pow(g, 4)).epsilon(1e-12));
}

TEST_CASE("linear surrogate evaluates the published line") {
    CHECK(linear_approx_pbad(0.6) == doctest::Approx(1.251 * 0.6 - 0.0159).epsilon(1e-12));
    CHECK(linear_approx_in_domain(0.04));
    CHECK(linear_approx_in_domain(0.75));
    CHECK_FALSE(linear_approx_in_domain(0.039));
    CHECK_FALSE(linear_approx_in_domain(0.751));
}

TEST_CASE("linear surrogate worst-case gap on the fit domain") {
    // the line is a least-squares surrogate, not a uniform bound; its
    // worst-case absolute gap against the closed form sits near x = 0.6
    double sup = 0.0, arg = 0.0;
    for (double x = kLinearDomainLo; x <= kLinearDomainHi + 1e-12; x += 1e-3) {
        const double gap = std::fabs(linear_approx_pbad(x) - p_bad_limit(x));
        if (gap > sup) {
            sup = gap;
            arg = x;
        }
    }
    CHECK(sup == doctest::Approx(0.069334).epsilon(1e-4));
    CHECK(arg == doctest::Approx(0.607).epsilon(0.02));
}
