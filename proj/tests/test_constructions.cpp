#include <doctest.h>

#include <cmath>

#include <ionet/constructions.hpp>
#include <ionet/missing.hpp>
#include <ionet/random_instances.hpp>

using namespace ionet;

namespace {

double closed_form_dev(const NamedConstruction &c, double alpha) {
    const Vec v = influence_direct(c.w, LaborShare(alpha)).v;
    return (v - c.closed_form(alpha)).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("every closed form matches the direct solver") {
    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        CHECK(closed_form_dev(figure1(), a) <= 1e-10);
        const auto [wc, uc] = lower_bound_pair(7, 0.2);
        CHECK(closed_form_dev(wc, a) <= 1e-10);
        CHECK(closed_form_dev(uc, a) <= 1e-10);
        CHECK(closed_form_dev(star(6), a) <= 1e-10);
        CHECK(closed_form_dev(two_hub(6), a) <= 1e-10);
        const auto [g, h] = firm_share_pair(9, 0.3);
        CHECK(closed_form_dev(g, a) <= 1e-10);
        CHECK(closed_form_dev(h, a) <= 1e-10);
        const NamedConstruction loc = locality_chain(12, 1e-8);
        CHECK(closed_form_dev(loc, a) <= loc.closed_form_tol);
        const NamedConstruction trunc = locality_truncated(12, 5, 1e-8);
        CHECK(closed_form_dev(trunc, a) <= trunc.closed_form_tol);
    }
}

TEST_CASE("figure1 coefficients sum to one for any alpha") {
    const NamedConstruction c = figure1();
    for (double a : {0.05, 0.37, 0.93})
        CHECK(c.closed_form(a).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("worst-case pair closed forms") {
    SUBCASE("x at n=4, alpha=0.5, delta=0.1") {
        CHECK(lower_bound_x(4, 0.1, 0.5) == doctest::Approx(0.35625).epsilon(1e-15));
    }
    SUBCASE("delta=0 collapses the pair") {
        const auto [wc, uc] = lower_bound_pair(5, 0.0);
        CHECK((wc.w.entries() - uc.w.entries()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("coordinate moves match the closed-form gap") {
        for (long n : {4L, 10L, 50L})
            for (double d : {0.01, 0.1, 0.3})
                for (double a : {0.1, 0.5, 0.9}) {
                    const auto [wc, uc] = lower_bound_pair(n, d);
                    const Vec vw = influence_direct(wc.w, LaborShare(a)).v;
                    const Vec vu = influence_direct(uc.w, LaborShare(a)).v;
                    const double gap = lower_bound_gap(n, d, a);
                    CHECK(vw(0) - vu(0) == doctest::Approx(-gap).epsilon(1e-10));
                    CHECK(vw(1) - vu(1) == doctest::Approx(gap).epsilon(1e-10));
                }
    }
    SUBCASE("the 1-norm gap stays below the missing-share bound") {
        for (long n : {4L, 12L})
            for (double d : {0.05, 0.25})
                for (double a : {0.2, 0.6}) {
                    CHECK(2.0 * lower_bound_gap(n, d, a) <=
                          delta_share_bound(LaborShare(a), d));
                }
    }
}

TEST_CASE("hub-and-spoke attains the maximum coefficient") {
    SUBCASE("n=4 closed form") {
        CHECK(star_max_coefficient(4, 0.5) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
    }
    SUBCASE("large-n limit") {
        for (double a : {0.2, 0.5, 0.8})
            CHECK(star_max_coefficient(100000, a) ==
                  doctest::Approx((1.0 - a) / (2.0 - a)).epsilon(1e-4));
    }
    SUBCASE("random networks never beat the hub") {
        Rng rng(61);
        for (int t = 0; t < 500; ++t) {
            const long n = rng.uniform_int(3, 9);
            const IoMatrix w = random_io_matrix(rng, n);
            const double a = rng.uniform(0.1, 0.9);
            const Vec v = influence_direct(w, LaborShare(a)).v;
            CHECK(v.maxCoeff() <= star_max_coefficient(n, a) + 1e-9);
        }
    }
}

TEST_CASE("two-hub attains both extremes") {
    for (long n : {3L, 6L, 12L})
        for (double a : {0.1, 0.5, 0.9}) {
            const Vec v = influence_direct(two_hub(n).w, LaborShare(a)).v;
            CHECK(std::abs(v(0) - star_max_coefficient(n, a)) <= 1e-12);
            CHECK(std::abs(v(n - 1) - a / static_cast<double>(n)) <= 1e-12);
            CHECK(v(0) + v(1) + static_cast<double>(n - 2) * v(n - 1) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("firm-share pair walks the top coefficient across firms") {
    const long n = 200;
    const double eps = 1e-6;
    const auto [g, h] = firm_share_pair(n, eps);
    for (double a : {0.25, 0.5}) {
        const Vec vg = influence_direct(g.w, LaborShare(a)).v;
        const Vec vh = influence_direct(h.w, LaborShare(a)).v;
        const double lim = (1.0 - a) / (2.0 - a);
        CHECK(std::abs(vg(0) - lim) <= 0.02);
        CHECK(std::abs(vh(1) - lim) <= 0.02);
        CHECK(vec_p_norm(vg - vh, 1.0) >= 2.0 * lim - 0.05);
    }
}

TEST_CASE("observed firm-share network is the swapped observed pair") {
    const long n = 8;
    const auto [g, h] = firm_share_pair(n, 0.2);
    const auto [wc, uc] = lower_bound_pair(n, 0.0);
    Matrix swapped = uc.w.entries();
    swapped.row(0).swap(swapped.row(1));
    swapped.col(0).swap(swapped.col(1));
    CHECK((h.w.entries() - swapped).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("chain-with-feedback closed form") {
    SUBCASE("matches the solver at b=1e-8") {
        const NamedConstruction g = locality_chain(20, 1e-8);
        const Vec v = influence_direct(g.w, LaborShare(0.5)).v;
        CHECK((v - locality_closed_form(20, 0.5)).cwiseAbs().maxCoeff() <= 1e-5);
    }
    SUBCASE("coefficients live inside [a/n, 1/(a n)]") {
        for (long n : {5L, 20L, 100L})
            for (double a : {0.1, 0.5, 0.9}) {
                const Vec p = locality_closed_form(n, a);
                CHECK(p.minCoeff() >= a / static_cast<double>(n) - 1e-12);
                CHECK(p.maxCoeff() <= 1.0 / (a * static_cast<double>(n)) + 1e-12);
                CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-10));
            }
    }
    SUBCASE("truncation keeps a large influence gap") {
        const long n = 100, k = 10;
        const double a = 0.5, b = 1e-8;
        const Vec vg = influence_direct(locality_chain(n, b).w, LaborShare(a)).v;
        const Vec vh = influence_direct(locality_truncated(n, k, b).w, LaborShare(a)).v;
        const double l1 = vec_p_norm(vg - pad_truncated(vh, n), 1.0);
        const double rhs = static_cast<double>(n - k - 1) * a / static_cast<double>(n) +
                           static_cast<double>(k + 1) *
                               (a / static_cast<double>(k + 1) -
                                1.0 / (a * static_cast<double>(n)));
        CHECK(l1 >= 0.9 * rhs);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(locality_chain(3, 1e-8), Error);
        CHECK_THROWS_AS(locality_truncated(10, 0, 1e-8), Error);
        CHECK_THROWS_AS(locality_truncated(10, 9, 1e-8), Error);
    }
}

TEST_CASE("padding prepends zeros") {
    Vec v(2);
    v << 0.25, 0.75;
    const Vec padded = pad_truncated(v, 5);
    CHECK(padded.size() == 5);
    CHECK(padded(0) == 0.0);
    CHECK(padded(3) == 0.25);
    CHECK(padded(4) == 0.75);
}
