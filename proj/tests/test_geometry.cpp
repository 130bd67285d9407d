#include "chac/geometry.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace chac;
using chac::testing::vec;

namespace {

Rect random_rect(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    Eigen::ArrayXd lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double a = d(rng), b = d(rng);
        lo[i] = std::min(a, b);
        hi[i] = std::max(a, b);
    }
    return Rect(lo, hi);
}

} // namespace

TEST_CASE("contains_point") {
    Rect r{{0, 10}, {-1, 1}};
    CHECK(contains_point(r, vec({5, 0})));
    CHECK(contains_point(Rect{{0, 10}}, vec({10})));  // closed boundary
    CHECK_FALSE(contains_point(r, vec({11, 0})));
    CHECK(contains_point(Rect::singular(vec({50, 0, 15})), vec({50, 0, 15})));
    CHECK_THROWS_AS(contains_point(r, vec({1, 2, 3})), input_error);
}

TEST_CASE("box_hull basics") {
    CHECK(box_hull({Rect{{1, 2}}}) == Rect{{1, 2}});  // singleton identity
    CHECK(box_hull(Rect{{1, 2}}, Rect{{3, 4}}) == Rect{{1, 4}});
    // hull of the three initial aircraft dynamics
    std::vector<Rect> solves{Rect::singular(vec({1, 0, 1})), Rect::singular(vec({100, 0, 30})),
                             Rect::singular(vec({50, 0, 15}))};
    CHECK(box_hull(solves) == Rect{{1, 100}, {0, 0}, {1, 30}});
    CHECK_THROWS_AS(box_hull(std::vector<Rect>{}), input_error);
    CHECK_THROWS_AS(box_hull(Rect{{0, 1}}, Rect{{0, 1}, {0, 1}}), input_error);
}

TEST_CASE("full rectangle") {
    Rect f1 = Rect::full(1);
    CHECK(contains_point(f1, vec({1e9})));
    CHECK(box_hull(Rect::full(2), Rect{{0, 1}, {0, 1}}) == Rect::full(2));
    CHECK_THROWS_AS(Rect::full(0), input_error);
    // a vacuous guard never blocks
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 100; ++i)
        CHECK(contains_point(Rect::full(3), vec({d(rng), d(rng), d(rng)})));
}

TEST_CASE("scale_translate") {
    CHECK(scale_translate(Rect{{1, 2}}, vec({0}), 1) == Rect{{1, 2}});
    CHECK(scale_translate(Rect::singular(vec({50, 0, 15})), vec({0, 0, 0}), 20) ==
          Rect::singular(vec({1000, 0, 300})));
    Rect r{{-3, 8}};
    CHECK(scale_translate(r, vec({42}), 0) == Rect::singular(vec({42})));
    CHECK(scale_translate(Rect::full(1), vec({42}), 0) == Rect::singular(vec({42})));
    CHECK_THROWS_AS(scale_translate(r, vec({0}), -1), input_error);
}

TEST_CASE("subset") {
    CHECK(subset(Rect{{1, 2}}, Rect{{0, 3}}));
    CHECK(subset(Rect{{1, 2}}, Rect{{1, 2}}));
    CHECK_FALSE(subset(Rect::full(1), Rect{{0, 1}}));
    CHECK(subset(Rect{{0, 1}}, Rect::full(1)));
}

TEST_CASE("interval invariant") {
    CHECK_THROWS_AS((Rect{{2, 1}}), input_error);
    Eigen::ArrayXd lo(1), hi(2);
    lo << 0;
    hi << 1, 2;
    CHECK_THROWS_AS(Rect(lo, hi), input_error);
}

TEST_CASE("hull is the least upper bound of the subset order") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
        Rect a = random_rect(rng, n), b = random_rect(rng, n), c = random_rect(rng, n);

        // commutative, associative, idempotent; computed against a direct
        // min/max oracle on the raw bounds
        Rect h = box_hull(a, b);
        CHECK(h == box_hull(b, a));
        CHECK(box_hull(box_hull(a, b), c) == box_hull(a, box_hull(b, c)));
        CHECK(box_hull(a, a) == a);
        for (Eigen::Index d = 0; d < n; ++d) {
            CHECK(h.lo()[d] == std::min(a.lo()[d], b.lo()[d]));
            CHECK(h.hi()[d] == std::max(a.hi()[d], b.hi()[d]));
        }

        CHECK(subset(a, h));
        CHECK(subset(b, h));
        // least: any other upper bound contains the hull
        Rect upper = box_hull(h, c);
        CHECK(subset(h, upper));

        // partial order: reflexive, antisymmetric, transitive
        CHECK(subset(a, a));
        if (subset(a, b) && subset(b, a))
            CHECK(a == b);
        if (subset(a, b) && subset(b, c))
            CHECK(subset(a, c));
    }
}

TEST_CASE("points moved by a sampled flow stay in the scaled rectangle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> delta_dist(0.0, 10.0);
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 4);
        Rect r = random_rect(rng, n);
        Vec x(n), f(n);
        for (Eigen::Index d = 0; d < n; ++d) {
            std::uniform_real_distribution<double> fd(r.lo()[d], r.hi()[d]);
            f[d] = fd(rng);
            x[d] = delta_dist(rng) - 5.0;
        }
        double delta = delta_dist(rng);
        CHECK(contains_point(scale_translate(r, x, delta), x + delta * f));
    }
}

TEST_CASE("inflate widens both ends") {
    Rect r{{0, 1}};
    CHECK(inflate(r, 0) == r);
    CHECK(inflate(r, 0.5) == Rect{{-0.5, 1.5}});
    CHECK(inflate(Rect::full(1), 1) == Rect::full(1));
    CHECK_THROWS_AS(inflate(r, -1), input_error);
}
