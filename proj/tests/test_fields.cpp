#include <doctest.h>

#include <cmath>

#include "fvgrad/fields.hpp"
#include "fvgrad/grid_gen.hpp"
#include "fvgrad/poisson.hpp"
#include "fvgrad/rng.hpp"

using namespace fvgrad;

TEST_CASE("sampling hits cell and boundary-face centres exactly") {
    const Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
    const ScalarField lin = sample(AnalyticField::linear(0, 1, 0), m);
    CHECK(lin.cell[0] == doctest::Approx(0.5).epsilon(1e-14));

    const AnalyticField t2 = AnalyticField::tanh2d();
    CHECK(t2.value({0.0, 0.37}) == 0.0);
    CHECK(t2.value({1.3, 0.0}) == 0.0);

    const AnalyticField s2 = AnalyticField::sin2d();
    CHECK(s2.value({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exact gradients") {
    const AnalyticField t2 = AnalyticField::tanh2d();
    const Vec2 p{0.3, 0.8};
    const double tx = std::tanh(p.x), ty = std::tanh(p.y);
    CHECK(t2.gradient(p).x == doctest::Approx((1 - tx * tx) * ty).epsilon(1e-14));
    CHECK(t2.gradient(p).y == doctest::Approx((1 - ty * ty) * tx).epsilon(1e-14));

    const AnalyticField lin = AnalyticField::linear(2, 3, -4);
    CHECK(lin.gradient({5, 7}).x == 3.0);
    CHECK(lin.gradient({5, 7}).y == -4.0);

    const AnalyticField quad = AnalyticField::quadratic(0, 0, 0, 1, 0, 1); // x^2 + y^2
    CHECK(quad.gradient({1, 2}).x == doctest::Approx(2.0));
    CHECK(quad.gradient({1, 2}).y == doctest::Approx(4.0));
}

TEST_CASE("analytic gradients match central differences at random points") {
    const double step = 1e-6;
    SplitMix64 rng(2024);
    for (const AnalyticField& f :
         {AnalyticField::tanh2d(), AnalyticField::sin2d(), AnalyticField::tanh1d(),
          AnalyticField::linear(0.3, -1.2, 2.5), AnalyticField::quadratic(1, 2, 3, -1, 0.5, 2)}) {
        for (int i = 0; i < 100; ++i) {
            const Vec2 p{rng.next_double() * 2.0 - 0.5, rng.next_double() * 2.0 - 0.5};
            const double gx =
                (f.value({p.x + step, p.y}) - f.value({p.x - step, p.y})) / (2 * step);
            const double gy =
                (f.value({p.x, p.y + step}) - f.value({p.x, p.y - step})) / (2 * step);
            const Vec2 g = f.gradient(p);
            const double scale = std::max(1.0, norm(g));
            CHECK(std::abs(g.x - gx) <= 1e-8 * scale);
            CHECK(std::abs(g.y - gy) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("manufactured sources satisfy -k lap(exact) = b") {
    const double step = 1e-4;
    SplitMix64 rng(7);
    for (const PoissonProblem& prob : {PoissonProblem::tanh_problem(), PoissonProblem::sin_problem(),
                                       PoissonProblem::linear_problem(0.2, 1.0, -0.4)}) {
        for (int i = 0; i < 50; ++i) {
            const Vec2 p{0.05 + 0.9 * rng.next_double(), 0.05 + 0.9 * rng.next_double()};
            const double lap = (prob.exact.value({p.x + step, p.y}) +
                                prob.exact.value({p.x - step, p.y}) +
                                prob.exact.value({p.x, p.y + step}) +
                                prob.exact.value({p.x, p.y - step}) -
                                4.0 * prob.exact.value(p)) /
                               (step * step);
            CHECK(std::abs(-prob.conductivity * lap - prob.source(p)) <= 1e-6);
        }
    }
}
