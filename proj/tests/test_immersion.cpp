#include "lightcone/catalog.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

using namespace lightcone;
using Catch::Matchers::WithinAbs;

namespace {

Point random_point(std::mt19937& rng, const ParamChart& chart, double inset) {
    Point u(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) {
        const Axis a = chart.sampling_axis(i);
        std::uniform_real_distribution<double> ud(a.lo + inset, a.hi - inset);
        u[i] = ud(rng);
    }
    return u;
}

double max_diff(const MinkVector& a, const MinkVector& b) { return (a.coords() - b.coords()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("catalog lists the built-in models with metadata") {
    const auto models = builtin_catalog();
    REQUIRE(models.size() >= 7);
    for (const auto& m : models) {
        INFO(m.name);
        CHECK(m.ambient_dim == m.intrinsic_dim + m.codim());
        if (m.closed) {
            CHECK(m.euler_characteristic.has_value());
            CHECK(m.morse_number.has_value());
            CHECK(*m.morse_number >= 2);
        }
        CHECK_NOTHROW(m.covering_chart());
    }
}

TEST_CASE("make_model rejects unknown models and parameters") {
    CHECK_THROWS_AS(make_model("no-such-model"), std::invalid_argument);
    CHECK_THROWS_AS(make_model("torus", {{"q", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("torus", {{"R", 0.5}, {"r", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("euclid-sphere", {{"r", -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("bumpy-sphere", {{"eps", 1.5}}), std::invalid_argument);
    CHECK(make_model("torus", {{"R", 3.0}}).params.at("R") == 3.0);
    CHECK(make_model("torus", {{"R", 3.0}}).params.at("r") == 1.0);
}

TEST_CASE("analytic jets agree with central differences of the position map") {
    std::mt19937 rng(3);
    for (const auto& m : builtin_catalog()) {
        for (int ci = 0; ci < static_cast<int>(m.charts.size()); ++ci) {
            for (int t = 0; t < 25; ++t) {
                const Point u = random_point(rng, m.chart(ci), 1e-3);
                const Jet2 a = evaluate_jet(m, ci, u);
                const Jet2 f = finite_difference_jet(m, ci, u, 1e-4);
                INFO(m.name << " chart " << ci);
                CHECK(max_diff(a.position(), f.position()) == 0.0);
                for (int i = 0; i < m.intrinsic_dim; ++i) {
                    CHECK(max_diff(a.du(i), f.du(i)) < 1e-6);
                    for (int j = i; j < m.intrinsic_dim; ++j) CHECK(max_diff(a.duu(i, j), f.duu(i, j)) < 1e-5);
                }
            }
        }
    }
}

TEST_CASE("round sphere position and second chart") {
    const auto m = make_model("euclid-sphere", {{"r", 2.0}});
    const Jet2 j = evaluate_jet(m, 0, Point{{0.3, 1.1}});
    CHECK_THAT(j.position()[3], WithinAbs(2.0 * std::cos(0.3), 1e-15));
    CHECK(j.position()[0] == 0.0);
    // the rotated chart reaches the poles of the first one
    const Jet2 pole = evaluate_jet(m, 1, Point{{std::numbers::pi / 2, std::numbers::pi / 2}});
    CHECK_THAT(pole.position()[3], WithinAbs(2.0, 1e-15));
    CHECK_THAT(pole.position()[1], WithinAbs(0.0, 1e-15));
}

TEST_CASE("torus position at the outer equator") {
    const auto m = make_model("torus");
    const Jet2 j = evaluate_jet(m, 0, Point{{0.0, 0.0}});
    CHECK(j.position()[1] == 3.0);
    CHECK(j.position()[3] == 0.0);
}

TEST_CASE("hyperbolic curve lies on the hyperboloid") {
    const auto m = make_model("hyperbolic-curve");
    for (double t = 0.0; t < 6.28; t += 0.1) {
        const Jet2 j = evaluate_jet(m, 0, Point::Constant(1, t));
        CHECK_THAT(pseudo_dot(j.position(), j.position()), WithinAbs(-1.0, 1e-13));
        CHECK(pseudo_dot(j.du(0), j.du(0)) > 0.0);
    }
}

TEST_CASE("lightcone sphere lies on the lightcone") {
    const auto m = make_model("lightcone-sphere", {{"r", 1.5}});
    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        const Jet2 j = evaluate_jet(m, 0, random_point(rng, m.chart(0), 0.0));
        CHECK(causal_class(j.position()) == CausalClass::Lightlike);
    }
}

TEST_CASE("parameter points are wrapped or rejected") {
    const auto m = make_model("euclid-sphere");
    const Point w = normalize_point(m.chart(0), Point{{1.0, 2.0 * std::numbers::pi + 0.5}});
    CHECK_THAT(w[1], WithinAbs(0.5, 1e-14));
    const Point neg = normalize_point(m.chart(0), Point{{1.0, -0.5}});
    CHECK_THAT(neg[1], WithinAbs(2.0 * std::numbers::pi - 0.5, 1e-14));
    CHECK_THROWS_AS(normalize_point(m.chart(0), Point{{-0.1, 0.0}}), std::domain_error);
    CHECK_THROWS_AS(normalize_point(m.chart(0), Point{{std::nan(""), 0.0}}), std::domain_error);
    CHECK_THROWS_AS(normalize_point(m.chart(0), Point::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(m.chart(2), std::out_of_range);
}

TEST_CASE("finite-difference jets refuse points near the boundary") {
    const auto m = make_model("euclid-sphere");
    CHECK_THROWS_AS(finite_difference_jet(m, 0, Point{{1e-5, 0.0}}, 1e-4), std::domain_error);
    CHECK_THROWS_AS(finite_difference_jet(m, 0, Point{{1.0, 0.0}}, -1.0), std::invalid_argument);
    CHECK_NOTHROW(finite_difference_jet(m, 0, Point{{1.0, 0.0}}, 1e-4));
}

TEST_CASE("evaluate_jet rejects non-spacelike tangents") {
    SubmanifoldModel m;
    m.name = "timelike-sheet";
    m.ambient_dim = 3;
    m.intrinsic_dim = 1;
    ParamChart c;
    c.axes = {Axis{0.0, 1.0, AxisKind::Open}};
    c.covers = true;
    c.jet = [](const Point& u) {
        Jet2 j(MinkVector{u[0], 0.0, 0.0}, 1);
        j.set_du(0, MinkVector{1.0, 0.0, 0.0});
        j.set_duu(0, 0, MinkVector::zero(3));
        return j;
    };
    m.charts = {c};
    CHECK_THROWS_AS(evaluate_jet(m, 0, Point::Constant(1, 0.5)), std::domain_error);
}

TEST_CASE("closed models must declare topology") {
    SubmanifoldModel m = make_model("torus");
    m.morse_number.reset();
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("model diameter") {
    CHECK_THAT(model_diameter(make_model("euclid-sphere")), WithinAbs(2.0, 0.02));
    CHECK_THAT(model_diameter(make_model("torus")), WithinAbs(6.0, 0.02));
}
