#include "lightcone/catalog.hpp"
#include "lightcone/integrate.hpp"
#include "lightcone/tightness.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

using namespace lightcone;
using Catch::Matchers::WithinAbs;

namespace {

void check_vec(const MinkVector& got, std::initializer_list<double> want) {
    const MinkVector w(want);
    CHECK((got.coords() - w.coords()).cwiseAbs().maxCoeff() < 1e-12);
}

}  // namespace

TEST_CASE("tangent lightlike hyperplanes of the unit sphere at the north pole") {
    const auto m = make_model("euclid-sphere");
    const auto [hp, hm] = tangent_lightlike_hyperplanes(m, 1, Point{{std::numbers::pi / 2, std::numbers::pi / 2}});
    check_vec(hp.pseudo_normal(), {1, 0, 0, 1});
    check_vec(hm.pseudo_normal(), {1, 0, 0, -1});
    CHECK_THAT(hp.offset(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(hm.offset(), WithinAbs(-1.0, 1e-12));
}

TEST_CASE("tangent lightlike hyperplanes of the torus at the outer equator") {
    const auto m = make_model("torus");
    const auto [hp, hm] = tangent_lightlike_hyperplanes(m, 0, Point{{0.0, 0.0}});
    check_vec(hp.pseudo_normal(), {1, 1, 0, 0});
    check_vec(hm.pseudo_normal(), {1, -1, 0, 0});
    CHECK_THAT(hp.offset(), WithinAbs(3.0, 1e-12));
    CHECK_THAT(hm.offset(), WithinAbs(-3.0, 1e-12));
}

TEST_CASE("tangent lightlike hyperplanes contain the point and the tangent plane") {
    std::mt19937 rng(61);
    for (const char* name : {"euclid-sphere", "torus", "bumpy-sphere", "lightcone-sphere", "hyperbolic-curve"}) {
        const auto m = make_model(name);
        const ParamChart& c = m.chart(0);
        for (int t = 0; t < 20; ++t) {
            Point u(c.dim());
            for (int i = 0; i < c.dim(); ++i) {
                const Axis a = c.sampling_axis(i);
                u[i] = std::uniform_real_distribution<double>(a.lo, a.hi)(rng);
            }
            const Jet2 jet = evaluate_jet(m, 0, u);
            const auto [hp, hm] = tangent_lightlike_hyperplanes(m, 0, u);
            INFO(name);
            for (const Hyperplane* h : {&hp, &hm}) {
                CHECK(causal_class(h->pseudo_normal()) == CausalClass::Lightlike);
                CHECK(hyperplane_side(*h, jet.position()) == 0.0);
                for (int i = 0; i < c.dim(); ++i)
                    CHECK_THAT(pseudo_dot(h->pseudo_normal(), jet.du(i)), WithinAbs(0.0, 1e-12));
            }
        }
    }
    const auto c3 = make_model("codim3-sphere");
    CHECK_THROWS_AS(tangent_lightlike_hyperplanes(c3, 0, Point{{1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("convexity of the catalog surfaces") {
    const SupportReport sphere = l_convexity_check(make_model("euclid-sphere"));
    CHECK(sphere.verdict == Convexity::Convex);
    CHECK(sphere.worst_violation < 1e-6);
    CHECK(sphere.violating_pairs.empty());
    CHECK(sphere.base_points > 0);

    CHECK(l_convexity_check(make_model("lightcone-sphere")).verdict == Convexity::Convex);

    const SupportReport bumpy = l_convexity_check(make_model("bumpy-sphere"));
    CHECK(bumpy.verdict == Convexity::NonConvex);
    CHECK(bumpy.worst_violation > 0.01);
    REQUIRE_FALSE(bumpy.violating_pairs.empty());
    CHECK(bumpy.violating_pairs.size() <= 16);
    CHECK(bumpy.violating_pairs.front().violation == bumpy.worst_violation);

    CHECK(l_convexity_check(make_model("torus")).verdict == Convexity::NonConvex);
}

TEST_CASE("coarse sampling of a sharply curved surface is inconclusive") {
    ConvexityOptions opt;
    opt.density = 6;
    const SupportReport rep = l_convexity_check(make_model("bumpy-sphere"), opt);
    CHECK(rep.coarse_warning);
    CHECK(rep.verdict == Convexity::Inconclusive);
    CHECK_FALSE(rep.note.empty());
}

TEST_CASE("convexity check rejects unsuitable input") {
    CHECK_THROWS_AS(l_convexity_check(make_model("flat-patch")), std::invalid_argument);
    CHECK_THROWS_AS(l_convexity_check(make_model("codim3-sphere")), std::invalid_argument);
    ConvexityOptions opt;
    opt.tol = 0.0;
    CHECK_THROWS_AS(l_convexity_check(make_model("euclid-sphere"), opt), std::invalid_argument);
}

TEST_CASE("tightness verdicts") {
    const auto sphere = make_model("euclid-sphere");
    CHECK(l_tightness_verdict(sphere, 2.001).verdict == Tightness::Tight);
    CHECK(l_tightness_verdict(sphere, 2.5).verdict == Tightness::NotTight);
    const auto torus = make_model("torus");
    CHECK(l_tightness_verdict(torus, 4.0).verdict == Tightness::Tight);
    const auto c3 = make_model("codim3-sphere");
    const TightnessVerdict v3 = l_tightness_verdict(c3, 2.0);
    CHECK(v3.verdict == Tightness::Tight);
    CHECK_FALSE(v3.note.empty());

    SupportReport convex;
    convex.verdict = Convexity::Convex;
    SupportReport nonconvex;
    nonconvex.verdict = Convexity::NonConvex;
    SupportReport unsure;
    unsure.verdict = Convexity::Inconclusive;
    CHECK(l_tightness_verdict(sphere, 2.0, 0.02, &convex).verdict == Tightness::Tight);
    CHECK(l_tightness_verdict(sphere, 3.0, 0.02, &nonconvex).verdict == Tightness::NotTight);
    CHECK(l_tightness_verdict(sphere, 2.0, 0.02, &nonconvex).verdict == Tightness::Inconclusive);
    CHECK(l_tightness_verdict(sphere, 3.0, 0.02, &convex).verdict == Tightness::Inconclusive);
    CHECK(l_tightness_verdict(sphere, 2.0, 0.02, &unsure).verdict == Tightness::Inconclusive);

    SubmanifoldModel anon = sphere;
    anon.morse_number.reset();
    CHECK_THROWS_AS(l_tightness_verdict(anon, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(l_tightness_verdict(sphere, 2.0, -1.0), std::invalid_argument);
}

TEST_CASE("for spheres, tightness and convexity agree") {
    for (const char* name : {"euclid-sphere", "lightcone-sphere", "bumpy-sphere"}) {
        const auto m = make_model(name);
        const SupportReport conv = l_convexity_check(m);
        REQUIRE(conv.verdict != Convexity::Inconclusive);
        const double tau = total_absolute_curvature(m);
        const TightnessVerdict t = l_tightness_verdict(m, tau, 0.02, &conv);
        INFO(name);
        CHECK(t.verdict != Tightness::Inconclusive);
        CHECK((t.verdict == Tightness::Tight) == (conv.verdict == Convexity::Convex));
    }
}
