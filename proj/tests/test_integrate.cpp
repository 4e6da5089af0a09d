#include "lightcone/catalog.hpp"
#include "lightcone/integrate.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>
#include <sstream>

using namespace lightcone;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

double closed_form_torus_willmore(double R, double r) {
    const double x = r / R;
    return kPi * kPi / (x * std::sqrt(1.0 - x * x));
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2m - 1") {
    for (int m : {1, 3, 8}) {
        const Rule1D r = gauss_legendre(m, 0.0, 2.0);
        const int d = 2 * m - 1;
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
        CHECK_THAT(s, WithinRel(std::pow(2.0, d + 1) / (d + 1), 1e-13));
    }
    const Rule1D g = gauss_legendre(64, -1.0, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::cos(g.nodes[i]);
    CHECK_THAT(s, WithinRel(2.0 * std::sin(1.0), 1e-14));
    CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("periodic trapezoid integrates trigonometric polynomials exactly") {
    const Rule1D r = periodic_trapezoid(16, 0.0, 2.0 * kPi);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(std::cos(r.nodes[i]), 4);
    CHECK_THAT(s, WithinRel(0.75 * kPi, 1e-14));
}

TEST_CASE("sphere volumes and fiber rules") {
    CHECK_THAT(sphere_volume(0), WithinRel(2.0, 1e-15));
    CHECK_THAT(sphere_volume(1), WithinRel(2.0 * kPi, 1e-15));
    CHECK_THAT(sphere_volume(2), WithinRel(4.0 * kPi, 1e-15));
    CHECK_THAT(sphere_volume(3), WithinRel(2.0 * kPi * kPi, 1e-15));
    for (int m = 0; m <= 3; ++m) {
        const FiberRule rule = make_fiber_rule(m, QuadratureSpec{}.fiber_nodes);
        double w = 0.0, second = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            w += rule.weights[q];
            second += rule.weights[q] * rule.mu[q][0] * rule.mu[q][0];
            double n2 = 0.0;
            for (double x : rule.mu[q]) n2 += x * x;
            CHECK_THAT(n2, WithinAbs(1.0, 1e-14));
        }
        INFO("m = " << m);
        CHECK_THAT(w, WithinRel(sphere_volume(m), 1e-13));
        // each coordinate squared averages to 1 / (m + 1)
        CHECK_THAT(second, WithinRel(sphere_volume(m) / (m + 1), 1e-12));
    }
    CHECK_THROWS_AS(make_fiber_rule(-1, 8), std::invalid_argument);
}

TEST_CASE("pairwise summation, threading helpers and the counter RNG") {
    std::vector<double> x(1000, 0.1);
    CHECK_THAT(pairwise_sum(x), WithinRel(100.0, 1e-14));
    CHECK(pairwise_sum(std::span<const double>()) == 0.0);

    std::vector<int> hit(50, 0);
    parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] = 1; });
    CHECK(std::count(hit.begin(), hit.end(), 1) == 50);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    CHECK(resolve_threads(0) >= 1);

    CounterRng a(1, 2), b(1, 2), c(1, 3);
    const double a1 = a.uniform();
    CHECK(a1 == b.uniform());
    CHECK(a1 != c.uniform());
    CHECK(a1 > 0.0);
    CHECK(a1 < 1.0);
    const MinkVector v = mc_direction(5, 9, 4);
    CHECK(on_lightcone_sphere(v));
    CHECK(v.coords() == mc_direction(5, 9, 4).coords());
}

TEST_CASE("pointwise total curvature") {
    const QuadratureSpec spec;
    const auto sphere = make_model("euclid-sphere");
    CHECK_THAT(pointwise_total_curvature(sphere, 0, Point{{0.9, 1.3}}, fiber_rule_for(sphere, spec)),
               WithinAbs(2.0, 1e-12));
    const auto torus = make_model("torus");
    CHECK_THAT(pointwise_total_curvature(torus, 0, Point{{kPi / 2, 1.3}}, fiber_rule_for(torus, spec)),
               WithinAbs(0.0, 1e-14));
    // codimension three: integral over the unit circle of cos^2 is pi
    const auto c3 = make_model("codim3-sphere");
    CHECK_THAT(pointwise_total_curvature(c3, 0, Point{{0.9, 1.3}}, fiber_rule_for(c3, spec)), WithinAbs(kPi, 1e-10));
    const auto other = make_fiber_rule(0, 8);
    CHECK_THROWS_AS(pointwise_total_curvature(c3, 0, Point{{0.9, 1.3}}, other), std::invalid_argument);
}

TEST_CASE("total absolute lightcone curvature of the catalog surfaces") {
    const QuadratureSpec spec;
    CHECK_THAT(total_absolute_curvature(make_model("euclid-sphere"), spec), WithinAbs(2.0, 1e-3));
    CHECK_THAT(total_absolute_curvature(make_model("euclid-sphere", {{"r", 3.0}}), spec), WithinAbs(2.0, 1e-3));
    CHECK_THAT(total_absolute_curvature(make_model("torus"), spec), WithinAbs(4.0, 1e-3));
    CHECK_THAT(total_absolute_curvature(make_model("torus", {{"R", 3.5}, {"r", 0.5}}), spec), WithinAbs(4.0, 1e-3));
    CHECK_THAT(total_absolute_curvature(make_model("lightcone-sphere"), spec), WithinAbs(2.0, 1e-3));
    CHECK_THAT(total_absolute_curvature(make_model("codim3-sphere"), spec), WithinAbs(2.0, 1e-3));
    CHECK_THAT(total_absolute_curvature(make_model("hyperbolic-curve"), spec), WithinAbs(2.0, 1e-3));
    CHECK(total_absolute_curvature(make_model("bumpy-sphere"), spec) > 2.0 + 0.02);
    CHECK_THROWS_AS(total_absolute_curvature(make_model("flat-patch"), spec), std::invalid_argument);
}

TEST_CASE("codimension two: tau splits into the two lightlike normals") {
    for (const char* name : {"euclid-sphere", "torus", "bumpy-sphere", "lightcone-sphere", "hyperbolic-curve"}) {
        const auto m = make_model(name);
        const CurvatureTotals t = integrate_curvature(m, QuadratureSpec{});
        const Codim2Totals c = codim2_totals(t);
        INFO(name);
        CHECK_THAT(c.tau_plus + c.tau_minus, WithinAbs(t.tau(), 1e-9));
        CHECK(c.tau_plus >= 1.0 - 0.02);
        CHECK(c.tau_minus >= 1.0 - 0.02);
    }
    CHECK_THROWS_AS(codim2_totals(make_model("codim3-sphere")), std::invalid_argument);
}

TEST_CASE("Gauss-Bonnet type identities") {
    const QuadratureSpec spec;
    const Codim2Totals s = codim2_totals(make_model("euclid-sphere"), spec);
    CHECK_THAT(s.gauss_bonnet_lhs, WithinAbs(4.0 * kPi, 1e-4 * 4.0 * kPi));
    CHECK_THAT(s.gauss_bonnet_lhs_minus, WithinAbs(4.0 * kPi, 1e-4 * 4.0 * kPi));
    const Codim2Totals t = codim2_totals(make_model("torus"), spec);
    CHECK_THAT(t.gauss_bonnet_lhs, WithinAbs(0.0, 1e-4 * t.abs_plus));
    CHECK_THAT(t.abs_plus, WithinRel(8.0 * kPi, 1e-4));
    const Codim2Totals b = codim2_totals(make_model("bumpy-sphere"), spec);
    CHECK_THAT(b.gauss_bonnet_lhs, WithinAbs(4.0 * kPi, 1e-4 * b.abs_plus));
    CHECK_THAT(b.gauss_bonnet_lhs_minus, WithinAbs(4.0 * kPi, 1e-4 * b.abs_minus));
    // chi = 0: the absolute bound gamma (4 - chi) / 2 = 8 pi is attained
    CHECK(t.abs_minus >= 8.0 * kPi * (1.0 - 5e-3));
}

TEST_CASE("Willmore energies") {
    const QuadratureSpec spec;
    for (double r : {0.5, 1.0, 4.0}) {
        const auto m = make_model("lightcone-sphere", {{"r", r}});
        CHECK_THAT(willmore_energy(m, spec, +1), WithinRel(4.0 * kPi, 1e-6));
        const auto s = make_model("euclid-sphere", {{"r", r}});
        CHECK_THAT(willmore_energy(s, spec, -1), WithinRel(4.0 * kPi, 1e-6));
    }
    for (auto [R, r] : {std::pair{std::sqrt(2.0), 1.0}, std::pair{2.0, 1.0}, std::pair{3.0, 0.7}}) {
        const auto m = make_model("torus", {{"R", R}, {"r", r}});
        CHECK_THAT(willmore_energy(m, spec), WithinRel(closed_form_torus_willmore(R, r), 1e-6));
    }
    CHECK_THROWS_AS(willmore_energy(make_model("codim3-sphere"), spec), std::invalid_argument);
    CHECK_THROWS_AS(willmore_energy(make_model("torus"), spec, 0), std::invalid_argument);
}

TEST_CASE("grid refinement changes tau by less than the verdict tolerance") {
    for (const char* name : {"bumpy-sphere", "torus", "hyperbolic-curve"}) {
        const auto m = make_model(name);
        const double coarse = total_absolute_curvature(m, QuadratureSpec::with_base(64));
        const double fine = total_absolute_curvature(m, QuadratureSpec::with_base(128));
        INFO(name);
        CHECK(std::abs(coarse - fine) < 1e-3);
    }
}

TEST_CASE("total curvature does not depend on the choice of timelike normal field") {
    const QuadratureSpec spec;
    for (const char* name : {"torus", "bumpy-sphere", "codim3-sphere"}) {
        const auto m = make_model(name);
        const FiberRule rule = fiber_rule_for(m, spec);
        auto total = [&](double rapidity) {
            BaseIntegrand f = [&](const Jet2& jet) {
                BaseSample s;
                const NormalFrame fr = normal_frame_at(jet, boosted_timelike_normal(jet, rapidity, 1));
                s.values[0] = pointwise_total_curvature(jet, fr, rule);
                return s;
            };
            return integrate_over_chart(m.covering_chart(), spec, f).totals[0];
        };
        const double base = total(0.0);
        INFO(name);
        CHECK_THAT(total(0.6), WithinRel(base, 1e-9));
        CHECK_THAT(total(-1.1), WithinRel(base, 1e-9));
    }
}

TEST_CASE("tau via the mean number of critical points") {
    QuadratureSpec spec;
    spec.mc_directions = 100;
    const EtaEstimate s = tau_via_eta(make_model("euclid-sphere"), spec);
    CHECK(s.mean == 2.0);
    CHECK(s.stderr_ == 0.0);
    CHECK(s.used + s.flagged == 100);
    const EtaEstimate t = tau_via_eta(make_model("torus"), spec);
    CHECK(t.mean == 4.0);
    const auto bumpy = make_model("bumpy-sphere");
    spec.mc_directions = 200;
    const EtaEstimate b = tau_via_eta(bumpy, spec);
    const double tau = total_absolute_curvature(bumpy, spec);
    CHECK(std::abs(b.mean - tau) <= 2.0 * b.stderr_ + 0.02);
    // same seed, same answer regardless of thread count
    spec.threads = 3;
    const EtaEstimate b3 = tau_via_eta(bumpy, spec);
    CHECK(b3.counts == b.counts);
    CHECK_THROWS_AS(tau_via_eta(make_model("flat-patch"), spec), std::invalid_argument);
}

TEST_CASE("results are identical across thread counts") {
    const auto m = make_model("bumpy-sphere");
    QuadratureSpec one, four;
    four.threads = 4;
    const CurvatureTotals a = integrate_curvature(m, one), b = integrate_curvature(m, four);
    CHECK(a.kstar_integral == b.kstar_integral);
    CHECK(a.signed_plus == b.signed_plus);
    CHECK(a.willmore_minus == b.willmore_minus);
}

TEST_CASE("quadrature spec validation") {
    QuadratureSpec s;
    s.fiber_nodes = 4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = QuadratureSpec::with_base(32);
    CHECK(s.polar_nodes == 32);
    CHECK(s.periodic_nodes == 64);
    s.mc_directions = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("verdicts") {
    const auto sphere = make_model("euclid-sphere");
    TotalCurvatureReport rep;
    fill_report(rep, sphere, integrate_curvature(sphere, QuadratureSpec{}));
    const auto vs = theorem_verdicts(rep, sphere);
    auto find = [&](const std::vector<Verdict>& v, const std::string& id) -> const Verdict& {
        for (const auto& x : v)
            if (x.id == id) return x;
        FAIL("missing verdict " << id);
        throw std::logic_error("unreachable");
    };
    for (const char* id : {"chern-lashof", "sphere-characterization", "embedded-projection-bound+",
                           "embedded-projection-bound-", "gauss-bonnet+", "gauss-bonnet-", "absolute-curvature-bound+",
                           "absolute-curvature-bound-", "willmore-bound+", "willmore-bound-"}) {
        INFO(id);
        const Verdict& v = find(vs, id);
        CHECK(v.pass);
        CHECK_FALSE(v.skipped);
    }

    // codimension three: only the generic checks apply
    const auto c3 = make_model("codim3-sphere");
    TotalCurvatureReport r3;
    fill_report(r3, c3, integrate_curvature(c3, QuadratureSpec{}));
    const auto v3 = theorem_verdicts(r3, c3);
    CHECK(find(v3, "chern-lashof").pass);
    for (const auto& v : v3) CHECK((v.id == "chern-lashof" || v.id == "sphere-characterization"));

    // a deliberately low tau fails the Chern-Lashof check
    TotalCurvatureReport fake;
    fake.tau_ell = 1.5;
    const auto vf = theorem_verdicts(fake, c3);
    CHECK_FALSE(find(vf, "chern-lashof").pass);

    // a torus with tau < 3 would contradict the sphere characterization
    const auto torus = make_model("torus");
    TotalCurvatureReport ft;
    ft.tau_ell = 2.5;
    CHECK_FALSE(find(theorem_verdicts(ft, torus), "sphere-characterization").pass);

    // eta agreement uses 2 standard errors plus the tau tolerance
    TotalCurvatureReport e;
    e.tau_ell = 2.0;
    e.eta = EtaEstimate{2.1, 0.01, 10, 0, {}};
    CHECK_FALSE(find(theorem_verdicts(e, c3), "eta-agreement").pass);
    e.eta->stderr_ = 0.05;
    CHECK(find(theorem_verdicts(e, c3), "eta-agreement").pass);
}

TEST_CASE("curvature CSV") {
    std::ostringstream os;
    write_curvature_csv(make_model("euclid-sphere"), QuadratureSpec::with_base(8), os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "chart,u_1,u_2,mu_1,K_tilde,area_weight");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 8 * 16 * 2);
}
