#include <catch2/catch_amalgamated.hpp>

#include "darboux/domain.hpp"
#include "helpers.hpp"

using namespace darboux;
using Catch::Approx;

TEST_CASE("rational arithmetic and decimal parsing") {
    CHECK(parse_decimal("0.2") == Rational{1, 5});
    CHECK(parse_decimal("-1.25") == Rational{-5, 4});
    CHECK(parse_decimal("3") == Rational{3, 1});
    CHECK((Rational{7, 2}).ceil() == 4);
    CHECK((Rational{7, 2}).floor() == 3);
    CHECK((Rational{-7, 2}).ceil() == -3);
    CHECK((Rational{6, 2}).ceil() == 3);
}

TEST_CASE("hypothesis calculator reproduces the exponent thresholds") {
    CuspGraph h = CuspGraph::preset("quadratic");

    SECTION("case 1, N = 0: m0 >= 19, m1 >= 6, m <= 4") {
        CuspDomain d = CuspDomain::standard(h, Orientation::elliptic_cusp, 1.0);
        HypothesisReport r = validate_hypotheses(d, 0, 19, 6);
        CHECK(r.m0_min == 19);
        CHECK(r.m1_min == 6);
        CHECK(r.exponents_pass);
        CHECK(r.m_max == 4); // min(6-1, 19-0-15)
        CHECK(r.conditions_pass);
    }
    SECTION("case 2, N = 1, abar = 0.2: m0 >= 106, m1 >= 59") {
        CuspGraph hs = CuspGraph::preset("sharp:0.2");
        CuspDomain d = CuspDomain::standard(hs, Orientation::hyperbolic_cusp, 1.0);
        HypothesisReport r = validate_hypotheses(d, 1, 106, 59, "0.2");
        CHECK(r.case_id == 2);
        CHECK(r.m0_min == 106); // ceil(105.25)
        CHECK(r.m1_min == 59);  // ceil(58.5)
        CHECK(r.exponents_pass);
    }
    SECTION("abar = 0 in case 2 is the transverse special case") {
        CuspGraph hs = CuspGraph::preset("sharp:0");
        CuspDomain d = CuspDomain::standard(hs, Orientation::hyperbolic_cusp, 1.0);
        HypothesisReport r = validate_hypotheses(d, 0, 40, 10, "0");
        CHECK(r.alpha_special_case);
        CHECK_FALSE(r.alpha_out_of_range);
    }
    SECTION("abar must lie in (0,1) for case 2") {
        CuspGraph hs = CuspGraph::preset("sharp:0.2");
        CuspDomain d = CuspDomain::standard(hs, Orientation::hyperbolic_cusp, 1.0);
        HypothesisReport bad = validate_hypotheses(d, 1, 500, 300, "1.5");
        CHECK(bad.alpha_out_of_range);
        HypothesisReport ok = validate_hypotheses(d, 1, 500, 300, "0.6");
        CHECK_FALSE(ok.alpha_out_of_range); // alpha = 0.375 < 1/2
        CHECK(ok.exponents_pass);
    }
    SECTION("N exceeding m0 - 2 fails") {
        CuspDomain d = CuspDomain::standard(h, Orientation::elliptic_cusp, 1.0);
        HypothesisReport r = validate_hypotheses(d, 30, 25, 70);
        CHECK_FALSE(r.N_admissible);
        CHECK_FALSE(r.pass());
    }
}

TEST_CASE("cusp graph presets and conditions") {
    SECTION("quadratic satisfies (1.1)-(1.3)") {
        auto r = CuspGraph::preset("quadratic").check_conditions();
        CHECK(r.tip_limits);
        CHECK(r.monotone_ratio);
        CHECK(r.derivative_bounds);
    }
    SECTION("sharp:0.2 satisfies (1.1)-(1.4) with its own constant") {
        CuspGraph g = CuspGraph::preset("sharp:0.2");
        auto r = g.check_conditions(1.0, true);
        CHECK(r.tip_limits);
        CHECK(r.monotone_ratio);
        CHECK(r.sharpness_lower);
        CHECK(r.worst_sharpness_ratio >= 1.0 - 1e-12);
    }
    SECTION("sharp:0 (transverse) fails the tangency limit (1.1)") {
        auto r = CuspGraph::preset("sharp:0").check_conditions();
        CHECK_FALSE(r.tip_limits);
    }
    SECTION("(1.3) constants are unchanged by rescaling") {
        CuspGraph g = CuspGraph::preset("quadratic");
        CuspGraph gr = g.rescaled(0.3);
        // h_eps(x) = eps^2 x^2 and |h'| = 2 eps^2 x: same C_1 over matching windows
        CHECK(gr(1.0) == Approx(0.09).epsilon(1e-14));
        auto r0 = g.check_conditions(1.0);
        auto r1 = gr.check_conditions(1.0);
        for (std::size_t l = 0; l < std::min(r0.C_l.size(), r1.C_l.size()); ++l)
            CHECK(r1.C_l[l] <= r0.C_l[l] * (1 + 1e-9) + 1e-12);
    }
}

TEST_CASE("rescale map") {
    SECTION("eps = 1 is the identity") {
        CoordinateMap m = rescale(1.0);
        Point2 q = m.forward({0.33, -0.4});
        CHECK(q.x == Approx(0.33));
        CHECK(q.y == Approx(-0.4));
    }
    SECTION("eps = 0.1 sends (1,1) to (0.01, 0.01)") {
        CoordinateMap m = rescale(0.1);
        Point2 q = m.forward({1, 1});
        CHECK(q.x == Approx(0.01).epsilon(1e-14));
        CHECK(q.y == Approx(0.01).epsilon(1e-14));
        auto j = m.jacobian({1, 1});
        CHECK(j[0] == Approx(0.01));
        CHECK(j[3] == Approx(0.01));
        CHECK(j[1] == 0);
    }
}

TEST_CASE("characteristic coordinates") {
    Rect win{-1, 1, 0, 1};

    SECTION("zero ratio gives the identity") {
        auto cm = characteristic_coords([](double, double) { return 0.0; }, win, 1.0 / 32);
        Point2 q = cm.map.forward({0.37, 0.62});
        CHECK(q.x == Approx(0.37).margin(1e-13));
        CHECK(cm.sup_shift < 1e-12);
    }
    SECTION("constant ratio c: xbar = x - c y (exact ODE oracle)") {
        double c = 0.4;
        auto cm = characteristic_coords([c](double, double) { return c; }, win, 1.0 / 32);
        for (auto p : dbxtest::sample_points(-0.5, 0.5, 0, 1, 50, 2)) {
            Point2 q = cm.map.forward(p);
            CHECK(q.x == Approx(p.x - c * p.y).margin(1e-12));
        }
    }
    SECTION("ratio = y: xbar = x - y^2/2 (exact ODE oracle)") {
        auto cm = characteristic_coords([](double, double y) { return y; }, win, 1.0 / 32);
        for (auto p : dbxtest::sample_points(-0.5, 0.5, 0, 1, 50, 3)) {
            Point2 q = cm.map.forward(p);
            CHECK(q.x == Approx(p.x - 0.5 * p.y * p.y).margin(1e-12));
        }
    }
    SECTION("round trip within 1e-10 on a smooth generic ratio") {
        auto ratio = [](double x, double y) { return 0.3 * std::sin(x + 0.7 * y); };
        auto cm = characteristic_coords(ratio, win, 1.0 / 32);
        double worst = 0;
        for (auto p : dbxtest::sample_points(-0.6, 0.6, 0, 1, 1000, 5)) {
            Point2 q = cm.map.inverse(cm.map.forward(p));
            worst = std::max(worst, std::hypot(q.x - p.x, q.y - p.y));
        }
        CHECK(worst < 1e-10);
    }
    SECTION("defining PDE holds exactly through the jacobian fields") {
        auto ratio = [](double x, double y) { return 0.5 * std::cos(x) * y; };
        auto cm = characteristic_coords(ratio, win, 1.0 / 32);
        for (auto p : dbxtest::sample_points(-0.5, 0.5, 0.05, 0.95, 30, 7)) {
            auto j = cm.map.jacobian(p); // [xbar_x, xbar_y; 0, 1]
            double a22 = 2.7, a12 = ratio(p.x, p.y) * a22;
            CHECK(a12 * j[0] + a22 * j[1] == Approx(0.0).margin(1e-13 * std::abs(a22 * j[0])));
        }
    }
    SECTION("characteristic exiting the window raises") {
        auto cm_ok = [&] {
            return characteristic_coords([](double, double) { return 40.0; }, win, 1.0 / 32);
        };
        CHECK_THROWS_AS(cm_ok(), CharacteristicBlowup);
    }
    SECTION("jacobian times inverse jacobian is the identity") {
        auto ratio = [](double x, double y) { return 0.2 * (x + y); };
        auto cm = characteristic_coords(ratio, win, 1.0 / 32);
        for (auto p : dbxtest::sample_points(-0.5, 0.5, 0, 1, 40, 11)) {
            auto prod = matmul2(cm.map.jacobian(p), cm.map.inverse_jacobian(p));
            CHECK(prod[0] == Approx(1.0).margin(1e-10));
            CHECK(prod[1] == Approx(0.0).margin(1e-10));
            CHECK(prod[2] == Approx(0.0).margin(1e-10));
            CHECK(prod[3] == Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("elliptic cusp opening") {
    SECTION("constant h = c: xt = (1 - xbar)/c, diagonal jacobian") {
        CuspGraph h = CuspGraph::preset("power:0").scaled(0.5); // h = 0.5
        CoordinateMap m = open_cusp_elliptic(h, 1.0);
        Point2 q = m.forward({0.3, 0.2});
        CHECK(q.x == Approx((1 - 0.3) / 0.5).epsilon(1e-13));
        CHECK(q.y == Approx(0.2 / 0.5).epsilon(1e-13));
        auto j = m.jacobian({0.3, 0.2});
        CHECK(j[0] == Approx(-2.0));
        CHECK(j[1] == Approx(0.0));
        CHECK(j[2] == Approx(0.0).margin(1e-14)); // h' = 0
        CHECK(j[3] == Approx(2.0));
    }
    SECTION("h = x: xt = -ln(xbar)") {
        CuspGraph h = CuspGraph::preset("power:1");
        CoordinateMap m = open_cusp_elliptic(h, 1.0);
        CHECK(m.forward({0.2, 0}).x == Approx(-std::log(0.2)).epsilon(1e-12));
    }
    SECTION("h = x^2: xt = 1/xbar - 1") {
        CuspGraph h = CuspGraph::preset("quadratic");
        CoordinateMap m = open_cusp_elliptic(h, 1.0);
        CHECK(m.forward({0.25, 0}).x == Approx(3.0).epsilon(1e-12));
        // boundary maps to |yt| = 1
        CHECK(m.forward({0.3, 0.09}).y == Approx(1.0).epsilon(1e-12));
    }
    SECTION("general h falls back to adaptive quadrature, matching closed form") {
        CuspGraph closed = CuspGraph::preset("quadratic");
        CuspGraph general = closed;
        general.power.reset(); // force the quadrature path
        for (double xb : {0.05, 0.2, 0.6, 0.9})
            CHECK(integral_inv_h(general, xb, 1.0) ==
                  Approx(integral_inv_h(closed, xb, 1.0)).epsilon(1e-9));
    }
    SECTION("round trip and jacobian consistency") {
        CuspGraph h = CuspGraph::preset("quadratic");
        CoordinateMap m = open_cusp_elliptic(h, 1.0);
        double worst = 0;
        for (auto p : dbxtest::sample_points(0.05, 0.95, -0.001, 0.001, 1000, 13)) {
            Point2 q = m.inverse(m.forward(p));
            worst = std::max(worst, std::hypot(q.x - p.x, q.y - p.y));
        }
        CHECK(worst < 1e-10);
        for (auto p : dbxtest::sample_points(0.1, 0.9, -0.005, 0.005, 20, 17)) {
            auto prod = matmul2(m.jacobian(p), m.inverse_jacobian(p));
            CHECK(prod[0] == Approx(1.0).margin(1e-12));
            CHECK(prod[3] == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("hyperbolic cusp opening") {
    SECTION("h(y) = y^2 with the identity xbar-map: yt = 1/ybar - 1") {
        CuspGraph h = CuspGraph::preset("quadratic");
        CoordinateMap m = open_cusp_hyperbolic(h, 1.0);
        Point2 q = m.forward({0.02, 0.5});
        CHECK(q.y == Approx(1.0).epsilon(1e-12));
        CHECK(q.x == Approx(0.02 / 0.25).epsilon(1e-12));
        // boundary x = h(y) maps to xt = 1
        CHECK(m.forward({0.25, 0.5}).x == Approx(1.0).epsilon(1e-12));
    }
    SECTION("constant h = c maps the strip linearly") {
        CuspGraph h = CuspGraph::preset("power:0").scaled(0.4);
        CoordinateMap m = open_cusp_hyperbolic(h, 1.0);
        CHECK(m.forward({0.4, 0.7}).x == Approx(1.0).epsilon(1e-13));
        CHECK(m.forward({0.4, 0.7}).y == Approx((1 - 0.7) / 0.4).epsilon(1e-13));
    }
    SECTION("round trip") {
        CuspGraph h = CuspGraph::preset("sharp:0.2");
        CoordinateMap m = open_cusp_hyperbolic(h, 1.0);
        double worst = 0;
        for (auto p : dbxtest::sample_points(-0.01, 0.01, 0.1, 0.95, 500, 19)) {
            Point2 pp{p.x * h(p.y) * 50, p.y}; // keep |xt| <= 1-ish
            Point2 q = m.inverse(m.forward(pp));
            worst = std::max(worst, std::hypot(q.x - pp.x, q.y - pp.y));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("transformed boundary graph via the boundary identity") {
    CuspGraph h = CuspGraph::preset("quadratic");
    SECTION("identity characteristic map reproduces h") {
        auto cm = characteristic_coords([](double, double) { return 0.0; }, Rect{-1, 1, 0, 1},
                                        1.0 / 16);
        CuspGraph hbar = transformed_boundary_graph(h, cm.map, 1.0);
        for (double y : {0.2, 0.5, 0.8}) {
            CHECK(hbar(y) == Approx(h(y)).margin(1e-9));
            CHECK(hbar.deriv(y, 1) == Approx(h.deriv(y, 1)).margin(1e-5));
        }
    }
    SECTION("near-identity map keeps hbar within O(shift) of h") {
        double c = 0.05;
        auto cm = characteristic_coords([c](double, double) { return c; }, Rect{-1, 1, 0, 1},
                                        1.0 / 16);
        CuspGraph hbar = transformed_boundary_graph(h, cm.map, 1.0);
        for (double y : {0.3, 0.6, 0.9}) {
            // xbar = x - c y exactly, so hbar(y) = h(y) - c y
            CHECK(hbar(y) == Approx(h(y) - c * y).margin(1e-8));
        }
    }
}

TEST_CASE("cube root map") {
    CoordinateMap m = cube_root_map();
    CHECK(m.forward({8, 0.5}).x == Approx(2.0).epsilon(1e-14));
    auto j = m.jacobian({1, 0});
    CHECK(j[0] == Approx(1.0 / 3).epsilon(1e-14));
    CHECK(j[3] == Approx(1.0));
    // sector y <= x maps to y <= xt^3 (a cusp graph pre-normalization)
    for (double x : {0.2, 0.5, 0.9}) {
        Point2 q = m.forward({x, x});
        CHECK(q.y == Approx(std::pow(q.x, 3)).epsilon(1e-12));
    }
    // round trip
    for (auto p : dbxtest::sample_points(0.01, 2.0, -1, 1, 200, 23)) {
        Point2 q = m.inverse(m.forward(p));
        CHECK(q.x == Approx(p.x).margin(1e-12));
    }
}

TEST_CASE("region decomposition partitions the punctured neighborhood") {
    CuspGraph h = CuspGraph::preset("quadratic");
    SECTION("elliptic orientation") {
        CuspDomain d = CuspDomain::standard(h, Orientation::elliptic_cusp, 1.0);
        REQUIRE(d.regions.size() == 4);
        for (auto p : dbxtest::sample_points(-0.9, 0.9, -0.9, 0.9, 500, 29)) {
            if (std::abs(std::abs(p.y) - h(std::abs(p.x))) < 1e-3) continue; // near curves
            int count = 0;
            for (const auto& r : d.regions) count += r.inside(p) ? 1 : 0;
            CHECK(count == 1);
        }
    }
    SECTION("hyperbolic orientation: K negative in the cusps") {
        CuspDomain d = CuspDomain::standard(CuspGraph::preset("sharp:0.2"),
                                            Orientation::hyperbolic_cusp, 1.0);
        for (const auto& r : d.regions) {
            if (r.name.rfind("cusp", 0) == 0) CHECK(r.curvature_sign == -1);
            else CHECK(r.curvature_sign == +1);
        }
    }
}

TEST_CASE("weight-derivative bound: d^m h^tau / dxt^m = O(h^tau)") {
    // Lemma-style check: along the opened coordinate, d/dxt = -h d/dxbar, so
    // each application keeps the h^tau scale for admissible graphs.
    for (auto spec : {std::string("quadratic"), std::string("sharp:0.2"), std::string("power:3")}) {
        CuspGraph h = CuspGraph::preset(spec);
        for (double tau : {-2.0, -1.0, 1.0, 2.0}) {
            // symbolic application of D = -h(x) d/dx to h^tau, m times
            AnalyticField X = AnalyticField::x();
            double p = h.power->p, c = h.power->coef;
            AnalyticField hx = c * powf2(X, p);
            AnalyticField f = powf2(hx, tau);
            double worst = 0;
            for (int m = 1; m <= 4; ++m) {
                f = -1.0 * (hx * f.dx());
                for (double t : {0.05, 0.2, 0.5, 0.9}) {
                    double ratio = std::abs(f(t, 0) / std::pow(hx(t, 0), tau));
                    worst = std::max(worst, ratio);
                }
                CHECK(std::isfinite(worst));
            }
            CHECK(worst < 1e4); // finite uniform constant, reported magnitude
        }
    }
}
