#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "ptlab/potential.hpp"

using ptlab::cplx;
using ptlab::Grid;
using ptlab::PotentialSpec;

namespace {

// tabulated Gaussian bump plus a shifted imaginary bump: complex but not
// PT-symmetric; used for the symmetry rejection paths
PotentialSpec shifted_gaussian_table(double L, int n) {
    Grid g(L, n);
    std::vector<double> xs(n);
    std::vector<cplx> vs(n);
    for (int j = 0; j < n; ++j) {
        double x = g.x(j);
        xs[j] = x;
        vs[j] = cplx(0.8 * std::exp(-0.5 * x * x),
                     0.5 * std::exp(-(x - 0.7) * (x - 0.7) / 1.5));
    }
    return PotentialSpec::tabulated(xs, vs);
}

} // namespace

TEST_CASE("scarf2 point values and tails", "[potential]") {
    auto pot = PotentialSpec::scarf2(2.5, 0.5, 1.0);
    // at x = 0: sech = 1, tanh = 0
    cplx v0 = pot.evaluate(0.0);
    CHECK(v0.real() == Catch::Approx(2.5 * 2.5 - (2.5 * 3.5 + 0.25)).margin(1e-14));
    CHECK(v0.imag() == Catch::Approx(0.0).margin(1e-14));
    // far away the constant tail A^2 survives
    CHECK(std::abs(pot.evaluate(30.0) - cplx(6.25, 0.0)) < 1e-12);
    CHECK(std::abs(pot.evaluate(-30.0) - cplx(6.25, 0.0)) < 1e-12);
    CHECK(pot.v_asym() == Catch::Approx(6.25));

    // Hermitian limit: no imaginary part anywhere
    auto herm = PotentialSpec::scarf2(2.5, 0.0, 1.0);
    for (double x : {-3.0, -0.7, 0.3, 1.9})
        CHECK(herm.evaluate(x).imag() == 0.0);
}

TEST_CASE("scarf2 is PT-symmetric, the shifted table is not", "[potential]") {
    auto pot = PotentialSpec::scarf2(1.7, 0.9, 1.3);
    CHECK(pot.is_pt_symmetric(8.0));
    auto table = shifted_gaussian_table(12.0, 4001);
    CHECK_FALSE(table.is_pt_symmetric(10.0));
}

TEST_CASE("even odd split and reconstruction", "[potential]") {
    auto pot = PotentialSpec::scarf2(2.5, 0.5, 1.0);
    for (double x : {0.0, 0.4, 1.3, 3.7}) {
        auto parts = pot.decompose_even_odd(x);
        cplx rebuilt(parts.v_even, parts.v_odd);
        CHECK(std::abs(rebuilt - pot.evaluate(x)) < 1e-12);
        // even part is even, odd part flips
        auto m = pot.decompose_even_odd(-x);
        CHECK(parts.v_even == Catch::Approx(m.v_even).margin(1e-13));
        CHECK(parts.v_odd == Catch::Approx(-m.v_odd).margin(1e-13));
    }
    auto table = shifted_gaussian_table(12.0, 4001);
    CHECK_THROWS_AS(table.decompose_even_odd(0.7), ptlab::NotPTSymmetricError);
}

TEST_CASE("flip odd conjugates the potential pointwise", "[potential]") {
    auto pot = PotentialSpec::scarf2(2.5, 0.5, 1.0);
    auto flipped = pot.flip_odd();
    CHECK(flipped.b() == -0.5);
    for (double x : {-2.0, -0.3, 0.0, 1.1, 4.2})
        CHECK(std::abs(flipped.evaluate(x) - std::conj(pot.evaluate(x))) < 1e-14);

    auto table = shifted_gaussian_table(12.0, 4001);
    auto tflip = table.flip_odd();
    for (double x : {-1.0, 0.7, 2.5})
        CHECK(std::abs(tflip.evaluate(x) - std::conj(table.evaluate(x))) < 1e-14);
    // flipping twice restores the original
    auto twice = tflip.flip_odd();
    CHECK(std::abs(twice.evaluate(0.7) - table.evaluate(0.7)) < 1e-14);
}

TEST_CASE("superpotential factorizes the potential", "[potential]") {
    auto pot = PotentialSpec::scarf2(2.5, 0.5, 1.0);
    double worst = 0.0;
    Grid g(10.0, 2001);
    for (int j = 0; j < g.size(); ++j) {
        double x = g.x(j);
        double u = 1.0 * x;
        cplx w = pot.superpotential(x);
        // closed-form W' for the check: A a sech^2 - i B a sech tanh
        double sech = 1.0 / std::cosh(u), th = std::tanh(u);
        cplx wp(2.5 * sech * sech, -0.5 * sech * th);
        worst = std::max(worst, std::abs(w * w - wp - pot.evaluate(x)));
    }
    CHECK(worst < 1e-12);

    auto table = shifted_gaussian_table(12.0, 1001);
    CHECK_THROWS_AS(table.superpotential(0.0), ptlab::UnsupportedPotentialError);
}

TEST_CASE("ground state oracle solves at E = 0", "[potential]") {
    auto pot = PotentialSpec::scarf2(2.5, 0.5, 1.0);
    Grid g = ptlab::make_grid(pot);
    auto w = ptlab::ground_state_oracle(pot, g);

    CHECK(w.psi[g.mid()] == cplx(1.0, 0.0));
    CHECK(std::abs(w.k - cplx(0.0, 2.5)) < 1e-14);

    // local energy (-psi'' + V psi)/psi from a 5-point stencil: its mean
    // identifies the eigenvalue and its spread certifies the state
    double h = g.step();
    std::vector<double> re_r, im_r;
    for (int j = 2; j < g.size() - 2; ++j) {
        cplx d2 = (-w.psi[j + 2] + 16.0 * w.psi[j + 1] - 30.0 * w.psi[j] +
                   16.0 * w.psi[j - 1] - w.psi[j - 2]) /
                  (12.0 * h * h);
        cplx r = (-d2 + pot.evaluate(g.x(j)) * w.psi[j]) / w.psi[j];
        re_r.push_back(r.real());
        im_r.push_back(r.imag());
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double t : v) s += t;
        return s / v.size();
    };
    auto stdev = [&](const std::vector<double>& v) {
        double m = mean(v), s = 0.0;
        for (double t : v) s += (t - m) * (t - m);
        return std::sqrt(s / v.size());
    };
    CHECK(std::abs(mean(re_r)) < 1e-6);
    CHECK(std::abs(mean(im_r)) < 1e-6);
    CHECK(stdev(re_r) < 1e-6);
    CHECK(stdev(im_r) < 1e-6);

    // amplitude decay: |psi(L)/psi(0)| = sech(alpha L)^(A/alpha) ~ e^{-A L} 2^{A/alpha}
    double expected = std::exp(-2.5 * g.half_width()) * std::pow(2.0, 2.5);
    double got = std::abs(w.psi.back());
    CHECK(std::abs(got - expected) < 1e-6 * expected);

    // phase accumulates the Gudermannian: arg psi(x) = -(B/alpha) atan(sinh(alpha x))
    for (double x : {0.5, 1.0, 2.0}) {
        int j = g.index_of(x);
        double want = -0.5 * std::atan(std::sinh(x));
        CHECK(std::arg(w.psi[j]) == Catch::Approx(want).margin(1e-9));
    }

    CHECK_THROWS_AS(ptlab::ground_state_oracle(PotentialSpec::scarf2(-1.0, 0.5, 1.0), g),
                    ptlab::NotNormalizableError);
}

TEST_CASE("grid factory enforces flat tails", "[potential]") {
    auto pot = PotentialSpec::scarf2(2.5, 0.5, 1.0);
    Grid g = ptlab::make_grid(pot);
    CHECK(g.size() == ptlab::default_n_points);
    CHECK(g.half_width() == Catch::Approx(25.0));
    CHECK(g.x(g.mid()) == 0.0);

    // a box that ends on the slope of the well must be rejected
    CHECK_THROWS_AS(ptlab::make_grid(pot, 4.0, 2001), ptlab::Error);

    // tails of a too-short table are not flat either
    auto table = shifted_gaussian_table(3.0, 301);
    CHECK_THROWS_AS(ptlab::make_grid(table), ptlab::Error);
    auto wide = shifted_gaussian_table(12.0, 4001);
    CHECK_NOTHROW(ptlab::make_grid(wide));
}

TEST_CASE("tabulated evaluation interpolates and guards the range", "[potential]") {
    std::vector<double> xs = {-1.0, 0.0, 1.0};
    std::vector<cplx> vs = {cplx(0.0, 0.0), cplx(2.0, 1.0), cplx(4.0, 0.0)};
    auto pot = PotentialSpec::tabulated(xs, vs);
    CHECK(std::abs(pot.evaluate(0.5) - cplx(3.0, 0.5)) < 1e-14);
    CHECK(std::abs(pot.evaluate(-1.0) - cplx(0.0, 0.0)) < 1e-14);
    CHECK(std::abs(pot.evaluate(1.0) - cplx(4.0, 0.0)) < 1e-14);
    CHECK_THROWS_AS(pot.evaluate(1.5), ptlab::OutOfRangeError);
    CHECK_THROWS_AS(pot.evaluate(-1.0001), ptlab::OutOfRangeError);

    CHECK_THROWS_AS(PotentialSpec::tabulated({0.0, 0.0, 1.0}, vs), ptlab::Error);
}

TEST_CASE("potential csv round trip", "[potential]") {
    auto pot = shifted_gaussian_table(12.0, 401);
    Grid g(12.0, 401);
    std::ostringstream out;
    ptlab::write_potential_csv(out, pot, g);

    std::istringstream in(out.str());
    auto back = ptlab::read_potential_csv(in);
    for (double x : {-11.0, -0.25, 0.7, 3.3})
        CHECK(std::abs(back.evaluate(x) - pot.evaluate(x)) < 1e-12);

    std::istringstream bad("x,re,im\n0,1,2\n");
    CHECK_THROWS_AS(ptlab::read_potential_csv(bad), ptlab::Error);
    std::istringstream mangled("x,re_v,im_v\n0;1;2\n");
    CHECK_THROWS_AS(ptlab::read_potential_csv(mangled), ptlab::Error);
}
