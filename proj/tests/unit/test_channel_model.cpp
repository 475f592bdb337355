// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "pawas/channel_model.hpp"
#include "pawas/errors.hpp"

using namespace pawas;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference values below come from a 40-digit mpmath evaluation of the
// distance model and of log2 det(I + P/2 H^T H) built from the 2x2 matrix.
struct Ref {
    double x, alpha1, alpha2, beta, zeta_p, zeta_c;
};
constexpr Ref kRefs[] = {
    {0.0, 3.3108565098858928e-10, 3.3108565098858928e-10, 1.3709085705986488e-10, 0.0, 0.0},
    {200.0, 5.7273932896690066e-11, 6.7819026272112104e-9, 2.491202760641178e-10, 41209210654.757352,
     8.1317379089499825},
    {300.0, 3.0234444629351333e-11, 2.5234248702692744e-8, 3.6836914006153278e-10, 80363835182.126153,
     10.9864969793248},
    {500.0, 1.0990534871196557e-11, 2.3604075082695349e-9, 1.5136655172546679e-10, 1550612634563.2729,
     11.838052679306252},
};

}  // namespace

TEST_CASE("default corridor timing") {
    CorridorGeometry g;
    CHECK(g.period_s() == doctest::Approx(7.2));
    const auto w = g.time_weights();
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(3.6).epsilon(1e-12));
    const auto xs = g.positions();
    CHECK(xs.front() == 0.0);
    CHECK(xs.back() == 500.0);
    CHECK(xs.size() == 1000);
}

TEST_CASE("geometry validation names the field") {
    CorridorGeometry g;
    g.rau_spacing_m = 300.0;
    try {
        g.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "d_h");
    }
    g = {};
    g.grid_points = 1;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = {};
    g.track_offset_m = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("gains and thresholds against the high-precision reference") {
    CorridorGeometry g;
    for (const auto& r : kRefs) {
        CAPTURE(r.x);
        const ChannelState s = channel_state(g, r.x);
        CHECK(rel(s.alpha1, r.alpha1) < 1e-12);
        CHECK(rel(s.alpha2, r.alpha2) < 1e-12);
        CHECK(rel(s.beta, r.beta) < 1e-12);
        const auto t = thresholds(s);
        if (r.zeta_p == 0.0) {
            CHECK(t.power == 0.0);
            CHECK(t.capacity == 0.0);
        } else {
            CHECK(rel(t.power, r.zeta_p) < 1e-9);
            CHECK(rel(t.capacity, r.zeta_c) < 1e-11);
        }
    }
}

TEST_CASE("distances follow the corridor layout") {
    CorridorGeometry g;
    const auto d = link_distances(g, 0.0);
    CHECK(d[0] == doctest::Approx(std::hypot(100.0, 300.0)));
    CHECK(d[1] == doctest::Approx(std::hypot(100.0, 700.0)));
    CHECK(d[2] == doctest::Approx(std::hypot(100.0, 700.0)));
    CHECK(d[3] == doctest::Approx(std::hypot(100.0, 300.0)));
    // MR2 passes right under RAU2 at x = (d_h - d_r)/2.
    CHECK(link_distances(g, 300.0)[3] == doctest::Approx(100.0));
}

TEST_CASE("positions outside the half period are rejected") {
    CorridorGeometry g;
    CHECK_THROWS_AS(channel_state(g, -1.0), DomainError);
    CHECK_THROWS_AS(channel_state(g, 500.5), DomainError);
    CHECK_NOTHROW(channel_state(g, 500.0));
}

TEST_CASE("capacities against the log-det reference") {
    CorridorGeometry g;
    const ChannelState s = channel_state(g, 250.0);
    CHECK(rel(capacity_mimo(s, 1e10), 6.6142596813493102) < 1e-13);
    CHECK(rel(capacity_simo(s, 1e10), 7.3762856112942956) < 1e-13);
    CHECK(capacity(s, 1e10, AntennaMode::Off) == 0.0);
    CHECK(capacity_mimo(s, 0.0) == 0.0);
    CHECK_THROWS_AS(capacity_simo(s, -1.0), DomainError);
}

TEST_CASE("Cauchy-Schwarz on the Gram determinant") {
    CorridorGeometry g;
    for (const ChannelState& s : channel_states(g)) CHECK(s.gram_determinant() > 0.0);
}

TEST_CASE("mode rule picks the larger capacity and matches the effective gain") {
    CorridorGeometry g;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xpos(0.0, 500.0);
    std::uniform_real_distribution<double> lp(6.0, 14.0);
    for (int i = 0; i < 2000; ++i) {
        const ChannelState s = channel_state(g, xpos(rng));
        const double p = std::pow(10.0, lp(rng));
        const double cm = capacity_mimo(s, p);
        const double cs = capacity_simo(s, p);
        const AntennaMode m = select_mode(s, p);
        CHECK(capacity(s, p, m) >= std::max(cm, cs) * (1.0 - 1e-12));
        CHECK(std::log2(1.0 + effective_gain(s, p) * p) == doctest::Approx(std::max(cm, cs)).epsilon(1e-12));
        // The same rule read in capacity terms.
        const auto t = thresholds(s);
        CHECK((m == AntennaMode::Mimo) == (capacity(s, p, m) >= t.capacity - 1e-12));
    }
}

TEST_CASE("MIMO and SIMO capacities meet at the power threshold") {
    CorridorGeometry g;
    for (double x : {150.0, 250.0, 400.0, 499.0}) {
        const ChannelState s = channel_state(g, x);
        const auto t = thresholds(s);
        CHECK(capacity_mimo(s, t.power) == doctest::Approx(capacity_simo(s, t.power)).epsilon(1e-12));
        CHECK(select_mode(s, t.power) == AntennaMode::Mimo);
    }
}

TEST_CASE("rank-one channel is reported") {
    ChannelState s;
    s.alpha1 = 2e-10;
    s.alpha2 = 8e-10;
    s.beta = 4e-10;
    CHECK_THROWS_AS(thresholds(s), SingularChannelError);
    CHECK_THROWS_AS(invert_capacity(s, 3.0, AntennaMode::Mimo), SingularChannelError);
    CHECK(invert_capacity(s, 3.0, AntennaMode::Simo) == doctest::Approx(7.0 / 8e-10));
}

TEST_CASE("capacity inversion") {
    CorridorGeometry g;
    // Powers reaching 9 bit/s/Hz, found by root finding on the log-det form.
    CHECK(rel(invert_capacity(channel_state(g, 100.0), 9.0, AntennaMode::Simo), 423528040308.39031) < 1e-12);
    CHECK(rel(invert_capacity(channel_state(g, 100.0), 9.0, AntennaMode::Mimo), 117653597295.97563) < 1e-12);
    CHECK(rel(invert_capacity(channel_state(g, 400.0), 9.0, AntennaMode::Simo), 72516616546.292354) < 1e-12);
    CHECK(rel(invert_capacity(channel_state(g, 400.0), 9.0, AntennaMode::Mimo), 93622852726.634378) < 1e-12);
    CHECK(invert_capacity(channel_state(g, 100.0), 0.0, AntennaMode::Mimo) == 0.0);
    CHECK_THROWS_AS(invert_capacity(channel_state(g, 100.0), -1.0, AntennaMode::Simo), DomainError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xpos(0.0, 500.0);
    std::uniform_real_distribution<double> cap(1e-6, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const ChannelState s = channel_state(g, xpos(rng));
        const double c = cap(rng);
        for (AntennaMode m : {AntennaMode::Mimo, AntennaMode::Simo})
            CHECK(capacity(s, invert_capacity(s, c, m), m) == doctest::Approx(c).epsilon(1e-11));
    }
}

TEST_CASE("largest capacity threshold over the corridor") {
    CorridorGeometry g;
    // The end of the half period dominates for this geometry.
    CHECK(rel(max_capacity_threshold(g), 11.838052679306252) < 1e-12);
    double grid_max = 0.0;
    for (const ChannelState& s : channel_states(g)) grid_max = std::max(grid_max, thresholds(s).capacity);
    CHECK(max_capacity_threshold(g) >= grid_max);
}

TEST_CASE("capacity threshold shape along the corridor") {
    // zeta_c has an interior local maximum next to x = (d_h - d_r)/2 (at 318.33 m,
    // 11.0713 bit/s/Hz by high-precision root finding) and rises towards d_h/2.
    CorridorGeometry g;
    auto zc = [&](double x) { return thresholds(channel_state(g, x)).capacity; };
    const double h = 1e-3;
    const double peak = 318.3285044373959;
    CHECK(std::abs(peak - 300.0) < 50.0);
    CHECK(zc(peak) == doctest::Approx(11.07133962781816).epsilon(1e-10));
    CHECK((zc(peak + h) - zc(peak - h)) / (2 * h) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(zc(peak) > zc(peak - 20.0));
    CHECK(zc(peak) > zc(peak + 20.0));
    const double slope_490 = (zc(490.0 + h) - zc(490.0 - h)) / (2 * h);
    const double slope_470 = (zc(470.0 + h) - zc(470.0 - h)) / (2 * h);
    CHECK(slope_490 > 0.0);
    CHECK(slope_490 > slope_470);
}

namespace {

// f(x) = ln(a x^2 + b x + 1)
double logquad(double a, double b, double x) { return std::log1p(a * x * x + b * x); }

}  // namespace

TEST_CASE("log-quadratic exchange inequality in its sufficient regime") {
    // With r = b/a and s = 1/a the exchange gain has the sign of
    // (r2 - r1) x^2 + 2 (s2 - s1) x + r1 s2 - r2 s1; it is positive whenever
    // a1 and a2 are large enough that (r2 - r1) x^2 > s_max (2x + r2).
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
        const double x = 2.0 + 98.0 * u(rng);
        const double r1 = 10.0 * u(rng);
        const double r2 = r1 + 0.1 + 10.0 * u(rng);
        const double a_min = (2.0 * x + r2) / ((r2 - r1) * x * x);
        const double a1 = a_min * std::pow(10.0, 0.3 + 2.7 * u(rng));
        const double a2 = a_min * std::pow(10.0, 0.3 + 2.7 * u(rng));
        const double b1 = r1 * a1;
        const double b2 = r2 * a2;
        const double d = 1e-6 * x;
        const double lhs = logquad(a1, b1, x + d) + logquad(a2, b2, x - d);
        const double rhs = logquad(a1, b1, x) + logquad(a2, b2, x);
        CAPTURE(x);
        CHECK(lhs > rhs);
        ++checked;
    }
    CHECK(checked == 5000);
}

TEST_CASE("log-quadratic exchange fails outside that regime") {
    // b1/a1 < b2/a2 and x > 2, yet moving mass from f2 to f1 loses: with
    // a1 tiny, f1 is nearly flat at x = 3 while f2 is still steep.
    const double a1 = 1e-6, b1 = 0.0, a2 = 1.0, b2 = 1.0, x = 3.0, d = 3e-6;
    REQUIRE(b1 / a1 < b2 / a2);
    const double lhs = logquad(a1, b1, x + d) + logquad(a2, b2, x - d);
    const double rhs = logquad(a1, b1, x) + logquad(a2, b2, x);
    CHECK(lhs < rhs);
}
