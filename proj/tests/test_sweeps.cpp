#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sqfield/sweeps.hpp"

using namespace sqfield;

TEST_SUITE_BEGIN("sweeps");

namespace {
SweepSpec shift_spec() {
    SweepSpec s;
    s.profile_template = piecewise_linear(3.0, 8.0, 10.0, 20.0);
    s.axis = SweepAxis::Shift;
    s.lo = 0.0;
    s.hi = 7.0;
    s.samples = 6;
    s.observation_time = 30.0;
    return s;
}
} // namespace

TEST_CASE("eta is flat along the shift axis") {
    const auto rows = run_sweep(shift_spec());
    REQUIRE(rows.size() == 6);
    double lo = rows[0].eta, hi = rows[0].eta;
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        lo = std::min(lo, r.eta);
        hi = std::max(hi, r.eta);
    }
    CHECK((hi - lo) / lo <= 1e-7);
}

TEST_CASE("identical spec gives a bit-identical table") {
    const auto a = run_sweep(shift_spec());
    const auto b = run_sweep(shift_spec());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::memcmp(&a[i].eta, &b[i].eta, sizeof(double)) == 0);
        CHECK(std::memcmp(&a[i].theta, &b[i].theta, sizeof(double)) == 0);
        CHECK(std::memcmp(&a[i].cosh2eta, &b[i].cosh2eta, sizeof(double)) == 0);
    }
}

TEST_CASE("rows satisfy the hyperbolic identity") {
    SweepSpec s;
    s.profile_template = sine_squared(3.0, 8.0, 10.0, 15.0, 11);
    s.axis = SweepAxis::EndTime_tb;
    s.lo = 10.5;
    s.hi = 15.0;
    s.samples = 21;
    s.observation_time = 20.0;
    for (const auto& row : run_sweep(s)) {
        CHECK(row.error.empty());
        CHECK(row.residual_hyperbolic <= 1e-7);
        CHECK(row.has_mathieu);
    }
}

TEST_CASE("largest squeeze peak sits on the first instability tongue") {
    SweepSpec s;
    s.profile_template = sine_squared(3.0, 8.0, 10.0, 15.0, 11);
    s.axis = SweepAxis::EndTime_tb;
    s.lo = 10.5;
    s.hi = 15.0;
    s.samples = 181;
    s.observation_time = 20.0;
    const auto rows = run_sweep(s);
    const auto peak = std::max_element(
        rows.begin(), rows.end(),
        [](const SweepRow& x, const SweepRow& y) { return x.eta < y.eta; });
    // the canonical-form ray q = 0.3767 a crosses the a ~ 1 tongue at a
    // duration of 11*pi/sqrt(146) ~ 2.86, i.e. t_b ~ 12.9
    CHECK(peak->axis_value > 12.5);
    CHECK(peak->axis_value < 13.3);
    CHECK(peak->a > 0.6);
    CHECK(peak->a < 1.4);
    CHECK(std::abs(peak->trace) > 2.0);
    CHECK(peak->eta > 1.0);
}

TEST_CASE("mode rescaling with inverse duration leaves eta unchanged") {
    const auto base = sine_squared(3.0, 8.0, 10.0, 12.0, 3);
    const auto doubled = sine_squared(6.0, 16.0, 5.0, 6.0, 3);
    const double e1 = extract_squeeze(base, base.t_b).eta;
    const double e2 = extract_squeeze(doubled, doubled.t_b).eta;
    CHECK(std::abs(e1 - e2) <= 1e-8);
}

TEST_CASE("spectral sweep: trivial process and adiabatic falloff") {
    const auto trivial = constant_profile(2.0);
    for (const auto& row : spectral_sweep(trivial, 1.0, 8.0, 5)) {
        CHECK(row.error.empty());
        CHECK(row.eta == doctest::Approx(0.0));
    }

    const auto smooth = smooth_septic(3.0, 8.0, 10.0, 12.0);
    const auto rows = spectral_sweep(smooth, 3.0, 24.0, 4);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].eta < rows[i - 1].eta);  // more adiabatic, less squeezing
    }
}

TEST_CASE("per-point failures are recorded without aborting") {
    SweepSpec s;
    s.profile_template = piecewise_linear(3.0, 8.0, 10.0, 20.0);
    s.axis = SweepAxis::EndTime_tb;
    s.lo = 9.0;  // t_b below t_a: invalid point
    s.hi = 19.0;
    s.samples = 5;
    s.observation_time = 20.0;
    const auto rows = run_sweep(s);
    REQUIRE(rows.size() == 5);
    CHECK(!rows.front().error.empty());
    CHECK(rows.back().error.empty());
}

TEST_CASE("invalid sweep specs are rejected") {
    SweepSpec s = shift_spec();
    s.samples = 1;
    CHECK_THROWS_AS(run_sweep(s), ConfigError);
    s = shift_spec();
    s.axis = SweepAxis::EndTime_tb;
    s.lo = 10.5;
    s.hi = 25.0;  // beyond the observation time
    s.samples = 4;
    s.observation_time = 20.0;
    CHECK_THROWS_AS(run_sweep(s), ConfigError);
}

TEST_CASE("threaded sweep matches the serial one") {
    SweepSpec s;
    s.profile_template = sine_squared(3.0, 8.0, 10.0, 15.0, 5);
    s.axis = SweepAxis::EndTime_tb;
    s.lo = 10.5;
    s.hi = 14.5;
    s.samples = 17;
    s.observation_time = 20.0;
    const auto serial = run_sweep(s, 1);
    const auto parallel = run_sweep(s, 2);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(serial[i].eta == parallel[i].eta);
}

TEST_SUITE_END();
