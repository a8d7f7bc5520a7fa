#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lpma/channel.hpp"

using namespace lpma;

TEST_CASE("path loss") {
    CHECK(pathloss_db(1.0) == Catch::Approx(21.5).margin(1e-12));
    CHECK(pathloss_db(0.5) == Catch::Approx(21.5 + 36.7 * std::log10(0.5)).margin(1e-12));
    CHECK(pathloss_db(0.5) == Catch::Approx(10.453).margin(1e-3));
    CHECK(pathloss_db(10.0) == Catch::Approx(58.2).margin(1e-12));
    CHECK_THROWS_AS(pathloss_db(0.0), std::invalid_argument);
    CHECK_THROWS_AS(pathloss_db(-1.0), std::invalid_argument);

    // strictly increasing in distance
    double prev = pathloss_db(0.01);
    for (double d : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0}) {
        double pl = pathloss_db(d);
        CHECK(pl > prev);
        prev = pl;
    }

    // the intercept root: distance where the model crosses 0 dB
    double root = std::pow(10.0, -21.5 / 36.7);
    CHECK(pathloss_db(root) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("link budget composition") {
    LinkBudget budget;
    double snr_db = 10.0 * std::log10(snr_from_budget(budget, 0.25));
    CHECK(snr_db == Catch::Approx(145.5957).margin(1e-3));

    LinkBudget wide = budget;
    wide.bandwidth_hz *= 2.0;
    double diff = snr_db - 10.0 * std::log10(snr_from_budget(wide, 0.25));
    CHECK(diff == Catch::Approx(10.0 * std::log10(2.0)).margin(1e-9));
}

TEST_CASE("fading sample moments") {
    std::mt19937_64 rng = substream_rng(201, 0);
    const std::size_t draws = 1000000;
    double sum_mag2 = 0.0, sum_re = 0.0, sum_im = 0.0, sum_re4 = 0.0, sum_re2 = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        ComplexSample h = rayleigh_sample(rng);
        sum_mag2 += std::norm(h);
        sum_re += h.real();
        sum_im += h.imag();
        sum_re2 += h.real() * h.real();
        sum_re4 += std::pow(h.real(), 4);
    }
    const auto n = static_cast<double>(draws);
    CHECK(sum_mag2 / n == Catch::Approx(1.0).margin(0.01));
    CHECK(sum_re / n == Catch::Approx(0.0).margin(0.01));
    CHECK(sum_im / n == Catch::Approx(0.0).margin(0.01));
    // component kurtosis of a Gaussian is 3
    double var = sum_re2 / n;
    CHECK(sum_re4 / n / (var * var) == Catch::Approx(3.0).epsilon(0.05));
}

TEST_CASE("fading streams are reproducible") {
    std::mt19937_64 a = substream_rng(7, 3), b = substream_rng(7, 3), c = substream_rng(7, 4);
    ComplexSample ha = rayleigh_sample(a), hb = rayleigh_sample(b), hc = rayleigh_sample(c);
    CHECK(ha == hb);
    CHECK(ha != hc);
}

TEST_CASE("channel application") {
    std::vector<ComplexSample> x(1000, ComplexSample{1.0, -0.5});

    SECTION("noiseless limit is exact") {
        std::mt19937_64 rng = substream_rng(203, 0);
        auto y = apply_channel(x, {{0.3, 0.4}, 0.0}, rng);
        for (std::size_t j = 0; j < x.size(); ++j)
            REQUIRE(y[j] == ComplexSample{0.3, 0.4} * x[j]);
    }

    SECTION("noise variance matches the configuration") {
        const double sigma2 = 0.7;
        std::vector<ComplexSample> zeros(1000000, ComplexSample{0.0, 0.0});
        std::mt19937_64 rng = substream_rng(205, 0);
        auto y = apply_channel(zeros, {{1.0, 0.0}, sigma2}, rng);
        double acc = 0.0;
        for (const auto& s : y) acc += std::norm(s);
        CHECK(acc / static_cast<double>(y.size()) == Catch::Approx(sigma2).epsilon(0.02));
    }

    SECTION("identical seeds give identical noise") {
        std::mt19937_64 r1 = substream_rng(207, 0), r2 = substream_rng(207, 0);
        auto y1 = apply_channel(x, {{1.0, 0.0}, 1.0}, r1);
        auto y2 = apply_channel(x, {{1.0, 0.0}, 1.0}, r2);
        REQUIRE(y1 == y2);
    }
}
