#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracle_helpers.hpp"
#include "pnask/analytic.hpp"
#include "pnask/montecarlo.hpp"
#include "pnask/types.hpp"

using namespace pnask;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

SimConfig sim_config(int m, int m_c, double d, double es_n0_db, const ChannelModel& model,
                     std::int64_t n, std::uint64_t seed) {
    SimConfig config;
    config.m = m;
    config.m_c = m_c;
    config.d = d;
    config.channel = model;
    config.es_n0_db = es_n0_db;
    config.n_symbols = n;
    config.seed = seed;
    config.threads = 2;
    return config;
}

}  // namespace

TEST_CASE("mpsk ser closed forms") {
    // BPSK: Q(sqrt(2 gamma)).
    CHECK(mpsk_ser_awgn(1.0, 2) ==
          doctest::Approx(oracle::norm_q(std::sqrt(2.0))).epsilon(1e-10));
    CHECK(mpsk_ser_awgn(1.0, 2) == doctest::Approx(0.0786496).epsilon(1e-5));

    // QPSK: 2q - q^2 with q = Q(sqrt(gamma)).
    for (double gamma : {0.25, 1.0, 4.0, 10.0, 25.0}) {
        CHECK(mpsk_ser_awgn(gamma, 4) ==
              doctest::Approx(oracle::qpsk_ser(gamma)).epsilon(1e-10));
    }
}

TEST_CASE("mpsk ser against simulation") {
    const double gamma = db_to_linear(10.0);
    const double analytic = mpsk_ser_awgn(gamma, 8);
    const auto r =
        estimate_ser(sim_config(8, 1, 0.0, 10.0, ChannelModel::awgn(), 1000000, 314));
    const double sigma = std::sqrt(analytic * (1 - analytic) / static_cast<double>(r.n));
    CHECK(std::abs(analytic - r.ser_primary) <= 3 * sigma);
}

TEST_CASE("covert ser awgn against a decision-region oracle") {
    const CovertCodingMap map = build_coding_map(2, 0.5);
    const double es_n0 = db_to_linear(10.0);
    const auto region = oracle::awgn_region_probabilities(4, 2, 0.5, es_n0);
    CHECK(region.mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(covert_ser_awgn(es_n0, map) ==
          doctest::Approx(region.covert_error).epsilon(2e-4));
    CHECK(primary_ser_awgn(es_n0, 4, map) ==
          doctest::Approx(region.primary_error).epsilon(2e-4));

    const auto four = oracle::awgn_region_probabilities(8, 4, 0.1, db_to_linear(12.0));
    CHECK(covert_ser_awgn(db_to_linear(12.0), build_coding_map(4, 0.1)) ==
          doctest::Approx(four.covert_error).epsilon(2e-4));
    CHECK(primary_ser_awgn(db_to_linear(12.0), 8, build_coding_map(4, 0.1)) ==
          doctest::Approx(four.primary_error).epsilon(2e-4));
}

TEST_CASE("covert ser awgn against simulation") {
    const CovertCodingMap map = build_coding_map(2, 0.5);
    const double analytic = covert_ser_awgn(db_to_linear(10.0), map);
    const auto r =
        estimate_ser(sim_config(4, 2, 0.5, 10.0, ChannelModel::awgn(), 400000, 2718));
    const double sigma = std::sqrt(analytic * (1 - analytic) / static_cast<double>(r.n));
    CHECK(std::abs(analytic - r.ser_covert) <= 3 * sigma);
}

TEST_CASE("single-level map has no covert errors") {
    for (double db : {0.0, 10.0, 20.0}) {
        CHECK(covert_ser_awgn(db_to_linear(db), build_coding_map(1)) == 0.0);
    }
}

TEST_CASE("ser is monotone in snr and bounded") {
    const CovertCodingMap map = build_coding_map(4, 0.2);
    double prev_c = 1.1;
    double prev_p = 1.1;
    for (double db = 0.0; db <= 25.0; db += 0.5) {
        const double es_n0 = db_to_linear(db);
        const double c = covert_ser_awgn(es_n0, map);
        const double p = primary_ser_awgn(es_n0, 8, map);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(c <= prev_c + 1e-12);
        CHECK(p <= prev_p + 1e-12);
        prev_c = c;
        prev_p = p;
    }
}

TEST_CASE("snr validation and the noiseless limit") {
    const CovertCodingMap map = build_coding_map(2, 0.5);
    CHECK_THROWS_AS(covert_ser_awgn(0.0, map), std::invalid_argument);
    CHECK_THROWS_AS(covert_ser_awgn(-1.0, map), std::invalid_argument);
    CHECK_THROWS_AS(covert_ser_awgn(std::numeric_limits<double>::quiet_NaN(), map),
                    std::invalid_argument);
    CHECK_THROWS_AS(primary_ser_awgn(0.0, 4, map), std::invalid_argument);
    CHECK_THROWS_AS(mpsk_ser_awgn(-2.0, 4), std::invalid_argument);

    CHECK(covert_ser_awgn(kInf, map) == 0.0);
    CHECK(primary_ser_awgn(kInf, 4, map) == 0.0);
    CHECK(mpsk_ser_awgn(kInf, 8) == 0.0);
}

TEST_CASE("primary ser nests mpsk and grows with the amplitude step") {
    for (double db : {0.0, 6.0, 12.0}) {
        const double es_n0 = db_to_linear(db);
        CHECK(primary_ser_awgn(es_n0, 8, build_coding_map(1)) ==
              doctest::Approx(mpsk_ser_awgn(es_n0, 8)).epsilon(1e-12));
    }
    // Deeper amplitude steps push levels toward the origin and cost the
    // primary stream energy.
    const double es_n0 = db_to_linear(10.0);
    double prev = 0.0;
    for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double p = primary_ser_awgn(es_n0, 4, build_coding_map(2, d));
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("primary ser against simulation at low snr") {
    const double d = 0.0333333333333333;
    const double analytic = primary_ser_awgn(db_to_linear(0.0), 4, build_coding_map(4, d));
    const auto r = estimate_ser(sim_config(4, 4, d, 0.0, ChannelModel::awgn(), 400000, 99));
    const double sigma = std::sqrt(analytic * (1 - analytic) / static_cast<double>(r.n));
    CHECK(std::abs(analytic - r.ser_primary) <= 3 * sigma);
}

TEST_CASE("fading ser requires a fading model") {
    CHECK_THROWS_AS(ser_fading(10.0, ChannelModel::awgn(),
                               [](double g) { return mpsk_ser_awgn(g, 4); }),
                    std::invalid_argument);
}

TEST_CASE("nearly deterministic rician matches awgn") {
    // K = 1e4 with E[|h|^2] = 1 concentrates |h|^2 at 1.
    const ChannelModel almost_line = ChannelModel::rician(1e4, std::sqrt(0.5));
    const double es_n0 = db_to_linear(8.0);
    const double awgn = mpsk_ser_awgn(es_n0, 4);
    const double faded =
        ser_fading(es_n0, almost_line, [](double g) { return mpsk_ser_awgn(g, 4); });
    CHECK(faded == doctest::Approx(awgn).epsilon(0.01));
}

TEST_CASE("rayleigh fading dominates awgn at high snr") {
    const CovertCodingMap map = build_coding_map(4, 0.2);
    const ChannelModel rayleigh = ChannelModel::rayleigh(std::sqrt(0.5));
    const double es_n0 = db_to_linear(20.0);
    CHECK(covert_ser(es_n0, map, rayleigh) > covert_ser_awgn(es_n0, map));
    CHECK(primary_ser(es_n0, 4, map, rayleigh) > primary_ser_awgn(es_n0, 4, map));
}

TEST_CASE("fading ser against simulation") {
    const CovertCodingMap map = build_coding_map(4, 0.2);
    const ChannelModel model = ChannelModel::rayleigh(1.0);
    const double db = 10.0;
    const double pc = covert_ser(db_to_linear(db), map, model);
    const double pp = primary_ser(db_to_linear(db), 4, map, model);
    const auto r = estimate_ser(sim_config(4, 4, 0.2, db, model, 200000, 512));
    const double n = static_cast<double>(r.n);
    CHECK(std::abs(pc - r.ser_covert) <= 3 * std::sqrt(pc * (1 - pc) / n));
    CHECK(std::abs(pp - r.ser_primary) <= 3 * std::sqrt(pp * (1 - pp) / n));
}

TEST_CASE("lognormal fading ser is finite and ordered") {
    const CovertCodingMap map = build_coding_map(2, 0.4);
    const ChannelModel model = ChannelModel::lognormal(0.0, 0.5);
    double prev = 1.1;
    for (double db : {0.0, 10.0, 20.0}) {
        const double p = covert_ser(db_to_linear(db), map, model);
        CHECK(p > 0.0);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("energy per symbol closed forms") {
    CHECK(energy_per_symbol(1.0, build_coding_map(1)) == doctest::Approx(1.0));
    // Mean of {1, 0.25} squared levels: (1 + 0.25) / 2.
    CHECK(energy_per_symbol(1.0, build_coding_map(2, 0.5)) == doctest::Approx(0.625));
    // Levels 1, .8, .6, .4 -> mean square (1 + .64 + .36 + .16)/4 = 0.54.
    CHECK(energy_per_symbol(1.0, build_coding_map(4, 0.2)) == doctest::Approx(0.54));
    CHECK(energy_per_symbol(3.0, build_coding_map(4, 0.2)) == doctest::Approx(3 * 0.54));
    CHECK(energy_per_symbol(1.0, build_coding_map(8, 0.1)) <= 1.0);
}

TEST_CASE("mean energy decreases with covert order at fixed step fraction") {
    const double fraction = 0.7;
    double prev = 2.0;
    for (int mc : {1, 2, 4, 8, 16}) {
        const double d = mc > 1 ? fraction / (mc - 1) : 0.0;
        const double e = energy_per_symbol(1.0, build_coding_map(mc, d));
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("measured energy tracks the closed form") {
    Rng rng = make_stream_rng(31337, 0);
    for (const auto& [mc, d] : std::vector<std::pair<int, double>>{
             {2, 0.5}, {2, 0.2}, {4, 0.2}, {8, 0.1}}) {
        const CovertCodingMap map = build_coding_map(mc, d);
        std::uniform_int_distribution<int> covert(0, mc - 1);
        std::uniform_int_distribution<int> primary(0, 7);
        const int n = 300000;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += std::norm(pnask_modulate({primary(rng), covert(rng)}, 8, map));
        }
        CHECK(acc / n == doctest::Approx(energy_per_symbol(1.0, map)).epsilon(0.005));
    }
}

TEST_CASE("rate from ser") {
    const double t_s = 4e-6;
    CHECK(rate_from_ser(0.0, t_s) == doctest::Approx(1.0 / t_s));
    CHECK(rate_from_ser(1.0, t_s) == 0.0);
    CHECK(rate_from_ser(0.25, t_s) == doctest::Approx(0.75 / t_s));
    CHECK_THROWS_AS(rate_from_ser(-0.1, t_s), std::invalid_argument);
    CHECK_THROWS_AS(rate_from_ser(1.1, t_s), std::invalid_argument);
    CHECK_THROWS_AS(rate_from_ser(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("symbol goodput combines the two sers") {
    const CovertCodingMap map = build_coding_map(2, 0.4);
    const double t_s = 4e-6;
    const double es_n0 = db_to_linear(12.0);
    const ChannelModel model = ChannelModel::awgn();
    const RatePair pair = symbol_goodput(es_n0, 8, map, t_s, model);
    CHECK(pair.r_p == doctest::Approx(rate_from_ser(primary_ser(es_n0, 8, map, model), t_s)));
    CHECK(pair.r_c == doctest::Approx(rate_from_ser(covert_ser(es_n0, map, model), t_s)));
}

TEST_CASE("goodput moves oppositely in the amplitude step under fading") {
    // Shrinking the step favors the primary stream; widening it favors the
    // covert stream.
    const ChannelModel model = ChannelModel::rayleigh(std::sqrt(0.5));
    const double es_n0 = db_to_linear(15.0);
    const double t_s = 4e-6;
    std::vector<RatePair> rates;
    for (double d : {0.2, 0.4, 0.7}) {
        rates.push_back(symbol_goodput(es_n0, 8, build_coding_map(2, d), t_s, model));
    }
    CHECK(rates[0].r_p > rates[1].r_p);
    CHECK(rates[1].r_p > rates[2].r_p);
    CHECK(rates[0].r_c < rates[1].r_c);
    CHECK(rates[1].r_c < rates[2].r_c);
}
