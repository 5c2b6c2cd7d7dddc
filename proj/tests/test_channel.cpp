#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "risnoma/channel.hpp"
#include "test_support.hpp"

using Catch::Approx;
using namespace risnoma;
using risnoma::testing::db;
using risnoma::testing::default_config;
using risnoma::testing::passive_variant;

TEST_CASE("ADC distortion factor") {
    CHECK(lambda_q_of_bits(std::nullopt) == 1.0);
    // optimal 1-bit quantizer of a unit Gaussian has distortion 1 - 2/pi
    CHECK(lambda_q_of_bits(1) == Approx(0.6366197723675813430755).epsilon(1e-6));
    CHECK(lambda_q_of_bits(2) == Approx(0.882518).margin(1e-4));
    CHECK(lambda_q_of_bits(3) == Approx(0.965452).margin(1e-4));
    CHECK(lambda_q_of_bits(4) == Approx(0.990499).margin(1e-4));
    CHECK(lambda_q_of_bits(5) == Approx(0.997495).margin(1e-4));

    double prev = 0.0;
    for (int b = 1; b <= 12; ++b) {
        const double lam = lambda_q_of_bits(b);
        CHECK(lam > prev);
        CHECK(lam < 1.0);
        prev = lam;
    }
    CHECK(1.0 - lambda_q_of_bits(12) < 1e-6);
    CHECK_THROWS_AS(lambda_q_of_bits(0), std::domain_error);
    CHECK_THROWS_AS(lambda_q_of_bits(-3), std::domain_error);
}

TEST_CASE("path gain") {
    CHECK(path_gain(1.0, 2.2) == 1.0);
    CHECK(path_gain(10.0, 2.0) == Approx(0.01).epsilon(1e-14));
    CHECK(path_gain(11.1803, 2.2) ==
          Approx(0.004936309645892893707557).epsilon(1e-12));
    // BS (0,0) to RIS (10,5)
    const auto cfg = default_config();
    CHECK(path_gain(cfg.d_sr(), 2.2) ==
          Approx(0.004936270901760077092565).epsilon(1e-12));
    CHECK_THROWS_AS(path_gain(0.0, 2.2), std::domain_error);
    CHECK_THROWS_AS(path_gain(-1.0, 2.2), std::domain_error);
}

TEST_CASE("interference term theta_j") {
    auto cfg = default_config();
    SECTION("ideal hardware collapses the last stage") {
        cfg.hardware.kappa_t_bs = 0.0;
        cfg.hardware.kappa_r = {0.0, 0.0, 0.0};
        CHECK(theta_j(cfg, 3, 3) == Approx(0.0).margin(1e-15));
        // j < K keeps the un-cancelled superposition share
        CHECK(theta_j(cfg, 3, 1) == Approx(0.55).epsilon(1e-13));
    }
    SECTION("1-bit value from the definition") {
        cfg.hardware.adc_bits = 1;
        const double lam = lambda_q_of_bits(1);
        const double expected = lam * lam * (0.55 - 1.0) + lam * 2.28;
        CHECK(theta_j(cfg, 1, 1) == Approx(expected).epsilon(1e-13));
        CHECK(theta_j(cfg, 1, 1) == Approx(1.269114950441877).epsilon(1e-5));
    }
    CHECK_THROWS_AS(theta_j(cfg, 4, 1), std::domain_error);
    CHECK_THROWS_AS(theta_j(cfg, 2, 3), std::domain_error);
}

TEST_CASE("threshold scale phi_j and phi_star") {
    auto cfg = default_config();
    SECTION("ideal hardware reduction for the last user") {
        cfg.hardware.kappa_t_bs = 0.0;
        cfg.hardware.kappa_r = {0.0, 0.0, 0.0};
        cfg.sic.epsilon = 0.0;
        const double gth = cfg.link.gamma_th(3);
        const double expected = gth / (49.0 * cfg.link.rho_s * 0.25);
        CHECK(phi_j(cfg, RisMode::kActive, 3, 3) == Approx(expected).epsilon(1e-12));
        // passive mode drops the amplification from the denominator
        CHECK(phi_j(cfg, RisMode::kPassive, 3, 3) ==
              Approx(expected * 49.0).epsilon(1e-12));
    }
    SECTION("infeasible side condition maps to the sentinel") {
        cfg.hardware.adc_bits = 1;  // users 2 and 3 fail the margin at 1 bit
        CHECK(std::isinf(phi_j(cfg, RisMode::kActive, 2, 2)));
        CHECK(std::isinf(phi_star(cfg, RisMode::kActive, 2)));
        CHECK(std::isfinite(phi_j(cfg, RisMode::kActive, 1, 1)));
        CHECK(std::isfinite(phi_star(cfg, RisMode::kActive, 1)));
    }
    SECTION("phi_star is the max over decode stages") {
        double m = 0.0;
        for (int j = 1; j <= 3; ++j) {
            m = std::max(m, phi_j(cfg, RisMode::kActive, 3, j));
        }
        CHECK(phi_star(cfg, RisMode::kActive, 3) == m);
    }
}

namespace {

// Straight-line transcription of the stage SINR, kept deliberately separate
// from the library implementation.
double sinr_reference(const SystemConfig& cfg, int k, int j, double xi_sq,
                      double g_norm_sq, double h_i_sq) {
    const double lam = lambda_q_of_bits(cfg.hardware.adc_bits);
    const double beta2 = cfg.ris.beta * cfg.ris.beta;
    const double rho = cfg.link.rho_s;
    const double dsr = std::pow(cfg.d_sr(), cfg.topology.alpha);
    const double dk = std::pow(cfg.d_user(k), cfg.topology.alpha);
    double tail = 0.0;
    for (int i = j + 1; i <= cfg.users(); ++i) tail += cfg.power_alloc.a[i - 1];
    const double kr = cfg.hardware.kappa_r[k - 1];
    const double theta = lam * lam * (tail - 1.0) +
                         lam * (1.0 + cfg.hardware.kappa_t_bs * cfg.hardware.kappa_t_bs +
                                kr * kr);
    const double num = lam * lam * beta2 * xi_sq * rho * cfg.power_alloc.a[j - 1];
    const double den = beta2 * xi_sq * rho * theta +
                       dsr * beta2 * (cfg.ris.n_r / cfg.link.n0) * g_norm_sq * lam +
                       dsr * dk * (lam * lam + cfg.sic.epsilon * rho * h_i_sq);
    return num / den;
}

} // namespace

TEST_CASE("stage SINR") {
    SECTION("zero cascaded gain gives zero SINR") {
        const auto cfg = default_config();
        for (int k = 1; k <= 3; ++k) {
            for (int j = 1; j <= k; ++j) {
                CHECK(sinr(cfg, k, j, 0.0, 5.0, 1.0) == 0.0);
            }
        }
    }
    SECTION("ideal hardware, unit geometry NOMA value") {
        SystemConfig cfg = default_config();
        cfg.topology.bs_pos = {0.0, 0.0};
        cfg.topology.ris_pos = {1.0, 0.0};
        cfg.topology.user_pos = {{1.0, 1.0}, {2.0, 0.0}, {1.0, -1.0}};
        cfg.hardware.kappa_t_bs = 0.0;
        cfg.hardware.kappa_r = {0.0, 0.0, 0.0};
        cfg.hardware.adc_bits = std::nullopt;
        cfg.sic.epsilon = 0.0;
        cfg.ris.mode = RisMode::kPassive;
        cfg.ris.beta = 1.0;
        cfg.ris.n_r = 0.0;
        cfg.link.rho_s = 10.0;
        // beta^2 xi^2 rho / (d_sr^a d_K^a) = 10 with xi^2 = 1 and unit spans
        CHECK(sinr(cfg, 3, 3, 1.0, 3.0, 0.0) == Approx(2.5).epsilon(1e-12));
    }
    SECTION("matches an independent transcription on random draws") {
        std::mt19937_64 gen(2024);
        std::uniform_real_distribution<double> mag(0.0, 40.0);
        std::uniform_int_distribution<int> bits(1, 8);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int t = 0; t < 500; ++t) {
            auto cfg = default_config();
            if (unit(gen) < 0.3) cfg = passive_variant(cfg);
            if (unit(gen) < 0.5) cfg.hardware.adc_bits = bits(gen);
            if (unit(gen) < 0.3) cfg.sic.epsilon = 0.0;
            cfg.link.rho_s = db(40.0 * unit(gen));
            const int k = 1 + static_cast<int>(unit(gen) * 3.0);
            const int j = 1 + static_cast<int>(unit(gen) * k);
            const double xi_sq = mag(gen);
            const double gn = mag(gen);
            const double hi = mag(gen) * 0.1;
            CHECK(sinr(cfg, k, j, xi_sq, gn, hi) ==
                  Approx(sinr_reference(cfg, k, j, xi_sq, gn, hi)).epsilon(1e-12));
        }
    }
    SECTION("monotone in the channel magnitudes") {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> mag(0.01, 30.0);
        const auto cfg = default_config();  // epsilon > 0
        for (int t = 0; t < 200; ++t) {
            const int k = 1 + static_cast<int>(mag(gen)) % 3;
            const int j = 1 + (t % k);
            const double gn = mag(gen);
            const double hi = mag(gen);
            double x1 = mag(gen), x2 = mag(gen);
            if (x1 > x2) std::swap(x1, x2);
            CHECK(sinr(cfg, k, j, x1, gn, hi) < sinr(cfg, k, j, x2, gn, hi));
            double h1 = mag(gen), h2 = mag(gen);
            if (h1 > h2) std::swap(h1, h2);
            const double xi = mag(gen);
            CHECK(sinr(cfg, k, j, xi, gn, h1) > sinr(cfg, k, j, xi, gn, h2));
        }
    }
    SECTION("passive mode equals the active formula with beta=1, n_r=0") {
        auto active = default_config();
        active.ris.beta = 1.0;
        active.ris.n_r = 0.0;
        const auto passive = passive_variant(default_config());
        for (int k = 1; k <= 3; ++k) {
            for (int j = 1; j <= k; ++j) {
                CHECK(sinr(active, k, j, 3.7, 9.1, 0.4) ==
                      sinr(passive, k, j, 3.7, 9.1, 0.4));
            }
        }
    }
    SECTION("ideal hardware and perfect SIC reduce to the textbook ratio") {
        auto cfg = default_config();
        cfg.hardware.kappa_t_bs = 0.0;
        cfg.hardware.kappa_r = {0.0, 0.0, 0.0};
        cfg.sic.epsilon = 0.0;
        cfg.ris.n_r = 0.0;
        const double xi_sq = 4.2;
        const double dsr = std::pow(cfg.d_sr(), cfg.topology.alpha);
        for (int j = 1; j <= 3; ++j) {
            const double dk = std::pow(cfg.d_user(3), cfg.topology.alpha);
            double tail = 0.0;
            for (int i = j + 1; i <= 3; ++i) tail += cfg.power_alloc.a[i - 1];
            const double noise = dsr * dk / (49.0 * xi_sq * cfg.link.rho_s);
            CHECK(sinr(cfg, 3, j, xi_sq, 7.0, 0.0) ==
                  Approx(cfg.power_alloc.a[j - 1] / (tail + noise)).epsilon(1e-12));
        }
    }
    SECTION("argument validation") {
        const auto cfg = default_config();
        CHECK_THROWS_AS(sinr(cfg, 0, 1, 1.0, 1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(sinr(cfg, 2, 3, 1.0, 1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(sinr(cfg, 2, 1, -1.0, 1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(sinr(cfg, 2, 1, 1.0, -1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(sinr(cfg, 2, 1, 1.0, 1.0, -0.5), std::domain_error);
    }
}

TEST_CASE("scenario validation catches invariant violations") {
    CHECK_NOTHROW(default_config().validate());
    {
        auto cfg = default_config();
        cfg.power_alloc.a = {0.30, 0.45, 0.25};
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.power_alloc.a = {0.5, 0.3, 0.3};
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.ris.mode = RisMode::kPassive;  // beta still 7
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.ris.beta = 0.5;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.hardware.kappa_r = {0.8, 0.8};
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.topology.user_pos.pop_back();
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.topology.alpha = 0.0;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.topology.user_pos[0] = cfg.topology.ris_pos;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.sic.epsilon = 1.5;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.link.rates = {0.15, -0.1, 0.15};
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.ris.m_elements = 0;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
    {
        auto cfg = default_config();
        cfg.hardware.adc_bits = 0;
        CHECK_THROWS_AS(cfg.validate(), config_error);
    }
}
