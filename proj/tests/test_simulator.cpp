#include <cmath>

#include "checks.hpp"
#include "ifeq/errors.hpp"
#include "ifeq/json_io.hpp"
#include "ifeq/rng.hpp"
#include "ifeq/simulator.hpp"
#include "ifeq/spectral.hpp"

using namespace ifeq;

// Exact symbol error probability of q-PAM on the mod-interval channel with
// N(0, sigma^2) noise: fold the Gaussian over the interval.
static double pam_mod_ser(long long q, double snr, double sigma2) {
    const Constellation cst(q, snr);
    const double tau = cst.delta / (2.0 * static_cast<double>(q));
    const double sigma = std::sqrt(sigma2);
    auto Phi = [&](double v) { return 0.5 * std::erfc(-v / (sigma * std::sqrt(2.0))); };
    double correct = 0.0;
    for (int m = -8; m <= 8; ++m) {
        const double shift = static_cast<double>(m) * cst.delta;
        correct += Phi(tau + shift) - Phi(-tau + shift);
    }
    return 1.0 - correct;
}

static void test_noiseless_runs() {
    // uncoded, coded and multilevel chains recover exactly without noise
    SimConfig cfg;
    cfg.channel = Poly{1.0, 0.4, -0.2};
    cfg.snr_db = 30.0;
    cfg.mode = EqMode::ZF;
    cfg.q = 4;
    cfg.trials = 200;
    cfg.block_len = 32;
    cfg.noiseless = true;
    cfg.noise_samples = 0;
    cfg.seed = 5;
    CHECK(run(cfg).symbol_errors == 0);

    cfg.code = CyclicCode::parity5();
    CHECK(run(cfg).symbol_errors == 0);

    cfg.code = CyclicCode::hamming74();
    cfg.M = 3;
    CHECK(run(cfg).symbol_errors == 0);

    // MMSE with dither at high snr: residual ISI is negligible
    cfg.M = 0;
    cfg.code = CyclicCode::parity5();
    cfg.mode = EqMode::MMSE;
    cfg.snr_db = 120.0;
    CHECK(run(cfg).symbol_errors == 0);
}

static void test_reproducibility() {
    SimConfig cfg;
    cfg.channel = Poly{1.0, 0.6};
    cfg.snr_db = 14.0;
    cfg.q = 4;
    cfg.trials = 400;
    cfg.block_len = 24;
    cfg.seed = 42;
    cfg.noise_samples = 50'000;

    cfg.threads = 1;
    const auto a = run(cfg);
    cfg.threads = 2;
    const auto b = run(cfg);
    cfg.threads = 3;
    const auto c = run(cfg);
    CHECK(a.symbol_errors == b.symbol_errors && b.symbol_errors == c.symbol_errors);
    CHECK(a.block_errors == b.block_errors && b.block_errors == c.block_errors);
    CHECK(a.ser == b.ser && b.ser == c.ser);
    CHECK(a.sigma2_empirical == b.sigma2_empirical);
    CHECK(b.sigma2_empirical == c.sigma2_empirical);
    CHECK(a.filter == b.filter);

    // JSON round trip of the config yields the same result
    const auto j = io::sim_config_to_json(cfg);
    const auto cfg2 = io::sim_config_from_json(j);
    const auto d = run(cfg2);
    CHECK(d.symbol_errors == c.symbol_errors);
    CHECK(d.ser == c.ser);
}

static void test_known_ser_and_wilson_coverage() {
    // flat channel, identity filter: SER has a closed form
    const long long q = 4;
    const double snr_db = 12.0;
    const double truth = pam_mod_ser(q, std::pow(10.0, snr_db / 10.0), 1.0);
    CHECK(truth > 0.01 && truth < 0.5);

    int covered = 0;
    const int experiments = 100;
    for (int e = 0; e < experiments; ++e) {
        SimConfig cfg;
        cfg.channel = Poly{1.0};
        cfg.snr_db = snr_db;
        cfg.q = q;
        cfg.trials = 50;
        cfg.block_len = 16;
        cfg.seed = 1000 + static_cast<std::uint64_t>(e);
        cfg.force_filter = IntFilter({1});
        cfg.noise_samples = 0;
        const auto r = run(cfg);
        if (truth >= r.ser_lo && truth <= r.ser_hi) ++covered;
    }
    CHECK_MSG(covered >= 93, "Wilson coverage " + std::to_string(covered) + "/100");
}

static void test_integer_forcing_beats_zf_le() {
    // strong two-tap ISI: the searched filter wins over plain inversion
    SimConfig cfg;
    cfg.channel = Poly{1.0, 0.9};
    cfg.snr_db = 17.0;
    cfg.q = 4;
    cfg.trials = 500;
    cfg.block_len = 32;
    cfg.seed = 7;
    cfg.noise_samples = 0;

    const auto if_run = run(cfg);
    CHECK((if_run.filter.re == std::vector<long long>{1, 1}));

    cfg.force_filter = IntFilter({1});  // ZF-LE
    const auto le_run = run(cfg);
    CHECK_MSG(if_run.ser < le_run.ser,
              "IF ser " + std::to_string(if_run.ser) + " vs LE " + std::to_string(le_run.ser));
    // and the analytic enhancements order the same way
    CHECK(if_run.gamma_analytic < le_run.gamma_analytic);
}

static void test_empirical_gamma_matches() {
    SimConfig cfg;
    cfg.channel = Poly{1.0, 0.7, 0.2};
    cfg.snr_db = 15.0;
    cfg.q = 4;
    cfg.trials = 10;
    cfg.block_len = 32;
    cfg.seed = 9;
    cfg.noise_samples = 1'000'000;

    cfg.mode = EqMode::ZF;
    const auto zf = run(cfg);
    CHECK_NEAR_REL(zf.sigma2_empirical, zf.sigma2_analytic, 0.02);
    CHECK_NEAR_REL(zf.gamma_empirical, zf.gamma_analytic, 0.02);

    cfg.mode = EqMode::MMSE;
    const auto mm = run(cfg);
    CHECK_NEAR_REL(mm.sigma2_empirical, mm.sigma2_analytic, 0.02);
    CHECK(mm.sigma2_analytic <= zf.sigma2_analytic);

    // noise autocorrelation is exposed, lag 0 equals the variance
    CHECK(!zf.noise_autocorr.empty());
    CHECK_NEAR_REL(zf.noise_autocorr[0], zf.sigma2_empirical, 1e-9);
}

static void test_snr_monotonicity() {
    double prev_lo = 1.0;
    for (double snr_db : {8.0, 12.0, 16.0}) {
        SimConfig cfg;
        cfg.channel = Poly{1.0, 0.5};
        cfg.snr_db = snr_db;
        cfg.q = 4;
        cfg.trials = 300;
        cfg.block_len = 24;
        cfg.seed = 11;
        cfg.noise_samples = 0;
        const auto r = run(cfg);
        // increasing snr must not significantly worsen the error rate
        CHECK(r.ser_lo <= prev_lo + 1e-12);
        prev_lo = r.ser_hi;
    }
}

static void test_two_tap_sweep() {
    const auto rows = two_tap_real_rows({0.3, 0.49, 0.5, 0.51, 0.9});
    CHECK_NEAR_REL(rows[0].gamma, 1.0 / 0.91, 1e-6);
    CHECK((rows[0].filter.re == std::vector<long long>{1}));
    CHECK((rows[1].filter.re == std::vector<long long>{1}));         // below the crossover
    CHECK_NEAR_REL(rows[2].gamma, 4.0 / 3.0, 1e-6);                  // peak at 1/2
    CHECK((rows[3].filter.re == std::vector<long long>{1, 1}));      // above the crossover
    CHECK_NEAR_REL(rows[4].gamma, 2.0 / 1.9, 1e-6);
    for (const auto& r : rows) {
        CHECK_NEAR_REL(r.gamma, r.gamma_analytic, 1e-6);
        CHECK(r.bound >= r.gamma);
        CHECK(r.zf_le >= r.gamma - 1e-12);
    }
    CHECK_THROWS(two_tap_real_rows({1.0}), InputDomainError);
}

static void test_two_tap_complex_sweep() {
    const auto rows = two_tap_complex_rows(0.35, 0.8);
    CHECK(!rows.empty());
    double g_re = -1.0, g_im = -1.0, zf_re = -1.0, zf_im = -1.0;
    for (const auto& r : rows) {
        if (r.re == 0.35 && r.im == 0.0) {
            g_re = r.gamma_db;
            zf_re = r.zf_le_db;
        }
        if (r.re == 0.0 && r.im == 0.35) {
            g_im = r.gamma_db;
            zf_im = r.zf_le_db;
        }
        CHECK(r.bound_db >= r.gamma_db - 1e-9);
    }
    CHECK(g_re >= 0.0 && g_im >= -1e-12);
    // ZF-LE enhancement depends on |a| only
    CHECK_NEAR(zf_re, zf_im, 1e-9);
    // the real axis agrees with the real sweep
    const auto real_rows = two_tap_real_rows({0.35, 0.7});
    CHECK_NEAR(g_re, 10.0 * std::log10(real_rows[0].gamma), 1e-6);
    for (const auto& r : rows)
        if (r.re == 0.7 && r.im == 0.0)
            CHECK_NEAR(r.gamma_db, 10.0 * std::log10(real_rows[1].gamma), 1e-6);
}

static void test_delay_invariance() {
    {
        const auto rep = delay_invariance_check(cplx{0.9, 0.0}, {1, 4});
        CHECK(rep.all_match);
        CHECK_NEAR_REL(rep.gamma_ref, 2.0 / 1.9, 1e-6);
    }
    {
        const auto rep = delay_invariance_check(cplx{0.3, 0.0}, {1, 3});
        CHECK(rep.all_match);  // identity filter on both
        CHECK_NEAR_REL(rep.gamma_ref, 1.0 / 0.91, 1e-6);
    }
    {
        const auto rep = delay_invariance_check(cplx{0.5, 0.3}, {1, 3});
        CHECK(rep.all_match);
    }
}

static void test_random_pdf_small() {
    const auto sweep = random_channel_pdf(3, 1000, 21, 0);
    CHECK(sweep.gamma_db.size() == 1000);
    for (std::size_t i = 0; i < sweep.gamma_db.size(); ++i) {
        CHECK(sweep.gamma_db[i] >= -1e-9);
        CHECK(sweep.bound_db[i] >= sweep.gamma_db[i] - 1e-9);
    }
    CHECK(sweep.median_db > 0.0);
}

static void test_rejects() {
    SimConfig cfg;
    std::vector<cplx> cx{cplx{1.0, 0.0}, cplx{0.5, 0.5}};
    cfg.channel = Poly(cx);
    CHECK_THROWS(run(cfg), InputDomainError);  // complex channels: sweeps only

    SimConfig bad;
    bad.channel = Poly{1.0};
    bad.trials = 0;
    CHECK_THROWS(run(bad), InputDomainError);
}

int main() {
    test_noiseless_runs();
    test_reproducibility();
    test_known_ser_and_wilson_coverage();
    test_integer_forcing_beats_zf_le();
    test_empirical_gamma_matches();
    test_snr_monotonicity();
    test_two_tap_sweep();
    test_two_tap_complex_sweep();
    test_delay_invariance();
    test_random_pdf_small();
    test_rejects();
    return checks::summary("test_simulator");
}
