#ifndef IFEQ_SIMULATOR_HPP
#define IFEQ_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ifeq/cyclic_code.hpp"
#include "ifeq/dsp.hpp"
#include "ifeq/lattice.hpp"
#include "ifeq/poly.hpp"

namespace ifeq {

struct RandomChannelSpec {
    int p = 3;
    std::uint64_t seed = 0;
};

enum class DecoderKind { Auto, Ml, Hard, Slicer };

struct SimConfig {
    Poly channel = Poly{1.0};
    std::optional<RandomChannelSpec> random_channel;  // draws i.i.d. N(0,1) taps
    double snr_db = 20.0;
    EqMode mode = EqMode::ZF;
    std::optional<CyclicCode> code;  // nullopt: uncoded transmission
    int M = 0;                       // >0: multilevel layers over a binary code
    int n_max = 0;                   // 0: default sweep bound for the channel
    long long q = 4;                 // alphabet for uncoded runs
    long long trials = 1000;
    int block_len = 64;              // block length N for uncoded runs
    std::uint64_t seed = 1;
    std::optional<bool> dither;      // default: off for ZF, on for MMSE
    bool noiseless = false;          // switch the AWGN off entirely
    DecoderKind decoder = DecoderKind::Auto;
    std::optional<IntFilter> force_filter;  // bypass the lattice search
    int threads = 0;                 // 0: hardware concurrency
    long long noise_samples = 200'000;  // stream length for residual calibration

    double snr_linear() const;
    bool dither_enabled() const;
    Poly resolve_channel() const;  // draws the random channel when configured
};

struct SimResult {
    IntFilter filter;
    int n_used = 0;
    double sigma2_analytic = 0.0;   // quadratic form in the run's design mode
    double sigma2_zf_dfe = 0.0;
    double gamma_analytic = 0.0;
    double bound = 0.0;             // noise-enhancement bound (linear)
    double sigma2_empirical = 0.0;  // stream-measured FFE residual variance
    double gamma_empirical = 0.0;
    std::vector<double> noise_autocorr;

    long long trials = 0;
    long long data_symbols_per_block = 0;
    long long symbol_errors = 0;
    long long symbols = 0;
    long long block_errors = 0;
    double ser = 0.0, ser_lo = 0.0, ser_hi = 0.0;     // Wilson 95% interval
    double bler = 0.0, bler_lo = 0.0, bler_hi = 0.0;
    double runtime_sec = 0.0;
    std::uint64_t seed = 0;
    long long N = 0;
    long long q = 0;
};

SimResult run(const SimConfig& config);

struct WilsonInterval {
    double lo = 0.0, hi = 0.0;
};
WilsonInterval wilson_interval(long long successes, long long total, double z = 1.959963985);

// ---- figure sweeps -------------------------------------------------------

struct TwoTapRealRow {
    double a = 0.0;
    double gamma = 0.0;           // measured by the filter search
    double gamma_analytic = 0.0;  // min(1/(1-a^2), 2/(1+|a|))
    double bound = 0.0;           // noise-enhancement bound at p = 1
    double zf_le = 0.0;           // 1/(1-a^2)
    IntFilter filter;
};
std::vector<TwoTapRealRow> two_tap_real_rows(const std::vector<double>& a_grid, int threads = 0);
void write_two_tap_real_csv(std::ostream& os, const std::vector<TwoTapRealRow>& rows,
                            const std::string& config_json);

struct TwoTapComplexRow {
    double re = 0.0, im = 0.0;
    double gamma_db = 0.0;
    double zf_le_db = 0.0;
    double bound_db = 0.0;
    IntFilter filter;
};
std::vector<TwoTapComplexRow> two_tap_complex_rows(double step, double max_abs, int threads = 0);
void write_two_tap_complex_csv(std::ostream& os, const std::vector<TwoTapComplexRow>& rows,
                               const std::string& config_json);

struct RandomPdfSweep {
    int p = 0;
    std::vector<double> gamma_db;   // one entry per sample, sample order
    std::vector<double> bound_db;
    double median_db = 0.0;
    long long redraws = 0;          // channels rejected near the unit circle
};
RandomPdfSweep random_channel_pdf(int p, long long samples, std::uint64_t seed, int threads = 0);
// Binned pdf rows with Freedman-Diaconis bins when bin_width <= 0.
void write_random_pdf_csv(std::ostream& os, const std::vector<RandomPdfSweep>& sweeps,
                          double bin_width, const std::string& config_json);

struct DelayCheckRow {
    int p = 0;
    double gamma = 0.0;
    bool gamma_matches = false;     // equals the p=1 value within 1e-6 relative
    bool filter_matches = false;    // upsampled reference filter, or a sigma2 tie
    IntFilter filter;
};
struct DelayCheckReport {
    double gamma_ref = 0.0;         // p = 1
    IntFilter filter_ref;
    std::vector<DelayCheckRow> rows;
    bool all_match = false;
};
DelayCheckReport delay_invariance_check(cplx a, const std::vector<int>& p_list);

}  // namespace ifeq

#endif
