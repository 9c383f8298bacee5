#include "ifeq/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "ifeq/equalizer.hpp"
#include "ifeq/errors.hpp"
#include "ifeq/rng.hpp"
#include "ifeq/spectral.hpp"

namespace ifeq {

namespace {

constexpr std::uint64_t kMsgStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kDitherStream = 3;
constexpr long long kChunk = 512;  // fixed reduction granularity, thread-count independent

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(long long count, int threads, const std::function<void(long long)>& fn) {
    threads = static_cast<int>(std::min<long long>(std::max(1, threads), std::max(1ll, count)));
    if (threads <= 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                const long long i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct RunContext {
    Poly H;
    std::vector<double> h;
    double snr = 0.0;
    EqMode mode = EqMode::ZF;
    bool dither = false;
    bool noiseless = false;
    IntFilter filt;
    int n = 1;
    long long Q = 2;
    int N = 0;
    int data_count = 0;  // compared symbols (or bits) per block
    const CyclicCode* code = nullptr;
    int M = 0;
    DecoderKind decoder = DecoderKind::Slicer;
    std::uint64_t seed = 0;
    Constellation cst{2, 1.0};
    FfeRealization ffe;
};

struct TrialCounts {
    long long symbol_errors = 0;
    long long block_errors = 0;
};

TrialCounts simulate_trial(const RunContext& ctx, long long trial) {
    Rng msg_rng(ctx.seed, kMsgStream, static_cast<std::uint64_t>(trial));
    Rng noise_rng(ctx.seed, kNoiseStream, static_cast<std::uint64_t>(trial));
    const DitherStream dith{Rng(ctx.seed, kDitherStream, static_cast<std::uint64_t>(trial)).next_u64(),
                            ctx.cst.delta};

    const int N = ctx.N;
    const int n = ctx.n;

    // draw the message and form the block x (always ends with n-1 zeros)
    std::vector<long long> data_c;
    std::vector<std::vector<long long>> data_u;
    std::vector<long long> x;
    if (ctx.M > 0) {
        data_c.resize(static_cast<std::size_t>(ctx.code->K() - n + 1));
        for (auto& b : data_c) b = msg_rng.below(2);
        data_u.assign(static_cast<std::size_t>(ctx.M - 1),
                      std::vector<long long>(static_cast<std::size_t>(N - n + 1)));
        for (auto& blk : data_u)
            for (auto& b : blk) b = msg_rng.below(2);
        x = multilevel_encode(*ctx.code, data_c, data_u, ctx.M, n).composite();
    } else if (ctx.code) {
        data_c.resize(static_cast<std::size_t>(ctx.code->K() - n + 1));
        for (auto& s : data_c) s = msg_rng.below(ctx.Q);
        x = ctx.code->encode_zero_padded(data_c, n);
    } else {
        data_c.resize(static_cast<std::size_t>(N - n + 1));
        for (auto& s : data_c) s = msg_rng.below(ctx.Q);
        x = data_c;
        x.resize(static_cast<std::size_t>(N), 0);
    }

    std::vector<double> tx = ctx.cst.map(x);
    if (ctx.dither) tx = dither_add(tx, dith, 0);

    // received window covering the block plus the FFE span
    const long long L = static_cast<long long>(ctx.ffe.taps.size());
    const long long block_start = L - 1 - ctx.ffe.anchor;
    const long long y_len = static_cast<long long>(N) + L - 1;
    std::vector<double> y(static_cast<std::size_t>(y_len), 0.0);
    const int p = static_cast<int>(ctx.h.size()) - 1;
    for (long long u = 0; u < y_len; ++u) {
        const long long m = u - block_start;  // signal time
        double acc = ctx.noiseless ? 0.0 : noise_rng.gaussian();
        for (int c = 0; c <= p; ++c) {
            const long long j = m - c;
            if (j >= 0 && j < N) acc += ctx.h[static_cast<std::size_t>(c)] * tx[static_cast<std::size_t>(j)];
        }
        y[static_cast<std::size_t>(u)] = acc;
    }

    std::vector<double> v = apply_ffe(y, ctx.ffe, block_start, N);
    const auto offsets = composite_map_offsets(ctx.filt, ctx.cst, N);
    for (int k = 0; k < N; ++k) v[static_cast<std::size_t>(k)] += offsets[static_cast<std::size_t>(k)];
    const std::vector<double> yp = ctx.dither
                                       ? dither_remove(v, dith, ctx.filt, ctx.cst.delta, 0)
                                       : mod_interval(v, ctx.cst.delta);

    bool hard_failure = false;
    std::vector<long long> xp_hat;
    switch (ctx.decoder) {
        case DecoderKind::Slicer:
            xp_hat = ctx.cst.slice(yp);
            break;
        case DecoderKind::Ml:
            xp_hat = ctx.M > 0 ? multilevel_decode(yp, *ctx.code, ctx.M, ctx.cst).composite()
                               : ml_decode(*ctx.code, yp, ctx.cst);
            break;
        case DecoderKind::Hard: {
            auto got = hard_decode(*ctx.code, yp, ctx.cst);
            hard_failure = !got.has_value();
            xp_hat = got ? std::move(*got) : ctx.cst.slice(yp);
            break;
        }
        case DecoderKind::Auto:
            throw NumericError("decoder kind not resolved");
    }

    const std::vector<long long> x_hat = dfe_reconstruct(xp_hat, ctx.filt, ctx.Q);

    TrialCounts out;
    auto mismatch = [&](long long got, long long want) {
        if (got != want) ++out.symbol_errors;
    };
    if (ctx.M > 0) {
        const int off = ctx.code->N() - ctx.code->K();
        for (std::size_t j = 0; j < data_c.size(); ++j)
            mismatch((x_hat[static_cast<std::size_t>(off) + j] >> 0) & 1, data_c[j]);
        for (int b = 1; b < ctx.M; ++b)
            for (std::size_t j = 0; j < data_u[static_cast<std::size_t>(b - 1)].size(); ++j)
                mismatch((x_hat[j] >> b) & 1, data_u[static_cast<std::size_t>(b - 1)][j]);
    } else if (ctx.code) {
        const int off = ctx.code->N() - ctx.code->K();
        for (std::size_t j = 0; j < data_c.size(); ++j)
            mismatch(x_hat[static_cast<std::size_t>(off) + j], data_c[j]);
    } else {
        for (std::size_t j = 0; j < data_c.size(); ++j) mismatch(x_hat[j], data_c[j]);
    }
    if (out.symbol_errors > 0 || hard_failure) out.block_errors = 1;
    return out;
}

}  // namespace

double SimConfig::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

bool SimConfig::dither_enabled() const { return dither.value_or(mode == EqMode::MMSE); }

Poly SimConfig::resolve_channel() const {
    if (!random_channel) return channel;
    const auto& spec = *random_channel;
    if (spec.p < 0) throw InputDomainError("random channel degree must be >= 0");
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        Rng r(spec.seed, 0xC4A11ull, attempt);
        std::vector<cplx> taps(static_cast<std::size_t>(spec.p) + 1);
        for (auto& t : taps) t = cplx{r.gaussian(), 0.0};
        Poly h(taps);
        if (!h.is_zero() && is_paley_wiener(h)) return h;
    }
    throw NumericError("could not draw a Paley-Wiener channel in 100 attempts");
}

WilsonInterval wilson_interval(long long successes, long long total, double z) {
    if (total <= 0) return {0.0, 1.0};
    const double nn = static_cast<double>(total);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = phat + z2 / (2.0 * nn);
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

SimResult run(const SimConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    if (config.trials < 1) throw InputDomainError("trials must be >= 1");

    RunContext ctx;
    ctx.H = config.resolve_channel();
    if (!ctx.H.is_real())
        throw InputDomainError("the Monte Carlo simulator supports real channels only");
    ctx.h.reserve(ctx.H.length());
    for (const auto& c : ctx.H.coeffs()) ctx.h.push_back(c.real());
    ctx.snr = config.snr_linear();
    ctx.mode = config.mode;
    ctx.dither = config.dither_enabled();
    ctx.noiseless = config.noiseless;
    ctx.seed = config.seed;
    ctx.M = config.M;
    ctx.code = config.code ? &*config.code : nullptr;

    if (ctx.M > 0) {
        if (!ctx.code) throw InputDomainError("multilevel runs need a binary code");
        if (ctx.code->q() != 2) throw InputDomainError("multilevel runs need a binary code");
        ctx.Q = 1ll << ctx.M;
        ctx.N = ctx.code->N();
    } else if (ctx.code) {
        ctx.Q = ctx.code->q();
        ctx.N = ctx.code->N();
    } else {
        ctx.Q = config.q;
        ctx.N = config.block_len;
    }

    // integer filter: forced or selected by the lattice search
    const int n_max = config.n_max > 0 ? config.n_max : default_n_max(ctx.H);
    if (config.force_filter) {
        ctx.filt = *config.force_filter;
        if (!ctx.filt.is_monic() || !ctx.filt.is_real())
            throw InputDomainError("forced filter must be monic with real integer taps");
    } else {
        ctx.filt = select_filter(ctx.H, n_max, ctx.mode, ctx.snr).filter;
        if (!ctx.filt.is_real())
            throw NumericError("filter search returned complex taps for a real channel");
    }
    ctx.n = static_cast<int>(ctx.filt.length());

    if (ctx.code && ctx.n - 1 >= ctx.code->K())
        throw InputDomainError("filter length exceeds the code dimension; no data symbols left");
    if (!ctx.code && ctx.n - 1 >= ctx.N)
        throw InputDomainError("filter length exceeds the block length");

    ctx.cst = Constellation(ctx.Q, ctx.snr);
    const double design_snr =
        ctx.dither ? ctx.cst.delta * ctx.cst.delta / 12.0 : ctx.snr;
    ctx.ffe = ctx.mode == EqMode::ZF ? design_zf_ffe(ctx.H, ctx.filt)
                                     : design_mmse_ffe(ctx.H, ctx.filt, design_snr);

    ctx.decoder = config.decoder;
    if (!ctx.code) {
        ctx.decoder = DecoderKind::Slicer;
    } else if (ctx.decoder == DecoderKind::Auto) {
        ctx.decoder = ctx.code->codebook_size_log2_bound() <= 20 ? DecoderKind::Ml
                                                                 : DecoderKind::Hard;
    } else if (ctx.decoder == DecoderKind::Slicer) {
        throw InputDomainError("slicer decoding is for uncoded runs; pick ml or hard");
    }

    if (ctx.M > 0)
        ctx.data_count = (ctx.code->K() - ctx.n + 1) + (ctx.M - 1) * (ctx.N - ctx.n + 1);
    else if (ctx.code)
        ctx.data_count = ctx.code->K() - ctx.n + 1;
    else
        ctx.data_count = ctx.N - ctx.n + 1;

    // fixed-size chunks keep the reduction order independent of thread count
    const long long chunks = (config.trials + kChunk - 1) / kChunk;
    std::vector<TrialCounts> partial(static_cast<std::size_t>(chunks));
    parallel_for(chunks, resolve_threads(config.threads), [&](long long c) {
        TrialCounts acc;
        const long long lo = c * kChunk;
        const long long hi = std::min(config.trials, lo + kChunk);
        for (long long t = lo; t < hi; ++t) {
            const TrialCounts one = simulate_trial(ctx, t);
            acc.symbol_errors += one.symbol_errors;
            acc.block_errors += one.block_errors;
        }
        partial[static_cast<std::size_t>(c)] = acc;
    });

    SimResult res;
    res.filter = ctx.filt;
    res.n_used = ctx.n;
    res.trials = config.trials;
    res.seed = config.seed;
    res.N = ctx.N;
    res.q = ctx.Q;
    res.data_symbols_per_block = ctx.data_count;
    for (const auto& pc : partial) {
        res.symbol_errors += pc.symbol_errors;
        res.block_errors += pc.block_errors;
    }
    res.symbols = config.trials * ctx.data_count;
    res.ser = static_cast<double>(res.symbol_errors) / static_cast<double>(res.symbols);
    res.bler = static_cast<double>(res.block_errors) / static_cast<double>(res.trials);
    const auto ser_ci = wilson_interval(res.symbol_errors, res.symbols);
    const auto bler_ci = wilson_interval(res.block_errors, res.trials);
    res.ser_lo = ser_ci.lo;
    res.ser_hi = ser_ci.hi;
    res.bler_lo = bler_ci.lo;
    res.bler_hi = bler_ci.hi;

    res.sigma2_analytic = noise_enhancement(ctx.H, ctx.filt, ctx.mode, ctx.snr);
    try {
        res.sigma2_zf_dfe = sigma2_zf_dfe(ctx.H);
        res.gamma_analytic = res.sigma2_analytic / res.sigma2_zf_dfe;
        res.bound = minkowski_bound(ctx.H, ctx.H.without_delay().degree() + 30).bound;
    } catch (const PaleyWienerViolation&) {
        res.sigma2_zf_dfe = std::numeric_limits<double>::quiet_NaN();
        res.gamma_analytic = std::numeric_limits<double>::quiet_NaN();
        res.bound = std::numeric_limits<double>::quiet_NaN();
    }

    if (!ctx.noiseless && config.noise_samples > 0) {
        const auto stats = measure_ffe_noise(
            ctx.H, ctx.filt, ctx.mode, ctx.snr, config.noise_samples,
            Rng::mix(config.seed ^ 0x0C411ull),
            ctx.mode == EqMode::ZF ? SignalModel::None : SignalModel::ContinuousUniform, ctx.Q);
        res.sigma2_empirical = stats.variance;
        res.gamma_empirical = res.sigma2_empirical / res.sigma2_zf_dfe;
        res.noise_autocorr = stats.autocorr;
    }

    res.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// ---- sweeps ---------------------------------------------------------------

std::vector<TwoTapRealRow> two_tap_real_rows(const std::vector<double>& a_grid, int threads) {
    for (double a : a_grid)
        if (std::abs(1.0 - std::abs(a)) < 1e-6)
            throw InputDomainError("grid value |a| too close to 1; ZF quantities diverge");

    std::vector<TwoTapRealRow> rows(a_grid.size());
    parallel_for(static_cast<long long>(a_grid.size()), resolve_threads(threads), [&](long long i) {
        const double a = a_grid[static_cast<std::size_t>(i)];
        TwoTapRealRow row;
        row.a = a;
        const Poly H{1.0, a};
        const double s2_dfe = sigma2_zf_dfe(H);
        const auto sel = select_filter(H, default_n_max(H), EqMode::ZF);
        row.gamma = sel.sigma2 / s2_dfe;
        row.filter = sel.filter;
        row.gamma_analytic = a == 0.0 ? 1.0
                                      : std::min(1.0 / (1.0 - a * a), 2.0 / (1.0 + std::abs(a)));
        row.zf_le = 1.0 / (1.0 - a * a);
        row.bound = minkowski_bound(H, H.without_delay().degree() + 30).bound;
        rows[static_cast<std::size_t>(i)] = row;
    });
    return rows;
}

std::vector<TwoTapComplexRow> two_tap_complex_rows(double step, double max_abs, int threads) {
    if (!(step > 0.0) || !(max_abs > 0.0) || max_abs > 0.999)
        throw InputDomainError("need step > 0 and 0 < max_abs <= 0.999");

    std::vector<cplx> grid;
    const long long half = static_cast<long long>(std::floor(max_abs / step));
    for (long long iy = -half; iy <= half; ++iy)
        for (long long ix = -half; ix <= half; ++ix) {
            const cplx a{static_cast<double>(ix) * step, static_cast<double>(iy) * step};
            if (std::abs(a) <= max_abs) grid.push_back(a);
        }

    std::vector<TwoTapComplexRow> rows(grid.size());
    parallel_for(static_cast<long long>(grid.size()), resolve_threads(threads), [&](long long i) {
        const cplx a = grid[static_cast<std::size_t>(i)];
        TwoTapComplexRow row;
        row.re = a.real();
        row.im = a.imag();
        const Poly H(std::vector<cplx>{cplx{1.0, 0.0}, a});
        const double s2_dfe = sigma2_zf_dfe(H);
        const auto sel = select_filter(H, default_n_max(H), EqMode::ZF);
        row.gamma_db = 10.0 * std::log10(sel.sigma2 / s2_dfe);
        row.filter = sel.filter;
        row.zf_le_db = std::abs(a) == 0.0
                           ? 0.0
                           : 10.0 * std::log10(1.0 / (1.0 - std::norm(a)) / s2_dfe);
        row.bound_db = 10.0 * std::log10(minkowski_bound(H, H.without_delay().degree() + 30).bound);
        rows[static_cast<std::size_t>(i)] = row;
    });
    return rows;
}

RandomPdfSweep random_channel_pdf(int p, long long samples, std::uint64_t seed, int threads) {
    if (p < 1) throw InputDomainError("channel degree must be >= 1");
    if (samples < 1000) throw InputDomainError("need at least 1000 samples for a stable pdf");

    RandomPdfSweep sweep;
    sweep.p = p;
    sweep.gamma_db.resize(static_cast<std::size_t>(samples));
    sweep.bound_db.resize(static_cast<std::size_t>(samples));
    std::atomic<long long> redraws{0};

    parallel_for(samples, resolve_threads(threads), [&](long long s) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            if (attempt >= 100) throw NumericError("resampling random channels did not converge");
            Rng r(seed, Rng::mix(0xF1Cull + static_cast<std::uint64_t>(p)) + attempt,
                  static_cast<std::uint64_t>(s));
            std::vector<cplx> taps(static_cast<std::size_t>(p) + 1);
            for (auto& t : taps) t = cplx{r.gaussian(), 0.0};
            const Poly H(taps);
            if (H.is_zero() || !is_paley_wiener(H)) {
                ++redraws;
                continue;
            }
            try {
                const double s2_dfe = sigma2_zf_dfe(H);
                const auto sel = select_filter(H, default_n_max(H), EqMode::ZF);
                sweep.gamma_db[static_cast<std::size_t>(s)] = 10.0 * std::log10(sel.sigma2 / s2_dfe);
                sweep.bound_db[static_cast<std::size_t>(s)] =
                    10.0 * std::log10(minkowski_bound(H, p + 30).bound);
            } catch (const NumericError&) {
                ++redraws;  // quadrature refused: zeros too close to the circle
                continue;
            }
            break;
        }
    });

    std::vector<double> sorted = sweep.gamma_db;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    sweep.median_db = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    sweep.redraws = redraws.load();
    return sweep;
}

DelayCheckReport delay_invariance_check(cplx a, const std::vector<int>& p_list) {
    if (std::abs(1.0 - std::abs(a)) < 1e-6)
        throw InputDomainError("|a| too close to 1; ZF quantities diverge");

    auto channel_for = [&](int p) {
        std::vector<cplx> taps(static_cast<std::size_t>(p) + 1, cplx{0.0, 0.0});
        taps[0] = cplx{1.0, 0.0};
        taps[static_cast<std::size_t>(p)] = a;
        return Poly(taps);
    };
    auto upsample = [](const IntFilter& f, int p) {
        std::vector<long long> re(static_cast<std::size_t>((f.length() - 1) * static_cast<std::size_t>(p) + 1), 0);
        std::vector<long long> im(re.size(), 0);
        for (std::size_t j = 0; j < f.length(); ++j) {
            re[j * static_cast<std::size_t>(p)] = f.re[j];
            if (!f.im.empty()) im[j * static_cast<std::size_t>(p)] = f.im[j];
        }
        return IntFilter(std::move(re), std::move(im));
    };

    DelayCheckReport rep;
    const Poly h1 = channel_for(1);
    const double s2_dfe1 = sigma2_zf_dfe(h1);
    const auto sel1 = select_filter(h1, default_n_max(h1), EqMode::ZF);
    rep.gamma_ref = sel1.sigma2 / s2_dfe1;
    rep.filter_ref = sel1.filter;
    rep.all_match = true;

    for (int p : p_list) {
        const Poly hp = channel_for(p);
        const auto selp = select_filter(hp, std::max(default_n_max(hp),
                                                     static_cast<int>((sel1.filter.length() - 1)) * p + 1),
                                        EqMode::ZF);
        DelayCheckRow row;
        row.p = p;
        row.filter = selp.filter;
        row.gamma = selp.sigma2 / sigma2_zf_dfe(hp);
        row.gamma_matches = std::abs(row.gamma - rep.gamma_ref) <= 1e-6 * rep.gamma_ref;
        const IntFilter expect = upsample(sel1.filter, p);
        const double tie = noise_enhancement(hp, expect, EqMode::ZF);
        row.filter_matches = selp.filter == expect ||
                             std::abs(selp.sigma2 - tie) <= 1e-9 * std::max(1.0, tie);
        rep.all_match = rep.all_match && row.gamma_matches && row.filter_matches;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// ---- CSV writers ----------------------------------------------------------

namespace {

const char* build_version() {
#ifdef IFEQ_GIT_DESCRIBE
    return IFEQ_GIT_DESCRIBE;
#else
    return "unknown";
#endif
}

void write_meta(std::ostream& os, const std::string& config_json) {
    os << "# ifeq " << build_version() << "\n";
    if (!config_json.empty()) os << "# config " << config_json << "\n";
}

std::string filter_to_compact(const IntFilter& f) {
    std::string s = "[";
    for (std::size_t j = 0; j < f.length(); ++j) {
        if (j) s += " ";
        if (f.is_real()) {
            s += std::to_string(f.re[j]);
        } else {
            s += std::to_string(f.re[j]) + (f.im[j] < 0 ? "-" : "+") +
                 std::to_string(std::abs(f.im[j])) + "j";
        }
    }
    return s + "]";
}

}  // namespace

void write_two_tap_real_csv(std::ostream& os, const std::vector<TwoTapRealRow>& rows,
                            const std::string& config_json) {
    write_meta(os, config_json);
    os << "a,gamma,gamma_db,gamma_analytic,bound,zf_le,filter\n";
    for (const auto& r : rows)
        os << r.a << ',' << r.gamma << ',' << 10.0 * std::log10(r.gamma) << ','
           << r.gamma_analytic << ',' << r.bound << ',' << r.zf_le << ','
           << filter_to_compact(r.filter) << "\n";
}

void write_two_tap_complex_csv(std::ostream& os, const std::vector<TwoTapComplexRow>& rows,
                               const std::string& config_json) {
    write_meta(os, config_json);
    os << "re,im,gamma_db,zf_le_db,bound_db,filter\n";
    for (const auto& r : rows)
        os << r.re << ',' << r.im << ',' << r.gamma_db << ',' << r.zf_le_db << ',' << r.bound_db
           << ',' << filter_to_compact(r.filter) << "\n";
}

void write_random_pdf_csv(std::ostream& os, const std::vector<RandomPdfSweep>& sweeps,
                          double bin_width, const std::string& config_json) {
    write_meta(os, config_json);
    for (const auto& s : sweeps)
        os << "# p=" << s.p << " median_db=" << s.median_db << " redraws=" << s.redraws << "\n";
    os << "p,bin_lo,bin_hi,bin_center,count,pdf\n";
    for (const auto& s : sweeps) {
        std::vector<double> v = s.gamma_db;
        std::sort(v.begin(), v.end());
        const double lo = v.front(), hi = v.back();
        double width = bin_width;
        if (!(width > 0.0)) {
            // Freedman-Diaconis
            const double q1 = v[v.size() / 4];
            const double q3 = v[(3 * v.size()) / 4];
            width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(v.size()));
            if (!(width > 0.0)) width = (hi - lo) / 50.0;
            if (!(width > 0.0)) width = 1e-3;
        }
        const long long nbins = std::max<long long>(1, static_cast<long long>(std::ceil((hi - lo) / width)));
        std::vector<long long> counts(static_cast<std::size_t>(nbins), 0);
        for (double g : v) {
            long long b = static_cast<long long>((g - lo) / width);
            b = std::clamp<long long>(b, 0, nbins - 1);
            ++counts[static_cast<std::size_t>(b)];
        }
        for (long long b = 0; b < nbins; ++b) {
            const double blo = lo + width * static_cast<double>(b);
            const double bhi = blo + width;
            const double pdf = static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                               (static_cast<double>(v.size()) * width);
            os << s.p << ',' << blo << ',' << bhi << ',' << 0.5 * (blo + bhi) << ','
               << counts[static_cast<std::size_t>(b)] << ',' << pdf << "\n";
        }
    }
}

}  // namespace ifeq
