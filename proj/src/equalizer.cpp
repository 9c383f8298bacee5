#include "ifeq/equalizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "ifeq/errors.hpp"
#include "ifeq/fft.hpp"
#include "ifeq/rng.hpp"
#include "ifeq/spectral.hpp"

namespace ifeq {

namespace {

constexpr std::size_t kGridCap = 1u << 20;
constexpr double kTailTarget = 1e-14;    // window growth target (fraction of energy)
constexpr double kResponseTol = 1e-6;    // sup-norm composite-response tolerance

struct GridDesign {
    std::vector<cplx> a;       // A(w) on the grid
    std::vector<cplx> target;  // required A(w)H(w) product
    double b0 = 1.0;
};

GridDesign zf_grid(const Poly& H, const Poly& I, std::size_t grid) {
    GridDesign d;
    const auto h = freq_response(H, grid);
    const auto iw = freq_response(I, grid);
    d.a.resize(grid);
    for (std::size_t k = 0; k < grid; ++k) d.a[k] = iw[k] / h[k];
    d.target = iw;
    return d;
}

GridDesign mmse_grid(const Poly& H, const Poly& I, double snr, std::size_t grid) {
    GridDesign d;
    const auto h = freq_response(H, grid);
    const auto iw = freq_response(I, grid);
    const double inv_sx = 1.0 / snr;

    double g_mean = 0.0;
    for (std::size_t k = 0; k < grid; ++k) g_mean += std::norm(h[k]) / (std::norm(h[k]) + inv_sx);
    g_mean /= static_cast<double>(grid);
    d.b0 = 1.0 / g_mean;

    d.a.resize(grid);
    d.target.resize(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double den = std::norm(h[k]) + inv_sx;
        d.a[k] = d.b0 * iw[k] * std::conj(h[k]) / den;
        d.target[k] = d.b0 * std::norm(h[k]) / den * iw[k];  // G(w) I(w)
    }
    return d;
}

// Smallest window around the dominant taps meeting the tail-energy target,
// always containing lag zero.
struct Window {
    long long lo, hi;  // inclusive lags
    double tail_fraction;
};

Window choose_window(const std::vector<cplx>& centered, long long half) {
    const long long g = static_cast<long long>(centered.size());
    auto amp2 = [&](long long lag) { return std::norm(centered[static_cast<std::size_t>(lag + half)]); };

    double total = 0.0;
    long long peak = 0;
    double peak_a = -1.0;
    for (long long l = -half; l < g - half; ++l) {
        const double e = amp2(l);
        total += e;
        if (e > peak_a) {
            peak_a = e;
            peak = l;
        }
    }
    long long lo = std::min<long long>(0, peak), hi = std::max<long long>(0, peak);
    double inside = 0.0;
    for (long long l = lo; l <= hi; ++l) inside += amp2(l);
    while (total - inside > kTailTarget * total) {
        const double left = lo - 1 >= -half ? amp2(lo - 1) : -1.0;
        const double right = hi + 1 < g - half ? amp2(hi + 1) : -1.0;
        if (left < 0.0 && right < 0.0) break;
        if (left >= right) {
            inside += left;
            --lo;
        } else {
            inside += right;
            ++hi;
        }
    }
    return Window{lo, hi, total > 0.0 ? (total - inside) / total : 0.0};
}

FfeRealization design_ffe(const Poly& H, const IntFilter& filt, EqMode mode, double snr,
                          std::size_t grid0) {
    if (!filt.is_monic()) throw InputDomainError("feed-forward design requires a monic filter");
    if (mode == EqMode::ZF) require_paley_wiener(H);
    if (mode == EqMode::MMSE && !(snr > 0.0 && std::isfinite(snr)))
        throw InputDomainError("MMSE design requires finite snr > 0");
    const Poly ip = filt.to_poly();

    std::size_t grid = std::max<std::size_t>(grid0, std::bit_ceil(8 * std::max(H.length(), ip.length())));
    if (!std::has_single_bit(grid)) throw InputDomainError("grid size must be a power of two");

    for (; grid <= kGridCap; grid *= 2) {
        const GridDesign d = mode == EqMode::ZF ? zf_grid(H, ip, grid) : mmse_grid(H, ip, snr, grid);
        // A(w) = sum_l a_l e^{+jlw}, so the lag-l tap sits at index (-l) mod G
        // of the inverse transform.
        const auto impulse = fft::inverse(d.a);
        const long long g = static_cast<long long>(grid);
        const long long half = g / 2;
        auto tap_at = [&](long long lag) {
            return impulse[static_cast<std::size_t>(((-lag) % g + g) % g)];
        };
        std::vector<cplx> centered(grid);
        for (long long l = -half; l < half; ++l)
            centered[static_cast<std::size_t>(l + half)] = tap_at(l);

        const Window win = choose_window(centered, half);

        // response of the truncated taps, via zero-padded transform
        std::vector<cplx> padded(grid, cplx{0.0, 0.0});
        for (long long l = win.lo; l <= win.hi; ++l)
            padded[static_cast<std::size_t>(((-l) % g + g) % g)] =
                centered[static_cast<std::size_t>(l + half)];
        const auto h = freq_response(H, grid);
        const auto resp = fft::forward(padded);  // A_t(w_m)
        double err = 0.0, scale = 1.0;
        for (std::size_t k = 0; k < grid; ++k) {
            err = std::max(err, std::abs(resp[k] * h[k] - d.target[k]));
            scale = std::max(scale, std::abs(d.target[k]));
        }
        if (err > kResponseTol * scale) continue;  // taps hit the grid edge; enlarge

        FfeRealization out;
        out.design = mode;
        out.b0 = d.b0;
        out.grid_used = grid;
        out.truncation_energy = win.tail_fraction;
        out.anchor = static_cast<int>(-win.lo);
        out.taps.assign(centered.begin() + static_cast<long>(win.lo + half),
                        centered.begin() + static_cast<long>(win.hi + half) + 1);
        return out;
    }
    throw NumericError("feed-forward tap window did not meet the tail bound at the grid cap; "
                       "channel zeros are too close to the unit circle");
}

}  // namespace

std::vector<double> FfeRealization::real_taps() const {
    std::vector<double> out(taps.size());
    double scale = 0.0;
    for (const auto& t : taps) scale = std::max(scale, std::abs(t));
    for (std::size_t k = 0; k < taps.size(); ++k) {
        if (std::abs(taps[k].imag()) > 1e-9 * std::max(1.0, scale))
            throw NumericError("feed-forward taps are not real; complex channel?");
        out[k] = taps[k].real();
    }
    return out;
}

FfeRealization design_zf_ffe(const Poly& H, const IntFilter& filt, std::size_t grid) {
    return design_ffe(H, filt, EqMode::ZF, 0.0, grid);
}

FfeRealization design_mmse_ffe(const Poly& H, const IntFilter& filt, double snr,
                               std::size_t grid) {
    return design_ffe(H, filt, EqMode::MMSE, snr, grid);
}

std::vector<double> apply_ffe(const std::vector<double>& y, const FfeRealization& ffe,
                              long long block_start, int n_out) {
    const auto taps = ffe.real_taps();
    const long long L = static_cast<long long>(taps.size());
    const long long first_needed = block_start + ffe.anchor - (L - 1);
    const long long last_needed = block_start + n_out - 1 + ffe.anchor;
    if (first_needed < 0 || last_needed >= static_cast<long long>(y.size()))
        throw InputDomainError("input does not cover the block plus the filter span; "
                               "needs indices " + std::to_string(first_needed) + ".." +
                               std::to_string(last_needed));

    std::vector<double> v(static_cast<std::size_t>(n_out), 0.0);
    for (int k = 0; k < n_out; ++k) {
        double acc = 0.0;
        const long long base = block_start + k + ffe.anchor;
        for (long long j = 0; j < L; ++j) acc += taps[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(base - j)];
        v[static_cast<std::size_t>(k)] = acc;
    }
    return v;
}

std::vector<long long> dfe_reconstruct(const std::vector<long long>& xp, const IntFilter& filt,
                                       long long q) {
    if (!filt.is_real() || !filt.is_monic())
        throw InputDomainError("DFE reconstruction requires a monic real integer filter");
    if (q < 2) throw InputDomainError("alphabet size q must be >= 2");
    const long long N = static_cast<long long>(xp.size());
    const long long n = static_cast<long long>(filt.length());

    std::vector<long long> taps(filt.re);
    for (auto& t : taps) {
        t %= q;
        if (t < 0) t += q;
    }

    std::vector<long long> x(static_cast<std::size_t>(N), 0);
    for (long long k = 0; k < N; ++k) {
        long long acc = xp[static_cast<std::size_t>(k)];
        if (acc < 0 || acc >= q) throw InputDomainError("x' entries must lie in Z_q");
        // wrapped history indices fall on the trailing zeros of x
        for (long long m = 1; m < n && m <= k; ++m)
            acc -= taps[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(k - m)];
        acc %= q;
        if (acc < 0) acc += q;
        x[static_cast<std::size_t>(k)] = acc;
    }
    return x;
}

std::vector<double> composite_map_offsets(const IntFilter& filt, const Constellation& cst,
                                          int N) {
    if (!filt.is_real()) throw InputDomainError("offset correction expects a real integer filter");
    if (N < static_cast<int>(filt.length()))
        throw InputDomainError("block shorter than the integer filter");
    const double unit = cst.delta * static_cast<double>(cst.q - 1) /
                        (2.0 * static_cast<double>(cst.q));
    std::vector<double> out(static_cast<std::size_t>(N));
    long long prefix = 0;
    for (int k = 0; k < N; ++k) {
        if (k < static_cast<int>(filt.length())) prefix += filt.re[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k)] = unit * static_cast<double>(prefix - 1);
    }
    return out;
}

double DitherStream::at(long long index) const {
    Rng r(seed, 0xD17E9ull, static_cast<std::uint64_t>(index));
    return r.uniform_centered(delta);
}

std::vector<double> dither_add(const std::vector<double>& x, const DitherStream& d,
                               long long first_index) {
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        out[k] = mod_interval(x[k] + d.at(first_index + static_cast<long long>(k)), d.delta);
    return out;
}

std::vector<double> dither_remove(const std::vector<double>& v, const DitherStream& d,
                                  const IntFilter& filt, double delta, long long first_index) {
    if (!filt.is_real()) throw InputDomainError("dither removal expects a real integer filter");
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        double conv = 0.0;
        for (std::size_t m = 0; m < filt.length(); ++m) {
            const long long idx = first_index + static_cast<long long>(k) - static_cast<long long>(m);
            if (idx >= 0) conv += static_cast<double>(filt.re[m]) * d.at(idx);
        }
        out[k] = mod_interval(v[k] - conv, delta);
    }
    return out;
}

NoiseMeasurement measure_ffe_noise(const Poly& H, const IntFilter& filt, EqMode mode, double snr,
                                   long long samples, std::uint64_t seed, SignalModel model,
                                   long long q) {
    if (samples < 1000) throw InputDomainError("need at least 1000 samples");
    if (!H.is_real() || !filt.is_real())
        throw InputDomainError("stream measurement supports real channels and filters only");
    if (!(snr > 0.0)) throw InputDomainError("snr must be positive");

    // Dithered PAM transmits uniform samples over the full interval, whose
    // power is delta^2/12; the Wiener design must match the true signal power.
    Constellation cst(q, snr);
    const double design_snr =
        model == SignalModel::PamDithered ? cst.delta * cst.delta / 12.0 : snr;
    const FfeRealization ffe = mode == EqMode::ZF ? design_zf_ffe(H, filt)
                                                  : design_mmse_ffe(H, filt, design_snr);
    const auto a = ffe.real_taps();
    const auto& h = H.coeffs();
    const int p = H.degree();
    const int n = static_cast<int>(filt.length());
    const long long L = static_cast<long long>(a.size());

    // Stream layout: x on [0, T); v evaluated on an interior window with full
    // guards on both sides.
    const long long guard = L + p + n + 8;
    const long long T = samples + 2 * guard;

    const double delta_inf = std::sqrt(12.0 * snr);  // uniform with power = snr
    DitherStream dither{Rng::mix(seed ^ 0xD1u), model == SignalModel::PamDithered ? cst.delta
                                                                                  : delta_inf};

    std::vector<double> xbar(static_cast<std::size_t>(T), 0.0);   // transmitted
    std::vector<double> xundith(static_cast<std::size_t>(T), 0.0);  // pre-dither signal
    Rng sig(seed, 0x5160ull);
    for (long long k = 0; k < T; ++k) {
        switch (model) {
            case SignalModel::None:
                break;
            case SignalModel::ContinuousUniform:
                xbar[static_cast<std::size_t>(k)] = sig.uniform_centered(delta_inf);
                xundith[static_cast<std::size_t>(k)] = xbar[static_cast<std::size_t>(k)];
                break;
            case SignalModel::PamDithered: {
                const double xs = cst.map(sig.below(q));
                xundith[static_cast<std::size_t>(k)] = xs;
                xbar[static_cast<std::size_t>(k)] = mod_interval(xs + dither.at(k), cst.delta);
                break;
            }
        }
    }

    std::vector<double> y(static_cast<std::size_t>(T), 0.0);
    Rng noise(seed, 0x4015Eull);
    for (long long m = 0; m < T; ++m) {
        double acc = noise.gaussian();
        for (int c = 0; c <= p; ++c)
            if (m - c >= 0) acc += h[static_cast<std::size_t>(c)].real() * xbar[static_cast<std::size_t>(m - c)];
        y[static_cast<std::size_t>(m)] = acc;
    }

    auto conv_filt = [&](const std::vector<double>& s, long long k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m)
            if (k - m >= 0) acc += static_cast<double>(filt.re[static_cast<std::size_t>(m)]) *
                                   s[static_cast<std::size_t>(k - m)];
        return acc;
    };

    NoiseMeasurement out;
    const int acf_lags = 17;
    out.autocorr.assign(acf_lags, 0.0);
    std::vector<double> evals(static_cast<std::size_t>(samples), 0.0);
    double sum_sig2 = 0.0, sum_e = 0.0;
    double sum_xt = 0.0, sum_xt2 = 0.0, sum_eu = 0.0, sum_eu2 = 0.0, sum_cross = 0.0;

    for (long long idx = 0; idx < samples; ++idx) {
        const long long k = guard + idx;
        double v = 0.0;
        for (long long j = 0; j < L; ++j)
            v += a[static_cast<std::size_t>(j)] *
                 y[static_cast<std::size_t>(k + ffe.anchor - j)];
        const double xt_bar = conv_filt(xbar, k);
        const double e_biased = v / ffe.b0 - xt_bar;
        evals[static_cast<std::size_t>(idx)] = e_biased;
        sum_e += e_biased;
        sum_sig2 += xt_bar * xt_bar;

        if (model == SignalModel::PamDithered) {
            // receiver-side folded residual against the undithered x * i
            double dconv = 0.0;
            for (int m = 0; m < n; ++m)
                if (k - m >= 0) dconv += static_cast<double>(filt.re[static_cast<std::size_t>(m)]) * dither.at(k - m);
            const double yprime = mod_interval(v - dconv, cst.delta);
            const double xt = conv_filt(xundith, k);
            const double eu = mod_interval(yprime - xt, cst.delta);
            sum_xt += xt;
            sum_xt2 += xt * xt;
            sum_eu += eu;
            sum_eu2 += eu * eu;
            sum_cross += xt * eu;
        }
    }

    const double ns = static_cast<double>(samples);
    double var = 0.0;
    for (double e : evals) var += e * e;
    out.variance = var / ns;
    out.signal_power = sum_sig2 / ns;
    out.sinr = out.signal_power / out.variance;
    for (int lag = 0; lag < acf_lags; ++lag) {
        double acc = 0.0;
        for (long long idx = lag; idx < samples; ++idx)
            acc += evals[static_cast<std::size_t>(idx)] * evals[static_cast<std::size_t>(idx - lag)];
        out.autocorr[static_cast<std::size_t>(lag)] = acc / static_cast<double>(samples - lag);
    }
    if (model == SignalModel::PamDithered) {
        const double mx = sum_xt / ns, me = sum_eu / ns;
        const double vx = sum_xt2 / ns - mx * mx, ve = sum_eu2 / ns - me * me;
        out.corr_signal_error = (sum_cross / ns - mx * me) / std::sqrt(vx * ve);
    }
    return out;
}

double measure_sinr(const Poly& H, const IntFilter& filt, double snr, long long samples,
                    std::uint64_t seed) {
    return measure_ffe_noise(H, filt, EqMode::MMSE, snr, samples, seed,
                             SignalModel::ContinuousUniform)
        .sinr;
}

}  // namespace ifeq
