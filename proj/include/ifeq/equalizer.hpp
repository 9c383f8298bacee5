#ifndef IFEQ_EQUALIZER_HPP
#define IFEQ_EQUALIZER_HPP

#include <cstdint>
#include <vector>

#include "ifeq/dsp.hpp"
#include "ifeq/lattice_fwd.hpp"
#include "ifeq/poly.hpp"

namespace ifeq {

// Concrete feed-forward filter: two-sided impulse response realized by
// FFT-grid inversion and truncated to a finite window.
struct FfeRealization {
    std::vector<cplx> taps;       // tap j applies at lag j - anchor
    int anchor = 0;               // index of the zero-lag tap
    EqMode design = EqMode::ZF;
    double b0 = 1.0;              // bias-removal scale (1 in ZF)
    double truncation_energy = 0.0;  // discarded fraction of total tap energy
    std::size_t grid_used = 0;

    int lag_lo() const { return -anchor; }
    int lag_hi() const { return static_cast<int>(taps.size()) - 1 - anchor; }
    std::vector<double> real_taps() const;  // valid for real channel/filter
};

// A(w) = I(w)/H(w): equalizes the channel to the integer response I.
FfeRealization design_zf_ffe(const Poly& H, const IntFilter& filt, std::size_t grid = 1u << 16);

// Wiener front end A(w) = b0 I(w) conj(H(w)) / (|H(w)|^2 + 1/snr) with b0
// chosen so the equalized composite channel G = A H / I is monic.
FfeRealization design_mmse_ffe(const Poly& H, const IntFilter& filt, double snr,
                               std::size_t grid = 1u << 16);

// Convolve with the realized taps; output sample k estimates the composite
// signal at block position k. The input must cover the block plus the tap
// span on both sides (no silent truncation).
std::vector<double> apply_ffe(const std::vector<double>& y, const FfeRealization& ffe,
                              long long block_start, int n_out);

// Recover x from x' = (x (x) i) mod q by the feedback recursion
// x_k = (x'_k - sum_{m>=1} i_m x_{k-m}) mod q, reading the wrapped history
// from the n-1 trailing zeros of x. Requires a monic real filter.
std::vector<long long> dfe_reconstruct(const std::vector<long long>& xp, const IntFilter& filt,
                                       long long q);

// The constellation map is affine, so the composite signal map(x) * i sits a
// known constant below map(x (x) i): every filter tap that lands inside the
// transmitted block contributes the map offset delta (q-1)/(2q). Near the
// block head fewer taps land inside, so the correction is per position.
// Returns the additive corrections for block positions 0..N-1.
std::vector<double> composite_map_offsets(const IntFilter& filt, const Constellation& cst, int N);

// Pseudo-random dither shared by transmitter and receiver; values are a pure
// function of (seed, index), uniform on [-delta/2, delta/2).
struct DitherStream {
    std::uint64_t seed = 0;
    double delta = 1.0;

    double at(long long index) const;
};

// (x_k + d_{first_index+k}) mod delta, componentwise.
std::vector<double> dither_add(const std::vector<double>& x, const DitherStream& d,
                               long long first_index = 0);

// y'_k = (v_k - (d * i)_k) mod delta. Dither indices before stream position 0
// were never transmitted and contribute nothing.
std::vector<double> dither_remove(const std::vector<double>& v, const DitherStream& d,
                                  const IntFilter& filt, double delta, long long first_index = 0);

enum class SignalModel {
    None,               // zero signal: output noise only (ZF calibration)
    ContinuousUniform,  // i.i.d. uniform with power exactly snr
    PamDithered,        // q-PAM plus mod-delta dither
};

struct NoiseMeasurement {
    double variance = 0.0;        // residual e at the FFE output, bias removed
    double signal_power = 0.0;    // E[(x*i)^2]
    double sinr = 0.0;
    std::vector<double> autocorr;  // residual autocorrelation, lags 0..16
    double corr_signal_error = 0.0;  // corr(x*i, folded residual), dithered PAM only
};

// Long-stream Monte Carlo measurement of the FFE residual statistics for the
// (channel, filter, mode) triple with unit-variance AWGN.
NoiseMeasurement measure_ffe_noise(const Poly& H, const IntFilter& filt, EqMode mode, double snr,
                                   long long samples, std::uint64_t seed,
                                   SignalModel model = SignalModel::ContinuousUniform,
                                   long long q = 4);

// Empirical E[(x*i)^2] / E[e^2] of the MMSE front end.
double measure_sinr(const Poly& H, const IntFilter& filt, double snr, long long samples,
                    std::uint64_t seed);

}  // namespace ifeq

#endif
