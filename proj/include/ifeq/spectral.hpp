#ifndef IFEQ_SPECTRAL_HPP
#define IFEQ_SPECTRAL_HPP

#include <vector>

#include "ifeq/dsp.hpp"
#include "ifeq/lattice_fwd.hpp"
#include "ifeq/poly.hpp"

namespace ifeq {

// All deg(H) roots of H(D) as zeros in D (companion-matrix eigenvalues).
// Pure delay factors D^s are stripped first; they carry no roots.
std::vector<cplx> channel_roots(const Poly& H);

// Throws PaleyWienerViolation if some root z has |1 - |z|| < tol.
void require_paley_wiener(const Poly& H, double tol = 1e-9);
bool is_paley_wiener(const Poly& H, double tol = 1e-9);

// exp(-(1/2pi) Int log|H(e^{jw})|^2 dw): the noise variance after the optimal
// ZF-DFE feed-forward filter. Evaluated from the channel roots and
// cross-checked against grid quadrature of the log-integral (aborts on
// mismatch beyond 1e-6 relative).
double sigma2_zf_dfe(const Poly& H);

// Channel factor of the noise-enhancement bound: with z_0..z_{p-1} the
// maximum-phase zeros of H(D)H*(D^-*),
//   alpha_H = |z_0...z_{p-1}|^{2p} / prod_{u,v} |conj(z_u) z_v - 1|.
double alpha_H(const Poly& H);

// Dimension factor of the bound. Real: (2n/(pi e))(1.4 pi n)^{1/n};
// complex: (4n/(pi e))(2.8 pi n)^{1/(2n)}.
double eta(int n, bool complex_mode);

struct BoundRow {
    int n = 0;
    double value = 0.0;  // eta(n) * alpha^{1/n}
};

struct BoundReport {
    std::vector<BoundRow> table;
    int n_star = 0;
    double bound = 0.0;      // min over the table, bounds gamma_H
    double bound_db = 0.0;
    double alpha = 0.0;
    double sigma2_zf_dfe = 0.0;
    double gap_db = 0.0;     // shaping loss + bound, in dB
};

// min over n in [max(p+1, n_min), n_max] of eta(n)*alpha_H^{1/n}; bounds the
// noise-enhancement ratio gamma_H of the optimal integer filter.
BoundReport minkowski_bound(const Poly& H, int n_max, int n_min = 0);

// High-SNR capacity (1/2) log2(snr / sigma2_zf_dfe); the vanishing term is
// dropped, so this is accurate only for large snr.
double capacity_high_snr(const Poly& H, double snr);

// Mutual-information lower bound of the mod-interval channel:
// (1/2) log2(snr * 12 / (2 pi e sigma2_if)).
double mi_lower_bound(const Poly& H, const IntFilter& filt, double snr, EqMode mode);

// 10log10(2 pi e / 12) + 10log10(gamma): SNR gap to capacity in dB.
double gap_to_capacity(double gamma);

struct ChannelAnalysis {
    std::vector<cplx> roots;
    double sigma2_zf_dfe = 0.0;  // valid only when paley_wiener
    double alpha = 0.0;          // valid only when paley_wiener
    bool paley_wiener = false;
};

ChannelAnalysis analyze_channel(const Poly& H);

}  // namespace ifeq

#endif
