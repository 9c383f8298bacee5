#ifndef IFEQ_LATTICE_HPP
#define IFEQ_LATTICE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ifeq/dsp.hpp"
#include "ifeq/lattice_fwd.hpp"
#include "ifeq/poly.hpp"

namespace ifeq {

// Quadratic-form description for a candidate filter length n:
// ZF kernel 1/|H|^2, MMSE kernel 1/(|H|^2 + 1/snr) with signal power snr.
struct GramSpec {
    EqMode mode = EqMode::ZF;
    int n = 1;
    Poly channel;
    double snr = 0.0;  // linear; required finite and positive in MMSE mode

    GramSpec(EqMode m, int len, Poly h, double snr_linear = 0.0)
        : mode(m), n(len), channel(std::move(h)), snr(snr_linear) {}
};

// Dense real symmetric form of the Toeplitz kernel together with a factor F,
// F^T F = K. Complex channels are carried as the 2n-dimensional real embedding
// of the Hermitian Toeplitz form, so the lattice machinery below stays real.
struct GramMatrix {
    int n = 0;                    // filter length in (possibly complex) taps
    bool complex_embedding = false;
    std::vector<cplx> acf;        // k_0 .. k_{n-1}
    Eigen::MatrixXd K;            // n x n, or 2n x 2n when embedded
    Eigen::MatrixXd F;
    std::size_t grid_used = 0;

    double quadratic_form(const IntFilter& filt) const;
};

// k_m = (1/2pi) Int e^{-j m w} / |H|^2 dw (ZF) or with +1/snr in the
// denominator (MMSE), m = 0..n-1, by FFT-grid quadrature with automatic
// grid doubling until the values are stable to relative 1e-9.
std::vector<cplx> autocorr(const GramSpec& spec);
std::vector<cplx> autocorr(const GramSpec& spec, std::size_t& grid_used);

GramMatrix build_gram(const GramSpec& spec);

struct LllResult {
    Eigen::MatrixXd basis;                                    // = F * U
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> U;  // unimodular
};

// Lenstra-Lenstra-Lovasz reduction of the columns of F. U is tracked in exact
// integer arithmetic; delta must lie in (0.25, 1).
LllResult lll_reduce(const Eigen::MatrixXd& F, double delta = 0.75);

// Exact shortest nonzero vector of the lattice {F i : i integer} by
// Fincke-Pohst enumeration inside ||F i|| <= bound. Desk scale: dim <= 8.
std::vector<long long> svp_bruteforce(const Eigen::MatrixXd& F, double bound,
                                      long long node_budget = 50'000'000);

// Exact determinant sign of an integer matrix (fraction-free elimination);
// returns +1/-1/0. Used to verify |det U| == 1.
int integer_det_sign(const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& M,
                     long long* abs_det = nullptr);

struct FilterCandidate {
    int n = 0;
    IntFilter filter;
    double sigma2 = 0.0;
};

struct FilterSearchResult {
    IntFilter filter;
    double sigma2 = 0.0;   // i K_n i^T for the returned filter
    int n_used = 0;
    std::vector<FilterCandidate> candidates;  // best monic candidate per length
};

// Default length sweep bound max(p+1, 2p+4) for a channel of degree p.
int default_n_max(const Poly& channel);

// Sweep n = 1..n_max; pool = LLL basis vectors, the enumeration minimizer
// (when the lattice dimension is <= 8) and +-e1; candidates are normalized by
// delay shift and unit scaling and must be monic. Returns the monic candidate
// minimizing the quadratic form, ties broken by (sigma2, n, lexicographic).
FilterSearchResult select_filter(const Poly& channel, int n_max, EqMode mode, double snr = 0.0,
                                 double lll_delta = 0.75);

// i K_n i^T at n = filter length; in ZF mode this equals
// (1/2pi) Int |I|^2/|H|^2 dw.
double noise_enhancement(const Poly& channel, const IntFilter& filt, EqMode mode,
                         double snr = 0.0);

}  // namespace ifeq

#endif
