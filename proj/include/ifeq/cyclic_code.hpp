#ifndef IFEQ_CYCLIC_CODE_HPP
#define IFEQ_CYCLIC_CODE_HPP

#include <optional>
#include <vector>

#include "ifeq/dsp.hpp"

namespace ifeq {

// [N, K] cyclic block code over Z_q with monic generator g(D) of degree N-K;
// g must divide D^N - 1 over Z_q. q may be composite.
class CyclicCode {
  public:
    CyclicCode(int N, int K, long long q, std::vector<long long> g);

    int N() const { return n_; }
    int K() const { return k_; }
    long long q() const { return q_; }
    const std::vector<long long>& g() const { return g_; }
    long long codebook_size_log2_bound() const;

    // Codeword with msg (K symbols) in the last K positions; the first N-K
    // positions carry -(msg(D) D^{N-K} mod g) so the syndrome vanishes.
    std::vector<long long> systematic_encode(const std::vector<long long>& msg) const;

    // systematic_encode of data || (n-1 zeros); every output ends in n-1 zeros.
    std::vector<long long> encode_zero_padded(const std::vector<long long>& data, int n) const;

    bool is_codeword(const std::vector<long long>& x) const;

    // x(D) mod g(D) over Z_q; zero iff x is a codeword.
    std::vector<long long> syndrome(const std::vector<long long>& x) const;

    // Full codebook in message-lexicographic order; cached at construction
    // when q^K is small, empty otherwise (decoders then enumerate on the fly).
    const std::vector<std::vector<long long>>& codebook() const { return codebook_; }

    // Shipped example codes.
    static CyclicCode parity5();     // [4,3] single-parity-check over Z_5
    static CyclicCode hamming74();   // [7,4] binary cyclic Hamming, g = 1+D+D^3

  private:
    int n_, k_;
    long long q_;
    std::vector<long long> g_;
    std::vector<std::vector<long long>> codebook_;
};

// Cyclic convolution of a codeword with an arbitrary integer tap vector,
// reduced mod q. The result is asserted to be a codeword (closure of cyclic
// codes under integer-valued cyclic convolution).
std::vector<long long> closure_convolve(const CyclicCode& code, const std::vector<long long>& x,
                                        const std::vector<long long>& taps);

// Exhaustive maximum-likelihood decoding on the mod-interval channel:
// argmin over codewords c of sum_k |mod(y_k - map(c_k), delta)|^2, ties broken
// lexicographically on codeword symbols. Requires q^K <= 2^20.
std::vector<long long> ml_decode(const CyclicCode& code, const std::vector<double>& y,
                                 const Constellation& cst);

// Per-symbol nearest-point slicing followed by a syndrome check; returns
// nothing when the sliced word is not a codeword.
std::optional<std::vector<long long>> hard_decode(const CyclicCode& code,
                                                  const std::vector<double>& y,
                                                  const Constellation& cst);

// Natural-labeling word over Z_{2^M}: one binary codeword plus M-1 uncoded
// binary blocks, composite x = x_c + sum_b x_{u_b} 2^b.
struct MultilevelWord {
    std::vector<long long> xc;
    std::vector<std::vector<long long>> xu;
    int M = 1;

    std::vector<long long> composite() const;
};

// data_c has K-pad_n+1 bits, each uncoded block N-pad_n+1 bits; all layers are
// zero-padded in the last pad_n-1 positions so the DFE can be initialized.
MultilevelWord multilevel_encode(const CyclicCode& binary_code,
                                 const std::vector<long long>& data_c,
                                 const std::vector<std::vector<long long>>& data_u, int M,
                                 int pad_n);

// Decode the mod-interval channel output: first the mod-2 layer by ML over the
// binary code with the coset metric, then the uncoded bits with a
// doubled-step slicer conditioned on the decoded layer.
MultilevelWord multilevel_decode(const std::vector<double>& y, const CyclicCode& binary_code,
                                 int M, const Constellation& cst);

}  // namespace ifeq

#endif
