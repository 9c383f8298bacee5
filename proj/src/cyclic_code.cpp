#include "ifeq/cyclic_code.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ifeq/errors.hpp"

namespace ifeq {

namespace {

long long mod_q(long long v, long long q) {
    long long r = v % q;
    return r < 0 ? r + q : r;
}

// Remainder of a(D) modulo the monic g(D), coefficients over Z_q. Monic
// divisors keep the division well-defined for composite q.
std::vector<long long> poly_mod(std::vector<long long> a, const std::vector<long long>& g,
                                long long q) {
    const int dg = static_cast<int>(g.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= dg; --i) {
        const long long coef = mod_q(a[static_cast<std::size_t>(i)], q);
        if (coef == 0) continue;
        for (int j = 0; j <= dg; ++j) {
            auto& t = a[static_cast<std::size_t>(i - dg + j)];
            t = mod_q(t - coef * g[static_cast<std::size_t>(j)], q);
        }
    }
    a.resize(static_cast<std::size_t>(std::max(dg, 1)));
    for (auto& v : a) v = mod_q(v, q);
    return a;
}

bool all_zero(const std::vector<long long>& v) {
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

std::string poly_to_string(const std::vector<long long>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

void check_symbols(const std::vector<long long>& x, long long q) {
    for (long long v : x)
        if (v < 0 || v >= q)
            throw InputDomainError("symbol " + std::to_string(v) + " outside Z_" + std::to_string(q));
}

// Lexicographic odometer over messages in Z_q^K; returns false after the last.
bool next_message(std::vector<long long>& msg, long long q) {
    for (int i = static_cast<int>(msg.size()) - 1; i >= 0; --i) {
        if (++msg[static_cast<std::size_t>(i)] < q) return true;
        msg[static_cast<std::size_t>(i)] = 0;
    }
    return false;
}

constexpr double kMlDecodeLog2Cap = 20.0;
constexpr double kCodebookCacheLog2Cap = 16.0;

}  // namespace

CyclicCode::CyclicCode(int N, int K, long long q, std::vector<long long> g)
    : n_(N), k_(K), q_(q), g_(std::move(g)) {
    if (q_ < 2) throw InputDomainError("alphabet size q must be >= 2");
    if (K < 1 || K > N) throw InputDomainError("code dimension must satisfy 1 <= K <= N");
    for (auto& v : g_) v = mod_q(v, q_);
    while (g_.size() > 1 && g_.back() == 0) g_.pop_back();
    if (static_cast<int>(g_.size()) - 1 != N - K)
        throw InputDomainError("generator degree must equal N-K");
    if (g_.back() != 1) throw InputDomainError("generator polynomial must be monic");

    // g | D^N - 1 over Z_q
    std::vector<long long> xn1(static_cast<std::size_t>(N) + 1, 0);
    xn1[0] = mod_q(-1, q_);
    xn1[static_cast<std::size_t>(N)] = 1;
    const auto rem = poly_mod(std::move(xn1), g_, q_);
    if (!all_zero(rem))
        throw DivisibilityError("generator does not divide D^N-1 over Z_" + std::to_string(q_) +
                                "; remainder " + poly_to_string(rem));

    if (static_cast<double>(K) * std::log2(static_cast<double>(q_)) <= kCodebookCacheLog2Cap) {
        std::vector<long long> msg(static_cast<std::size_t>(K), 0);
        do {
            codebook_.push_back(systematic_encode(msg));
        } while (next_message(msg, q_));
    }
}

long long CyclicCode::codebook_size_log2_bound() const {
    return static_cast<long long>(
        std::ceil(static_cast<double>(k_) * std::log2(static_cast<double>(q_))));
}

std::vector<long long> CyclicCode::systematic_encode(const std::vector<long long>& msg) const {
    if (static_cast<int>(msg.size()) != k_)
        throw InputDomainError("message must have exactly K symbols");
    check_symbols(msg, q_);

    // remainder of msg(D) * D^{N-K} mod g
    std::vector<long long> shifted(static_cast<std::size_t>(n_), 0);
    for (int j = 0; j < k_; ++j)
        shifted[static_cast<std::size_t>(n_ - k_ + j)] = msg[static_cast<std::size_t>(j)];
    const auto rem = poly_mod(shifted, g_, q_);

    std::vector<long long> cw(static_cast<std::size_t>(n_), 0);
    for (int j = 0; j < n_ - k_; ++j)
        cw[static_cast<std::size_t>(j)] =
            mod_q(-(j < static_cast<int>(rem.size()) ? rem[static_cast<std::size_t>(j)] : 0), q_);
    for (int j = 0; j < k_; ++j)
        cw[static_cast<std::size_t>(n_ - k_ + j)] = msg[static_cast<std::size_t>(j)];
    return cw;
}

std::vector<long long> CyclicCode::encode_zero_padded(const std::vector<long long>& data,
                                                      int n) const {
    if (n < 1) throw InputDomainError("filter length must be >= 1");
    if (n - 1 >= k_)
        throw PadTooLong("zero pad of " + std::to_string(n - 1) +
                         " symbols leaves no data in a K=" + std::to_string(k_) + " code");
    if (static_cast<int>(data.size()) != k_ - n + 1)
        throw InputDomainError("zero-padded encoder expects K-n+1 data symbols");
    std::vector<long long> msg(data);
    msg.resize(static_cast<std::size_t>(k_), 0);
    return systematic_encode(msg);
}

bool CyclicCode::is_codeword(const std::vector<long long>& x) const {
    return all_zero(syndrome(x));
}

std::vector<long long> CyclicCode::syndrome(const std::vector<long long>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw InputDomainError("word length does not match the code length");
    check_symbols(x, q_);
    return poly_mod(x, g_, q_);
}

CyclicCode CyclicCode::parity5() { return CyclicCode(4, 3, 5, {4, 1}); }

CyclicCode CyclicCode::hamming74() { return CyclicCode(7, 4, 2, {1, 1, 0, 1}); }

std::vector<long long> closure_convolve(const CyclicCode& code, const std::vector<long long>& x,
                                        const std::vector<long long>& taps) {
    if (!code.is_codeword(x)) throw InputDomainError("closure_convolve input is not a codeword");
    auto y = cyclic_convolve_mod(x, taps, code.q());
    if (!code.is_codeword(y))
        throw NumericError("cyclic-code closure violated; code construction is inconsistent");
    return y;
}

std::vector<long long> ml_decode(const CyclicCode& code, const std::vector<double>& y,
                                 const Constellation& cst) {
    if (static_cast<int>(y.size()) != code.N())
        throw InputDomainError("received block length does not match the code length");
    if (cst.q != code.q()) throw InputDomainError("constellation size does not match the code");
    if (static_cast<double>(code.K()) * std::log2(static_cast<double>(code.q())) > kMlDecodeLog2Cap)
        throw CapacityExceeded("codebook too large for exhaustive ML decoding; use hard_decode");

    std::vector<long long> best;
    double best_metric = 0.0;

    auto consider = [&](const std::vector<long long>& cw) {
        double metric = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double d = mod_interval(y[k] - cst.map(cw[k]), cst.delta);
            metric += d * d;
        }
        if (best.empty() || metric < best_metric ||
            (metric == best_metric && cw < best)) {
            best = cw;
            best_metric = metric;
        }
    };

    if (!code.codebook().empty()) {
        for (const auto& cw : code.codebook()) consider(cw);
    } else {
        std::vector<long long> msg(static_cast<std::size_t>(code.K()), 0);
        do {
            consider(code.systematic_encode(msg));
        } while (next_message(msg, code.q()));
    }
    return best;
}

std::optional<std::vector<long long>> hard_decode(const CyclicCode& code,
                                                  const std::vector<double>& y,
                                                  const Constellation& cst) {
    if (static_cast<int>(y.size()) != code.N())
        throw InputDomainError("received block length does not match the code length");
    auto sliced = cst.slice(y);
    if (!code.is_codeword(sliced)) return std::nullopt;
    return sliced;
}

std::vector<long long> MultilevelWord::composite() const {
    std::vector<long long> x(xc);
    for (std::size_t b = 0; b < xu.size(); ++b) {
        const long long w = 1ll << (b + 1);
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += xu[b][k] * w;
    }
    return x;
}

MultilevelWord multilevel_encode(const CyclicCode& binary_code,
                                 const std::vector<long long>& data_c,
                                 const std::vector<std::vector<long long>>& data_u, int M,
                                 int pad_n) {
    if (binary_code.q() != 2) throw InputDomainError("multilevel scheme requires a binary code");
    if (M < 1 || M > 62) throw InputDomainError("M must lie in 1..62");
    if (static_cast<int>(data_u.size()) != M - 1)
        throw InputDomainError("expected M-1 uncoded blocks, got " + std::to_string(data_u.size()));

    MultilevelWord w;
    w.M = M;
    w.xc = binary_code.encode_zero_padded(data_c, pad_n);
    const std::size_t ulen = static_cast<std::size_t>(binary_code.N() - pad_n + 1);
    for (const auto& blk : data_u) {
        if (blk.size() != ulen)
            throw InputDomainError("uncoded blocks must have N-n+1 bits each");
        check_symbols(blk, 2);
        std::vector<long long> layer(blk);
        layer.resize(static_cast<std::size_t>(binary_code.N()), 0);
        w.xu.push_back(std::move(layer));
    }
    return w;
}

MultilevelWord multilevel_decode(const std::vector<double>& y, const CyclicCode& binary_code,
                                 int M, const Constellation& cst) {
    if (binary_code.q() != 2) throw InputDomainError("multilevel scheme requires a binary code");
    if (cst.q != (1ll << M)) throw InputDomainError("constellation size must be 2^M");
    if (static_cast<int>(y.size()) != binary_code.N())
        throw InputDomainError("received block length does not match the code length");
    if (binary_code.K() > 20)
        throw CapacityExceeded("binary codebook too large for exhaustive ML decoding");

    const long long q = cst.q;
    const double coset_step = 2.0 * cst.delta / static_cast<double>(q);

    // Stage 1: mod-2 layer. Both bit values index cosets of spacing 2*delta/q
    // that tile the modulo interval, so the per-symbol distance to the
    // nearest coset point is a centered modulo with the coset step.
    std::vector<long long> x0;
    double best_metric = 0.0;
    auto consider = [&](const std::vector<long long>& cw) {
        double metric = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double d = mod_interval(y[k] - cst.map(cw[k]), coset_step);
            metric += d * d;
        }
        if (x0.empty() || metric < best_metric || (metric == best_metric && cw < x0)) {
            x0 = cw;
            best_metric = metric;
        }
    };
    if (!binary_code.codebook().empty()) {
        for (const auto& cw : binary_code.codebook()) consider(cw);
    } else {
        std::vector<long long> msg(static_cast<std::size_t>(binary_code.K()), 0);
        do {
            consider(binary_code.systematic_encode(msg));
        } while (next_message(msg, 2));
    }

    // Stage 2: uncoded bits with the doubled-step slicer inside the coset
    // selected by the decoded layer.
    MultilevelWord out;
    out.M = M;
    out.xc = x0;
    out.xu.assign(static_cast<std::size_t>(M - 1),
                  std::vector<long long>(y.size(), 0));
    const long long half = q / 2;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double r = mod_interval(y[k] - cst.map(x0[k]), cst.delta);
        long long m = std::llround(r / coset_step) % half;
        if (m < 0) m += half;
        const long long s = x0[k] + 2 * m;
        for (int b = 1; b < M; ++b)
            out.xu[static_cast<std::size_t>(b - 1)][k] = (s >> b) & 1;
    }
    return out;
}

}  // namespace ifeq
