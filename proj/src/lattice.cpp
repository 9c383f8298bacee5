#include "ifeq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "ifeq/errors.hpp"
#include "ifeq/fft.hpp"
#include "ifeq/spectral.hpp"

namespace ifeq {

namespace {

constexpr std::size_t kGridStart = 1u << 16;
constexpr std::size_t kGridCap = 1u << 22;
constexpr double kAcfStabilityTol = 1e-9;

std::vector<cplx> acf_on_grid(const Poly& H, EqMode mode, double snr, std::size_t grid, int n) {
    const auto resp = freq_response(H, grid);
    const double add = mode == EqMode::MMSE ? 1.0 / snr : 0.0;
    std::vector<cplx> kernel(grid);
    for (std::size_t i = 0; i < grid; ++i)
        kernel[i] = cplx{1.0 / (std::norm(resp[i]) + add), 0.0};
    const auto spec = fft::forward(kernel);
    std::vector<cplx> k(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) k[static_cast<std::size_t>(m)] = spec[static_cast<std::size_t>(m)] / static_cast<double>(grid);
    return k;
}

void validate_spec(const GramSpec& spec) {
    if (spec.n < 1) throw InputDomainError("filter length n must be >= 1");
    if (spec.channel.is_zero()) throw InputDomainError("channel polynomial is zero");
    if (spec.mode == EqMode::MMSE && !(spec.snr > 0.0 && std::isfinite(spec.snr)))
        throw InputDomainError("MMSE mode requires finite snr > 0");
    if (spec.mode == EqMode::ZF) require_paley_wiener(spec.channel);
}

// Gaussian-integer tap vector used during candidate normalization.
struct GVec {
    std::vector<long long> re, im;

    std::size_t size() const { return re.size(); }
    bool zero_at(std::size_t k) const { return re[k] == 0 && im[k] == 0; }
    bool operator<(const GVec& o) const {
        if (re != o.re) return re < o.re;
        return im < o.im;
    }
};

double quad_form(const std::vector<cplx>& acf, const GVec& w) {
    cplx s{0.0, 0.0};
    const std::size_t m = w.size();
    for (std::size_t r = 0; r < m; ++r) {
        const cplx wr{static_cast<double>(w.re[r]), static_cast<double>(w.im[r])};
        for (std::size_t c = 0; c < m; ++c) {
            const cplx wc{static_cast<double>(w.re[c]), static_cast<double>(w.im[c])};
            const cplx km = r >= c ? acf[r - c] : std::conj(acf[c - r]);
            s += std::conj(wr) * km * wc;
        }
    }
    return s.real();
}

// Delay shift, trailing-zero trim, and unit scaling so the leading entry has
// Re > 0, Im >= 0. Returns nothing for the zero vector.
std::optional<GVec> canonicalize(GVec w) {
    std::size_t s = 0;
    while (s < w.size() && w.zero_at(s)) ++s;
    if (s == w.size()) return std::nullopt;
    if (s > 0) {
        w.re.erase(w.re.begin(), w.re.begin() + static_cast<long>(s));
        w.im.erase(w.im.begin(), w.im.begin() + static_cast<long>(s));
    }
    while (w.size() > 1 && w.zero_at(w.size() - 1)) {
        w.re.pop_back();
        w.im.pop_back();
    }
    for (int rot = 0; rot < 4; ++rot) {
        if (w.re[0] > 0 && w.im[0] >= 0) break;
        // multiply by j: (a+bj)j = -b + aj
        for (std::size_t k = 0; k < w.size(); ++k) {
            const long long a = w.re[k], b = w.im[k];
            w.re[k] = -b;
            w.im[k] = a;
        }
    }
    return w;
}

bool is_monic(const GVec& w) { return w.re[0] == 1 && w.im[0] == 0; }

IntFilter to_filter(const GVec& w) {
    bool complex_taps = false;
    for (long long v : w.im)
        if (v != 0) complex_taps = true;
    if (!complex_taps) return IntFilter(w.re);
    return IntFilter(w.re, w.im);
}

GVec column_to_gvec(const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& U, int col,
                    int n, bool embedded) {
    GVec w;
    w.re.resize(static_cast<std::size_t>(n), 0);
    w.im.resize(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < n; ++t) {
        w.re[static_cast<std::size_t>(t)] = U(t, col);
        if (embedded) w.im[static_cast<std::size_t>(t)] = U(n + t, col);
    }
    return w;
}

GVec ints_to_gvec(const std::vector<long long>& v, int n, bool embedded) {
    GVec w;
    w.re.assign(v.begin(), v.begin() + n);
    if (embedded)
        w.im.assign(v.begin() + n, v.end());
    else
        w.im.assign(static_cast<std::size_t>(n), 0);
    return w;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& K, double scale) {
    Eigen::MatrixXd A = K;
    double jitter = 0.0;
    for (int attempt = 0; attempt < 10; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success) {
            Eigen::MatrixXd F = llt.matrixU();
            return F;
        }
        jitter = jitter == 0.0 ? 1e-14 * scale : jitter * 10.0;
        if (jitter > 1e-6 * scale) break;
        A = K + jitter * Eigen::MatrixXd::Identity(K.rows(), K.cols());
    }
    throw NumericError("Gram matrix indefinite beyond tolerance (quadrature failure?)");
}

GramMatrix assemble_gram(std::vector<cplx> acf, bool complex_channel, std::size_t grid_used) {
    const int n = static_cast<int>(acf.size());
    GramMatrix gm;
    gm.n = n;
    gm.complex_embedding = complex_channel;
    gm.grid_used = grid_used;
    const double k0 = acf[0].real();

    if (!complex_channel) {
        for (auto& v : acf) {
            if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(k0)))
                throw NumericError("autocorrelation of a real channel has imaginary residue");
            v = cplx{v.real(), 0.0};
        }
        gm.K.resize(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) gm.K(r, c) = acf[static_cast<std::size_t>(std::abs(r - c))].real();
    } else {
        // Real embedding [[A, -B], [B, A]] of the Hermitian Toeplitz form.
        Eigen::MatrixXd A(n, n), B(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const cplx km = r >= c ? acf[static_cast<std::size_t>(r - c)]
                                       : std::conj(acf[static_cast<std::size_t>(c - r)]);
                A(r, c) = km.real();
                B(r, c) = km.imag();
            }
        gm.K.resize(2 * n, 2 * n);
        gm.K.topLeftCorner(n, n) = A;
        gm.K.topRightCorner(n, n) = -B;
        gm.K.bottomLeftCorner(n, n) = B;
        gm.K.bottomRightCorner(n, n) = A;
    }
    gm.acf = std::move(acf);
    gm.F = cholesky_factor(gm.K, std::abs(k0));
    const double recon = (gm.F.transpose() * gm.F - gm.K).cwiseAbs().maxCoeff();
    if (recon > 1e-8 * std::max(1.0, std::abs(k0)))
        throw NumericError("Gram factorization residual too large");
    return gm;
}

}  // namespace

const char* to_string(EqMode mode) { return mode == EqMode::ZF ? "zf" : "mmse"; }

double GramMatrix::quadratic_form(const IntFilter& filt) const {
    if (static_cast<int>(filt.length()) > n)
        throw InputDomainError("filter longer than the Gram matrix order");
    GVec w;
    w.re = filt.re;
    w.im = filt.im.empty() ? std::vector<long long>(filt.re.size(), 0) : filt.im;
    return quad_form(acf, w);
}

std::vector<cplx> autocorr(const GramSpec& spec) {
    std::size_t grid_used = 0;
    return autocorr(spec, grid_used);
}

std::vector<cplx> autocorr(const GramSpec& spec, std::size_t& grid_used) {
    validate_spec(spec);
    std::size_t grid = kGridStart;
    while (grid < 8 * spec.channel.length()) grid *= 2;

    auto cur = acf_on_grid(spec.channel, spec.mode, spec.snr, grid, spec.n);
    while (true) {
        if (grid * 2 > kGridCap)
            throw NumericError("autocorrelation quadrature did not stabilize at the grid cap");
        auto next = acf_on_grid(spec.channel, spec.mode, spec.snr, grid * 2, spec.n);
        double diff = 0.0;
        for (std::size_t m = 0; m < cur.size(); ++m)
            diff = std::max(diff, std::abs(cur[m] - next[m]));
        const double scale = std::abs(next[0].real());
        cur = std::move(next);
        grid *= 2;
        if (diff <= kAcfStabilityTol * scale) break;
    }
    grid_used = grid;
    return cur;
}

GramMatrix build_gram(const GramSpec& spec) {
    std::size_t grid_used = 0;
    auto acf = autocorr(spec, grid_used);
    return assemble_gram(std::move(acf), !spec.channel.is_real(), grid_used);
}

LllResult lll_reduce(const Eigen::MatrixXd& F, double delta) {
    if (!(delta > 0.25 && delta < 1.0)) throw InputDomainError("LLL delta must lie in (0.25, 1)");
    const int n = static_cast<int>(F.cols());
    if (F.rows() < F.cols()) throw InputDomainError("LLL basis matrix must have full column rank");

    Eigen::MatrixXd B = F;
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> U =
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);

    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd bstar2 = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd bstar = B;

    auto gso = [&]() {
        for (int i = 0; i < n; ++i) {
            bstar.col(i) = B.col(i);
            for (int j = 0; j < i; ++j) {
                mu(i, j) = B.col(i).dot(bstar.col(j)) / bstar2(j);
                bstar.col(i) -= mu(i, j) * bstar.col(j);
            }
            bstar2(i) = bstar.col(i).squaredNorm();
            if (!(bstar2(i) > 0.0) || !std::isfinite(bstar2(i)))
                throw NumericError("rank-deficient basis in LLL");
        }
    };
    gso();

    int k = 1;
    long long iters = 0;
    while (k < n) {
        if (++iters > 2'000'000) throw NumericError("LLL failed to converge");
        // size-reduce b_k; b* is unchanged, mu updates in place
        for (int j = k - 1; j >= 0; --j) {
            const long long qj = std::llround(mu(k, j));
            if (qj != 0) {
                B.col(k) -= static_cast<double>(qj) * B.col(j);
                U.col(k) -= qj * U.col(j);
                for (int l = 0; l < j; ++l) mu(k, l) -= static_cast<double>(qj) * mu(j, l);
                mu(k, j) -= static_cast<double>(qj);
            }
        }
        if (bstar2(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar2(k - 1)) {
            ++k;
        } else {
            B.col(k).swap(B.col(k - 1));
            U.col(k).swap(U.col(k - 1));
            gso();
            k = std::max(k - 1, 1);
        }
    }

    LllResult out;
    out.U = std::move(U);
    out.basis = F * out.U.cast<double>();
    return out;
}

std::vector<long long> svp_bruteforce(const Eigen::MatrixXd& F, double bound,
                                      long long node_budget) {
    const int d = static_cast<int>(F.cols());
    if (d < 1 || d > 8) throw InputDomainError("enumeration supports dimensions 1..8 only");
    if (!(bound > 0.0)) throw InputDomainError("enumeration bound must be positive");

    const Eigen::MatrixXd G = F.transpose() * F;
    const Eigen::MatrixXd R = cholesky_factor(G, std::max(1.0, G.diagonal().maxCoeff()));

    double best2 = bound * bound * (1.0 + 1e-12);
    std::vector<long long> best;
    std::vector<long long> w(static_cast<std::size_t>(d), 0);
    std::vector<double> center(static_cast<std::size_t>(d), 0.0);
    std::vector<double> partial(static_cast<std::size_t>(d) + 1, 0.0);
    long long nodes = 0;

    // Depth-first over coordinates d-1 .. 0; the top block of still-zero
    // coordinates is restricted to w >= 0, which keeps one of each +-pair.
    auto rec = [&](auto&& self, int level, bool all_zero_above) -> void {
        if (level < 0) {
            if (all_zero_above) return;  // zero vector
            if (partial[0] < best2 ||
                (partial[0] == best2 && !best.empty() && w < best)) {
                best2 = partial[0];
                best = w;
            }
            return;
        }
        if (++nodes > node_budget) throw EnumerationBudgetExceeded(node_budget);
        double proj = 0.0;
        for (int j = level + 1; j < d; ++j) proj += R(level, j) * static_cast<double>(w[static_cast<std::size_t>(j)]);
        const double rll = R(level, level);
        const double room = best2 - partial[static_cast<std::size_t>(level) + 1];
        if (room < 0.0) return;
        const double radius = std::sqrt(room) / rll;
        const double c = -proj / rll;
        long long lo = static_cast<long long>(std::ceil(c - radius - 1e-12));
        long long hi = static_cast<long long>(std::floor(c + radius + 1e-12));
        if (all_zero_above) lo = std::max(lo, 0ll);
        for (long long v = lo; v <= hi; ++v) {
            const double t = rll * (static_cast<double>(v) - c);
            const double cost = partial[static_cast<std::size_t>(level) + 1] + t * t;
            if (cost > best2) continue;
            w[static_cast<std::size_t>(level)] = v;
            partial[static_cast<std::size_t>(level)] = cost;
            self(self, level - 1, all_zero_above && v == 0);
        }
        w[static_cast<std::size_t>(level)] = 0;
    };
    rec(rec, d - 1, true);

    if (best.empty()) throw NumericError("enumeration found no lattice vector inside the bound");
    return best;
}

int integer_det_sign(const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& M,
                     long long* abs_det) {
    const int n = static_cast<int>(M.rows());
    std::vector<std::vector<__int128>> a(static_cast<std::size_t>(n),
                                         std::vector<__int128>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M(i, j);

    int sign = 1;
    __int128 prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) {
                if (abs_det) *abs_det = 0;
                return 0;
            }
            std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(swap_row)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                         a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] -
                     a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                         a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]) /
                    prev;
            }
        prev = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }
    const __int128 det = a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
    if (abs_det) {
        const __int128 mag = det < 0 ? -det : det;
        *abs_det = mag > static_cast<__int128>(0x7fffffffffffffffll)
                       ? 0x7fffffffffffffffll
                       : static_cast<long long>(mag);
    }
    if (det == 0) return 0;
    return (det < 0 ? -sign : sign);
}

int default_n_max(const Poly& channel) {
    const int p = channel.without_delay().degree();
    return std::max(p + 1, 2 * p + 4);
}

FilterSearchResult select_filter(const Poly& channel, int n_max, EqMode mode, double snr,
                                 double lll_delta) {
    if (n_max < 1) throw InputDomainError("n_max must be >= 1");
    const bool complex_channel = !channel.is_real();

    std::size_t grid_used = 0;
    const GramSpec top{mode, n_max, channel, snr};
    const auto acf_full = autocorr(top, grid_used);

    struct Entry {
        double sigma2;
        int n;
        GVec w;
    };
    std::map<GVec, Entry> seen;
    std::vector<FilterCandidate> per_n;
    const Entry* global_best = nullptr;

    auto better = [](const Entry& a, const Entry& b) {
        if (a.sigma2 != b.sigma2) return a.sigma2 < b.sigma2;
        if (a.n != b.n) return a.n < b.n;
        return a.w < b.w;
    };

    for (int n = 1; n <= n_max; ++n) {
        std::vector<cplx> acf(acf_full.begin(), acf_full.begin() + n);
        const GramMatrix gm = assemble_gram(std::move(acf), complex_channel, grid_used);
        const int dim = static_cast<int>(gm.K.rows());

        std::vector<GVec> pool;
        {
            GVec e1;
            e1.re.assign(static_cast<std::size_t>(n), 0);
            e1.im.assign(static_cast<std::size_t>(n), 0);
            e1.re[0] = 1;
            pool.push_back(std::move(e1));
        }
        const LllResult red = lll_reduce(gm.F, lll_delta);
        for (int cidx = 0; cidx < dim; ++cidx)
            pool.push_back(column_to_gvec(red.U, cidx, n, complex_channel));
        if (dim <= 8) {
            double bound = red.basis.col(0).norm();
            for (int cidx = 1; cidx < dim; ++cidx)
                bound = std::min(bound, red.basis.col(cidx).norm());
            try {
                pool.push_back(ints_to_gvec(svp_bruteforce(gm.F, bound * (1.0 + 1e-9)), n,
                                            complex_channel));
            } catch (const EnumerationBudgetExceeded&) {
                // oracle skipped; LLL candidates remain
            }
        }

        std::optional<FilterCandidate> best_at_n;
        for (auto& raw : pool) {
            auto canon = canonicalize(std::move(raw));
            if (!canon || !is_monic(*canon)) continue;
            const double s2 = quad_form(gm.acf, *canon);
            Entry e{s2, n, *canon};
            auto [it, inserted] = seen.try_emplace(*canon, e);
            if (!inserted && better(e, it->second)) it->second = e;
            if (!best_at_n || s2 < best_at_n->sigma2)
                best_at_n = FilterCandidate{n, to_filter(*canon), s2};
        }
        if (best_at_n) per_n.push_back(std::move(*best_at_n));
    }

    for (const auto& [w, e] : seen)
        if (!global_best || better(e, *global_best)) global_best = &e;

    if (!global_best) {
        // Unreachable in practice: +-e1 always yields a monic candidate.
        throw NonMonicOptimum({}, {}, "no monic candidate found in the search pool");
    }

    FilterSearchResult out;
    out.filter = to_filter(global_best->w);
    out.sigma2 = global_best->sigma2;
    out.n_used = global_best->n;
    out.candidates = std::move(per_n);
    return out;
}

double noise_enhancement(const Poly& channel, const IntFilter& filt, EqMode mode, double snr) {
    const GramSpec spec{mode, static_cast<int>(filt.length()), channel, snr};
    const auto acf = autocorr(spec);
    GVec w;
    w.re = filt.re;
    w.im = filt.im.empty() ? std::vector<long long>(filt.re.size(), 0) : filt.im;
    return quad_form(acf, w);
}

}  // namespace ifeq
