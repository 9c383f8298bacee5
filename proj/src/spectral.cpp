#include "ifeq/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

#include "ifeq/errors.hpp"
#include "ifeq/lattice.hpp"

namespace ifeq {

namespace {

constexpr double kPwTol = 1e-9;

std::vector<cplx> roots_no_delay(const Poly& h) {
    const auto& c = h.coeffs();
    const int m = h.degree();
    if (m == 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i)
        companion(i, m - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(m)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solver failed on companion matrix");

    std::vector<cplx> roots(static_cast<std::size_t>(m));
    const double scale = h.max_abs_coeff();
    for (int i = 0; i < m; ++i) {
        const cplx z = solver.eigenvalues()(i);
        const double residual = std::abs(h.eval(z));
        const double allowed = 1e-8 * scale * std::pow(std::max(1.0, std::abs(z)), m);
        if (residual > allowed) throw NumericError("polynomial root residual check failed");
        roots[static_cast<std::size_t>(i)] = z;
    }
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

double log_spectrum_quadrature(const Poly& h, std::size_t grid) {
    const auto resp = freq_response(h, grid);
    double acc = 0.0;
    for (const auto& v : resp) acc += std::log(std::norm(v));
    return acc / static_cast<double>(grid);
}

}  // namespace

std::vector<cplx> channel_roots(const Poly& H) {
    if (H.is_zero()) throw InputDomainError("zero polynomial has no well-defined roots");
    const std::size_t s = H.leading_zeros();
    auto roots = roots_no_delay(H.without_delay());
    roots.insert(roots.begin(), s, cplx{0.0, 0.0});  // delay factor D^s
    return roots;
}

bool is_paley_wiener(const Poly& H, double tol) {
    if (H.is_zero()) return false;
    for (const auto& z : roots_no_delay(H.without_delay()))
        if (std::abs(1.0 - std::abs(z)) < tol) return false;
    return true;
}

void require_paley_wiener(const Poly& H, double tol) {
    if (H.is_zero()) throw InputDomainError("channel polynomial is zero");
    for (const auto& z : roots_no_delay(H.without_delay()))
        if (std::abs(1.0 - std::abs(z)) < tol)
            throw PaleyWienerViolation(
                z, "channel zero at (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                       "j) lies on the unit circle; ZF quantities diverge");
}

double sigma2_zf_dfe(const Poly& H) {
    require_paley_wiener(H, kPwTol);
    const Poly h = H.without_delay();
    const auto roots = roots_no_delay(h);

    // exp((1/2pi) Int log|H|^2) = |h_p|^2 prod max(|z_i|,1)^2, by Jensen's
    // formula applied to each linear factor of h_p prod (D - z_i).
    const cplx hp = h.coeffs().back();
    double log_gm = 2.0 * std::log(std::abs(hp));
    for (const auto& z : roots) log_gm += 2.0 * std::log(std::max(std::abs(z), 1.0));
    const double value = std::exp(-log_gm);

    // One-time quadrature cross-check; silent drift here would poison every
    // downstream gamma figure.
    std::size_t grid = std::max<std::size_t>(1u << 16, std::bit_ceil(8 * h.length()));
    bool ok = false;
    for (; grid <= (1u << 22); grid *= 2) {
        const double quad = std::exp(-log_spectrum_quadrature(h, grid));
        if (std::abs(quad - value) <= 1e-6 * value) {
            ok = true;
            break;
        }
    }
    if (!ok) throw NumericError("log-spectrum quadrature disagrees with the root formula");
    return value;
}

double alpha_H(const Poly& H) {
    require_paley_wiener(H, kPwTol);
    const Poly h = H.without_delay();
    const int p = h.degree();
    if (p == 0) return 1.0;

    // Maximum-phase zeros of H(D)H*(D^-*): roots of H outside the unit
    // circle stay, roots inside are reflected to 1/conj(z).
    std::vector<cplx> zmax;
    zmax.reserve(static_cast<std::size_t>(p));
    for (const auto& z : roots_no_delay(h))
        zmax.push_back(std::abs(z) > 1.0 ? z : 1.0 / std::conj(z));

    double log_num = 0.0;
    for (const auto& z : zmax) log_num += std::log(std::abs(z));
    log_num *= 2.0 * static_cast<double>(p);

    double log_den = 0.0;
    for (const auto& zu : zmax)
        for (const auto& zv : zmax) log_den += std::log(std::abs(std::conj(zu) * zv - 1.0));

    return std::exp(log_num - log_den);
}

double eta(int n, bool complex_mode) {
    if (n < 1) throw InputDomainError("eta requires n >= 1");
    const double nn = static_cast<double>(n);
    if (!complex_mode)
        return 2.0 * nn / (M_PI * M_E) * std::pow(1.4 * M_PI * nn, 1.0 / nn);
    return 4.0 * nn / (M_PI * M_E) * std::pow(2.8 * M_PI * nn, 1.0 / (2.0 * nn));
}

BoundReport minkowski_bound(const Poly& H, int n_max, int n_min) {
    const Poly h = H.without_delay();
    const int p = h.degree();
    const int lo = std::max(p + 1, n_min);
    if (n_max < lo)
        throw InputDomainError("bound needs n_max >= p+1 = " + std::to_string(p + 1));

    BoundReport rep;
    rep.alpha = alpha_H(H);
    rep.sigma2_zf_dfe = sigma2_zf_dfe(H);
    const bool cx = !H.is_real();

    for (int n = lo; n <= n_max; ++n) {
        const double v = eta(n, cx) * std::pow(rep.alpha, 1.0 / static_cast<double>(n));
        rep.table.push_back(BoundRow{n, v});
        if (rep.n_star == 0 || v < rep.bound) {
            rep.n_star = n;
            rep.bound = v;
        }
    }
    rep.bound_db = 10.0 * std::log10(rep.bound);
    rep.gap_db = gap_to_capacity(rep.bound);
    return rep;
}

double capacity_high_snr(const Poly& H, double snr) {
    if (!(snr > 0.0)) throw InputDomainError("snr must be positive");
    return 0.5 * std::log2(snr / sigma2_zf_dfe(H));
}

double mi_lower_bound(const Poly& H, const IntFilter& filt, double snr, EqMode mode) {
    if (!(snr > 0.0)) throw InputDomainError("snr must be positive");
    const double sigma2_if = noise_enhancement(H, filt, mode, snr);
    return 0.5 * std::log2(snr * 12.0 / (2.0 * M_PI * M_E * sigma2_if));
}

double gap_to_capacity(double gamma) {
    if (!(gamma > 0.0)) throw InputDomainError("gamma must be positive");
    return 10.0 * std::log10(2.0 * M_PI * M_E / 12.0) + 10.0 * std::log10(gamma);
}

ChannelAnalysis analyze_channel(const Poly& H) {
    ChannelAnalysis out;
    out.roots = channel_roots(H);
    out.paley_wiener = is_paley_wiener(H, kPwTol);
    if (out.paley_wiener) {
        out.sigma2_zf_dfe = sigma2_zf_dfe(H);
        out.alpha = alpha_H(H);
    }
    return out;
}

}  // namespace ifeq
