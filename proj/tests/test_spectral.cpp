#include <algorithm>
#include <cmath>

#include "checks.hpp"
#include "ifeq/errors.hpp"
#include "ifeq/lattice.hpp"
#include "ifeq/poly.hpp"
#include "ifeq/rng.hpp"
#include "ifeq/spectral.hpp"

using namespace ifeq;

// Grid quadrature of exp(-(1/2pi) Int log |H|^2 dw), independent of the
// root-product implementation path.
static double log_integral_oracle(const Poly& h) {
    const std::size_t G = 1u << 20;
    const auto resp = freq_response(h, G);
    double acc = 0.0;
    for (const auto& v : resp) acc += std::log(std::norm(v));
    return std::exp(-acc / static_cast<double>(G));
}

static Poly random_pw_channel(Rng& rng, int p) {
    while (true) {
        std::vector<cplx> taps(static_cast<std::size_t>(p) + 1);
        for (auto& t : taps) t = cplx{rng.gaussian(), 0.0};
        Poly h(taps);
        if (h.is_zero() || h.coeffs()[0] == cplx{0.0, 0.0} || h.degree() != p) continue;
        if (!is_paley_wiener(h, 1e-6)) continue;
        return h;
    }
}

static bool has_root_near(const std::vector<cplx>& roots, cplx want, double tol) {
    return std::any_of(roots.begin(), roots.end(),
                       [&](const cplx& z) { return std::abs(z - want) < tol; });
}

static void test_channel_roots() {
    {
        const auto r = channel_roots(Poly{1.0, 0.5});
        CHECK(r.size() == 1);
        CHECK(has_root_near(r, cplx{-2.0, 0.0}, 1e-9));
    }
    {
        const auto r = channel_roots(Poly{1.0, 2.0});
        CHECK(has_root_near(r, cplx{-0.5, 0.0}, 1e-9));
    }
    {
        // (1+0.5D)(1+0.25D) = 1 + 0.75D + 0.125D^2
        const auto r = channel_roots(Poly{1.0, 0.75, 0.125});
        CHECK(r.size() == 2);
        CHECK(has_root_near(r, cplx{-2.0, 0.0}, 1e-7));
        CHECK(has_root_near(r, cplx{-4.0, 0.0}, 1e-7));
    }
    {
        // delay factor contributes roots at the origin
        const auto r = channel_roots(Poly{0.0, 1.0, 0.5});
        CHECK(r.size() == 2);
        CHECK(has_root_near(r, cplx{0.0, 0.0}, 1e-12));
        CHECK(has_root_near(r, cplx{-2.0, 0.0}, 1e-9));
    }
}

static void test_sigma2_zf_dfe() {
    for (double a : {0.1, -0.3, 0.5, 0.9, -0.95})
        CHECK_NEAR_REL(sigma2_zf_dfe(Poly{1.0, a}), 1.0, 1e-6);
    CHECK_NEAR_REL(sigma2_zf_dfe(Poly{1.0, 2.0}), 0.25, 1e-6);
    CHECK_NEAR_REL(sigma2_zf_dfe(Poly{2.0}), 0.25, 1e-9);
    CHECK_THROWS(sigma2_zf_dfe(Poly{1.0, 1.0}), PaleyWienerViolation);

    Rng rng(31, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const Poly h = random_pw_channel(rng, 1 + static_cast<int>(rng.below(4)));
        const double v = sigma2_zf_dfe(h);
        CHECK_NEAR_REL(v, log_integral_oracle(h), 1e-6);
        // scaling law
        std::vector<cplx> scaled(h.coeffs());
        for (auto& c : scaled) c *= 3.0;
        CHECK_NEAR_REL(sigma2_zf_dfe(Poly(scaled)), v / 9.0, 1e-9);
    }
}

static void test_alpha() {
    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9})
        CHECK_NEAR_REL(alpha_H(Poly{1.0, a}), 1.0 / (1.0 - a * a), 1e-7);
    CHECK_NEAR_REL(alpha_H(Poly{1.0, 0.5}), 4.0 / 3.0, 1e-7);
    CHECK_NEAR_REL(alpha_H(Poly{5.0}), 1.0, 1e-12);

    // roots far from the unit circle: alpha tends to 1
    CHECK_NEAR(alpha_H(Poly{1.0, 1e-6}), 1.0, 1e-9);

    // Toeplitz determinant identity: det(K_n)^{1/n} = alpha^{1/n} sigma2,
    // for n >= p+1
    Rng rng(43, 2);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 1 + static_cast<int>(rng.below(4));
        const Poly h = random_pw_channel(rng, p);
        const double alpha = alpha_H(h);
        const double s2 = sigma2_zf_dfe(h);
        for (int n = p + 1; n <= p + 6; ++n) {
            const auto gm = build_gram(GramSpec{EqMode::ZF, n, h});
            const double det = gm.K.determinant();
            const double lhs = std::pow(det, 1.0 / static_cast<double>(n));
            const double rhs = std::pow(alpha, 1.0 / static_cast<double>(n)) * s2;
            CHECK_NEAR_REL(lhs, rhs, 1e-6);
        }
    }
}

static void test_eta() {
    CHECK_NEAR(eta(1, false), 2.8 / M_E, 1e-12);
    CHECK_NEAR(eta(2, false), 4.0 / (M_PI * M_E) * std::sqrt(2.8 * M_PI), 1e-12);
    CHECK_NEAR(eta(2, false), 1.3892, 1e-4);
    // eta(n)/n -> 2/(pi e)
    CHECK_NEAR_REL(eta(1000000, false) / 1e6, 2.0 / (M_PI * M_E), 1e-4);
    // complex variant
    CHECK_NEAR(eta(1, true), 4.0 / (M_PI * M_E) * std::sqrt(2.8 * M_PI), 1e-12);
    CHECK_THROWS(eta(0, false), InputDomainError);
}

static void test_minkowski_bound() {
    {
        const auto rep = minkowski_bound(Poly{1.0, 0.5}, 10);
        CHECK(rep.n_star == 2);
        CHECK_NEAR(rep.bound, eta(2, false) * std::sqrt(4.0 / 3.0), 1e-9);
        CHECK_NEAR(rep.bound, 1.604, 2e-3);
        CHECK_NEAR(rep.bound_db, 2.05, 5e-3);
        CHECK(rep.table.size() == 9);
        for (const auto& row : rep.table) CHECK(row.value >= rep.bound);
        CHECK(rep.bound >= 1.0);
    }
    {
        // alpha ~= 1: the minimum sits at the smallest admissible n
        const auto rep = minkowski_bound(Poly{1.0, 1e-8}, 6);
        CHECK(rep.n_star == 2);
        CHECK_NEAR(rep.bound, eta(2, false), 1e-6);
    }
    {
        // bound dominates the measured gamma
        const auto rep = minkowski_bound(Poly{1.0, 0.9}, 12);
        const double gamma = 2.0 / 1.9;
        CHECK(rep.bound >= gamma);
    }
    CHECK_THROWS(minkowski_bound(Poly{1.0, 0.5}, 1), InputDomainError);  // below p+1
}

static void test_capacity_and_gap() {
    CHECK_NEAR(capacity_high_snr(Poly{1.0}, 15.0), 0.5 * std::log2(15.0), 1e-12);
    CHECK_NEAR(capacity_high_snr(Poly{1.0}, 15.0), 1.953, 1e-3);
    CHECK_NEAR_REL(capacity_high_snr(Poly{1.0, 0.5}, 1e6), 0.5 * std::log2(1e6), 1e-6);
    CHECK_NEAR(capacity_high_snr(Poly{1.0}, 30.0) - capacity_high_snr(Poly{1.0}, 15.0), 0.5,
               1e-12);

    CHECK_NEAR(gap_to_capacity(1.0), 1.5329, 1e-3);
    CHECK_NEAR(gap_to_capacity(4.0 / 3.0), 2.782, 1e-3);
    CHECK_NEAR(gap_to_capacity(10.0), gap_to_capacity(1.0) + 10.0, 1e-9);
    CHECK_THROWS(gap_to_capacity(0.0), InputDomainError);

    // mi bound: flat channel with the identity filter
    const double snr = 100.0;
    const double mi = mi_lower_bound(Poly{1.0}, IntFilter({1}), snr, EqMode::ZF);
    CHECK_NEAR(mi, 0.5 * std::log2(snr * 12.0 / (2.0 * M_PI * M_E)), 1e-9);
    // rate gap to capacity, converted to an SNR gap, is the shaping loss
    const double cap = capacity_high_snr(Poly{1.0}, snr);
    CHECK_NEAR((cap - mi) * 20.0 * std::log10(2.0), 1.5329, 2e-3);

    // two-tap example: total gap = shaping + 10log10(2/1.9)
    const double gamma = noise_enhancement(Poly{1.0, 0.9}, IntFilter({1, 1}), EqMode::ZF) /
                         sigma2_zf_dfe(Poly{1.0, 0.9});
    CHECK_NEAR(gap_to_capacity(gamma), 1.5329 + 10.0 * std::log10(2.0 / 1.9), 2e-3);
    CHECK_NEAR(gap_to_capacity(gamma), 1.755, 2e-3);
}

static void test_analyze() {
    const auto a = analyze_channel(Poly{1.0, 0.5});
    CHECK(a.paley_wiener);
    CHECK_NEAR_REL(a.sigma2_zf_dfe, 1.0, 1e-6);
    CHECK_NEAR_REL(a.alpha, 4.0 / 3.0, 1e-6);
    CHECK(a.roots.size() == 1);

    const auto bad = analyze_channel(Poly{1.0, 1.0});
    CHECK(!bad.paley_wiener);
}

int main() {
    test_channel_roots();
    test_sigma2_zf_dfe();
    test_alpha();
    test_eta();
    test_minkowski_bound();
    test_capacity_and_gap();
    test_analyze();
    return checks::summary("test_spectral");
}
