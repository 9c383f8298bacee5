#include <cmath>

#include "checks.hpp"
#include "ifeq/dsp.hpp"
#include "ifeq/errors.hpp"
#include "ifeq/poly.hpp"
#include "ifeq/rng.hpp"

using namespace ifeq;

static std::vector<double> real_coeffs(const Poly& p) {
    std::vector<double> out;
    for (const auto& c : p.coeffs()) out.push_back(c.real());
    return out;
}

static void test_linear_convolve() {
    CHECK(real_coeffs(linear_convolve(Poly{1.0}, Poly{1.0, 2.0, 1.0})) ==
          (std::vector<double>{1.0, 2.0, 1.0}));
    CHECK(real_coeffs(linear_convolve(Poly{1.0, 1.0}, Poly{1.0, -1.0})) ==
          (std::vector<double>{1.0, 0.0, -1.0}));
    CHECK(real_coeffs(linear_convolve(Poly{1.0, 0.5}, Poly{1.0, 0.5})) ==
          (std::vector<double>{1.0, 1.0, 0.25}));
}

static void test_cyclic_convolve() {
    CHECK(cyclic_convolve_mod({3, 0, 0, 0}, {1, 2, 1}, 7) == (std::vector<long long>{3, 6, 3, 0}));
    CHECK(cyclic_convolve_mod({3, 1, 4, 0, 0, 0}, {1, 2, 1}, 7) ==
          (std::vector<long long>{3, 0, 2, 2, 4, 0}));
    // identity filter
    const std::vector<long long> x{1, 4, 2, 6, 0, 3};
    CHECK(cyclic_convolve_mod(x, {1}, 7) == x);
    CHECK_THROWS(cyclic_convolve_mod({9, 0}, {1}, 7), InputDomainError);

    // equals linear convolution folded mod N then reduced mod q
    Rng rng(7, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const long long q = 2 + rng.below(9);
        const int N = 2 + static_cast<int>(rng.below(12));
        const int n = 1 + static_cast<int>(rng.below(static_cast<long long>(N)));
        std::vector<long long> xs(static_cast<std::size_t>(N));
        for (auto& s : xs) s = rng.below(q);
        std::vector<long long> taps(static_cast<std::size_t>(n));
        for (auto& t : taps) t = rng.below(11) - 5;

        std::vector<long long> folded(static_cast<std::size_t>(N), 0);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < n; ++j) folded[static_cast<std::size_t>((i + j) % N)] += xs[static_cast<std::size_t>(i)] * taps[static_cast<std::size_t>(j)];
        for (auto& v : folded) v = ((v % q) + q) % q;
        CHECK(cyclic_convolve_mod(xs, taps, q) == folded);
    }

    // zero-padded blocks: the first N linear-convolution outputs already match
    Rng rng2(8, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const long long q = 2 + rng2.below(9);
        const int N = 3 + static_cast<int>(rng2.below(10));
        const int n = 1 + static_cast<int>(rng2.below(std::min(4ll, static_cast<long long>(N))));
        std::vector<long long> xs(static_cast<std::size_t>(N), 0);
        for (int i = 0; i < N - (n - 1); ++i) xs[static_cast<std::size_t>(i)] = rng2.below(q);
        std::vector<long long> taps(static_cast<std::size_t>(n));
        for (auto& t : taps) t = rng2.below(11) - 5;

        std::vector<long long> lin(static_cast<std::size_t>(N + n - 1), 0);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < n; ++j) lin[static_cast<std::size_t>(i + j)] += xs[static_cast<std::size_t>(i)] * taps[static_cast<std::size_t>(j)];
        const auto cyc = cyclic_convolve_mod(xs, taps, q);
        for (int i = 0; i < N; ++i)
            CHECK(((lin[static_cast<std::size_t>(i)] % q) + q) % q == cyc[static_cast<std::size_t>(i)]);
    }
}

static void test_constellation() {
    const Constellation b2(2, 1.0);
    CHECK_NEAR(b2.c, 4.0, 1e-12);
    CHECK_NEAR(b2.delta, 4.0, 1e-12);
    CHECK_NEAR(b2.map(0), -1.0, 1e-12);
    CHECK_NEAR(b2.map(1), 1.0, 1e-12);

    const Constellation q4(4, 1.0);
    CHECK_NEAR(q4.c, std::sqrt(12.8), 1e-12);
    CHECK_NEAR(q4.map(0), -1.3416407864998738, 1e-9);
    CHECK_NEAR(q4.map(1), -0.4472135954999579, 1e-9);
    CHECK_NEAR(q4.map(2), 0.4472135954999579, 1e-9);
    CHECK_NEAR(q4.map(3), 1.3416407864998738, 1e-9);
    double power = 0.0;
    for (long long s = 0; s < 4; ++s) power += q4.map(s) * q4.map(s);
    CHECK_NEAR(power / 4.0, 1.0, 1e-12);

    // c decreases toward sqrt(12) for large q
    CHECK(Constellation(1000000, 1.0).c < Constellation(4, 1.0).c);
    CHECK_NEAR_REL(Constellation(1000000, 1.0).c, std::sqrt(12.0), 1e-9);

    // slicing inverts the map, including at the wrap
    const Constellation q8(8, 3.0);
    for (long long s = 0; s < 8; ++s) CHECK(q8.slice(q8.map(s)) == s);
    CHECK(q8.slice(mod_interval(q8.map(7) + q8.delta / 8.0, q8.delta)) == 0);

    // empirical power of uniform symbols within 3 sigma of snr
    Rng rng(11, 2);
    const long long draws = 1'000'000;
    const Constellation c5(5, 2.5);
    double acc = 0.0, acc4 = 0.0;
    for (long long i = 0; i < draws; ++i) {
        const double v = c5.map(rng.below(5));
        acc += v * v;
        acc4 += v * v * v * v;
    }
    const double mean = acc / static_cast<double>(draws);
    const double var_est = (acc4 / static_cast<double>(draws) - mean * mean) /
                           static_cast<double>(draws);
    CHECK_NEAR(mean, 2.5, 3.0 * std::sqrt(var_est));
}

static void test_mod_interval() {
    CHECK_NEAR(mod_interval(0.3, 1.0), 0.3, 1e-15);
    CHECK_NEAR(mod_interval(0.5, 1.0), -0.5, 1e-15);
    CHECK_NEAR(mod_interval(-1.2, 1.0), -0.2, 1e-15);
    CHECK_THROWS(mod_interval(0.1, 0.0), InputDomainError);

    Rng rng(3, 9);
    for (int i = 0; i < 1000; ++i) {
        const double delta = 0.25 + 4.0 * rng.uniform();
        const double v = rng.uniform_centered(40.0);
        const double r = mod_interval(v, delta);
        CHECK(r >= -delta / 2 && r < delta / 2);
        CHECK_NEAR(mod_interval(r, delta), r, 1e-12);  // idempotent
        const long long m = rng.below(13) - 6;
        CHECK_NEAR(mod_interval(v + static_cast<double>(m) * delta, delta), r, 1e-9);
    }

    const cplx z = mod_interval(cplx{0.5, -1.2}, 1.0);
    CHECK_NEAR(z.real(), -0.5, 1e-15);
    CHECK_NEAR(z.imag(), -0.2, 1e-15);
}

static void test_freq_response() {
    const auto flat = freq_response(Poly{1.0}, 16);
    for (const auto& v : flat) CHECK_NEAR(std::abs(v - cplx{1.0, 0.0}), 0.0, 1e-15);

    const auto delay = freq_response(Poly{0.0, 1.0}, 16);
    CHECK_NEAR(std::abs(delay[0] - cplx{1.0, 0.0}), 0.0, 1e-12);
    CHECK_NEAR(std::abs(delay[4] - cplx{0.0, 1.0}), 0.0, 1e-12);
    CHECK_NEAR(std::abs(delay[8] - cplx{-1.0, 0.0}), 0.0, 1e-12);
    CHECK_NEAR(std::abs(delay[12] - cplx{0.0, -1.0}), 0.0, 1e-12);

    const auto sum = freq_response(Poly{1.0, 1.0}, 16);
    CHECK_NEAR(std::abs(sum[8]), 0.0, 1e-12);  // zero at w = pi

    CHECK_THROWS(freq_response(Poly{1.0, 1.0}, 12), InputDomainError);  // not a power of two
    CHECK_THROWS(freq_response(Poly{1.0, 1.0}, 8), InputDomainError);   // too small
}

static void test_poly_basics() {
    CHECK((Poly{1.0, 0.0, 0.0}.degree() == 0));  // trailing zeros trimmed
    CHECK((Poly{0.0, 1.0}.leading_zeros() == 1));
    CHECK((Poly{0.0, 1.0}.without_delay().degree() == 0));
    CHECK((Poly{1.0, 2.0}.is_real()));
    const std::vector<cplx> cc{cplx{1.0, 0.0}, cplx{0.0, 1.0}};
    CHECK(!Poly(cc).is_real());
    CHECK_THROWS(Poly(std::vector<cplx>{}), InputDomainError);
}

int main() {
    test_poly_basics();
    test_linear_convolve();
    test_cyclic_convolve();
    test_constellation();
    test_mod_interval();
    test_freq_response();
    return checks::summary("test_dsp");
}
