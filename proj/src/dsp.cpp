#include "ifeq/dsp.hpp"

#include <cmath>

#include "ifeq/errors.hpp"

namespace ifeq {

bool IntFilter::is_real() const {
    for (long long v : im)
        if (v != 0) return false;
    return true;
}

bool IntFilter::is_monic() const {
    if (re.empty() || re[0] != 1) return false;
    return im.empty() || im[0] == 0;
}

Poly IntFilter::to_poly() const {
    std::vector<cplx> c(re.size());
    for (std::size_t k = 0; k < re.size(); ++k)
        c[k] = cplx{static_cast<double>(re[k]),
                    k < im.size() ? static_cast<double>(im[k]) : 0.0};
    return Poly(std::move(c));
}

bool IntFilter::operator==(const IntFilter& o) const {
    if (re != o.re) return false;
    if (is_real() && o.is_real()) return true;
    return im == o.im;
}

void IntFilter::validate() const {
    if (re.empty()) throw InputDomainError("integer filter needs at least one tap");
    if (!im.empty() && im.size() != re.size())
        throw InputDomainError("integer filter real/imaginary tap counts differ");
}

std::vector<long long> cyclic_convolve_mod(const std::vector<long long>& x,
                                           const std::vector<long long>& taps, long long q) {
    if (q < 2) throw InputDomainError("alphabet size q must be >= 2");
    const long long n = static_cast<long long>(x.size());
    if (n == 0) throw InputDomainError("cyclic convolution input is empty");
    if (static_cast<long long>(taps.size()) > n)
        throw InputDomainError("filter longer than the block length");
    for (long long v : x)
        if (v < 0 || v >= q)
            throw InputDomainError("symbol " + std::to_string(v) + " outside Z_" + std::to_string(q));

    std::vector<long long> out(static_cast<std::size_t>(n), 0);
    for (long long k = 0; k < n; ++k) {
        long long acc = 0;
        for (std::size_t m = 0; m < taps.size(); ++m) {
            long long idx = (k - static_cast<long long>(m)) % n;
            if (idx < 0) idx += n;
            acc += taps[m] * x[static_cast<std::size_t>(idx)];
        }
        long long r = acc % q;
        if (r < 0) r += q;
        out[static_cast<std::size_t>(k)] = r;
    }
    return out;
}

double mod_interval(double v, double delta) {
    if (delta <= 0.0) throw InputDomainError("modulo interval length must be positive");
    double r = v - delta * std::floor(v / delta + 0.5);
    // Guard the half-open convention against rounding at the upper edge.
    if (r >= delta / 2.0) r -= delta;
    if (r < -delta / 2.0) r += delta;
    return r;
}

cplx mod_interval(cplx v, double delta) {
    return cplx{mod_interval(v.real(), delta), mod_interval(v.imag(), delta)};
}

std::vector<double> mod_interval(const std::vector<double>& v, double delta) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = mod_interval(v[k], delta);
    return out;
}

Constellation::Constellation(long long q_, double snr_linear) : q(q_), snr(snr_linear) {
    if (q < 2) throw InputDomainError("constellation size q must be >= 2");
    if (snr <= 0.0) throw InputDomainError("snr must be positive");
    const double qq = static_cast<double>(q);
    c = std::sqrt(12.0 * qq * qq / (qq * qq - 1.0));
    delta = c * std::sqrt(snr);
}

double Constellation::map(long long symbol) const {
    if (symbol < 0 || symbol >= q)
        throw InputDomainError("symbol " + std::to_string(symbol) + " outside Z_" + std::to_string(q));
    return delta * (2.0 * static_cast<double>(symbol) - static_cast<double>(q - 1)) /
           (2.0 * static_cast<double>(q));
}

std::vector<double> Constellation::map(const std::vector<long long>& symbols) const {
    std::vector<double> out(symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k) out[k] = map(symbols[k]);
    return out;
}

long long Constellation::slice(double y) const {
    const double qq = static_cast<double>(q);
    long long s = std::llround(y / delta * qq + (qq - 1.0) / 2.0);
    s %= q;
    if (s < 0) s += q;
    return s;
}

std::vector<long long> Constellation::slice(const std::vector<double>& y) const {
    std::vector<long long> out(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) out[k] = slice(y[k]);
    return out;
}

}  // namespace ifeq
