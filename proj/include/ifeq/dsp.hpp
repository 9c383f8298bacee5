#ifndef IFEQ_DSP_HPP
#define IFEQ_DSP_HPP

#include <cstdint>
#include <vector>

#include "ifeq/poly.hpp"

namespace ifeq {

// Monic integer-valued filter I(D). Real filters leave `im` empty; complex
// (Gaussian-integer) filters carry matching real and imaginary tap vectors.
struct IntFilter {
    std::vector<long long> re;
    std::vector<long long> im;

    IntFilter() : re{1} {}
    explicit IntFilter(std::vector<long long> taps) : re(std::move(taps)) { validate(); }
    IntFilter(std::vector<long long> taps_re, std::vector<long long> taps_im)
        : re(std::move(taps_re)), im(std::move(taps_im)) {
        validate();
    }

    std::size_t length() const { return re.size(); }
    bool is_real() const;
    bool is_monic() const;
    Poly to_poly() const;

    bool operator==(const IntFilter& o) const;

  private:
    void validate() const;
};

// (x (*) taps) mod q with indices wrapping modulo N = x.size().
// Filter entries are arbitrary integers; x entries must lie in {0..q-1}.
std::vector<long long> cyclic_convolve_mod(const std::vector<long long>& x,
                                           const std::vector<long long>& taps, long long q);

// Centered modulo onto [-delta/2, delta/2); the upper endpoint maps to -delta/2.
double mod_interval(double v, double delta);
cplx mod_interval(cplx v, double delta);  // applied per real/imaginary part
std::vector<double> mod_interval(const std::vector<double>& v, double delta);

// q-ary PAM constellation scaled so uniform use meets the power budget exactly:
// point(s) = delta*(2s-(q-1))/(2q) with delta = c*sqrt(snr), c = sqrt(12 q^2/(q^2-1)).
struct Constellation {
    long long q;
    double snr;    // linear; noise is unit-variance by convention
    double c;
    double delta;  // modulo interval length

    Constellation(long long q_, double snr_linear);

    double map(long long symbol) const;
    std::vector<double> map(const std::vector<long long>& symbols) const;

    // Nearest constellation point in the mod-delta sense.
    long long slice(double y) const;
    std::vector<long long> slice(const std::vector<double>& y) const;
};

}  // namespace ifeq

#endif
