#ifndef IFEQ_POLY_HPP
#define IFEQ_POLY_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ifeq {

using cplx = std::complex<double>;

// Coefficient sequence of a D-transform: coeffs()[k] multiplies D^k.
// Trailing zero coefficients are trimmed so degree() is well-defined;
// the zero polynomial is kept as the single coefficient 0.
class Poly {
  public:
    Poly() : coeffs_{cplx{0.0, 0.0}}, real_(true) {}
    explicit Poly(std::vector<cplx> coeffs);
    Poly(std::initializer_list<double> taps);
    static Poly from_real(const std::vector<double>& taps);

    const std::vector<cplx>& coeffs() const { return coeffs_; }
    std::size_t length() const { return coeffs_.size(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_real() const { return real_; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0, 0.0}; }

    cplx at(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : cplx{0.0, 0.0}; }
    cplx eval(cplx z) const;
    double max_abs_coeff() const;

    // Number of leading (low-order) zero coefficients; a pure delay factor D^s.
    std::size_t leading_zeros() const;
    // Polynomial with the delay factor stripped. Spectrally identical to *this.
    Poly without_delay() const;

    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

  private:
    std::vector<cplx> coeffs_;
    bool real_;
};

Poly linear_convolve(const Poly& a, const Poly& b);

// p(e^{j w_k}) for w_k = 2*pi*k/grid_size, k = 0..grid_size-1.
// grid_size must be a power of two with grid_size >= 8*(degree+1).
std::vector<cplx> freq_response(const Poly& p, std::size_t grid_size);

}  // namespace ifeq

#endif
