#include "ifeq/poly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ifeq/errors.hpp"

namespace ifeq {

namespace {

bool all_real(const std::vector<cplx>& v) {
    for (const auto& c : v) {
        if (c.imag() != 0.0) return false;
    }
    return true;
}

void trim_trailing_zeros(std::vector<cplx>& v) {
    while (v.size() > 1 && v.back() == cplx{0.0, 0.0}) v.pop_back();
}

}  // namespace

Poly::Poly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InputDomainError("polynomial needs at least one coefficient");
    trim_trailing_zeros(coeffs_);
    real_ = all_real(coeffs_);
}

Poly::Poly(std::initializer_list<double> taps) {
    if (taps.size() == 0) throw InputDomainError("polynomial needs at least one coefficient");
    coeffs_.reserve(taps.size());
    for (double t : taps) coeffs_.emplace_back(t, 0.0);
    trim_trailing_zeros(coeffs_);
    real_ = true;
}

Poly Poly::from_real(const std::vector<double>& taps) {
    if (taps.empty()) throw InputDomainError("polynomial needs at least one coefficient");
    std::vector<cplx> c;
    c.reserve(taps.size());
    for (double t : taps) c.emplace_back(t, 0.0);
    return Poly(std::move(c));
}

cplx Poly::eval(cplx z) const {
    cplx acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

std::size_t Poly::leading_zeros() const {
    std::size_t s = 0;
    while (s < coeffs_.size() && coeffs_[s] == cplx{0.0, 0.0}) ++s;
    return s == coeffs_.size() ? 0 : s;  // zero polynomial has no delay factor
}

Poly Poly::without_delay() const {
    std::size_t s = leading_zeros();
    if (s == 0) return *this;
    return Poly(std::vector<cplx>(coeffs_.begin() + static_cast<long>(s), coeffs_.end()));
}

Poly linear_convolve(const Poly& a, const Poly& b) {
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<cplx> out(x.size() + y.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
    return Poly(std::move(out));
}

std::vector<cplx> freq_response(const Poly& p, std::size_t grid_size) {
    if (!std::has_single_bit(grid_size) || grid_size < 8 * p.length())
        throw InputDomainError("grid size must be a power of two >= 8*(degree+1)");
    std::vector<cplx> out(grid_size);
    const double step = 2.0 * M_PI / static_cast<double>(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double w = step * static_cast<double>(k);
        out[k] = p.eval(cplx{std::cos(w), std::sin(w)});
    }
    return out;
}

}  // namespace ifeq
