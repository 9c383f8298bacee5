#ifndef IFEQ_FFT_HPP
#define IFEQ_FFT_HPP

#include <cstddef>
#include <vector>

#include "ifeq/poly.hpp"

namespace ifeq::fft {

// X_m = sum_k x_k e^{-j 2 pi k m / G}. Size must be a power of two.
std::vector<cplx> forward(const std::vector<cplx>& x);

// x_k = (1/G) sum_m X_m e^{+j 2 pi k m / G}; inverse(forward(x)) == x.
std::vector<cplx> inverse(const std::vector<cplx>& x);

}  // namespace ifeq::fft

#endif
