#ifndef IFEQ_LATTICE_FWD_HPP
#define IFEQ_LATTICE_FWD_HPP

namespace ifeq {

enum class EqMode { ZF, MMSE };

const char* to_string(EqMode mode);

}  // namespace ifeq

#endif
