// Tiny assertion helpers shared by the test programs. Failures print to
// stderr and the process exits nonzero from main via checks::failures.
#ifndef IFEQ_TESTS_CHECKS_HPP
#define IFEQ_TESTS_CHECKS_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace checks {

inline int failures = 0;

inline void fail(const char* file, int line, const std::string& msg) {
    std::fprintf(stderr, "FAIL %s:%d  %s\n", file, line, msg.c_str());
    ++failures;
}

inline bool near(double got, double want, double tol) {
    if (std::isnan(got) || std::isnan(want)) return false;
    return std::abs(got - want) <= tol;
}

inline bool near_rel(double got, double want, double rel) {
    return near(got, want, rel * std::max(1e-300, std::abs(want)));
}

inline int summary(const char* name) {
    if (failures == 0) {
        std::printf("%s: all checks passed\n", name);
        return 0;
    }
    std::fprintf(stderr, "%s: %d check(s) failed\n", name, failures);
    return 1;
}

template <typename T>
std::string vec_str(const std::vector<T>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

}  // namespace checks

#define CHECK(cond)                                                      \
    do {                                                                 \
        if (!(cond)) checks::fail(__FILE__, __LINE__, "condition: " #cond); \
    } while (0)

#define CHECK_MSG(cond, msg)                                   \
    do {                                                       \
        if (!(cond)) checks::fail(__FILE__, __LINE__, (msg));  \
    } while (0)

#define CHECK_NEAR(got, want, tol)                                                   \
    do {                                                                             \
        const double g__ = (got), w__ = (want);                                      \
        if (!checks::near(g__, w__, (tol)))                                          \
            checks::fail(__FILE__, __LINE__,                                         \
                         std::string(#got) + " = " + std::to_string(g__) +           \
                             ", expected " + std::to_string(w__) + " +- " +          \
                             std::to_string((double)(tol)));                         \
    } while (0)

#define CHECK_NEAR_REL(got, want, rel)                                               \
    do {                                                                             \
        const double g__ = (got), w__ = (want);                                      \
        if (!checks::near_rel(g__, w__, (rel)))                                      \
            checks::fail(__FILE__, __LINE__,                                         \
                         std::string(#got) + " = " + std::to_string(g__) +           \
                             ", expected " + std::to_string(w__) + " (rel " +        \
                             std::to_string((double)(rel)) + ")");                   \
    } while (0)

#define CHECK_THROWS(expr, ExType)                                                    \
    do {                                                                              \
        bool caught__ = false;                                                        \
        try {                                                                         \
            (void)(expr);                                                             \
        } catch (const ExType&) {                                                     \
            caught__ = true;                                                          \
        } catch (...) {                                                               \
        }                                                                             \
        if (!caught__)                                                                \
            checks::fail(__FILE__, __LINE__, "expected " #ExType " from: " #expr);    \
    } while (0)

#endif
