#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"

namespace nvk::test {

using cplx = std::complex<double>;

inline double rel_err(cplx got, cplx want) {
  const double d = std::abs(got - want);
  return std::abs(want) == 0.0 ? d : d / std::abs(want);
}

// Relative closeness with an absolute floor for values near zero.
inline bool close(cplx got, cplx want, double tol, double floor = 0.0) {
  return std::abs(got - want) <= std::max(tol * std::abs(want), floor);
}

}  // namespace nvk::test

#define NVK_CHECK_CLOSE(got, want, tol)                                              \
  do {                                                                               \
    const ::nvk::test::cplx nvk_got_ = (got);                                        \
    const ::nvk::test::cplx nvk_want_ = (want);                                      \
    INFO("got " << nvk_got_ << " want " << nvk_want_);                                \
    CHECK(::nvk::test::close(nvk_got_, nvk_want_, (tol), (tol)));                    \
  } while (0)
