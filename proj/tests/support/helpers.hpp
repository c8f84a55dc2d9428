#pragma once

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include <peach/types.hpp>

namespace testing_util {

template <class F>
peach::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const peach::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no peach::Error thrown";
  return peach::ErrorCode::InvalidConfig;
}

inline double max_abs(const peach::CMatrix& x) { return x.cwiseAbs().maxCoeff(); }

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(const peach::CVector& got, const peach::CVector& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace testing_util
