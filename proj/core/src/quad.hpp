#pragma once

// float128 scalar usable inside Eigen. Boost 1.74's own Eigen adapter predates
// Eigen 3.4 (missing infinity/quiet_NaN), so the traits are spelled out here.

#include <limits>

#include <boost/multiprecision/float128.hpp>
#include <Eigen/Dense>

namespace memchan {
using quad = boost::multiprecision::float128;
}

namespace Eigen {

template <>
struct NumTraits<memchan::quad> : GenericNumTraits<memchan::quad> {
  using Q = memchan::quad;
  using Real = Q;
  using NonInteger = Q;
  using Literal = Q;
  using Nested = Q;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };
  static Q epsilon() { return std::numeric_limits<Q>::epsilon(); }
  static Q dummy_precision() { return Q(1e-28); }
  static Q highest() { return (std::numeric_limits<Q>::max)(); }
  static Q lowest() { return std::numeric_limits<Q>::lowest(); }
  static Q infinity() { return std::numeric_limits<Q>::infinity(); }
  static Q quiet_NaN() { return std::numeric_limits<Q>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<Q>::digits10; }
};

}  // namespace Eigen

namespace memchan {
using QuadMatrix = Eigen::Matrix<quad, Eigen::Dynamic, Eigen::Dynamic>;
using QuadVector = Eigen::Matrix<quad, Eigen::Dynamic, 1>;
}  // namespace memchan
