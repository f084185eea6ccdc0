#pragma once

#include <algorithm>
#include <string>

#include "diagfp/multipoly.hpp"

namespace diagfp {

/// P/Q over F_p normalized so that Q(0,...,0) = 1, i.e. a rational function
/// with a power-series expansion at the origin.
class RationalFunction {
 public:
  RationalFunction(MultiPoly numerator, MultiPoly denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (num_.nvars() != den_.nvars()) fail(ErrorCode::DimMismatch, "numerator and denominator variable counts differ");
    if (den_.is_zero()) fail(ErrorCode::NotExpandable, "zero denominator");
    if (!num_.is_zero()) {
      auto g = num_.monomial_content();
      auto h = den_.monomial_content();
      for (std::size_t i = 0; i < kMaxVars; ++i) g[i] = std::min(g[i], h[i]);
      num_ = num_.divided_by_monomial(g);
      den_ = den_.divided_by_monomial(g);
    }
    auto c0 = den_.constant_term();
    if (c0 == 0) fail(ErrorCode::NotExpandable, "denominator vanishes at the origin");
    auto inv = den_.field().inv(c0);
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }

  const MultiPoly& numerator() const noexcept { return num_; }
  const MultiPoly& denominator() const noexcept { return den_; }
  std::size_t nvars() const noexcept { return num_.nvars(); }
  const PrimeField& field() const noexcept { return num_.field(); }
  std::uint32_t prime() const noexcept { return num_.field().prime(); }

  /// max(total degree of P, total degree of Q).
  int height() const { return std::max(num_.total_degree(), den_.total_degree()); }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  MultiPoly num_;
  MultiPoly den_;
};

}  // namespace diagfp
