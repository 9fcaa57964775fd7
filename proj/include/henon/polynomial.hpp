#pragma once
#include <vector>

#include "henon/errors.hpp"
#include "henon/scalar.hpp"

namespace henon {

// Monic polynomial c_0 + c_1 z + ... + z^d, d >= 2 when used as the map's p.
template <class S>
class Polynomial {
public:
  Polynomial() : coeffs_{S(0), S(1)} {}
  explicit Polynomial(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error("bad-polynomial", "empty coefficient list");
    if (!(coeffs_.back() == S(1)))
      throw Error("bad-polynomial", "leading coefficient must be exactly 1 (monic)");
  }

  int degree() const { return int(coeffs_.size()) - 1; }
  const std::vector<S>& coeffs() const { return coeffs_; }

  S operator()(const S& z) const {
    S acc = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) acc = acc * z + coeffs_[size_t(k)];
    return acc;
  }

  // p' by coefficient shift (not monic in general; bypass the monic check)
  std::vector<S> derivative_coeffs() const {
    std::vector<S> d;
    d.reserve(coeffs_.size() - 1);
    for (int k = 1; k <= degree(); ++k) d.push_back(S(double(k)) * coeffs_[size_t(k)]);
    return d;
  }

  S derivative_at(const S& z) const {
    auto d = derivative_coeffs();
    S acc = d.back();
    for (int k = int(d.size()) - 2; k >= 0; --k) acc = acc * z + d[size_t(k)];
    return acc;
  }

  template <class To>
  Polynomial<To> cast() const {
    std::vector<To> c;
    c.reserve(coeffs_.size());
    for (const auto& ck : coeffs_) c.push_back(To(scalar_info<S>::to_cxd(ck)));
    return Polynomial<To>(std::move(c));
  }

private:
  std::vector<S> coeffs_;
};

}  // namespace henon
