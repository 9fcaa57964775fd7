#include <doctest.h>

#include <complex>

#include "henon/mp.hpp"

using namespace henon;

TEST_CASE("MpReal arithmetic matches double") {
  mp::ScopedBits guard(64);
  MpReal a(1.75), b(-0.375);
  CHECK((a + b).to_double() == 1.375);
  CHECK((a - b).to_double() == 2.125);
  CHECK((a * b).to_double() == 1.75 * -0.375);
  CHECK((a / b).to_double() == 1.75 / -0.375);
  CHECK(abs(b).to_double() == 0.375);
  CHECK(sqrt(MpReal(2.25)).to_double() == 1.5);
  CHECK(log(MpReal(1.0)).to_double() == 0.0);
  CHECK(max(a, b) == a);
  CHECK(a > b);
  CHECK(isfinite(a));
}

TEST_CASE("MpReal survives exponents far beyond binary64") {
  mp::ScopedBits guard(64);
  MpReal big(1e300);
  MpReal sq = big * big;  // 1e600, not representable in double
  CHECK(isfinite(sq));
  CHECK(std::abs(sq.log2_magnitude() - 600.0 * std::log2(10.0)) <= 1.0);
  CHECK(log(sq).to_double() == doctest::Approx(600.0 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("MpComplex matches std::complex at low precision") {
  mp::ScopedBits guard(80);
  std::complex<double> za(1.25, -2.5), zb(-0.75, 0.125);
  MpComplex ma(za), mb(zb);
  CHECK(std::abs((ma * mb).to_cxd() - za * zb) <= 1e-15);
  CHECK(std::abs((ma / mb).to_cxd() - za / zb) <= 1e-14);
  CHECK(std::abs((ma + mb).to_cxd() - (za + zb)) == 0.0);
  CHECK(std::abs(sqrt(ma).to_cxd() - std::sqrt(za)) <= 1e-15);
  CHECK(std::abs(sqrt(MpComplex(-4.0)).to_cxd() - std::complex<double>(0, 2)) <= 1e-15);
  CHECK(abs(ma).to_double() == doctest::Approx(std::abs(za)).epsilon(1e-15));
  CHECK(std::abs(pow_int(ma, 7).to_cxd() - std::pow(za, 7)) <= 1e-10);
  CHECK(std::abs(pow_int(ma, -3).to_cxd() - std::pow(za, -3)) <= 1e-15);
}

TEST_CASE("precision is scoped and per-thread") {
  unsigned before = mp::default_bits();
  {
    mp::ScopedBits guard(200);
    CHECK(mp::default_bits() == 200);
    MpReal third = MpReal(1.0) / MpReal(3.0);
    CHECK(third.precision() == 200);
  }
  CHECK(mp::default_bits() == before);
}

TEST_CASE("Eigen fixed-size algebra works on MpComplex") {
  mp::ScopedBits guard(100);
  Eigen::Matrix<MpComplex, 2, 2> m;
  m(0, 0) = MpComplex(2.0);
  m(0, 1) = MpComplex(0.0, 1.0);
  m(1, 0) = MpComplex(1.0);
  m(1, 1) = MpComplex(0.0);
  Eigen::Matrix<MpComplex, 2, 1> v;
  v[0] = MpComplex(1.0, 1.0);
  v[1] = MpComplex(3.0);
  Eigen::Matrix<MpComplex, 2, 1> w = m * v;
  CHECK(std::abs(w[0].to_cxd() - std::complex<double>(2, 5)) <= 1e-15);
  CHECK(std::abs(w[1].to_cxd() - std::complex<double>(1, 1)) <= 1e-15);
  Eigen::Matrix<MpComplex, 2, 2> m2 = m * m;
  CHECK(std::abs(m2(0, 0).to_cxd() - std::complex<double>(4, 1)) <= 1e-15);
}
