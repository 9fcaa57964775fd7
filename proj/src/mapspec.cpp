#include "henon/mapspec.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

#include "henon/errors.hpp"

namespace henon {

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw Error("map-parse", std::string("expected '") + c + "' at position " +
                                   std::to_string(i) + " in map spec");
  }

  bool number_ahead() {
    skip_ws();
    if (i >= s.size()) return false;
    char c = s[i];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double parse_number() {
    skip_ws();
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin)
      throw Error("map-parse", "expected a number at position " + std::to_string(i));
    i += size_t(end - begin);
    return v;
  }
};

// number ['i'] | 'i'  (sign handled by the caller)
cxd parse_simple_value(Cursor& c) {
  if (c.peek() == 'i') {
    c.expect('i');
    return {0.0, 1.0};
  }
  double v = c.parse_number();
  if (c.accept('i')) return {0.0, v};
  return {v, 0.0};
}

// re [('+'|'-') im 'i'] with optional leading sign, e.g. 1.5-0.25i, 2i, i
cxd parse_complex(Cursor& c) {
  double sign = 1.0;
  if (c.accept('-')) sign = -1.0;
  else c.accept('+');
  cxd first = sign * parse_simple_value(c);
  if (first.imag() == 0.0) {
    if (c.peek() == '+' || c.peek() == '-') {
      size_t save = c.i;
      double s2 = c.accept('-') ? -1.0 : (c.expect('+'), 1.0);
      if (c.peek() == 'i') {
        c.expect('i');
        return first + cxd(0.0, s2);
      }
      if (c.number_ahead()) {
        double v = c.parse_number();
        if (c.accept('i')) return first + cxd(0.0, s2 * v);
      }
      c.i = save;  // not an imaginary tail; leave it for the caller
    }
  }
  return first;
}

// [coef ['*']] ['z' ['^' k]]  |  'z' ['^' k]
void parse_term(Cursor& c, double sign, std::map<int, cxd>& coeffs) {
  cxd coef(1.0, 0.0);
  bool have_coef = false;
  if (c.accept('(')) {
    coef = parse_complex(c);
    c.expect(')');
    have_coef = true;
  } else if (c.peek() != 'z') {
    coef = parse_simple_value(c);
    have_coef = true;
  }
  c.accept('*');
  int power = 0;
  if (c.accept('z')) {
    power = 1;
    if (c.accept('^')) {
      double k = c.parse_number();
      power = int(k);
      if (power < 0 || double(power) != k)
        throw Error("map-parse", "polynomial powers must be nonnegative integers");
    }
  } else if (!have_coef) {
    throw Error("map-parse", "expected a term at position " + std::to_string(c.i));
  }
  coeffs[power] += sign * coef;
}

Polynomial<cxd> parse_poly(Cursor& c) {
  std::map<int, cxd> coeffs;
  double sign = 1.0;
  if (c.accept('-')) sign = -1.0;
  else c.accept('+');
  parse_term(c, sign, coeffs);
  while (c.peek() == '+' || c.peek() == '-') {
    sign = c.accept('-') ? -1.0 : (c.expect('+'), 1.0);
    parse_term(c, sign, coeffs);
  }
  int degree = coeffs.empty() ? 0 : coeffs.rbegin()->first;
  if (degree < 2)
    throw Error("map-parse", "polynomial degree must be >= 2");
  std::vector<cxd> v(size_t(degree) + 1, cxd(0.0));
  for (const auto& [k, ck] : coeffs) v[size_t(k)] = ck;
  if (v.back() != cxd(1.0, 0.0))
    throw Error("map-parse", "polynomial must be monic (leading coefficient 1)");
  return Polynomial<cxd>(std::move(v));
}

}  // namespace

cxd parse_complex_literal(const std::string& text) {
  Cursor c{text};
  cxd v = parse_complex(c);
  if (!c.eof())
    throw Error("map-parse", "trailing input in complex literal '" + text + "'");
  return v;
}

HenonMapD parse_map_spec(const std::string& text) {
  Cursor c{text};
  bool have_p = false, have_a = false;
  Polynomial<cxd> p;
  cxd a(0.0);
  while (!c.eof()) {
    if (c.accept('p')) {
      c.expect('=');
      p = parse_poly(c);
      have_p = true;
    } else if (c.accept('a')) {
      c.expect('=');
      a = parse_complex(c);
      have_a = true;
    } else {
      throw Error("map-parse", "expected 'p = ...' or 'a = ...' at position " +
                                   std::to_string(c.i));
    }
    if (!c.accept(';')) break;
  }
  if (!c.eof())
    throw Error("map-parse", "trailing input at position " + std::to_string(c.i));
  if (!have_p || !have_a)
    throw Error("map-parse", "map spec must define both p and a");
  if (a == cxd(0.0))
    throw Error("map-parse", "a is a non-zero constant");
  return HenonMapD(std::move(p), a);
}

}  // namespace henon
