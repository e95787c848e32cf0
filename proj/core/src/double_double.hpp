#pragma once

// Minimal double-double arithmetic (about 106 significant bits), after the
// error-free transformations of Dekker/Knuth and the QD library layout.
// Only what the reference zeta evaluator needs.

#include <cmath>

namespace zladder::dd {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DD() = default;
  constexpr DD(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr DD(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD operator+(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(const DD& a) { return {-a.hi, -a.lo}; }
inline DD operator-(const DD& a, const DD& b) { return a + (-b); }

inline DD operator*(const DD& a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline DD operator*(const DD& a, const DD& b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD operator/(const DD& a, const DD& b) {
  const double q1 = a.hi / b.hi;
  DD r = a - b * q1;
  const double q2 = r.hi / b.hi;
  r = r - b * q2;
  const double q3 = r.hi / b.hi;
  return quick_two_sum(q1, q2) + DD(q3);
}

inline DD operator/(const DD& a, double b) {
  const double q1 = a.hi / b;
  const DD p = two_prod(q1, b);
  DD s = two_sum(a.hi, -p.hi);
  s.lo -= p.lo;
  s.lo += a.lo;
  const double q2 = (s.hi + s.lo) / b;
  return quick_two_sum(q1, q2);
}

inline DD& operator+=(DD& a, const DD& b) { return a = a + b; }

inline DD sqrt(const DD& a) {
  if (a.hi <= 0.0) return {};
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  const DD diff = a - two_prod(ax, ax);
  return two_sum(ax, diff.hi * (x * 0.5));
}

inline double abs_approx(const DD& a) { return std::fabs(a.hi); }

struct Complex {
  DD re;
  DD im;
};

inline Complex operator+(const Complex& a, const Complex& b) {
  return {a.re + b.re, a.im + b.im};
}
inline Complex operator-(const Complex& a, const Complex& b) {
  return {a.re - b.re, a.im - b.im};
}
inline Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(const Complex& a, const DD& s) { return {a.re * s, a.im * s}; }
inline Complex& operator+=(Complex& a, const Complex& b) { return a = a + b; }

inline double abs_approx(const Complex& z) { return std::hypot(z.re.hi, z.im.hi); }

}  // namespace zladder::dd
