#pragma once

#include <gmpxx.h>

#include <string>

namespace lipsel {

// Exact rational scalar used everywhere except the Steiner point quadrature.
using Rat = mpq_class;

// Parses "p", "-p" or "p/q" (q > 0 after reduction). Throws ValidationError
// on malformed input or a zero denominator.
Rat rat_from_string(const std::string& s);

// Canonical form: "p" when the denominator is 1, otherwise "p/q".
std::string rat_to_string(const Rat& r);

// A distance value: a nonnegative rational or +infinity. Addition absorbs
// infinity; min prefers the finite operand.
struct Dist {
  bool finite = true;
  Rat value = 0;

  static Dist infinity() { return Dist{false, Rat(0)}; }
  static Dist of(Rat v) { return Dist{true, std::move(v)}; }
  static Dist zero() { return Dist{true, Rat(0)}; }
};

Dist operator+(const Dist& a, const Dist& b);
bool operator==(const Dist& a, const Dist& b);
inline bool operator!=(const Dist& a, const Dist& b) { return !(a == b); }
bool operator<(const Dist& a, const Dist& b);
inline bool operator<=(const Dist& a, const Dist& b) { return a < b || a == b; }

Dist dist_min(const Dist& a, const Dist& b);
Dist dist_max(const Dist& a, const Dist& b);

// Scales a distance by a nonnegative finite factor; scaling infinity by zero
// is rejected since no caller has a meaning for it.
Dist dist_scale(const Dist& d, const Rat& factor);

std::string dist_to_string(const Dist& d);
// Accepts everything rat_from_string does plus the token "inf".
Dist dist_from_string(const std::string& s);

}  // namespace lipsel
