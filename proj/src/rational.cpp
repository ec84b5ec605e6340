#include "lipsel/rational.hpp"

#include "lipsel/error.hpp"

namespace lipsel {

namespace {

bool all_digits(const std::string& s, size_t from, size_t to) {
  if (from >= to) return false;
  for (size_t i = from; i < to; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  size_t start = 0;
  if (!s.empty() && s[0] == '-') start = 1;
  size_t slash = s.find('/');
  bool ok;
  if (slash == std::string::npos) {
    ok = all_digits(s, start, s.size());
  } else {
    ok = all_digits(s, start, slash) && all_digits(s, slash + 1, s.size());
  }
  if (!ok) throw ValidationError("malformed rational '" + s + "'");

  mpz_class num(s.substr(0, slash == std::string::npos ? s.size() : slash));
  mpz_class den(1);
  if (slash != std::string::npos) {
    den = mpz_class(s.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + s + "'");
  }
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Dist operator+(const Dist& a, const Dist& b) {
  if (!a.finite || !b.finite) return Dist::infinity();
  return Dist::of(a.value + b.value);
}

bool operator==(const Dist& a, const Dist& b) {
  if (a.finite != b.finite) return false;
  return !a.finite || a.value == b.value;
}

bool operator<(const Dist& a, const Dist& b) {
  if (!a.finite) return false;
  if (!b.finite) return true;
  return a.value < b.value;
}

Dist dist_min(const Dist& a, const Dist& b) { return a < b ? a : b; }
Dist dist_max(const Dist& a, const Dist& b) { return a < b ? b : a; }

Dist dist_scale(const Dist& d, const Rat& factor) {
  if (!d.finite) {
    if (factor == 0)
      throw ValidationError("cannot scale an infinite distance by zero");
    return Dist::infinity();
  }
  return Dist::of(d.value * factor);
}

std::string dist_to_string(const Dist& d) {
  return d.finite ? rat_to_string(d.value) : "inf";
}

Dist dist_from_string(const std::string& s) {
  if (s == "inf") return Dist::infinity();
  return Dist::of(rat_from_string(s));
}

}  // namespace lipsel
