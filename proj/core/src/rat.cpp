#include "plhom/rat.hpp"

#include <ostream>
#include <stdexcept>

#include "plhom/error.hpp"

namespace plhom {

Rat::Rat(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat Rat::of(mpq_class q) {
  if (sgn(q.get_den()) == 0) throw DomainError("rational with zero denominator");
  q.canonicalize();
  Rat r;
  r.v_ = std::move(q);
  return r;
}

Rat Rat::parse(std::string_view text) {
  auto bad = [&] { return ParseError("malformed rational \"" + std::string(text) + "\""); };
  if (text.empty()) throw bad();
  std::string num, den = "1";
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    num = std::string(text);
  } else {
    num = std::string(text.substr(0, slash));
    den = std::string(text.substr(slash + 1));
    if (num.empty() || den.empty()) throw bad();
  }
  auto digits_ok = [](const std::string& s, bool sign_ok) {
    std::size_t i = 0;
    if (sign_ok && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  mpq_class q{mpz_class(num), mpz_class(den)};
  if (sgn(q.get_den()) == 0) throw bad();
  return Rat::of(std::move(q));
}

Rat operator/(const Rat& a, const Rat& b) {
  if (b.sign() == 0) throw DomainError("division by zero");
  return Rat::of(mpq_class(a.raw() / b.raw()));
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.sign() == 0) throw DomainError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rat midpoint(const Rat& a, const Rat& b) { return (a + b) / Rat(2); }

Rat rat_pow(const Rat& base, long exp) {
  if (exp == 0) return Rat(1);
  if (base.sign() == 0 && exp < 0) throw DomainError("zero to a negative power");
  unsigned long e = exp < 0 ? static_cast<unsigned long>(-(exp + 1)) + 1 : static_cast<unsigned long>(exp);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), e);
  if (exp < 0) std::swap(num, den);
  return Rat::of(mpq_class(num, den));
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace plhom
