#include "ppcdstab/rat.hpp"

#include <cmath>
#include <ostream>

#include "ppcdstab/errors.hpp"

namespace ppcdstab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NoUniqueSolution: return "NoUniqueSolution";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::NotAPath: return "NotAPath";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotAperiodic: return "NotAperiodic";
    case ErrorCode::InfiniteEdgePresent: return "InfiniteEdgePresent";
    case ErrorCode::InfiniteEdgeOnPath: return "InfiniteEdgeOnPath";
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::EntryNotAFacet: return "EntryNotAFacet";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::StuckTrajectory: return "StuckTrajectory";
    case ErrorCode::HitNonGuardFacet: return "HitNonGuardFacet";
    case ErrorCode::EmptySwitchAtGuard: return "EmptySwitchAtGuard";
    case ErrorCode::StartNotOnFacet: return "StartNotOnFacet";
  }
  return "Unknown";
}

Rat::Rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  q_ /= o.q_;
  return *this;
}

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') return false;
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return out.set_str(digits, 10) == 0;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  BigInt num, den(1);
  const auto slash = text.find('/');
  const bool ok = slash == std::string_view::npos
                      ? parse_integer(text, num)
                      : parse_integer(text.substr(0, slash), num) &&
                            parse_integer(text.substr(slash + 1), den);
  if (!ok) throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
  return Rat(num, den);
}

std::string Rat::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

Rat pow(const Rat& base, std::uint64_t exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exponent);
  return Rat(num, den);
}

double log_double(const BigInt& positive) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, positive.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double log_double(const Rat& positive) {
  return log_double(positive.numerator()) - log_double(positive.denominator());
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace ppcdstab
