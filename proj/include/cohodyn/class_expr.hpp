#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "cohodyn/cohomology.hpp"

namespace cohodyn {

// Class expressions are signed rational combinations of generator names,
// e.g. "3H-2E0-2E1", "H2 - L2 - L3", "1/2*L0 + 1/2 L1". A coefficient may be
// glued to the name or separated by '*'. "H^2" is accepted for "H2".

namespace detail {

inline bool is_number_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.';
}

inline std::size_t resolve_generator(const CohomologyModel& m, int p, std::string name,
                                     std::string_view expr) {
  if (auto i = m.index_of(p, name)) return *i;
  std::string stripped;
  for (char c : name)
    if (c != '^') stripped.push_back(c);
  if (auto i = m.index_of(p, stripped)) return *i;
  throw LookupError("unknown generator '" + name + "' in degree " + std::to_string(p) + " of " +
                    m.name + " (expression '" + std::string(expr) + "')");
}

}  // namespace detail

inline CohomologyClass parse_class(const ModelPtr& model, int p, std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto out = CohomologyClass::zero(model, p);
  if (s.empty()) throw ParseError("empty class expression");
  if (s == "0") return out;

  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    bool saw_sign = false;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      saw_sign = true;
      ++i;
    }
    if (i == s.size()) throw ParseError("dangling sign in class expression '" + s + "'");
    if (!saw_sign && i != 0) throw ParseError("missing operator in '" + s + "'");
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    i = j;

    Rational coeff = 1;
    std::string name;
    if (auto star = term.find('*'); star != std::string::npos) {
      coeff = parse_rational(term.substr(0, star));
      name = term.substr(star + 1);
    } else if (model->index_of(p, term)) {
      name = term;
    } else {
      std::size_t k = 0;
      while (k < term.size() && detail::is_number_char(term[k])) ++k;
      if (k == 0) {
        name = term;
      } else {
        coeff = parse_rational(term.substr(0, k));
        name = term.substr(k);
        if (name.empty()) {
          if (p != 0) throw ParseError("bare number '" + term + "' in degree " + std::to_string(p));
          name = model->bases[0][0];
        }
      }
    }
    if (name.empty()) throw ParseError("missing generator in term '" + term + "'");
    out.coeffs[detail::resolve_generator(*model, p, name, s)] += Rational(sign) * coeff;
  }
  return out;
}

/// Canonical expression in basis order; unit coefficients are omitted.
inline std::string format_class(const CohomologyClass& c) {
  std::string out;
  const auto& basis = c.manifold->bases[static_cast<std::size_t>(c.p)];
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    const Rational& x = c.coeffs[i];
    if (x == 0) continue;
    Rational mag = abs(x);
    if (x < 0) out += "-";
    else if (!out.empty()) out += "+";
    const std::string& name = basis[i];
    if (mag != 1) {
      out += to_string(mag);
      bool glue = denominator(mag) == 1 && !name.empty() &&
                  std::isalpha(static_cast<unsigned char>(name[0]));
      if (!glue) out += "*";
    }
    out += name;
  }
  return out.empty() ? "0" : out;
}

}  // namespace cohodyn
