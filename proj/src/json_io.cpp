#include "henon/json_io.hpp"

#include <fstream>

namespace henon {

namespace {

Rat scalar_rat(const json& j) {
  if (j.is_string()) return Rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) return rat_of(j.get<double>());
  throw std::invalid_argument("expected a number or decimal string");
}

}  // namespace

Rat rat_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw std::invalid_argument("rational must be [num, den]");
    const Rat den = scalar_rat(j[1]);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return scalar_rat(j[0]) / den;
  }
  return scalar_rat(j);
}

json rat_to_json(const Rat& q) {
  return json::array({boost::multiprecision::numerator(q).str(),
                      boost::multiprecision::denominator(q).str()});
}

LaurentPoly laurent_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("term list must be an array");
  LaurentPoly f;
  for (const auto& term : j) {
    if (!term.is_array() || (term.size() != 3 && term.size() != 5))
      throw std::invalid_argument("term must be [exp,re,im] or [exp,re_n,re_d,im_n,im_d]");
    const long e = term[0].get<long>();
    CRat c;
    if (term.size() == 3) {
      c = CRat(scalar_rat(term[1]), scalar_rat(term[2]));
    } else {
      const Rat rd = scalar_rat(term[2]), id = scalar_rat(term[4]);
      if (rd == 0 || id == 0) throw std::invalid_argument("zero denominator in term");
      c = CRat(scalar_rat(term[1]) / rd, scalar_rat(term[3]) / id);
    }
    auto cur = f.coeff(e);
    f.set(e, cur + c);
  }
  return f;
}

json laurent_to_json(const LaurentPoly& f) {
  json out = json::array();
  for (const auto& [e, c] : f.coeffs())
    out.push_back(json::array({e, boost::multiprecision::numerator(c.re).str(),
                               boost::multiprecision::denominator(c.re).str(),
                               boost::multiprecision::numerator(c.im).str(),
                               boost::multiprecision::denominator(c.im).str()}));
  return out;
}

FamilySpec family_from_json(const json& j) {
  FamilySpec spec;
  const int d = j.at("d").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("coeffs must list a1..ad");
  std::vector<LaurentPoly> ai;
  ai.reserve(coeffs.size());
  for (const auto& c : coeffs) ai.push_back(laurent_from_json(c));
  const LaurentPoly a = laurent_from_json(j.at("a"));
  const double c = j.value("c", 5.0);
  spec.family = HenonFamily(d, std::move(ai), a, c);
  spec.r = j.value("r", 0.5);
  if (!(spec.r > 0.0 && spec.r < 1.0)) throw InvalidRadius("spec r must lie in (0,1)");
  return spec;
}

FamilySpec family_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  json j;
  in >> j;
  return family_from_json(j);
}

json val_point_to_json(const ValPoint& w) {
  json out;
  out["u"] = w.u ? rat_to_json(*w.u) : json();
  out["v"] = w.v ? rat_to_json(*w.v) : json();
  return out;
}

json na_green_to_json(const NAGreenValue& g) {
  json out;
  out["q"] = rat_to_json(g.q);
  out["status"] =
      g.status == NAGreenValue::Status::Exact ? "Exact" : "BoundedToBudget";
  return out;
}

}  // namespace henon
