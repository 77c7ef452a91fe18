#pragma once

#include <string>

#include "json.hpp"

#include "henon/family.hpp"
#include "henon/na_dynamics.hpp"

namespace henon {

using json = nlohmann::json;

// Term lists: [[exp, re, im], ...] with doubles (read exactly: doubles are
// dyadic rationals), or [[exp, re_num, re_den, im_num, im_den], ...] for
// exact rational coefficients. Entries may be numbers or decimal strings.
LaurentPoly laurent_from_json(const json& j);
json laurent_to_json(const LaurentPoly& f);

json rat_to_json(const Rat& q);  // [num, den] as decimal strings
Rat rat_from_json(const json& j);

struct FamilySpec {
  HenonFamily family;
  double r = 0.5;
};

// {"d": 2, "coeffs": [a1_terms, ..., ad_terms], "a": terms,
//  "c": 5.0 (optional), "r": 0.5 (optional)}
FamilySpec family_from_json(const json& j);
FamilySpec family_from_file(const std::string& path);

json val_point_to_json(const ValPoint& w);  // null encodes an infinite order
json na_green_to_json(const NAGreenValue& g);

}  // namespace henon
