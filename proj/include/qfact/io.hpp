#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qfact/clifford.hpp"
#include "qfact/eichler.hpp"
#include "qfact/eichler_monoid.hpp"
#include "qfact/factorize.hpp"

namespace qfact::io {

using nlohmann::json;

json to_json(const Rational& x);
/// Accepts "n", "n/d" or a JSON integer. Throws ParseError.
Rational rational_from_json(const json& j);

/// [["a","b_raw"],["c","d"]]
json to_json(const Mat2& m);
Mat2 mat2_from_json(const json& j);
/// Either the JSON form above or four comma-separated rationals a,b_raw,c,d.
Mat2 parse_matrix(std::string_view text);

json to_json(const Form& q);
/// Six comma-separated rationals a,b,c,u,v,w.
Form parse_form(std::string_view text);

json to_json(const C0Element<Rational>& x);
json to_json(const AtomClassTag& t);
json to_json(const LengthProfile& p);
json to_json(const ResidueClassification& c);
json to_json(const Submodule& m);

json atom_table_json(const std::vector<AtomEntry>& atoms);
std::string atom_table_csv(const std::vector<AtomEntry>& atoms);

json factorizations_json(const EichlerMonoid& M, const FactorizationSet<Mat2>& s);
std::string profile_csv(const LengthProfile& p);

/// Vertices are factorizations, edges join pairs at distance <= max_distance
/// and carry the distance as label.
std::string factorization_dot(const EichlerMonoid& M, const FactorizationSet<Mat2>& s,
                              const DistanceTable& t, int max_distance);

} // namespace qfact::io
