#pragma once

// JSON forms: Ratio as "p/q", Piece as [[l,r],...], ValuationSpec as
// {"breakpoints":[...],"densities":[...]}.

#include <json.hpp>

#include "envy4/error.hpp"
#include "envy4/piece.hpp"
#include "envy4/ratio.hpp"
#include "envy4/valuation.hpp"

namespace envy4 {

using json = nlohmann::json;

inline void to_json(json& j, const Ratio& r) { j = r.str(); }

inline void from_json(const json& j, Ratio& r) {
  if (j.is_string()) {
    r = Ratio::parse(j.get<std::string>());
  } else if (j.is_number_integer()) {
    r = Ratio(j.get<long>());
  } else {
    fail(ErrorKind::ParseError, "rational must be a \"p/q\" string, got " + j.dump());
  }
}

inline void to_json(json& j, const Piece& p) {
  j = json::array();
  for (const auto& i : p.intervals()) j.push_back(json::array({i.left, i.right}));
}

inline void from_json(const json& j, Piece& p) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "piece must be an array of [left,right] pairs");
  std::vector<Interval> ivs;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) fail(ErrorKind::ParseError, "bad interval " + e.dump());
    ivs.push_back({e[0].get<Ratio>(), e[1].get<Ratio>()});
  }
  p = normalize_piece(std::move(ivs));
}

inline void to_json(json& j, const ValuationSpec& v) {
  j = json{{"breakpoints", v.breakpoints}, {"densities", v.densities}};
}

inline void from_json(const json& j, ValuationSpec& v) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("densities"))
    fail(ErrorKind::ParseError, "valuation needs breakpoints and densities");
  v.breakpoints = j.at("breakpoints").get<std::vector<Ratio>>();
  v.densities = j.at("densities").get<std::vector<Ratio>>();
  v.validate();
}

}  // namespace envy4
