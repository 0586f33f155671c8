#pragma once

// Fixed profiles for the adversarial suite. The "branch:" profiles are the
// smallest ones tools/hunt_profiles.cpp found that drive each named protocol
// branch; regenerate them with that tool if the protocol changes.

#include <string>
#include <utility>
#include <vector>

#include "envy4/harness.hpp"

namespace envy4 {

namespace detail {

inline const char* four_agent_branch_profiles() {
  return
      R"({"core.case.1|2|3|123":{"1":{"breakpoints":["0/1","1/48","1/1"],"densities":["1/1","2/1"]},"2":{)"
      R"("breakpoints":["0/1","5/16","1/1"],"densities":["3/4","7/4"]},"3":{"breakpoints":["0/1","1/1"],")"
      R"(densities":["2/1"]},"4":{"breakpoints":["0/1","3/4","1/1"],"densities":["2/1","1/1"]}},"core.cas)"
      R"(e.ijk|ijk":{"1":{"breakpoints":["0/1","1/1"],"densities":["1/1"]},"2":{"breakpoints":["0/1","1/1)"
      R"("],"densities":["3/4"]},"3":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"4":{"breakpoints")"
      R"(:["0/1","3/8","1/1"],"densities":["3/4","7/4"]}},"core.case.ij|ij|k|k":{"1":{"breakpoints":["0/1)"
      R"(","1/1"],"densities":["3/2"]},"2":{"breakpoints":["0/1","1/1"],"densities":["1/1"]},"3":{"breakp)"
      R"(oints":["0/1","29/48","1/1"],"densities":["0/1","3/2"]},"4":{"breakpoints":["0/1","23/48","1/1"])"
      R"(,"densities":["1/2","2/1"]}},"core.case.ij|jk|ik":{"1":{"breakpoints":["0/1","1/1"],"densities":)"
      R"(["3/2"]},"2":{"breakpoints":["0/1","37/48","1/1"],"densities":["2/1","0/1"]},"3":{"breakpoints":)"
      R"(["0/1","1/48","1/1"],"densities":["0/1","2/1"]},"4":{"breakpoints":["0/1","43/48","1/1"],"densit)"
      R"(ies":["3/2","0/1"]}},"core.case.i|ijk|jk":{"1":{"breakpoints":["0/1","1/1"],"densities":["5/4"]})"
      R"(,"2":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints":["0/1","9/16","1/1"],")"
      R"(densities":["0/1","2/1"]},"4":{"breakpoints":["0/1","2/3","1/1"],"densities":["1/1","0/1"]}},"co)"
      R"(re.case.jk|ik|i|j":{"1":{"breakpoints":["0/1","41/48","1/1"],"densities":["3/4","7/4"]},"2":{"br)"
      R"(eakpoints":["0/1","1/1"],"densities":["7/4"]},"3":{"breakpoints":["0/1","9/16","1/1"],"densities)"
      R"(":["0/1","3/2"]},"4":{"breakpoints":["0/1","1/1"],"densities":["1/1"]}},"core.case.matching":{"1)"
      R"(":{"breakpoints":["0/1","1/1"],"densities":["1/1"]},"2":{"breakpoints":["0/1","1/1"],"densities")"
      R"(:["2/1"]},"3":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"4":{"breakpoints":["0/1","1/1"])"
      R"(,"densities":["2/1"]}},"core.choice":{"1":{"breakpoints":["0/1","13/24","1/1"],"densities":["2/1)"
      R"(","7/4"]},"2":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints":["0/1","1/1"])"
      R"(,"densities":["2/1"]},"4":{"breakpoints":["0/1","29/48","1/1"],"densities":["1/1","2/1"]}},"core)"
      R"(.retrim":{"1":{"breakpoints":["0/1","1/1"],"densities":["5/4"]},"2":{"breakpoints":["0/1","1/1"])"
      R"(,"densities":["2/1"]},"3":{"breakpoints":["0/1","9/16","1/1"],"densities":["0/1","2/1"]},"4":{"b)"
      R"(reakpoints":["0/1","2/3","1/1"],"densities":["1/1","0/1"]}},"permutation.1a":{"1":{"breakpoints")"
      R"(:["0/1","1/1"],"densities":["1/4"]},"2":{"breakpoints":["0/1","1/24","1/1"],"densities":["1/4",")"
      R"(0/1"]},"3":{"breakpoints":["0/1","1/1"],"densities":["3/4"]},"4":{"breakpoints":["0/1","1/8","11)"
      R"(/24","1/1"],"densities":["0/1","3/2","0/1"]}},"permutation.1b":{"1":{"breakpoints":["0/1","1/1"])"
      R"(,"densities":["8/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["6/1"]},"3":{"breakpoints":[)"
      R"("0/1","1/1"],"densities":["4/1"]},"4":{"breakpoints":["0/1","85/96","29/32","1/1"],"densities":[)"
      R"("0/1","4/1","0/1"]}},"permutation.2a":{"1":{"breakpoints":["0/1","1/3","1/1"],"densities":["2/1")"
      R"(,"0/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints":["0/1","1/1"],)"
      R"("densities":["1/1"]},"4":{"breakpoints":["0/1","7/48","1/1"],"densities":["2/1","0/1"]}},"permut)"
      R"(ation.2b":{"1":{"breakpoints":["0/1","1/1"],"densities":["5/4"]},"2":{"breakpoints":["0/1","1/1")"
      R"(],"densities":["2/1"]},"3":{"breakpoints":["0/1","9/16","1/1"],"densities":["0/1","2/1"]},"4":{")"
      R"(breakpoints":["0/1","2/3","1/1"],"densities":["1/1","0/1"]}},"permutation.2c":{"1":{"breakpoints)"
      R"(":["0/1","1/1"],"densities":["2/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["7/4"]},"3":{)"
      R"("breakpoints":["0/1","1/1"],"densities":["2/1"]},"4":{"breakpoints":["0/1","31/48","1/1"],"densi)"
      R"(ties":["7/4","0/1"]}},"permutation.other":{"1":{"breakpoints":["0/1","5/48","1/1"],"densities":[)"
      R"("7/4","1/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["3/2"]},"3":{"breakpoints":["0/1","1)"
      R"(/1"],"densities":["2/1"]},"4":{"breakpoints":["0/1","23/48","1/1"],"densities":["1/1","0/1"]}},")"
      R"(permutation.row.compromise":{"1":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"2":{"breakpo)"
      R"(ints":["0/1","1/1"],"densities":["7/4"]},"3":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},")"
      R"(4":{"breakpoints":["0/1","31/48","1/1"],"densities":["7/4","0/1"]}},"permutation.row.fallback":{)"
      R"("1":{"breakpoints":["0/1","3/8","1/1"],"densities":["3/4","5/4"]},"2":{"breakpoints":["0/1","2/3)"
      R"(","1/1"],"densities":["0/1","1/2"]},"3":{"breakpoints":["0/1","1/1"],"densities":["1/1"]},"4":{")"
      R"(breakpoints":["0/1","7/16","1/1"],"densities":["5/4","0/1"]}},"phase.run":{"1":{"breakpoints":[")"
      R"(0/1","1/1"],"densities":["1/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"3":{"bre)"
      R"(akpoints":["0/1","1/1"],"densities":["2/1"]},"4":{"breakpoints":["0/1","1/1"],"densities":["2/1")"
      R"(]}},"phase.skipped":{"1":{"breakpoints":["0/1","1/1"],"densities":["5/4"]},"2":{"breakpoints":[")"
      R"(0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints":["0/1","9/16","1/1"],"densities":["0/1","2/1)"
      R"("]},"4":{"breakpoints":["0/1","2/3","1/1"],"densities":["1/1","0/1"]}},"post.divide_and_choose":)"
      R"({"1":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"2":{"breakpoints":["0/1","3/16","1/1"],")"
      R"(densities":["3/4","3/2"]},"3":{"breakpoints":["0/1","7/48","1/1"],"densities":["0/1","2/1"]},"4")"
      R"(:{"breakpoints":["0/1","1/6","7/12","1/1"],"densities":["1/4","1/2","1/4"]}},"post.empty":{"1":{)"
      R"("breakpoints":["0/1","1/1"],"densities":["1/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":[")"
      R"(2/1"]},"3":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"4":{"breakpoints":["0/1","1/1"],"d)"
      R"(ensities":["2/1"]}},"post.give_all":{"1":{"breakpoints":["0/1","59/96","1/1"],"densities":["0/1")"
      R"(,"6/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["3/1"]},"3":{"breakpoints":["0/1","3/16",)"
      R"("15/32","25/32","1/1"],"densities":["0/1","0/1","6/1","5/1"]},"4":{"breakpoints":["0/1","15/32",)"
      R"("25/48","73/96","79/96","1/1"],"densities":["7/1","3/1","0/1","7/1","6/1"]}},"post.quarter_and_p)"
      R"(ick":{"1":{"breakpoints":["0/1","1/32","5/96","9/32","73/96","13/16","1/1"],"densities":["8/1",")"
      R"(5/1","0/1","0/1","2/1","8/1"]},"2":{"breakpoints":["0/1","1/3","43/48","1/1"],"densities":["8/1")"
      R"(,"2/1","7/1"]},"3":{"breakpoints":["0/1","13/96","29/48","1/1"],"densities":["6/1","3/1","7/1"]})"
      R"(,"4":{"breakpoints":["0/1","1/1"],"densities":["2/1"]}}})";
}

inline const char* three_agent_branch_profiles() {
  return
      R"({"three.divide_and_choose":{"1":{"breakpoints":["0/1","1/1"],"densities":["5/4"]},"2":{"breakpoi)"
      R"(nts":["0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints":["0/1","9/16","1/1"],"densities":["0/)"
      R"(1","2/1"]}},"three.permutation":{"1":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"2":{"bre)"
      R"(akpoints":["0/1","11/16","1/1"],"densities":["3/2","1/1"]},"3":{"breakpoints":["0/1","1/6","1/1")"
      R"(],"densities":["3/4","0/1"]}},"three.round1.matching":{"1":{"breakpoints":["0/1","1/1"],"densiti)"
      R"(es":["1/1"]},"2":{"breakpoints":["0/1","1/1"],"densities":["3/4"]},"3":{"breakpoints":["0/1","1/)"
      R"(1"],"densities":["2/1"]}},"three.round1.trim":{"1":{"breakpoints":["0/1","1/1"],"densities":["5/)"
      R"(4"]},"2":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints":["0/1","9/16","1/1)"
      R"("],"densities":["0/1","2/1"]}},"three.round2.matching":{"1":{"breakpoints":["0/1","1/1"],"densit)"
      R"(ies":["1/2"]},"2":{"breakpoints":["0/1","1/1"],"densities":["7/4"]},"3":{"breakpoints":["0/1","1)"
      R"(/6","1/1"],"densities":["3/2","2/1"]}},"three.round2.other_wins":{"1":{"breakpoints":["0/1","1/1)"
      R"("],"densities":["5/4"]},"2":{"breakpoints":["0/1","1/1"],"densities":["2/1"]},"3":{"breakpoints")"
      R"(:["0/1","9/16","1/1"],"densities":["0/1","2/1"]}},"three.round2.same_wins":{"1":{"breakpoints":[)"
      R"("0/1","1/1"],"densities":["2/1"]},"2":{"breakpoints":["0/1","11/16","1/1"],"densities":["3/2","1)"
      R"(/1"]},"3":{"breakpoints":["0/1","1/6","1/1"],"densities":["3/4","0/1"]}}})";
}

/// Density `height` on [at, at+width], zero elsewhere.
inline ValuationSpec spike(Ratio at, Ratio width, Ratio height) {
  ValuationSpec v;
  const Ratio hi = at + width;
  if (at > Ratio(0)) {
    v.breakpoints.push_back(Ratio(0));
    v.densities.push_back(Ratio(0));
  }
  v.breakpoints.push_back(at);
  v.densities.push_back(height);
  v.breakpoints.push_back(hi);
  if (hi < Ratio(1)) {
    v.densities.push_back(Ratio(0));
    v.breakpoints.push_back(Ratio(1));
  }
  v.validate();
  return v;
}

/// Equal-width steps with the given densities.
inline ValuationSpec steps(std::vector<Ratio> densities) {
  ValuationSpec v;
  const long n = static_cast<long>(densities.size());
  for (long k = 0; k <= n; ++k) v.breakpoints.push_back(Ratio(k, n));
  v.densities = std::move(densities);
  v.validate();
  return v;
}

}  // namespace detail

inline std::vector<std::pair<std::string, Profile>> adversarial_profiles(ProtocolKind kind) {
  const int n = kind == ProtocolKind::FourAgent ? 4 : 3;
  std::vector<std::pair<std::string, Profile>> out;
  auto each = [&](auto make) {
    Profile p;
    for (AgentId a = 1; a <= n; ++a) p[a] = make(a);
    return p;
  };
  out.push_back({"identical-uniform", each([](AgentId) { return ValuationSpec::uniform(); })});
  out.push_back({"identical-steps", each([](AgentId) {
                   return detail::steps({Ratio(1), Ratio(3), Ratio(0), Ratio(2)});
                 })});
  out.push_back({"shared-spike", each([](AgentId) {
                   return detail::spike(Ratio(1, 2), Ratio(1, 1000), Ratio(1000));
                 })});
  out.push_back({"separate-spikes", each([&](AgentId a) {
                   return detail::spike(Ratio(a, n + 1), Ratio(1, 997), Ratio(997));
                 })});
  out.push_back({"uniform-vs-spikes", each([](AgentId a) {
                   return a == 1 ? ValuationSpec::uniform()
                                 : detail::spike(Ratio(1, 3), Ratio(1, 500), Ratio(500));
                 })});
  out.push_back({"disjoint-halves", each([](AgentId a) {
                   return a % 2 ? detail::steps({Ratio(0), Ratio(1)})
                                : detail::steps({Ratio(1), Ratio(0)});
                 })});
  out.push_back({"reversed-ramps", each([](AgentId a) {
                   std::vector<Ratio> d;
                   for (int k = 1; k <= 8; ++k) d.push_back(Ratio(a % 2 ? k : 9 - k));
                   return detail::steps(d);
                 })});

  json branch = json::parse(kind == ProtocolKind::FourAgent ? detail::four_agent_branch_profiles()
                                                            : detail::three_agent_branch_profiles());
  for (const auto& [name, prof] : branch.items()) {
    out.push_back({"branch:" + name, profile_from_json(prof)});
  }
  return out;
}

}  // namespace envy4
