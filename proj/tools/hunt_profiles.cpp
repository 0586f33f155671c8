// Searches seeded profiles for the smallest one that drives each protocol
// branch, and prints them as JSON for the adversarial suite.
#include <iostream>
#include <map>

#include "envy4/harness.hpp"

using namespace envy4;

namespace {

std::size_t size_of(const Profile& p) {
  std::size_t n = 0;
  for (const auto& [_, v] : p) n += v.densities.size();
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  long budget = argc > 1 ? std::atol(argv[1]) : 20000;
  json out = json::object();
  for (auto kind : {ProtocolKind::FourAgent, ProtocolKind::ThreeAgent}) {
    std::map<std::string, std::pair<std::size_t, Profile>> best;
    TrialConfig cfg;
    cfg.protocol = kind;
    for (long s = 0; s < budget; ++s) {
      for (int variant = 0; variant < 3; ++variant) {
        cfg.max_segments = variant == 0 ? 3 : 6;
        cfg.contested_every = variant == 2 ? 1 : (variant == 1 ? 0 : 2);
        cfg.density_range = variant == 0 ? DensityRange{Ratio(0), Ratio(2)} : DensityRange{};
        Profile p = trial_profile(cfg, static_cast<std::uint64_t>(s));
        auto run = run_profile(p, kind);
        if (!run.record.ok()) {
          std::cerr << "failure at seed " << s << " variant " << variant << ": " << run.record.error
                    << "\n";
          continue;
        }
        for (const auto& [key, _] : run.ctx.coverage) {
          auto it = best.find(key);
          if (it == best.end() || size_of(p) < it->second.first) best[key] = {size_of(p), p};
        }
      }
    }
    json section = json::object();
    for (const auto& [key, entry] : best) {
      json prof = json::object();
      for (const auto& [a, v] : entry.second) prof[std::to_string(a)] = v;
      section[key] = prof;
    }
    out[kind == ProtocolKind::FourAgent ? "four" : "three"] = section;
  }
  std::cout << out.dump() << "\n";
}
