// Divides [0,1] among four agents with piecewise-constant valuations and
// prints what everybody got, what they think of the others' pieces, and how
// many queries it took.

#include <iostream>
#include <memory>

#include "envy4/protocols/overall.hpp"
#include "envy4/verify.hpp"

using namespace envy4;

int main() {
  Profile profile;
  profile[1] = ValuationSpec::uniform();
  profile[2] = {{Ratio(0), Ratio(1, 2), Ratio(1)}, {Ratio(3), Ratio(1)}};
  profile[3] = {{Ratio(0), Ratio(1, 4), Ratio(3, 4), Ratio(1)}, {Ratio(0), Ratio(2), Ratio(1)}};
  profile[4] = {{Ratio(0), Ratio(9, 10), Ratio(1)}, {Ratio(1), Ratio(10)}};

  Context ctx;
  for (const auto& [a, v] : profile) ctx.rw.add(std::make_shared<SimulatedAgent>(a, v));
  OverallResult res = overall_protocol(ctx, {1, 2, 3, 4});

  for (const auto& [a, piece] : res.allocation) {
    std::cout << "agent " << a << " gets " << json(piece).dump() << "\n  values:";
    for (const auto& [b, other] : res.allocation)
      std::cout << " " << b << ":" << eval_piece(profile[a], other);
    std::cout << "\n";
  }
  const auto& t = ctx.rw.transcript();
  std::cout << "core runs " << res.core_runs << ", queries " << t.query_count() << ", cuts "
            << t.cut_count() << ", finish " << res.finish << "\n";
  std::cout << "envy-free: " << std::boolalpha << check_envy_free(res.allocation, profile).envy_free
            << "\n";
}
