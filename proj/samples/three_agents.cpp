// Three agents who all prefer the middle of the cake. Agent 3 cuts.

#include <iostream>
#include <memory>

#include "envy4/protocols/three_agent.hpp"

using namespace envy4;

int main() {
  Profile profile;
  const ValuationSpec middle{{Ratio(0), Ratio(1, 3), Ratio(2, 3), Ratio(1)},
                             {Ratio(1), Ratio(4), Ratio(1)}};
  profile[1] = middle;
  profile[2] = {{Ratio(0), Ratio(1, 2), Ratio(1)}, {Ratio(1), Ratio(2)}};
  profile[3] = ValuationSpec::uniform();

  Context ctx;
  for (const auto& [a, v] : profile) ctx.rw.add(std::make_shared<SimulatedAgent>(a, v));
  Allocation alloc = three_agent_protocol(ctx, {1, 2, 3}, Piece::whole());

  std::cout << allocation_to_json(alloc).dump(2) << "\n";
  std::cout << "queries " << ctx.rw.transcript().query_count() << ", envy-free "
            << std::boolalpha << check_envy_free(alloc, profile).envy_free << "\n";
}
