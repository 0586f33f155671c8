// Drives a mediator session the way a client would: agent 1 is external and
// answers each of its queries from its own valuation, the rest are simulated.

#include <iostream>

#include "envy4/mediator.hpp"

using namespace envy4;

int main() {
  const ValuationSpec mine{{Ratio(0), Ratio(1, 2), Ratio(1)}, {Ratio(2), Ratio(0)}};
  json roster{{"agents", json::array()}};
  roster["agents"].push_back({{"type", "external"}});
  for (int k = 0; k < 3; ++k)
    roster["agents"].push_back({{"type", "simulated"}, {"valuation", ValuationSpec::uniform()}});

  SessionManager mgr;
  json created = mgr.create(roster);
  const std::string id = created["id"], token = created["tokens"]["1"];
  SimulatedAgent me(1, mine);

  int answered = 0;
  for (json p = mgr.pending(id, token); p["status"] == "your_turn"; p = mgr.pending(id, token)) {
    const json& q = p["query"];
    Query query{0, 1, query_kind_from_string(q["kind"]), q["piece"].get<Piece>(),
                q.contains("target") ? std::optional<Ratio>(q["target"].get<Ratio>()) : std::nullopt};
    mgr.answer(id, token, me.answer(query));
    ++answered;
  }
  json state = mgr.state(id);
  std::cout << "answered " << answered << " queries; status " << state["status"] << "\n";
  std::cout << state["allocation"].dump(2) << "\n";
}
