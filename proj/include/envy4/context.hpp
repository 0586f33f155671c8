#pragma once

// Per-run protocol context: the query session plus an audit trace and the
// branch coverage counters used by the adversarial suite.

#include <map>
#include <string>
#include <vector>

#include "envy4/json_io.hpp"
#include "envy4/query.hpp"

namespace envy4 {

struct TraceEvent {
  std::string phase;
  AgentId cutter = 0;
  int core_iteration = 0;
  std::string kind;
  json payload;
};

class Trace {
 public:
  void set_phase(std::string phase, AgentId cutter, int core_iteration) {
    phase_ = std::move(phase);
    cutter_ = cutter;
    iteration_ = core_iteration;
  }
  void set_iteration(int core_iteration) { iteration_ = core_iteration; }

  void emit(std::string kind, json payload = json::object()) {
    events_.push_back({phase_, cutter_, iteration_, std::move(kind), std::move(payload)});
  }

  const std::vector<TraceEvent>& events() const { return events_; }

  json to_json() const {
    json arr = json::array();
    for (const auto& e : events_)
      arr.push_back({{"phase", e.phase},
                     {"cutter", e.cutter},
                     {"core_iteration", e.core_iteration},
                     {"event_kind", e.kind},
                     {"payload", e.payload}});
    return arr;
  }

 private:
  std::vector<TraceEvent> events_;
  std::string phase_ = "init";
  AgentId cutter_ = 0;
  int iteration_ = 0;
};

using Coverage = std::map<std::string, long>;

struct Context {
  QuerySession rw;
  Trace trace;
  Coverage coverage;

  /// Latest committed allocation, kept current so a suspended run can still
  /// report progress.
  std::map<AgentId, Piece> snapshot;
  Piece snapshot_residue;

  void hit(const std::string& branch) { ++coverage[branch]; }
};

}  // namespace envy4
