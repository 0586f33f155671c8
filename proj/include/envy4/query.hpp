#pragma once

// Robertson-Webb query layer.
//
// Protocols talk to agents only through a QuerySession: Evaluate, Cut and
// Trim questions about a Piece. Every question and its answer is appended to
// the session Transcript, which keeps the query and cut counters. A Trim asks
// for the point whose right-hand part has a given value; like a Cut it marks
// the cake and is counted as a cut.
//
// Endpoints are either simulated (backed by a ValuationSpec) or external
// (answers supplied from outside; when none is available the endpoint throws
// AwaitingAnswer so the caller can suspend and later replay).

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "envy4/error.hpp"
#include "envy4/json_io.hpp"
#include "envy4/piece.hpp"
#include "envy4/ratio.hpp"
#include "envy4/valuation.hpp"

namespace envy4 {

using AgentId = int;

enum class QueryKind { Evaluate, Cut, Trim };

inline std::string to_string(QueryKind k) {
  switch (k) {
    case QueryKind::Evaluate: return "evaluate";
    case QueryKind::Cut: return "cut";
    case QueryKind::Trim: return "trim";
  }
  return "?";
}

inline QueryKind query_kind_from_string(const std::string& s) {
  if (s == "evaluate") return QueryKind::Evaluate;
  if (s == "cut") return QueryKind::Cut;
  if (s == "trim") return QueryKind::Trim;
  fail(ErrorKind::ParseError, "unknown query kind '" + s + "'");
}

struct Query {
  std::uint64_t seq = 0;
  AgentId agent = 0;
  QueryKind kind = QueryKind::Evaluate;
  Piece piece;
  std::optional<Ratio> target;  // Cut: left value; Trim: right value

  friend bool operator==(const Query&, const Query&) = default;
};

inline json query_to_json(const Query& q) {
  json j{{"seq", q.seq}, {"agent", q.agent}, {"kind", to_string(q.kind)}, {"piece", q.piece}};
  if (q.target) j["target"] = *q.target;
  return j;
}

struct TranscriptEntry {
  Query query;
  Ratio answer;             // value for Evaluate, point for Cut/Trim
  std::size_t raw_ops = 0;  // interval-level sub-operations, not counted
};

class Transcript {
 public:
  void record(TranscriptEntry e) {
    ++queries_;
    if (e.query.kind != QueryKind::Evaluate) ++cuts_;
    entries_.push_back(std::move(e));
  }

  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  std::uint64_t query_count() const { return queries_; }
  std::uint64_t cut_count() const { return cuts_; }

  json counters_json() const { return json{{"queries", queries_}, {"cuts", cuts_}}; }

  json to_json() const {
    json arr = json::array();
    for (const auto& e : entries_) {
      json j = query_to_json(e.query);
      j["answer"] = e.answer;
      j["raw_ops"] = e.raw_ops;
      arr.push_back(std::move(j));
    }
    return arr;
  }

 private:
  std::vector<TranscriptEntry> entries_;
  std::uint64_t queries_ = 0;
  std::uint64_t cuts_ = 0;
};

/// Thrown by an external endpoint that has no answer yet for the query.
struct AwaitingAnswer {
  Query query;
};

class AgentEndpoint {
 public:
  explicit AgentEndpoint(AgentId id) : id_(id) {}
  virtual ~AgentEndpoint() = default;

  AgentId id() const { return id_; }
  virtual bool simulated() const = 0;
  virtual Ratio answer(const Query& q) = 0;

 private:
  AgentId id_;
};

class SimulatedAgent final : public AgentEndpoint {
 public:
  SimulatedAgent(AgentId id, ValuationSpec spec) : AgentEndpoint(id), spec_(std::move(spec)) {
    spec_.validate();
  }

  bool simulated() const override { return true; }
  const ValuationSpec& spec() const { return spec_; }

  Ratio answer(const Query& q) override {
    switch (q.kind) {
      case QueryKind::Evaluate: return eval_piece(spec_, q.piece);
      case QueryKind::Cut: return cut_within(spec_, q.piece, *q.target).point;
      case QueryKind::Trim: return trim_within(spec_, q.piece, *q.target).point;
    }
    fail(ErrorKind::InternalInvariantViolation, "unknown query kind");
  }

 private:
  ValuationSpec spec_;
};

/// Answers come from a queue filled by the caller (a human via the mediator,
/// or a replay log). An empty queue suspends the protocol.
class ExternalAgent final : public AgentEndpoint {
 public:
  using AgentEndpoint::AgentEndpoint;

  bool simulated() const override { return false; }
  void push(Ratio a) { queue_.push_back(std::move(a)); }
  std::size_t queued() const { return queue_.size(); }

  Ratio answer(const Query& q) override {
    if (queue_.empty()) throw AwaitingAnswer{q};
    Ratio a = std::move(queue_.front());
    queue_.pop_front();
    return a;
  }

 private:
  std::deque<Ratio> queue_;
};

/// One protocol run's connection to its agents. Queries are strictly
/// sequential; answers from external agents are checked for geometric
/// validity and for monotone consistency with the agent's earlier answers
/// about the same piece.
class QuerySession {
 public:
  void add(std::shared_ptr<AgentEndpoint> agent) {
    AgentId id = agent->id();
    endpoints_[id] = std::move(agent);
  }

  bool has(AgentId a) const { return endpoints_.count(a) != 0; }
  AgentEndpoint& endpoint(AgentId a) const {
    auto it = endpoints_.find(a);
    ensure(it != endpoints_.end(), ErrorKind::BadRoster, "no agent " + std::to_string(a));
    return *it->second;
  }

  void close() { closed_ = true; }
  bool closed() const { return closed_; }

  const Transcript& transcript() const { return transcript_; }

  Ratio ask_eval(AgentId a, const Piece& piece) {
    return ask(a, QueryKind::Evaluate, piece, std::nullopt);
  }

  Ratio ask_cut(AgentId a, const Piece& piece, const Ratio& left_value) {
    ensure(left_value.sign() >= 0, ErrorKind::QueryInfeasible, "negative cut target");
    return ask(a, QueryKind::Cut, piece, left_value);
  }

  Ratio ask_trim(AgentId a, const Piece& piece, const Ratio& right_value) {
    ensure(right_value.sign() >= 0, ErrorKind::QueryInfeasible, "negative trim target");
    return ask(a, QueryKind::Trim, piece, right_value);
  }

 private:
  struct CutMemo {
    Ratio left_value;
    Ratio point;
  };
  struct PieceMemo {
    std::optional<Ratio> value;
    std::vector<CutMemo> cuts;
  };

  Ratio ask(AgentId a, QueryKind kind, const Piece& piece, std::optional<Ratio> target) {
    ensure(!closed_, ErrorKind::SessionClosed, "session is closed");
    auto& ep = endpoint(a);
    Query q{next_seq_, a, kind, piece, std::move(target)};
    PieceMemo& memo = memo_[{a, key(piece)}];
    if (!ep.simulated() && kind == QueryKind::Cut && memo.value && *q.target > *memo.value)
      fail(ErrorKind::QueryInfeasible, "cut target exceeds the agent's reported value");
    Ratio ans = ep.answer(q);
    if (!ep.simulated()) validate(q, ans, memo);
    remember(q, ans, memo);
    ++next_seq_;
    transcript_.record({std::move(q), ans, piece.intervals().size()});
    return ans;
  }

  static void validate(const Query& q, const Ratio& ans, const PieceMemo& memo) {
    if (q.kind == QueryKind::Evaluate) {
      ensure(ans.sign() >= 0, ErrorKind::MalformedAnswer, "negative value " + ans.str());
      ensure(!memo.value || *memo.value == ans, ErrorKind::MalformedAnswer,
             "value differs from the agent's earlier answer for the same piece");
      return;
    }
    if (q.piece.empty()) {
      ensure(ans.is_zero(), ErrorKind::MalformedAnswer, "the only point of an empty piece is 0");
      return;
    }
    ensure(q.piece.touches(ans), ErrorKind::MalformedAnswer,
           "point " + ans.str() + " lies outside the queried piece");
    if (q.kind == QueryKind::Trim && memo.value) {
      ensure(*q.target <= *memo.value, ErrorKind::QueryInfeasible,
             "trim target exceeds the agent's reported value");
      if (*q.target == *memo.value)
        ensure(ans == q.piece.left_edge(), ErrorKind::MalformedAnswer,
               "a trim to the full value must sit on the left edge");
    }
    auto left_value = cut_left_value(q, memo);
    if (!left_value) return;
    // Answers are leftmost points, so the left value pins down the endpoints.
    if (left_value->is_zero())
      ensure(ans == q.piece.left_edge(), ErrorKind::MalformedAnswer,
             "a cut worth nothing on the left must sit on the left edge");
    else
      ensure(ans != q.piece.left_edge(), ErrorKind::MalformedAnswer,
             "nothing lies left of the left edge, so its value cannot be " + left_value->str());
    if (memo.value && *left_value < *memo.value)
      ensure(ans != q.piece.right_edge(), ErrorKind::MalformedAnswer,
             "a cut on the right edge leaves the whole value on the left");
    for (const auto& c : memo.cuts) {
      bool ordered = (c.left_value < *left_value && c.point < ans) ||
                     (*left_value < c.left_value && ans < c.point) ||
                     (c.left_value == *left_value && ans == c.point);
      ensure(ordered, ErrorKind::MalformedAnswer,
             "cut points are not strictly monotone in value for this piece");
    }
  }

  static std::optional<Ratio> cut_left_value(const Query& q, const PieceMemo& memo) {
    if (q.kind == QueryKind::Cut) return q.target;
    if (q.kind == QueryKind::Trim && memo.value) return *memo.value - *q.target;
    return std::nullopt;
  }

  static void remember(const Query& q, const Ratio& ans, PieceMemo& memo) {
    if (q.kind == QueryKind::Evaluate) {
      memo.value = ans;
      return;
    }
    if (auto lv = cut_left_value(q, memo)) memo.cuts.push_back({*lv, ans});
  }

  static std::string key(const Piece& p) {
    std::string k;
    for (const auto& i : p.intervals()) k += i.left.str() + ":" + i.right.str() + ";";
    return k;
  }

  std::map<AgentId, std::shared_ptr<AgentEndpoint>> endpoints_;
  std::map<std::pair<AgentId, std::string>, PieceMemo> memo_;
  Transcript transcript_;
  std::uint64_t next_seq_ = 1;
  bool closed_ = false;
};

}  // namespace envy4
