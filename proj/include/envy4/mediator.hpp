#pragma once

/**
 * @file mediator.hpp
 * @brief Sessions in which external agents answer queries one at a time.
 *
 * A session stores only its roster and the ordered log of external answers.
 * Its state is always recomputed by running the protocol from the start,
 * feeding logged answers to the external agents until one of them has none
 * left; that query is the pending one. The same fold restores sessions after
 * a restart, and since the protocol is deterministic an external agent that
 * answers like a ValuationSpec yields exactly the simulated transcript.
 */

#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "envy4/protocols/overall.hpp"
#include "envy4/protocols/three_agent.hpp"
#include "envy4/verify.hpp"

namespace envy4 {

struct RosterEntry {
  AgentId id = 0;
  bool external = false;
  std::optional<ValuationSpec> spec;  // simulated agents only
  std::string token;                  // external agents only
};

struct LoggedAnswer {
  AgentId agent = 0;
  Ratio answer;
};

/// Everything a reader needs, computed from the roster and the answer log.
struct SessionView {
  enum class Status { Pending, Complete, Failed };
  Status status = Status::Pending;
  std::optional<Query> pending;
  Allocation allocation;  // final, or committed so far
  Piece residue;
  json transcript;
  json counters;
  json trace;
  std::string error;
};

inline std::string to_string(SessionView::Status s) {
  switch (s) {
    case SessionView::Status::Pending: return "pending";
    case SessionView::Status::Complete: return "complete";
    case SessionView::Status::Failed: return "failed";
  }
  return "?";
}

namespace detail {

inline std::string random_hex(std::size_t bytes) {
  static thread_local std::mt19937_64 g{std::random_device{}()};
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < bytes; ++i) {
    auto b = static_cast<unsigned>(g() & 0xff);
    s += digits[b >> 4];
    s += digits[b & 15];
  }
  return s;
}

inline std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Runs the protocol for `roster` with the logged external answers and
/// reports where it stopped. Errors raised by the protocol are returned in
/// the view, not thrown.
inline SessionView replay(const std::vector<RosterEntry>& roster,
                          const std::vector<LoggedAnswer>& log) {
  Context ctx;
  std::map<AgentId, std::shared_ptr<ExternalAgent>> ext;
  for (const auto& r : roster) {
    if (r.external) {
      auto a = std::make_shared<ExternalAgent>(r.id);
      ext[r.id] = a;
      ctx.rw.add(a);
    } else {
      ctx.rw.add(std::make_shared<SimulatedAgent>(r.id, *r.spec));
    }
  }
  for (const auto& e : log) ext.at(e.agent)->push(e.answer);

  SessionView v;
  try {
    if (roster.size() == 4) {
      auto res = overall_protocol(ctx, {1, 2, 3, 4});
      v.allocation = res.allocation;
    } else {
      v.allocation = three_agent_protocol(ctx, {1, 2, 3}, Piece::whole());
    }
    v.status = SessionView::Status::Complete;
  } catch (const AwaitingAnswer& w) {
    v.pending = w.query;
    v.allocation = ctx.snapshot;
    v.residue = ctx.snapshot_residue;
  } catch (const Error& e) {
    v.status = SessionView::Status::Failed;
    v.error = e.what();
  }
  for (const auto& [id, a] : ext)
    if (a->queued() != 0 && v.status != SessionView::Status::Failed) {
      v.status = SessionView::Status::Failed;
      v.error = "answer log has unused answers for agent " + std::to_string(id);
    }
  v.transcript = ctx.rw.transcript().to_json();
  v.counters = ctx.rw.transcript().counters_json();
  v.trace = ctx.trace.to_json();
  return v;
}

class Session {
 public:
  Session(std::string id, std::vector<RosterEntry> roster)
      : id_(std::move(id)), roster_(std::move(roster)), created_(detail::utc_now()), updated_(created_) {
    view_ = std::make_shared<const SessionView>(replay(roster_, log_));
  }

  const std::string& id() const { return id_; }
  const std::vector<RosterEntry>& roster() const { return roster_; }

  /// Current state; the returned snapshot stays valid while answers arrive.
  std::shared_ptr<const SessionView> view() const {
    std::lock_guard lk(m_);
    return view_;
  }

  AgentId agent_for(const std::string& token) const {
    for (const auto& r : roster_)
      if (r.external && r.token == token) return r.id;
    fail(ErrorKind::Unauthorized, "unknown token");
  }

  /// Appends an answer from the agent holding `token`. An answer the
  /// protocol cannot accept is dropped again and reported as malformed.
  /// `committed` runs under the session lock with the new record, so
  /// persisted files follow the answer order.
  std::shared_ptr<const SessionView> submit(const std::string& token, const Ratio& answer,
                                            const std::function<void(const json&)>& committed = {}) {
    std::lock_guard lk(m_);
    AgentId who = agent_for(token);
    ensure(view_->status == SessionView::Status::Pending && view_->pending, ErrorKind::NotPending,
           "session has no pending query");
    ensure(view_->pending->agent == who, ErrorKind::NotPending,
           "pending query is for agent " + std::to_string(view_->pending->agent));
    log_.push_back({who, answer});
    SessionView next = replay(roster_, log_);
    if (next.status == SessionView::Status::Failed) {
      log_.pop_back();
      fail(ErrorKind::MalformedAnswer, next.error);
    }
    view_ = std::make_shared<const SessionView>(std::move(next));
    updated_ = detail::utc_now();
    if (committed) committed(record());
    return view_;
  }

  json to_json() const {
    std::lock_guard lk(m_);
    return record();
  }

 private:
  json record() const {
    json roster = json::array();
    for (const auto& r : roster_) {
      json e{{"id", r.id}, {"type", r.external ? "external" : "simulated"}};
      if (r.external) e["token"] = r.token;
      else e["valuation"] = *r.spec;
      roster.push_back(e);
    }
    json log = json::array();
    for (const auto& a : log_) log.push_back({{"agent", a.agent}, {"answer", a.answer}});
    return json{{"id", id_}, {"roster", roster}, {"answers", log},
                {"created", created_}, {"updated", updated_}};
  }

 public:
  static std::unique_ptr<Session> from_json(const json& j) {
    std::vector<RosterEntry> roster;
    for (const auto& e : j.at("roster")) {
      RosterEntry r{e.at("id").get<AgentId>(), e.at("type") == "external", std::nullopt, ""};
      if (r.external) r.token = e.at("token").get<std::string>();
      else r.spec = e.at("valuation").get<ValuationSpec>();
      roster.push_back(std::move(r));
    }
    auto s = std::unique_ptr<Session>(new Session(j.at("id").get<std::string>(), std::move(roster),
                                                  j.at("created").get<std::string>()));
    for (const auto& a : j.at("answers"))
      s->log_.push_back({a.at("agent").get<AgentId>(), a.at("answer").get<Ratio>()});
    s->updated_ = j.at("updated").get<std::string>();
    s->view_ = std::make_shared<const SessionView>(replay(s->roster_, s->log_));
    return s;
  }

  json state_json() const {
    auto v = view();
    json agents = json::array();
    for (const auto& r : roster_)
      agents.push_back({{"id", r.id}, {"type", r.external ? "external" : "simulated"}});
    std::string created, updated;
    {
      std::lock_guard lk(m_);
      created = created_;
      updated = updated_;
    }
    json j{{"id", id_},
           {"mode", roster_.size() == 4 ? "four_agent" : "three_agent"},
           {"status", to_string(v->status)},
           {"agents", agents},
           {"pending", v->pending ? query_to_json(*v->pending) : json(nullptr)},
           {"allocation", allocation_to_json(v->allocation)},
           {"residue", v->residue},
           {"counters", v->counters},
           {"trace", v->trace},
           {"created", created},
           {"updated", updated}};
    if (!v->error.empty()) j["error"] = v->error;
    return j;
  }

  /// What the agent holding `token` should do now.
  json pending_json(const std::string& token) const {
    AgentId who = agent_for(token);
    auto v = view();
    switch (v->status) {
      case SessionView::Status::Complete:
        return {{"status", "complete"}, {"agent", who},
                {"allocation", allocation_to_json(v->allocation)}};
      case SessionView::Status::Failed:
        return {{"status", "failed"}, {"error", v->error}};
      case SessionView::Status::Pending: break;
    }
    if (v->pending->agent != who)
      return {{"status", "waiting"}, {"agent", who}, {"waiting_for", v->pending->agent}};
    return {{"status", "your_turn"}, {"agent", who}, {"query", query_to_json(*v->pending)}};
  }

 private:
  Session(std::string id, std::vector<RosterEntry> roster, std::string created)
      : id_(std::move(id)), roster_(std::move(roster)), created_(std::move(created)) {}

  mutable std::mutex m_;
  std::string id_;
  std::vector<RosterEntry> roster_;
  std::vector<LoggedAnswer> log_;
  std::string created_, updated_;
  std::shared_ptr<const SessionView> view_;
};

/// All sessions, optionally persisted as one JSON file each under `dir`.
class SessionManager {
 public:
  explicit SessionManager(std::filesystem::path dir = {}) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    std::filesystem::create_directories(dir_);
    for (const auto& f : std::filesystem::directory_iterator(dir_)) {
      if (f.path().extension() != ".json") continue;
      std::ifstream in(f.path());
      auto s = Session::from_json(json::parse(in));
      std::string id = s->id();
      sessions_[id] = std::move(s);
    }
  }

  /// Roster spec: {"agents": [{"type": "simulated", "valuation": {...}} |
  /// {"type": "external"}, ...]} with 3 or 4 entries; agent ids are the
  /// positions 1..n. Returns the new session's id, tokens and state.
  json create(const json& spec) {
    ensure(spec.is_object() && spec.contains("agents") && spec["agents"].is_array(),
           ErrorKind::BadRoster, "roster needs an \"agents\" array");
    const auto& agents = spec["agents"];
    ensure(agents.size() == 3 || agents.size() == 4, ErrorKind::BadRoster,
           "a session needs 3 or 4 agents, got " + std::to_string(agents.size()));
    if (spec.contains("mode")) {
      std::string mode = spec["mode"].get<std::string>();
      ensure((mode == "four_agent" && agents.size() == 4) || (mode == "three_agent" && agents.size() == 3),
             ErrorKind::BadRoster, "mode " + mode + " does not match the roster size");
    }
    std::vector<RosterEntry> roster;
    json tokens = json::object();
    for (std::size_t k = 0; k < agents.size(); ++k) {
      const auto& e = agents[k];
      ensure(e.is_object() && e.contains("type"), ErrorKind::BadRoster, "agent entry needs a type");
      RosterEntry r;
      r.id = static_cast<AgentId>(k + 1);
      std::string type = e["type"].get<std::string>();
      if (type == "external") {
        r.external = true;
        r.token = detail::random_hex(16);
        tokens[std::to_string(r.id)] = r.token;
      } else if (type == "simulated") {
        ensure(e.contains("valuation"), ErrorKind::BadRoster, "simulated agent needs a valuation");
        try {
          r.spec = e["valuation"].get<ValuationSpec>();
        } catch (const Error& err) {
          fail(ErrorKind::BadRoster, std::string("agent ") + std::to_string(r.id) + ": " + err.what());
        }
      } else {
        fail(ErrorKind::BadRoster, "unknown agent type '" + type + "'");
      }
      roster.push_back(std::move(r));
    }
    auto s = std::make_unique<Session>(detail::random_hex(8), std::move(roster));
    Session& ref = *s;
    {
      std::unique_lock lk(m_);
      sessions_[s->id()] = std::move(s);
    }
    persist(ref);
    return json{{"id", ref.id()}, {"tokens", tokens}, {"state", ref.state_json()}};
  }

  Session& get(const std::string& id) const {
    std::shared_lock lk(m_);
    auto it = sessions_.find(id);
    ensure(it != sessions_.end(), ErrorKind::SessionNotFound, "no session " + id);
    return *it->second;
  }

  json pending(const std::string& id, const std::string& token) const {
    return get(id).pending_json(token);
  }

  json answer(const std::string& id, const std::string& token, const json& answer) {
    Session& s = get(id);
    Ratio a;
    try {
      a = answer.get<Ratio>();
    } catch (const Error& e) {
      fail(ErrorKind::MalformedAnswer, e.what());
    }
    s.submit(token, a, [&](const json& rec) { write(s.id(), rec); });
    return s.state_json();
  }

  json state(const std::string& id) const { return get(id).state_json(); }

  json transcript(const std::string& id) const {
    auto v = get(id).view();
    return json{{"id", id}, {"entries", v->transcript}, {"counters", v->counters}};
  }

  std::vector<std::string> ids() const {
    std::shared_lock lk(m_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
  }

 private:
  void persist(const Session& s) const { write(s.id(), s.to_json()); }

  void write(const std::string& id, const json& rec) const {
    if (dir_.empty()) return;
    auto tmp = dir_ / (id + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << rec.dump();
    }
    std::filesystem::rename(tmp, dir_ / (id + ".json"));
  }

  std::filesystem::path dir_;
  mutable std::shared_mutex m_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

}  // namespace envy4
