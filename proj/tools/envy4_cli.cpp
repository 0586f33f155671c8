// Command-line entry point: trial campaigns, single-profile traces,
// allocation certification and the mediator service.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "envy4/harness.hpp"
#include "envy4/mediator_http.hpp"

using namespace envy4;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  ensure(in.good(), ErrorKind::ParseError, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  ensure(!j.is_discarded(), ErrorKind::ParseError, path + " is not valid JSON");
  return j;
}

// Accepts either a bare {"1": spec, ...} object or {"profile": {...}}.
Profile read_profile(const std::string& path) {
  json j = read_json_file(path);
  return profile_from_json(j.contains("profile") ? j["profile"] : j);
}

void write_output(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  ensure(out.good(), ErrorKind::ParseError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

ProtocolKind kind_for(int agents) {
  return agents == 3 ? ProtocolKind::ThreeAgent : ProtocolKind::FourAgent;
}

bool complete(const Allocation& alloc) {
  Piece all;
  Ratio len;
  for (const auto& [_, p] : alloc) all = all.unite(p), len += p.length();
  return all == Piece::whole() && len == Ratio(1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact envy-free cake cutting for three and four agents"};
  app.require_subcommand(1);

  int agents = 4;
  std::string report, profile_path;

  TrialConfig cfg;
  auto* run = app.add_subcommand("run", "run a seeded trial campaign and certify every result");
  run->add_option("--trials", cfg.trials, "number of random profiles")->check(CLI::PositiveNumber);
  run->add_option("--seed", cfg.seed, "campaign seed");
  run->add_option("--agents", agents, "3 or 4")->check(CLI::IsMember({3, 4}));
  run->add_option("--max-segments", cfg.max_segments, "pieces per random valuation")
      ->check(CLI::PositiveNumber);
  run->add_option("--contested-every", cfg.contested_every,
                  "every n-th profile shares hot cells among agents (0 = never)");
  run->add_option("--contested-bias", cfg.contested_bias_percent,
                  "percent chance an agent shares the hot cells")->check(CLI::Range(0, 100));
  run->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  run->add_flag("--adversarial", cfg.adversarial_suite, "also run the fixed adversarial profiles");
  run->add_option("--report", report, "write the full JSON report here");

  std::uint64_t trace_seed = 1;
  auto* trace = app.add_subcommand("trace", "run one profile and print its protocol trace");
  trace->add_option("--profile", profile_path, "profile JSON; a seeded random profile otherwise");
  trace->add_option("--seed", trace_seed, "seed for the random profile");
  trace->add_option("--agents", agents, "3 or 4")->check(CLI::IsMember({3, 4}));
  trace->add_option("--report", report, "output file (default stdout)");

  std::string alloc_path;
  auto* verify = app.add_subcommand("verify", "certify an allocation against a profile");
  verify->add_option("--profile", profile_path, "profile JSON")->required();
  verify->add_option("allocation", alloc_path, "allocation JSON")->required();
  verify->add_option("--report", report, "output file (default stdout)");

  std::string host = "127.0.0.1", data_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "start the mediator HTTP service");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--data-dir", data_dir, "persist sessions here and resume them on start");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cfg.protocol = kind_for(agents);
      TrialReport rep = run_trials(cfg, false);
      if (!report.empty()) write_output(rep.to_json(), report);
      std::cout << "trials " << rep.trials.size() << "  max_queries " << rep.max_queries
                << "  max_cuts " << rep.max_cuts << "  failures " << rep.failures.size() << "\n";
      for (const auto& f : rep.failures) std::cout << "FAIL " << f << "\n";
      return rep.failures.empty() ? 0 : 1;
    }

    if (*trace) {
      Profile p;
      if (!profile_path.empty()) {
        p = read_profile(profile_path);
        agents = static_cast<int>(p.size());
      } else {
        TrialConfig tc;
        tc.protocol = kind_for(agents);
        p = trial_profile(tc, trace_seed);
      }
      ensure(agents == 3 || agents == 4, ErrorKind::BadRoster, "profile needs 3 or 4 agents");
      auto r = run_profile(p, kind_for(agents), profile_path.empty() ? "seed" : profile_path, trace_seed);
      json out{{"profile", profile_to_json(p)},
               {"result", r.record.to_json()},
               {"allocation", allocation_to_json(r.allocation)},
               {"transcript", r.ctx.rw.transcript().to_json()},
               {"trace", r.ctx.trace.to_json()},
               {"coverage", r.ctx.coverage}};
      write_output(out, report);
      return r.record.ok() ? 0 : 1;
    }

    if (*verify) {
      Profile p = read_profile(profile_path);
      json aj = read_json_file(alloc_path);
      Allocation alloc = allocation_from_json(aj.contains("allocation") ? aj["allocation"] : aj);
      EnvyReport env = check_envy_free(alloc, p);
      bool whole = complete(alloc);
      json out = env.to_json();
      out["complete"] = whole;
      write_output(out, report);
      return env.envy_free && whole ? 0 : 1;
    }

    if (*serve) {
      SessionManager mgr(data_dir);
      httplib::Server srv;
      install_routes(srv, mgr);
      std::cerr << "listening on " << host << ":" << port << "\n";
      return srv.listen(host, port) ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
