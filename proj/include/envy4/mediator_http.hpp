#pragma once

// HTTP+JSON front end for SessionManager:
//   POST /sessions                       roster -> {id, tokens, state}
//   GET  /sessions/{id}/pending?token=   what that agent should do now
//   POST /sessions/{id}/answer           {"token": ..., "answer": "p/q"}
//   GET  /sessions/{id}/state
//   GET  /sessions/{id}/transcript
// Failures come back as {"error": kind, "message": text} with a 4xx status.

#include <httplib.h>

#include "envy4/mediator.hpp"

namespace envy4 {

inline int http_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::BadRoster:
    case ErrorKind::ParseError: return 400;
    case ErrorKind::Unauthorized: return 403;
    case ErrorKind::SessionNotFound: return 404;
    case ErrorKind::NotPending: return 409;
    case ErrorKind::MalformedAnswer:
    case ErrorKind::QueryInfeasible:
    case ErrorKind::OutOfRange: return 422;
    default: return 500;
  }
}

namespace detail {

template <class F>
void respond(httplib::Response& res, F&& body) {
  try {
    res.set_content(body().dump(), "application/json");
    res.status = 200;
  } catch (const Error& e) {
    res.status = http_status(e.kind());
    res.set_content(json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump(),
                    "application/json");
  } catch (const json::exception& e) {
    res.status = 400;
    res.set_content(json{{"error", "ParseError"}, {"message", e.what()}}.dump(), "application/json");
  }
}

inline json parse_body(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  ensure(!j.is_discarded(), ErrorKind::ParseError, "request body is not JSON");
  return j;
}

}  // namespace detail

inline void install_routes(httplib::Server& srv, SessionManager& mgr) {
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  srv.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, [&] { return mgr.create(detail::parse_body(req)); });
    if (res.status == 200) res.status = 201;
  });
  srv.Get(R"(/sessions/([^/]+)/pending)", [&](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, [&] {
      ensure(req.has_param("token"), ErrorKind::Unauthorized, "token parameter missing");
      return mgr.pending(req.matches[1], req.get_param_value("token"));
    });
  });
  srv.Post(R"(/sessions/([^/]+)/answer)", [&](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, [&] {
      json body = detail::parse_body(req);
      ensure(body.is_object() && body.contains("token") && body["token"].is_string(),
             ErrorKind::Unauthorized, "token missing");
      ensure(body.contains("answer"), ErrorKind::MalformedAnswer, "answer missing");
      return mgr.answer(req.matches[1], body["token"].get<std::string>(), body["answer"]);
    });
  });
  srv.Get(R"(/sessions/([^/]+)/state)", [&](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, [&] { return mgr.state(req.matches[1]); });
  });
  srv.Get(R"(/sessions/([^/]+)/transcript)", [&](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, [&] { return mgr.transcript(req.matches[1]); });
  });
}

}  // namespace envy4
