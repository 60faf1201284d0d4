#include "f1/http_api.hpp"

#include <httplib.h>

#include <charconv>

#include "f1/json_codec.hpp"

namespace f1 {

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidEmail:
    case ErrorCode::InvalidField:
    case ErrorCode::InvalidGeoPoint:
    case ErrorCode::InvalidRadius:
    case ErrorCode::InvalidGrade:
    case ErrorCode::NoLocation:
    case ErrorCode::TargetIsOrganization:
    case ErrorCode::TooFewWords:
    case ErrorCode::MalformedWord:
      return 422;
    case ErrorCode::Unauthenticated:
      return 401;
    case ErrorCode::Forbidden:
    case ErrorCode::NotOwner:
    case ErrorCode::NotAParty:
    case ErrorCode::NotAnOrganization:
    case ErrorCode::NotAuthorized:
    case ErrorCode::NotATarget:
      return 403;
    case ErrorCode::UserNotFound:
    case ErrorCode::TargetNotFound:
    case ErrorCode::RequestNotFound:
    case ErrorCode::EngagementNotFound:
    case ErrorCode::EventNotFound:
      return 404;
    case ErrorCode::DuplicateEmail:
    case ErrorCode::IllegalTransition:
    case ErrorCode::TerminalState:
    case ErrorCode::AlreadyTerminal:
    case ErrorCode::AlreadyEngaged:
    case ErrorCode::AlreadyIssued:
    case ErrorCode::AlreadyRated:
    case ErrorCode::AlreadyResolved:
    case ErrorCode::WrongState:
    case ErrorCode::NotCompleted:
      return 409;
    case ErrorCode::LockedOut:
      return 423;
    case ErrorCode::CorruptStore:
      return 500;
  }
  return 500;
}

namespace {

using httplib::Request;
using httplib::Response;

void send(Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(Response& res, int status, std::string_view code, const std::string& message) {
  send(res, status, json{{"code", code}, {"message", message}});
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const Request& req, Response& res) {
    try {
      fn(req, res);
    } catch (const DomainError& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const json::parse_error& e) {
      send_error(res, 400, "BadRequest", std::string("malformed JSON body: ") + e.what());
    } catch (const json::exception& e) {
      send_error(res, 422, "InvalidField", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

json body_of(const Request& req) {
  if (req.body.empty()) return json::object();
  auto j = json::parse(req.body);
  if (!j.is_object()) fail(ErrorCode::InvalidField, "request body must be a JSON object");
  return j;
}

std::optional<GeoPoint> optional_location(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  return it->get<GeoPoint>();
}

std::string bearer(const Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) return {};
  return header.substr(prefix.size());
}

double query_double(const Request& req, const char* key) {
  if (!req.has_param(key)) fail(ErrorCode::InvalidField, std::string("missing query parameter ") + key);
  const auto text = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidField, std::string("query parameter ") + key + " is not a number");
  }
}

json engagement_json(const Engagement& e, const FavorRequest& r) {
  json j = e;
  j["requester_id"] = r.requester_id;
  return j;
}

json profile_json(const Profile& p) {
  json counts = json::array();
  for (int g = 1; g <= 5; ++g) {
    counts.push_back({{"grade", g},
                      {"count", p.reputation.counts[static_cast<std::size_t>(g - 1)]},
                      {"color", trust::to_string(trust::grade_color(trust::LikertGrade{g}))}});
  }
  return json{{"user_id", p.user.id},
              {"display_name", p.user.display_name},
              {"is_organization", p.user.is_organization},
              {"verified", !p.badges.empty()},
              {"badges", p.badges},
              {"reputation_sum", p.reputation.sum},
              {"grade_counts", std::move(counts)}};
}

}  // namespace

HttpApi::HttpApi(Platform& platform, HttpApiOptions options)
    : platform_(platform), options_(std::move(options)) {}

void HttpApi::install(httplib::Server& server) {
  Platform* p = &platform_;
  const std::string admin = options_.admin_token;

  auto actor = [p](const Request& req) {
    const auto token = bearer(req);
    if (token.empty()) fail(ErrorCode::Unauthenticated, "missing bearer token");
    return p->authenticate(token);
  };
  auto is_admin = [admin](const Request& req) {
    return !admin.empty() && bearer(req) == admin;
  };

  server.Get("/api/health", guarded([](const Request&, Response& res) {
    send(res, 200, json{{"status", "ok"}});
  }));

  // -- accounts ------------------------------------------------------------

  server.Post("/api/users", guarded([p](const Request& req, Response& res) {
    const auto body = body_of(req);
    auto user = p->create_user(body.at("email").get<std::string>(),
                              body.at("display_name").get<std::string>(),
                              optional_location(body, "home_location"));
    send(res, 201, json{{"user", user}});
  }));

  server.Post("/api/orgs", guarded([p](const Request& req, Response& res) {
    const auto body = body_of(req);
    auto org = p->create_organization(body.at("email").get<std::string>(),
                                     body.at("display_name").get<std::string>());
    send(res, 201, json{{"user", org}});
  }));

  server.Post("/api/sessions", guarded([p](const Request& req, Response& res) {
    const auto body = body_of(req);
    const auto s = p->create_session(body.at("email").get<std::string>());
    send(res, 201, json{{"token", s.token}, {"user_id", s.user_id}, {"expires_at", s.expires_at}});
  }));

  server.Get("/api/users/me/requests", guarded([p, actor](const Request& req, Response& res) {
    send(res, 200, json(p->requests_of(actor(req))));
  }));

  server.Get(R"(/api/users/([^/]+)/profile)", guarded([p](const Request& req, Response& res) {
    send(res, 200, profile_json(p->profile(UserId{req.matches[1]})));
  }));

  server.Post(R"(/api/users/([^/]+)/verify)", guarded([p, actor](const Request& req, Response& res) {
    const auto org = actor(req);
    const auto body = body_of(req);
    std::optional<std::string> note;
    if (body.contains("note") && !body.at("note").is_null()) note = body.at("note").get<std::string>();
    auto badge = p->confirm_profile(org, UserId{req.matches[1]}, std::move(note));
    send(res, 201, json{{"badge", badge}});
  }));

  // -- requests ------------------------------------------------------------

  server.Post("/api/requests", guarded([p, actor](const Request& req, Response& res) {
    const auto who = actor(req);
    const auto body = body_of(req);
    const auto expires = body.at("expires_at").get<Timestamp>();
    auto r = p->post_request(who, body.at("title").get<std::string>(),
                            body.value("description", std::string{}),
                            body.at("location").get<GeoPoint>(), expires);
    send(res, 201, json{{"request", r}});
  }));

  server.Get("/api/requests/nearby", guarded([p](const Request& req, Response& res) {
    const auto center = GeoPoint::make(query_double(req, "lat"), query_double(req, "lon"));
    std::optional<double> radius;
    if (req.has_param("radius_m")) radius = query_double(req, "radius_m");
    send(res, 200, json(p->nearby(center, radius)));
  }));

  server.Get(R"(/api/requests/([^/]+))", guarded([p](const Request& req, Response& res) {
    send(res, 200, json{{"request", p->request(RequestId{req.matches[1]})}});
  }));

  server.Post(R"(/api/requests/([^/]+)/accept)", guarded([p, actor](const Request& req, Response& res) {
    const auto who = actor(req);
    const auto e = p->accept(who, RequestId{req.matches[1]});
    send(res, 201, json{{"engagement", engagement_json(e, p->request(e.request_id))}});
  }));

  server.Post(R"(/api/requests/([^/]+)/cancel)", guarded([p, actor](const Request& req, Response& res) {
    const auto who = actor(req);
    send(res, 200, json{{"request", p->cancel_request(who, RequestId{req.matches[1]})}});
  }));

  // -- engagements ---------------------------------------------------------

  server.Get(R"(/api/engagements/([^/]+))", guarded([p, actor](const Request& req, Response& res) {
    const auto e = p->engagement(actor(req), EngagementId{req.matches[1]});
    send(res, 200, json{{"engagement", engagement_json(e, p->request(e.request_id))}});
  }));

  server.Post(R"(/api/engagements/([^/]+)/keys)", guarded([p, actor](const Request& req, Response& res) {
    const auto k = p->keys(actor(req), EngagementId{req.matches[1]});
    send(res, 200, json{{"engagement_id", k.engagement_id},
                        {"volunteer_word", k.volunteer_word},
                        {"requester_word", k.requester_word},
                        {"issued_at", k.issued_at}});
  }));

  server.Post(R"(/api/engagements/([^/]+)/verify)", guarded([p, actor](const Request& req, Response& res) {
    const auto who = actor(req);
    const auto body = body_of(req);
    const auto role = challenge::parse_speaker_role(body.at("speaker_role").get<std::string>());
    if (!role) fail(ErrorCode::InvalidField, "speaker_role must be Volunteer or Requester");
    const auto out = p->verify(who, EngagementId{req.matches[1]}, *role,
                              body.at("spoken").get<std::string>());
    send(res, 200, json{{"ok", out.ok},
                        {"state", out.engagement.state},
                        {"failed_attempts", out.engagement.failed_attempts},
                        {"locked_out", out.engagement.locked_out}});
  }));

  server.Post(R"(/api/engagements/([^/]+)/complete)", guarded([p, actor](const Request& req, Response& res) {
    const auto e = p->complete(actor(req), EngagementId{req.matches[1]});
    send(res, 200, json{{"engagement", engagement_json(e, p->request(e.request_id))}});
  }));

  server.Post(R"(/api/engagements/([^/]+)/rate)", guarded([p, actor](const Request& req, Response& res) {
    const auto who = actor(req);
    const auto body = body_of(req);
    const auto record = p->rate(who, EngagementId{req.matches[1]}, body.at("grade").get<trust::LikertGrade>());
    send(res, 201, json{{"record", record}});
  }));

  server.Post(R"(/api/engagements/([^/]+)/cancel)", guarded([p, actor](const Request& req, Response& res) {
    const auto e = p->cancel_engagement(actor(req), EngagementId{req.matches[1]});
    send(res, 200, json{{"engagement", engagement_json(e, p->request(e.request_id))}});
  }));

  // -- emergencies ---------------------------------------------------------

  server.Post("/api/sos", guarded([p, actor](const Request& req, Response& res) {
    const auto who = actor(req);
    const auto body = body_of(req);
    const auto out = p->raise_sos(who, optional_location(body, "location"));
    // A press inside the dedup window returns the existing event with 200.
    send(res, out.created ? 201 : 200,
         json{{"event", out.event}, {"created", out.created}, {"alerted", out.alerted}});
  }));

  server.Get(R"(/api/sos/([^/]+))", guarded([p, actor](const Request& req, Response& res) {
    actor(req);
    send(res, 200, json{{"event", p->event(EventId{req.matches[1]})}});
  }));

  server.Post(R"(/api/sos/([^/]+)/ack)", guarded([p, actor](const Request& req, Response& res) {
    const auto e = p->acknowledge(actor(req), EventId{req.matches[1]});
    send(res, 200, json{{"event", e}});
  }));

  server.Post(R"(/api/sos/([^/]+)/resolve)", guarded([p, actor, is_admin](const Request& req, Response& res) {
    const bool admin_call = is_admin(req);
    const UserId who = admin_call ? UserId{"admin"} : actor(req);
    send(res, 200, json{{"event", p->resolve_sos(who, EventId{req.matches[1]}, admin_call)}});
  }));

  server.Post("/api/admin/outbox/drain", guarded([p, is_admin](const Request& req, Response& res) {
    if (!is_admin(req)) fail(ErrorCode::Forbidden, "admin token required");
    std::size_t max = 100;
    if (req.has_param("max")) {
      const auto text = req.get_param_value("max");
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), max);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(ErrorCode::InvalidField, "max must be a non-negative integer");
      }
    }
    send(res, 200, json(p->drain_outbox(max)));
  }));
}

}  // namespace f1
