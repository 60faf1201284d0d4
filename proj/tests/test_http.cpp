#include <doctest.h>

#include "support/server.hpp"
#include "support/world.hpp"

using namespace f1;
using nlohmann::json;

namespace {

const json kWarsaw = {{"latitude", 52.2297}, {"longitude", 21.0122}};

struct Session {
  std::string id;
  std::string token;
};

Session signup(f1::test::Api& api, const std::string& name, bool org = false) {
  json body = {{"email", name + "@example.pl"}, {"display_name", name}};
  if (!org) body["home_location"] = kWarsaw;
  const auto created = api.post(org ? "/api/orgs" : "/api/users", body);
  REQUIRE(created.status == 201);
  const auto s = api.post("/api/sessions", {{"email", name + "@example.pl"}});
  REQUIRE(s.status == 201);
  return {created.body["user"]["id"].get<std::string>(), s.body["token"].get<std::string>()};
}

std::string expires_in(f1::test::World& w, std::chrono::hours h) { return format_timestamp(w.clock.now() + h); }

}  // namespace

TEST_CASE("status mapping") {
  CHECK(http_status(ErrorCode::InvalidRadius) == 422);
  CHECK(http_status(ErrorCode::Unauthenticated) == 401);
  CHECK(http_status(ErrorCode::Forbidden) == 403);
  CHECK(http_status(ErrorCode::RequestNotFound) == 404);
  CHECK(http_status(ErrorCode::AlreadyEngaged) == 409);
  CHECK(http_status(ErrorCode::LockedOut) == 423);
}

TEST_CASE("accounts over HTTP") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform);
  f1::test::Api api(server.port());

  CHECK(api.get("/api/health").body == json{{"status", "ok"}});
  const auto anna = signup(api, "anna");
  CHECK(api.post("/api/users", {{"email", "anna@example.pl"}, {"display_name", "A"}}).status == 409);
  CHECK(api.post("/api/users", {{"email", "nope"}, {"display_name", "A"}}).status == 422);
  CHECK(api.post("/api/users", {{"email", "x@example.pl"}}).status == 422);
  CHECK(api.post("/api/sessions", {{"email", "ghost@example.pl"}}).status == 401);

  auto raw = api.raw().Post("/api/users", "{not json", "application/json");
  REQUIRE(raw);
  CHECK(raw->status == 400);
  CHECK(json::parse(raw->body).at("code") == "BadRequest");

  const auto err = api.post("/api/requests", {{"title", "x"}});
  CHECK(err.status == 401);
  CHECK(err.body.at("code") == "Unauthenticated");
  CHECK(err.body.contains("message"));
  CHECK(api.get("/api/users/me/requests", "bad-token").status == 401);
  CHECK(api.get("/api/users/me/requests", anna.token).body == json::array());
  CHECK(api.get("/api/users/usr_nobody/profile").status == 404);
}

TEST_CASE("role and validation errors over HTTP") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform);
  f1::test::Api api(server.port());
  const auto org = signup(api, "school", true);
  const auto anna = signup(api, "anna");

  const json request = {{"title", "Zakupy"}, {"description", "Mleko"}, {"location", kWarsaw},
                        {"expires_at", expires_in(w, std::chrono::hours{5})}};
  CHECK(api.post("/api/requests", request, org.token).status == 403);
  CHECK(api.post("/api/requests", request, anna.token).status == 201);

  CHECK(api.get("/api/requests/nearby?lat=52.2297&lon=21.0122&radius_m=200000").status == 422);
  CHECK(api.get("/api/requests/nearby?lat=95&lon=21.0122").status == 422);
  CHECK(api.get("/api/requests/nearby?lat=abc&lon=21").status == 422);
  CHECK(api.get("/api/requests/nearby?lat=52.2297&lon=21.0122").body.size() == 1);

  json bad_location = request;
  bad_location["location"] = {{"latitude", 91.0}, {"longitude", 0.0}};
  CHECK(api.post("/api/requests", bad_location, anna.token).status == 422);
  json past = request;
  past["expires_at"] = format_timestamp(w.clock.now() - std::chrono::hours{1});
  CHECK(api.post("/api/requests", past, anna.token).status == 422);

  CHECK(api.post("/api/users/" + anna.id + "/verify", json::object(), anna.token).status == 403);
  CHECK(api.post("/api/users/" + org.id + "/verify", json::object(), org.token).status == 422);
  CHECK(api.post("/api/users/usr_nobody/verify", json::object(), org.token).status == 404);
}

TEST_CASE("lockout surfaces as 423") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform);
  f1::test::Api api(server.port());
  const auto anna = signup(api, "anna");
  const auto bob = signup(api, "bob");
  const auto r = api.post("/api/requests",
                          {{"title", "Zakupy"}, {"location", kWarsaw}, {"expires_at", expires_in(w, std::chrono::hours{5})}},
                          anna.token);
  const auto eng = api.post("/api/requests/" + r.body["request"]["id"].get<std::string>() + "/accept", nullptr, bob.token);
  REQUIRE(eng.status == 201);
  const auto eid = eng.body["engagement"]["id"].get<std::string>();
  CHECK(eng.body["engagement"]["requester_id"] == anna.id);
  CHECK(api.post("/api/engagements/" + eid + "/keys", nullptr, bob.token).status == 200);
  for (int i = 0; i < 5; ++i) {
    const auto v = api.post("/api/engagements/" + eid + "/verify", {{"speaker_role", "Volunteer"}, {"spoken", "xyzzy"}},
                            anna.token);
    CHECK(v.status == 200);
    CHECK(v.body["ok"] == false);
    CHECK(v.body["failed_attempts"] == i + 1);
  }
  const auto locked = api.post("/api/engagements/" + eid + "/verify", {{"speaker_role", "Volunteer"}, {"spoken", "kot"}},
                               anna.token);
  CHECK(locked.status == 423);
  CHECK(locked.body["code"] == "LockedOut");
  CHECK(api.post("/api/engagements/" + eid + "/verify", {{"speaker_role", "Cook"}, {"spoken", "kot"}}, anna.token).status ==
        422);
}

TEST_CASE("emergency and admin endpoints") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform, HttpApiOptions{"secret-admin"});
  f1::test::Api api(server.port());
  const auto org = signup(api, "school", true);
  const auto raiser = signup(api, "raiser");
  const auto helper = signup(api, "helper");
  REQUIRE(api.post("/api/users/" + helper.id + "/verify", {{"note", "wolontariusz"}}, org.token).status == 201);

  const auto first = api.post("/api/sos", json::object(), raiser.token);
  CHECK(first.status == 201);
  CHECK(first.body["alerted"] == 1);
  const auto eid = first.body["event"]["id"].get<std::string>();
  const auto again = api.post("/api/sos", json::object(), raiser.token);
  CHECK(again.status == 200);
  CHECK(again.body["event"]["id"] == eid);
  CHECK(api.post("/api/sos", json::object(), org.token).status == 422);  // no location at all

  CHECK(api.post("/api/admin/outbox/drain", nullptr, raiser.token).status == 403);
  const auto drained = api.post("/api/admin/outbox/drain?max=5", nullptr, "secret-admin");
  CHECK(drained.status == 200);
  REQUIRE(drained.body.size() == 1);
  CHECK(drained.body[0]["target_user_id"] == helper.id);
  CHECK(api.post("/api/admin/outbox/drain", nullptr, "secret-admin").body == json::array());

  CHECK(api.post("/api/sos/" + eid + "/ack", nullptr, org.token).status == 403);
  CHECK(api.post("/api/sos/" + eid + "/ack", nullptr, helper.token).body["event"]["status"] == "Acknowledged");
  CHECK(api.post("/api/sos/" + eid + "/resolve", nullptr, helper.token).status == 403);
  CHECK(api.post("/api/sos/" + eid + "/resolve", nullptr, "secret-admin").body["event"]["status"] == "Resolved");
  CHECK(api.post("/api/sos/" + eid + "/resolve", nullptr, raiser.token).status == 409);
  CHECK(api.get("/api/sos/" + eid, raiser.token).body["event"]["status"] == "Resolved");
  CHECK(api.get("/api/sos/sos_missing", raiser.token).status == 404);
}

TEST_CASE("HTTP and direct calls reach the same state") {
  f1::test::World over_http;
  f1::test::World direct;
  f1::test::LocalServer server(over_http.platform);
  f1::test::Api api(server.port());

  // Over HTTP.
  const auto org = signup(api, "school", true);
  const auto anna = signup(api, "anna");
  const auto bob = signup(api, "bob");
  REQUIRE(api.post("/api/users/" + bob.id + "/verify", nullptr, org.token).status == 201);
  const auto r = api.post("/api/requests",
                          {{"title", "Zakupy"}, {"description", "Chleb"}, {"location", kWarsaw},
                           {"expires_at", expires_in(over_http, std::chrono::hours{5})}},
                          anna.token);
  const auto rid = r.body["request"]["id"].get<std::string>();
  const auto eid = api.post("/api/requests/" + rid + "/accept", nullptr, bob.token).body["engagement"]["id"].get<std::string>();
  const auto keys = api.post("/api/engagements/" + eid + "/keys", nullptr, bob.token).body;
  CHECK(api.post("/api/engagements/" + eid + "/verify", {{"speaker_role", "Requester"}, {"spoken", keys["requester_word"]}},
                 bob.token).body["ok"] == true);
  CHECK(api.post("/api/engagements/" + eid + "/verify", {{"speaker_role", "Volunteer"}, {"spoken", keys["volunteer_word"]}},
                 anna.token).body["state"] == "Authenticated");
  CHECK(api.post("/api/engagements/" + eid + "/complete", nullptr, bob.token).status == 200);
  CHECK(api.post("/api/engagements/" + eid + "/rate", {{"grade", 5}}, anna.token).status == 201);
  CHECK(api.post("/api/engagements/" + eid + "/rate", {{"grade", 4}}, bob.token).status == 201);
  CHECK(api.post("/api/engagements/" + eid + "/rate", {{"grade", 4}}, bob.token).status == 409);
  CHECK(api.post("/api/engagements/" + eid + "/rate", {{"grade", 9}}, bob.token).status == 422);

  // Directly.
  const auto d_org = direct.platform.create_organization("school@example.pl", "school");
  const auto d_anna = direct.platform.create_user("anna@example.pl", "anna", GeoPoint::make(52.2297, 21.0122));
  const auto d_bob = direct.platform.create_user("bob@example.pl", "bob", GeoPoint::make(52.2297, 21.0122));
  direct.platform.confirm_profile(d_org.id, d_bob.id, std::nullopt);
  const auto d_r = direct.platform.post_request(d_anna.id, "Zakupy", "Chleb", GeoPoint::make(52.2297, 21.0122),
                                                direct.clock.now() + std::chrono::hours{5});
  const auto d_e = direct.platform.accept(d_bob.id, d_r.id);
  const auto d_k = direct.platform.keys(d_bob.id, d_e.id);
  direct.platform.verify(d_bob.id, d_e.id, challenge::SpeakerRole::Requester, d_k.requester_word);
  direct.platform.verify(d_anna.id, d_e.id, challenge::SpeakerRole::Volunteer, d_k.volunteer_word);
  direct.platform.complete(d_bob.id, d_e.id);
  direct.platform.rate(d_anna.id, d_e.id, trust::LikertGrade{5});
  direct.platform.rate(d_bob.id, d_e.id, trust::LikertGrade{4});

  auto a = over_http.platform.snapshot();
  auto b = direct.platform.snapshot();
  a.sessions.clear();
  b.sessions.clear();
  CHECK(a == b);

  const auto profile = api.get("/api/users/" + bob.id + "/profile").body;
  CHECK(profile["reputation_sum"] == 2);
  CHECK(profile["verified"] == true);
  CHECK(profile["badges"].size() == 1);
  CHECK(profile["grade_counts"][4] == json{{"grade", 5}, {"count", 1}, {"color", "green"}});
  CHECK(profile["grade_counts"][0]["color"] == "red");
  CHECK(profile["grade_counts"][2]["color"] == "gray");
  CHECK(api.get("/api/engagements/" + eid, anna.token).body["engagement"]["state"] == "Closed");
  CHECK(api.get("/api/requests/" + rid).body["request"]["status"] == "Closed");
}
