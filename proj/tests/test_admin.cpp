#include <doctest.h>

#include <sstream>

#include "f1/admin/scenario.hpp"
#include "f1/admin/seed.hpp"
#include "f1/persistence.hpp"
#include "support/process.hpp"
#include "support/server.hpp"
#include "support/tempdir.hpp"
#include "support/world.hpp"

using namespace f1;
using namespace f1::admin;

namespace {

std::string scenario(const std::string& name) {
  return f1::test::read_text(std::string(F1_SCENARIOS_DIR) + "/" + name);
}

std::string dir_bytes(const std::filesystem::path& dir) {
  std::string all;
  for (auto c : kAllCollections) {
    const auto f = dir / (std::string(collection_name(c)) + ".jsonl");
    all += f.filename().string() + "\n" + f1::test::read_text(f.string());
  }
  return all;
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto s = ScenarioScript::parse(
      "# comment\n"
      "\n"
      "POST /api/users {\"email\":\"a@b.pl\",\"x\":\"1 -> 2\"} -> 201 id:=/user/id /user/email==a@b.pl\n"
      "GET /api/engagements/${eng} @tok -> 200\n");
  REQUIRE(s.steps.size() == 2);
  const auto& a = s.steps[0];
  CHECK(a.line_no == 3);
  CHECK(a.method == "POST");
  CHECK(a.path == "/api/users");
  CHECK(a.body == "{\"email\":\"a@b.pl\",\"x\":\"1 -> 2\"}");
  CHECK(a.expected_status == 201);
  CHECK(a.captures == std::vector<std::pair<std::string, std::string>>{{"id", "/user/id"}});
  CHECK(a.checks == std::vector<std::pair<std::string, std::string>>{{"/user/email", "a@b.pl"}});
  CHECK(s.steps[1].token_var == "tok");
  CHECK(s.steps[1].body.empty());

  auto line_of = [](const char* text) {
    try {
      ScenarioScript::parse(text);
    } catch (const ScriptError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("GET /x -> 200\nFETCH /x -> 200\n") == 2);
  CHECK(line_of("GET /x\n") == 1);
  CHECK(line_of("GET x -> 200\n") == 1);
  CHECK(line_of("GET /x -> abc\n") == 1);
  CHECK(line_of("GET /x -> 200 junk\n") == 1);
  CHECK(line_of("GET /x -> 200 v:=nope\n") == 1);
  CHECK(line_of("POST /x [1] -> 200\n") == 1);
  CHECK(line_of("GET /x -> 200\n") == 0);
}

TEST_CASE("shipped scenarios pass against an in-process server") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform);
  for (const char* name : {"happy_path.f1s", "replay_conflicts.f1s", "org_cannot_post.f1s"}) {
    std::ostringstream log;
    const auto result = run_scenario(ScenarioScript::parse(scenario(name)), server.url(), log);
    CHECK_MESSAGE(result == ScenarioExit::Passed, name, "\n", log.str());
    CHECK(log.str().find("FAIL") == std::string::npos);
  }
}

TEST_CASE("a failing expectation is reported with its line") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform);
  std::ostringstream log;
  const auto result = run_scenario(ScenarioScript::parse("GET /api/health -> 200 /status==down\n"
                                                         "GET /api/health -> 404\n"
                                                         "GET /api/health -> 200 /status==ok\n"),
                                   server.url(), log);
  CHECK(result == ScenarioExit::Failed);
  CHECK(log.str().find("FAIL line 1") != std::string::npos);
  CHECK(log.str().find("FAIL line 2") != std::string::npos);
  CHECK(log.str().find("PASS line 3") != std::string::npos);
}

TEST_CASE("an unreachable server aborts the run") {
  // Grab a free port and close it again.
  const int port = f1::test::unused_port();
  std::ostringstream log;
  const auto result = run_scenario(ScenarioScript::parse("GET /api/health -> 200\nGET /api/health -> 200\n"),
                                   "http://127.0.0.1:" + std::to_string(port), log);
  CHECK(result == ScenarioExit::Unreachable);
  CHECK(log.str().find("ABORT line 1") != std::string::npos);
  CHECK(log.str().find("PASS") == std::string::npos);
}

TEST_CASE("undefined variables fail the step") {
  f1::test::World w;
  f1::test::LocalServer server(w.platform);
  ScenarioRunner runner(server.url());
  const auto script = ScenarioScript::parse("GET /api/requests/${missing} -> 200\n");
  const auto r = runner.run(script.steps[0]);
  CHECK_FALSE(r.passed);
  CHECK_FALSE(r.transport_error);
  CHECK(r.detail.find("missing") != std::string::npos);
  CHECK(runner.variables().contains("TOMORROW"));
}

TEST_CASE("seeding is deterministic") {
  SeedOptions o;
  const auto a = generate_population(o);
  const auto b = generate_population(o);
  CHECK(a == b);
  CHECK(a.users.size() == 10);
  CHECK(a.requests.size() == 20);
  check_integrity(a);
  for (const auto& [id, r] : a.requests) {
    CHECK(geo::haversine_distance(GeoPoint::make(o.center_latitude, o.center_longitude), r.location) <=
          o.spread_m * std::sqrt(2.0) * 1.01);
  }

  f1::test::TempDir d1;
  f1::test::TempDir d2;
  {
    FileBackend s1(d1.path());
    seed_store(s1, o);
    FileBackend s2(d2.path());
    seed_store(s2, o);
  }
  CHECK(dir_bytes(d1.path()) == dir_bytes(d2.path()));

  SeedOptions other = o;
  other.seed = 43;
  CHECK_FALSE(generate_population(other) == a);
}

TEST_CASE("seeding guards") {
  f1::test::TempDir d;
  FileBackend store(d.path());
  seed_store(store, SeedOptions{});
  CHECK(f1::test::code_of([&] { seed_store(store, SeedOptions{}); }) == ErrorCode::WrongState);
  SeedOptions force;
  force.force = true;
  force.users = 3;
  force.requests = 1;
  seed_store(store, force);
  CHECK(store.load().users.size() == 3);

  SeedOptions none;
  none.users = 0;
  none.requests = 0;
  CHECK(generate_population(none).empty());
  none.requests = 5;
  CHECK(generate_population(none).empty());
}

TEST_CASE("a seeded store serves") {
  f1::test::TempDir d;
  FileBackend store(d.path());
  seed_store(store, SeedOptions{});
  ManualClock clock(SeedOptions{}.now + std::chrono::hours{1});
  Platform p(store, clock, f1::test::words150());
  CHECK(p.nearby(GeoPoint::make(52.2297, 21.0122), 10'000).size() == 20);
  const auto s = p.create_session("user1@example.pl");
  CHECK(p.authenticate(s.token).value == "usr_00000001");
}
