#include <doctest.h>

#include <algorithm>
#include <set>
#include <thread>

#include "f1/emergency.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/world.hpp"

using namespace f1;
using namespace f1::emergency;
using f1::test::at;
using f1::test::code_of;

namespace {

// Point `meters` due north of `p`.
GeoPoint north_of(const GeoPoint& p, double meters) {
  return GeoPoint::make(p.latitude() + meters / geo::kEarthRadiusMeters * 180.0 / 3.141592653589793, p.longitude());
}

const GeoPoint kHome = GeoPoint::make(52.2297, 21.0122);

}  // namespace

TEST_CASE("raising") {
  const auto now = at("2026-01-01T12:00:00Z");
  const auto with_home = f1::test::person("usr_a", kHome);
  const auto out = raise_sos(with_home, std::nullopt, now, {}, EventId{"sos_1"});
  CHECK(out.created);
  CHECK(out.event.location == kHome);
  CHECK(out.event.status == EventStatus::Open);

  const auto explicit_location = raise_sos(with_home, GeoPoint::make(1, 1), now, {}, EventId{"sos_1"});
  CHECK(explicit_location.event.location == GeoPoint::make(1, 1));

  CHECK(code_of([&] { raise_sos(f1::test::person("usr_b"), std::nullopt, now, {}, EventId{"sos_2"}); }) ==
        ErrorCode::NoLocation);

  std::vector<EmergencyEvent> recent{out.event};
  const auto again = raise_sos(with_home, std::nullopt, now + std::chrono::seconds{10}, recent, EventId{"sos_2"});
  CHECK_FALSE(again.created);
  CHECK(again.event.id == out.event.id);

  const auto later = raise_sos(with_home, std::nullopt, now + std::chrono::seconds{60}, recent, EventId{"sos_2"});
  CHECK(later.created);

  recent[0].status = EventStatus::Resolved;
  CHECK(raise_sos(with_home, std::nullopt, now + std::chrono::seconds{10}, recent, EventId{"sos_2"}).created);
}

TEST_CASE("dispatch examples") {
  auto near = f1::test::person("usr_near", north_of(kHome, 100));
  auto far = f1::test::person("usr_far", north_of(kHome, 10'000));
  auto unverified = f1::test::person("usr_unverified", north_of(kHome, 100));
  const auto raiser = f1::test::person("usr_raiser", kHome);
  const auto ev = raise_sos(raiser, std::nullopt, {}, {}, EventId{"sos_1"}).event;
  std::vector<UserAccount> users{near, far, unverified, raiser};
  auto verified = [](const UserId& id) { return id.value != "usr_unverified"; };
  const auto t = dispatch_targets(ev, geo::RadiusMeters(5000), users, verified);
  REQUIRE(t.size() == 1);
  CHECK(t[0].user.id == near.id);
  CHECK(t[0].distance == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("dispatch matches the brute-force oracle") {
  gen::Rng rng(31);
  for (int instance = 0; instance < 50; ++instance) {
    std::vector<UserAccount> users;
    std::set<UserId> verified;
    for (std::size_t i = 0; i < 300; ++i) {
      auto u = f1::test::person(gen::numbered("usr_", i));
      if (gen::pick(rng, 10) != 0) {
        u.home_location = GeoPoint::make(kHome.latitude() + gen::uniform(rng, -0.05, 0.05),
                                         kHome.longitude() + gen::uniform(rng, -0.08, 0.08));
      }
      u.is_organization = gen::pick(rng, 8) == 0;
      if (gen::coin(rng)) verified.insert(u.id);
      users.push_back(std::move(u));
    }
    const auto& raiser = users[gen::pick(rng, users.size())];
    const auto ev = raise_sos(raiser, kHome, {}, {}, EventId{"sos_1"}).event;
    const double radius = gen::uniform(rng, 500.0, 5000.0);
    auto is_verified = [&](const UserId& id) { return verified.contains(id); };
    const auto got = dispatch_targets(ev, geo::RadiusMeters(radius), users, is_verified);
    const auto want = oracle::dispatch(ev, radius, users, is_verified);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].user.id == want[i].id);
      CHECK(got[i].distance == want[i].distance);
      CHECK(got[i].user.id != raiser.id);
      CHECK_FALSE(got[i].user.is_organization);
      CHECK(verified.contains(got[i].user.id));
    }
  }
}

TEST_CASE("acknowledge and resolve") {
  const auto raiser = f1::test::person("usr_raiser", kHome);
  auto ev = raise_sos(raiser, std::nullopt, {}, {}, EventId{"sos_1"}).event;
  const std::vector<UserId> targets{UserId{"usr_v"}};
  ev = acknowledge(ev, UserId{"usr_v"}, targets, {});
  CHECK(ev.status == EventStatus::Acknowledged);
  ev = acknowledge(ev, UserId{"usr_v"}, targets, {});
  CHECK(ev.acknowledgments.size() == 1);
  CHECK(code_of([&] { acknowledge(ev, UserId{"usr_x"}, targets, {}); }) == ErrorCode::NotATarget);

  CHECK(code_of([&] { resolve_sos(ev, UserId{"usr_stranger"}, false, {}); }) == ErrorCode::NotAuthorized);
  const auto done = resolve_sos(ev, raiser.id, false, {});
  CHECK(done.status == EventStatus::Resolved);
  CHECK(code_of([&] { resolve_sos(done, raiser.id, false, {}); }) == ErrorCode::AlreadyResolved);
  CHECK(code_of([&] { acknowledge(done, UserId{"usr_v"}, targets, {}); }) == ErrorCode::AlreadyResolved);
  CHECK(resolve_sos(ev, UserId{"usr_admin"}, true, {}).status == EventStatus::Resolved);
}

TEST_CASE("status never regresses") {
  gen::Rng rng(32);
  const auto raiser = f1::test::person("usr_raiser", kHome);
  const std::vector<UserId> targets{UserId{"usr_a"}, UserId{"usr_b"}};
  for (int run = 0; run < 200; ++run) {
    auto ev = raise_sos(raiser, std::nullopt, {}, {}, EventId{"sos_1"}).event;
    for (int step = 0; step < 8; ++step) {
      const auto before = ev.status;
      try {
        switch (gen::pick(rng, 3)) {
          case 0: ev = acknowledge(ev, targets[gen::pick(rng, 2)], targets, {}); break;
          case 1: ev = resolve_sos(ev, raiser.id, false, {}); break;
          default: ev = acknowledge(ev, UserId{"usr_nobody"}, targets, {}); break;
        }
      } catch (const DomainError&) {
      }
      CHECK(static_cast<int>(ev.status) >= static_cast<int>(before));
    }
  }
}

TEST_CASE("platform dedups presses inside sixty seconds") {
  f1::test::World w;
  const auto raiser = w.user("raiser");
  const auto helper = w.user("helper", north_of(kHome, 300));
  const auto school = w.platform.create_organization("school@example.pl", "Szkoła");
  w.platform.confirm_profile(school.id, helper.id, std::nullopt);

  const auto first = w.platform.raise_sos(raiser.id, std::nullopt);
  CHECK(first.created);
  CHECK(first.alerted == 1);
  w.clock.advance(std::chrono::seconds{10});
  const auto second = w.platform.raise_sos(raiser.id, std::nullopt);
  CHECK_FALSE(second.created);
  CHECK(second.event.id == first.event.id);
  CHECK(second.alerted == 1);
  w.clock.advance(std::chrono::seconds{49});
  CHECK_FALSE(w.platform.raise_sos(raiser.id, std::nullopt).created);
  w.clock.advance(std::chrono::seconds{1});
  const auto third = w.platform.raise_sos(raiser.id, std::nullopt);
  CHECK(third.created);
  CHECK(third.event.id != first.event.id);
  CHECK(w.platform.snapshot().events.size() == 2);

  CHECK(code_of([&] { w.platform.acknowledge(school.id, first.event.id); }) == ErrorCode::NotATarget);
  CHECK(w.platform.acknowledge(helper.id, first.event.id).status == EventStatus::Acknowledged);
}

TEST_CASE("outbox draining") {
  f1::test::World w;
  CHECK(w.platform.drain_outbox(10).empty());
  const auto school = w.platform.create_organization("school@example.pl", "Szkoła");
  std::vector<UserAccount> helpers;
  for (int i = 0; i < 3; ++i) {
    helpers.push_back(w.user("h" + std::to_string(i), north_of(kHome, 100.0 * (i + 1))));
    w.platform.confirm_profile(school.id, helpers.back().id, std::nullopt);
  }
  const auto raiser = w.user("raiser");
  CHECK(w.platform.raise_sos(raiser.id, std::nullopt).alerted == 3);

  const auto first = w.platform.drain_outbox(2);
  REQUIRE(first.size() == 2);
  CHECK(first[0].id < first[1].id);
  const auto rest = w.platform.drain_outbox(2);
  REQUIRE(rest.size() == 1);
  CHECK(rest[0].id != first[0].id);
  CHECK(rest[0].id != first[1].id);
  CHECK(w.platform.drain_outbox(2).empty());
}

TEST_CASE("concurrent drains deliver each notification once") {
  f1::test::World w;
  const auto school = w.platform.create_organization("school@example.pl", "Szkoła");
  for (int i = 0; i < 40; ++i) {
    const auto h = w.user("h" + std::to_string(i), north_of(kHome, 10.0 * (i + 1)));
    w.platform.confirm_profile(school.id, h.id, std::nullopt);
  }
  std::size_t expected = 0;
  for (int i = 0; i < 10; ++i) {
    const auto r = w.user("raiser" + std::to_string(i));
    expected += w.platform.raise_sos(r.id, std::nullopt).alerted;
  }
  REQUIRE(expected > 300);

  std::vector<std::vector<NotificationId>> seen(8);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t) {
    threads.emplace_back([&, t] {
      for (;;) {
        const auto batch = w.platform.drain_outbox(7);
        if (batch.empty()) break;
        for (const auto& n : batch) seen[t].push_back(n.id);
      }
    });
  }
  for (auto& th : threads) th.join();

  std::set<NotificationId> all;
  std::size_t total = 0;
  for (const auto& s : seen) {
    total += s.size();
    all.insert(s.begin(), s.end());
  }
  CHECK(total == expected);
  CHECK(all.size() == expected);
}
