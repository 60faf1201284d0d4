#pragma once

// Random data for property tests. Everything is driven by an explicit seed.

#include <cstdio>
#include <random>
#include <string>

#include "f1/store.hpp"

namespace f1::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng) { return (rng() & 1u) != 0; }

inline std::string numbered(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%08zu", prefix, n);
  return buf;
}

inline GeoPoint any_point(Rng& rng) {
  return GeoPoint::make(uniform(rng, -90.0, 90.0), uniform(rng, -180.0, 180.0));
}

inline Timestamp any_time(Rng& rng) {
  // 2020 .. 2035, millisecond resolution
  return Timestamp{Millis{static_cast<long long>(uniform(rng, 1.5778368e12, 2.0512224e12))}};
}

/// Text that exercises the JSON encoder: quotes, escapes, non-ASCII.
inline std::string any_text(Rng& rng, std::size_t max_len = 40) {
  static const char* kPieces[] = {"a", "Zażółć", " ", "\"", "\\", "\n", "\t", "gęślą", "jaźń",
                                  "{", "}", ",", ":", "€", "x", "é", "0", "/"};
  std::string s;
  const auto n = pick(rng, max_len) + 1;
  for (std::size_t i = 0; i < n; ++i) s += kPieces[pick(rng, std::size(kPieces))];
  return s;
}

/// A referentially consistent snapshot with roughly `total` aggregates
/// spread over every collection.
inline StoreSnapshot snapshot(Rng& rng, std::size_t total) {
  StoreSnapshot s;
  const std::size_t per = std::max<std::size_t>(1, total / 8);
  std::vector<UserId> users;
  const std::size_t user_count = total > per * 7 ? total - per * 7 : 1;
  for (std::size_t i = 1; i <= user_count; ++i) {
    UserAccount u;
    u.id = UserId{numbered("usr_", i)};
    u.email = "user" + std::to_string(i) + "@example.pl";
    u.display_name = any_text(rng);
    if (coin(rng)) u.home_location = any_point(rng);
    u.created_at = any_time(rng);
    u.is_organization = pick(rng, 5) == 0;
    u.version = pick(rng, 9) + 1;
    users.push_back(u.id);
    s.users.emplace(u.id, std::move(u));
  }
  std::vector<RequestId> requests;
  for (std::size_t i = 1; i <= per; ++i) {
    FavorRequest r;
    r.id = RequestId{numbered("req_", i)};
    r.requester_id = users[pick(rng, users.size())];
    r.title = any_text(rng);
    r.description = any_text(rng, 200);
    r.location = any_point(rng);
    r.created_at = any_time(rng);
    r.expires_at = r.created_at + Millis{static_cast<long long>(pick(rng, 1'000'000'000)) + 1};
    r.status = static_cast<RequestStatus>(pick(rng, 5));
    r.version = pick(rng, 9) + 1;
    requests.push_back(r.id);
    s.requests.emplace(r.id, std::move(r));
  }
  std::vector<EngagementId> engagements;
  for (std::size_t i = 1; i <= per; ++i) {
    Engagement e;
    e.id = EngagementId{numbered("eng_", i)};
    e.request_id = requests[pick(rng, requests.size())];
    e.volunteer_id = users[pick(rng, users.size())];
    e.state = kAllStates[pick(rng, 6)];
    if (coin(rng)) e.key_pair = ChallengeKeyPair{e.id, any_text(rng, 6), any_text(rng, 6), any_time(rng)};
    for (auto st : kAllStates) {
      if (coin(rng)) e.timestamps[st] = any_time(rng);
    }
    e.failed_attempts = static_cast<std::uint32_t>(pick(rng, 6));
    e.locked_out = coin(rng);
    e.requester_verified = coin(rng);
    e.version = pick(rng, 9) + 1;
    engagements.push_back(e.id);
    s.engagements.emplace(e.id, std::move(e));
  }
  for (std::size_t i = 1; i <= per; ++i) {
    trust::ReputationRecord r;
    r.id = RecordId{numbered("rat_", i)};
    r.engagement_id = engagements[pick(rng, engagements.size())];
    r.rater_id = users[pick(rng, users.size())];
    r.ratee_id = users[pick(rng, users.size())];
    r.grade = trust::LikertGrade{static_cast<int>(pick(rng, 5)) + 1};
    r.created_at = any_time(rng);
    s.engagements.at(r.engagement_id).ratings.push_back(r.id);
    s.ratings.emplace(r.id, std::move(r));
  }
  for (std::size_t i = 1; i <= per; ++i) {
    trust::VerificationBadge b;
    b.user_id = users[pick(rng, users.size())];
    b.org_id = users[pick(rng, users.size())];
    b.org_name = any_text(rng);
    b.confirmed_at = any_time(rng);
    if (coin(rng)) b.note = any_text(rng, 100);
    s.badges.push_back(std::move(b));
  }
  std::vector<EventId> events;
  for (std::size_t i = 1; i <= per; ++i) {
    emergency::EmergencyEvent e;
    e.id = EventId{numbered("sos_", i)};
    e.user_id = users[pick(rng, users.size())];
    e.location = any_point(rng);
    e.raised_at = any_time(rng);
    e.status = static_cast<emergency::EventStatus>(pick(rng, 3));
    for (std::size_t k = pick(rng, 4); k > 0; --k) {
      e.acknowledgments.push_back({users[pick(rng, users.size())], any_time(rng)});
    }
    if (e.status == emergency::EventStatus::Resolved) e.resolved_at = any_time(rng);
    e.version = pick(rng, 9) + 1;
    events.push_back(e.id);
    s.events.emplace(e.id, std::move(e));
  }
  for (std::size_t i = 1; i <= per; ++i) {
    emergency::Notification n;
    n.id = NotificationId{numbered("ntf_", i)};
    n.event_id = events[pick(rng, events.size())];
    n.target_user_id = users[pick(rng, users.size())];
    n.created_at = any_time(rng);
    if (coin(rng)) n.delivered_at = any_time(rng);
    s.outbox.emplace(n.id, std::move(n));
  }
  for (std::size_t i = 1; i <= per; ++i) {
    Session x;
    char token[17];
    std::snprintf(token, sizeof token, "%016llx", static_cast<unsigned long long>(rng()));
    x.token = token;
    x.user_id = users[pick(rng, users.size())];
    x.issued_at = any_time(rng);
    x.expires_at = x.issued_at + Millis{86'400'000};
    s.sessions.emplace(x.token, std::move(x));
  }
  return s;
}

/// Aggregate count as the persistence tests understand it.
inline std::size_t aggregate_count(const StoreSnapshot& s) {
  return s.users.size() + s.requests.size() + s.engagements.size() + s.badges.size() +
         s.ratings.size() + s.events.size() + s.outbox.size() + s.sessions.size();
}

}  // namespace f1::gen
