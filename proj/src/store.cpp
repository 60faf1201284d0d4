#include "f1/store.hpp"

namespace f1 {

std::string_view collection_name(Collection c) noexcept {
  switch (c) {
    case Collection::Users: return "users";
    case Collection::Requests: return "requests";
    case Collection::Engagements: return "engagements";
    case Collection::Badges: return "badges";
    case Collection::Ratings: return "ratings";
    case Collection::Events: return "events";
    case Collection::Outbox: return "outbox";
    case Collection::Sessions: return "sessions";
  }
  return "?";
}

bool StoreSnapshot::empty() const noexcept {
  return users.empty() && requests.empty() && engagements.empty() && badges.empty() &&
         ratings.empty() && events.empty() && outbox.empty() && sessions.empty();
}

namespace {

[[noreturn]] void dangling(Collection c, std::size_t position, const std::string& what) {
  throw CorruptStore(std::string(collection_name(c)) + ".jsonl", position + 1,
                     "dangling reference: " + what);
}

}  // namespace

void check_integrity(const StoreSnapshot& s) {
  // Line numbers count the header line, so record i sits on line i + 2.
  std::size_t i = 1;
  for (const auto& [id, r] : s.requests) {
    if (!s.users.contains(r.requester_id)) dangling(Collection::Requests, i, "requester " + r.requester_id.value);
    ++i;
  }
  i = 1;
  for (const auto& [id, e] : s.engagements) {
    if (!s.requests.contains(e.request_id)) dangling(Collection::Engagements, i, "request " + e.request_id.value);
    if (!s.users.contains(e.volunteer_id)) dangling(Collection::Engagements, i, "volunteer " + e.volunteer_id.value);
    for (const auto& rid : e.ratings) {
      if (!s.ratings.contains(rid)) dangling(Collection::Engagements, i, "rating " + rid.value);
    }
    ++i;
  }
  i = 1;
  for (const auto& b : s.badges) {
    if (!s.users.contains(b.user_id)) dangling(Collection::Badges, i, "user " + b.user_id.value);
    if (!s.users.contains(b.org_id)) dangling(Collection::Badges, i, "org " + b.org_id.value);
    ++i;
  }
  i = 1;
  for (const auto& [id, r] : s.ratings) {
    if (!s.engagements.contains(r.engagement_id)) dangling(Collection::Ratings, i, "engagement " + r.engagement_id.value);
    if (!s.users.contains(r.rater_id)) dangling(Collection::Ratings, i, "rater " + r.rater_id.value);
    if (!s.users.contains(r.ratee_id)) dangling(Collection::Ratings, i, "ratee " + r.ratee_id.value);
    ++i;
  }
  i = 1;
  for (const auto& [id, e] : s.events) {
    if (!s.users.contains(e.user_id)) dangling(Collection::Events, i, "user " + e.user_id.value);
    for (const auto& a : e.acknowledgments) {
      if (!s.users.contains(a.volunteer_id)) dangling(Collection::Events, i, "volunteer " + a.volunteer_id.value);
    }
    ++i;
  }
  i = 1;
  for (const auto& [id, n] : s.outbox) {
    if (!s.events.contains(n.event_id)) dangling(Collection::Outbox, i, "event " + n.event_id.value);
    if (!s.users.contains(n.target_user_id)) dangling(Collection::Outbox, i, "target " + n.target_user_id.value);
    ++i;
  }
  i = 1;
  for (const auto& [token, session] : s.sessions) {
    if (!s.users.contains(session.user_id)) dangling(Collection::Sessions, i, "user " + session.user_id.value);
    ++i;
  }
}

void MemoryBackend::save(const StoreSnapshot& snapshot, CollectionSet dirty) {
  std::lock_guard lock(mutex_);
  ++saves_;
  auto copy_if = [&](Collection c, auto member) {
    if (dirty.test(static_cast<std::size_t>(c))) stored_.*member = snapshot.*member;
  };
  copy_if(Collection::Users, &StoreSnapshot::users);
  copy_if(Collection::Requests, &StoreSnapshot::requests);
  copy_if(Collection::Engagements, &StoreSnapshot::engagements);
  copy_if(Collection::Badges, &StoreSnapshot::badges);
  copy_if(Collection::Ratings, &StoreSnapshot::ratings);
  copy_if(Collection::Events, &StoreSnapshot::events);
  copy_if(Collection::Outbox, &StoreSnapshot::outbox);
  copy_if(Collection::Sessions, &StoreSnapshot::sessions);
}

}  // namespace f1
