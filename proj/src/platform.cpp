#include "f1/platform.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <mutex>
#include <random>

namespace f1 {

namespace {

constexpr const char* kUserPrefix = "usr_";
constexpr const char* kRequestPrefix = "req_";
constexpr const char* kEngagementPrefix = "eng_";
constexpr const char* kRecordPrefix = "rat_";
constexpr const char* kEventPrefix = "sos_";
constexpr const char* kNotificationPrefix = "ntf_";

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string random_token() {
  std::random_device rd;
  std::string out;
  out.reserve(64);
  for (int i = 0; i < 8; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

void bump_counter(std::map<std::string, std::uint64_t>& counters, const std::string& id) {
  const auto us = id.find('_');
  if (us == std::string::npos) return;
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(id.data() + us + 1, id.data() + id.size(), n);
  if (ec != std::errc{} || ptr != id.data() + id.size()) return;
  auto& c = counters[id.substr(0, us + 1)];
  c = std::max(c, n);
}

}  // namespace

Platform::Platform(StoreBackend& backend, const Clock& clock, challenge::Wordlist wordlist,
                   PlatformConfig config)
    : backend_(backend),
      clock_(clock),
      wordlist_(std::move(wordlist)),
      config_(std::move(config)),
      state_(backend_.load()),
      rng_(config_.rng_seed ? *config_.rng_seed : entropy_seed()) {
  // Validate the radius settings up front.
  geo::RadiusMeters{config_.default_nearby_radius_m};
  geo::RadiusMeters{config_.sos_radius_m};
  reseed_counters();
}

void Platform::reseed_counters() {
  counters_.clear();
  for (const auto& [id, _] : state_.users) bump_counter(counters_, id.value);
  for (const auto& [id, _] : state_.requests) bump_counter(counters_, id.value);
  for (const auto& [id, _] : state_.engagements) bump_counter(counters_, id.value);
  for (const auto& [id, _] : state_.ratings) bump_counter(counters_, id.value);
  for (const auto& [id, _] : state_.events) bump_counter(counters_, id.value);
  for (const auto& [id, _] : state_.outbox) bump_counter(counters_, id.value);
}

template <typename IdT>
IdT Platform::next_id(const char* prefix) {
  const auto n = ++counters_[prefix];
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%08llu", prefix, static_cast<unsigned long long>(n));
  return IdT{buf};
}

void Platform::commit(CollectionSet dirty) {
  try {
    backend_.save(state_, dirty);
  } catch (...) {
    // Resync with the last committed state, then report the original error.
    try {
      state_ = backend_.load();
      reseed_counters();
    } catch (...) {
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// lookups (caller holds the lock)

const UserAccount& Platform::user_locked(const UserId& id) const {
  const auto it = state_.users.find(id);
  if (it == state_.users.end()) fail(ErrorCode::UserNotFound, "no user " + id.value);
  return it->second;
}

FavorRequest& Platform::request_locked(const RequestId& id) {
  const auto it = state_.requests.find(id);
  if (it == state_.requests.end()) fail(ErrorCode::RequestNotFound, "no request " + id.value);
  return it->second;
}

Engagement& Platform::engagement_locked(const EngagementId& id) {
  const auto it = state_.engagements.find(id);
  if (it == state_.engagements.end()) fail(ErrorCode::EngagementNotFound, "no engagement " + id.value);
  return it->second;
}

const Engagement& Platform::engagement_locked(const EngagementId& id) const {
  const auto it = state_.engagements.find(id);
  if (it == state_.engagements.end()) fail(ErrorCode::EngagementNotFound, "no engagement " + id.value);
  return it->second;
}

emergency::EmergencyEvent& Platform::event_locked(const EventId& id) {
  const auto it = state_.events.find(id);
  if (it == state_.events.end()) fail(ErrorCode::EventNotFound, "no event " + id.value);
  return it->second;
}

const FavorRequest& Platform::request_of(const Engagement& e) const {
  return state_.requests.at(e.request_id);
}

void Platform::require_party(const UserId& actor, const Engagement& e) const {
  if (actor != e.volunteer_id && actor != request_of(e).requester_id) {
    fail(ErrorCode::NotAParty, "not a party of engagement " + e.id.value);
  }
}

bool Platform::is_verified_locked(const UserId& id) const {
  return std::any_of(state_.badges.begin(), state_.badges.end(),
                     [&](const trust::VerificationBadge& b) { return b.user_id == id; });
}

// ---------------------------------------------------------------------------
// accounts

UserAccount Platform::create_user(std::string_view email, std::string_view display_name,
                                  std::optional<GeoPoint> home_location) {
  std::unique_lock lock(mutex_);
  // Validate before consuming an id.
  auto user = make_user(UserId{}, email, display_name, home_location, clock_.now(), false);
  for (const auto& [id, u] : state_.users) {
    if (u.email == user.email) fail(ErrorCode::DuplicateEmail, "email already registered");
  }
  user.id = next_id<UserId>(kUserPrefix);
  state_.users.emplace(user.id, user);
  commit(only({Collection::Users}));
  return user;
}

UserAccount Platform::create_organization(std::string_view email, std::string_view display_name) {
  std::unique_lock lock(mutex_);
  auto org = make_user(UserId{}, email, display_name, std::nullopt, clock_.now(), true);
  for (const auto& [id, u] : state_.users) {
    if (u.email == org.email) fail(ErrorCode::DuplicateEmail, "email already registered");
  }
  org.id = next_id<UserId>(kUserPrefix);
  state_.users.emplace(org.id, org);
  commit(only({Collection::Users}));
  return org;
}

Session Platform::create_session(std::string_view email) {
  std::unique_lock lock(mutex_);
  const auto normalized = normalize_email(email);
  const auto it = std::find_if(state_.users.begin(), state_.users.end(),
                               [&](const auto& kv) { return kv.second.email == normalized; });
  if (it == state_.users.end()) fail(ErrorCode::Unauthenticated, "unknown email");

  Session s;
  do {
    s.token = random_token();
  } while (state_.sessions.contains(s.token));
  s.user_id = it->first;
  s.issued_at = clock_.now();
  s.expires_at = s.issued_at + config_.session_ttl;
  state_.sessions.emplace(s.token, s);
  commit(only({Collection::Sessions}));
  return s;
}

UserId Platform::authenticate(std::string_view token) const {
  std::shared_lock lock(mutex_);
  const auto it = state_.sessions.find(std::string(token));
  if (it == state_.sessions.end()) fail(ErrorCode::Unauthenticated, "unknown session token");
  if (it->second.expires_at <= clock_.now()) fail(ErrorCode::Unauthenticated, "session expired");
  return it->second.user_id;
}

UserAccount Platform::user(const UserId& id) const {
  std::shared_lock lock(mutex_);
  return user_locked(id);
}

// ---------------------------------------------------------------------------
// trust

trust::VerificationBadge Platform::confirm_profile(const UserId& org, const UserId& target,
                                                   std::optional<std::string> note) {
  std::unique_lock lock(mutex_);
  const auto& org_account = user_locked(org);
  if (!org_account.is_organization) {
    fail(ErrorCode::NotAnOrganization, "only organizations confirm profiles");
  }
  const auto target_it = state_.users.find(target);
  if (target_it == state_.users.end()) fail(ErrorCode::TargetNotFound, "no user " + target.value);

  auto badge = trust::confirm_profile(org_account, target_it->second, std::move(note),
                                      clock_.now(), state_.badges);
  const bool existing = std::any_of(state_.badges.begin(), state_.badges.end(), [&](const auto& b) {
    return b.user_id == badge.user_id && b.org_id == badge.org_id;
  });
  if (!existing) {
    state_.badges.push_back(badge);
    commit(only({Collection::Badges}));
  }
  return badge;
}

std::vector<trust::VerificationBadge> Platform::badge_details(const UserId& user) const {
  std::shared_lock lock(mutex_);
  user_locked(user);
  return trust::badges_newest_first(state_.badges, user);
}

trust::ReputationSummary Platform::reputation_sum(const UserId& user) const {
  std::shared_lock lock(mutex_);
  user_locked(user);
  std::vector<trust::ReputationRecord> records;
  records.reserve(state_.ratings.size());
  for (const auto& [id, r] : state_.ratings) records.push_back(r);
  return trust::reputation_sum(records, user);
}

Profile Platform::profile(const UserId& user) const {
  Profile p{this->user(user), badge_details(user), reputation_sum(user)};
  return p;
}

// ---------------------------------------------------------------------------
// requests

FavorRequest Platform::post_request(const UserId& actor, std::string_view title,
                                    std::string_view description, GeoPoint location,
                                    Timestamp expires_at) {
  std::unique_lock lock(mutex_);
  const auto& requester = user_locked(actor);
  auto r = make_request(RequestId{}, requester, title, description, location, clock_.now(),
                        expires_at);
  r.id = next_id<RequestId>(kRequestPrefix);
  state_.requests.emplace(r.id, r);
  commit(only({Collection::Requests}));
  return r;
}

FavorRequest Platform::request(const RequestId& id) const {
  std::shared_lock lock(mutex_);
  const auto it = state_.requests.find(id);
  if (it == state_.requests.end()) fail(ErrorCode::RequestNotFound, "no request " + id.value);
  return it->second;
}

std::vector<FavorRequest> Platform::requests_of(const UserId& requester) const {
  std::shared_lock lock(mutex_);
  user_locked(requester);
  std::vector<FavorRequest> out;
  for (const auto& [id, r] : state_.requests) {
    if (r.requester_id == requester) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.created_at > b.created_at; });
  return out;
}

std::vector<geo::NearbyResult> Platform::nearby(const GeoPoint& center,
                                                std::optional<double> radius_m) const {
  const geo::RadiusMeters radius{radius_m.value_or(config_.default_nearby_radius_m)};
  std::shared_lock lock(mutex_);
  std::vector<FavorRequest> requests;
  requests.reserve(state_.requests.size());
  for (const auto& [id, r] : state_.requests) requests.push_back(r);
  return geo::nearby_requests(requests, center, radius, clock_.now(), [&](const UserId& id) {
    const auto& u = user_locked(id);
    return geo::RequesterSummary{u.id, u.display_name, is_verified_locked(u.id)};
  });
}

FavorRequest Platform::cancel_request(const UserId& actor, const RequestId& id) {
  std::unique_lock lock(mutex_);
  auto& request = request_locked(id);
  Engagement* active = nullptr;
  for (auto& [eid, e] : state_.engagements) {
    if (e.request_id == id && !is_terminal(e.state)) active = &e;
  }
  auto outcome = f1::cancel_request(request, active, actor, clock_.now());
  request = outcome.request;
  CollectionSet dirty = only({Collection::Requests});
  if (outcome.engagement) {
    *active = *outcome.engagement;
    dirty |= only({Collection::Engagements});
  }
  commit(dirty);
  return request;
}

std::size_t Platform::expire_requests_locked(Timestamp now, CollectionSet& dirty) {
  std::size_t n = 0;
  for (auto& [id, r] : state_.requests) {
    if (is_expirable(r, now)) {
      r.status = RequestStatus::Expired;
      ++r.version;
      ++n;
    }
  }
  if (n > 0) dirty |= only({Collection::Requests});
  return n;
}

std::size_t Platform::expire_requests(Timestamp now) {
  std::unique_lock lock(mutex_);
  CollectionSet dirty;
  const auto n = expire_requests_locked(now, dirty);
  commit(dirty);
  return n;
}

// ---------------------------------------------------------------------------
// engagements

Engagement Platform::accept(const UserId& volunteer, const RequestId& request_id) {
  std::unique_lock lock(mutex_);
  const auto& v = user_locked(volunteer);
  auto& request = request_locked(request_id);
  const auto now = clock_.now();
  if (request.status == RequestStatus::Open && request.expires_at <= now) {
    fail(ErrorCode::AlreadyTerminal, "request has expired");
  }
  auto engagement = make_engagement(EngagementId{}, request, v, now);
  engagement.id = next_id<EngagementId>(kEngagementPrefix);
  request.status = RequestStatus::Engaged;
  ++request.version;
  state_.engagements.emplace(engagement.id, engagement);
  commit(only({Collection::Requests, Collection::Engagements}));
  return engagement;
}

Engagement Platform::engagement(const UserId& actor, const EngagementId& id) const {
  std::shared_lock lock(mutex_);
  const auto& e = engagement_locked(id);
  require_party(actor, e);
  return e;
}

ChallengeKeyPair Platform::keys(const UserId& actor, const EngagementId& id) {
  std::unique_lock lock(mutex_);
  auto& e = engagement_locked(id);
  require_party(actor, e);
  if (e.key_pair) return *e.key_pair;
  auto outcome = challenge::issue_keywords(e, wordlist_, rng_, clock_.now());
  e = outcome.engagement;
  commit(only({Collection::Engagements}));
  return outcome.key_pair;
}

challenge::VerifyOutcome Platform::verify(const UserId& actor, const EngagementId& id,
                                          challenge::SpeakerRole role, std::string_view spoken) {
  std::unique_lock lock(mutex_);
  auto& e = engagement_locked(id);
  require_party(actor, e);
  auto outcome = challenge::verify_keyword(e, role, spoken, clock_.now());
  e = outcome.engagement;
  commit(only({Collection::Engagements}));
  return outcome;
}

Engagement Platform::complete(const UserId& actor, const EngagementId& id) {
  std::unique_lock lock(mutex_);
  auto& e = engagement_locked(id);
  require_party(actor, e);
  e = transition(e, event::Complete{}, clock_.now());
  commit(only({Collection::Engagements}));
  return e;
}

trust::ReputationRecord Platform::rate(const UserId& actor, const EngagementId& id,
                                       trust::LikertGrade grade) {
  std::unique_lock lock(mutex_);
  auto& e = engagement_locked(id);
  require_party(actor, e);
  const auto now = clock_.now();

  // A window that lapsed before the sweep noticed still closes the engagement.
  const std::chrono::days window{config_.rating_window_days};
  if (e.state == EngagementState::Completed &&
      e.timestamps.at(EngagementState::Completed) + window <= now) {
    CollectionSet dirty;
    close_rating_windows_locked(now, dirty);
    commit(dirty);
  }

  std::vector<trust::ReputationRecord> existing;
  for (const auto& rid : e.ratings) existing.push_back(state_.ratings.at(rid));
  auto record_id = next_id<RecordId>(kRecordPrefix);
  auto outcome = [&] {
    try {
      return trust::submit_rating(e, request_of(e), existing, actor, grade, record_id, now);
    } catch (...) {
      --counters_[kRecordPrefix];
      throw;
    }
  }();
  state_.ratings.emplace(outcome.record.id, outcome.record);
  e = outcome.engagement;
  CollectionSet dirty = only({Collection::Ratings, Collection::Engagements});
  if (e.state == EngagementState::Closed) {
    auto& r = request_locked(e.request_id);
    r.status = RequestStatus::Closed;
    ++r.version;
    dirty |= only({Collection::Requests});
  }
  commit(dirty);
  return outcome.record;
}

Engagement Platform::cancel_engagement(const UserId& actor, const EngagementId& id) {
  std::unique_lock lock(mutex_);
  auto& e = engagement_locked(id);
  auto& request = request_locked(e.request_id);
  auto outcome = f1::cancel_engagement(request, e, actor, clock_.now());
  request = outcome.request;
  e = *outcome.engagement;
  commit(only({Collection::Requests, Collection::Engagements}));
  return e;
}

std::size_t Platform::close_rating_windows_locked(Timestamp now, CollectionSet& dirty) {
  const std::chrono::days window{config_.rating_window_days};
  std::size_t n = 0;
  for (auto& [id, e] : state_.engagements) {
    if (e.state != EngagementState::Completed) continue;
    if (e.timestamps.at(EngagementState::Completed) + window > now) continue;
    e = transition(e, event::RatingWindowClosed{}, now);
    auto& r = request_locked(e.request_id);
    r.status = RequestStatus::Closed;
    ++r.version;
    ++n;
  }
  if (n > 0) dirty |= only({Collection::Engagements, Collection::Requests});
  return n;
}

std::size_t Platform::close_rating_windows(Timestamp now) {
  std::unique_lock lock(mutex_);
  CollectionSet dirty;
  const auto n = close_rating_windows_locked(now, dirty);
  commit(dirty);
  return n;
}

void Platform::sweep() {
  std::unique_lock lock(mutex_);
  const auto now = clock_.now();
  CollectionSet dirty;
  expire_requests_locked(now, dirty);
  close_rating_windows_locked(now, dirty);
  commit(dirty);
}

// ---------------------------------------------------------------------------
// emergencies

SosOutcome Platform::raise_sos(const UserId& actor, std::optional<GeoPoint> location) {
  std::unique_lock lock(mutex_);
  const auto& raiser = user_locked(actor);
  const auto now = clock_.now();

  std::vector<emergency::EmergencyEvent> mine;
  for (const auto& [id, e] : state_.events) {
    if (e.user_id == actor) mine.push_back(e);
  }
  auto count_alerts = [&](const EventId& id) {
    return static_cast<std::size_t>(std::count_if(state_.outbox.begin(), state_.outbox.end(),
                                                  [&](const auto& kv) { return kv.second.event_id == id; }));
  };

  // Only reserve an id once we know a new event is needed.
  auto probe = emergency::raise_sos(raiser, location, now, mine, EventId{});
  if (!probe.created) return SosOutcome{probe.event, false, count_alerts(probe.event.id)};

  auto event = probe.event;
  event.id = next_id<EventId>(kEventPrefix);
  state_.events.emplace(event.id, event);

  std::vector<UserAccount> users;
  for (const auto& [id, u] : state_.users) users.push_back(u);
  const auto targets = emergency::dispatch_targets(
      event, geo::RadiusMeters{config_.sos_radius_m}, users,
      [&](const UserId& id) { return is_verified_locked(id); });
  for (const auto& t : targets) {
    emergency::Notification n{next_id<NotificationId>(kNotificationPrefix), event.id, t.user.id,
                              now, std::nullopt};
    state_.outbox.emplace(n.id, n);
  }
  commit(only({Collection::Events, Collection::Outbox}));
  return SosOutcome{event, true, targets.size()};
}

std::vector<emergency::DispatchTarget> Platform::dispatch_targets(
    const EventId& id, std::optional<double> radius_m) const {
  const geo::RadiusMeters radius{radius_m.value_or(config_.sos_radius_m)};
  std::shared_lock lock(mutex_);
  const auto it = state_.events.find(id);
  if (it == state_.events.end()) fail(ErrorCode::EventNotFound, "no event " + id.value);
  std::vector<UserAccount> users;
  for (const auto& [uid, u] : state_.users) users.push_back(u);
  return emergency::dispatch_targets(it->second, radius, users,
                                     [&](const UserId& uid) { return is_verified_locked(uid); });
}

emergency::EmergencyEvent Platform::acknowledge(const UserId& actor, const EventId& id) {
  std::unique_lock lock(mutex_);
  auto& event = event_locked(id);
  std::vector<UserId> targets;
  for (const auto& [nid, n] : state_.outbox) {
    if (n.event_id == id) targets.push_back(n.target_user_id);
  }
  auto next = emergency::acknowledge(event, actor, targets, clock_.now());
  if (next.version != event.version) {
    event = next;
    commit(only({Collection::Events}));
  }
  return event;
}

emergency::EmergencyEvent Platform::resolve_sos(const UserId& actor, const EventId& id,
                                                bool is_admin) {
  std::unique_lock lock(mutex_);
  auto& event = event_locked(id);
  event = emergency::resolve_sos(event, actor, is_admin, clock_.now());
  commit(only({Collection::Events}));
  return event;
}

emergency::EmergencyEvent Platform::event(const EventId& id) const {
  std::shared_lock lock(mutex_);
  const auto it = state_.events.find(id);
  if (it == state_.events.end()) fail(ErrorCode::EventNotFound, "no event " + id.value);
  return it->second;
}

std::vector<emergency::Notification> Platform::drain_outbox(std::size_t max) {
  std::unique_lock lock(mutex_);
  std::vector<emergency::Notification*> pending;
  for (auto& [id, n] : state_.outbox) {
    if (!n.delivered_at) pending.push_back(&n);
  }
  std::sort(pending.begin(), pending.end(), [](const auto* a, const auto* b) {
    if (a->created_at != b->created_at) return a->created_at < b->created_at;
    return a->id < b->id;
  });
  if (pending.size() > max) pending.resize(max);

  const auto now = clock_.now();
  std::vector<emergency::Notification> delivered;
  for (auto* n : pending) {
    n->delivered_at = now;
    delivered.push_back(*n);
  }
  if (!delivered.empty()) commit(only({Collection::Outbox}));
  return delivered;
}

StoreSnapshot Platform::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

}  // namespace f1
