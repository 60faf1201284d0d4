#include "f1/json_codec.hpp"

namespace nlohmann {

void adl_serializer<f1::Timestamp>::to_json(json& j, const f1::Timestamp& t) {
  j = f1::format_timestamp(t);
}

f1::Timestamp adl_serializer<f1::Timestamp>::from_json(const json& j) {
  const auto parsed = f1::parse_timestamp(j.get<std::string>());
  if (!parsed) {
    throw f1::DomainError(f1::ErrorCode::InvalidField, "bad timestamp: " + j.get<std::string>());
  }
  return *parsed;
}

void adl_serializer<f1::GeoPoint>::to_json(json& j, const f1::GeoPoint& p) {
  j = json{{"latitude", p.latitude()}, {"longitude", p.longitude()}};
}

f1::GeoPoint adl_serializer<f1::GeoPoint>::from_json(const json& j) {
  return f1::GeoPoint::make(j.at("latitude").get<double>(), j.at("longitude").get<double>());
}

}  // namespace nlohmann

namespace f1 {

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

template <typename E, typename Parse>
E parse_enum(const json& j, Parse parse, const char* what) {
  const auto v = parse(j.get<std::string>());
  if (!v) throw DomainError(ErrorCode::InvalidField, std::string("bad ") + what + ": " + j.get<std::string>());
  return *v;
}

}  // namespace

void to_json(json& j, RequestStatus s) { j = std::string(to_string(s)); }
void from_json(const json& j, RequestStatus& s) {
  s = parse_enum<RequestStatus>(j, parse_request_status, "request status");
}
void to_json(json& j, EngagementState s) { j = std::string(to_string(s)); }
void from_json(const json& j, EngagementState& s) {
  s = parse_enum<EngagementState>(j, parse_engagement_state, "engagement state");
}

void to_json(json& j, const UserAccount& u) {
  j = json{{"id", u.id},
           {"email", u.email},
           {"display_name", u.display_name},
           {"created_at", u.created_at},
           {"is_organization", u.is_organization},
           {"version", u.version}};
  put_optional(j, "home_location", u.home_location);
}

void from_json(const json& j, UserAccount& u) {
  u.id = j.at("id").get<UserId>();
  u.email = j.at("email").get<std::string>();
  u.display_name = j.at("display_name").get<std::string>();
  u.home_location = get_optional<GeoPoint>(j, "home_location");
  u.created_at = j.at("created_at").get<Timestamp>();
  u.is_organization = j.at("is_organization").get<bool>();
  u.version = j.at("version").get<std::uint64_t>();
}

void to_json(json& j, const FavorRequest& r) {
  j = json{{"id", r.id},
           {"requester_id", r.requester_id},
           {"title", r.title},
           {"description", r.description},
           {"location", r.location},
           {"created_at", r.created_at},
           {"expires_at", r.expires_at},
           {"status", r.status},
           {"version", r.version}};
}

void from_json(const json& j, FavorRequest& r) {
  r.id = j.at("id").get<RequestId>();
  r.requester_id = j.at("requester_id").get<UserId>();
  r.title = j.at("title").get<std::string>();
  r.description = j.at("description").get<std::string>();
  r.location = j.at("location").get<GeoPoint>();
  r.created_at = j.at("created_at").get<Timestamp>();
  r.expires_at = j.at("expires_at").get<Timestamp>();
  r.status = j.at("status").get<RequestStatus>();
  r.version = j.at("version").get<std::uint64_t>();
}

void to_json(json& j, const ChallengeKeyPair& k) {
  j = json{{"engagement_id", k.engagement_id},
           {"volunteer_word", k.volunteer_word},
           {"requester_word", k.requester_word},
           {"issued_at", k.issued_at}};
}

void from_json(const json& j, ChallengeKeyPair& k) {
  k.engagement_id = j.at("engagement_id").get<EngagementId>();
  k.volunteer_word = j.at("volunteer_word").get<std::string>();
  k.requester_word = j.at("requester_word").get<std::string>();
  k.issued_at = j.at("issued_at").get<Timestamp>();
}

void to_json(json& j, const Engagement& e) {
  json stamps = json::object();
  for (const auto& [state, at] : e.timestamps) stamps[std::string(to_string(state))] = at;
  j = json{{"id", e.id},
           {"request_id", e.request_id},
           {"volunteer_id", e.volunteer_id},
           {"state", e.state},
           {"ratings", e.ratings},
           {"timestamps", std::move(stamps)},
           {"failed_attempts", e.failed_attempts},
           {"locked_out", e.locked_out},
           {"requester_verified", e.requester_verified},
           {"version", e.version}};
  put_optional(j, "key_pair", e.key_pair);
}

void from_json(const json& j, Engagement& e) {
  e.id = j.at("id").get<EngagementId>();
  e.request_id = j.at("request_id").get<RequestId>();
  e.volunteer_id = j.at("volunteer_id").get<UserId>();
  e.state = j.at("state").get<EngagementState>();
  e.key_pair = get_optional<ChallengeKeyPair>(j, "key_pair");
  e.ratings = j.at("ratings").get<std::vector<RecordId>>();
  e.timestamps.clear();
  for (const auto& [key, value] : j.at("timestamps").items()) {
    e.timestamps[parse_enum<EngagementState>(json(key), parse_engagement_state, "state")] =
        value.get<Timestamp>();
  }
  e.failed_attempts = j.at("failed_attempts").get<std::uint32_t>();
  e.locked_out = j.at("locked_out").get<bool>();
  e.requester_verified = j.at("requester_verified").get<bool>();
  e.version = j.at("version").get<std::uint64_t>();
}

void to_json(json& j, const Session& s) {
  j = json{{"token", s.token},
           {"user_id", s.user_id},
           {"issued_at", s.issued_at},
           {"expires_at", s.expires_at}};
}

void from_json(const json& j, Session& s) {
  s.token = j.at("token").get<std::string>();
  s.user_id = j.at("user_id").get<UserId>();
  s.issued_at = j.at("issued_at").get<Timestamp>();
  s.expires_at = j.at("expires_at").get<Timestamp>();
}

namespace trust {

void to_json(json& j, const VerificationBadge& b) {
  j = json{{"user_id", b.user_id},
           {"org_id", b.org_id},
           {"org_name", b.org_name},
           {"confirmed_at", b.confirmed_at}};
  put_optional(j, "note", b.note);
}

void from_json(const json& j, VerificationBadge& b) {
  b.user_id = j.at("user_id").get<UserId>();
  b.org_id = j.at("org_id").get<UserId>();
  b.org_name = j.at("org_name").get<std::string>();
  b.confirmed_at = j.at("confirmed_at").get<Timestamp>();
  b.note = get_optional<std::string>(j, "note");
}

void to_json(json& j, const ReputationRecord& r) {
  j = json{{"id", r.id},
           {"engagement_id", r.engagement_id},
           {"rater_id", r.rater_id},
           {"ratee_id", r.ratee_id},
           {"grade", r.grade},
           {"created_at", r.created_at}};
}

void from_json(const json& j, ReputationRecord& r) {
  r.id = j.at("id").get<RecordId>();
  r.engagement_id = j.at("engagement_id").get<EngagementId>();
  r.rater_id = j.at("rater_id").get<UserId>();
  r.ratee_id = j.at("ratee_id").get<UserId>();
  r.grade = j.at("grade").get<LikertGrade>();
  r.created_at = j.at("created_at").get<Timestamp>();
}

}  // namespace trust

namespace emergency {

void to_json(json& j, EventStatus s) { j = std::string(to_string(s)); }
void from_json(const json& j, EventStatus& s) {
  s = parse_enum<EventStatus>(j, parse_event_status, "event status");
}

void to_json(json& j, const Acknowledgment& a) {
  j = json{{"volunteer_id", a.volunteer_id}, {"at", a.at}};
}

void from_json(const json& j, Acknowledgment& a) {
  a.volunteer_id = j.at("volunteer_id").get<UserId>();
  a.at = j.at("at").get<Timestamp>();
}

void to_json(json& j, const EmergencyEvent& e) {
  j = json{{"id", e.id},
           {"user_id", e.user_id},
           {"location", e.location},
           {"raised_at", e.raised_at},
           {"status", e.status},
           {"acknowledgments", e.acknowledgments},
           {"version", e.version}};
  put_optional(j, "resolved_at", e.resolved_at);
}

void from_json(const json& j, EmergencyEvent& e) {
  e.id = j.at("id").get<EventId>();
  e.user_id = j.at("user_id").get<UserId>();
  e.location = j.at("location").get<GeoPoint>();
  e.raised_at = j.at("raised_at").get<Timestamp>();
  e.status = j.at("status").get<EventStatus>();
  e.acknowledgments = j.at("acknowledgments").get<std::vector<Acknowledgment>>();
  e.resolved_at = get_optional<Timestamp>(j, "resolved_at");
  e.version = j.at("version").get<std::uint64_t>();
}

void to_json(json& j, const Notification& n) {
  j = json{{"id", n.id},
           {"event_id", n.event_id},
           {"target_user_id", n.target_user_id},
           {"created_at", n.created_at}};
  put_optional(j, "delivered_at", n.delivered_at);
}

void from_json(const json& j, Notification& n) {
  n.id = j.at("id").get<NotificationId>();
  n.event_id = j.at("event_id").get<EventId>();
  n.target_user_id = j.at("target_user_id").get<UserId>();
  n.created_at = j.at("created_at").get<Timestamp>();
  n.delivered_at = get_optional<Timestamp>(j, "delivered_at");
}

}  // namespace emergency

namespace geo {

void to_json(json& j, const RequesterSummary& s) {
  j = json{{"id", s.id}, {"display_name", s.display_name}, {"verified", s.verified}};
}

void to_json(json& j, const NearbyResult& r) {
  j = json{{"request_id", r.request_id},
           {"distance", r.distance},
           {"title", r.title},
           {"description", r.description},
           {"location", r.location},
           {"created_at", r.created_at},
           {"requester", r.requester}};
}

}  // namespace geo

json snapshot_to_json(const StoreSnapshot& s) {
  auto values = [](const auto& map) {
    json arr = json::array();
    for (const auto& [k, v] : map) arr.push_back(v);
    return arr;
  };
  return json{{"users", values(s.users)},
              {"requests", values(s.requests)},
              {"engagements", values(s.engagements)},
              {"badges", s.badges},
              {"ratings", values(s.ratings)},
              {"events", values(s.events)},
              {"outbox", values(s.outbox)},
              {"sessions", values(s.sessions)}};
}

}  // namespace f1
