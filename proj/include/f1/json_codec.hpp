#pragma once

// JSON mapping of the domain types. Field names follow the domain structs;
// timestamps are ISO-8601 UTC strings with millisecond precision.

#include <json.hpp>

#include "f1/challenge.hpp"
#include "f1/domain.hpp"
#include "f1/emergency.hpp"
#include "f1/geo.hpp"
#include "f1/store.hpp"
#include "f1/trust.hpp"

namespace nlohmann {

template <>
struct adl_serializer<f1::Timestamp> {
  static void to_json(json& j, const f1::Timestamp& t);
  static f1::Timestamp from_json(const json& j);
};

template <typename Tag>
struct adl_serializer<f1::Id<Tag>> {
  static void to_json(json& j, const f1::Id<Tag>& id) { j = id.value; }
  static f1::Id<Tag> from_json(const json& j) { return f1::Id<Tag>{j.get<std::string>()}; }
};

template <>
struct adl_serializer<f1::GeoPoint> {
  static void to_json(json& j, const f1::GeoPoint& p);
  static f1::GeoPoint from_json(const json& j);
};

template <>
struct adl_serializer<f1::trust::LikertGrade> {
  static void to_json(json& j, const f1::trust::LikertGrade& g) { j = g.value(); }
  static f1::trust::LikertGrade from_json(const json& j) {
    return f1::trust::LikertGrade{j.get<int>()};
  }
};

}  // namespace nlohmann

namespace f1 {

using json = nlohmann::json;

void to_json(json& j, RequestStatus s);
void from_json(const json& j, RequestStatus& s);
void to_json(json& j, EngagementState s);
void from_json(const json& j, EngagementState& s);

void to_json(json& j, const UserAccount& u);
void from_json(const json& j, UserAccount& u);
void to_json(json& j, const FavorRequest& r);
void from_json(const json& j, FavorRequest& r);
void to_json(json& j, const ChallengeKeyPair& k);
void from_json(const json& j, ChallengeKeyPair& k);
void to_json(json& j, const Engagement& e);
void from_json(const json& j, Engagement& e);
void to_json(json& j, const Session& s);
void from_json(const json& j, Session& s);

namespace trust {
void to_json(json& j, const VerificationBadge& b);
void from_json(const json& j, VerificationBadge& b);
void to_json(json& j, const ReputationRecord& r);
void from_json(const json& j, ReputationRecord& r);
}  // namespace trust

namespace emergency {
void to_json(json& j, EventStatus s);
void from_json(const json& j, EventStatus& s);
void to_json(json& j, const Acknowledgment& a);
void from_json(const json& j, Acknowledgment& a);
void to_json(json& j, const EmergencyEvent& e);
void from_json(const json& j, EmergencyEvent& e);
void to_json(json& j, const Notification& n);
void from_json(const json& j, Notification& n);
}  // namespace emergency

namespace geo {
void to_json(json& j, const RequesterSummary& s);
void to_json(json& j, const NearbyResult& r);
}  // namespace geo

/// Whole snapshot as {collection: [records...]}; used for equality checks in
/// tests and for debugging dumps.
json snapshot_to_json(const StoreSnapshot& s);

}  // namespace f1
