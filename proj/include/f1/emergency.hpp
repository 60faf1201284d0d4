#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "f1/domain.hpp"
#include "f1/geo.hpp"

namespace f1::emergency {

inline constexpr double kDefaultSosRadiusMeters = 2'000.0;
inline constexpr Millis kDedupWindow{60'000};

enum class EventStatus { Open, Acknowledged, Resolved };

std::string_view to_string(EventStatus s) noexcept;
std::optional<EventStatus> parse_event_status(std::string_view s) noexcept;

struct Acknowledgment {
  UserId volunteer_id;
  Timestamp at;

  friend bool operator==(const Acknowledgment&, const Acknowledgment&) = default;
};

struct EmergencyEvent {
  EventId id;
  UserId user_id;
  GeoPoint location = GeoPoint::make(0, 0);
  Timestamp raised_at;
  EventStatus status = EventStatus::Open;
  std::vector<Acknowledgment> acknowledgments;
  std::optional<Timestamp> resolved_at;
  std::uint64_t version = 1;

  friend bool operator==(const EmergencyEvent&, const EmergencyEvent&) = default;
};

/// Outbox row; one per (event, target) at raise time.
struct Notification {
  NotificationId id;
  EventId event_id;
  UserId target_user_id;
  Timestamp created_at;
  std::optional<Timestamp> delivered_at;

  friend bool operator==(const Notification&, const Notification&) = default;
};

struct RaiseOutcome {
  EmergencyEvent event;
  bool created = false;  // false: an event from the dedup window was returned
};

/// `recent` holds the user's existing events (any order). Throws NoLocation.
RaiseOutcome raise_sos(const UserAccount& user, std::optional<GeoPoint> location, Timestamp now,
                       std::span<const EmergencyEvent> recent, EventId new_id);

struct DispatchTarget {
  UserAccount user;
  double distance = 0.0;
};

using BadgeCheck = std::function<bool(const UserId&)>;

/// Verified, non-organization users with a home location inside the radius,
/// excluding the raiser; nearest first, ties by id.
std::vector<DispatchTarget> dispatch_targets(const EmergencyEvent& event, geo::RadiusMeters radius,
                                             std::span<const UserAccount> users,
                                             const BadgeCheck& is_verified);

/// Throws AlreadyResolved / NotATarget. Repeat acknowledgments are no-ops.
EmergencyEvent acknowledge(const EmergencyEvent& event, const UserId& volunteer,
                           std::span<const UserId> targets, Timestamp now);

/// Raiser or platform admin. Throws AlreadyResolved / NotAuthorized.
EmergencyEvent resolve_sos(const EmergencyEvent& event, const UserId& actor, bool actor_is_admin,
                           Timestamp now);

}  // namespace f1::emergency
