#include "f1/emergency.hpp"

#include <algorithm>

namespace f1::emergency {

std::string_view to_string(EventStatus s) noexcept {
  switch (s) {
    case EventStatus::Open: return "Open";
    case EventStatus::Acknowledged: return "Acknowledged";
    case EventStatus::Resolved: return "Resolved";
  }
  return "?";
}

std::optional<EventStatus> parse_event_status(std::string_view s) noexcept {
  for (auto v : {EventStatus::Open, EventStatus::Acknowledged, EventStatus::Resolved}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

RaiseOutcome raise_sos(const UserAccount& user, std::optional<GeoPoint> location, Timestamp now,
                       std::span<const EmergencyEvent> recent, EventId new_id) {
  const EmergencyEvent* latest = nullptr;
  for (const auto& e : recent) {
    if (e.user_id != user.id || e.status == EventStatus::Resolved) continue;
    if (now - e.raised_at >= kDedupWindow || e.raised_at > now) continue;
    if (latest == nullptr || e.raised_at > latest->raised_at) latest = &e;
  }
  if (latest != nullptr) return RaiseOutcome{*latest, false};

  const auto where = location ? location : user.home_location;
  if (!where) fail(ErrorCode::NoLocation, "no location given and no home location on profile");

  EmergencyEvent e;
  e.id = std::move(new_id);
  e.user_id = user.id;
  e.location = *where;
  e.raised_at = now;
  return RaiseOutcome{std::move(e), true};
}

std::vector<DispatchTarget> dispatch_targets(const EmergencyEvent& event, geo::RadiusMeters radius,
                                             std::span<const UserAccount> users,
                                             const BadgeCheck& is_verified) {
  std::vector<DispatchTarget> out;
  for (const auto& u : users) {
    if (u.id == event.user_id || u.is_organization || !u.home_location) continue;
    const double d = geo::haversine_distance(event.location, *u.home_location);
    if (d > radius.value() || !is_verified(u.id)) continue;
    out.push_back({u, d});
  }
  std::sort(out.begin(), out.end(), [](const DispatchTarget& a, const DispatchTarget& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.user.id < b.user.id;
  });
  return out;
}

EmergencyEvent acknowledge(const EmergencyEvent& event, const UserId& volunteer,
                           std::span<const UserId> targets, Timestamp now) {
  if (event.status == EventStatus::Resolved) fail(ErrorCode::AlreadyResolved, "event is resolved");
  if (std::find(targets.begin(), targets.end(), volunteer) == targets.end()) {
    fail(ErrorCode::NotATarget, "user was not alerted for this event");
  }
  const bool already = std::any_of(event.acknowledgments.begin(), event.acknowledgments.end(),
                                   [&](const Acknowledgment& a) { return a.volunteer_id == volunteer; });
  if (already) return event;

  EmergencyEvent next = event;
  next.acknowledgments.push_back({volunteer, now});
  next.status = EventStatus::Acknowledged;
  ++next.version;
  return next;
}

EmergencyEvent resolve_sos(const EmergencyEvent& event, const UserId& actor, bool actor_is_admin,
                           Timestamp now) {
  if (event.status == EventStatus::Resolved) fail(ErrorCode::AlreadyResolved, "event is resolved");
  if (!actor_is_admin && actor != event.user_id) {
    fail(ErrorCode::NotAuthorized, "only the raiser or an admin can resolve");
  }
  EmergencyEvent next = event;
  next.status = EventStatus::Resolved;
  next.resolved_at = now;
  ++next.version;
  return next;
}

}  // namespace f1::emergency
