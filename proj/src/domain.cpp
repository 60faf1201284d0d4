#include "f1/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace f1 {

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool GeoPoint::valid(double latitude, double longitude) noexcept {
  return std::isfinite(latitude) && std::isfinite(longitude) && latitude >= -90.0 &&
         latitude <= 90.0 && longitude >= -180.0 && longitude < 180.0;
}

GeoPoint GeoPoint::make(double latitude, double longitude) {
  if (!valid(latitude, longitude)) {
    fail(ErrorCode::InvalidGeoPoint, "coordinates out of range: (" + std::to_string(latitude) +
                                         ", " + std::to_string(longitude) + ")");
  }
  return GeoPoint{latitude, longitude};
}

// ---------------------------------------------------------------------------

std::string normalize_email(std::string_view raw) { return ascii_lower(trim(raw)); }

namespace {

bool is_local_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '%' ||
         c == '+' || c == '-';
}

bool valid_label(std::string_view label) {
  if (label.empty() || label.size() > 63) return false;
  if (label.front() == '-' || label.back() == '-') return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-';
  });
}

}  // namespace

bool validate_email(std::string_view raw) {
  const std::string email = normalize_email(raw);
  const auto at = email.find('@');
  if (at == std::string::npos || email.find('@', at + 1) != std::string::npos) return false;

  std::string_view local(email.data(), at);
  if (local.empty() || local.size() > 64 ||
      !std::all_of(local.begin(), local.end(), is_local_char)) {
    return false;
  }

  std::string_view domain(email.data() + at + 1, email.size() - at - 1);
  std::size_t labels = 0;
  while (true) {
    const auto dot = domain.find('.');
    if (!valid_label(domain.substr(0, dot))) return false;
    ++labels;
    if (dot == std::string_view::npos) break;
    domain.remove_prefix(dot + 1);
  }
  return labels >= 2;
}

UserAccount make_user(UserId id, std::string_view email, std::string_view display_name,
                      std::optional<GeoPoint> home, Timestamp created_at, bool is_organization) {
  if (!validate_email(email)) fail(ErrorCode::InvalidEmail, "invalid email address");
  const auto name = trim(display_name);
  const auto len = utf8_length(name);
  if (len < 1 || len > 100) fail(ErrorCode::InvalidField, "display_name must have 1-100 characters");

  UserAccount user;
  user.id = std::move(id);
  user.email = normalize_email(email);
  user.display_name = std::string(name);
  user.home_location = home;
  user.created_at = created_at;
  user.is_organization = is_organization;
  return user;
}

FavorRequest make_request(RequestId id, const UserAccount& requester, std::string_view title,
                          std::string_view description, GeoPoint location, Timestamp created_at,
                          Timestamp expires_at) {
  if (requester.is_organization) fail(ErrorCode::Forbidden, "organizations cannot post requests");
  const auto t = trim(title);
  if (t.empty() || utf8_length(t) > kMaxTitleLength) {
    fail(ErrorCode::InvalidField, "title must have 1-120 characters");
  }
  if (utf8_length(description) > kMaxDescriptionLength) {
    fail(ErrorCode::InvalidField, "description must have at most 2000 characters");
  }
  if (expires_at <= created_at) fail(ErrorCode::InvalidField, "expires_at must be after created_at");

  FavorRequest r;
  r.id = std::move(id);
  r.requester_id = requester.id;
  r.title = std::string(t);
  r.description = std::string(description);
  r.location = location;
  r.created_at = created_at;
  r.expires_at = expires_at;
  r.status = RequestStatus::Open;
  return r;
}

// ---------------------------------------------------------------------------

bool is_terminal(EngagementState s) noexcept {
  return s == EngagementState::Closed || s == EngagementState::Cancelled;
}

EventKind kind_of(const EngagementEvent& e) noexcept {
  return static_cast<EventKind>(e.index());
}

Engagement make_engagement(EngagementId id, const FavorRequest& request,
                           const UserAccount& volunteer, Timestamp at) {
  if (volunteer.is_organization) fail(ErrorCode::Forbidden, "organizations cannot accept requests");
  if (volunteer.id == request.requester_id) {
    fail(ErrorCode::NotAParty, "requester cannot volunteer for their own request");
  }
  if (request.status != RequestStatus::Open) {
    fail(ErrorCode::AlreadyEngaged, "request is " + std::string(to_string(request.status)));
  }
  Engagement e;
  e.id = std::move(id);
  e.request_id = request.id;
  e.volunteer_id = volunteer.id;
  e.state = EngagementState::Accepted;
  e.timestamps[EngagementState::Accepted] = at;
  return e;
}

namespace {

[[noreturn]] void illegal(EngagementState s, EventKind k) {
  throw IllegalTransition("event " + std::string(to_string(k)) + " is not allowed in state " +
                          std::string(to_string(s)));
}

}  // namespace

Engagement transition(const Engagement& engagement, const EngagementEvent& ev, Timestamp at) {
  using S = EngagementState;
  const auto kind = kind_of(ev);
  if (is_terminal(engagement.state)) {
    throw TerminalState("engagement is " + std::string(to_string(engagement.state)) +
                        "; event " + std::string(to_string(kind)) + " rejected");
  }

  Engagement next = engagement;
  auto enter = [&](S s) {
    next.state = s;
    next.timestamps[s] = at;
  };

  switch (kind) {
    case EventKind::IssueKeys: {
      if (engagement.state != S::Accepted) illegal(engagement.state, kind);
      const auto& pair = std::get<event::IssueKeys>(ev).key_pair;
      if (pair.engagement_id != engagement.id) {
        fail(ErrorCode::InvalidField, "key pair belongs to another engagement");
      }
      next.key_pair = pair;
      enter(S::KeysIssued);
      break;
    }
    case EventKind::VerifyArrival:
      if (engagement.state != S::KeysIssued) illegal(engagement.state, kind);
      enter(S::Authenticated);
      break;
    case EventKind::Complete:
      if (engagement.state != S::Authenticated) illegal(engagement.state, kind);
      enter(S::Completed);
      break;
    case EventKind::RateSubmitted:
      if (engagement.state != S::Completed) illegal(engagement.state, kind);
      next.ratings.push_back(std::get<event::RateSubmitted>(ev).record_id);
      if (next.ratings.size() >= 2) enter(S::Closed);
      break;
    case EventKind::RatingWindowClosed:
      if (engagement.state != S::Completed) illegal(engagement.state, kind);
      enter(S::Closed);
      break;
    case EventKind::Cancel:
      if (engagement.state != S::Accepted && engagement.state != S::KeysIssued) {
        illegal(engagement.state, kind);
      }
      enter(S::Cancelled);
      break;
  }
  ++next.version;
  return next;
}

CancelOutcome cancel_request(const FavorRequest& request, const Engagement* active,
                             const UserId& actor, Timestamp at) {
  if (actor != request.requester_id) fail(ErrorCode::NotOwner, "only the requester can cancel");
  if (request.status != RequestStatus::Open && request.status != RequestStatus::Engaged) {
    fail(ErrorCode::AlreadyTerminal, "request is " + std::string(to_string(request.status)));
  }
  CancelOutcome out{request, std::nullopt};
  if (active != nullptr && !is_terminal(active->state)) {
    out.engagement = transition(*active, event::Cancel{}, at);
  }
  out.request.status = RequestStatus::Cancelled;
  ++out.request.version;
  return out;
}

CancelOutcome cancel_engagement(const FavorRequest& request, const Engagement& engagement,
                                const UserId& actor, Timestamp at) {
  if (actor != request.requester_id && actor != engagement.volunteer_id) {
    fail(ErrorCode::NotAParty, "only the two parties can cancel an engagement");
  }
  CancelOutcome out{request, transition(engagement, event::Cancel{}, at)};
  if (out.request.status == RequestStatus::Engaged) {
    out.request.status = RequestStatus::Open;
    ++out.request.version;
  }
  return out;
}

bool is_expirable(const FavorRequest& request, Timestamp now) noexcept {
  return request.status == RequestStatus::Open && request.expires_at <= now;
}

// ---------------------------------------------------------------------------

std::string_view to_string(RequestStatus s) noexcept {
  switch (s) {
    case RequestStatus::Open: return "Open";
    case RequestStatus::Engaged: return "Engaged";
    case RequestStatus::Closed: return "Closed";
    case RequestStatus::Cancelled: return "Cancelled";
    case RequestStatus::Expired: return "Expired";
  }
  return "?";
}

std::string_view to_string(EngagementState s) noexcept {
  switch (s) {
    case EngagementState::Accepted: return "Accepted";
    case EngagementState::KeysIssued: return "KeysIssued";
    case EngagementState::Authenticated: return "Authenticated";
    case EngagementState::Completed: return "Completed";
    case EngagementState::Closed: return "Closed";
    case EngagementState::Cancelled: return "Cancelled";
  }
  return "?";
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::IssueKeys: return "IssueKeys";
    case EventKind::VerifyArrival: return "VerifyArrival";
    case EventKind::Complete: return "Complete";
    case EventKind::RateSubmitted: return "RateSubmitted";
    case EventKind::RatingWindowClosed: return "RatingWindowClosed";
    case EventKind::Cancel: return "Cancel";
  }
  return "?";
}

std::optional<RequestStatus> parse_request_status(std::string_view s) noexcept {
  for (auto v : {RequestStatus::Open, RequestStatus::Engaged, RequestStatus::Closed,
                 RequestStatus::Cancelled, RequestStatus::Expired}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<EngagementState> parse_engagement_state(std::string_view s) noexcept {
  for (auto v : kAllStates) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<EventKind> parse_event_kind(std::string_view s) noexcept {
  for (auto v : kAllEventKinds) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidEmail: return "InvalidEmail";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::InvalidGeoPoint: return "InvalidGeoPoint";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::InvalidGrade: return "InvalidGrade";
    case ErrorCode::NoLocation: return "NoLocation";
    case ErrorCode::TargetIsOrganization: return "TargetIsOrganization";
    case ErrorCode::Unauthenticated: return "Unauthenticated";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::NotOwner: return "NotOwner";
    case ErrorCode::NotAParty: return "NotAParty";
    case ErrorCode::NotAnOrganization: return "NotAnOrganization";
    case ErrorCode::NotAuthorized: return "NotAuthorized";
    case ErrorCode::NotATarget: return "NotATarget";
    case ErrorCode::UserNotFound: return "UserNotFound";
    case ErrorCode::TargetNotFound: return "TargetNotFound";
    case ErrorCode::RequestNotFound: return "RequestNotFound";
    case ErrorCode::EngagementNotFound: return "EngagementNotFound";
    case ErrorCode::EventNotFound: return "EventNotFound";
    case ErrorCode::DuplicateEmail: return "DuplicateEmail";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::TerminalState: return "TerminalState";
    case ErrorCode::AlreadyTerminal: return "AlreadyTerminal";
    case ErrorCode::AlreadyEngaged: return "AlreadyEngaged";
    case ErrorCode::AlreadyIssued: return "AlreadyIssued";
    case ErrorCode::AlreadyRated: return "AlreadyRated";
    case ErrorCode::AlreadyResolved: return "AlreadyResolved";
    case ErrorCode::WrongState: return "WrongState";
    case ErrorCode::NotCompleted: return "NotCompleted";
    case ErrorCode::LockedOut: return "LockedOut";
    case ErrorCode::TooFewWords: return "TooFewWords";
    case ErrorCode::MalformedWord: return "MalformedWord";
    case ErrorCode::CorruptStore: return "CorruptStore";
  }
  return "Unknown";
}

}  // namespace f1
