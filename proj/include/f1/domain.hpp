#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "f1/error.hpp"
#include "f1/ids.hpp"
#include "f1/time.hpp"

namespace f1 {

// ---------------------------------------------------------------------------
// Text helpers shared by the validators.

std::string_view trim(std::string_view s);
std::string ascii_lower(std::string_view s);
/// Number of UTF-8 code points; invalid sequences count one per byte.
std::size_t utf8_length(std::string_view s);

// ---------------------------------------------------------------------------

class GeoPoint {
 public:
  /// Throws InvalidGeoPoint unless latitude is in [-90, 90] and longitude in
  /// [-180, 180), both finite.
  static GeoPoint make(double latitude, double longitude);
  static bool valid(double latitude, double longitude) noexcept;

  double latitude() const noexcept { return latitude_; }
  double longitude() const noexcept { return longitude_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  GeoPoint(double lat, double lon) : latitude_(lat), longitude_(lon) {}
  double latitude_ = 0.0;
  double longitude_ = 0.0;
};

/// Trimmed and lowercased form used for storage and uniqueness.
std::string normalize_email(std::string_view raw);

/// local "@" label ("." label)+ over the normalized input. Total.
bool validate_email(std::string_view raw);

struct UserAccount {
  UserId id;
  std::string email;
  std::string display_name;
  std::optional<GeoPoint> home_location;
  Timestamp created_at;
  bool is_organization = false;
  std::uint64_t version = 1;

  friend bool operator==(const UserAccount&, const UserAccount&) = default;
};

/// Validates and normalizes email and display name. Throws InvalidEmail /
/// InvalidField.
UserAccount make_user(UserId id, std::string_view email, std::string_view display_name,
                      std::optional<GeoPoint> home, Timestamp created_at,
                      bool is_organization);

enum class RequestStatus { Open, Engaged, Closed, Cancelled, Expired };

struct FavorRequest {
  RequestId id;
  UserId requester_id;
  std::string title;
  std::string description;
  GeoPoint location = GeoPoint::make(0, 0);
  Timestamp created_at;
  Timestamp expires_at;
  RequestStatus status = RequestStatus::Open;
  std::uint64_t version = 1;

  friend bool operator==(const FavorRequest&, const FavorRequest&) = default;
};

inline constexpr std::size_t kMaxTitleLength = 120;
inline constexpr std::size_t kMaxDescriptionLength = 2000;

/// Builds an Open request; throws InvalidField on title/description/expiry
/// violations and Forbidden if the requester is an organization.
FavorRequest make_request(RequestId id, const UserAccount& requester, std::string_view title,
                          std::string_view description, GeoPoint location,
                          Timestamp created_at, Timestamp expires_at);

// ---------------------------------------------------------------------------
// Engagement lifecycle

enum class EngagementState { Accepted, KeysIssued, Authenticated, Completed, Closed, Cancelled };

inline constexpr EngagementState kAllStates[] = {
    EngagementState::Accepted,  EngagementState::KeysIssued, EngagementState::Authenticated,
    EngagementState::Completed, EngagementState::Closed,     EngagementState::Cancelled};

bool is_terminal(EngagementState s) noexcept;

struct ChallengeKeyPair {
  EngagementId engagement_id;
  std::string volunteer_word;
  std::string requester_word;
  Timestamp issued_at;

  friend bool operator==(const ChallengeKeyPair&, const ChallengeKeyPair&) = default;
};

namespace event {
struct IssueKeys {
  ChallengeKeyPair key_pair;
};
/// Only a successful volunteer verification is delivered as an event.
struct VerifyArrival {};
struct Complete {};
struct RateSubmitted {
  RecordId record_id;
};
struct RatingWindowClosed {};
struct Cancel {};
}  // namespace event

using EngagementEvent = std::variant<event::IssueKeys, event::VerifyArrival, event::Complete,
                                     event::RateSubmitted, event::RatingWindowClosed,
                                     event::Cancel>;

enum class EventKind { IssueKeys, VerifyArrival, Complete, RateSubmitted, RatingWindowClosed, Cancel };

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::IssueKeys,     EventKind::VerifyArrival,      EventKind::Complete,
    EventKind::RateSubmitted, EventKind::RatingWindowClosed, EventKind::Cancel};

EventKind kind_of(const EngagementEvent& e) noexcept;

struct Engagement {
  EngagementId id;
  RequestId request_id;
  UserId volunteer_id;
  EngagementState state = EngagementState::Accepted;
  std::optional<ChallengeKeyPair> key_pair;
  std::vector<RecordId> ratings;
  std::map<EngagementState, Timestamp> timestamps;
  // Door-step verification bookkeeping.
  std::uint32_t failed_attempts = 0;
  bool locked_out = false;
  bool requester_verified = false;
  std::uint64_t version = 1;

  friend bool operator==(const Engagement&, const Engagement&) = default;
};

/// New engagement in Accepted. Throws NotAParty (volunteer is the requester),
/// Forbidden (organization) or AlreadyEngaged (request not Open).
Engagement make_engagement(EngagementId id, const FavorRequest& request,
                           const UserAccount& volunteer, Timestamp at);

/// Applies one event. Throws TerminalState from Closed/Cancelled and
/// IllegalTransition for every other pair outside the table.
Engagement transition(const Engagement& engagement, const EngagementEvent& event, Timestamp at);

struct CancelOutcome {
  FavorRequest request;
  std::optional<Engagement> engagement;
};

/// Owner cancels the request; an active engagement is cancelled with it.
CancelOutcome cancel_request(const FavorRequest& request, const Engagement* active,
                             const UserId& actor, Timestamp at);

/// Either party withdraws from the engagement; the request goes back to Open.
CancelOutcome cancel_engagement(const FavorRequest& request, const Engagement& engagement,
                                const UserId& actor, Timestamp at);

/// Only Open requests expire.
bool is_expirable(const FavorRequest& request, Timestamp now) noexcept;

// ---------------------------------------------------------------------------
// enum <-> text

std::string_view to_string(RequestStatus s) noexcept;
std::string_view to_string(EngagementState s) noexcept;
std::string_view to_string(EventKind k) noexcept;
std::optional<RequestStatus> parse_request_status(std::string_view s) noexcept;
std::optional<EngagementState> parse_engagement_state(std::string_view s) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view s) noexcept;

}  // namespace f1
