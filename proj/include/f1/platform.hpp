#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "f1/challenge.hpp"
#include "f1/domain.hpp"
#include "f1/emergency.hpp"
#include "f1/geo.hpp"
#include "f1/store.hpp"
#include "f1/trust.hpp"

namespace f1 {

struct PlatformConfig {
  double default_nearby_radius_m = geo::kDefaultNearbyRadiusMeters;
  double sos_radius_m = emergency::kDefaultSosRadiusMeters;
  int rating_window_days = 14;
  Millis session_ttl = std::chrono::hours{24};
  /// Keyword sampling seed; entropy-seeded when unset.
  std::optional<std::uint64_t> rng_seed;
};

struct Profile {
  UserAccount user;
  std::vector<trust::VerificationBadge> badges;
  trust::ReputationSummary reputation;
};

struct SosOutcome {
  emergency::EmergencyEvent event;
  bool created = false;
  std::size_t alerted = 0;  // outbox rows for this event
};

/// The service core: owns the live snapshot, runs every domain operation
/// under one writer lock and persists the touched collections before
/// returning. Readers share the lock.
class Platform {
 public:
  Platform(StoreBackend& backend, const Clock& clock, challenge::Wordlist wordlist,
           PlatformConfig config = {});

  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  const PlatformConfig& config() const noexcept { return config_; }
  const Clock& clock() const noexcept { return clock_; }

  // accounts and sessions
  UserAccount create_user(std::string_view email, std::string_view display_name,
                          std::optional<GeoPoint> home_location);
  UserAccount create_organization(std::string_view email, std::string_view display_name);
  Session create_session(std::string_view email);
  /// Throws Unauthenticated for unknown or expired tokens.
  UserId authenticate(std::string_view token) const;
  UserAccount user(const UserId& id) const;

  // trust
  trust::VerificationBadge confirm_profile(const UserId& org, const UserId& target,
                                           std::optional<std::string> note);
  std::vector<trust::VerificationBadge> badge_details(const UserId& user) const;
  trust::ReputationSummary reputation_sum(const UserId& user) const;
  Profile profile(const UserId& user) const;

  // requests
  FavorRequest post_request(const UserId& actor, std::string_view title,
                            std::string_view description, GeoPoint location, Timestamp expires_at);
  FavorRequest request(const RequestId& id) const;
  std::vector<FavorRequest> requests_of(const UserId& requester) const;
  std::vector<geo::NearbyResult> nearby(const GeoPoint& center,
                                        std::optional<double> radius_m) const;
  FavorRequest cancel_request(const UserId& actor, const RequestId& id);
  std::size_t expire_requests(Timestamp now);

  // engagements
  Engagement accept(const UserId& volunteer, const RequestId& request_id);
  /// Party-only view.
  Engagement engagement(const UserId& actor, const EngagementId& id) const;
  /// Issues the pair on first call; later calls by a party return it.
  ChallengeKeyPair keys(const UserId& actor, const EngagementId& id);
  challenge::VerifyOutcome verify(const UserId& actor, const EngagementId& id,
                                  challenge::SpeakerRole role, std::string_view spoken);
  Engagement complete(const UserId& actor, const EngagementId& id);
  trust::ReputationRecord rate(const UserId& actor, const EngagementId& id,
                               trust::LikertGrade grade);
  Engagement cancel_engagement(const UserId& actor, const EngagementId& id);
  /// Fires RatingWindowClosed for Completed engagements past the window.
  std::size_t close_rating_windows(Timestamp now);

  // emergencies
  SosOutcome raise_sos(const UserId& actor, std::optional<GeoPoint> location);
  std::vector<emergency::DispatchTarget> dispatch_targets(const EventId& id,
                                                          std::optional<double> radius_m) const;
  emergency::EmergencyEvent acknowledge(const UserId& actor, const EventId& id);
  emergency::EmergencyEvent resolve_sos(const UserId& actor, const EventId& id, bool is_admin);
  emergency::EmergencyEvent event(const EventId& id) const;
  std::vector<emergency::Notification> drain_outbox(std::size_t max);

  /// Expiry and rating-window sweep in one call.
  void sweep();

  StoreSnapshot snapshot() const;

 private:
  template <typename IdT>
  IdT next_id(const char* prefix);
  void reseed_counters();
  void commit(CollectionSet dirty);

  const UserAccount& user_locked(const UserId& id) const;
  FavorRequest& request_locked(const RequestId& id);
  Engagement& engagement_locked(const EngagementId& id);
  const Engagement& engagement_locked(const EngagementId& id) const;
  emergency::EmergencyEvent& event_locked(const EventId& id);
  const FavorRequest& request_of(const Engagement& e) const;
  void require_party(const UserId& actor, const Engagement& e) const;
  bool is_verified_locked(const UserId& id) const;
  std::size_t close_rating_windows_locked(Timestamp now, CollectionSet& dirty);
  std::size_t expire_requests_locked(Timestamp now, CollectionSet& dirty);

  StoreBackend& backend_;
  const Clock& clock_;
  challenge::Wordlist wordlist_;
  PlatformConfig config_;

  mutable std::shared_mutex mutex_;
  StoreSnapshot state_;
  std::map<std::string, std::uint64_t> counters_;
  challenge::Rng rng_;
};

}  // namespace f1
