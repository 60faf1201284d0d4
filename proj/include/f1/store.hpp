#pragma once

#include <bitset>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "f1/domain.hpp"
#include "f1/emergency.hpp"
#include "f1/trust.hpp"

namespace f1 {

struct Session {
  std::string token;
  UserId user_id;
  Timestamp issued_at;
  Timestamp expires_at;

  friend bool operator==(const Session&, const Session&) = default;
};

enum class Collection : std::size_t {
  Users,
  Requests,
  Engagements,
  Badges,
  Ratings,
  Events,
  Outbox,
  Sessions,
};
inline constexpr std::size_t kCollectionCount = 8;
using CollectionSet = std::bitset<kCollectionCount>;

std::string_view collection_name(Collection c) noexcept;
inline constexpr Collection kAllCollections[] = {
    Collection::Users,   Collection::Requests, Collection::Engagements, Collection::Badges,
    Collection::Ratings, Collection::Events,   Collection::Outbox,      Collection::Sessions};

inline CollectionSet only(std::initializer_list<Collection> cs) {
  CollectionSet s;
  for (auto c : cs) s.set(static_cast<std::size_t>(c));
  return s;
}

/// Everything the platform persists. Maps keep iteration (and the on-disk
/// layout) ordered by id.
struct StoreSnapshot {
  std::map<UserId, UserAccount> users;
  std::map<RequestId, FavorRequest> requests;
  std::map<EngagementId, Engagement> engagements;
  std::vector<trust::VerificationBadge> badges;
  std::map<RecordId, trust::ReputationRecord> ratings;
  std::map<EventId, emergency::EmergencyEvent> events;
  std::map<NotificationId, emergency::Notification> outbox;
  std::map<std::string, Session> sessions;

  bool empty() const noexcept;
  friend bool operator==(const StoreSnapshot&, const StoreSnapshot&) = default;
};

/// Throws CorruptStore naming the collection and 1-based record position of
/// the first dangling reference.
void check_integrity(const StoreSnapshot& snapshot);

/// Storage contract shared by the file store and the in-memory test store.
class StoreBackend {
 public:
  virtual ~StoreBackend() = default;
  virtual StoreSnapshot load() = 0;
  /// Durably writes the named collections of `snapshot`.
  virtual void save(const StoreSnapshot& snapshot, CollectionSet dirty) = 0;
};

class MemoryBackend final : public StoreBackend {
 public:
  StoreSnapshot load() override {
    std::lock_guard lock(mutex_);
    return stored_;
  }
  void save(const StoreSnapshot& snapshot, CollectionSet dirty) override;
  std::size_t save_count() const {
    std::lock_guard lock(mutex_);
    return saves_;
  }

 private:
  mutable std::mutex mutex_;
  StoreSnapshot stored_;
  std::size_t saves_ = 0;
};

}  // namespace f1
