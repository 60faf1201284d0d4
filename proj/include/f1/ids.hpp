#pragma once

#include <compare>
#include <functional>
#include <string>

namespace f1 {

/// Opaque identifier, tagged so a UserId can't be passed where a RequestId is
/// expected.
template <typename Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;
};

using UserId = Id<struct UserTag>;
using RequestId = Id<struct RequestTag>;
using EngagementId = Id<struct EngagementTag>;
using RecordId = Id<struct RecordTag>;
using EventId = Id<struct EventTag>;
using NotificationId = Id<struct NotificationTag>;

}  // namespace f1

template <typename Tag>
struct std::hash<f1::Id<Tag>> {
  std::size_t operator()(const f1::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
