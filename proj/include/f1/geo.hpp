#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "f1/domain.hpp"

namespace f1::geo {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;
inline constexpr double kMaxRadiusMeters = 100'000.0;
inline constexpr double kDefaultNearbyRadiusMeters = 5'000.0;

class RadiusMeters {
 public:
  /// Throws InvalidRadius unless 0 < meters <= 100 km.
  explicit RadiusMeters(double meters);
  double value() const noexcept { return meters_; }

 private:
  double meters_;
};

/// Great-circle distance in meters (haversine, spherical Earth).
double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Candidate prefilter. When wraps_longitude is set the admitted longitudes are
/// [min_longitude, 180) and [-180, max_longitude].
struct BoundingBox {
  double min_latitude;
  double max_latitude;
  double min_longitude;
  double max_longitude;
  bool wraps_longitude = false;

  bool full_longitude() const noexcept {
    return !wraps_longitude && min_longitude <= -180.0 && max_longitude >= 180.0;
  }
  bool contains(const GeoPoint& p) const noexcept;
};

/// Sound bounding box: every point within `radius` of `center` is inside.
BoundingBox prefilter_bbox(const GeoPoint& center, RadiusMeters radius) noexcept;

struct RequesterSummary {
  UserId id;
  std::string display_name;
  bool verified = false;

  friend bool operator==(const RequesterSummary&, const RequesterSummary&) = default;
};

struct NearbyResult {
  RequestId request_id;
  double distance = 0.0;
  std::string title;
  std::string description;
  GeoPoint location = GeoPoint::make(0, 0);
  Timestamp created_at;
  RequesterSummary requester;

  friend bool operator==(const NearbyResult&, const NearbyResult&) = default;
};

using RequesterLookup = std::function<RequesterSummary(const UserId&)>;

/// Open, unexpired requests within `radius`, nearest first; ties by older
/// created_at, then by id.
std::vector<NearbyResult> nearby_requests(std::span<const FavorRequest> requests,
                                          const GeoPoint& center, RadiusMeters radius,
                                          Timestamp now, const RequesterLookup& requester);

}  // namespace f1::geo
