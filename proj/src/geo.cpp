#include "f1/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace f1::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// Slack against rounding in the trig round-trips; the box may over-include.
constexpr double kPadSlackDegrees = 1e-9;

}  // namespace

RadiusMeters::RadiusMeters(double meters) : meters_(meters) {
  if (!std::isfinite(meters) || meters <= 0.0 || meters > kMaxRadiusMeters) {
    fail(ErrorCode::InvalidRadius, "radius must be in (0, 100000] meters");
  }
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept {
  const double lat1 = a.latitude() * kDegToRad;
  const double lat2 = b.latitude() * kDegToRad;
  const double dlat = (b.latitude() - a.latitude()) * kDegToRad;
  const double dlon = (b.longitude() - a.longitude()) * kDegToRad;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = std::min(1.0, s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2);
  return 2.0 * kEarthRadiusMeters * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

bool BoundingBox::contains(const GeoPoint& p) const noexcept {
  if (p.latitude() < min_latitude || p.latitude() > max_latitude) return false;
  if (wraps_longitude) return p.longitude() >= min_longitude || p.longitude() <= max_longitude;
  return p.longitude() >= min_longitude && p.longitude() <= max_longitude;
}

BoundingBox prefilter_bbox(const GeoPoint& center, RadiusMeters radius) noexcept {
  const double angular = radius.value() / kEarthRadiusMeters;  // radians
  const double lat_pad = angular * kRadToDeg + kPadSlackDegrees;

  BoundingBox box{};
  box.min_latitude = std::max(-90.0, center.latitude() - lat_pad);
  box.max_latitude = std::min(90.0, center.latitude() + lat_pad);

  // A cap touching a pole spans every meridian.
  if (center.latitude() + lat_pad >= 90.0 || center.latitude() - lat_pad <= -90.0) {
    box.min_longitude = -180.0;
    box.max_longitude = 180.0;
    return box;
  }

  // Widest meridian offset of a spherical cap: asin(sin(d) / cos(lat)).
  const double ratio = std::sin(angular) / std::cos(center.latitude() * kDegToRad);
  if (ratio >= 1.0) {
    box.min_longitude = -180.0;
    box.max_longitude = 180.0;
    return box;
  }
  const double lon_pad = std::asin(ratio) * kRadToDeg + kPadSlackDegrees;
  if (lon_pad >= 180.0) {
    box.min_longitude = -180.0;
    box.max_longitude = 180.0;
    return box;
  }

  double lo = center.longitude() - lon_pad;
  double hi = center.longitude() + lon_pad;
  if (lo < -180.0) {
    box.wraps_longitude = true;
    lo += 360.0;
  }
  if (hi >= 180.0) {
    box.wraps_longitude = true;
    hi -= 360.0;
  }
  box.min_longitude = lo;
  box.max_longitude = hi;
  return box;
}

std::vector<NearbyResult> nearby_requests(std::span<const FavorRequest> requests,
                                          const GeoPoint& center, RadiusMeters radius,
                                          Timestamp now, const RequesterLookup& requester) {
  const auto box = prefilter_bbox(center, radius);

  struct Hit {
    const FavorRequest* request;
    double distance;
  };
  std::vector<Hit> hits;
  for (const auto& r : requests) {
    if (r.status != RequestStatus::Open || r.expires_at <= now) continue;
    if (!box.contains(r.location)) continue;
    const double d = haversine_distance(center, r.location);
    if (d <= radius.value()) hits.push_back({&r, d});
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.request->created_at != b.request->created_at) {
      return a.request->created_at < b.request->created_at;
    }
    return a.request->id < b.request->id;
  });

  std::vector<NearbyResult> out;
  out.reserve(hits.size());
  for (const auto& h : hits) {
    out.push_back(NearbyResult{h.request->id, h.distance, h.request->title,
                               h.request->description, h.request->location,
                               h.request->created_at, requester(h.request->requester_id)});
  }
  return out;
}

}  // namespace f1::geo
