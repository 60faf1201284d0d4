#include "f1/admin/seed.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "f1/challenge.hpp"
#include "f1/geo.hpp"

namespace f1::admin {

namespace {

constexpr const char* kFirstNames[] = {
    "Anna",  "Piotr",  "Maria", "Krzysztof", "Katarzyna", "Andrzej", "Małgorzata", "Tomasz",
    "Agnieszka", "Jan", "Barbara", "Paweł", "Ewa", "Marek", "Zofia", "Michał",
    "Jadwiga", "Stanisław", "Helena", "Józef"};

constexpr const char* kFavorTitles[] = {
    "Zakupy spożywcze",          "Wizyta w aptece",        "Pomoc przy komputerze",
    "Spacer z psem",             "Sprzątanie grobu",       "Odprowadzenie do lekarza",
    "Wymiana żarówki",           "Pomoc z formularzem",    "Odbiór paczki",
    "Korepetycje z matematyki",  "Wspólne czytanie",       "Naprawa roweru"};

std::string numbered(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%08zu", prefix, n);
  return buf;
}

double unit(challenge::Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

GeoPoint scatter(challenge::Rng& rng, const SeedOptions& o) {
  const double meters_per_degree = geo::kEarthRadiusMeters * std::numbers::pi / 180.0;
  const double dlat = (2.0 * unit(rng) - 1.0) * o.spread_m / meters_per_degree;
  const double dlon = (2.0 * unit(rng) - 1.0) * o.spread_m /
                      (meters_per_degree * std::cos(o.center_latitude * std::numbers::pi / 180.0));
  double lon = o.center_longitude + dlon;
  if (lon >= 180.0) lon -= 360.0;
  if (lon < -180.0) lon += 360.0;
  return GeoPoint::make(std::clamp(o.center_latitude + dlat, -90.0, 90.0), lon);
}

}  // namespace

StoreSnapshot generate_population(const SeedOptions& o) {
  challenge::Rng rng(o.seed);
  StoreSnapshot s;
  // Requests need someone to post them.
  if (o.users == 0) return s;

  std::vector<UserId> ids;
  for (std::size_t i = 1; i <= o.users; ++i) {
    const char* name = kFirstNames[challenge::uniform_below(rng, std::size(kFirstNames))];
    const auto home = scatter(rng, o);
    char email[64];
    std::snprintf(email, sizeof email, "user%zu@example.pl", i);
    auto user = make_user(UserId{numbered("usr_", i)}, email,
                          std::string(name) + " " + std::to_string(i), home, o.now, false);
    ids.push_back(user.id);
    s.users.emplace(user.id, std::move(user));
  }

  for (std::size_t i = 1; i <= o.requests; ++i) {
    const auto& requester = s.users.at(ids[challenge::uniform_below(rng, ids.size())]);
    const char* title = kFavorTitles[challenge::uniform_below(rng, std::size(kFavorTitles))];
    const auto where = scatter(rng, o);
    const auto lifetime = std::chrono::hours{24 + 24 * static_cast<int>(challenge::uniform_below(rng, 14))};
    auto r = make_request(RequestId{numbered("req_", i)}, requester, title,
                          "Prośba wygenerowana do testów.", where, o.now, o.now + lifetime);
    s.requests.emplace(r.id, std::move(r));
  }
  return s;
}

StoreSnapshot seed_store(StoreBackend& backend, const SeedOptions& options) {
  if (!options.force && !backend.load().empty()) {
    fail(ErrorCode::WrongState, "store is not empty; pass --force to overwrite");
  }
  auto snapshot = generate_population(options);
  CollectionSet all;
  all.set();
  backend.save(snapshot, all);
  return snapshot;
}

}  // namespace f1::admin
