#pragma once

#include <cstdint>

#include "f1/domain.hpp"
#include "f1/store.hpp"

namespace f1::admin {

struct SeedOptions {
  std::size_t users = 10;
  std::size_t requests = 20;
  std::uint64_t seed = 42;
  double center_latitude = 52.2297;  // Warsaw
  double center_longitude = 21.0122;
  double spread_m = 5'000.0;
  Timestamp now = Timestamp{std::chrono::sys_days{std::chrono::year{2026} / 1 / 1}};
  bool force = false;
};

/// Deterministic synthetic population: the result is a pure function of the
/// options. Zero users yields an empty population.
StoreSnapshot generate_population(const SeedOptions& options);

/// Writes generate_population() to the backend. Refuses (WrongState) when the
/// store already holds data, unless options.force.
StoreSnapshot seed_store(StoreBackend& backend, const SeedOptions& options);

}  // namespace f1::admin
