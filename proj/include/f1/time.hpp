#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace f1 {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Millis = std::chrono::milliseconds;

/// "2026-10-16T08:30:00.000Z"
std::string format_timestamp(Timestamp t);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z". Returns nullopt on anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override {
    return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
  }
};

/// Test clock; only moves when told to.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start) : now_(start.time_since_epoch().count()) {}

  Timestamp now() const override { return Timestamp{Millis{now_.load()}}; }
  void set(Timestamp t) { now_.store(t.time_since_epoch().count()); }
  void advance(Millis d) { now_.fetch_add(d.count()); }

 private:
  std::atomic<Millis::rep> now_;
};

}  // namespace f1
