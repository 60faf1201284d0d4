#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "f1/domain.hpp"

namespace f1::trust {

inline constexpr std::size_t kMaxBadgeNoteLength = 280;

struct VerificationBadge {
  UserId user_id;
  UserId org_id;
  std::string org_name;
  Timestamp confirmed_at;
  std::optional<std::string> note;

  friend bool operator==(const VerificationBadge&, const VerificationBadge&) = default;
};

class LikertGrade {
 public:
  /// Throws InvalidGrade outside 1..5.
  explicit LikertGrade(int value);
  int value() const noexcept { return value_; }
  friend bool operator==(const LikertGrade&, const LikertGrade&) = default;
  friend auto operator<=>(const LikertGrade&, const LikertGrade&) = default;

 private:
  int value_;
};

enum class GradeColor { Red, Gray, Green };

std::string_view to_string(GradeColor c) noexcept;

/// 1,2 red; 3 gray; 4,5 green.
GradeColor grade_color(LikertGrade grade) noexcept;

/// Signed contribution of a grade to the reputation sum: 1..5 -> -2..+2.
int grade_weight(LikertGrade grade) noexcept;

struct ReputationRecord {
  RecordId id;
  EngagementId engagement_id;
  UserId rater_id;
  UserId ratee_id;
  LikertGrade grade{3};
  Timestamp created_at;

  friend bool operator==(const ReputationRecord&, const ReputationRecord&) = default;
};

/// Finds the badge for (org, target) in `existing` or creates one. Throws
/// NotAnOrganization / TargetIsOrganization / InvalidField (note too long).
VerificationBadge confirm_profile(const UserAccount& org, const UserAccount& target,
                                  std::optional<std::string> note, Timestamp at,
                                  std::span<const VerificationBadge> existing);

/// Badges of one user, newest first.
std::vector<VerificationBadge> badges_newest_first(std::span<const VerificationBadge> badges,
                                                   const UserId& user);

struct RatingOutcome {
  ReputationRecord record;
  Engagement engagement;
};

/// Records one party's grade for the other and fires RateSubmitted. Throws
/// NotCompleted, NotAParty or AlreadyRated.
RatingOutcome submit_rating(const Engagement& engagement, const FavorRequest& request,
                            std::span<const ReputationRecord> engagement_records,
                            const UserId& rater, LikertGrade grade, RecordId id, Timestamp at);

struct ReputationSummary {
  long long sum = 0;
  std::array<std::size_t, 5> counts{};  // counts[g - 1] for grade g

  friend bool operator==(const ReputationSummary&, const ReputationSummary&) = default;
};

ReputationSummary reputation_sum(std::span<const ReputationRecord> records, const UserId& user);

}  // namespace f1::trust
