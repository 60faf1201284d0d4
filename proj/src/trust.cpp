#include "f1/trust.hpp"

#include <algorithm>

namespace f1::trust {

LikertGrade::LikertGrade(int value) : value_(value) {
  if (value < 1 || value > 5) fail(ErrorCode::InvalidGrade, "grade must be in 1..5");
}

std::string_view to_string(GradeColor c) noexcept {
  switch (c) {
    case GradeColor::Red: return "red";
    case GradeColor::Gray: return "gray";
    case GradeColor::Green: return "green";
  }
  return "?";
}

GradeColor grade_color(LikertGrade grade) noexcept {
  if (grade.value() <= 2) return GradeColor::Red;
  if (grade.value() == 3) return GradeColor::Gray;
  return GradeColor::Green;
}

int grade_weight(LikertGrade grade) noexcept { return grade.value() - 3; }

VerificationBadge confirm_profile(const UserAccount& org, const UserAccount& target,
                                  std::optional<std::string> note, Timestamp at,
                                  std::span<const VerificationBadge> existing) {
  if (!org.is_organization) fail(ErrorCode::NotAnOrganization, "only organizations confirm profiles");
  if (target.is_organization) {
    fail(ErrorCode::TargetIsOrganization, "organizations cannot be confirmed");
  }
  for (const auto& b : existing) {
    if (b.user_id == target.id && b.org_id == org.id) return b;
  }
  if (note && utf8_length(*note) > kMaxBadgeNoteLength) {
    fail(ErrorCode::InvalidField, "note must have at most 280 characters");
  }
  return VerificationBadge{target.id, org.id, org.display_name, at, std::move(note)};
}

std::vector<VerificationBadge> badges_newest_first(std::span<const VerificationBadge> badges,
                                                   const UserId& user) {
  std::vector<VerificationBadge> out;
  for (const auto& b : badges) {
    if (b.user_id == user) out.push_back(b);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.confirmed_at != b.confirmed_at) return a.confirmed_at > b.confirmed_at;
    return a.org_id < b.org_id;
  });
  return out;
}

RatingOutcome submit_rating(const Engagement& engagement, const FavorRequest& request,
                            std::span<const ReputationRecord> engagement_records,
                            const UserId& rater, LikertGrade grade, RecordId id, Timestamp at) {
  if (engagement.state != EngagementState::Completed) {
    fail(ErrorCode::NotCompleted, "engagement is " + std::string(to_string(engagement.state)));
  }
  UserId ratee;
  if (rater == engagement.volunteer_id) {
    ratee = request.requester_id;
  } else if (rater == request.requester_id) {
    ratee = engagement.volunteer_id;
  } else {
    fail(ErrorCode::NotAParty, "rater is not a party of the engagement");
  }
  for (const auto& r : engagement_records) {
    if (r.engagement_id == engagement.id && r.rater_id == rater) {
      fail(ErrorCode::AlreadyRated, "this party already rated the engagement");
    }
  }
  ReputationRecord record{std::move(id), engagement.id, rater, std::move(ratee), grade, at};
  auto next = transition(engagement, event::RateSubmitted{record.id}, at);
  return RatingOutcome{std::move(record), std::move(next)};
}

ReputationSummary reputation_sum(std::span<const ReputationRecord> records, const UserId& user) {
  ReputationSummary s;
  for (const auto& r : records) {
    if (r.ratee_id != user) continue;
    s.sum += grade_weight(r.grade);
    ++s.counts[static_cast<std::size_t>(r.grade.value() - 1)];
  }
  return s;
}

}  // namespace f1::trust
