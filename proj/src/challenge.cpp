#include "f1/challenge.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace f1::challenge {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

icu::UnicodeString unicode_trim(const icu::UnicodeString& s) {
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && u_isUWhiteSpace(s.char32At(begin))) begin = s.moveIndex32(begin, 1);
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  return icu::UnicodeString(s, begin, end - begin);
}

}  // namespace

std::string normalize_word(std::string_view raw) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  u = unicode_trim(u);
  u.toLower(icu::Locale::getRoot());
  UErrorCode status = U_ZERO_ERROR;
  auto composed = nfc().normalize(u, status);
  if (U_FAILURE(status)) composed = u;
  std::string out;
  composed.toUTF8String(out);
  return out;
}

bool is_valid_word(std::string_view normalized) {
  const auto u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(normalized.data(), static_cast<int32_t>(normalized.size())));
  const auto n = static_cast<std::size_t>(u.countChar32());
  if (n < kMinWordLength || n > kMaxWordLength) return false;
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    if (!u_isalpha(u.char32At(i))) return false;
  }
  return true;
}

bool Wordlist::contains(std::string_view word) const {
  return std::find(words_.begin(), words_.end(), word) != words_.end();
}

WordlistReport inspect_wordlist(std::string_view text) {
  WordlistReport report;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto word = normalize_word(trimmed);
    if (!is_valid_word(word)) {
      report.rejects.push_back({line_no, std::string(trimmed)});
      continue;
    }
    if (seen.insert(word).second) {
      report.words.push_back(std::move(word));
    } else {
      ++report.duplicates;
    }
  }
  return report;
}

Wordlist load_wordlist(std::string_view text, std::string source_name) {
  auto report = inspect_wordlist(text);
  if (!report.rejects.empty()) {
    throw MalformedWord(report.rejects.front().line, report.rejects.front().raw);
  }
  if (report.words.size() < kMinWords) {
    fail(ErrorCode::TooFewWords, "wordlist has " + std::to_string(report.words.size()) +
                                     " usable words, need at least " + std::to_string(kMinWords));
  }
  Wordlist w;
  w.words_ = std::move(report.words);
  w.source_name_ = std::move(source_name);
  return w;
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % bound;
}

std::pair<std::string, std::string> draw_pair(const Wordlist& wordlist, Rng& rng) {
  const auto n = wordlist.size();
  const auto first = uniform_below(rng, n);
  auto second = uniform_below(rng, n - 1);
  if (second >= first) ++second;
  return {wordlist.words()[first], wordlist.words()[second]};
}

IssueOutcome issue_keywords(const Engagement& engagement, const Wordlist& wordlist, Rng& rng,
                            Timestamp at) {
  if (engagement.key_pair) fail(ErrorCode::AlreadyIssued, "keywords already issued");
  if (engagement.state != EngagementState::Accepted) {
    fail(ErrorCode::WrongState, "keywords can only be issued in Accepted, engagement is " +
                                    std::string(to_string(engagement.state)));
  }
  auto [volunteer_word, requester_word] = draw_pair(wordlist, rng);
  ChallengeKeyPair pair{engagement.id, std::move(volunteer_word), std::move(requester_word), at};
  auto next = transition(engagement, event::IssueKeys{pair}, at);
  return IssueOutcome{std::move(pair), std::move(next)};
}

IssueOutcome issue_keywords(const Engagement& engagement, const Wordlist& wordlist,
                            std::optional<std::uint64_t> rng_seed, Timestamp at) {
  Rng rng(rng_seed ? *rng_seed : (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^
                                     std::random_device{}());
  return issue_keywords(engagement, wordlist, rng, at);
}

std::string_view to_string(SpeakerRole r) noexcept {
  return r == SpeakerRole::Volunteer ? "Volunteer" : "Requester";
}

std::optional<SpeakerRole> parse_speaker_role(std::string_view s) noexcept {
  const auto lower = ascii_lower(s);
  if (lower == "volunteer") return SpeakerRole::Volunteer;
  if (lower == "requester") return SpeakerRole::Requester;
  return std::nullopt;
}

VerifyOutcome verify_keyword(const Engagement& engagement, SpeakerRole role,
                             std::string_view spoken, Timestamp at) {
  if (engagement.state != EngagementState::KeysIssued || !engagement.key_pair) {
    fail(ErrorCode::WrongState, "verification needs KeysIssued, engagement is " +
                                    std::string(to_string(engagement.state)));
  }
  if (engagement.locked_out) {
    fail(ErrorCode::LockedOut, "too many failed attempts; engagement flagged for review");
  }
  const auto& expected = role == SpeakerRole::Volunteer ? engagement.key_pair->volunteer_word
                                                        : engagement.key_pair->requester_word;
  VerifyOutcome out{normalize_word(spoken) == expected, engagement};
  auto& e = out.engagement;
  if (!out.ok) {
    ++e.failed_attempts;
    if (e.failed_attempts >= kMaxFailedAttempts) e.locked_out = true;
    ++e.version;
    return out;
  }
  e.failed_attempts = 0;
  if (role == SpeakerRole::Volunteer) {
    e = transition(e, event::VerifyArrival{}, at);
  } else {
    e.requester_verified = true;
    ++e.version;
  }
  return out;
}

}  // namespace f1::challenge
