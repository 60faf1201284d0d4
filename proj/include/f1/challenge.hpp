#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "f1/domain.hpp"

namespace f1::challenge {

inline constexpr std::size_t kMinWords = 100;
inline constexpr std::size_t kMinWordLength = 3;
inline constexpr std::size_t kMaxWordLength = 12;
inline constexpr std::uint32_t kMaxFailedAttempts = 5;

/// Trim, lowercase and NFC-compose. Idempotent.
std::string normalize_word(std::string_view raw);

/// True iff `normalized` is 3-12 code points, all letters.
bool is_valid_word(std::string_view normalized);

class MalformedWord : public DomainError {
 public:
  MalformedWord(std::size_t line, const std::string& word)
      : DomainError(ErrorCode::MalformedWord,
                    "line " + std::to_string(line) + ": malformed word \"" + word + "\""),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class Wordlist {
 public:
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& source_name() const noexcept { return source_name_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool contains(std::string_view word) const;

 private:
  friend Wordlist load_wordlist(std::string_view text, std::string source_name);
  std::vector<std::string> words_;
  std::string source_name_;
};

struct WordlistReject {
  std::size_t line;
  std::string raw;
};

struct WordlistReport {
  std::vector<std::string> words;  // normalized, deduplicated, first-occurrence order
  std::vector<WordlistReject> rejects;
  std::size_t duplicates = 0;
};

/// Non-throwing scan used by the operator check tool.
WordlistReport inspect_wordlist(std::string_view text);

/// One word per line, '#' comments and blank lines ignored. Throws
/// MalformedWord on the first bad entry and TooFewWords below 100 entries.
Wordlist load_wordlist(std::string_view text, std::string source_name = {});

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; independent of the standard
/// library's distribution implementation so seeded draws are portable.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Two distinct words drawn uniformly without replacement.
std::pair<std::string, std::string> draw_pair(const Wordlist& wordlist, Rng& rng);

struct IssueOutcome {
  ChallengeKeyPair key_pair;
  Engagement engagement;
};

/// Throws AlreadyIssued if the engagement has a pair, WrongState unless
/// Accepted.
IssueOutcome issue_keywords(const Engagement& engagement, const Wordlist& wordlist, Rng& rng,
                            Timestamp at);
IssueOutcome issue_keywords(const Engagement& engagement, const Wordlist& wordlist,
                            std::optional<std::uint64_t> rng_seed, Timestamp at);

enum class SpeakerRole { Volunteer, Requester };

std::string_view to_string(SpeakerRole r) noexcept;
std::optional<SpeakerRole> parse_speaker_role(std::string_view s) noexcept;

struct VerifyOutcome {
  bool ok = false;
  Engagement engagement;
};

/// Compares the spoken word with the role's word. A volunteer match advances
/// the engagement to Authenticated. The fifth consecutive miss locks the
/// engagement; later calls throw LockedOut.
VerifyOutcome verify_keyword(const Engagement& engagement, SpeakerRole role,
                             std::string_view spoken, Timestamp at);

}  // namespace f1::challenge
