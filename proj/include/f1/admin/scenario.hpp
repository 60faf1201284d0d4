#pragma once

// Scenario scripts: a plain-text list of API calls with expected statuses.
//
//   # comment
//   POST /api/users {"email":"anna@example.pl","display_name":"Anna"} -> 201 anna:=/user/id
//   POST /api/requests @anna_token {...} -> 201 req:=/request/id /request/status==Open
//   GET /api/engagements/${eng} @bob_token -> 200 /engagement/state==Closed
//
// Each line is  METHOD PATH [@TOKEN_VAR] [JSON_BODY] -> STATUS [ITEM...]
// where an ITEM is either `VAR:=/json/pointer` (capture a response value) or
// `/json/pointer==VALUE` (assert; VALUE is compared as JSON when it parses,
// otherwise as a string). `${VAR}` is substituted before the call.
//
// Predefined variables: NOW and TOMORROW (ISO timestamps taken when the runner
// starts) and RUN (a per-run hex tag for unique emails).

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace httplib {
class Client;
}

namespace f1::admin {

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t line, const std::string& why)
      : std::runtime_error("line " + std::to_string(line) + ": " + why), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ScenarioStep {
  std::size_t line_no = 0;
  std::string method;
  std::string path;
  std::string token_var;  // empty: no Authorization header
  std::string body;       // raw JSON text, may contain ${VAR}
  int expected_status = 0;
  std::vector<std::pair<std::string, std::string>> captures;  // var, pointer
  std::vector<std::pair<std::string, std::string>> checks;    // pointer, value
  std::string source;
};

struct ScenarioScript {
  std::vector<ScenarioStep> steps;

  /// Parses the whole script; throws ScriptError before anything runs.
  static ScenarioScript parse(std::string_view text);
};

struct StepResult {
  bool passed = false;
  bool transport_error = false;
  int status = 0;
  std::string detail;
  nlohmann::json body;
};

class ScenarioRunner {
 public:
  explicit ScenarioRunner(const std::string& base_url);
  ~ScenarioRunner();

  StepResult run(const ScenarioStep& step);

  /// Points later steps at another server; variables are kept.
  void reconnect(const std::string& base_url);

  std::map<std::string, std::string>& variables() noexcept { return vars_; }
  const std::map<std::string, std::string>& variables() const noexcept { return vars_; }

 private:
  std::string substitute(const std::string& text, std::size_t line) const;

  std::unique_ptr<httplib::Client> client_;
  std::map<std::string, std::string> vars_;
};

enum class ScenarioExit { Passed = 0, Failed = 1, Unreachable = 2 };

/// Runs every step in order and writes one PASS/FAIL line per step to `out`.
/// Stops at the first transport failure.
ScenarioExit run_scenario(const ScenarioScript& script, const std::string& base_url,
                          std::ostream& out);

}  // namespace f1::admin
