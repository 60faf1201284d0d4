#include "f1/admin/scenario.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <ostream>

#include "f1/domain.hpp"

namespace f1::admin {

using nlohmann::json;

namespace {

constexpr std::string_view kArrow = " -> ";

bool known_method(std::string_view m) {
  return m == "GET" || m == "POST" || m == "PUT" || m == "PATCH" || m == "DELETE";
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

bool valid_pointer(const std::string& p) {
  try {
    json::json_pointer ptr(p);
    return true;
  } catch (const json::exception&) {
    return false;
  }
}

std::string value_text(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

ScenarioScript ScenarioScript::parse(std::string_view text) {
  ScenarioScript script;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    ScenarioStep step;
    step.line_no = line_no;
    step.source = std::string(line);

    const auto arrow = line.rfind(kArrow);
    if (arrow == std::string_view::npos) throw ScriptError(line_no, "missing ' -> STATUS'");
    auto call = trim(line.substr(0, arrow));
    const auto expect = split_ws(line.substr(arrow + kArrow.size()));

    const auto sp = call.find(' ');
    step.method = std::string(call.substr(0, sp));
    if (!known_method(step.method)) throw ScriptError(line_no, "unknown verb '" + step.method + "'");
    if (sp == std::string_view::npos) throw ScriptError(line_no, "missing path");
    call = trim(call.substr(sp + 1));

    const auto path_end = call.find(' ');
    step.path = std::string(call.substr(0, path_end));
    if (step.path.empty() || step.path.front() != '/') throw ScriptError(line_no, "path must start with '/'");
    call = path_end == std::string_view::npos ? std::string_view{} : trim(call.substr(path_end + 1));

    if (!call.empty() && call.front() == '@') {
      const auto tok_end = call.find(' ');
      step.token_var = std::string(call.substr(1, tok_end == std::string_view::npos ? call.npos : tok_end - 1));
      if (step.token_var.empty()) throw ScriptError(line_no, "empty token variable");
      call = tok_end == std::string_view::npos ? std::string_view{} : trim(call.substr(tok_end + 1));
    }
    step.body = std::string(call);
    if (!step.body.empty() && step.body.front() != '{') {
      throw ScriptError(line_no, "body must be a JSON object");
    }

    if (expect.empty()) throw ScriptError(line_no, "missing expected status");
    try {
      std::size_t used = 0;
      step.expected_status = std::stoi(expect[0], &used);
      if (used != expect[0].size()) throw std::invalid_argument(expect[0]);
    } catch (const std::exception&) {
      throw ScriptError(line_no, "bad status '" + expect[0] + "'");
    }
    for (std::size_t i = 1; i < expect.size(); ++i) {
      const auto& item = expect[i];
      if (const auto cap = item.find(":="); cap != std::string::npos) {
        step.captures.emplace_back(item.substr(0, cap), item.substr(cap + 2));
        if (step.captures.back().first.empty() || !valid_pointer(step.captures.back().second)) {
          throw ScriptError(line_no, "bad capture '" + item + "'");
        }
      } else if (const auto eq = item.find("=="); eq != std::string::npos) {
        step.checks.emplace_back(item.substr(0, eq), item.substr(eq + 2));
        if (!valid_pointer(step.checks.back().first)) throw ScriptError(line_no, "bad check '" + item + "'");
      } else {
        throw ScriptError(line_no, "unrecognized item '" + item + "'");
      }
    }
    script.steps.push_back(std::move(step));
  }
  return script;
}

ScenarioRunner::ScenarioRunner(const std::string& base_url) {
  reconnect(base_url);
  const auto now = std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
  vars_["NOW"] = format_timestamp(now);
  vars_["TOMORROW"] = format_timestamp(now + std::chrono::hours{24});
  char run[24];
  std::snprintf(run, sizeof run, "%llx", static_cast<unsigned long long>(now.time_since_epoch().count()));
  vars_["RUN"] = run;
}

void ScenarioRunner::reconnect(const std::string& base_url) {
  client_ = std::make_unique<httplib::Client>(base_url);
  client_->set_connection_timeout(2, 0);
  client_->set_read_timeout(15, 0);
}

ScenarioRunner::~ScenarioRunner() = default;

std::string ScenarioRunner::substitute(const std::string& text, std::size_t line) const {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto open = text.find("${", i);
    if (open == std::string::npos) {
      out.append(text, i);
      break;
    }
    out.append(text, i, open - i);
    const auto close = text.find('}', open);
    if (close == std::string::npos) throw ScriptError(line, "unterminated ${");
    const auto name = text.substr(open + 2, close - open - 2);
    const auto it = vars_.find(name);
    if (it == vars_.end()) throw ScriptError(line, "undefined variable " + name);
    out += it->second;
    i = close + 1;
  }
  return out;
}

StepResult ScenarioRunner::run(const ScenarioStep& step) {
  StepResult result;
  std::string path;
  std::string body;
  httplib::Headers headers;
  try {
    path = substitute(step.path, step.line_no);
    body = substitute(step.body, step.line_no);
    if (!step.token_var.empty()) {
      const auto it = vars_.find(step.token_var);
      if (it == vars_.end()) throw ScriptError(step.line_no, "undefined token variable " + step.token_var);
      headers.emplace("Authorization", "Bearer " + it->second);
    }
  } catch (const ScriptError& e) {
    result.detail = e.what();
    return result;
  }

  httplib::Result res;
  const char* type = "application/json";
  if (step.method == "GET") {
    res = client_->Get(path, headers);
  } else if (step.method == "POST") {
    res = client_->Post(path, headers, body, type);
  } else if (step.method == "PUT") {
    res = client_->Put(path, headers, body, type);
  } else if (step.method == "PATCH") {
    res = client_->Patch(path, headers, body, type);
  } else {
    res = client_->Delete(path, headers, body, type);
  }
  if (!res) {
    result.transport_error = true;
    result.detail = "transport error: " + httplib::to_string(res.error());
    return result;
  }

  result.status = res->status;
  result.body = json::parse(res->body, nullptr, false);
  if (res->status != step.expected_status) {
    result.detail = "expected " + std::to_string(step.expected_status) + ", got " +
                    std::to_string(res->status) + ": " + res->body;
    return result;
  }

  for (const auto& [pointer, want] : step.checks) {
    std::string expected;
    try {
      expected = substitute(want, step.line_no);
    } catch (const ScriptError& e) {
      result.detail = e.what();
      return result;
    }
    const json::json_pointer ptr(pointer);
    if (result.body.is_discarded() || !result.body.contains(ptr)) {
      result.detail = "response has no " + pointer;
      return result;
    }
    const auto& got = result.body.at(ptr);
    const auto want_json = json::parse(expected, nullptr, false);
    const bool match = want_json.is_discarded() ? value_text(got) == expected : got == want_json;
    if (!match) {
      result.detail = pointer + ": expected " + expected + ", got " + got.dump();
      return result;
    }
  }

  for (const auto& [var, pointer] : step.captures) {
    const json::json_pointer ptr(pointer);
    if (result.body.is_discarded() || !result.body.contains(ptr)) {
      result.detail = "cannot capture " + var + ": response has no " + pointer;
      return result;
    }
    vars_[var] = value_text(result.body.at(ptr));
  }
  result.passed = true;
  return result;
}

ScenarioExit run_scenario(const ScenarioScript& script, const std::string& base_url,
                          std::ostream& out) {
  ScenarioRunner runner(base_url);
  bool all_passed = true;
  for (const auto& step : script.steps) {
    const auto r = runner.run(step);
    if (r.transport_error) {
      out << "ABORT line " << step.line_no << ": " << r.detail << " (server at " << base_url
          << " unreachable; remaining steps not run)\n";
      return ScenarioExit::Unreachable;
    }
    if (r.passed) {
      out << "PASS line " << step.line_no << ": " << step.method << ' ' << step.path << " -> "
          << r.status << '\n';
    } else {
      all_passed = false;
      out << "FAIL line " << step.line_no << ": " << step.source << "\n     " << r.detail << '\n';
    }
  }
  return all_passed ? ScenarioExit::Passed : ScenarioExit::Failed;
}

}  // namespace f1::admin
