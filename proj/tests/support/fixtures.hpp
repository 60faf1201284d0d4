#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "f1/challenge.hpp"
#include "f1/domain.hpp"

namespace f1::test {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) {
  return std::string(F1_FIXTURES_DIR) + "/" + name;
}

inline const challenge::Wordlist& words150() {
  static const auto w = challenge::load_wordlist(read_text(fixture("wordlist_150.txt")), "wordlist_150.txt");
  return w;
}

inline Timestamp at(const char* iso) {
  auto t = parse_timestamp(iso);
  if (!t) throw std::runtime_error(std::string("bad timestamp ") + iso);
  return *t;
}

inline UserAccount person(const std::string& id, std::optional<GeoPoint> home = std::nullopt) {
  return make_user(UserId{id}, id + "@example.pl", id, home, at("2026-01-01T00:00:00Z"), false);
}

inline UserAccount organization(const std::string& id) {
  return make_user(UserId{id}, id + "@example.pl", id, std::nullopt, at("2026-01-01T00:00:00Z"), true);
}

}  // namespace f1::test
