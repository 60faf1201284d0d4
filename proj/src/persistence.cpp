#include "f1/persistence.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "f1/json_codec.hpp"

namespace f1 {

namespace fs = std::filesystem;

namespace {

template <typename Map>
void append_values(std::string& out, const Map& map) {
  for (const auto& [k, v] : map) {
    out += json(v).dump();
    out += '\n';
  }
}

std::size_t record_count(const StoreSnapshot& s, Collection c) {
  switch (c) {
    case Collection::Users: return s.users.size();
    case Collection::Requests: return s.requests.size();
    case Collection::Engagements: return s.engagements.size();
    case Collection::Badges: return s.badges.size();
    case Collection::Ratings: return s.ratings.size();
    case Collection::Events: return s.events.size();
    case Collection::Outbox: return s.outbox.size();
    case Collection::Sessions: return s.sessions.size();
  }
  return 0;
}

void write_and_sync(const fs::path& tmp, const std::string& body) {
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + tmp.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < body.size()) {
    const auto n = ::write(fd, body.data() + written, body.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw std::runtime_error("write " + tmp.string() + ": " + std::strerror(err));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    throw std::runtime_error("fsync " + tmp.string() + ": " + std::strerror(errno));
  }
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

template <typename T, typename Insert>
void read_collection(const fs::path& file, Collection c, Insert insert) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CorruptStore(file.filename().string(), 0, "unreadable");
  const std::string name = file.filename().string();

  std::string line;
  if (!std::getline(in, line)) throw CorruptStore(name, 1, "missing header");
  std::size_t expected = 0;
  try {
    const auto header = json::parse(line);
    if (header.at("collection").get<std::string>() != collection_name(c)) {
      throw CorruptStore(name, 1, "header names another collection");
    }
    if (header.at("format").get<int>() != FileBackend::kFormatVersion) {
      throw CorruptStore(name, 1, "unsupported format version");
    }
    expected = header.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw CorruptStore(name, 1, std::string("bad header: ") + e.what());
  }

  std::size_t line_no = 1;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (in.eof()) throw CorruptStore(name, line_no, "record not newline-terminated");
    try {
      insert(json::parse(line).get<T>(), name, line_no);
    } catch (const json::exception& e) {
      throw CorruptStore(name, line_no, e.what());
    } catch (const CorruptStore&) {
      throw;
    } catch (const DomainError& e) {
      throw CorruptStore(name, line_no, e.what());
    }
    ++seen;
  }
  if (seen != expected) {
    throw CorruptStore(name, line_no, "expected " + std::to_string(expected) + " records, found " +
                                          std::to_string(seen));
  }
}

template <typename Map>
auto keyed_insert(Map& map) {
  return [&map](typename Map::mapped_type v, const std::string& file, std::size_t line) {
    auto key = v.id;
    if (!map.emplace(std::move(key), std::move(v)).second) throw CorruptStore(file, line, "duplicate id");
  };
}

}  // namespace

std::string encode_collection(const StoreSnapshot& s, Collection c) {
  std::string out = json{{"collection", std::string(collection_name(c))},
                         {"format", FileBackend::kFormatVersion},
                         {"count", record_count(s, c)}}
                        .dump();
  out += '\n';
  switch (c) {
    case Collection::Users: append_values(out, s.users); break;
    case Collection::Requests: append_values(out, s.requests); break;
    case Collection::Engagements: append_values(out, s.engagements); break;
    case Collection::Badges:
      for (const auto& b : s.badges) out += json(b).dump() + '\n';
      break;
    case Collection::Ratings: append_values(out, s.ratings); break;
    case Collection::Events: append_values(out, s.events); break;
    case Collection::Outbox: append_values(out, s.outbox); break;
    case Collection::Sessions: append_values(out, s.sessions); break;
  }
  return out;
}

FileBackend::FileBackend(fs::path data_dir) : dir_(std::move(data_dir)) {
  std::error_code ec;
  if (fs::exists(dir_, ec) && !fs::is_directory(dir_, ec)) {
    throw std::runtime_error("data dir " + dir_.string() + " is not a directory");
  }
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create data dir " + dir_.string() + ": " + ec.message());
  if (::access(dir_.c_str(), W_OK | X_OK) != 0) {
    throw std::runtime_error("data dir " + dir_.string() + " is not writable");
  }
}

fs::path FileBackend::file_for(Collection c) const {
  return dir_ / (std::string(collection_name(c)) + ".jsonl");
}

// Multi-file commits: every dirty collection is first written to <file>.tmp,
// then the list of files is published in commit.pending (itself via rename),
// then the tmp files are renamed into place and the marker removed. A commit
// whose marker exists is rolled forward on load; stray tmp files without a
// marker belong to an unpublished commit and are discarded.
void FileBackend::recover() {
  const fs::path marker = dir_ / kCommitMarker;
  if (fs::exists(marker)) {
    std::ifstream in(marker);
    std::string name;
    while (std::getline(in, name)) {
      if (name.empty()) continue;
      const fs::path tmp = dir_ / (name + ".tmp");
      if (fs::exists(tmp)) fs::rename(tmp, dir_ / name);
    }
    in.close();
    fs::remove(marker);
    fsync_dir(dir_);
  }
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto ext = entry.path().extension();
    if (ext == ".tmp" || ext == ".staging") fs::remove(entry.path());
  }
}

StoreSnapshot FileBackend::load() {
  recover();
  StoreSnapshot s;
  auto present = [&](Collection c) { return fs::exists(file_for(c)); };

  if (present(Collection::Users)) read_collection<UserAccount>(file_for(Collection::Users), Collection::Users, keyed_insert(s.users));
  if (present(Collection::Requests)) read_collection<FavorRequest>(file_for(Collection::Requests), Collection::Requests, keyed_insert(s.requests));
  if (present(Collection::Engagements)) read_collection<Engagement>(file_for(Collection::Engagements), Collection::Engagements, keyed_insert(s.engagements));
  if (present(Collection::Badges)) {
    read_collection<trust::VerificationBadge>(
        file_for(Collection::Badges), Collection::Badges,
        [&](trust::VerificationBadge b, const std::string&, std::size_t) { s.badges.push_back(std::move(b)); });
  }
  if (present(Collection::Ratings)) read_collection<trust::ReputationRecord>(file_for(Collection::Ratings), Collection::Ratings, keyed_insert(s.ratings));
  if (present(Collection::Events)) read_collection<emergency::EmergencyEvent>(file_for(Collection::Events), Collection::Events, keyed_insert(s.events));
  if (present(Collection::Outbox)) read_collection<emergency::Notification>(file_for(Collection::Outbox), Collection::Outbox, keyed_insert(s.outbox));
  if (present(Collection::Sessions)) {
    read_collection<Session>(file_for(Collection::Sessions), Collection::Sessions,
                             [&](Session v, const std::string& file, std::size_t line) {
                               auto key = v.token;
                               if (!s.sessions.emplace(std::move(key), std::move(v)).second) {
                                 throw CorruptStore(file, line, "duplicate token");
                               }
                             });
  }
  check_integrity(s);
  return s;
}

void FileBackend::save(const StoreSnapshot& snapshot, CollectionSet dirty) {
  if (dirty.none()) return;
  std::string manifest;
  for (auto c : kAllCollections) {
    if (!dirty.test(static_cast<std::size_t>(c))) continue;
    const auto target = file_for(c);
    write_and_sync(target.string() + ".tmp", encode_collection(snapshot, c));
    manifest += target.filename().string() + "\n";
  }
  const fs::path marker = dir_ / kCommitMarker;
  write_and_sync(marker.string() + ".staging", manifest);
  fs::rename(marker.string() + ".staging", marker);
  fsync_dir(dir_);

  for (auto c : kAllCollections) {
    if (!dirty.test(static_cast<std::size_t>(c))) continue;
    const auto target = file_for(c);
    fs::rename(target.string() + ".tmp", target);
  }
  fs::remove(marker);
  fsync_dir(dir_);
}

}  // namespace f1
