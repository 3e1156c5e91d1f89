#include "ctm/session.hpp"

#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctm/error.hpp"

namespace ctm {
namespace {

std::vector<std::string_view> split_lines(std::string_view text, bool& last_terminated) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  last_terminated = text.empty() || text.back() == '\n';
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_symbol(long v, std::size_t row) {
  if (v < 0 || v >= kGoalkeeperAlphabet) {
    throw Error(ErrorCode::kBadSymbol, "row " + std::to_string(row) + ": symbol " + std::to_string(v));
  }
}

}  // namespace

std::string_view status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::kActive: return "active";
    case SessionStatus::kBreak: return "break";
    case SessionStatus::kFinished: return "finished";
  }
  return "?";
}

SessionStatus SessionRecord::status() const noexcept {
  if (trials_.size() >= kSessionTrials) return SessionStatus::kFinished;
  return on_break_ ? SessionStatus::kBreak : SessionStatus::kActive;
}

const TrialRecord& SessionRecord::append_trial(Symbol x, Symbol y, std::int64_t ms) {
  if (trials_.size() >= kSessionTrials) {
    throw Error(ErrorCode::kSessionFinished, "session " + meta_.id + " already has " +
                                                 std::to_string(kSessionTrials) + " trials");
  }
  if (x >= kGoalkeeperAlphabet || y >= kGoalkeeperAlphabet) {
    throw Error(ErrorCode::kBadSymbol, "trial " + std::to_string(trials_.size() + 1));
  }
  trials_.push_back({trials_.size() + 1, x, y, x == y, ms});
  return trials_.back();
}

std::size_t SessionRecord::score() const noexcept {
  std::size_t s = 0;
  for (const auto& t : trials_) s += t.ok;
  return s;
}

PairedSample SessionRecord::sample() const {
  PairedSample s;
  s.alphabet_size = kGoalkeeperAlphabet;
  s.x.reserve(trials_.size());
  s.y.reserve(trials_.size());
  for (const auto& t : trials_) {
    s.x.push_back(t.x);
    s.y.push_back(t.y);
  }
  return s;
}

std::string SessionRecord::header_jsonl() const {
  nlohmann::ordered_json h;
  h["session"] = meta_.id;
  h["model"] = meta_.model;
  h["seed"] = meta_.seed;
  h["created_ms"] = meta_.created_ms;
  return h.dump() + "\n";
}

std::string SessionRecord::trial_jsonl(const TrialRecord& trial) {
  nlohmann::ordered_json j;
  j["t"] = trial.t;
  j["x"] = trial.x;
  j["y"] = trial.y;
  j["ok"] = trial.ok;
  j["ms"] = trial.ms;
  return j.dump() + "\n";
}

std::string SessionRecord::to_jsonl() const {
  std::string out = header_jsonl();
  for (const auto& t : trials_) out += trial_jsonl(t);
  return out;
}

std::string SessionRecord::to_csv() const {
  std::string out = "trial,x,y\n";
  for (const auto& t : trials_) {
    out += std::to_string(t.t) + ',' + std::to_string(t.x) + ',' + std::to_string(t.y) + '\n';
  }
  return out;
}

SessionRecord parse_session_jsonl(std::string_view text, std::size_t* dropped) {
  bool terminated = true;
  auto lines = split_lines(text, terminated);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::kParseError, "empty session file");
  if (dropped) *dropped = 0;

  SessionRecord rec;
  try {
    const auto h = nlohmann::json::parse(lines[0]);
    rec.meta_.id = h.at("session").get<std::string>();
    rec.meta_.model = h.value("model", std::string{});
    rec.meta_.seed = h.value("seed", std::uint64_t{0});
    rec.meta_.created_ms = h.value("created_ms", std::int64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("session header: ") + e.what());
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const bool last = i + 1 == lines.size();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
      (void)j.at("t");
      (void)j.at("x");
      (void)j.at("y");
    } catch (const nlohmann::json::exception& e) {
      if (last) {
        if (dropped) *dropped = 1;
        break;
      }
      throw Error(ErrorCode::kParseError, "line " + std::to_string(i + 1) + ": " + e.what());
    }
    const auto t = j.at("t").get<long>();
    const auto x = j.at("x").get<long>();
    const auto y = j.at("y").get<long>();
    check_symbol(x, i + 1);
    check_symbol(y, i + 1);
    if (t != static_cast<long>(rec.trials_.size()) + 1) {
      throw Error(ErrorCode::kNonContiguousTrials, "line " + std::to_string(i + 1) + ": trial " + std::to_string(t));
    }
    rec.append_trial(static_cast<Symbol>(x), static_cast<Symbol>(y), j.value("ms", std::int64_t{0}));
  }
  return rec;
}

SessionRecord read_session(const std::filesystem::path& path, std::size_t* dropped) {
  return parse_session_jsonl(read_file(path), dropped);
}

SessionRecord parse_session_csv(std::string_view text, const std::string& id) {
  bool terminated = true;
  auto lines = split_lines(text, terminated);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "trial,x,y") {
    throw Error(ErrorCode::kParseError, "expected header 'trial,x,y'");
  }
  SessionRecord rec(SessionMeta{id, "", 0, 0});
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i + 1;
    long fields[3];
    std::string_view rest = lines[i];
    for (int f = 0; f < 3; ++f) {
      const auto comma = rest.find(',');
      std::string_view cell = rest.substr(0, comma);
      if ((f < 2 && comma == std::string_view::npos) || (f == 2 && comma != std::string_view::npos)) {
        throw Error(ErrorCode::kParseError, "row " + std::to_string(row) + ": expected 3 columns");
      }
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), fields[f]);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::kParseError, "row " + std::to_string(row) + ": bad integer '" + std::string(cell) + "'");
      }
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    check_symbol(fields[1], row);
    check_symbol(fields[2], row);
    if (fields[0] != static_cast<long>(rec.trials_.size()) + 1) {
      throw Error(ErrorCode::kNonContiguousTrials,
                  "row " + std::to_string(row) + ": trial " + std::to_string(fields[0]) + ", expected " +
                      std::to_string(rec.trials_.size() + 1));
    }
    rec.append_trial(static_cast<Symbol>(fields[1]), static_cast<Symbol>(fields[2]));
  }
  return rec;
}

SessionRecord import_csv(const std::filesystem::path& path) {
  return parse_session_csv(read_file(path), path.stem().string());
}

SessionRecord load_session_file(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return import_csv(path);
  return read_session(path);
}

SessionLog::SessionLog(const std::filesystem::path& path, const SessionRecord& record) {
  const bool fresh = !std::filesystem::exists(path);
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  if (fresh) {
    out_ << record.to_jsonl();
    out_.flush();
  }
}

void SessionLog::append(const TrialRecord& trial) {
  out_ << SessionRecord::trial_jsonl(trial);
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIo, "session log write failed");
}

}  // namespace ctm
