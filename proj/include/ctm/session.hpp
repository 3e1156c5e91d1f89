#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctm/context_tree.hpp"
#include "ctm/sample.hpp"

namespace ctm {

inline constexpr std::size_t kSessionTrials = 1000;

enum class SessionStatus { kActive, kBreak, kFinished };
std::string_view status_name(SessionStatus s);

struct TrialRecord {
  std::size_t t = 0;  // 1-based
  Symbol x = 0;       // kicker
  Symbol y = 0;       // goalkeeper
  bool ok = false;    // x == y
  std::int64_t ms = 0;
};

struct SessionMeta {
  std::string id;
  std::string model;
  std::uint64_t seed = 0;
  std::int64_t created_ms = 0;
};

// Ordered trials of one goalkeeper session, capped at kSessionTrials.
class SessionRecord {
 public:
  SessionRecord() = default;
  explicit SessionRecord(SessionMeta meta) : meta_(std::move(meta)) {}

  const SessionMeta& meta() const noexcept { return meta_; }
  const std::vector<TrialRecord>& trials() const noexcept { return trials_; }
  std::size_t size() const noexcept { return trials_.size(); }
  SessionStatus status() const noexcept;
  void set_break(bool pending) noexcept { on_break_ = pending; }

  // Throws SessionFinished at the cap, BadSymbol outside {0,1,2}.
  const TrialRecord& append_trial(Symbol x, Symbol y, std::int64_t ms = 0);

  std::size_t score() const noexcept;
  PairedSample sample() const;

  std::string header_jsonl() const;
  static std::string trial_jsonl(const TrialRecord& trial);
  std::string to_jsonl() const;
  std::string to_csv() const;

 private:
  friend SessionRecord parse_session_jsonl(std::string_view text, std::size_t* dropped);
  friend SessionRecord parse_session_csv(std::string_view text, const std::string& id);
  SessionMeta meta_;
  std::vector<TrialRecord> trials_;
  bool on_break_ = false;
};

// JSONL: one metadata header line, then one trial per line. An unparsable
// final line (a write cut short) is dropped and counted in *dropped.
SessionRecord parse_session_jsonl(std::string_view text, std::size_t* dropped = nullptr);
SessionRecord read_session(const std::filesystem::path& path, std::size_t* dropped = nullptr);

// CSV with header `trial,x,y`; trials must run 1, 2, 3, ...
// Errors: BadSymbol / NonContiguousTrials / ParseError, with the row number.
SessionRecord parse_session_csv(std::string_view text, const std::string& id = "imported");
SessionRecord import_csv(const std::filesystem::path& path);

// Reads .jsonl or .csv by extension.
SessionRecord load_session_file(const std::filesystem::path& path);

// Append-only JSONL file for one live session; one writer per file.
class SessionLog {
 public:
  SessionLog(const std::filesystem::path& path, const SessionRecord& record);
  void append(const TrialRecord& trial);

 private:
  std::ofstream out_;
};

}  // namespace ctm
