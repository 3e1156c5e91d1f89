#include "ctm/analysis.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ctm/error.hpp"
#include "ctm/format.hpp"
#include "ctm/stationary.hpp"

namespace ctm {
namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

SessionAnalysis analyze_session(const PairedSample& sample, const ContextTreeModel& model,
                                const StrategyDensities* densities, const AnalysisOptions& options,
                                std::string participant) {
  sample.validate();
  if (sample.size() < options.window_length) {
    throw Error(ErrorCode::kNotEnoughTrials, std::to_string(sample.size()) + " trials, need " +
                                                 std::to_string(options.window_length));
  }
  const auto summary = stationary_summary(model);

  SessionAnalysis out;
  out.participant = std::move(participant);
  out.model = model.name();
  out.n = sample.size();
  out.maximizing_score = summary.maximizing_score;
  out.matching_score = summary.matching_score;
  out.cpcp = cpcp_curve(sample);

  const WindowSpec spec{options.window_length, options.window_step, sample.size()};
  std::size_t index = 1;
  for (const auto& range : spec.ranges()) {
    WindowAnalysis w;
    w.index = index++;
    w.range = range;
    w.pcp = pcp(sample, range);
    w.normalized = normalized_pcp(w.pcp, summary.maximizing_score);
    w.logit = normalized_logit(w.pcp, summary.maximizing_score, range.size());
    if (densities) w.strategy = classify_strategy(w.pcp, *densities);
    const auto part = sample.slice(range.start - 1, range.end);
    w.tree = tune_penalty(part, options.max_height, options.penalty_grid, 1, options.threads);
    w.lr = lr_test(part, options.k_prime, options.k, options.alpha);
    out.windows.push_back(std::move(w));
  }
  return out;
}

nlohmann::json to_json(const SessionAnalysis& analysis) {
  nlohmann::json j;
  j["participant"] = analysis.participant;
  j["model"] = analysis.model;
  j["n"] = analysis.n;
  j["maximizing_score"] = analysis.maximizing_score;
  j["matching_score"] = analysis.matching_score;
  j["cpcp"] = analysis.cpcp;
  auto& windows = j["windows"] = nlohmann::json::array();
  for (const auto& w : analysis.windows) {
    nlohmann::json e;
    e["window"] = w.index;
    e["start"] = w.range.start;
    e["end"] = w.range.end;
    e["pcp"] = w.pcp;
    e["normalized"] = w.normalized;
    e["logit"] = w.logit;
    if (w.strategy) {
      e["strategy"] = strategy_name(w.strategy->strategy);
      e["matching_density"] = w.strategy->matching_density;
      e["maximizing_density"] = w.strategy->maximizing_density;
      e["undermatching_threshold"] = w.strategy->undermatching_threshold;
    } else {
      e["strategy"] = nullptr;
    }
    e["tree"] = to_json(w.tree.result);
    e["lr_test"] = to_json(w.lr);
    windows.push_back(std::move(e));
  }
  return j;
}

std::string windows_csv_header() {
  return "participant,model,window,pcp,normalized,logit,strategy,lr_p_value\n";
}

std::string windows_csv_rows(const SessionAnalysis& analysis) {
  std::ostringstream os;
  for (const auto& w : analysis.windows) {
    os << csv_field(analysis.participant) << ',' << csv_field(analysis.model) << ',' << w.index << ','
       << format_number(w.pcp) << ',' << format_number(w.normalized) << ',' << format_number(w.logit) << ','
       << (w.strategy ? std::string(strategy_name(w.strategy->strategy)) : std::string()) << ','
       << format_number(w.lr.result.p_value) << '\n';
  }
  return os.str();
}

ScorePanel panel_from_windows_csv(std::string_view text, const std::vector<std::string>& group_order) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kEmptyInput, "empty windows CSV");
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::kParseError, "missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_part = column("participant");
  const auto c_model = column("model");
  const auto c_window = column("window");
  const auto c_logit = column("logit");

  ScorePanel panel;
  panel.groups = group_order;
  std::map<std::string, std::size_t> participant_index;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kParseError, "row " + std::to_string(row) + ": expected " +
                                              std::to_string(header.size()) + " columns");
    }
    std::size_t window = 0;
    double z = 0.0;
    try {
      window = std::stoul(f[c_window]);
      z = std::stod(f[c_logit]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "row " + std::to_string(row) + ": bad number");
    }
    if (window == 0) throw Error(ErrorCode::kParseError, "row " + std::to_string(row) + ": window 0");

    auto g = std::find(panel.groups.begin(), panel.groups.end(), f[c_model]);
    if (g == panel.groups.end()) {
      if (!group_order.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + ": unknown model " + f[c_model]);
      }
      panel.groups.push_back(f[c_model]);
      g = panel.groups.end() - 1;
    }
    const auto group = static_cast<std::size_t>(g - panel.groups.begin());
    const std::string key = f[c_model] + '\x1f' + f[c_part];
    auto [it, fresh] = participant_index.emplace(key, panel.participants.size());
    if (fresh) panel.participants.push_back({f[c_part], group, {}});
    auto& z_values = panel.participants[it->second].z;
    if (z_values.size() < window) z_values.resize(window, std::numeric_limits<double>::quiet_NaN());
    z_values[window - 1] = z;
    panel.windows = std::max(panel.windows, window);
  }
  for (const auto& p : panel.participants) {
    if (p.z.size() != panel.windows ||
        std::any_of(p.z.begin(), p.z.end(), [](double v) { return std::isnan(v); })) {
      throw Error(ErrorCode::kInvalidArgument, "participant " + p.id + " lacks some windows");
    }
  }
  panel.validate();
  return panel;
}

}  // namespace ctm
