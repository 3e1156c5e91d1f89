#include "ctm/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ctm/agents.hpp"
#include "ctm/error.hpp"
#include "ctm/format.hpp"
#include "ctm/group_stats.hpp"
#include "ctm/mode_tree.hpp"
#include "ctm/model_io.hpp"
#include "ctm/montecarlo.hpp"
#include "ctm/parallel.hpp"
#include "ctm/simulate.hpp"
#include "ctm/stationary.hpp"

namespace ctm {
namespace {

constexpr double kWidth = 720, kHeight = 360, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) { return format_number(v, 6); }

std::string svg_open(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  return os.str();
}

std::string axes(double y_min, double y_max) {
  std::ostringstream os;
  const double bottom = kHeight - kBottom;
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << bottom
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << bottom << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y_min + (y_max - y_min) * i / 4.0;
    const double y = bottom - (bottom - kTop) * i / 4.0;
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  return os.str();
}

double y_pos(double v, double y_min, double y_max) {
  const double bottom = kHeight - kBottom;
  return bottom - (bottom - kTop) * (v - y_min) / (y_max - y_min);
}

std::vector<double> mean_curve(const std::vector<const std::vector<double>*>& curves) {
  std::vector<double> out(curves.front()->size(), 0.0);
  for (const auto* c : curves)
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += (*c)[t];
  for (auto& v : out) v /= static_cast<double>(curves.size());
  return out;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::vector<Series>& series,
                          const std::vector<std::pair<std::string, double>>& reference_lines) {
  std::ostringstream os;
  os << svg_open(title) << axes(0.0, 1.0);
  std::size_t n = 1;
  for (const auto& s : series) n = std::max(n, s.y.size());
  const double span = kWidth - kLeft - kRight;
  auto x_pos = [&](std::size_t t) { return kLeft + span * (n == 1 ? 0.0 : double(t - 1) / double(n - 1)); };
  for (std::size_t i = 0; i < reference_lines.size(); ++i) {
    const double y = y_pos(reference_lines[i].second, 0.0, 1.0);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << fmt(y)
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n"
       << "<text x=\"" << kWidth - kRight << "\" y=\"" << fmt(y - 3) << "\" text-anchor=\"end\" fill=\"gray\">"
       << reference_lines[i].first << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, s.y.size() / 200);
    for (std::size_t t = 1; t <= s.y.size(); t += stride) {
      os << fmt(x_pos(t)) << ',' << fmt(y_pos(s.y[t - 1], 0.0, 1.0)) << ' ';
    }
    if (!s.y.empty()) os << fmt(x_pos(s.y.size())) << ',' << fmt(y_pos(s.y.back(), 0.0, 1.0));
    os << "\"/>\n<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 * (k + 1) << "\" fill=\"" << color << "\">"
       << s.label << "</text>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">trial</text>\n</svg>\n";
  return os.str();
}

std::string box_plot_svg(const std::string& title, const std::vector<std::string>& groups,
                         const std::vector<std::vector<std::vector<double>>>& values) {
  std::ostringstream os;
  os << svg_open(title) << axes(0.0, 1.0);
  const std::size_t windows = values.empty() ? 0 : values.front().size();
  const double span = kWidth - kLeft - kRight;
  const double slot = windows ? span / double(windows) : span;
  const double box_w = slot / double(groups.size() + 1);
  for (std::size_t j = 0; j < windows; ++j) {
    const double x0 = kLeft + slot * double(j);
    os << "<text x=\"" << fmt(x0 + slot / 2) << "\" y=\"" << kHeight - kBottom + 16
       << "\" text-anchor=\"middle\">" << j + 1 << "</text>\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& v = values[g][j];
      if (v.empty()) continue;
      const char* color = kColors[g % std::size(kColors)];
      const double q1 = sample_quantile(v, 0.25), q2 = sample_quantile(v, 0.5), q3 = sample_quantile(v, 0.75);
      const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
      const double left = x0 + box_w * (double(g) + 0.5), mid = left + box_w / 2;
      os << "<line x1=\"" << fmt(mid) << "\" y1=\"" << fmt(y_pos(lo, 0, 1)) << "\" x2=\"" << fmt(mid) << "\" y2=\""
         << fmt(y_pos(hi, 0, 1)) << "\" stroke=\"" << color << "\"/>\n"
         << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(y_pos(q3, 0, 1)) << "\" width=\"" << fmt(box_w)
         << "\" height=\"" << fmt(y_pos(q1, 0, 1) - y_pos(q3, 0, 1)) << "\" fill=\"white\" stroke=\"" << color
         << "\"/>\n"
         << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y_pos(q2, 0, 1)) << "\" x2=\"" << fmt(left + box_w)
         << "\" y2=\"" << fmt(y_pos(q2, 0, 1)) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 * (g + 1) << "\" fill=\""
       << kColors[g % std::size(kColors)] << "\">" << groups[g] << "</text>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">window</text>\n</svg>\n";
  return os.str();
}

std::map<std::string, std::string> build_report(const ReportOptions& options) {
  if (options.models.empty()) throw Error(ErrorCode::kInvalidArgument, "no models");
  if (options.participants_per_model == 0) throw Error(ErrorCode::kInvalidArgument, "no participants");
  if (options.agents.empty()) throw Error(ErrorCode::kInvalidArgument, "no agents");
  const auto model_dir = options.model_dir.empty() ? default_model_dir() : options.model_dir;
  const std::size_t groups = options.models.size();
  const std::size_t per = options.participants_per_model;

  std::vector<std::shared_ptr<const ContextTreeModel>> models;
  std::vector<StrategyDensities> densities;
  std::vector<std::vector<AgentSpec>> agents(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    models.push_back(std::make_shared<const ContextTreeModel>(load_model(options.models[g], model_dir)));
    densities.push_back(build_strategy_densities(*models[g], options.analysis.window_length,
                                                 options.density_replicates, options.seed + g, options.threads));
    for (const auto& a : options.agents) agents[g].push_back(parse_agent_spec(a, models[g]));
  }

  struct Participant {
    std::string id;
    std::size_t group;
    std::string agent;
    SessionAnalysis analysis;
  };
  std::vector<Participant> cohort(groups * per);
  AnalysisOptions inner = options.analysis;
  inner.threads = 1;
  parallel_for(cohort.size(), options.threads, [&](std::size_t i) {
    const std::size_t g = i / per, v = i % per;
    const std::uint64_t replicate = g * 100000 + v;
    const auto& agent = agents[g][v % agents[g].size()];
    PairedSample s;
    s.x = simulate(*models[g], options.trials, options.seed, kicker_stream(replicate));
    s.y = run_agent(agent, s.x, options.seed, replicate);
    char id[64];
    std::snprintf(id, sizeof id, "%s-p%02zu", options.models[g].c_str(), v + 1);
    auto& p = cohort[i];
    p.id = id;
    p.group = g;
    p.agent = options.agents[v % options.agents.size()];
    p.analysis = analyze_session(s, *models[g], &densities[g], inner, id);
    p.analysis.model = options.models[g];
  });

  std::map<std::string, std::string> files;

  std::string windows_csv = windows_csv_header();
  std::string cohort_csv = "participant,model,agent\n";
  for (const auto& p : cohort) {
    windows_csv += windows_csv_rows(p.analysis);
    cohort_csv += csv_field(p.id) + ',' + csv_field(options.models[p.group]) + ',' + csv_field(p.agent) + '\n';
  }
  files["windows.csv"] = windows_csv;
  files["cohort.csv"] = cohort_csv;

  const ScorePanel panel = panel_from_windows_csv(windows_csv, options.models);
  const auto excluded = exclude_negative_slope(panel);
  std::string slopes = "participant,model,slope,retained\n";
  for (std::size_t i = 0; i < panel.participants.size(); ++i) {
    const auto& p = panel.participants[i];
    slopes += csv_field(p.id) + ',' + csv_field(panel.groups[p.group]) + ',' + format_number(excluded.slopes[i]) +
              ',' + (excluded.kept[i] ? "true" : "false") + '\n';
  }
  files["slopes.csv"] = slopes;

  const auto table = mixed_anova(excluded.retained);
  files["anova.csv"] = to_csv(table);
  files["anova.json"] = to_json(table).dump(2) + "\n";
  files["pairwise.csv"] = to_csv(pairwise_tests(excluded.retained));

  nlohmann::json modes = nlohmann::json::array();
  const std::size_t windows = cohort.front().analysis.windows.size();
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t j = 0; j < windows; ++j) {
      std::vector<ContextTree> trees;
      for (const auto& p : cohort)
        if (p.group == g) trees.push_back(p.analysis.windows[j].tree.result.tree);
      const auto mode = mode_context_tree(trees, options.analysis.max_height, models[g]->alphabet_size());
      nlohmann::json contexts = nlohmann::json::array();
      for (const auto& c : mode.tree.contexts()) contexts.push_back(c.label());
      nlohmann::json freq = nlohmann::json::object();
      for (const auto& [w, f] : mode.frequency)
        if (f > 0) freq[w.label()] = f;
      modes.push_back({{"model", options.models[g]}, {"window", j + 1}, {"contexts", contexts}, {"frequency", freq}});
    }
  }
  files["mode_trees.json"] = modes.dump(2) + "\n";

  for (std::size_t g = 0; g < groups; ++g) {
    files["densities_" + options.models[g] + ".json"] = to_json(densities[g]).dump() + "\n";
  }

  std::vector<Series> curves;
  std::vector<std::pair<std::string, double>> refs;
  std::vector<std::vector<std::vector<double>>> box(groups, std::vector<std::vector<double>>(windows));
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<const std::vector<double>*> members;
    for (const auto& p : cohort) {
      if (p.group != g) continue;
      members.push_back(&p.analysis.cpcp);
      for (std::size_t j = 0; j < windows; ++j) box[g][j].push_back(p.analysis.windows[j].pcp);
    }
    curves.push_back({options.models[g], mean_curve(members)});
    refs.emplace_back(options.models[g] + " maximizing", cohort[g * per].analysis.maximizing_score);
  }
  files["cpcp.svg"] = line_plot_svg("Mean cumulative proportion of correct guesses", curves, refs);
  files["pcp_windows.svg"] = box_plot_svg("Proportion of correct guesses per window", options.models, box);
  return files;
}

void write_report(const std::map<std::string, std::string>& files, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (out_dir / name).string());
    out << content;
  }
}

}  // namespace ctm
