// ctmkit: batch entry points over the context-tree toolkit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ctm/agents.hpp"
#include "ctm/analysis.hpp"
#include "ctm/bic.hpp"
#include "ctm/error.hpp"
#include "ctm/format.hpp"
#include "ctm/game_service.hpp"
#include "ctm/group_stats.hpp"
#include "ctm/lr_test.hpp"
#include "ctm/mode_tree.hpp"
#include "ctm/model_io.hpp"
#include "ctm/report.hpp"
#include "ctm/session.hpp"
#include "ctm/simulate.hpp"
#include "ctm/strategy.hpp"

namespace {

using ctm::Error;
using ctm::ErrorCode;

struct Common {
  std::string format = "json";
  std::string out;
  int threads = 0;
  std::string model_dir;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + c.out);
  out << text;
}

std::filesystem::path model_dir(const Common& c) {
  return c.model_dir.empty() ? ctm::default_model_dir() : std::filesystem::path(c.model_dir);
}

std::shared_ptr<const ctm::ContextTreeModel> load(const Common& c, const std::string& name) {
  return std::make_shared<const ctm::ContextTreeModel>(ctm::load_model(name, model_dir(c)));
}

void add_format(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "Output file (default stdout)");
}

void add_threads(CLI::App* app, Common& c) {
  app->add_option("--threads", c.threads, "Worker threads (0 = OpenMP default)");
}

std::string estimation_csv(const ctm::EstimationResult& r) {
  std::string s = "context,count";
  for (int a = 0; a < r.tree.alphabet_size(); ++a) s += ",q" + std::to_string(a);
  s += '\n';
  for (std::size_t i = 0; i < r.tree.size(); ++i) {
    std::uint32_t total = 0;
    for (auto v : r.counts[i]) total += v;
    s += r.tree.contexts()[i].label() + ',' + std::to_string(total);
    for (double q : r.q[i]) s += ',' + ctm::format_number(q);
    s += '\n';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context tree models of a goalkeeper game: simulation, estimation and analysis"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--model-dir", c.model_dir, "Model directory (default $CTM_MODEL_DIR or ./models)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a kicker sequence");
  std::string model = "model3";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  sim->add_option("--model", model, "Preset name or config path");
  sim->add_option("--n", n, "Number of symbols");
  sim->add_option("--seed", seed, "RNG seed")->required();
  add_format(sim, c);

  // agent-run
  auto* arun = app.add_subcommand("agent-run", "Simulate a session of a synthetic goalkeeper");
  std::string agent = "matching";
  std::string session_format = "jsonl";
  arun->add_option("--model", model, "Kicker model");
  arun->add_option("--agent", agent, "matching | maximizing | uniform | undermatch:eps=E | self:rho=R | fixed:model=M");
  arun->add_option("--n", n, "Number of trials")->check(CLI::Range(1, 1000000));
  arun->add_option("--seed", seed, "RNG seed")->required();
  arun->add_option("--format", session_format, "Output format")->check(CLI::IsMember({"jsonl", "csv"}));
  arun->add_option("--out", c.out, "Output file (default stdout)");

  // estimate / tune
  std::string in;
  int L = 4;
  double penalty = 1.0;
  bool tune = false;
  std::vector<double> grid = ctm::default_penalty_grid();
  std::uint32_t min_count = 1;
  auto* est = app.add_subcommand("estimate", "Estimate the context tree of a session");
  est->add_option("--in", in, "Session (.jsonl or .csv)")->required();
  est->add_option("--L", L, "Maximal height")->check(CLI::Range(1, 16));
  est->add_option("--c", penalty, "BIC penalty constant");
  est->add_flag("--tune", tune, "Choose c on a chronological hold-out split");
  est->add_option("--grid", grid, "Penalty grid for --tune");
  est->add_option("--min-count", min_count, "Minimum N^X(w) for admissible nodes");
  add_format(est, c);
  add_threads(est, c);

  auto* tun = app.add_subcommand("tune", "Choose the BIC penalty on a hold-out split and refit");
  tun->add_option("--in", in, "Session (.jsonl or .csv)")->required();
  tun->add_option("--L", L, "Maximal height")->check(CLI::Range(1, 16));
  tun->add_option("--grid", grid, "Penalty grid");
  tun->add_option("--min-count", min_count, "Minimum N^X(w) for admissible nodes");
  add_format(tun, c);
  add_threads(tun, c);

  // lr-test
  int k_prime = 1, k = 1;
  double alpha = 0.05;
  auto* lr = app.add_subcommand("lr-test", "Likelihood-ratio test of independence from own past");
  lr->add_option("--in", in, "Session (.jsonl or .csv)")->required();
  lr->add_option("--kprime", k_prime, "Kicker memory k'")->check(CLI::Range(0, 8));
  lr->add_option("--k", k, "Own memory k")->check(CLI::Range(1, 8));
  lr->add_option("--alpha", alpha, "Level")->check(CLI::Range(0.0, 1.0));
  add_format(lr, c);

  // windows
  std::vector<std::string> inputs;
  std::string densities_path;
  std::optional<std::uint64_t> opt_seed;
  std::size_t replicates = 10000;
  ctm::AnalysisOptions aopt;
  auto* win = app.add_subcommand("windows", "Windowed analysis of sessions");
  win->add_option("--in", inputs, "Session files (.jsonl or .csv)")->required();
  win->add_option("--model", model, "Kicker model of the sessions");
  win->add_option("--densities", densities_path, "Strategy densities JSON (else built with --seed)");
  win->add_option("--seed", opt_seed, "Seed for building densities");
  win->add_option("--replicates", replicates, "Replicates when building densities");
  win->add_option("--length", aopt.window_length, "Window length");
  win->add_option("--step", aopt.window_step, "Window step");
  win->add_option("--L", aopt.max_height, "Maximal tree height per window")->check(CLI::Range(1, 16));
  add_format(win, c);
  add_threads(win, c);

  // densities
  std::size_t m = 250;
  double quantile = ctm::kUndermatchingQuantile;
  auto* den = app.add_subcommand("densities", "Simulate matching/maximizing score densities");
  den->add_option("--model", model, "Kicker model");
  den->add_option("--m", m, "Window length");
  den->add_option("--replicates", replicates, "Replicates per strategy");
  den->add_option("--seed", seed, "RNG seed")->required();
  den->add_option("--quantile", quantile, "Undermatching quantile of the matching sample")->check(CLI::Range(0.0, 1.0));
  den->add_option("--out", c.out, "Output file (default stdout)");
  add_threads(den, c);

  // classify
  std::vector<double> pcps;
  auto* cls = app.add_subcommand("classify", "Classify PCP values against stored densities");
  cls->add_option("--densities", densities_path, "Strategy densities JSON")->required();
  cls->add_option("--pcp", pcps, "PCP values")->required()->check(CLI::Range(0.0, 1.0));
  add_format(cls, c);

  // mode-tree
  int alphabet = ctm::kGoalkeeperAlphabet;
  auto* mt = app.add_subcommand("mode-tree", "Mode context tree of estimated trees");
  mt->add_option("--in", inputs, "Tree JSON files")->required();
  mt->add_option("--L", L, "Height of the full tree")->check(CLI::Range(0, 8));
  mt->add_option("--alphabet", alphabet, "Alphabet size")->check(CLI::Range(2, 10));
  add_format(mt, c);

  // anova
  bool no_exclusion = false;
  std::vector<std::string> group_order;
  auto* an = app.add_subcommand("anova", "Mixed ANOVA and pairwise tests on a windows CSV");
  an->add_option("--in", in, "Windows CSV")->required();
  an->add_option("--groups", group_order, "Model order (default first-seen)");
  an->add_flag("--no-exclusion", no_exclusion, "Keep participants with negative slope");
  add_format(an, c);

  // serve
  std::string host = "0.0.0.0";
  int port = 0;
  std::string session_dir;
  std::vector<std::size_t> breaks{334, 667};
  auto* srv = app.add_subcommand("serve", "Run the game HTTP service");
  srv->add_option("--host", host, "Bind address");
  srv->add_option("--port", port, "Port (default $CTM_PORT or 8080)");
  srv->add_option("--session-dir", session_dir, "Directory for session JSONL files");
  srv->add_option("--breaks", breaks, "Trials after which a rest break is due");
  srv->add_option("--replicates", replicates, "Density replicates for analysis");

  // report
  ctm::ReportOptions ropt;
  std::string out_dir;
  auto* rep = app.add_subcommand("report", "Synthetic cohort report: CSV, JSON and SVG");
  rep->add_option("--seed", ropt.seed, "RNG seed")->required();
  rep->add_option("--out", out_dir, "Output directory")->required();
  rep->add_option("--models", ropt.models, "Kicker models, one group each");
  rep->add_option("--participants", ropt.participants_per_model, "Participants per model")->check(CLI::Range(2, 1000));
  rep->add_option("--agents", ropt.agents, "Agent specs assigned in rotation");
  rep->add_option("--replicates", ropt.density_replicates, "Density replicates");
  add_threads(rep, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      const auto mdl = load(c, model);
      const auto x = ctm::simulate(*mdl, n, seed);
      if (c.format == "csv") {
        std::string s = "trial,x\n";
        for (std::size_t t = 0; t < x.size(); ++t) s += std::to_string(t + 1) + ',' + std::to_string(x[t]) + '\n';
        emit(c, s);
      } else {
        emit(c, nlohmann::json{{"model", mdl->name()}, {"seed", seed}, {"n", n}, {"x", x}}.dump() + "\n");
      }
    } else if (*arun) {
      const auto mdl = load(c, model);
      const auto spec = ctm::parse_agent_spec(agent, mdl);
      ctm::SessionRecord rec(ctm::SessionMeta{"agent-" + std::to_string(seed), mdl->name(), seed, 0});
      const auto x = ctm::simulate(*mdl, n, seed);
      const auto y = ctm::run_agent(spec, x, seed);
      for (std::size_t t = 0; t < n && t < ctm::kSessionTrials; ++t) rec.append_trial(x[t], y[t]);
      if (n > ctm::kSessionTrials) {
        std::string s = session_format == "csv" ? "trial,x,y\n" : rec.header_jsonl();
        for (std::size_t t = 0; t < n; ++t) {
          if (session_format == "csv") {
            s += std::to_string(t + 1) + ',' + std::to_string(x[t]) + ',' + std::to_string(y[t]) + '\n';
          } else {
            s += ctm::SessionRecord::trial_jsonl({t + 1, x[t], y[t], x[t] == y[t], 0});
          }
        }
        emit(c, s);
      } else {
        emit(c, session_format == "csv" ? rec.to_csv() : rec.to_jsonl());
      }
    } else if (*est || *tun) {
      const auto sample = ctm::load_session_file(in).sample();
      if (*tun || tune) {
        const auto r = ctm::tune_penalty(sample, L, grid, min_count, c.threads);
        emit(c, c.format == "csv" ? estimation_csv(r.result) : ctm::to_json(r).dump(2) + "\n");
      } else {
        const auto r = ctm::estimate_tree(sample, L, penalty, min_count);
        emit(c, c.format == "csv" ? estimation_csv(r) : ctm::to_json(r).dump(2) + "\n");
      }
    } else if (*lr) {
      const auto sample = ctm::load_session_file(in).sample();
      const auto d = ctm::lr_test(sample, k_prime, k, alpha);
      if (c.format == "csv") {
        const auto& r = d.result;
        emit(c, "statistic,df_nominal,df_realized,p_value,n_used,degenerate,alpha,reject\n" +
                    ctm::format_number(r.statistic) + ',' + std::to_string(r.df_nominal) + ',' +
                    std::to_string(r.df_realized) + ',' + ctm::format_number(r.p_value) + ',' +
                    std::to_string(r.n_used) + ',' + (r.degenerate ? "true" : "false") + ',' +
                    ctm::format_number(alpha) + ',' + (d.reject ? "true" : "false") + '\n');
      } else {
        emit(c, ctm::to_json(d).dump(2) + "\n");
      }
    } else if (*win) {
      const auto mdl = load(c, model);
      std::optional<ctm::StrategyDensities> densities;
      if (!densities_path.empty()) {
        densities = ctm::densities_from_json(nlohmann::json::parse(read_text(densities_path)), c.threads);
      } else if (opt_seed) {
        densities = ctm::build_strategy_densities(*mdl, aopt.window_length, replicates, *opt_seed, c.threads);
      } else {
        throw Error(ErrorCode::kInvalidArgument, "windows needs --densities or --seed to classify strategies");
      }
      aopt.threads = c.threads;
      std::string csv = ctm::windows_csv_header();
      auto list = nlohmann::json::array();
      for (const auto& path : inputs) {
        const auto rec = ctm::load_session_file(path);
        auto a = ctm::analyze_session(rec.sample(), *mdl, &*densities, aopt, rec.meta().id);
        if (!rec.meta().model.empty()) a.model = rec.meta().model;
        csv += ctm::windows_csv_rows(a);
        list.push_back(ctm::to_json(a));
      }
      emit(c, c.format == "csv" ? csv : list.dump(2) + "\n");
    } else if (*den) {
      const auto mdl = load(c, model);
      const auto d = ctm::build_strategy_densities(*mdl, m, replicates, seed, c.threads, quantile);
      emit(c, ctm::to_json(d).dump() + "\n");
    } else if (*cls) {
      const auto d = ctm::densities_from_json(nlohmann::json::parse(read_text(densities_path)));
      std::string csv = "pcp,strategy,matching_density,maximizing_density,undermatching_threshold\n";
      auto list = nlohmann::json::array();
      for (double p : pcps) {
        const auto s = ctm::classify_strategy(p, d);
        csv += ctm::format_number(p) + ',' + std::string(ctm::strategy_name(s.strategy)) + ',' +
               ctm::format_number(s.matching_density) + ',' + ctm::format_number(s.maximizing_density) + ',' +
               ctm::format_number(s.undermatching_threshold) + '\n';
        list.push_back({{"pcp", p},
                        {"strategy", ctm::strategy_name(s.strategy)},
                        {"matching_density", s.matching_density},
                        {"maximizing_density", s.maximizing_density},
                        {"undermatching_threshold", s.undermatching_threshold}});
      }
      emit(c, c.format == "csv" ? csv : list.dump(2) + "\n");
    } else if (*mt) {
      std::vector<ctm::ContextTree> trees;
      for (const auto& path : inputs) {
        const auto j = nlohmann::json::parse(read_text(path));
        if (j.is_array()) {
          for (const auto& e : j) trees.push_back(ctm::tree_from_json(e, alphabet));
        } else {
          trees.push_back(ctm::tree_from_json(j, alphabet));
        }
      }
      const auto mode = ctm::mode_context_tree(trees, L, alphabet);
      if (c.format == "csv") {
        std::string s = "node,frequency,context\n";
        for (const auto& [w, f] : mode.frequency) {
          s += w.label() + ',' + ctm::format_number(f) + ',' + (mode.tree.index_of(w) ? "true" : "false") + '\n';
        }
        emit(c, s);
      } else {
        nlohmann::json contexts = nlohmann::json::array();
        for (const auto& w : mode.tree.contexts()) contexts.push_back(w.label());
        nlohmann::json freq = nlohmann::json::object();
        for (const auto& [w, f] : mode.frequency) freq[w.label()] = f;
        emit(c, nlohmann::json{{"contexts", contexts}, {"frequency", freq}, {"trees", trees.size()}}.dump(2) + "\n");
      }
    } else if (*an) {
      const auto panel = ctm::panel_from_windows_csv(read_text(in), group_order);
      ctm::ScorePanel used = panel;
      std::vector<double> slopes;
      std::vector<bool> kept(panel.participants.size(), true);
      if (!no_exclusion) {
        auto ex = ctm::exclude_negative_slope(panel);
        used = std::move(ex.retained);
        slopes = std::move(ex.slopes);
        kept = std::move(ex.kept);
      }
      const auto table = ctm::mixed_anova(used);
      const auto tests = ctm::pairwise_tests(used);
      if (c.format == "csv") {
        emit(c, ctm::to_csv(table) + "\n" + ctm::to_csv(tests));
      } else {
        auto j = nlohmann::json{{"anova", ctm::to_json(table)}};
        auto excluded = nlohmann::json::array();
        for (std::size_t i = 0; i < kept.size(); ++i)
          if (!kept[i]) excluded.push_back(panel.participants[i].id);
        j["excluded"] = excluded;
        auto pw = nlohmann::json::array();
        for (const auto& t : tests) {
          pw.push_back({{"kind", t.kind},
                        {"label", t.label},
                        {"t", t.t},
                        {"df", t.df},
                        {"p", t.p},
                        {"p_adjusted", t.p_adjusted},
                        {"stars", ctm::significance_stars(t.p_adjusted)},
                        {"degenerate", t.degenerate}});
        }
        j["pairwise"] = pw;
        emit(c, j.dump(2) + "\n");
      }
    } else if (*srv) {
      ctm::ServiceConfig cfg;
      cfg.model_dir = model_dir(c);
      cfg.session_dir = session_dir;
      cfg.breaks = breaks;
      cfg.density_replicates = replicates;
      ctm::GameService service(cfg);
      const int p = port > 0 ? port : ctm::default_port();
      std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), p);
      ctm::serve(service, host, p);
    } else if (*rep) {
      ropt.threads = c.threads;
      ropt.model_dir = model_dir(c);
      ctm::write_report(ctm::build_report(ropt), out_dir);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "ctmkit: %s\n", e.what());
    return e.is_validation() ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "ctmkit: ParseError: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ctmkit: %s\n", e.what());
    return 1;
  }
  return 0;
}
