#include "ctm/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ctm/error.hpp"

namespace ctm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, int line) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  std::string fixed(buf, ptr);
  // Keep two decimals when exact, otherwise the shortest round-trip form.
  if (parse_double(fixed, 0) == v) return fixed;
  auto [p2, ec2] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p2);
}

std::string format_entry(const Context& c, const std::optional<std::vector<double>>& probs) {
  std::string line = "context=" + c.label() + " p=";
  if (!probs) return line + "?";
  for (std::size_t i = 0; i < probs->size(); ++i) {
    if (i) line += ',';
    line += format_double((*probs)[i]);
  }
  return line;
}

ModelTemplate make_template(std::string name,
                            std::vector<std::pair<const char*, std::optional<std::vector<double>>>> rows) {
  ModelTemplate t;
  t.name = std::move(name);
  for (auto& [ctx, p] : rows) t.entries.push_back({Context::parse(ctx), std::move(p)});
  return t;
}

// Sequences are concatenations of "211" where each 1 independently becomes 0
// with probability 0.25.
ModelTemplate model3_template() {
  const std::vector<double> after_two{0.25, 0.75, 0.0};
  const std::vector<double> to_two{0.0, 0.0, 1.0};
  return make_template("model3", {{"2", after_two},
                                  {"00", to_two},
                                  {"10", to_two},
                                  {"20", after_two},
                                  {"01", to_two},
                                  {"11", to_two},
                                  {"21", after_two}});
}

// model3 with rows 01 and 21 swapped and the mode of context 2 moved to 0.
ModelTemplate model4_template() {
  ModelTemplate t = model3_template();
  t.name = "model4";
  auto row = [&](const char* c) -> std::optional<std::vector<double>>& {
    auto ctx = Context::parse(c);
    return std::find_if(t.entries.begin(), t.entries.end(),
                        [&](const auto& e) { return e.context == ctx; })
        ->probs;
  };
  std::swap(row("01"), row("21"));
  row("2") = std::vector<double>{0.75, 0.25, 0.0};
  return t;
}

// Only contexts 01 and 21 are known for the first pair; the remaining rows
// and the full tree shape must come from a completed config file.
ModelTemplate model1_template() {
  return make_template("model1", {{"01", std::nullopt}, {"21", std::nullopt}});
}

ModelTemplate model2_template() {
  return make_template("model2", {{"01", std::vector<double>{0.25, 0.0, 0.75}},
                                  {"21", std::vector<double>{0.75, 0.0, 0.25}}});
}

}  // namespace

bool ModelTemplate::has_placeholders() const {
  return std::any_of(entries.begin(), entries.end(), [](const Entry& e) { return !e.probs; });
}

ContextTreeModel ModelTemplate::build() const {
  if (has_placeholders()) {
    throw Error(ErrorCode::kIncompleteModel, "model '" + name + "' has unfilled p=? entries");
  }
  std::vector<ContextDistribution> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) rows.push_back({e.context, *e.probs});
  try {
    return build_model(std::move(rows), alphabet_size, name);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::kNotComplete) {
      throw Error(ErrorCode::kIncompleteModel, "model '" + name + "': " + err.what());
    }
    throw;
  }
}

ModelTemplate parse_model_config(std::string_view text, std::string default_name) {
  ModelTemplate t;
  t.name = std::move(default_name);
  bool alphabet_given = false;
  std::optional<std::size_t> inferred_alphabet;

  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + why);
    };

    if (line.starts_with("name=")) {
      t.name = std::string(trim(line.substr(5)));
      continue;
    }
    if (line.starts_with("alphabet=")) {
      t.alphabet_size = static_cast<int>(parse_double(line.substr(9), line_no));
      alphabet_given = true;
      continue;
    }
    if (!line.starts_with("context=")) throw bad("expected 'context=...'");
    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) throw bad("missing 'p=' field");
    const Context ctx = Context::parse(trim(line.substr(8, space - 8)));
    std::string_view rest = trim(line.substr(space));
    if (!rest.starts_with("p=")) throw bad("missing 'p=' field");
    rest = trim(rest.substr(2));

    ModelTemplate::Entry entry{ctx, std::nullopt};
    if (rest != "?") {
      std::vector<double> probs;
      std::size_t start = 0;
      while (true) {
        const auto comma = rest.find(',', start);
        probs.push_back(parse_double(rest.substr(start, comma == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : comma - start),
                                     line_no));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (inferred_alphabet && *inferred_alphabet != probs.size()) {
        throw bad("inconsistent vector length");
      }
      inferred_alphabet = probs.size();
      entry.probs = std::move(probs);
    }
    t.entries.push_back(std::move(entry));
  }
  if (!alphabet_given && inferred_alphabet) t.alphabet_size = static_cast<int>(*inferred_alphabet);
  if (t.entries.empty()) throw Error(ErrorCode::kParseError, "no context lines");
  return t;
}

ModelTemplate read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string stem = path.filename().string();
  if (auto dot = stem.find('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_model_config(ss.str(), stem);
}

std::string format_model_config(const ModelTemplate& model) {
  std::string out = "name=" + model.name + "\nalphabet=" + std::to_string(model.alphabet_size) + "\n";
  for (const auto& e : model.entries) out += format_entry(e.context, e.probs) + "\n";
  return out;
}

std::string format_model_config(const ContextTreeModel& model) {
  ModelTemplate t;
  t.name = model.name();
  t.alphabet_size = model.alphabet_size();
  for (std::size_t i = 0; i < model.tree().size(); ++i) {
    t.entries.push_back({model.tree().contexts()[i], model.transitions()[i]});
  }
  return format_model_config(t);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"model1", "model2", "model3", "model4"};
  return names;
}

ModelTemplate preset_template(std::string_view name) {
  if (name == "model1") return model1_template();
  if (name == "model2") return model2_template();
  if (name == "model3") return model3_template();
  if (name == "model4") return model4_template();
  throw Error(ErrorCode::kUnknownPreset, std::string(name));
}

ContextTreeModel preset_model(std::string_view name) { return preset_template(name).build(); }

std::filesystem::path default_model_dir() {
  if (const char* dir = std::getenv("CTM_MODEL_DIR"); dir && *dir) return dir;
  return "models";
}

ContextTreeModel load_model(std::string_view name_or_path, const std::filesystem::path& model_dir) {
  const std::string spec(name_or_path);
  const auto& presets = preset_names();
  if (std::find(presets.begin(), presets.end(), spec) != presets.end()) {
    const auto override_path = model_dir / (spec + ".ctm");
    std::error_code ec;
    if (std::filesystem::is_regular_file(override_path, ec)) {
      return read_model_file(override_path).build();
    }
    return preset_model(spec);
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return read_model_file(spec).build();
  if (spec.find('/') == std::string::npos && spec.find('.') == std::string::npos) {
    throw Error(ErrorCode::kUnknownPreset, spec);
  }
  throw Error(ErrorCode::kIo, "no such model file: " + spec);
}

}  // namespace ctm
