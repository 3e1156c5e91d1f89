#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctm/context_tree.hpp"

namespace ctm {

// A model as read from a config file, possibly with `p=?` placeholders.
//
// File format, one directive per line, '#' starts a comment:
//
//   name=model3
//   alphabet=3
//   context=01 p=0.25,0.00,0.75
//   context=eps p=?
struct ModelTemplate {
  struct Entry {
    Context context;
    std::optional<std::vector<double>> probs;
  };

  std::string name;
  int alphabet_size = kGoalkeeperAlphabet;
  std::vector<Entry> entries;

  bool has_placeholders() const;

  // Completed model. Throws IncompleteModel when placeholders remain or the
  // listed contexts do not form a complete tree; other validation errors
  // propagate from build_model.
  ContextTreeModel build() const;
};

ModelTemplate parse_model_config(std::string_view text, std::string default_name = "custom");
ModelTemplate read_model_file(const std::filesystem::path& path);

std::string format_model_config(const ContextTreeModel& model);
std::string format_model_config(const ModelTemplate& model);

// Names of the built-in presets, in order.
const std::vector<std::string>& preset_names();

// model3/model4 are complete; model1/model2 are partial templates.
// Throws UnknownPreset.
ModelTemplate preset_template(std::string_view name);

// Complete preset model; throws IncompleteModel for model1/model2.
ContextTreeModel preset_model(std::string_view name);

// Directory searched for `<name>.ctm` overrides: $CTM_MODEL_DIR, else "models".
std::filesystem::path default_model_dir();

// Resolves a preset name or a config path. A `<name>.ctm` file in model_dir
// takes precedence over the built-in preset of the same name, which is how
// completed model1/model2 tables are supplied.
ContextTreeModel load_model(std::string_view name_or_path,
                            const std::filesystem::path& model_dir = default_model_dir());

}  // namespace ctm
