#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ctm/error.hpp"
#include "ctm/model_io.hpp"

namespace ctm {
namespace {

const std::filesystem::path kModels = CTM_SOURCE_DIR "/models";

TEST(ModelConfig, ParsesDirectivesAndComments) {
  const auto t = parse_model_config(
      "# comment\nname=toy\nalphabet=3\ncontext=0 p=0.5,0.5,0\ncontext=1 p=?  # unknown\ncontext=2 p=0,0,1\n");
  EXPECT_EQ(t.name, "toy");
  EXPECT_EQ(t.entries.size(), 3u);
  EXPECT_TRUE(t.has_placeholders());
  try {
    t.build();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteModel);
  }
}

TEST(ModelConfig, MissingContextsMeanIncomplete) {
  const auto t = parse_model_config("context=0 p=1,0,0\ncontext=1 p=0,1,0\n");
  try {
    t.build();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteModel);
  }
}

TEST(ModelConfig, RejectsGarbage) {
  EXPECT_THROW(parse_model_config("context=0 q=1,0,0\n"), Error);
  EXPECT_THROW(parse_model_config("alphabet=x\n"), Error);
  EXPECT_THROW(parse_model_config("context=0 p=1,zero,0\n"), Error);
}

TEST(ModelConfig, RoundTrip) {
  for (const char* name : {"model3", "model4"}) {
    const auto m = preset_model(name);
    const auto again = parse_model_config(format_model_config(m)).build();
    EXPECT_EQ(again.tree(), m.tree());
    EXPECT_EQ(again.transitions(), m.transitions());
    EXPECT_EQ(again.name(), m.name());
  }
}

TEST(Presets, ShippedFilesMatchBuiltins) {
  for (const char* name : {"model3", "model4"}) {
    const auto from_file = read_model_file(kModels / (std::string(name) + ".ctm")).build();
    const auto builtin = preset_model(name);
    EXPECT_EQ(from_file.tree(), builtin.tree()) << name;
    EXPECT_EQ(from_file.transitions(), builtin.transitions()) << name;
  }
  for (const char* name : {"model1", "model2"}) {
    const auto tmpl = read_model_file(kModels / (std::string(name) + ".ctm.in"));
    const auto builtin = preset_template(name);
    ASSERT_EQ(tmpl.entries.size(), builtin.entries.size());
    for (std::size_t i = 0; i < tmpl.entries.size(); ++i) {
      EXPECT_EQ(tmpl.entries[i].context, builtin.entries[i].context);
      EXPECT_EQ(tmpl.entries[i].probs, builtin.entries[i].probs);
    }
  }
}

TEST(Presets, PartialPresetsAreIncomplete) {
  for (const char* name : {"model1", "model2"}) {
    try {
      preset_model(name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIncompleteModel);
    }
  }
}

TEST(Presets, UnknownName) {
  try {
    load_model("model9", kModels);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownPreset);
  }
}

TEST(Presets, ModelDirOverridesPreset) {
  const auto dir = std::filesystem::temp_directory_path() / "ctm_model_override";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "model1.ctm");
    out << "name=model1\ncontext=0 p=0,1,0\ncontext=1 p=0,0,1\ncontext=2 p=1,0,0\n";
  }
  const auto m = load_model("model1", dir);
  EXPECT_EQ(m.name(), "model1");
  EXPECT_EQ(m.tree().size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(Presets, LoadsConfigPath) {
  const auto m = load_model((kModels / "model4.ctm").string(), kModels);
  EXPECT_EQ(m.name(), "model4");
}

}  // namespace
}  // namespace ctm
