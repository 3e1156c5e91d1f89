#include <gtest/gtest.h>

#include "ctm/error.hpp"
#include "ctm/mode_tree.hpp"
#include "ctm/model_io.hpp"
#include "test_util.hpp"

namespace ctm {
namespace {

using test::tree_of;

TEST(ModeTree, IdenticalInputs) {
  const auto tau3 = preset_model("model3").tree();
  const std::vector<ContextTree> trees(5, tau3);
  const auto m = mode_context_tree(trees, 4);
  EXPECT_EQ(m.tree, tau3);
  for (const auto& c : tau3.contexts()) EXPECT_EQ(m.frequency.at(c), 1.0);
  EXPECT_EQ(m.frequency.at(Context{}), 0.0);
}

TEST(ModeTree, SingleInput) {
  const auto t = tree_of({"0", "01", "11", "21", "2"});
  const std::vector<ContextTree> trees{t};
  EXPECT_EQ(mode_context_tree(trees, 3).tree, t);
}

TEST(ModeTree, HandWorkedMajority) {
  const std::vector<ContextTree> trees{tree_of({"0", "1", "2"}), tree_of({"0", "1", "2"}), tree_of({"eps"})};
  const auto m = mode_context_tree(trees, 2);
  EXPECT_EQ(m.tree, tree_of({"0", "1", "2"}));
  EXPECT_NEAR(m.frequency.at(Context{}), 1.0 / 3, 1e-15);
  EXPECT_NEAR(m.frequency.at(Context::parse("1")), 2.0 / 3, 1e-15);
  EXPECT_EQ(m.frequency.size(), 1u + 3u + 9u);
}

TEST(ModeTree, TieKeepsShorterContext) {
  const std::vector<ContextTree> trees{tree_of({"0", "1", "2"}), tree_of({"eps"})};
  EXPECT_EQ(mode_context_tree(trees, 1).tree, tree_of({"eps"}));
}

TEST(ModeTree, OutputIsAlwaysValid) {
  const std::vector<ContextTree> trees{tree_of({"2", "00", "10", "20", "01", "11", "21"}),
                                       tree_of({"0", "1", "02", "12", "22"}),
                                       tree_of({"1", "2", "00", "10", "20"}),
                                       tree_of({"0", "1", "2"})};
  const auto m = mode_context_tree(trees, 3);
  EXPECT_TRUE(m.tree.is_complete());
  EXPECT_NO_THROW(ContextTree::make(m.tree.contexts(), 3));
}

TEST(ModeTree, Errors) {
  try {
    mode_context_tree(std::vector<ContextTree>{}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
  const std::vector<ContextTree> deep{tree_of({"2", "00", "10", "20", "01", "11", "21"})};
  EXPECT_THROW(mode_context_tree(deep, 1), Error);
}

}  // namespace
}  // namespace ctm
