#include "roadhazard/categories.hpp"

namespace roadhazard {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kNames = {
    "manhole_cover", "non_directional_crack", "pine_cone", "pothole", "tree_branch", "truncated_dome",
};

constexpr std::array<std::string_view, kCategoryCount> kLabels = {
    "Manhole cover", "Non-directional crack", "Pine cone", "Pothole", "Tree branch", "Truncated dome",
};

}  // namespace

std::string_view category_name(Category c) noexcept { return kNames[category_index(c)]; }

std::string_view category_label(Category c) noexcept { return kLabels[category_index(c)]; }

std::optional<Category> category_from_id(long long id) noexcept {
  if (id < 0 || id >= static_cast<long long>(kCategoryCount)) return std::nullopt;
  return static_cast<Category>(id);
}

std::optional<Category> category_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Category>(i);
  return std::nullopt;
}

}  // namespace roadhazard
