#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace roadhazard {

// Obstacle classes in their fixed numeric order (alphabetical by name).
enum class Category : std::uint8_t {
  ManholeCover = 0,
  NonDirectionalCrack = 1,
  PineCone = 2,
  Pothole = 3,
  TreeBranch = 4,
  TruncatedDome = 5,
};

inline constexpr std::size_t kCategoryCount = 6;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::ManholeCover, Category::NonDirectionalCrack, Category::PineCone,
    Category::Pothole,      Category::TreeBranch,          Category::TruncatedDome,
};

constexpr int category_id(Category c) noexcept { return static_cast<int>(c); }
constexpr std::size_t category_index(Category c) noexcept { return static_cast<std::size_t>(c); }

/// snake_case identifier used in files and warning text, e.g. "pine_cone".
std::string_view category_name(Category c) noexcept;
/// Human label used in report tables, e.g. "Pine cone".
std::string_view category_label(Category c) noexcept;

std::optional<Category> category_from_id(long long id) noexcept;
std::optional<Category> category_from_name(std::string_view name) noexcept;

}  // namespace roadhazard
