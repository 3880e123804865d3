#include "roadhazard/proximity_alert.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "roadhazard/error.hpp"

namespace roadhazard {

void AlertConfig::validate() const {
  if (!(threshold_m > 0.0)) raise(Errc::Config, "warning threshold must be positive");
  if (!(clear_margin_m >= 0.0)) raise(Errc::Config, "clear margin must be non-negative");
  if (min_consecutive < 1) raise(Errc::Config, "min_consecutive must be at least 1");
}

std::string warning_message(Category category, double distance_m) {
  return fmt::format("WARNING: {} {:.1f} m ahead", category_name(category), distance_m);
}

Assessment assess(std::span<const FusedDetection> fused, const AlertConfig& cfg, const AlertState& state,
                  FrameId frame_id) {
  cfg.validate();
  std::array<std::optional<double>, kCategoryCount> nearest{};
  for (const auto& f : fused) {
    if (!f.distance_m) continue;
    auto& slot = nearest[category_index(f.detection.category)];
    if (!slot || *f.distance_m < *slot) slot = *f.distance_m;
  }

  Assessment result;
  result.state = state;
  for (Category c : kAllCategories) {
    auto& alert = result.state.categories[category_index(c)];
    const auto& d = nearest[category_index(c)];
    if (!d) {
      alert = {};
      continue;
    }
    if (alert.active) {
      if (*d > cfg.threshold_m + cfg.clear_margin_m) alert = {};
    } else if (*d <= cfg.threshold_m) {
      if (++alert.consecutive >= cfg.min_consecutive) alert = {true, 0};
    } else {
      alert.consecutive = 0;
    }
    if (alert.active) result.events.push_back({frame_id, c, *d, warning_message(c, *d)});
  }
  return result;
}

}  // namespace roadhazard
