#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "roadhazard/categories.hpp"
#include "roadhazard/depth_fusion.hpp"

namespace roadhazard {

struct AlertConfig {
  double threshold_m = 4.0;
  double clear_margin_m = 0.5;
  int min_consecutive = 1;

  void validate() const;
};

struct WarningEvent {
  FrameId frame_id = 0;
  Category category = Category::ManholeCover;
  double distance_m = 0.0;
  std::string message;
};

struct CategoryAlert {
  bool active = false;
  int consecutive = 0;  // frames in a row at or under the threshold while inactive
};

struct AlertState {
  std::array<CategoryAlert, kCategoryCount> categories{};
};

struct Assessment {
  std::vector<WarningEvent> events;
  AlertState state;
};

/// "WARNING: <name> <d.d> m ahead"
std::string warning_message(Category category, double distance_m);

// One event per category in WARNING for this frame, in category order. A
// category's distance is the nearest present distance among its detections.
Assessment assess(std::span<const FusedDetection> fused, const AlertConfig& cfg, const AlertState& state,
                  FrameId frame_id);

class AlertTracker {
 public:
  explicit AlertTracker(AlertConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  std::vector<WarningEvent> update(std::span<const FusedDetection> fused, FrameId frame_id) {
    auto result = assess(fused, cfg_, state_, frame_id);
    state_ = result.state;
    return std::move(result.events);
  }

  const AlertState& state() const noexcept { return state_; }
  const AlertConfig& config() const noexcept { return cfg_; }

 private:
  AlertConfig cfg_;
  AlertState state_;
};

}  // namespace roadhazard
